//! Exact F_p computations around the algebraic Singer construction: the
//! Steenrod algebra, its modules, the Singer functor and its Tate filtration,
//! Tate cohomology of `C_p`, extended-power towers, and Ext charts.

pub mod error;
pub mod gf;
pub mod steenrod;
pub mod amodule;
pub mod fixtures;
pub mod singer;
pub mod cyclic;
pub mod extpower;
pub mod ext;
pub mod tate_ss;
pub mod description;
pub mod suites;

pub use error::{Error, Result};
pub use gf::{binom_mod_p, Lin, Prime};
