//! The Tate spectral sequence of `B^{∧p}` at the `E^2` page: terms,
//! collapse certificates, representatives of Singer classes, the filtration
//! comparison and the `Λ`-action.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::amodule::AModule;
use crate::cyclic::{permutation_module, tate_cohomology, tate_homology, LambdaElement, LambdaMonomial, LambdaRing};
use crate::extpower::coeff_nu;
use crate::gf::{BasisElement, Echelon, GradedVectorSpace, Prime};
use crate::singer::{basis_in_degree, SingerBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    /// `Ê^2_{s,t} = Ĥ^{-s}(C_p; H_t(B)^{⊗p})`, `d^r: (s,t) -> (s-r, t+r-1)`.
    Homological,
    /// `Ê_2^{s,t} = Ĥ_{-s}(C_p; H^t(B)^{⊗p})`, `d_r: (s,t) -> (s+r, t-r+1)`.
    Cohomological,
}

/// A diagonal class on the page: `u^i t^r ⊗ α^{⊗p}` (homological) or
/// `Σ x^i y^r ⊗ a^{⊗p}` (cohomological); at p = 2 only `r` is used, as the
/// exponent of `u` or `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PageClass {
    pub s: i64,
    pub t: i64,
    pub i: u8,
    pub r: i64,
    pub a: usize,
}

impl PageClass {
    pub fn label(&self, b: &GradedVectorSpace, variance: Variance) -> String {
        let p = b.prime();
        let name = b.name_of(self.a);
        let tensor = format!("{name}^{p}");
        match (variance, p.is_two()) {
            (Variance::Homological, true) => format!("u^{}.{tensor}", self.r),
            (Variance::Homological, false) => format!("u^{}t^{}.{tensor}", self.i, self.r),
            (Variance::Cohomological, true) => format!("Sx^{}.{tensor}", self.r),
            (Variance::Cohomological, false) => format!("Sx^{}y^{}.{tensor}", self.i, self.r),
        }
    }
}

/// The diagonal class of `a` in column `s`.
fn class_at(p: Prime, variance: Variance, s: i64, t: i64, a: usize) -> PageClass {
    let e = match variance {
        Variance::Homological => -s,
        Variance::Cohomological => s - 1,
    };
    if p.is_two() {
        PageClass { s, t, i: 0, r: e, a }
    } else {
        let i = e.rem_euclid(2);
        PageClass { s, t, i: i as u8, r: (e - i) / 2, a }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageCell {
    pub dim: usize,
    pub classes: Vec<PageClass>,
    /// Whether the diagonal classes are cycles and span the cell.
    pub diagonal_spans: bool,
}

/// One cell of the page, from the permutation module on `(B^{⊗p})_t`.
pub fn e2_term(b: &GradedVectorSpace, s: i64, t: i64, variance: Variance) -> PageCell {
    let p = b.prime();
    let pm = permutation_module(b, t, p);
    let group = match variance {
        Variance::Homological => tate_cohomology(&pm.module, -s),
        Variance::Cohomological => tate_homology(&pm.module, -s),
    };
    let dim = group.dim_in_degree(t);
    let n = pm.module.space().dim();
    let sigma = pm.module.sigma_matrix(t);
    let mut ech = Echelon::new(p, n);
    for part in group.parts.iter().filter(|x| x.degree == t) {
        for v in &part.image {
            ech.insert(v.clone());
        }
    }
    let mut independent = 0;
    let mut fixed = true;
    let mut classes = Vec::new();
    for &d in &pm.diagonal {
        let mut e = vec![0; n];
        e[d] = 1;
        fixed &= sigma.apply(&e) == e;
        if ech.insert(e) {
            independent += 1;
        }
        classes.push(class_at(p, variance, s, t, pm.tuples[d][0]));
    }
    PageCell { dim, classes, diagonal_spans: fixed && independent == dim && pm.diagonal.len() == dim }
}

#[derive(Debug, Clone)]
pub struct TateE2Page {
    pub prime: Prime,
    pub variance: Variance,
    pub b: GradedVectorSpace,
    pub s_window: (i64, i64),
    pub t_window: (i64, i64),
    pub cells: BTreeMap<(i64, i64), PageCell>,
}

pub const PAGE_HEADER: &str = "#singerlab-page v1";

impl TateE2Page {
    pub fn dim(&self, s: i64, t: i64) -> usize {
        self.cells.get(&(s, t)).map_or(0, |c| c.dim)
    }

    pub fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.cells.iter().filter(|(_, c)| c.dim > 0).map(|(k, c)| (*k, c.dim)).collect()
    }

    /// Tab-separated rows `s t dim labels` for the nonzero cells, sorted by `(s, t)`.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("{PAGE_HEADER}\n");
        for (&(s, t), c) in &self.cells {
            if c.dim > 0 {
                let labels: Vec<String> = c.classes.iter().map(|x| x.label(&self.b, self.variance)).collect();
                let _ = writeln!(out, "{s}\t{t}\t{}\t{}", c.dim, labels.join(","));
            }
        }
        out
    }
}

pub fn e2_page(b: &GradedVectorSpace, s_window: (i64, i64), t_window: (i64, i64), variance: Variance) -> TateE2Page {
    use rayon::prelude::*;
    let keys: Vec<(i64, i64)> =
        (s_window.0..=s_window.1).flat_map(|s| (t_window.0..=t_window.1).map(move |t| (s, t))).collect();
    let cells: Vec<PageCell> = keys.par_iter().map(|&(s, t)| e2_term(b, s, t, variance)).collect();
    TateE2Page {
        prime: b.prime(),
        variance,
        b: b.clone(),
        s_window,
        t_window,
        cells: keys.into_iter().zip(cells).collect(),
    }
}

/// A possible differential with nonzero source and target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DifferentialPair {
    pub r: i64,
    pub source: (i64, i64),
    pub target: (i64, i64),
}

/// Every `d^r`, `r >= 2`, between nonzero cells of `dims`, as far as the cells reach.
pub fn differential_pairs(dims: &BTreeMap<(i64, i64), usize>, variance: Variance) -> Vec<DifferentialPair> {
    let nonzero: BTreeSet<(i64, i64)> = dims.iter().filter(|(_, d)| **d > 0).map(|(k, _)| *k).collect();
    let mut out = Vec::new();
    for &(s, t) in &nonzero {
        for &(s2, t2) in &nonzero {
            let r = match variance {
                Variance::Homological => s - s2,
                Variance::Cohomological => s2 - s,
            };
            let expected = match variance {
                Variance::Homological => t + r - 1,
                Variance::Cohomological => t - r + 1,
            };
            if r >= 2 && t2 == expected {
                out.push(DifferentialPair { r, source: (s, t), target: (s2, t2) });
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollapseReport {
    /// Pairs inside a single building block: these would obstruct collapse.
    pub pairs: Vec<DifferentialPair>,
    /// Cells not spanned by diagonal classes, or where the blocks do not add up to the page.
    pub uncertified_cells: Vec<(i64, i64)>,
    /// Pairs joining different blocks; every class is a diagonal class, hence
    /// a permanent cycle by naturality, so these carry no differential.
    pub cross_block_pairs: usize,
}

impl CollapseReport {
    pub fn is_certified(&self) -> bool {
        self.pairs.is_empty() && self.uncertified_cells.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#collapse {}", if self.is_certified() { "certified" } else { "not-certified" });
        for d in &self.pairs {
            let _ = writeln!(out, "#pair\td{}\t{},{}\t{},{}", d.r, d.source.0, d.source.1, d.target.0, d.target.1);
        }
        for (s, t) in &self.uncertified_cells {
            let _ = writeln!(out, "#uncertified\t{s}\t{t}");
        }
        let _ = writeln!(out, "#cross-block-pairs\t{}", self.cross_block_pairs);
        out
    }
}

/// Collapse check for a page given as building blocks (one map of cell
/// dimensions per block) plus the cells known not to be diagonal.
pub fn certify_blocks(
    blocks: &[BTreeMap<(i64, i64), usize>],
    total: &BTreeMap<(i64, i64), usize>,
    variance: Variance,
) -> CollapseReport {
    let mut report = CollapseReport::default();
    let mut sum: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for blk in blocks {
        report.pairs.extend(differential_pairs(blk, variance));
        for (k, d) in blk {
            *sum.entry(*k).or_default() += d;
        }
    }
    let keys: BTreeSet<(i64, i64)> = sum.keys().chain(total.keys()).copied().collect();
    for k in keys {
        if sum.get(&k).copied().unwrap_or(0) != total.get(&k).copied().unwrap_or(0) {
            report.uncertified_cells.push(k);
        }
    }
    let all = differential_pairs(total, variance).len();
    report.cross_block_pairs = all.saturating_sub(report.pairs.len());
    report.pairs.sort();
    report
}

/// Splits the page of `B` into the pages of its one-class building blocks
/// and checks that none of them leaves room for a differential.
pub fn certify_collapse(b: &GradedVectorSpace, s_window: (i64, i64), t_window: (i64, i64), variance: Variance) -> CollapseReport {
    let p = b.prime();
    let page = e2_page(b, s_window, t_window, variance);
    let blocks: Vec<BTreeMap<(i64, i64), usize>> = (0..b.dim())
        .map(|a| {
            let one = GradedVectorSpace::tight(p, vec![BasisElement { degree: b.degree_of(a), name: b.name_of(a).to_string() }])
                .expect("one class");
            e2_page(&one, s_window, t_window, variance).dims()
        })
        .collect();
    let mut report = certify_blocks(&blocks, &page.dims(), variance);
    for (k, c) in &page.cells {
        if !c.diagonal_spans && !report.uncertified_cells.contains(k) {
            report.uncertified_cells.push(*k);
        }
    }
    report.uncertified_cells.sort();
    report
}

/// Where a Singer class sits on the page, and with what coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Representative {
    pub class: PageClass,
    pub coeff: u32,
}

/// `Σ x^i y^r ⊗ a ↦ (-1)^q ν(q) Σ x^i y^{r-mq} ⊗ a^{⊗p}` at `(1+i+2r-(p-1)q, pq)`;
/// at p = 2, `Σ x^r ⊗ a ↦ Σ x^{r-q} ⊗ a^{⊗2}` at `(1+r-q, 2q)`.
pub fn representative_cohomological(e: SingerBasis, m: &AModule) -> Representative {
    let p = m.prime();
    let pv = p.value() as i64;
    let q = m.degree_of(e.a);
    if p.is_two() {
        let class = PageClass { s: 1 + e.r - q, t: 2 * q, i: 0, r: e.r - q, a: e.a };
        return Representative { class, coeff: 1 };
    }
    let mm = (pv - 1) / 2;
    let s = 1 + e.i as i64 + 2 * e.r - (pv - 1) * q;
    let class = PageClass { s, t: pv * q, i: e.i, r: e.r - mm * q, a: e.a };
    Representative { class, coeff: p.mul(p.sign(q), coeff_nu(q, p)) }
}

/// `u^i t^r ⊗ α ↦ (-1)^q ν(q)^{-1} u^i t^{r+mq} ⊗ α^{⊗p}` at `(-i-2r-(p-1)q, pq)`;
/// at p = 2, `u^r ⊗ α ↦ u^{r+q} ⊗ α^{⊗2}` at `(-r-q, 2q)`.
pub fn representative_homological(i: u8, r: i64, a: usize, b: &GradedVectorSpace) -> Representative {
    let p = b.prime();
    let pv = p.value() as i64;
    let q = b.degree_of(a);
    if p.is_two() {
        let class = PageClass { s: -r - q, t: 2 * q, i: 0, r: r + q, a };
        return Representative { class, coeff: 1 };
    }
    let mm = (pv - 1) / 2;
    let s = -(i as i64) - 2 * r - (pv - 1) * q;
    let class = PageClass { s, t: pv * q, i, r: r + mm * q, a };
    Representative { class, coeff: p.mul(p.sign(q), p.inv(coeff_nu(q, p))) }
}

/// Singer basis elements of `m` in total degrees `degrees`.
fn singer_window(m: &AModule, degrees: (i64, i64)) -> Vec<SingerBasis> {
    (degrees.0..=degrees.1).flat_map(|d| basis_in_degree(m, d, None)).collect()
}

/// Compares membership in `F^n R_+(M)` with the filtration of the
/// representative, for every Singer basis element in `degrees`. Returns the mismatches.
pub fn filtration_compare(m: &AModule, n: i64, degrees: (i64, i64)) -> Vec<String> {
    let mut out = Vec::new();
    for e in singer_window(m, degrees) {
        let in_tate = e.fil(m) >= n;
        let rep = representative_cohomological(e, m);
        // the column of the representative, read off its own exponents
        let column = if m.prime().is_two() { 1 + rep.class.r } else { 1 + rep.class.i as i64 + 2 * rep.class.r };
        if column != rep.class.s {
            out.push(format!("{}: column {column} but placed at {}", e.name(m), rep.class.s));
        }
        if in_tate != (column >= n) {
            out.push(format!("{}: in F^{n} is {in_tate}, representative column {column}", e.name(m)));
        }
    }
    out
}

/// Checks that representatives give a bijection from Singer basis elements
/// in `degrees` onto the diagonal classes of the cohomological page in the
/// matching cells, with nonzero coefficients. Returns the failures.
pub fn representative_failures(m: &AModule, degrees: (i64, i64)) -> Vec<String> {
    let p = m.prime();
    let b = m.space();
    let mut out = Vec::new();
    let mut seen: BTreeMap<PageClass, String> = BTreeMap::new();
    let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
    for e in singer_window(m, degrees) {
        let rep = representative_cohomological(e, m);
        if rep.coeff == 0 {
            out.push(format!("{}: zero coefficient", e.name(m)));
        }
        if rep.class.s + rep.class.t != e.degree(m) {
            out.push(format!("{}: total degree {} on the page", e.name(m), rep.class.s + rep.class.t));
        }
        let cell = e2_term(b, rep.class.s, rep.class.t, Variance::Cohomological);
        if !cell.classes.contains(&rep.class) {
            out.push(format!("{}: class {} not on the page", e.name(m), rep.class.label(b, Variance::Cohomological)));
        }
        if let Some(prev) = seen.insert(rep.class, e.name(m)) {
            out.push(format!("{} and {prev} share a representative", e.name(m)));
        }
        cells.insert((rep.class.s, rep.class.t));
    }
    // surjective onto every class of the page in these total degrees
    let (lo, hi) = degrees;
    let t_range = p.value() as i64 * m.bottom().unwrap_or(0)..=p.value() as i64 * m.top().unwrap_or(-1);
    for t in t_range {
        for s in lo - t..=hi - t {
            for c in e2_term(b, s, t, Variance::Cohomological).classes {
                if !seen.contains_key(&c) {
                    out.push(format!("page class {} at ({s},{t}) is not hit", c.label(b, Variance::Cohomological)));
                }
            }
        }
    }
    out
}

/// Cells where the page dimension differs from the number of Singer basis
/// elements with filtration `s` and degree `s + t`.
pub fn singer_count_failures(m: &AModule, s_window: (i64, i64), t_window: (i64, i64)) -> Vec<String> {
    let page = e2_page(m.space(), s_window, t_window, Variance::Cohomological);
    let mut out = Vec::new();
    for (&(s, t), c) in &page.cells {
        let count = basis_in_degree(m, s + t, None).into_iter().filter(|e| e.fil(m) == s).count();
        if count != c.dim {
            out.push(format!("({s},{t}): page {} vs Singer {count}", c.dim));
        }
    }
    out
}

/// `λ · c` on the homological page, `c = u^i t^r ⊗ α^{⊗p}`.
pub fn lambda_action_on_page(lambda: &LambdaElement, c: &PageClass, p: Prime) -> Vec<(PageClass, u32)> {
    let ring = LambdaRing::new(p);
    let own = if p.is_two() { LambdaMonomial { u: c.r, t: 0 } } else { LambdaMonomial { u: c.i as i64, t: c.r } };
    let prod = ring.multiply(lambda, &crate::gf::Lin::single(own, 1, p));
    prod.iter()
        .map(|(mono, k)| {
            let class = if p.is_two() {
                PageClass { s: -mono.u, t: c.t, i: 0, r: mono.u, a: c.a }
            } else {
                PageClass { s: mono.degree(), t: c.t, i: mono.u as u8, r: mono.t, a: c.a }
            };
            (class, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u32, degs: &[i64]) -> GradedVectorSpace {
        let p = Prime::new(p).unwrap();
        let basis = degs.iter().enumerate().map(|(k, &d)| BasisElement { degree: d, name: format!("b{k}") }).collect();
        GradedVectorSpace::tight(p, basis).unwrap()
    }

    #[test]
    fn one_class_gives_a_line_in_every_column() {
        for p in [2, 3, 5] {
            let b = space(p, &[0]);
            for s in -6..=6 {
                for v in [Variance::Homological, Variance::Cohomological] {
                    let c = e2_term(&b, s, 0, v);
                    assert_eq!(c.dim, 1);
                    assert!(c.diagonal_spans);
                }
            }
        }
    }

    #[test]
    fn free_orbit_is_invisible() {
        let b = space(2, &[0, 1]);
        for s in -3..=3 {
            assert_eq!(e2_term(&b, s, 1, Variance::Homological).dim, 0);
        }
        assert_eq!(e2_term(&b, 0, 3, Variance::Homological).dim, 0);
    }

    #[test]
    fn blocks_zero_five() {
        let b = space(2, &[0, 5]);
        let r = certify_collapse(&b, (-12, 12), (0, 12), Variance::Homological);
        assert!(r.is_certified(), "{r:?}");
        assert!(r.cross_block_pairs > 0);
    }

    #[test]
    fn adversarial_page_is_caught() {
        let blk = BTreeMap::from([((0, 0), 1), ((-2, 1), 1)]);
        let r = certify_blocks(std::slice::from_ref(&blk), &blk, Variance::Homological);
        assert_eq!(r.pairs, vec![DifferentialPair { r: 2, source: (0, 0), target: (-2, 1) }]);
        assert!(!r.is_certified());
    }

    #[test]
    fn representative_closed_forms() {
        let p = Prime::new(2).unwrap();
        let m = AModule::trivial(p, "a", 3);
        let rep = representative_cohomological(SingerBasis::new(0, 5, 0), &m);
        assert_eq!((rep.class.s, rep.class.t, rep.class.r, rep.coeff), (3, 6, 2, 1));
        let b = space(2, &[3]);
        let h = representative_homological(0, -1, 0, &b);
        assert_eq!((h.class.s, h.class.t, h.class.r), (-2, 6, 2));
        // q = 0: coefficient 1 at (-i-2r, 0)
        let b3 = space(3, &[0]);
        let h = representative_homological(1, 2, 0, &b3);
        assert_eq!((h.class.s, h.class.t, h.coeff), (-5, 0, 1));
    }

    #[test]
    fn lambda_shifts_columns() {
        let p = Prime::new(3).unwrap();
        let ring = LambdaRing::new(p);
        let c = PageClass { s: -2, t: 0, i: 0, r: 1, a: 0 };
        let out = lambda_action_on_page(&ring.t_pow(1), &c, p);
        assert_eq!(out, vec![(PageClass { s: -4, t: 0, i: 0, r: 2, a: 0 }, 1)]);
        assert_eq!(lambda_action_on_page(&ring.one(), &c, p), vec![(c, 1)]);
        let uc = lambda_action_on_page(&ring.u(), &c, p)[0].0;
        assert!(lambda_action_on_page(&ring.u(), &uc, p).is_empty());
    }
}
