//! The algebraic Singer construction `R_+(M)`, its Tate filtration, the map
//! `ε : R_+(M) → M`, and the homological side `R_+(M_*)` with `ε_*`.
//!
//! A basis element `SingerBasis { i, r, a }` stands for `Σ x^r ⊗ a` when
//! p = 2 (with `i = 0`) and for `Σ x^i y^r ⊗ a` when p is odd. Degrees are
//! those of `R_+(M)`, one above the additive form `P(x^±) ⊗ M`.

use std::fmt;

use crate::amodule::{AModule, AModuleMap, ActionValue};
use crate::error::{Error, Result};
use crate::gf::{binom_mod_p, BasisElement, GradedLinearMap, GradedVectorSpace, Lin, Prime};
use crate::steenrod::Gen;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingerBasis {
    pub i: u8,
    pub r: i64,
    pub a: usize,
}

impl SingerBasis {
    pub fn new(i: u8, r: i64, a: usize) -> SingerBasis {
        SingerBasis { i, r, a }
    }

    pub fn degree(&self, m: &AModule) -> i64 {
        singer_degree(m.prime(), self.i, self.r, m.degree_of(self.a))
    }

    pub fn fil(&self, m: &AModule) -> i64 {
        singer_fil(m.prime(), self.i, self.r, m.degree_of(self.a))
    }

    pub fn name(&self, m: &AModule) -> String {
        let a = m.name_of(self.a);
        match (m.prime().is_two(), self.i) {
            (true, _) => format!("Sx^{}({a})", self.r),
            (false, 0) => format!("Sy^{}({a})", self.r),
            (false, _) => format!("Sxy^{}({a})", self.r),
        }
    }
}

pub fn singer_degree(p: Prime, i: u8, r: i64, q: i64) -> i64 {
    if p.is_two() {
        1 + r + q
    } else {
        1 + i as i64 + 2 * r + q
    }
}

/// Tate filtration degree.
pub fn singer_fil(p: Prime, i: u8, r: i64, q: i64) -> i64 {
    if p.is_two() {
        1 + r - q
    } else {
        1 + i as i64 + 2 * r - (p.value() as i64 - 1) * q
    }
}

fn act_checked(m: &AModule, g: Gen, a: usize) -> Result<Lin<usize>> {
    match m.act(g, a) {
        ActionValue::Zero => Ok(Lin::zero()),
        ActionValue::Nonzero(v) => Ok(v),
        ActionValue::BeyondWindow => Err(Error::WindowTruncation {
            what: format!("{g} on {}", m.name_of(a)),
            degree: m.degree_of(a) + g.degree(m.prime()),
            hi: m.window().1,
        }),
    }
}

fn push(out: &mut Lin<SingerBasis>, i: u8, r: i64, v: &Lin<usize>, c: u32, p: Prime) {
    if c == 0 {
        return;
    }
    for (a, d) in v.iter() {
        out.add_term(SingerBasis::new(i, r, *a), p.mul(c, d), p);
    }
}

/// Action of one generator on `Σ x^i y^r ⊗ a` in `R_+(M)`.
///
/// Operations pass the outer suspension with the sign `(-1)^{deg g}`, so at
/// odd primes β acts with the opposite sign from the desuspended form.
pub fn singer_action(g: Gen, e: SingerBasis, m: &AModule) -> Result<Lin<SingerBasis>> {
    let p = m.prime();
    let v = singer_action_desuspended(g, e, m)?;
    Ok(if g.degree(p) % 2 == 0 { v } else { v.scaled(p.neg(1), p) })
}

/// Action of one generator on `x^i y^r ⊗ a` in `Σ^{-1} R_+(M)`.
pub fn singer_action_desuspended(g: Gen, e: SingerBasis, m: &AModule) -> Result<Lin<SingerBasis>> {
    let p = m.prime();
    if !g.valid_for(p) {
        return Err(Error::Domain(format!("{g} is not an operation at p = {p}")));
    }
    let mut out = Lin::zero();
    let r = e.r;
    if p.is_two() {
        let Gen::Sq(s) = g else { unreachable!() };
        let s = s as i64;
        for j in 0..=s / 2 {
            let c = binom_mod_p(r - j, s - 2 * j, p);
            if c != 0 {
                let v = act_checked(m, Gen::Sq(j as u32), e.a)?;
                push(&mut out, 0, r + s - j, &v, c, p);
            }
        }
        return Ok(out);
    }
    let pm1 = p.value() as i64 - 1;
    let pv = p.value() as i64;
    match (g, e.i) {
        (Gen::Bockstein, 0) => {}
        (Gen::Bockstein, _) => out.add_term(SingerBasis::new(0, r + 1, e.a), 1, p),
        (Gen::P(s), 0) => {
            let s = s as i64;
            for j in 0..=s / pv {
                let c = binom_mod_p(r - pm1 * j, s - pv * j, p);
                let c2 = binom_mod_p(r - pm1 * j - 1, s - pv * j - 1, p);
                if c == 0 && c2 == 0 {
                    continue;
                }
                let pj = act_checked(m, Gen::P(j as u32), e.a)?;
                push(&mut out, 0, r + pm1 * (s - j), &pj, c, p);
                if c2 != 0 {
                    let mut bpj = Lin::zero();
                    for (b, k) in pj.iter() {
                        bpj.add_scaled(&act_checked(m, Gen::Bockstein, *b)?, k, p);
                    }
                    push(&mut out, 1, r + pm1 * (s - j) - 1, &bpj, c2, p);
                }
            }
        }
        (Gen::P(s), _) => {
            // x y^r ⊗ a with r = R - 1 in the x y^{R-1} form
            let s = s as i64;
            let big = r + 1;
            for j in 0..=s / pv {
                let c = binom_mod_p(big - pm1 * j - 1, s - pv * j, p);
                if c != 0 {
                    let pj = act_checked(m, Gen::P(j as u32), e.a)?;
                    push(&mut out, 1, big + pm1 * (s - j) - 1, &pj, c, p);
                }
            }
        }
        (Gen::Sq(_), _) => unreachable!(),
    }
    Ok(out)
}

/// `ε` on a basis element.
pub fn epsilon(e: SingerBasis, m: &AModule) -> Result<Lin<usize>> {
    let p = m.prime();
    let single = Lin::single(e.a, 1, p);
    if p.is_two() {
        let r = e.r + 1;
        if r < 0 {
            return Ok(Lin::zero());
        }
        return m.apply_word(&[Gen::Sq(r as u32)], &single);
    }
    let pm1 = p.value() as i64 - 1;
    if e.i == 0 {
        if e.r < 0 || e.r % pm1 != 0 {
            return Ok(Lin::zero());
        }
        let r = e.r / pm1;
        let v = m.apply_word(&[Gen::Bockstein, Gen::P(r as u32)], &single)?;
        Ok(v.scaled(p.neg(p.sign(r)), p))
    } else {
        if e.r + 1 < 0 || (e.r + 1) % pm1 != 0 {
            return Ok(Lin::zero());
        }
        let r = (e.r + 1) / pm1;
        let v = m.apply_word(&[Gen::P(r as u32)], &single)?;
        Ok(v.scaled(p.sign(r), p))
    }
}

/// An element of `R_+(M)`, or of `Σ^{-1} R_+(M)` when `desuspended`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingerElement {
    pub desuspended: bool,
    pub terms: Lin<SingerBasis>,
}

impl SingerElement {
    pub fn degree_of(&self, e: &SingerBasis, m: &AModule) -> i64 {
        e.degree(m) - self.desuspended as i64
    }

    pub fn render(&self, m: &AModule) -> String {
        if self.terms.is_zero() {
            return "0".into();
        }
        let body = self
            .terms
            .iter()
            .map(|(e, c)| {
                let n = e.name(m);
                let n = if self.desuspended { n.trim_start_matches('S').to_string() } else { n };
                if c == 1 {
                    n
                } else {
                    format!("{c}*{n}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        body
    }
}

/// All basis elements of `R_+(M)` in `degree` with filtration at least `n`.
pub fn basis_in_degree(m: &AModule, degree: i64, n: Option<i64>) -> Vec<SingerBasis> {
    let p = m.prime();
    let mut out = Vec::new();
    for a in 0..m.dim() {
        let q = m.degree_of(a);
        if p.is_two() {
            out.push(SingerBasis::new(0, degree - 1 - q, a));
        } else {
            for i in 0..2u8 {
                let twice = degree - 1 - i as i64 - q;
                if twice.rem_euclid(2) == 0 {
                    out.push(SingerBasis::new(i, twice / 2, a));
                }
            }
        }
    }
    out.retain(|e| n.is_none_or(|n| e.fil(m) >= n));
    out.sort();
    out
}

/// `F^n R_+(M)` on a degree window, realized as a truncated module.
#[derive(Debug, Clone)]
pub struct SingerTruncation {
    base: AModule,
    n: i64,
    keys: Vec<SingerBasis>,
    module: AModule,
}

impl SingerTruncation {
    pub fn base(&self) -> &AModule {
        &self.base
    }
    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn module(&self) -> &AModule {
        &self.module
    }
    /// Basis keys, indexed as in `module()`.
    pub fn keys(&self) -> &[SingerBasis] {
        &self.keys
    }
    pub fn index_of(&self, e: &SingerBasis) -> Option<usize> {
        self.keys.binary_search_by(|k| self.key_order(k).cmp(&self.key_order(e))).ok()
    }

    fn key_order(&self, e: &SingerBasis) -> (i64, String) {
        (e.degree(&self.base), e.name(&self.base))
    }

    pub fn window(&self) -> (i64, i64) {
        self.module.window()
    }

    /// `ε` restricted to this truncation.
    pub fn epsilon_map(&self) -> Result<AModuleMap> {
        let mut cols = Vec::with_capacity(self.keys.len());
        for e in &self.keys {
            cols.push(epsilon(*e, &self.base)?.iter().map(|(a, c)| (*a, c)).collect());
        }
        let f = GradedLinearMap::new(self.module.space().clone(), self.base.space().clone(), 0, cols)?;
        AModuleMap::new(self.module.clone(), self.base.clone(), f)
    }

    /// Inclusion into a truncation with lower (or equal) cutoff and the same window.
    pub fn inclusion_into(&self, larger: &SingerTruncation) -> Result<AModuleMap> {
        if larger.n > self.n || larger.window() != self.window() || larger.base != self.base {
            return Err(Error::Domain("inclusion needs a lower cutoff over the same module and window".into()));
        }
        let cols = self
            .keys
            .iter()
            .map(|e| vec![(larger.index_of(e).expect("filtration is decreasing"), 1)])
            .collect();
        let f = GradedLinearMap::new(self.module.space().clone(), larger.module.space().clone(), 0, cols)?;
        AModuleMap::new(self.module.clone(), larger.module.clone(), f)
    }
}

/// Builds `F^n R_+(M)` in degrees `window.0..=window.1`.
pub fn rplus_truncation(m: &AModule, n: i64, window: (i64, i64)) -> Result<SingerTruncation> {
    let p = m.prime();
    let (lo, hi) = window;
    let mut keys = Vec::new();
    for d in lo..=hi {
        keys.extend(basis_in_degree(m, d, Some(n)));
    }
    let basis: Vec<BasisElement> =
        keys.iter().map(|e| BasisElement { name: e.name(m), degree: e.degree(m) }).collect();
    let space = GradedVectorSpace::new(p, basis, window)?;
    // the space sorts by (degree, name); keep keys in the same order
    keys.sort_by_key(|e| (e.degree(m), e.name(m)));
    let index = |e: &SingerBasis| space.index_of(&e.name(m));
    let mut actions = Vec::new();
    for (idx, e) in keys.iter().enumerate() {
        for g in Gen::all_up_to(p, hi - e.degree(m)) {
            let img = singer_action(g, *e, m)?;
            let mut v = Lin::zero();
            for (t, c) in img.iter() {
                let j = index(t).ok_or_else(|| {
                    Error::Domain(format!("{g} moves {} out of filtration {n}: {} deg {} fil {}", e.name(m), t.name(m), t.degree(m), t.fil(m)))
                })?;
                v.add_term(j, c, p);
            }
            actions.push(((g, idx), v));
        }
    }
    let module = AModule::new(space, actions, true)?;
    Ok(SingerTruncation { base: m.clone(), n, keys, module })
}

/// A homogeneous element of the homological Singer construction, as a
/// functional on `F^level R_+(M)` (all of `R_+(M)` when `level` is `None`).
///
/// `terms` is keyed by the cohomological basis element each dual basis
/// element pairs with: `u^r ⊗ α` pairs with `Σ x^{-r-1} ⊗ a` (p = 2) and
/// `u^{1-i} t^{-r} ⊗ α` with `Σ x^i y^{r-1} ⊗ a` (p odd).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSingerElement {
    pub degree: i64,
    pub level: Option<i64>,
    pub terms: Lin<SingerBasis>,
}

impl DualSingerElement {
    pub fn zero(degree: i64, level: Option<i64>) -> DualSingerElement {
        DualSingerElement { degree, level, terms: Lin::zero() }
    }

    /// The dual basis element `u^r ⊗ a*` (p = 2) or `u^i t^r ⊗ a*` (p odd).
    pub fn basis(m: &AModule, i: u8, r: i64, a: usize) -> DualSingerElement {
        let key = dual_key(m.prime(), i, r, a);
        let degree = key.degree(m);
        DualSingerElement { degree, level: None, terms: Lin::single(key, 1, m.prime()) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Drops the terms below filtration `n`.
    pub fn truncate(&self, m: &AModule, n: i64) -> DualSingerElement {
        let level = Some(self.level.map_or(n, |l| l.max(n)));
        let terms = self.terms.iter().filter(|(e, _)| e.fil(m) >= n).map(|(e, c)| (*e, c)).collect();
        DualSingerElement { degree: self.degree, level, terms }
    }

    /// `<d, e>` for a basis element of `R_+(M)`.
    pub fn pair(&self, e: &SingerBasis) -> u32 {
        self.terms.coeff(e)
    }

    pub fn render(&self, m: &AModule) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let p = m.prime();
        self.terms
            .iter()
            .map(|(e, c)| {
                let (i, r) = dual_exponents(p, e);
                let a = format!("{}*", m.name_of(e.a));
                let mono = if p.is_two() {
                    format!("u^{r}")
                } else if i == 0 {
                    format!("t^{r}")
                } else {
                    format!("u t^{r}")
                };
                if c == 1 {
                    format!("{mono}⊗{a}")
                } else {
                    format!("{c}*{mono}⊗{a}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Key of `u^r ⊗ a*` (p = 2) or `u^i t^r ⊗ a*` (p odd).
pub fn dual_key(p: Prime, i: u8, r: i64, a: usize) -> SingerBasis {
    if p.is_two() {
        SingerBasis::new(0, -r - 1, a)
    } else {
        SingerBasis::new(1 - i, -r - 1, a)
    }
}

/// `(i, r)` with the dual basis element written `u^r` (p = 2) or `u^i t^r`.
pub fn dual_exponents(p: Prime, e: &SingerBasis) -> (u8, i64) {
    if p.is_two() {
        (1, -e.r - 1)
    } else {
        (1 - e.i, -e.r - 1)
    }
}

/// `ε_*(a*)` as a functional on `F^level R_+(M)`.
pub fn epsilon_star(a: usize, m: &AModule, level: Option<i64>) -> Result<DualSingerElement> {
    let p = m.prime();
    let degree = m.degree_of(a);
    let mut terms = Lin::zero();
    for e in basis_in_degree(m, degree, level) {
        terms.add_term(e, epsilon(e, m)?.coeff(&a), p);
    }
    Ok(DualSingerElement { degree, level, terms })
}

/// `g_* d`, defined by `(g_* d)(e) = d(g e)`.
pub fn dual_singer_action(g: Gen, d: &DualSingerElement, m: &AModule) -> Result<DualSingerElement> {
    let p = m.prime();
    let degree = d.degree - g.degree(p);
    let mut terms = Lin::zero();
    if !d.is_zero() {
        for e in basis_in_degree(m, degree, d.level) {
            let mut c = 0;
            for (t, k) in singer_action(g, e, m)?.iter() {
                c = p.add(c, p.mul(k, d.pair(t)));
            }
            terms.add_term(e, c, p);
        }
    }
    Ok(DualSingerElement { degree, level: d.level, terms })
}

/// The closed form `Sq^s_*(u^r ⊗ α) = Σ_j C(-r-s-1, s-2j) u^{r+s-j} ⊗ Sq^j_*(α)`,
/// with `Sq^j_*` read off from the transposed action of `M`.
pub fn dual_sq_closed_form(s: u32, d: &DualSingerElement, m: &AModule) -> Result<DualSingerElement> {
    let p = m.prime();
    if !p.is_two() {
        return Err(Error::Domain("closed dual formula is for p = 2".into()));
    }
    let s = s as i64;
    let mut terms = Lin::zero();
    for (e, c) in d.terms.iter() {
        let (_, r) = dual_exponents(p, e);
        for j in 0..=s / 2 {
            let k = binom_mod_p(-r - s - 1, s - 2 * j, p);
            if k == 0 {
                continue;
            }
            // Sq^j_*(a*) = Σ_b <a*, Sq^j b> b*
            let target_q = m.degree_of(e.a) - j;
            for b in m.space().indices_in_degree(target_q) {
                let coeff = act_checked(m, Gen::Sq(j as u32), b)?.coeff(&e.a);
                if coeff != 0 {
                    terms.add_term(dual_key(p, 1, r + s - j, b), p.mul(p.mul(c, k), coeff), p);
                }
            }
        }
    }
    let mut out = DualSingerElement { degree: d.degree - s, level: None, terms };
    if let Some(n) = d.level {
        out = out.truncate(m, n);
    }
    Ok(out)
}

/// Outcome of the maximal-algebraic test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every nonzero coaction component lies within `deg(d) - bottom(M)`.
    FiniteCoaction,
    /// Degrees of all nonzero generator components, some beyond the horizon.
    NonzeroBeyondBound(Vec<i64>),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::FiniteCoaction => write!(f, "finite-coaction"),
            Verdict::NonzeroBeyondBound(v) => {
                let v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
                write!(f, "nonzero-beyond-bound [{}]", v.join(","))
            }
        }
    }
}

/// Scans the generator components `g_* d` with `1 <= deg g <= bound`.
///
/// Elements of the algebraic part have components only up to `deg(d) - bottom(M)`,
/// since their coaction factors through `M_*`.
pub fn maximal_algebraic_test(d: &DualSingerElement, m: &AModule, bound: i64) -> Result<Verdict> {
    let p = m.prime();
    let Some(bottom) = m.bottom() else { return Ok(Verdict::FiniteCoaction) };
    let horizon = d.degree - bottom;
    let mut nonzero = Vec::new();
    for g in Gen::all_up_to(p, bound) {
        if g.is_identity() {
            continue;
        }
        if !dual_singer_action(g, d, m)?.is_zero() {
            nonzero.push(g.degree(p));
        }
    }
    if nonzero.iter().all(|&s| s <= horizon) {
        Ok(Verdict::FiniteCoaction)
    } else {
        Ok(Verdict::NonzeroBeyondBound(nonzero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture_modules;
    use crate::gf::Matrix;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn action_examples() {
        let p = pr(2);
        let m = AModule::trivial(p, "a", 0);
        let e = SingerBasis::new(0, 1, 0);
        assert_eq!(singer_action(Gen::Sq(1), e, &m).unwrap(), Lin::single(SingerBasis::new(0, 2, 0), 1, p));
        for r in -5..5 {
            let e = SingerBasis::new(0, r, 0);
            assert_eq!(singer_action(Gen::Sq(0), e, &m).unwrap(), Lin::single(e, 1, p));
        }
        let p = pr(3);
        let m = AModule::trivial(p, "a", 0);
        for r in -4..4 {
            let e = SingerBasis::new(1, r - 1, 0);
            let b = singer_action_desuspended(Gen::Bockstein, e, &m).unwrap();
            assert_eq!(b, Lin::single(SingerBasis::new(0, r, 0), 1, p));
            let b = singer_action(Gen::Bockstein, e, &m).unwrap();
            assert_eq!(b, Lin::single(SingerBasis::new(0, r, 0), 2, p));
            assert!(singer_action(Gen::Bockstein, SingerBasis::new(0, r, 0), &m).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_examples() {
        let p = pr(2);
        let m = AModule::trivial(p, "a", 0);
        let t = rplus_truncation(&m, 1, (1, 3)).unwrap();
        let keys: Vec<(i64, i64)> = t.keys().iter().map(|e| (e.r, e.fil(&m))).collect();
        assert_eq!(keys, vec![(0, 1), (1, 2), (2, 3)]);
        let empty = rplus_truncation(&m, 100, (-10, 10)).unwrap();
        assert_eq!(empty.module().dim(), 0);
        // F^1 ⊆ F^0 commutes with the action
        let big = rplus_truncation(&m, 0, (1, 3)).unwrap();
        assert!(t.inclusion_into(&big).unwrap().linearity_failures().is_empty());
    }

    #[test]
    fn truncations_satisfy_adem_relations() {
        for p in [2, 3, 5] {
            let p = pr(p);
            for (name, m) in fixture_modules(p, 11, 3) {
                for n in [-3, 0, 2] {
                    let t = rplus_truncation(&m, n, (n - 8, n + 12)).unwrap();
                    let v = t.module().validate_action();
                    assert!(v.is_empty(), "p={p} {name} n={n}: {}", v[0]);
                }
            }
        }
    }

    #[test]
    fn window_stability() {
        let p = pr(3);
        for (_, m) in fixture_modules(p, 5, 2) {
            let small = rplus_truncation(&m, -2, (-4, 8)).unwrap();
            let large = rplus_truncation(&m, -2, (-6, 14)).unwrap();
            for ((g, i), v) in small.module().action_table() {
                let e = small.keys()[*i];
                let j = large.index_of(&e).unwrap();
                let mapped = v.map_keys(p, |k| large.index_of(&small.keys()[*k]).unwrap());
                assert_eq!(large.module().act(*g, j), ActionValue::Nonzero(mapped));
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        let p = pr(2);
        let m = AModule::trivial(p, "a", 0);
        assert_eq!(epsilon(SingerBasis::new(0, -1, 0), &m).unwrap(), Lin::single(0, 1, p));
        assert!(epsilon(SingerBasis::new(0, -2, 0), &m).unwrap().is_zero());
        // p = 3: Σ x y^1 ⊗ a has r = 1, so it maps to -P^1 a
        let p = pr(3);
        let m = ModuleBuilder::new(p)
            .element("a", 0)
            .element("c", 4)
            .action(Gen::P(1), "a", &[("c", 1)])
            .build()
            .unwrap();
        assert_eq!(epsilon(SingerBasis::new(1, 1, 0), &m).unwrap(), Lin::single(1, 2, p));
        assert_eq!(epsilon(SingerBasis::new(1, -1, 0), &m).unwrap(), Lin::single(0, 1, p));
    }

    use crate::amodule::ModuleBuilder;

    #[test]
    fn epsilon_is_a_linear_and_surjective() {
        for p in [2, 3, 5] {
            let p = pr(p);
            for (name, m) in fixture_modules(p, 21, 4) {
                let n = -(p.value() as i64 - 1) * 9 - 2;
                let t = rplus_truncation(&m, n, (-4, 14)).unwrap();
                let eps = t.epsilon_map().unwrap();
                let f = eps.linearity_failures();
                assert!(f.is_empty(), "p={p} {name}: {}", f[0]);
                for d in m.space().degrees() {
                    let mat = eps.map.matrix_in_degree(d);
                    assert_eq!(mat.rank(), m.space().dim_in_degree(d), "p={p} {name} degree {d}");
                }
            }
        }
    }

    #[test]
    fn filtration_is_respected() {
        for p in [2, 3] {
            let p = pr(p);
            for (_, m) in fixture_modules(p, 2, 2) {
                let mut prev: Option<SingerTruncation> = None;
                for n in (-4..=4).rev() {
                    let t = rplus_truncation(&m, n, (-6, 12)).unwrap();
                    if let Some(prev) = prev {
                        assert!(prev.inclusion_into(&t).unwrap().linearity_failures().is_empty());
                    }
                    prev = Some(t);
                }
            }
        }
    }

    #[test]
    fn filtration_is_exhaustive_and_hausdorff() {
        let p = pr(3);
        let m = crate::fixtures::random_module(p, 4);
        for d in -5..10 {
            let all = basis_in_degree(&m, d, None).len();
            assert_eq!(basis_in_degree(&m, d, Some(-100)).len(), all);
            assert_eq!(basis_in_degree(&m, d, Some(100)).len(), 0);
        }
    }

    #[test]
    fn epsilon_star_examples() {
        let p = pr(2);
        let m = AModule::trivial(p, "a", 0);
        let e = epsilon_star(0, &m, None).unwrap();
        assert_eq!(e, DualSingerElement::basis(&m, 1, 0, 0));
        assert_eq!(e.render(&m), "u^0⊗a*");
        let moore = crate::fixtures::standard(p).remove(1).1;
        // Sq^1_*(b*) = a*, so ε_*(b*) = u^0⊗b* + u^-1⊗a*
        let b = moore.space().index_of("b").unwrap();
        let a = moore.space().index_of("a").unwrap();
        let e = epsilon_star(b, &moore, None).unwrap();
        let mut want = Lin::zero();
        want.add_term(dual_key(p, 1, 0, b), 1, p);
        want.add_term(dual_key(p, 1, -1, a), 1, p);
        assert_eq!(e.terms, want);
    }

    #[test]
    fn epsilon_star_is_the_dual_of_epsilon() {
        for p in [2, 3, 5] {
            let p = pr(p);
            for (name, m) in fixture_modules(p, 3, 3) {
                for level in [None, Some(-3), Some(0)] {
                    let mut rows = Vec::new();
                    for a in 0..m.dim() {
                        let es = epsilon_star(a, &m, level).unwrap();
                        for e in basis_in_degree(&m, m.degree_of(a), level) {
                            assert_eq!(es.pair(&e), epsilon(e, &m).unwrap().coeff(&a), "{name}");
                        }
                        rows.push(es);
                    }
                    if level.is_none() {
                        // injective: the functionals in each degree are independent
                        for d in m.space().degrees() {
                            let keys = basis_in_degree(&m, d, None);
                            let r: Vec<Vec<u32>> = m
                                .space()
                                .indices_in_degree(d)
                                .map(|a| keys.iter().map(|e| rows[a].pair(e)).collect())
                                .collect();
                            let mat = Matrix::from_rows(p, keys.len(), &r);
                            assert_eq!(mat.rank(), r.len(), "{name}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_action_matches_closed_form() {
        let p = pr(2);
        for (name, m) in fixture_modules(p, 9, 4) {
            for a in 0..m.dim() {
                for r in -6..6 {
                    let d = DualSingerElement::basis(&m, 1, r, a);
                    for s in 0..10 {
                        let t = dual_singer_action(Gen::Sq(s), &d, &m).unwrap();
                        let c = dual_sq_closed_form(s, &d, &m).unwrap();
                        assert_eq!(t, c, "{name} r={r} s={s}");
                    }
                }
            }
        }
        let m = AModule::trivial(p, "a", 0);
        let d = DualSingerElement::basis(&m, 1, 3, 0);
        assert_eq!(dual_singer_action(Gen::Sq(0), &d, &m).unwrap(), d);
    }

    #[test]
    fn maximal_algebraic_examples() {
        let p = pr(2);
        let m = AModule::trivial(p, "a", 0);
        let d = DualSingerElement::basis(&m, 1, -1, 0);
        assert_eq!(maximal_algebraic_test(&d, &m, 16).unwrap(), Verdict::NonzeroBeyondBound(vec![1, 2, 4, 8, 16]));
        assert_eq!(
            maximal_algebraic_test(&DualSingerElement::zero(3, None), &m, 16).unwrap(),
            Verdict::FiniteCoaction
        );
        for p in [2, 3, 5] {
            let p = pr(p);
            for (name, m) in fixture_modules(p, 13, 3) {
                for a in 0..m.dim() {
                    let e = epsilon_star(a, &m, None).unwrap();
                    for bound in [4, 12] {
                        assert_eq!(maximal_algebraic_test(&e, &m, bound).unwrap(), Verdict::FiniteCoaction, "{name}");
                    }
                }
            }
        }
    }
}
