//! Cohomology of the extended powers `Σ^n D_{C_p}(Σ^{-n} B)` as a tower in n,
//! the maps `Δ*` between stages, and the isomorphism `ω` onto `Σ^{-1} R_+(H^*(B))`.

use crate::amodule::AModule;
use crate::cyclic::{group_homology, permutation_module};
use crate::error::{Error, Result};
use crate::gf::{GradedVectorSpace, Lin, Prime};
use crate::singer::{SingerBasis, SingerElement};

/// `m = (p-1)/2`.
fn half(p: Prime) -> i64 {
    p.half() as i64
}

/// `α(q) = -(-1)^{mq} m!`, read as 1 at p = 2.
pub fn coeff_alpha(q: i64, p: Prime) -> u32 {
    if p.is_two() {
        return 1;
    }
    let m = half(p);
    p.neg(p.mul(p.sign(m * q), p.factorial(m as u32)))
}

/// `ν(2j + ε) = (-1)^j (m!)^ε`, read as 1 at p = 2.
pub fn coeff_nu(q: i64, p: Prime) -> u32 {
    if p.is_two() {
        return 1;
    }
    let (j, eps) = (q.div_euclid(2), q.rem_euclid(2));
    let f = if eps == 1 { p.factorial(half(p) as u32) } else { 1 };
    p.mul(p.sign(j), f)
}

/// Checks `α(q) ν(q-1)^{-1} = ν(q)^{-1}` and `ν(q+1) = -ν(q-1)` over `range`.
pub fn verify_coeff_identities(p: Prime, range: std::ops::RangeInclusive<i64>) -> Vec<String> {
    let mut out = Vec::new();
    for q in range {
        let lhs = p.mul(coeff_alpha(q, p), p.inv(coeff_nu(q - 1, p)));
        let rhs = p.inv(coeff_nu(q, p));
        if lhs != rhs {
            out.push(format!("alpha({q}) nu({})^-1 = {lhs} but nu({q})^-1 = {rhs} at p = {p}", q - 1));
        }
        let (a, b) = (coeff_nu(q + 1, p), p.neg(coeff_nu(q - 1, p)));
        if a != b {
            out.push(format!("nu({}) = {a} but -nu({}) = {b} at p = {p}", q + 1, q - 1));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtPowerKind {
    /// `Σ^n w_k ⊗ (Σ^{-n} a)^{⊗p}`
    Diagonal { k: i64, a: usize },
    /// `Σ^n w_0 ⊗` the orbit of a non-constant tuple
    Mixed { tuple: Vec<usize> },
}

/// A basis class in the cohomology of stage `n` of the tower.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtPowerClass {
    pub stage: i64,
    pub kind: ExtPowerKind,
}

impl ExtPowerClass {
    pub fn diagonal(stage: i64, k: i64, a: usize) -> ExtPowerClass {
        ExtPowerClass { stage, kind: ExtPowerKind::Diagonal { k, a } }
    }

    pub fn degree(&self, b: &AModule) -> i64 {
        let p = b.prime().value() as i64;
        let n = self.stage;
        match &self.kind {
            ExtPowerKind::Diagonal { k, a } => n + k + p * (b.degree_of(*a) - n),
            ExtPowerKind::Mixed { tuple } => n + tuple.iter().map(|&a| b.degree_of(a) - n).sum::<i64>(),
        }
    }

    pub fn name(&self, b: &AModule) -> String {
        let n = self.stage;
        match &self.kind {
            ExtPowerKind::Diagonal { k, a } => {
                format!("S^{n} w_{k}⊗(S^{}{})^{}", -n, b.name_of(*a), b.prime())
            }
            ExtPowerKind::Mixed { tuple } => {
                let t: Vec<String> = tuple.iter().map(|&a| format!("S^{}{}", -n, b.name_of(a))).collect();
                format!("S^{n} w_0⊗{}", t.join("⊗"))
            }
        }
    }
}

/// `Δ*` from stage n to stage n+1: the image class with its coefficient,
/// or `None` for mixed classes, which map to zero.
pub fn delta_star(c: &ExtPowerClass, b: &AModule) -> Result<Option<(ExtPowerClass, u32)>> {
    let p = b.prime();
    match &c.kind {
        ExtPowerKind::Mixed { .. } => Ok(None),
        ExtPowerKind::Diagonal { k, a } => {
            if *k < 0 {
                return Err(Error::Domain(format!("w-index {k} is negative")));
            }
            let q = b.degree_of(*a);
            let coeff = p.mul(p.sign(k + 1), coeff_alpha(q - c.stage, p));
            let next = ExtPowerClass::diagonal(c.stage + 1, k + p.value() as i64 - 1, *a);
            Ok(Some((next, coeff)))
        }
    }
}

/// `ω` on a diagonal class, as a multiple of a basis element of `Σ^{-1} R_+(H^*(B))`.
pub fn omega(c: &ExtPowerClass, b: &AModule) -> Result<SingerElement> {
    let p = b.prime();
    let ExtPowerKind::Diagonal { k, a } = c.kind else {
        return Err(Error::Domain("ω is defined on diagonal classes".into()));
    };
    if k < 0 {
        return Err(Error::Domain(format!("w-index {k} is negative")));
    }
    if a >= b.dim() {
        return Err(Error::Domain(format!("basis index {a} out of range")));
    }
    let n = c.stage;
    let q = b.degree_of(a);
    let (key, coeff) = if p.is_two() {
        (SingerBasis::new(0, k - n + q, a), 1)
    } else {
        let m = half(p);
        let nu_inv = p.inv(coeff_nu(q - n, p));
        if k % 2 == 0 {
            let r = k / 2 - m * n;
            (SingerBasis::new(0, r + m * q, a), p.mul(p.sign(q - n), nu_inv))
        } else {
            let r = (k + 1) / 2 - m * n;
            (SingerBasis::new(1, r + m * q - 1, a), p.mul(p.sign(q), nu_inv))
        }
    };
    Ok(SingerElement { desuspended: true, terms: Lin::single(key, coeff, p) })
}

/// Filtration cutoff matching stage n: `ω` maps stage n onto `F^{1-(p-1)n}`.
pub fn stage_cutoff(p: Prime, n: i64) -> i64 {
    1 - (p.value() as i64 - 1) * n
}

/// Diagonal classes of stage `n` in cohomological `degree`.
pub fn diagonal_classes(b: &AModule, n: i64, degree: i64) -> Vec<ExtPowerClass> {
    let p = b.prime().value() as i64;
    (0..b.dim())
        .filter_map(|a| {
            let k = degree - n - p * (b.degree_of(a) - n);
            (k >= 0).then(|| ExtPowerClass::diagonal(n, k, a))
        })
        .collect()
}

/// Mixed classes of stage `n` in cohomological `degree`, one per free orbit.
pub fn mixed_classes(b: &AModule, n: i64, degree: i64) -> Vec<ExtPowerClass> {
    let p = b.prime();
    let shifted = b.space().shifted(-n);
    let pm = permutation_module(&shifted, degree - n, p);
    pm.free_orbits
        .iter()
        .map(|orbit| ExtPowerClass { stage: n, kind: ExtPowerKind::Mixed { tuple: pm.tuples[orbit[0]].clone() } })
        .collect()
}

/// Checks that `ω` is a bijection from the diagonal classes of stage `n` in
/// degrees `window` onto the basis of `Σ^{-1} F^{1-(p-1)n} R_+` there, with
/// matching degrees. Returns the failures.
pub fn omega_bijection_failures(b: &AModule, n: i64, window: (i64, i64)) -> Vec<String> {
    let p = b.prime();
    let cutoff = stage_cutoff(p, n);
    let mut out = Vec::new();
    for d in window.0..=window.1 {
        let mut hit = Vec::new();
        for c in diagonal_classes(b, n, d) {
            match omega(&c, b) {
                Ok(e) => {
                    let (key, coeff) = e.terms.iter().next().map(|(k, c)| (*k, c)).expect("one term");
                    if coeff == 0 || e.degree_of(&key, b) != d {
                        out.push(format!("{} maps to degree {}", c.name(b), e.degree_of(&key, b)));
                    }
                    if key.fil(b) < cutoff {
                        out.push(format!("{} lands below filtration {cutoff}", c.name(b)));
                    }
                    hit.push(key);
                }
                Err(err) => out.push(format!("{}: {err}", c.name(b))),
            }
        }
        hit.sort();
        let mut want = crate::singer::basis_in_degree(b, d + 1, Some(cutoff));
        want.sort();
        if hit != want {
            out.push(format!("stage {n} degree {d}: image has {} elements, filtration piece {}", hit.len(), want.len()));
        }
    }
    out
}

/// `ω(Δ*(c)) = ω(c)` over stages `stages` and degrees `window`. Returns failures.
pub fn omega_tower_failures(b: &AModule, stages: std::ops::RangeInclusive<i64>, window: (i64, i64)) -> Vec<String> {
    let p = b.prime();
    let mut out = Vec::new();
    for n in stages {
        for d in window.0..=window.1 {
            for c in diagonal_classes(b, n, d) {
                let (next, coeff) = match delta_star(&c, b) {
                    Ok(Some(x)) => x,
                    Ok(None) => continue,
                    Err(e) => {
                        out.push(format!("{}: {e}", c.name(b)));
                        continue;
                    }
                };
                if next.degree(b) != d {
                    out.push(format!("Δ* moves {} to degree {}", c.name(b), next.degree(b)));
                }
                let (Ok(lhs), Ok(rhs)) = (omega(&next, b), omega(&c, b)) else {
                    out.push(format!("ω undefined near {}", c.name(b)));
                    continue;
                };
                let lhs = lhs.terms.scaled(coeff, p);
                if lhs != rhs.terms {
                    out.push(format!(
                        "stage {n}: ω(Δ*({})) = {} but ω = {}",
                        c.name(b),
                        SingerElement { desuspended: true, terms: lhs }.render(b),
                        rhs.render(b)
                    ));
                }
            }
            for c in mixed_classes(b, n, d) {
                if delta_star(&c, b).ok().flatten().is_some() {
                    out.push(format!("mixed class {} survives Δ*", c.name(b)));
                }
            }
        }
    }
    out
}

/// `dim H_T(D_{C_p} Y)` by counting: a free orbit in `H_*(Y)^{⊗p}` contributes
/// once (in group-homology degree 0), a diagonal class once per degree `j >= 0`.
pub fn homology_dim_by_orbits(y: &GradedVectorSpace, total: i64) -> usize {
    let p = y.prime();
    let Some(bottom) = y.basis().first().map(|b| b.degree) else { return 0 };
    let mut dim = 0;
    let pb = p.value() as i64 * bottom;
    for t in pb..=total {
        let pm = permutation_module(y, t, p);
        dim += pm.diagonal.len();
        if t == total {
            dim += pm.free_orbits.len();
        }
    }
    dim
}

/// The same dimension from group homology of the permutation modules.
pub fn homology_dim_by_group_homology(y: &GradedVectorSpace, total: i64) -> usize {
    let p = y.prime();
    let Some(bottom) = y.basis().first().map(|b| b.degree) else { return 0 };
    let mut dim = 0;
    for t in p.value() as i64 * bottom..=total {
        let pm = permutation_module(y, t, p);
        dim += group_homology(&pm.module, total - t).expect("j >= 0").dim();
    }
    dim
}

/// Filtration of the Singer basis element hit by a stage-n class with w-index k.
pub fn class_filtration(p: Prime, n: i64, k: i64) -> i64 {
    1 + k - (p.value() as i64 - 1) * n
}
