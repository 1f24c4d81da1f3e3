//! Graded modules over `F_p[C_p]`, Tate (co)homology from the periodic complete
//! resolution, permutation modules on `p`-fold tensor powers, and the ring
//! `Λ = Ĥ^{-*}(C_p; F_p)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{complement_in, BasisElement, GradedLinearMap, GradedVectorSpace, Lin, Matrix, Prime};

/// A graded `F_p[C_p]`-module: a space with the action of a chosen generator σ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpModule {
    space: GradedVectorSpace,
    sigma: GradedLinearMap,
}

impl CpModule {
    pub fn new(sigma: GradedLinearMap) -> Result<CpModule> {
        if sigma.source() != sigma.target() || sigma.degree_shift() != 0 {
            return Err(Error::InvalidModule("σ must be a degree-0 endomorphism".into()));
        }
        let space = sigma.source().clone();
        let m = CpModule { space, sigma };
        let p = m.prime().value();
        for t in m.space.degrees() {
            let s = m.sigma_matrix(t);
            let mut pow = Matrix::identity(m.prime(), s.rows());
            for _ in 0..p {
                pow = pow.mul(&s);
            }
            if pow != Matrix::identity(m.prime(), s.rows()) {
                return Err(Error::InvalidModule(format!("σ^p is not the identity in degree {t}")));
            }
        }
        Ok(m)
    }

    pub fn trivial(space: GradedVectorSpace) -> CpModule {
        CpModule::new(GradedLinearMap::identity(space)).expect("identity action")
    }

    /// `F_p[C_p]` in one degree, on basis `name.0 .. name.(p-1)` with σ shifting.
    pub fn free(p: Prime, name: &str, degree: i64) -> CpModule {
        let n = p.value() as usize;
        let basis = (0..n).map(|k| BasisElement { name: format!("{name}.{k}"), degree }).collect();
        let space = GradedVectorSpace::tight(p, basis).expect("free basis");
        let cols = (0..n).map(|k| vec![((k + 1) % n, 1)]).collect();
        CpModule::new(GradedLinearMap::new(space.clone(), space, 0, cols).expect("shift")).expect("free module")
    }

    /// Sum of Jordan blocks `F_p[σ]/(σ-1)^k` with `(degree, k)` given, conjugated
    /// by a seeded random change of basis in each degree.
    pub fn jordan(p: Prime, blocks: &[(i64, usize)], seed: u64) -> Result<CpModule> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis = Vec::new();
        let mut per_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (b, &(d, k)) in blocks.iter().enumerate() {
            if k == 0 || k > p.value() as usize {
                return Err(Error::InvalidModule(format!("Jordan block of size {k} at p = {p}")));
            }
            for j in 0..k {
                basis.push(BasisElement { name: format!("j{b}_{j}"), degree: d });
            }
            per_degree.entry(d).or_default().push(k);
        }
        let space = GradedVectorSpace::tight(p, basis)?;
        let mut cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); space.dim()];
        for (d, sizes) in per_degree {
            let n: usize = sizes.iter().sum();
            let mut s = Matrix::zeros(p, n, n);
            let mut off = 0;
            for k in sizes {
                for j in 0..k {
                    s.set(off + j, off + j, 1);
                    if j + 1 < k {
                        s.set(off + j + 1, off + j, 1);
                    }
                }
                off += k;
            }
            let (c, c_inv) = random_invertible(p, n, &mut rng);
            let conj = c.mul(&s).mul(&c_inv);
            let start = space.indices_in_degree(d).start;
            for j in 0..n {
                cols[start + j] = (0..n).filter(|&i| conj.get(i, j) != 0).map(|i| (start + i, conj.get(i, j))).collect();
            }
        }
        CpModule::new(GradedLinearMap::new(space.clone(), space, 0, cols)?)
    }

    pub fn prime(&self) -> Prime {
        self.space.prime()
    }
    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }
    pub fn sigma(&self) -> &GradedLinearMap {
        &self.sigma
    }

    pub fn sigma_matrix(&self, t: i64) -> Matrix {
        self.sigma.matrix_in_degree(t)
    }

    /// The dual module, with σ acting by the inverse transpose.
    pub fn dual(&self) -> CpModule {
        let p = self.prime();
        let dual = self.space.dual();
        let mut cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); dual.dim()];
        for t in self.space.degrees() {
            let s = self.sigma_matrix(t);
            let inv = power(&s, p.value() as usize - 1);
            let tr = inv.transpose();
            let src = self.space.indices_in_degree(t);
            let dst = dual.indices_in_degree(-t);
            let order: Vec<usize> = src
                .clone()
                .map(|i| dual.index_of(&crate::gf::dual_name(self.space.name_of(i))).expect("dual name"))
                .collect();
            debug_assert_eq!(order.len(), dst.len());
            for j in 0..order.len() {
                cols[order[j]] = (0..order.len()).filter(|&i| tr.get(i, j) != 0).map(|i| (order[i], tr.get(i, j))).collect();
            }
        }
        CpModule::new(GradedLinearMap::new(dual.clone(), dual, 0, cols).expect("dual action")).expect("dual module")
    }

    /// `N = 1 + σ + ... + σ^{p-1}` in degree `t`.
    pub fn norm_matrix(&self, t: i64) -> Matrix {
        norm_of(&self.sigma_matrix(t), self.prime())
    }
}

fn power(s: &Matrix, k: usize) -> Matrix {
    let mut out = Matrix::identity(s.prime(), s.rows());
    for _ in 0..k {
        out = out.mul(s);
    }
    out
}

fn norm_of(s: &Matrix, p: Prime) -> Matrix {
    let n = s.rows();
    let mut acc = Matrix::zeros(p, n, n);
    let mut pow = Matrix::identity(p, n);
    for _ in 0..p.value() {
        acc = add(&acc, &pow, 1);
        pow = pow.mul(s);
    }
    acc
}

/// `a + k b`
fn add(a: &Matrix, b: &Matrix, k: u32) -> Matrix {
    let p = a.prime();
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, p.add(a.get(i, j), p.mul(k, b.get(i, j))));
        }
    }
    out
}

fn one_minus(s: &Matrix) -> Matrix {
    let p = s.prime();
    add(&Matrix::identity(p, s.rows()), s, p.neg(1))
}

fn random_invertible(p: Prime, n: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    loop {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p.value())).collect()).collect();
        let m = Matrix::from_rows(p, n, &rows);
        if m.rank() == n {
            let solver = m.solver();
            let cols: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    solver.solve(&e).expect("invertible")
                })
                .collect();
            return (m, Matrix::from_columns(p, n, &cols));
        }
    }
}

/// A seeded module built from up to six Jordan blocks in degrees `-2..=2`.
pub fn random_cp_module(p: Prime, seed: u64) -> CpModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
    let count = rng.gen_range(1..=6);
    let blocks: Vec<(i64, usize)> =
        (0..count).map(|_| (rng.gen_range(-2..=2), rng.gen_range(1..=p.value() as usize))).collect();
    CpModule::jordan(p, &blocks, rng.gen()).expect("valid blocks")
}

/// A subquotient of one degree of a module, given by representatives
/// (coordinate vectors in that degree) of a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subquotient {
    pub degree: i64,
    pub reps: Vec<Vec<u32>>,
    /// Spanning set of the subspace divided out.
    pub image: Vec<Vec<u32>>,
}

/// One Tate group, split by internal degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateGroup {
    pub n: i64,
    pub parts: Vec<Subquotient>,
}

impl TateGroup {
    pub fn dim(&self) -> usize {
        self.parts.iter().map(|s| s.reps.len()).sum()
    }

    pub fn dim_in_degree(&self, t: i64) -> usize {
        self.parts.iter().filter(|s| s.degree == t).map(|s| s.reps.len()).sum()
    }
}

fn subquotient(p: Prime, t: i64, kernel_of: &Matrix, image_of: &Matrix) -> Subquotient {
    let dim = kernel_of.cols();
    let ker = kernel_of.kernel();
    let image: Vec<Vec<u32>> = (0..image_of.cols()).map(|j| image_of.column(j)).collect();
    let reps = complement_in(p, dim, &image, &ker);
    Subquotient { degree: t, reps, image }
}

/// `Ĥ^n(C_p; M)`: `ker(1-σ)/im N` for even n and `ker N/im(1-σ)` for odd n.
pub fn tate_cohomology(m: &CpModule, n: i64) -> TateGroup {
    let p = m.prime();
    let parts = m
        .space
        .degrees()
        .into_iter()
        .map(|t| {
            let s = m.sigma_matrix(t);
            let (d1, nm) = (one_minus(&s), norm_of(&s, p));
            if n.rem_euclid(2) == 0 {
                subquotient(p, t, &d1, &nm)
            } else {
                subquotient(p, t, &nm, &d1)
            }
        })
        .collect();
    TateGroup { n, parts }
}

/// `Ĥ_n(C_p; M)` from `P_* ⊗ M`, where the right action on `P_*` turns σ into σ^{-1}.
pub fn tate_homology(m: &CpModule, n: i64) -> TateGroup {
    let p = m.prime();
    let parts = m
        .space
        .degrees()
        .into_iter()
        .map(|t| {
            let s = m.sigma_matrix(t);
            let s_inv = power(&s, p.value() as usize - 1);
            let (d1, nm) = (one_minus(&s_inv), norm_of(&s_inv, p));
            // d_n is 1-σ for odd n and N for even n; Ĥ_n = ker d_n / im d_{n+1}
            if n.rem_euclid(2) == 1 {
                subquotient(p, t, &d1, &nm)
            } else {
                subquotient(p, t, &nm, &d1)
            }
        })
        .collect();
    TateGroup { n, parts }
}

/// Group homology `H_j(C_p; M)` for `j >= 0`.
pub fn group_homology(m: &CpModule, j: i64) -> Result<TateGroup> {
    if j < 0 {
        return Err(Error::Domain("group homology lives in degrees >= 0".into()));
    }
    if j > 0 {
        return Ok(tate_homology(m, j));
    }
    let p = m.prime();
    let parts = m
        .space
        .degrees()
        .into_iter()
        .map(|t| {
            let s = m.sigma_matrix(t);
            let zero = Matrix::zeros(p, s.rows(), s.rows());
            subquotient(p, t, &zero, &one_minus(&power(&s, p.value() as usize - 1)))
        })
        .collect();
    Ok(TateGroup { n: 0, parts })
}

/// Basis-level comparison `Ĥ^n(M) ≅ Ĥ_{-n-1}(M)`: for each internal degree the
/// matrix expressing the cohomology representatives in the homology basis.
/// Errors if the representatives do not match up to an isomorphism.
pub fn degree_shift_iso(m: &CpModule, n: i64) -> Result<Vec<(i64, Matrix)>> {
    let p = m.prime();
    let coh = tate_cohomology(m, n);
    let hom = tate_homology(m, -n - 1);
    let mut out = Vec::new();
    for (c, h) in coh.parts.iter().zip(&hom.parts) {
        let k = c.reps.len();
        if k != h.reps.len() {
            return Err(Error::Dimension(format!("degree {}: {} vs {}", c.degree, k, h.reps.len())));
        }
        // solve rep = Σ a_i h_i + image
        let mut cols: Vec<Vec<u32>> = h.reps.clone();
        cols.extend(h.image.iter().cloned());
        let dim = m.space.dim_in_degree(c.degree);
        let a = Matrix::from_columns(p, dim, &cols);
        let solver = a.solver();
        let mut mat = Matrix::zeros(p, k, k);
        for (j, rep) in c.reps.iter().enumerate() {
            let x = solver
                .solve(rep)
                .ok_or_else(|| Error::Dimension(format!("class not a cycle in degree {}", c.degree)))?;
            for i in 0..k {
                mat.set(i, j, x[i]);
            }
        }
        if mat.rank() != k {
            return Err(Error::Dimension(format!("comparison not invertible in degree {}", c.degree)));
        }
        out.push((c.degree, mat));
    }
    Ok(out)
}

/// The periodic complete resolution of `F_p` over `F_p[C_p]` on `[n0, n1]`.
#[derive(Debug, Clone)]
pub struct CompleteResolutionWindow {
    pub prime: Prime,
    pub range: (i64, i64),
}

impl CompleteResolutionWindow {
    pub fn new(prime: Prime, range: (i64, i64)) -> CompleteResolutionWindow {
        CompleteResolutionWindow { prime, range }
    }

    /// `d_n : P_n → P_{n-1}` on the basis `1, σ, ..., σ^{p-1}`.
    pub fn differential(&self, n: i64) -> Matrix {
        let p = self.prime;
        let free = CpModule::free(p, "g", 0);
        let s = free.sigma_matrix(0);
        if n.rem_euclid(2) == 1 {
            one_minus(&s)
        } else {
            norm_of(&s, p)
        }
    }

    pub fn squares_to_zero(&self) -> bool {
        (self.range.0 + 1..=self.range.1).all(|n| self.differential(n - 1).mul(&self.differential(n)).is_zero())
    }

    /// `ker d_n = im d_{n+1}` for every interior n.
    pub fn exact_in_interior(&self) -> bool {
        (self.range.0 + 1..self.range.1).all(|n| {
            let k = self.differential(n).kernel().len();
            k == self.differential(n + 1).rank()
        })
    }
}

/// Degree-`t` part of `H^{⊗p}` with σ cyclically permuting factors.
#[derive(Debug, Clone)]
pub struct PermutationModule {
    pub module: CpModule,
    /// Basis tuples of indices into the factor space, in module basis order.
    pub tuples: Vec<Vec<usize>>,
    /// Module indices of the diagonal classes `α^{⊗p}` (trivial summands).
    pub diagonal: Vec<usize>,
    /// Remaining basis elements grouped into σ-orbits of size `p` (free summands).
    pub free_orbits: Vec<Vec<usize>>,
}

impl PermutationModule {
    /// The free summands as a module on their own.
    pub fn free_part(&self) -> CpModule {
        self.restrict(&self.free_orbits.concat())
    }

    pub fn trivial_part(&self) -> CpModule {
        self.restrict(&self.diagonal)
    }

    fn restrict(&self, keep: &[usize]) -> CpModule {
        let sp = self.module.space();
        let basis: Vec<BasisElement> = keep.iter().map(|&i| sp.basis()[i].clone()).collect();
        let space = GradedVectorSpace::tight(sp.prime(), basis).expect("sub-basis");
        let cols = (0..space.dim())
            .map(|i| {
                let src = sp.index_of(space.name_of(i)).expect("kept");
                self.module
                    .sigma()
                    .column(src)
                    .iter()
                    .map(|(j, c)| (space.index_of(sp.name_of(*j)).expect("orbit closed"), *c))
                    .collect()
            })
            .collect();
        CpModule::new(GradedLinearMap::new(space.clone(), space, 0, cols).expect("restriction")).expect("summand")
    }
}

pub fn tensor_name(b: &GradedVectorSpace, tuple: &[usize]) -> String {
    tuple.iter().map(|&i| b.name_of(i)).collect::<Vec<_>>().join("⊗")
}

/// `(H^{⊗p})_t` with `σ(b_1⊗…⊗b_p) = ± b_p⊗b_1⊗…⊗b_{p-1}` (Koszul sign).
pub fn permutation_module(b: &GradedVectorSpace, t: i64, p: Prime) -> PermutationModule {
    let k = p.value() as usize;
    let mut tuples = Vec::new();
    let mut cur = Vec::with_capacity(k);
    enumerate_tuples(b, k, t, &mut cur, &mut tuples);
    let names: Vec<String> = tuples.iter().map(|tp| tensor_name(b, tp)).collect();
    let basis: Vec<BasisElement> = names.iter().map(|n| BasisElement { name: n.clone(), degree: t }).collect();
    let space = GradedVectorSpace::new(p, basis, (t, t)).expect("tensor basis");
    let order: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); tuples.len()];
        for (tp, n) in tuples.iter().zip(&names) {
            v[space.index_of(n).expect("present")] = tp.clone();
        }
        v
    };
    let idx = |tp: &[usize]| space.index_of(&tensor_name(b, tp)).expect("rotation of a basis tuple");
    let mut cols = vec![Vec::new(); order.len()];
    for (i, tp) in order.iter().enumerate() {
        let last = *tp.last().expect("p >= 2");
        let dl = b.degree_of(last);
        let sign = p.sign(dl * (t - dl));
        let mut rot = vec![last];
        rot.extend_from_slice(&tp[..k - 1]);
        cols[i] = vec![(idx(&rot), sign)];
    }
    let module = CpModule::new(GradedLinearMap::new(space.clone(), space.clone(), 0, cols).expect("σ"))
        .expect("cyclic permutation");
    let mut diagonal = Vec::new();
    let mut free_orbits = Vec::new();
    let mut seen = vec![false; order.len()];
    for (i, tp) in order.iter().enumerate() {
        if seen[i] {
            continue;
        }
        if tp.iter().all(|&x| x == tp[0]) {
            diagonal.push(i);
            seen[i] = true;
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = tp.clone();
        for _ in 0..k {
            let j = idx(&cur);
            seen[j] = true;
            orbit.push(j);
            cur.rotate_right(1);
        }
        free_orbits.push(orbit);
    }
    PermutationModule { module, tuples: order, diagonal, free_orbits }
}

fn enumerate_tuples(b: &GradedVectorSpace, k: usize, remaining: i64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let Some(bottom) = b.basis().first().map(|x| x.degree) else { return };
    let left = (k - cur.len() - 1) as i64;
    for i in 0..b.dim() {
        let d = b.degree_of(i);
        // the remaining factors need at least `bottom` each
        if remaining - d < left * bottom {
            continue;
        }
        cur.push(i);
        enumerate_tuples(b, k, remaining - d, cur, out);
        cur.pop();
    }
}

/// A monomial of `Λ`: `u^r` at p = 2 (`u` the exponent, `t` zero), `u^i t^r` at odd p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaMonomial {
    pub u: i64,
    pub t: i64,
}

impl LambdaMonomial {
    pub fn degree(&self) -> i64 {
        -self.u - 2 * self.t
    }
}

pub type LambdaElement = Lin<LambdaMonomial>;

/// `Λ = P(u^{±1})` (p = 2) or `E(u) ⊗ P(t^{±1})` (p odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaRing {
    pub prime: Prime,
}

impl LambdaRing {
    pub fn new(prime: Prime) -> LambdaRing {
        LambdaRing { prime }
    }

    pub fn one(&self) -> LambdaElement {
        Lin::single(LambdaMonomial { u: 0, t: 0 }, 1, self.prime)
    }

    pub fn u(&self) -> LambdaElement {
        Lin::single(LambdaMonomial { u: 1, t: 0 }, 1, self.prime)
    }

    /// `t^r`; at p = 2 this is `u^{2r}`.
    pub fn t_pow(&self, r: i64) -> LambdaElement {
        let m = if self.prime.is_two() { LambdaMonomial { u: 2 * r, t: 0 } } else { LambdaMonomial { u: 0, t: r } };
        Lin::single(m, 1, self.prime)
    }

    pub fn monomial(&self, u: i64, t: i64) -> Result<LambdaElement> {
        if self.prime.is_two() && t != 0 || !self.prime.is_two() && !(0..=1).contains(&u) {
            return Err(Error::Domain(format!("u^{u} t^{t} is not a monomial of Λ at p = {}", self.prime)));
        }
        Ok(Lin::single(LambdaMonomial { u, t }, 1, self.prime))
    }

    pub fn multiply(&self, a: &LambdaElement, b: &LambdaElement) -> LambdaElement {
        let p = self.prime;
        let mut out = Lin::zero();
        for (x, c) in a.iter() {
            for (y, d) in b.iter() {
                let u = x.u + y.u;
                if !p.is_two() && u > 1 {
                    continue;
                }
                out.add_term(LambdaMonomial { u, t: x.t + y.t }, p.mul(c, d), p);
            }
        }
        out
    }
}

/// Shorthand for [`LambdaRing::multiply`].
pub fn lambda_multiply(p: Prime, a: &LambdaElement, b: &LambdaElement) -> LambdaElement {
    LambdaRing::new(p).multiply(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn point(p: Prime, degree: i64) -> GradedVectorSpace {
        GradedVectorSpace::tight(p, vec![BasisElement { name: "a".into(), degree }]).unwrap()
    }

    #[test]
    fn trivial_and_free_coefficients() {
        for p in [2, 3, 5, 7] {
            let p = pr(p);
            let triv = CpModule::trivial(point(p, 0));
            let free = CpModule::free(p, "g", 0);
            for n in -8..=8 {
                assert_eq!(tate_cohomology(&triv, n).dim(), 1);
                assert_eq!(tate_homology(&triv, n).dim(), 1);
                assert_eq!(tate_cohomology(&free, n).dim(), 0);
                assert_eq!(tate_homology(&free, n).dim(), 0);
            }
        }
    }

    #[test]
    fn jordan_block_oracle() {
        // Ĥ of F_p[σ]/(σ-1)^k is 1-dimensional for k < p and 0 for k = p
        for p in [2, 3, 5] {
            let p = pr(p);
            for seed in 0..20 {
                let m = random_cp_module(p, seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
                let count = rng.gen_range(1..=6);
                let blocks: Vec<(i64, usize)> =
                    (0..count).map(|_| (rng.gen_range(-2..=2), rng.gen_range(1..=p.value() as usize))).collect();
                let want = blocks.iter().filter(|(_, k)| *k < p.value() as usize).count();
                for n in -8..=8 {
                    assert_eq!(tate_cohomology(&m, n).dim(), want, "p={p} seed={seed} n={n}");
                }
            }
        }
    }

    #[test]
    fn dualities() {
        for p in [2, 3, 5] {
            let p = pr(p);
            for seed in 0..20 {
                let m = random_cp_module(p, seed);
                let d = m.dual();
                assert_eq!(d.dual(), m);
                for n in -8..=8 {
                    assert_eq!(tate_cohomology(&m, n).dim(), tate_homology(&m, -n - 1).dim());
                    assert_eq!(tate_homology(&m, n).dim(), tate_cohomology(&d, n).dim());
                    for t in m.space().degrees() {
                        assert_eq!(tate_homology(&m, n).dim_in_degree(t), tate_cohomology(&d, n).dim_in_degree(-t));
                    }
                    degree_shift_iso(&m, n).unwrap();
                }
            }
        }
    }

    #[test]
    fn periodicity() {
        let p = pr(3);
        let m = random_cp_module(p, 4);
        for n in -6..6 {
            assert_eq!(tate_cohomology(&m, n), TateGroup { n, ..tate_cohomology(&m, n + 2) });
        }
    }

    #[test]
    fn complete_resolution() {
        for p in [2, 3, 5] {
            let w = CompleteResolutionWindow::new(pr(p), (-5, 5));
            assert!(w.squares_to_zero());
            assert!(w.exact_in_interior());
        }
    }

    #[test]
    fn permutation_examples() {
        let p = pr(2);
        let pt = point(p, 0);
        let pm = permutation_module(&pt, 0, p);
        assert_eq!((pm.diagonal.len(), pm.free_orbits.len()), (1, 0));
        let q = 3;
        let two = GradedVectorSpace::tight(
            p,
            vec![BasisElement { name: "a".into(), degree: q }, BasisElement { name: "b".into(), degree: q }],
        )
        .unwrap();
        let pm = permutation_module(&two, 2 * q, p);
        assert_eq!((pm.diagonal.len(), pm.free_orbits.len()), (2, 1));
        for n in -4..=4 {
            assert_eq!(tate_cohomology(&pm.module, n).dim(), 2);
            assert_eq!(tate_cohomology(&pm.free_part(), n).dim(), 0);
            assert_eq!(degree_shift_iso(&pm.module, n).unwrap()[0].1.rows(), 2);
        }
        let p3 = pr(3);
        let pm = permutation_module(&point(p3, 2), 6, p3);
        assert_eq!((pm.diagonal.len(), pm.free_orbits.len()), (1, 0));
        // classes in degrees 0 and 1 at p = 2, t = 1: a free orbit only
        let mixed = GradedVectorSpace::tight(
            p,
            vec![BasisElement { name: "a".into(), degree: 0 }, BasisElement { name: "b".into(), degree: 1 }],
        )
        .unwrap();
        let pm = permutation_module(&mixed, 1, p);
        assert_eq!(tate_cohomology(&pm.module, 0).dim(), 0);
    }

    #[test]
    fn permutation_decomposition_with_signs() {
        for p in [2, 3, 5] {
            let p = pr(p);
            let b = GradedVectorSpace::tight(
                p,
                vec![
                    BasisElement { name: "a".into(), degree: 1 },
                    BasisElement { name: "b".into(), degree: 1 },
                    BasisElement { name: "c".into(), degree: 2 },
                ],
            )
            .unwrap();
            for t in p.value() as i64..=2 * p.value() as i64 {
                let pm = permutation_module(&b, t, p);
                let total = pm.diagonal.len() + pm.free_orbits.len() * p.value() as usize;
                assert_eq!(total, pm.module.space().dim());
                for n in -3..=3 {
                    assert_eq!(tate_cohomology(&pm.module, n).dim(), pm.diagonal.len(), "p={p} t={t}");
                    assert_eq!(tate_cohomology(&pm.trivial_part(), n).dim(), pm.diagonal.len());
                }
            }
        }
    }

    #[test]
    fn group_homology_of_free_and_trivial() {
        let p = pr(3);
        let free = CpModule::free(p, "g", 0);
        assert_eq!(group_homology(&free, 0).unwrap().dim(), 1);
        assert_eq!(group_homology(&free, 1).unwrap().dim(), 0);
        let triv = CpModule::trivial(point(p, 0));
        for j in 0..5 {
            assert_eq!(group_homology(&triv, j).unwrap().dim(), 1);
        }
    }

    #[test]
    fn lambda_examples() {
        let l2 = LambdaRing::new(pr(2));
        let u = l2.u();
        assert_eq!(l2.multiply(&u, &u), l2.monomial(2, 0).unwrap());
        let l3 = LambdaRing::new(pr(3));
        assert!(l3.multiply(&l3.u(), &l3.u()).is_zero());
        assert_eq!(l3.multiply(&l3.t_pow(2), &l3.t_pow(-5)), l3.t_pow(-3));
        assert_eq!(l3.multiply(&l3.one(), &l3.u()), l3.u());
        assert_eq!(l3.t_pow(1).keys().next().unwrap().degree(), -2);
        // associativity on a few monomials
        let ms: Vec<LambdaElement> =
            vec![l3.u(), l3.t_pow(1), l3.t_pow(-2), l3.multiply(&l3.u(), &l3.t_pow(3))];
        for a in &ms {
            for b in &ms {
                for c in &ms {
                    assert_eq!(
                        l3.multiply(&l3.multiply(a, b), c),
                        l3.multiply(a, &l3.multiply(b, c))
                    );
                }
            }
        }
    }
}
