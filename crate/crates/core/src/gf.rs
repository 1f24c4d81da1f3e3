//! Exact linear algebra over F_p on graded, finite-type vector spaces.
//!
//! Scalars are `u32` residues in `0..p`. Per-degree matrices are dense;
//! degrees at the scale this crate works at are small.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime `p`, the characteristic of every field in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Prime> {
        if !(2..=65_521).contains(&p) || !(2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// `(p - 1) / 2`, the number written `m` in the odd-primary formulas.
    pub fn half(self) -> u32 {
        (self.0 - 1) / 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, e: i64) -> u32 {
        if e.rem_euclid(2) == 0 {
            1
        } else {
            self.0 - 1
        }
    }

    pub fn pow(self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.0;
        base %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero in F_{}", self.0);
        self.pow(a, (self.0 - 2) as u64)
    }

    pub fn factorial(self, n: u32) -> u32 {
        (1..=n).fold(1 % self.0, |acc, k| self.mul(acc, k % self.0))
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Prime> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `binom(n, k) mod p` for any integer `n`.
///
/// Zero for `k < 0`. Negative upper arguments use
/// `C(n, k) = (-1)^k C(k - n - 1, k)`, after which Lucas' theorem applies.
pub fn binom_mod_p(n: i64, k: i64, p: Prime) -> u32 {
    if k < 0 {
        return 0;
    }
    if n < 0 {
        let c = lucas(k - n - 1, k, p);
        return if k % 2 == 0 { c } else { p.neg(c) };
    }
    lucas(n, k, p)
}

fn lucas(mut n: i64, mut k: i64, p: Prime) -> u32 {
    if k > n {
        return 0;
    }
    let pp = p.value() as i64;
    let mut acc = 1u32;
    while k > 0 {
        let (nd, kd) = (n % pp, k % pp);
        if kd > nd {
            return 0;
        }
        acc = p.mul(acc, small_binom(nd as u32, kd as u32, p));
        n /= pp;
        k /= pp;
    }
    acc
}

fn small_binom(n: u32, k: u32, p: Prime) -> u32 {
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..k {
        num = p.mul(num, (n - i) % p.value());
        den = p.mul(den, (i + 1) % p.value());
    }
    p.mul(num, p.inv(den))
}

/// A finite F_p-linear combination of keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, u32>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coeff: u32, p: Prime) -> Self {
        let mut l = Self::zero();
        l.add_term(key, coeff, p);
        l
    }

    pub fn add_term(&mut self, key: K, coeff: u32, p: Prime) {
        let c = coeff % p.value();
        if c == 0 {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = p.add(*v, c);
                if *v == 0 {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, coeff: u32, p: Prime) {
        if coeff.is_multiple_of(p.value()) {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), p.mul(*c, coeff), p);
        }
    }

    pub fn scaled(&self, coeff: u32, p: Prime) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, coeff, p);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> u32 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u32)> {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn map_keys<J: Ord + Clone>(&self, p: Prime, mut f: impl FnMut(&K) -> J) -> Lin<J> {
        let mut out = Lin::zero();
        for (k, c) in self.iter() {
            out.add_term(f(k), c, p);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, u32)> for Lin<K> {
    /// Collects already-reduced, nonzero terms; duplicates keep the last value.
    fn from_iter<I: IntoIterator<Item = (K, u32)>>(iter: I) -> Self {
        Lin { terms: iter.into_iter().filter(|(_, c)| *c != 0).collect() }
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Matrix {
        Matrix { prime, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(prime: Prime, n: usize) -> Matrix {
        let mut m = Matrix::zeros(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(prime: Prime, cols: usize, rows: &[Vec<u32>]) -> Matrix {
        let mut m = Matrix::zeros(prime, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v % prime.value());
            }
        }
        m
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(prime: Prime, rows: usize, columns: &[Vec<u32>]) -> Matrix {
        let mut m = Matrix::zeros(prime, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v % prime.value());
            }
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.prime, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.prime;
        let mut out = Matrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = p.add(out.get(i, j), p.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.prime;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(a, b)| *a as u64 * *b as u64).sum();
                (s % p.value() as u64) as u32
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }

    fn scale_row(&mut self, r: usize, k: u32) {
        let p = self.prime;
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = p.mul(*x, k);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: u32) {
        if k == 0 || dst == src {
            return;
        }
        let c = self.cols;
        let p = self.prime.value() as u64;
        let (d, s) = if dst < src {
            let (a, b) = self.data.split_at_mut(src * c);
            (&mut a[dst * c..(dst + 1) * c], &b[..c])
        } else {
            let (a, b) = self.data.split_at_mut(dst * c);
            (&mut b[..c], &a[src * c..(src + 1) * c])
        };
        for (x, y) in d.iter_mut().zip(s) {
            if *y != 0 {
                *x = ((*x as u64 + k as u64 * *y as u64) % p) as u32;
            }
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        self.row_reduce_limited(self.cols)
    }

    /// Reduced row echelon form using only the first `limit` columns as pivots.
    pub fn row_reduce_limited(&mut self, limit: usize) -> Vec<usize> {
        let p = self.prime;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = p.inv(self.get(r, c));
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let f = self.get(i, c);
                    if f != 0 {
                        self.add_row(i, r, p.neg(f));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().row_reduce().len()
    }

    /// Basis of the null space `{v : A v = 0}`, one vector per free column,
    /// in increasing order of free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        kernel_from_rref(&m, &pivots)
    }

    /// Precomputes a solver for `A x = b`.
    pub fn solver(&self) -> Solver {
        let mut aug = Matrix::zeros(self.prime, self.rows, self.cols + self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols + i, 1);
        }
        let pivots = aug.row_reduce_limited(self.cols);
        Solver { cols: self.cols, pivots, reduced: aug }
    }
}

fn kernel_from_rref(m: &Matrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let p = m.prime;
    let mut is_pivot = vec![None; m.cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut out = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = p.neg(m.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Solves `A x = b` for a fixed `A`, via a stored row reduction of `[A | I]`.
#[derive(Debug, Clone)]
pub struct Solver {
    cols: usize,
    pivots: Vec<usize>,
    reduced: Matrix,
}

impl Solver {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Some solution, with free variables zero, or `None` if `b` is not in the image.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let m = &self.reduced;
        let p = m.prime;
        let pv = p.value() as u64;
        assert_eq!(b.len(), m.rows);
        let transformed: Vec<u32> = (0..m.rows)
            .map(|i| {
                let row = &m.row(i)[self.cols..];
                let s: u64 = row.iter().zip(b).map(|(a, x)| *a as u64 * *x as u64 % pv).sum();
                (s % pv) as u32
            })
            .collect();
        if transformed[self.pivots.len()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = transformed[r];
        }
        Some(x)
    }

    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut left = Matrix::zeros(self.reduced.prime, self.reduced.rows, self.cols);
        for i in 0..self.reduced.rows {
            for j in 0..self.cols {
                left.set(i, j, self.reduced.get(i, j));
            }
        }
        kernel_from_rref(&left, &self.pivots)
    }
}

/// Splits `sub` (a spanning set inside some ambient space) against `base`:
/// returns the members of `sub` that are independent modulo `span(base)`,
/// taken greedily in order.
pub fn complement_in(prime: Prime, dim: usize, base: &[Vec<u32>], sub: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut echelon = Echelon::new(prime, dim);
    for b in base {
        echelon.insert(b.clone());
    }
    sub.iter().filter(|v| echelon.insert((*v).clone())).cloned().collect()
}

/// Incrementally maintained row-echelon basis, used for span membership.
#[derive(Debug, Clone)]
pub struct Echelon {
    prime: Prime,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    pub fn new(prime: Prime, dim: usize) -> Echelon {
        Echelon { prime, dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        let p = self.prime;
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                let k = p.neg(f);
                for (x, y) in v.iter_mut().zip(row) {
                    if *y != 0 {
                        *x = p.add(*x, p.mul(k, *y));
                    }
                }
            }
        }
        v
    }

    /// Pivot columns; `reduce` clears exactly these coordinates.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether it was new.
    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.dim);
        let p = self.prime;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = p.inv(v[piv]);
        for x in &mut v {
            *x = p.mul(*x, inv);
        }
        for (_, row) in &mut self.rows {
            let f = row[piv];
            if f != 0 {
                let k = p.neg(f);
                for (x, y) in row.iter_mut().zip(&v) {
                    if *y != 0 {
                        *x = p.add(*x, p.mul(k, *y));
                    }
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

/// A named basis element of a graded vector space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisElement {
    pub degree: i64,
    pub name: String,
}

/// Finite-type graded F_p vector space on named basis elements inside a degree window.
///
/// The basis is kept sorted by `(degree, name)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedVectorSpace {
    prime: Prime,
    basis: Vec<BasisElement>,
    window: (i64, i64),
    index: HashMap<String, usize>,
}

impl GradedVectorSpace {
    pub fn new(prime: Prime, basis: Vec<BasisElement>, window: (i64, i64)) -> Result<Self> {
        let mut basis = basis;
        basis.sort();
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if b.degree < window.0 || b.degree > window.1 {
                return Err(Error::WindowViolation { degree: b.degree, lo: window.0, hi: window.1 });
            }
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::InvalidModule(format!("duplicate basis name {}", b.name)));
            }
        }
        Ok(GradedVectorSpace { prime, basis, window, index })
    }

    /// Window spanning exactly the occupied degrees (`(0, 0)` when empty).
    pub fn tight(prime: Prime, basis: Vec<BasisElement>) -> Result<Self> {
        let lo = basis.iter().map(|b| b.degree).min().unwrap_or(0);
        let hi = basis.iter().map(|b| b.degree).max().unwrap_or(0);
        Self::new(prime, basis, (lo, hi))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }
    pub fn window(&self) -> (i64, i64) {
        self.window
    }
    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
    pub fn degree_of(&self, i: usize) -> i64 {
        self.basis[i].degree
    }
    pub fn name_of(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn in_window(&self, degree: i64) -> bool {
        degree >= self.window.0 && degree <= self.window.1
    }

    /// Indices of the basis elements in `degree`, in basis order.
    pub fn indices_in_degree(&self, degree: i64) -> std::ops::Range<usize> {
        let start = self.basis.partition_point(|b| b.degree < degree);
        let end = self.basis.partition_point(|b| b.degree <= degree);
        start..end
    }

    pub fn dim_in_degree(&self, degree: i64) -> usize {
        self.indices_in_degree(degree).len()
    }

    /// Occupied degrees, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        d.dedup();
        d
    }

    pub fn shifted(&self, k: i64) -> GradedVectorSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement { degree: b.degree + k, name: b.name.clone() })
            .collect();
        GradedVectorSpace::new(self.prime, basis, (self.window.0 + k, self.window.1 + k))
            .expect("shift preserves validity")
    }

    /// Dual space: names get a trailing `*` (or lose one), degrees are negated.
    pub fn dual(&self) -> GradedVectorSpace {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement { degree: -b.degree, name: dual_name(&b.name) })
            .collect();
        GradedVectorSpace::new(self.prime, basis, (-self.window.1, -self.window.0))
            .expect("dual of a valid space is valid")
    }
}

pub fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(s) => s.to_string(),
        None => format!("{name}*"),
    }
}

/// Linear map between graded spaces, shifting degree by `degree_shift`.
///
/// `columns[i]` is the image of source basis element `i` as sparse
/// `(target index, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    degree_shift: i64,
    columns: Vec<Vec<(usize, u32)>>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        degree_shift: i64,
        columns: Vec<Vec<(usize, u32)>>,
    ) -> Result<Self> {
        if source.prime != target.prime {
            return Err(Error::PrimeMismatch(source.prime.0, target.prime.0));
        }
        if columns.len() != source.dim() {
            return Err(Error::Dimension(format!(
                "{} columns for a {}-dimensional source",
                columns.len(),
                source.dim()
            )));
        }
        let p = source.prime;
        let mut cleaned = Vec::with_capacity(columns.len());
        for (i, col) in columns.into_iter().enumerate() {
            let want = source.degree_of(i) + degree_shift;
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for (j, c) in col {
                let c = c % p.value();
                if c == 0 {
                    continue;
                }
                if j >= target.dim() || target.degree_of(j) != want {
                    return Err(Error::Dimension(format!(
                        "image of {} lands outside target degree {want}",
                        source.name_of(i)
                    )));
                }
                let e = acc.entry(j).or_insert(0);
                *e = p.add(*e, c);
            }
            cleaned.push(acc.into_iter().filter(|(_, c)| *c != 0).collect());
        }
        Ok(GradedLinearMap { source, target, degree_shift, columns: cleaned })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, degree_shift: i64) -> Self {
        let n = source.dim();
        Self::new(source, target, degree_shift, vec![Vec::new(); n]).expect("zero map is valid")
    }

    pub fn identity(space: GradedVectorSpace) -> Self {
        let cols = (0..space.dim()).map(|i| vec![(i, 1)]).collect();
        Self::new(space.clone(), space, 0, cols).expect("identity is valid")
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }
    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }
    pub fn degree_shift(&self) -> i64 {
        self.degree_shift
    }
    pub fn column(&self, i: usize) -> &[(usize, u32)] {
        &self.columns[i]
    }

    /// Matrix of the map from source degree `degree` to target degree `degree + shift`.
    pub fn matrix_in_degree(&self, degree: i64) -> Matrix {
        let src = self.source.indices_in_degree(degree);
        let tgt = self.target.indices_in_degree(degree + self.degree_shift);
        let mut m = Matrix::zeros(self.source.prime, tgt.len(), src.len());
        for (jj, j) in src.clone().enumerate() {
            for &(i, c) in &self.columns[j] {
                m.set(i - tgt.start, jj, c);
            }
        }
        m
    }

    /// Composite `other ∘ self`.
    pub fn then(&self, other: &GradedLinearMap) -> Result<GradedLinearMap> {
        let p = self.source.prime;
        let cols = self
            .columns
            .iter()
            .map(|col| {
                let mut acc = Lin::<usize>::zero();
                for &(j, c) in col {
                    for &(k, d) in &other.columns[j] {
                        acc.add_term(k, p.mul(c, d), p);
                    }
                }
                acc.iter().map(|(k, c)| (*k, c)).collect()
            })
            .collect();
        GradedLinearMap::new(
            self.source.clone(),
            other.target.clone(),
            self.degree_shift + other.degree_shift,
            cols,
        )
    }
}

/// Rank and kernel basis of `f` restricted to source degree `degree`.
///
/// Kernel vectors are coordinate vectors over the source basis in that degree,
/// read off the reduced echelon form.
pub fn rank_and_kernel(f: &GradedLinearMap, degree: i64) -> Result<(usize, Vec<Vec<u32>>)> {
    let (lo, hi) = f.source.window;
    if !f.source.in_window(degree) {
        return Err(Error::WindowViolation { degree, lo, hi });
    }
    let td = degree + f.degree_shift;
    if !f.target.in_window(td) {
        let (lo, hi) = f.target.window;
        return Err(Error::WindowViolation { degree: td, lo, hi });
    }
    let mut m = f.matrix_in_degree(degree);
    let pivots = m.row_reduce();
    let kernel = kernel_from_rref(&m, &pivots);
    Ok((pivots.len(), kernel))
}

/// Transpose of `f` with respect to dual bases; degrees are negated.
pub fn dualize(f: &GradedLinearMap) -> GradedLinearMap {
    let src = f.target.dual();
    let tgt = f.source.dual();
    // target.dual() reverses nothing positional: both sort by (degree, name),
    // so indices must be looked up by name.
    let mut cols: Vec<Vec<(usize, u32)>> = vec![Vec::new(); src.dim()];
    for (i, col) in f.columns.iter().enumerate() {
        let ti = tgt.index_of(&dual_name(f.source.name_of(i))).expect("dual basis");
        for &(j, c) in col {
            let sj = src.index_of(&dual_name(f.target.name_of(j))).expect("dual basis");
            cols[sj].push((ti, c));
        }
    }
    GradedLinearMap::new(src, tgt, f.degree_shift, cols).expect("transpose is well-formed")
}
