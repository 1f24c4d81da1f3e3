//! The mod-p Steenrod algebra in the admissible basis.
//!
//! Words in the generators are rewritten to admissible form with the Adem
//! relations. Normal forms and degree bases are memoized per prime behind
//! read-write locks, so one [`SteenrodAlgebra`] can be shared across threads.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{binom_mod_p, Lin, Prime};

/// An algebra generator: `Sq^k` at p = 2, `β` or `P^k` at odd primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    Sq(u32),
    Bockstein,
    P(u32),
}

impl Gen {
    pub fn degree(self, p: Prime) -> i64 {
        match self {
            Gen::Sq(k) => k as i64,
            Gen::Bockstein => 1,
            Gen::P(k) => 2 * k as i64 * (p.value() as i64 - 1),
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, Gen::Sq(0) | Gen::P(0))
    }

    pub fn valid_for(self, p: Prime) -> bool {
        match self {
            Gen::Sq(_) => p.is_two(),
            Gen::Bockstein | Gen::P(_) => !p.is_two(),
        }
    }

    /// Parses `Sq^k`, `P^k` or `beta` (also `b`, `β`).
    pub fn parse(s: &str) -> Option<Gen> {
        let s = s.trim();
        if matches!(s, "beta" | "b" | "β" | "Bockstein") {
            return Some(Gen::Bockstein);
        }
        if let Some(k) = s.strip_prefix("Sq^").or_else(|| s.strip_prefix("Sq")) {
            return k.parse().ok().map(Gen::Sq);
        }
        if let Some(k) = s.strip_prefix("P^").or_else(|| s.strip_prefix('P')) {
            return k.parse().ok().map(Gen::P);
        }
        None
    }

    /// Generators of degree at most `max_degree` that are indecomposable enough
    /// to present a module: every `Sq^k` (k >= 1) or `β` and every `P^k` (k >= 1).
    pub fn all_up_to(p: Prime, max_degree: i64) -> Vec<Gen> {
        let mut out = Vec::new();
        if p.is_two() {
            for k in 1..=max_degree.max(0) {
                out.push(Gen::Sq(k as u32));
            }
        } else {
            if max_degree >= 1 {
                out.push(Gen::Bockstein);
            }
            let step = 2 * (p.value() as i64 - 1);
            let mut k = 1;
            while k * step <= max_degree {
                out.push(Gen::P(k as u32));
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Sq(k) => write!(f, "Sq^{k}"),
            Gen::Bockstein => write!(f, "beta"),
            Gen::P(k) => write!(f, "P^{k}"),
        }
    }
}

/// A word in the generators; admissible words form the basis of A.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<Gen>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, p: Prime) -> i64 {
        self.0.iter().map(|g| g.degree(p)).sum()
    }

    /// `i_j >= 2 i_{j+1}` at p = 2; `s_j >= p s_{j+1} + ε_j` and no `ββ` at odd p.
    pub fn is_admissible(&self, p: Prime) -> bool {
        is_admissible_word(&self.0, p)
    }

    pub fn parse(s: &str) -> Option<Monomial> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Some(Monomial::one());
        }
        s.split_whitespace().map(Gen::parse).collect::<Option<Vec<_>>>().map(Monomial)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn is_admissible_word(w: &[Gen], p: Prime) -> bool {
    if w.iter().any(|g| g.is_identity() || !g.valid_for(p)) {
        return false;
    }
    let pv = p.value();
    for (i, g) in w.iter().enumerate() {
        match (*g, w.get(i + 1), w.get(i + 2)) {
            (Gen::Sq(a), Some(Gen::Sq(b)), _) if a < 2 * b => return false,
            (Gen::Bockstein, Some(Gen::Bockstein), _) => return false,
            (Gen::P(a), Some(Gen::P(b)), _) if a < pv * b => return false,
            (Gen::P(a), Some(Gen::Bockstein), Some(Gen::P(b))) if a < pv * b + 1 => return false,
            _ => {}
        }
    }
    true
}

/// One Adem relation: `lhs = Σ c · word` as operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdemRelation {
    pub lhs: Vec<Gen>,
    pub rhs: Vec<(Vec<Gen>, u32)>,
}

impl fmt::Display for AdemRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = Monomial(self.lhs.clone());
        let r: Vec<String> = self
            .rhs
            .iter()
            .map(|(w, c)| format!("{c}·{}", Monomial(w.clone())))
            .collect();
        write!(f, "{l} = {}", if r.is_empty() { "0".to_string() } else { r.join(" + ") })
    }
}

fn push_word(out: &mut Vec<(Vec<Gen>, u32)>, word: Vec<Gen>, c: u32) {
    if c != 0 {
        out.push((word.into_iter().filter(|g| !g.is_identity()).collect(), c));
    }
}

/// `Sq^a Sq^b` for `a < 2b`.
fn adem_sq(a: u32, b: u32, p: Prime) -> Vec<(Vec<Gen>, u32)> {
    let mut out = Vec::new();
    for j in 0..=a / 2 {
        let c = binom_mod_p(b as i64 - j as i64 - 1, a as i64 - 2 * j as i64, p);
        push_word(&mut out, vec![Gen::Sq(a + b - j), Gen::Sq(j)], c);
    }
    out
}

/// `P^a P^b` for `a < pb`.
fn adem_pp(a: u32, b: u32, p: Prime) -> Vec<(Vec<Gen>, u32)> {
    let pv = p.value();
    let mut out = Vec::new();
    for i in 0..=a / pv {
        let c = binom_mod_p((pv as i64 - 1) * (b - i) as i64 - 1, (a - pv * i) as i64, p);
        let c = p.mul(c, p.sign((a + i) as i64));
        push_word(&mut out, vec![Gen::P(a + b - i), Gen::P(i)], c);
    }
    out
}

/// `P^a β P^b` for `a <= pb`.
fn adem_pbp(a: u32, b: u32, p: Prime) -> Vec<(Vec<Gen>, u32)> {
    let pv = p.value();
    let mut out = Vec::new();
    for i in 0..=a / pv {
        let c = binom_mod_p((pv as i64 - 1) * (b - i) as i64, (a - pv * i) as i64, p);
        let c = p.mul(c, p.sign((a + i) as i64));
        push_word(&mut out, vec![Gen::Bockstein, Gen::P(a + b - i), Gen::P(i)], c);
    }
    if a >= 1 {
        for i in 0..=(a - 1) / pv {
            let c = binom_mod_p((pv as i64 - 1) * (b - i) as i64 - 1, (a - pv * i - 1) as i64, p);
            let c = p.mul(c, p.sign((a + i + 1) as i64));
            push_word(&mut out, vec![Gen::P(a + b - i), Gen::Bockstein, Gen::P(i)], c);
        }
    }
    out
}

/// The mod-p Steenrod algebra, with memoized normal forms.
#[derive(Debug)]
pub struct SteenrodAlgebra {
    prime: Prime,
    normal: RwLock<HashMap<Vec<Gen>, Lin<Monomial>>>,
    bases: RwLock<HashMap<i64, Arc<Vec<Monomial>>>>,
    indices: RwLock<HashMap<i64, Arc<HashMap<Monomial, usize>>>>,
}

/// Shared algebra instance for `p`.
pub fn algebra(p: Prime) -> Arc<SteenrodAlgebra> {
    static REGISTRY: OnceLock<Mutex<HashMap<u32, Arc<SteenrodAlgebra>>>> = OnceLock::new();
    let mut reg = REGISTRY.get_or_init(Default::default).lock().expect("algebra registry poisoned");
    reg.entry(p.value()).or_insert_with(|| Arc::new(SteenrodAlgebra::new(p))).clone()
}

impl SteenrodAlgebra {
    pub fn new(prime: Prime) -> SteenrodAlgebra {
        SteenrodAlgebra {
            prime,
            normal: RwLock::new(HashMap::new()),
            bases: RwLock::new(HashMap::new()),
            indices: RwLock::new(HashMap::new()),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Every Adem relation whose left side has degree at most `max_degree`,
    /// plus `β β = 0` at odd primes.
    pub fn adem_relations(&self, max_degree: i64) -> Vec<AdemRelation> {
        let p = self.prime;
        let mut out = Vec::new();
        if p.is_two() {
            for b in 1..=max_degree.max(0) as u32 {
                for a in 1..2 * b {
                    if (a + b) as i64 > max_degree {
                        break;
                    }
                    out.push(AdemRelation { lhs: vec![Gen::Sq(a), Gen::Sq(b)], rhs: adem_sq(a, b, p) });
                }
            }
        } else {
            if max_degree >= 2 {
                out.push(AdemRelation { lhs: vec![Gen::Bockstein, Gen::Bockstein], rhs: Vec::new() });
            }
            let pv = p.value();
            let step = 2 * (pv as i64 - 1);
            for b in 1..=(max_degree / step).max(0) as u32 {
                for a in 1..=pv * b {
                    let deg = (a + b) as i64 * step;
                    if deg > max_degree {
                        break;
                    }
                    if a < pv * b {
                        out.push(AdemRelation { lhs: vec![Gen::P(a), Gen::P(b)], rhs: adem_pp(a, b, p) });
                    }
                    if deg < max_degree {
                        out.push(AdemRelation {
                            lhs: vec![Gen::P(a), Gen::Bockstein, Gen::P(b)],
                            rhs: adem_pbp(a, b, p),
                        });
                    }
                }
            }
        }
        out
    }

    /// Rewrites an arbitrary word into admissible monomials.
    pub fn adem_normalize(&self, word: &Monomial) -> Lin<Monomial> {
        self.normalize(&word.0)
    }

    fn normalize(&self, word: &[Gen]) -> Lin<Monomial> {
        let p = self.prime;
        let w: Vec<Gen> = word.iter().copied().filter(|g| !g.is_identity()).collect();
        assert!(w.iter().all(|g| g.valid_for(p)), "generator not defined at p = {p}");
        if is_admissible_word(&w, p) {
            return Lin::single(Monomial(w), 1, p);
        }
        if let Some(hit) = self.normal.read().expect("cache poisoned").get(&w) {
            return hit.clone();
        }
        let head = w[0];
        let tail = self.normalize(&w[1..]);
        let mut out = Lin::zero();
        for (t, c) in tail.iter() {
            let mut combined = Vec::with_capacity(t.0.len() + 1);
            combined.push(head);
            combined.extend_from_slice(&t.0);
            if is_admissible_word(&combined, p) {
                out.add_term(Monomial(combined), c, p);
                continue;
            }
            let (rewritten, used) = self.rewrite_front(&combined);
            for (front, d) in rewritten {
                let mut nw = front;
                nw.extend_from_slice(&combined[used..]);
                out.add_scaled(&self.normalize(&nw), p.mul(c, d), p);
            }
        }
        self.normal.write().expect("cache poisoned").insert(w, out.clone());
        out
    }

    /// Applies the Adem relation at the front of a word whose tail is admissible.
    /// Returns the replacement terms and how many letters they replace.
    fn rewrite_front(&self, w: &[Gen]) -> (Vec<(Vec<Gen>, u32)>, usize) {
        let p = self.prime;
        match (w[0], w.get(1), w.get(2)) {
            (Gen::Sq(a), Some(Gen::Sq(b)), _) => (adem_sq(a, *b, p), 2),
            (Gen::Bockstein, Some(Gen::Bockstein), _) => (Vec::new(), 2),
            (Gen::P(a), Some(Gen::P(b)), _) => (adem_pp(a, *b, p), 2),
            (Gen::P(a), Some(Gen::Bockstein), Some(Gen::P(b))) => (adem_pbp(a, *b, p), 3),
            _ => unreachable!("front of {w:?} is admissible"),
        }
    }

    /// Product of two admissible monomials.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Lin<Monomial> {
        if a.is_one() {
            return Lin::single(b.clone(), 1, self.prime);
        }
        if b.is_one() {
            return Lin::single(a.clone(), 1, self.prime);
        }
        let mut w = a.0.clone();
        w.extend_from_slice(&b.0);
        self.normalize(&w)
    }

    /// Admissible monomials of `degree`, in descending lexicographic order.
    pub fn admissible_basis(&self, degree: i64) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.bases.read().expect("cache poisoned").get(&degree) {
            return b.clone();
        }
        let mut out = Vec::new();
        if degree >= 0 {
            let mut cur = Vec::new();
            if self.prime.is_two() {
                enumerate_sq(degree as u32, u32::MAX, &mut cur, &mut out);
            } else {
                enumerate_odd(self.prime, degree, None, &mut cur, &mut out);
            }
        }
        let mut out: Vec<Monomial> = out.into_iter().map(Monomial).collect();
        out.sort_by(|a, b| b.cmp(a));
        let arc = Arc::new(out);
        self.bases.write().expect("cache poisoned").insert(degree, arc.clone());
        arc
    }

    pub fn basis_index(&self, degree: i64) -> Arc<HashMap<Monomial, usize>> {
        if let Some(b) = self.indices.read().expect("cache poisoned").get(&degree) {
            return b.clone();
        }
        let idx: HashMap<Monomial, usize> =
            self.admissible_basis(degree).iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let arc = Arc::new(idx);
        self.indices.write().expect("cache poisoned").insert(degree, arc.clone());
        arc
    }

    pub fn dimension(&self, degree: i64) -> usize {
        self.admissible_basis(degree).len()
    }

    /// Cartan coproduct `ψ(θ) = Σ θ' ⊗ θ''` of an admissible monomial, with the
    /// Koszul sign `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`.
    pub fn coproduct(&self, theta: &Monomial) -> Lin<(Monomial, Monomial)> {
        let p = self.prime;
        let mut acc: Lin<(Monomial, Monomial)> = Lin::single((Monomial::one(), Monomial::one()), 1, p);
        for g in &theta.0 {
            let pieces: Vec<(Monomial, Monomial)> = match *g {
                Gen::Sq(n) => (0..=n)
                    .map(|i| (single_gen(Gen::Sq(i)), single_gen(Gen::Sq(n - i))))
                    .collect(),
                Gen::P(n) => (0..=n)
                    .map(|i| (single_gen(Gen::P(i)), single_gen(Gen::P(n - i))))
                    .collect(),
                Gen::Bockstein => vec![
                    (single_gen(Gen::Bockstein), Monomial::one()),
                    (Monomial::one(), single_gen(Gen::Bockstein)),
                ],
            };
            let mut next = Lin::zero();
            for ((a, b), c) in acc.iter() {
                for (x, y) in &pieces {
                    let sign = p.sign(b.degree(p) * x.degree(p));
                    let left = self.multiply_monomials(a, x);
                    let right = self.multiply_monomials(b, y);
                    for (l, lc) in left.iter() {
                        for (r, rc) in right.iter() {
                            next.add_term((l.clone(), r.clone()), p.mul(p.mul(c, sign), p.mul(lc, rc)), p);
                        }
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Coproduct restricted to a degree window; errors if `θ` lies above it.
    pub fn coproduct_window(&self, theta: &Monomial, max_degree: i64) -> Result<Lin<(Monomial, Monomial)>> {
        let d = theta.degree(self.prime);
        if d > max_degree || d < 0 {
            return Err(Error::WindowViolation { degree: d, lo: 0, hi: max_degree });
        }
        Ok(self.coproduct(theta))
    }

    /// Coefficient of `theta` in the product `a · b`, i.e. the pairing
    /// `<θ*, a b>` that defines the coproduct of the dual algebra.
    pub fn product_coefficient(&self, theta: &Monomial, a: &Monomial, b: &Monomial) -> u32 {
        self.multiply_monomials(a, b).coeff(theta)
    }
}

fn single_gen(g: Gen) -> Monomial {
    if g.is_identity() {
        Monomial::one()
    } else {
        Monomial(vec![g])
    }
}

fn enumerate_sq(remaining: u32, max_first: u32, cur: &mut Vec<Gen>, out: &mut Vec<Vec<Gen>>) {
    if remaining == 0 {
        out.push(cur.clone());
        return;
    }
    for i in (1..=remaining.min(max_first)).rev() {
        // an admissible tail starting at j <= i/2 has degree < 2j <= i
        let rest = remaining - i;
        if rest >= i {
            continue;
        }
        cur.push(Gen::Sq(i));
        enumerate_sq(rest, i / 2, cur, out);
        cur.pop();
    }
}

/// Enumerates words `β^{ε0} P^{s1} β^{ε1} ⋯ P^{sk} β^{εk}` of the given degree
/// with `s_j >= p s_{j+1} + ε_j`; `prev` is the last `s` placed.
fn enumerate_odd(p: Prime, remaining: i64, prev: Option<u32>, cur: &mut Vec<Gen>, out: &mut Vec<Vec<Gen>>) {
    if remaining == 0 {
        out.push(cur.clone());
        return;
    }
    let step = 2 * (p.value() as i64 - 1);
    for eps in [0i64, 1] {
        let after = remaining - eps;
        if after < 0 {
            continue;
        }
        if eps == 1 {
            cur.push(Gen::Bockstein);
        }
        if after == 0 {
            out.push(cur.clone());
        } else {
            let mut max_s = after / step;
            if let Some(prev) = prev {
                max_s = max_s.min((prev as i64 - eps) / p.value() as i64);
            }
            for s in (1..=max_s).rev() {
                cur.push(Gen::P(s as u32));
                enumerate_odd(p, after - s * step, Some(s as u32), cur, out);
                cur.pop();
            }
        }
        if eps == 1 {
            cur.pop();
        }
    }
}

/// An F_p-combination of admissible monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    prime: Prime,
    terms: Lin<Monomial>,
}

impl SteenrodElement {
    pub fn new(prime: Prime, terms: Lin<Monomial>) -> SteenrodElement {
        // normalize so every term is admissible
        let alg = algebra(prime);
        let mut out = Lin::zero();
        for (m, c) in terms.iter() {
            out.add_scaled(&alg.adem_normalize(m), c, prime);
        }
        SteenrodElement { prime, terms: out }
    }

    pub fn one(prime: Prime) -> SteenrodElement {
        SteenrodElement { prime, terms: Lin::single(Monomial::one(), 1, prime) }
    }

    pub fn zero(prime: Prime) -> SteenrodElement {
        SteenrodElement { prime, terms: Lin::zero() }
    }

    pub fn from_word(prime: Prime, word: Vec<Gen>) -> SteenrodElement {
        SteenrodElement::new(prime, Lin::single(Monomial(word), 1, prime))
    }

    pub fn generator(prime: Prime, g: Gen) -> SteenrodElement {
        SteenrodElement::from_word(prime, vec![g])
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn terms(&self) -> &Lin<Monomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn product(&self, other: &SteenrodElement) -> Result<SteenrodElement> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.value(), other.prime.value()));
        }
        let p = self.prime;
        let alg = algebra(p);
        let mut out = Lin::zero();
        for (a, c) in self.terms.iter() {
            for (b, d) in other.terms.iter() {
                out.add_scaled(&alg.multiply_monomials(a, b), p.mul(c, d), p);
            }
        }
        Ok(SteenrodElement { prime: p, terms: out })
    }

    pub fn add(&self, other: &SteenrodElement) -> SteenrodElement {
        let mut t = self.terms.clone();
        t.add_scaled(&other.terms, 1, self.prime);
        SteenrodElement { prime: self.prime, terms: t }
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if c == 1 { m.to_string() } else { format!("{c} {m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
