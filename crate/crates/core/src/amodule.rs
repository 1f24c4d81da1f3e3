//! Modules over the Steenrod algebra, presented on a degree window by full
//! action tables, together with their duals as windowed comodules.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{dual_name, BasisElement, GradedLinearMap, GradedVectorSpace, Lin, Prime};
use crate::steenrod::{algebra, Gen, Monomial, SteenrodElement};

/// Result of acting by one generator on one basis element.
///
/// `BeyondWindow` is only produced by truncated modules, where the value lies
/// above the known window and is not a genuine zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionValue {
    Zero,
    Nonzero(Lin<usize>),
    BeyondWindow,
}

/// A module over the Steenrod algebra on a finite window.
///
/// `truncated` marks a module that continues above the window top; actions
/// landing there are unknown rather than zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AModule {
    prime: Prime,
    space: GradedVectorSpace,
    actions: BTreeMap<(Gen, usize), Lin<usize>>,
    truncated: bool,
}

impl AModule {
    /// Builds a module from its action table. Entries for `Sq^0`/`P^0` are
    /// rejected; missing entries are zero.
    pub fn new(
        space: GradedVectorSpace,
        actions: impl IntoIterator<Item = ((Gen, usize), Lin<usize>)>,
        truncated: bool,
    ) -> Result<AModule> {
        let prime = space.prime();
        let mut table = BTreeMap::new();
        for ((g, i), v) in actions {
            if g.is_identity() || !g.valid_for(prime) {
                return Err(Error::InvalidModule(format!("generator {g} is not allowed at p = {prime}")));
            }
            if i >= space.dim() {
                return Err(Error::InvalidModule(format!("basis index {i} out of range")));
            }
            let want = space.degree_of(i) + g.degree(prime);
            for (j, _) in v.iter() {
                if *j >= space.dim() || space.degree_of(*j) != want {
                    return Err(Error::InvalidModule(format!(
                        "{g} on {} must land in degree {want}",
                        space.name_of(i)
                    )));
                }
            }
            if !v.is_zero() {
                table.insert((g, i), v);
            }
        }
        Ok(AModule { prime, space, actions: table, truncated })
    }

    /// `F_p` concentrated in `degree`, on a basis element named `name`.
    pub fn trivial(prime: Prime, name: &str, degree: i64) -> AModule {
        let space = GradedVectorSpace::tight(prime, vec![BasisElement { name: name.into(), degree }])
            .expect("one-element space");
        AModule::new(space, [], false).expect("trivial module")
    }

    pub fn zero(prime: Prime) -> AModule {
        AModule::new(GradedVectorSpace::tight(prime, Vec::new()).expect("empty"), [], false).expect("zero")
    }

    /// The free module on generators of the given degrees, truncated above `top`.
    pub fn free_truncated(prime: Prime, gens: &[i64], top: i64) -> AModule {
        let alg = algebra(prime);
        let mut basis = Vec::new();
        let mut keys = Vec::new();
        for (g, &d) in gens.iter().enumerate() {
            for e in d..=top {
                for m in alg.admissible_basis(e - d).iter() {
                    basis.push(BasisElement { name: format!("g{g}[{m}]"), degree: e });
                    keys.push((g, m.clone()));
                }
            }
        }
        let lo = gens.iter().copied().min().unwrap_or(0).min(top);
        let space = GradedVectorSpace::new(prime, basis.clone(), (lo, top)).expect("free basis");
        let idx: BTreeMap<(usize, Monomial), usize> = keys
            .iter()
            .zip(&basis)
            .map(|(k, b)| (k.clone(), space.index_of(&b.name).expect("present")))
            .collect();
        let mut actions = Vec::new();
        for ((g, m), &i) in &idx {
            let d = space.degree_of(i);
            for gen in Gen::all_up_to(prime, top - d) {
                let prod = alg.multiply_monomials(&Monomial(vec![gen]), m);
                let v = prod.map_keys(prime, |mm| idx[&(*g, mm.clone())]);
                actions.push(((gen, i), v));
            }
        }
        AModule::new(space, actions, true).expect("free module")
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }
    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }
    pub fn window(&self) -> (i64, i64) {
        self.space.window()
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }
    pub fn degree_of(&self, i: usize) -> i64 {
        self.space.degree_of(i)
    }
    pub fn name_of(&self, i: usize) -> &str {
        self.space.name_of(i)
    }

    /// Largest degree up to which the module is fully known.
    pub fn horizon(&self) -> Option<i64> {
        self.truncated.then(|| self.window().1)
    }

    /// Lowest occupied degree.
    pub fn bottom(&self) -> Option<i64> {
        self.space.basis().first().map(|b| b.degree)
    }

    pub fn top(&self) -> Option<i64> {
        self.space.basis().last().map(|b| b.degree)
    }

    pub fn action_table(&self) -> &BTreeMap<(Gen, usize), Lin<usize>> {
        &self.actions
    }

    pub fn act(&self, g: Gen, i: usize) -> ActionValue {
        if g.is_identity() {
            return ActionValue::Nonzero(Lin::single(i, 1, self.prime));
        }
        let target = self.degree_of(i) + g.degree(self.prime);
        if target > self.window().1 {
            return if self.truncated { ActionValue::BeyondWindow } else { ActionValue::Zero };
        }
        match self.actions.get(&(g, i)) {
            Some(v) => ActionValue::Nonzero(v.clone()),
            None => ActionValue::Zero,
        }
    }

    /// `g · m`, or a truncation error when part of it lies beyond the window.
    pub fn act_on(&self, g: Gen, m: &Lin<usize>) -> Result<Lin<usize>> {
        let p = self.prime;
        let mut out = Lin::zero();
        for (i, c) in m.iter() {
            match self.act(g, *i) {
                ActionValue::Zero => {}
                ActionValue::Nonzero(v) => out.add_scaled(&v, c, p),
                ActionValue::BeyondWindow => {
                    return Err(Error::WindowTruncation {
                        what: format!("{g} on {}", self.name_of(*i)),
                        degree: self.degree_of(*i) + g.degree(p),
                        hi: self.window().1,
                    })
                }
            }
        }
        Ok(out)
    }

    /// Applies a word right to left.
    pub fn apply_word(&self, word: &[Gen], m: &Lin<usize>) -> Result<Lin<usize>> {
        let mut cur = m.clone();
        for g in word.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.act_on(*g, &cur)?;
        }
        Ok(cur)
    }

    /// Linear extension of the action table along the admissible form of `theta`.
    pub fn apply(&self, theta: &SteenrodElement, m: &Lin<usize>) -> Result<Lin<usize>> {
        if theta.prime() != self.prime {
            return Err(Error::PrimeMismatch(theta.prime().value(), self.prime.value()));
        }
        let p = self.prime;
        let mut out = Lin::zero();
        for (mono, c) in theta.terms().iter() {
            out.add_scaled(&self.apply_word(mono.gens(), m)?, c, p);
        }
        Ok(out)
    }

    pub fn apply_monomial(&self, mono: &Monomial, m: &Lin<usize>) -> Result<Lin<usize>> {
        self.apply_word(mono.gens(), m)
    }

    /// Every (relation, basis element) pair where an Adem relation fails inside
    /// the window. Pairs that would need values beyond a truncated window are skipped.
    pub fn validate_action(&self) -> Vec<Violation> {
        let p = self.prime;
        let Some(bottom) = self.bottom() else {
            return Vec::new();
        };
        let span = self.window().1 - bottom;
        let relations = algebra(p).adem_relations(span);
        let mut out = Vec::new();
        for i in 0..self.dim() {
            let m = Lin::single(i, 1, p);
            for rel in &relations {
                let Ok(lhs) = self.apply_word(&rel.lhs, &m) else { continue };
                let mut rhs = Lin::zero();
                let mut known = true;
                for (w, c) in &rel.rhs {
                    match self.apply_word(w, &m) {
                        Ok(v) => rhs.add_scaled(&v, *c, p),
                        Err(_) => {
                            known = false;
                            break;
                        }
                    }
                }
                if known && lhs != rhs {
                    out.push(Violation {
                        relation: rel.to_string(),
                        element: self.name_of(i).to_string(),
                        lhs: self.render(&lhs),
                        rhs: self.render(&rhs),
                    });
                }
            }
        }
        out
    }

    pub fn render(&self, v: &Lin<usize>) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| if c == 1 { self.name_of(*i).to_string() } else { format!("{c}*{}", self.name_of(*i)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Shifts every degree by `k`; the action table is unchanged.
    pub fn suspend(&self, k: i64) -> AModule {
        let space = self.space.shifted(k);
        // shifting keeps the (degree, name) order, so indices carry over
        AModule { prime: self.prime, space, actions: self.actions.clone(), truncated: self.truncated }
    }

    /// Restriction to degrees `>= lo` (a submodule), keeping names.
    pub fn restrict_below(&self, lo: i64) -> AModule {
        let keep: Vec<usize> = (0..self.dim()).filter(|&i| self.degree_of(i) >= lo).collect();
        let basis: Vec<BasisElement> = keep.iter().map(|&i| self.space.basis()[i].clone()).collect();
        let (_, hi) = self.window();
        let space = GradedVectorSpace::new(self.prime, basis, (lo.min(hi), hi)).expect("sub-basis");
        let remap = |i: usize| space.index_of(self.name_of(i)).expect("kept");
        let actions: Vec<_> = self
            .actions
            .iter()
            .filter(|((_, i), _)| self.degree_of(*i) >= lo)
            .map(|((g, i), v)| ((*g, remap(*i)), v.map_keys(self.prime, |j| remap(*j))))
            .collect();
        AModule::new(space, actions, self.truncated).expect("restriction of a module")
    }
}

/// A failed Adem relation on a basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub relation: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails on {}: {} != {}", self.relation, self.element, self.lhs, self.rhs)
    }
}

/// An A-linear map between windowed modules.
#[derive(Debug, Clone)]
pub struct AModuleMap {
    pub source: AModule,
    pub target: AModule,
    pub map: GradedLinearMap,
}

impl AModuleMap {
    pub fn new(source: AModule, target: AModule, map: GradedLinearMap) -> Result<AModuleMap> {
        if map.source() != source.space() || map.target() != target.space() {
            return Err(Error::Dimension("map spaces differ from module spaces".into()));
        }
        Ok(AModuleMap { source, target, map })
    }

    pub fn degree_shift(&self) -> i64 {
        self.map.degree_shift()
    }

    pub fn image(&self, m: &Lin<usize>) -> Lin<usize> {
        let p = self.source.prime();
        let mut out = Lin::zero();
        for (i, c) in m.iter() {
            for &(j, d) in self.map.column(*i) {
                out.add_term(j, p.mul(c, d), p);
            }
        }
        out
    }

    /// Basis elements and generators where `f(g m) != g f(m)` inside both windows.
    pub fn linearity_failures(&self) -> Vec<String> {
        let p = self.source.prime();
        let span = self.source.window().1.max(self.target.window().1 - self.degree_shift()) - self.source.window().0;
        let gens = Gen::all_up_to(p, span.max(0));
        let mut out = Vec::new();
        for i in 0..self.source.dim() {
            let m = Lin::single(i, 1, p);
            for g in &gens {
                let Ok(gm) = self.source.act_on(*g, &m) else { continue };
                let Ok(gfm) = self.target.act_on(*g, &self.image(&m)) else { continue };
                let fgm = self.image(&gm);
                if fgm != gfm {
                    out.push(format!(
                        "{g} on {}: f(g m) = {} but g f(m) = {}",
                        self.source.name_of(i),
                        self.target.render(&fgm),
                        self.target.render(&gfm)
                    ));
                }
            }
        }
        out
    }
}

/// The dual of a windowed module as a comodule with completed coaction.
///
/// Dual basis elements carry homological degree `q` (dual to cohomological
/// degree `q`). `coaction[b]` lists `(I, I_*(b))` for admissible `I` with
/// `deg I <= bound`, where `I_*(b)(m) = b(I m)`.
#[derive(Debug, Clone)]
pub struct CompleteComoduleWindow {
    prime: Prime,
    dual_space: GradedVectorSpace,
    bound: i64,
    coaction: Vec<Vec<(Monomial, Lin<usize>)>>,
}

impl CompleteComoduleWindow {
    pub fn dual_space(&self) -> &GradedVectorSpace {
        &self.dual_space
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Coaction components of dual basis element `b` (indexed as in `dual_space`).
    pub fn coaction(&self, b: usize) -> &[(Monomial, Lin<usize>)] {
        &self.coaction[b]
    }

    pub fn component(&self, b: usize, theta: &Monomial) -> Lin<usize> {
        self.coaction[b]
            .iter()
            .find(|(m, _)| m == theta)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    }

    /// The component at `I = 1` is the element itself.
    pub fn counit_holds(&self) -> bool {
        (0..self.dual_space.dim())
            .all(|b| self.component(b, &Monomial::one()) == Lin::single(b, 1, self.prime))
    }

    /// `(ψ ⊗ 1) ν = (1 ⊗ ν) ν` on all pairs `(J, K)` with `deg J + deg K <= bound`.
    /// Returns the failing `(element, J, K)` triples.
    pub fn coassociativity_failures(&self) -> Vec<String> {
        let p = self.prime;
        let alg = algebra(p);
        let mut out = Vec::new();
        for b in 0..self.dual_space.dim() {
            for dj in 0..=self.bound {
                for dk in 0..=(self.bound - dj) {
                    for j in alg.admissible_basis(dj).iter() {
                        for k in alg.admissible_basis(dk).iter() {
                            // Σ_I <I*, J K> I_*(b)
                            let mut lhs = Lin::zero();
                            for (i, c) in alg.multiply_monomials(j, k).iter() {
                                lhs.add_scaled(&self.component(b, i), c, p);
                            }
                            // K_*(J_*(b))
                            let mut rhs = Lin::zero();
                            for (x, c) in self.component(b, j).iter() {
                                rhs.add_scaled(&self.component(*x, k), c, p);
                            }
                            if lhs != rhs {
                                out.push(format!("{} with J = {j}, K = {k}", self.dual_space.name_of(b)));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Continuous dual: rebuilds the module from the generator components.
    pub fn to_module(&self) -> Result<AModule> {
        let p = self.prime;
        let basis: Vec<BasisElement> = self
            .dual_space
            .basis()
            .iter()
            .map(|b| BasisElement { name: dual_name(&b.name), degree: b.degree })
            .collect();
        let space = GradedVectorSpace::tight(p, basis)?;
        let to_mod = |b: usize| space.index_of(&dual_name(self.dual_space.name_of(b))).expect("dual name");
        let mut actions: BTreeMap<(Gen, usize), Lin<usize>> = BTreeMap::new();
        for b in 0..self.dual_space.dim() {
            for (mono, v) in &self.coaction[b] {
                if let [g] = mono.gens() {
                    // <b, g m> = coefficient of m* in g_*(b)
                    for (m, c) in v.iter() {
                        let entry = actions.entry((*g, to_mod(*m))).or_default();
                        entry.add_term(to_mod(b), c, p);
                    }
                }
            }
        }
        AModule::new(space, actions, false)
    }
}

/// Transposes the action of `M` against the admissible basis, up to `bound`.
pub fn dual_comodule(module: &AModule, bound: i64) -> Result<CompleteComoduleWindow> {
    if module.is_truncated() {
        return Err(Error::Domain("dual comodule needs a module known in every degree".into()));
    }
    let p = module.prime();
    let alg = algebra(p);
    let basis: Vec<BasisElement> = module
        .space()
        .basis()
        .iter()
        .map(|b| BasisElement { name: dual_name(&b.name), degree: b.degree })
        .collect();
    let dual_space = GradedVectorSpace::tight(p, basis)?;
    let from_mod = |i: usize| dual_space.index_of(&dual_name(module.name_of(i))).expect("dual name");
    let mut coaction = vec![Vec::new(); dual_space.dim()];
    for (i, slot) in (0..module.dim()).map(|i| (i, from_mod(i))).collect::<Vec<_>>() {
        let q = module.degree_of(i);
        for d in 0..=bound {
            for mono in alg.admissible_basis(d).iter() {
                let mut comp = Lin::zero();
                for src in module.space().indices_in_degree(q - d) {
                    let img = module.apply_monomial(mono, &Lin::single(src, 1, p))?;
                    comp.add_term(from_mod(src), img.coeff(&i), p);
                }
                if !comp.is_zero() {
                    coaction[slot].push((mono.clone(), comp));
                }
            }
        }
    }
    Ok(CompleteComoduleWindow { prime: p, dual_space, bound, coaction })
}

/// Builds modules by name-based action lists.
pub struct ModuleBuilder {
    prime: Prime,
    basis: Vec<BasisElement>,
    actions: Vec<(Gen, String, Vec<(String, u32)>)>,
    window: Option<(i64, i64)>,
}

impl ModuleBuilder {
    pub fn new(prime: Prime) -> ModuleBuilder {
        ModuleBuilder { prime, basis: Vec::new(), actions: Vec::new(), window: None }
    }

    pub fn element(mut self, name: &str, degree: i64) -> Self {
        self.basis.push(BasisElement { name: name.into(), degree });
        self
    }

    pub fn action(mut self, g: Gen, src: &str, dst: &[(&str, u32)]) -> Self {
        self.actions.push((g, src.into(), dst.iter().map(|(n, c)| (n.to_string(), *c)).collect()));
        self
    }

    /// Marks the module as a truncation known on `window`.
    pub fn window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn build(self) -> Result<AModule> {
        let p = self.prime;
        let (space, truncated) = match self.window {
            Some(w) => (GradedVectorSpace::new(p, self.basis, w)?, true),
            None => (GradedVectorSpace::tight(p, self.basis)?, false),
        };
        let lookup = |n: &str| {
            space.index_of(n).ok_or_else(|| Error::InvalidModule(format!("unknown basis element {n}")))
        };
        let mut actions = Vec::new();
        for (g, src, dst) in &self.actions {
            let mut v = Lin::zero();
            for (n, c) in dst {
                v.add_term(lookup(n)?, p.reduce(*c as i64), p);
            }
            actions.push(((*g, lookup(src)?), v));
        }
        let mut merged: BTreeMap<(Gen, usize), Lin<usize>> = BTreeMap::new();
        for (k, v) in actions {
            merged.entry(k).or_default().add_scaled(&v, 1, p);
        }
        AModule::new(space, merged, truncated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::dualize;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn joker() -> AModule {
        // F_2{a0, a1, a2, a3, a4} with Sq^1, Sq^2 as in H^*(joker)
        ModuleBuilder::new(pr(2))
            .element("a0", 0)
            .element("a1", 1)
            .element("a2", 2)
            .element("a3", 3)
            .element("a4", 4)
            .action(Gen::Sq(1), "a0", &[("a1", 1)])
            .action(Gen::Sq(2), "a0", &[("a2", 1)])
            .action(Gen::Sq(2), "a1", &[("a3", 1)])
            .action(Gen::Sq(1), "a3", &[("a4", 1)])
            .action(Gen::Sq(2), "a2", &[("a4", 1)])
            .action(Gen::Sq(3), "a1", &[("a4", 1)])
            .action(Gen::Sq(4), "a0", &[("a4", 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn trivial_module_is_valid() {
        for p in [2, 3, 5] {
            assert!(AModule::trivial(pr(p), "a", 0).validate_action().is_empty());
        }
    }

    #[test]
    fn defect_is_reported() {
        let m = ModuleBuilder::new(pr(2))
            .element("a", 0)
            .element("b", 1)
            .element("c", 2)
            .action(Gen::Sq(1), "a", &[("b", 1)])
            .action(Gen::Sq(1), "b", &[("c", 1)])
            .build()
            .unwrap();
        let v = m.validate_action();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].relation.starts_with("Sq^1 Sq^1"));
        assert_eq!(v[0].element, "a");
    }

    #[test]
    fn joker_and_free_modules_are_valid() {
        assert!(joker().validate_action().is_empty());
        for p in [2, 3] {
            let f = AModule::free_truncated(pr(p), &[0, 3], 14);
            assert!(f.validate_action().is_empty());
            assert!(f.is_truncated());
        }
    }

    #[test]
    fn truncated_values_are_flagged() {
        let f = AModule::free_truncated(pr(2), &[0], 3);
        let top = f.space().indices_in_degree(3).start;
        assert_eq!(f.act(Gen::Sq(1), top), ActionValue::BeyondWindow);
        let t = AModule::trivial(pr(2), "a", 0);
        assert_eq!(t.act(Gen::Sq(1), 0), ActionValue::Zero);
    }

    #[test]
    fn apply_examples() {
        let p = pr(2);
        let j = joker();
        let a0 = Lin::single(0, 1, p);
        assert_eq!(j.apply(&SteenrodElement::one(p), &a0).unwrap(), a0);
        let t = AModule::trivial(p, "a", 0);
        assert!(t.apply(&SteenrodElement::generator(p, Gen::Sq(1)), &a0).unwrap().is_zero());
        let sq21 = SteenrodElement::from_word(p, vec![Gen::Sq(2), Gen::Sq(1)]);
        let step = j.act_on(Gen::Sq(1), &a0).unwrap();
        assert_eq!(j.apply(&sq21, &a0).unwrap(), j.act_on(Gen::Sq(2), &step).unwrap());
        // Sq^1 Sq^2 normalizes to Sq^3, which kills a0
        let sq12 = SteenrodElement::from_word(p, vec![Gen::Sq(1), Gen::Sq(2)]);
        assert!(j.apply(&sq12, &a0).unwrap().is_zero());
        let a1 = Lin::single(1, 1, p);
        assert_eq!(j.apply(&SteenrodElement::generator(p, Gen::Sq(3)), &a1).unwrap(), Lin::single(4, 1, p));
        let f = AModule::free_truncated(p, &[0], 2);
        assert!(matches!(
            f.apply(&SteenrodElement::generator(p, Gen::Sq(3)), &Lin::single(0, 1, p)),
            Err(Error::WindowTruncation { .. })
        ));
    }

    #[test]
    fn suspension_examples() {
        let p = pr(3);
        let t = AModule::trivial(p, "a", 0).suspend(5);
        assert_eq!(t.degree_of(0), 5);
        let j = joker();
        assert_eq!(j.suspend(0), j);
        assert_eq!(j.suspend(7).suspend(-7), j);
        let k = 3;
        let id = GradedLinearMap::identity(j.space().clone());
        let id_s = GradedLinearMap::identity(j.suspend(k).space().clone());
        let d1 = dualize(&id_s);
        let d2 = dualize(&id);
        assert_eq!(d1.source(), &d2.source().shifted(-k));
    }

    #[test]
    fn dual_comodule_examples() {
        let p = pr(2);
        let t = dual_comodule(&AModule::trivial(p, "a", 0), 6).unwrap();
        assert!(t.counit_holds());
        assert_eq!(t.coaction(0).len(), 1);

        let free = AModule::free_truncated(p, &[0], 3);
        assert!(dual_comodule(&free, 3).is_err());
        // the finite quotient A/(A_{>3}) has the same low coaction
        let fin = AModule::new(free.space().clone(), free.action_table().clone(), false).unwrap();
        let c = dual_comodule(&fin, 3).unwrap();
        let one_dual = c.dual_space().index_of("g0[1]*").unwrap();
        let sq1_dual = c.dual_space().index_of("g0[Sq^1]*").unwrap();
        let comp = c.component(sq1_dual, &Monomial(vec![Gen::Sq(1)]));
        assert_eq!(comp, Lin::single(one_dual, 1, p));
        assert!(c.counit_holds());
        assert!(c.coassociativity_failures().is_empty());

        let j = joker();
        let cj = dual_comodule(&j, 8).unwrap();
        assert!(cj.coassociativity_failures().is_empty());
        assert_eq!(cj.to_module().unwrap(), j);
    }

    #[test]
    fn map_linearity() {
        let p = pr(2);
        let j = joker();
        let id = AModuleMap::new(j.clone(), j.clone(), GradedLinearMap::identity(j.space().clone())).unwrap();
        assert!(id.linearity_failures().is_empty());
        let t = AModule::trivial(p, "a", 0);
        let mut cols = vec![Vec::new(); 5];
        cols[0] = vec![(0, 1)];
        let f = GradedLinearMap::new(j.space().clone(), t.space().clone(), 0, cols).unwrap();
        assert!(AModuleMap::new(j.clone(), t.clone(), f).unwrap().linearity_failures().is_empty());
        let g = GradedLinearMap::new(t.space().clone(), j.space().clone(), 0, vec![vec![(0, 1)]]).unwrap();
        assert!(!AModuleMap::new(t, j.clone(), g).unwrap().linearity_failures().is_empty());
        // top class inclusion F_2 -> joker (degree 4) is A-linear
        let top = AModule::trivial(p, "t", 4);
        let g = GradedLinearMap::new(top.space().clone(), j.space().clone(), 0, vec![vec![(4, 1)]]).unwrap();
        assert!(AModuleMap::new(top, j, g).unwrap().linearity_failures().is_empty());
    }
}
