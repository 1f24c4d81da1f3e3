//! Small deterministic modules used by tests and by `singerlab verify`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amodule::{AModule, ModuleBuilder};
use crate::gf::{BasisElement, Echelon, GradedVectorSpace, Lin, Prime};
use crate::steenrod::Gen;

const TOP: i64 = 8;
const MAX_DIM: usize = 6;

/// A random finite module with at most six basis elements in degrees `0..=8`,
/// realized as a quotient of a free module on one or two generators.
pub fn random_module(p: Prime, seed: u64) -> AModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ p.value() as u64);
    let ngen = rng.gen_range(1..=2);
    let gens: Vec<i64> = (0..ngen).map(|_| rng.gen_range(0..=3)).collect();
    let free = AModule::free_truncated(p, &gens, TOP);
    let space = free.space();
    let mut rel: BTreeMap<i64, Echelon> =
        space.degrees().into_iter().map(|d| (d, Echelon::new(p, space.dim_in_degree(d)))).collect();
    let low = *gens.iter().min().expect("one generator");

    let quotient_dim = |rel: &BTreeMap<i64, Echelon>| -> usize {
        rel.iter().map(|(d, e)| space.dim_in_degree(*d) - e.rank()).sum()
    };
    let mut extra = rng.gen_bool(0.3);
    loop {
        let qd = quotient_dim(&rel);
        if qd <= MAX_DIM && !extra {
            break;
        }
        if qd <= MAX_DIM {
            extra = false;
        }
        let candidates: Vec<i64> = rel
            .iter()
            .filter(|(d, e)| **d > low && space.dim_in_degree(**d) > e.rank())
            .map(|(d, _)| *d)
            .collect();
        let Some(&highest) = candidates.last() else { break };
        let d = if rng.gen_bool(0.5) { highest } else { candidates[rng.gen_range(0..candidates.len())] };
        let n = space.dim_in_degree(d);
        let v = loop {
            let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p.value())).collect();
            if !rel[&d].contains(&v) {
                break v;
            }
        };
        add_submodule(&free, &mut rel, d, v);
    }
    quotient(&free, &rel)
}

/// Adds the submodule generated by `v` (a vector in degree `d`) to `rel`.
fn add_submodule(free: &AModule, rel: &mut BTreeMap<i64, Echelon>, d: i64, v: Vec<u32>) {
    let p = free.prime();
    let space = free.space();
    let mut queue = vec![(d, v)];
    while let Some((d, v)) = queue.pop() {
        if !rel.get_mut(&d).expect("degree in range").insert(v.clone()) {
            continue;
        }
        let start = space.indices_in_degree(d).start;
        let elem: Lin<usize> = v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (start + j, *c)).collect();
        for g in Gen::all_up_to(p, TOP - d) {
            let img = free.act_on(g, &elem).expect("inside the free window");
            let e = d + g.degree(p);
            let range = space.indices_in_degree(e);
            let mut w = vec![0; range.len()];
            for (i, c) in img.iter() {
                w[i - range.start] = c;
            }
            if w.iter().any(|&c| c != 0) {
                queue.push((e, w));
            }
        }
    }
}

fn quotient(free: &AModule, rel: &BTreeMap<i64, Echelon>) -> AModule {
    let p = free.prime();
    let space = free.space();
    // survivors: free basis elements at non-pivot coordinates
    let mut survivors = Vec::new();
    for (d, e) in rel {
        let pivots = e.pivots();
        let range = space.indices_in_degree(*d);
        for j in 0..range.len() {
            if !pivots.contains(&j) {
                survivors.push(range.start + j);
            }
        }
    }
    let basis: Vec<BasisElement> = survivors.iter().map(|&i| space.basis()[i].clone()).collect();
    let qspace = GradedVectorSpace::tight(p, basis).expect("quotient basis");
    let qidx = |i: usize| qspace.index_of(space.name_of(i)).expect("survivor");
    let mut actions = Vec::new();
    for &i in &survivors {
        let d = space.degree_of(i);
        for g in Gen::all_up_to(p, TOP - d) {
            let img = free.act_on(g, &Lin::single(i, 1, p)).expect("inside the free window");
            let e = d + g.degree(p);
            if img.is_zero() {
                continue;
            }
            let range = space.indices_in_degree(e);
            let mut w = vec![0; range.len()];
            for (k, c) in img.iter() {
                w[k - range.start] = c;
            }
            let w = rel[&e].reduce(w);
            let v: Lin<usize> =
                w.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (qidx(range.start + j), *c)).collect();
            actions.push(((g, qidx(i)), v));
        }
    }
    AModule::new(qspace, actions, false).expect("quotient of a module")
}

pub fn random_modules(p: Prime, seed: u64, count: usize) -> Vec<AModule> {
    (0..count as u64).map(|k| random_module(p, seed.wrapping_add(k))).collect()
}

/// Hand-written fixtures: the point, the mod p Moore space, and the cones on
/// the first Hopf-type classes (plus the joker at p = 2).
pub fn standard(p: Prime) -> Vec<(String, AModule)> {
    let mut out = vec![("point".to_string(), AModule::trivial(p, "a", 0))];
    let bock = if p.is_two() { Gen::Sq(1) } else { Gen::Bockstein };
    let moore = ModuleBuilder::new(p).element("a", 0).element("b", 1).action(bock, "a", &[("b", 1)]);
    out.push(("moore".into(), moore.build().expect("moore")));
    let (g, d) = if p.is_two() { (Gen::Sq(2), 2) } else { (Gen::P(1), 2 * (p.value() as i64 - 1)) };
    let cone = ModuleBuilder::new(p).element("a", 0).element("b", d).action(g, "a", &[("b", 1)]);
    out.push(("cone".into(), cone.build().expect("cone")));
    if p.is_two() {
        let joker = ModuleBuilder::new(p)
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
            .action(Gen::Sq(4), "a0", &[("a4", 1)]);
        out.push(("joker".into(), joker.build().expect("joker")));
    } else {
        // a, βa, P^1 a, βP^1 a with P^1 β a = βP^1 a
        let d = 2 * (p.value() as i64 - 1);
        let m = ModuleBuilder::new(p)
            .element("a", 0)
            .element("b", 1)
            .element("c", d)
            .element("e", d + 1)
            .action(Gen::Bockstein, "a", &[("b", 1)])
            .action(Gen::P(1), "a", &[("c", 1)])
            .action(Gen::P(1), "b", &[("e", 1)])
            .action(Gen::Bockstein, "c", &[("e", 1)]);
        out.push(("moore-cone".into(), m.build().expect("moore-cone")));
    }
    out
}

/// Standard fixtures followed by `random` seeded modules.
pub fn fixture_modules(p: Prime, seed: u64, random: usize) -> Vec<(String, AModule)> {
    let mut out = standard(p);
    for (k, m) in random_modules(p, seed, random).into_iter().enumerate() {
        out.push((format!("random-{}", seed.wrapping_add(k as u64)), m));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid_and_small() {
        for p in [2, 3, 5] {
            let p = Prime::new(p).unwrap();
            for (name, m) in fixture_modules(p, 7, 25) {
                assert!(m.dim() <= MAX_DIM, "{name} too big");
                assert!(m.dim() > 0, "{name} empty");
                assert!(!name.starts_with("random") || m.top().unwrap() <= TOP);
                let v = m.validate_action();
                assert!(v.is_empty(), "{name} at p={p}: {}", v[0]);
            }
        }
    }

    #[test]
    fn random_modules_are_deterministic_and_varied() {
        let p = Prime::new(2).unwrap();
        assert_eq!(random_module(p, 3), random_module(p, 3));
        let ms = random_modules(p, 0, 10);
        let nontrivial = ms.iter().filter(|m| !m.action_table().is_empty()).count();
        assert!(nontrivial >= 5, "only {nontrivial} modules with actions");
    }
}
