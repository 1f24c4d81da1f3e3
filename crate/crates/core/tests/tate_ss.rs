use singerlab::cyclic::LambdaRing;
use singerlab::extpower::{omega, stage_cutoff, diagonal_classes};
use singerlab::fixtures::fixture_modules;
use singerlab::tate_ss::{
    certify_collapse, e2_page, filtration_compare, lambda_action_on_page, representative_failures,
    representative_homological, singer_count_failures, Variance,
};
use singerlab::Prime;

#[test]
fn collapse_and_filtrations_on_fixtures() {
    for p in [2, 3, 5] {
        let p = Prime::new(p).unwrap();
        for (name, m) in fixture_modules(p, 17, 4) {
            let top = p.value() as i64 * m.top().unwrap();
            let r = certify_collapse(m.space(), (-10, 10), (0, top), Variance::Homological);
            assert!(r.is_certified(), "{name} p={p}: {r:?}");
            let r = certify_collapse(m.space(), (-10, 10), (0, top), Variance::Cohomological);
            assert!(r.is_certified(), "{name} p={p}: {r:?}");
            for n in -6..=6 {
                let bad = filtration_compare(&m, n, (-12, 20));
                assert!(bad.is_empty(), "{name} p={p} n={n}: {bad:?}");
            }
            let bad = representative_failures(&m, (-8, 16));
            assert!(bad.is_empty(), "{name} p={p}: {bad:?}");
            let bad = singer_count_failures(&m, (-8, 8), (0, top));
            assert!(bad.is_empty(), "{name} p={p}: {bad:?}");
        }
    }
}

#[test]
fn dual_pages_agree() {
    for p in [2, 3] {
        let p = Prime::new(p).unwrap();
        for (name, m) in fixture_modules(p, 2, 3) {
            let top = p.value() as i64 * m.top().unwrap();
            let h = e2_page(m.space(), (-6, 6), (0, top), Variance::Homological);
            let c = e2_page(m.space(), (-6, 6), (0, top), Variance::Cohomological);
            assert_eq!(h.dims(), c.dims(), "{name} p={p}");
        }
    }
}

#[test]
fn lambda_action_commutes_with_representatives() {
    let p = Prime::new(3).unwrap();
    let ring = LambdaRing::new(p);
    for (_, m) in fixture_modules(p, 4, 2) {
        let b = m.space();
        for a in 0..b.dim() {
            for r in -3..=3 {
                let x = representative_homological(0, r, a, b);
                // u · (t^r ⊗ α) = u t^r ⊗ α
                let ux = representative_homological(1, r, a, b);
                let acted = lambda_action_on_page(&ring.u(), &x.class, p);
                assert_eq!(acted, vec![(ux.class, 1)]);
                let tx = representative_homological(0, r + 1, a, b);
                assert_eq!(lambda_action_on_page(&ring.t_pow(1), &x.class, p), vec![(tx.class, 1)]);
                assert_eq!(tx.class.s, x.class.s - 2);
            }
        }
    }
}

#[test]
fn tower_stage_matches_cutoff() {
    for p in [2, 3, 5] {
        let p = Prime::new(p).unwrap();
        for (_, m) in fixture_modules(p, 8, 2) {
            for n in -3..=3 {
                let cutoff = stage_cutoff(p, n);
                for d in -6..=14 {
                    for c in diagonal_classes(&m, n, d) {
                        let w = omega(&c, &m).unwrap();
                        for (e, _) in w.terms.iter() {
                            assert!(e.fil(&m) >= cutoff);
                        }
                    }
                }
            }
        }
    }
}
