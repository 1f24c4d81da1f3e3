//! Invariant suites run by `singerlab verify`. Each suite is deterministic
//! given the prime, the seed and the modules it runs on.

use std::fmt;
use std::fmt::Write as _;

use crate::amodule::AModule;
use crate::cyclic::{permutation_module, random_cp_module, tate_cohomology, tate_homology, CpModule};
use crate::error::Result;
use crate::extpower::{omega_bijection_failures, omega_tower_failures, verify_coeff_identities};
use crate::fixtures::fixture_modules;
use crate::gf::{BasisElement, GradedVectorSpace, Prime};
use crate::singer::{epsilon_star, maximal_algebraic_test, rplus_truncation, DualSingerElement, Verdict};
use crate::tate_ss::{certify_collapse, filtration_compare, representative_failures, singer_count_failures, Variance};

/// Random fixtures added to the standard ones when no input module is given.
pub const RANDOM_FIXTURES: usize = 10;
/// Filtration levels checked by the Singer suites.
pub const LEVELS: std::ops::RangeInclusive<i64> = -4..=4;
/// Degree window of width 24 used for every truncation.
pub const WINDOW: (i64, i64) = (-8, 16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Adem,
    Epsilon,
    Omega,
    Filtration,
    Duality,
    Maxalg,
    Coeffs,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Adem, Suite::Epsilon, Suite::Omega, Suite::Filtration, Suite::Duality, Suite::Maxalg, Suite::Coeffs];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Adem => "adem",
            Suite::Epsilon => "epsilon",
            Suite::Omega => "omega",
            Suite::Filtration => "filtration",
            Suite::Duality => "duality",
            Suite::Maxalg => "maxalg",
            Suite::Coeffs => "coeffs",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Failures listed by [`SuiteReport::render`].
const SHOWN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub prime: Prime,
    pub seed: u64,
    pub checks: usize,
    /// One line per violated invariant, naming the witness.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "pass" } else { "fail" };
        let _ = writeln!(
            out,
            "{} p={} seed={}: {verdict} ({} checks, {} failures)",
            self.suite,
            self.prime,
            self.seed,
            self.checks,
            self.failures.len()
        );
        for f in self.failures.iter().take(SHOWN) {
            let _ = writeln!(out, "  {f}");
        }
        if self.failures.len() > SHOWN {
            let _ = writeln!(out, "  ... {} more", self.failures.len() - SHOWN);
        }
        out
    }
}

/// The modules a suite runs on: `input` alone, or the seeded fixtures.
pub fn suite_modules(p: Prime, seed: u64, input: Option<&AModule>) -> Vec<(String, AModule)> {
    match input {
        Some(m) => vec![("input".into(), m.clone())],
        None => fixture_modules(p, seed, RANDOM_FIXTURES),
    }
}

pub fn run_suite(suite: Suite, p: Prime, seed: u64, input: Option<&AModule>) -> Result<SuiteReport> {
    let modules = suite_modules(p, seed, input);
    let mut r = SuiteReport { suite, prime: p, seed, checks: 0, failures: Vec::new() };
    match suite {
        Suite::Adem => adem(&modules, &mut r),
        Suite::Epsilon => epsilon(&modules, &mut r),
        Suite::Omega => omega(&modules, &mut r),
        Suite::Filtration => filtration(&modules, &mut r),
        Suite::Duality => duality(&modules, &mut r),
        Suite::Maxalg => maxalg(&modules, &mut r)?,
        Suite::Coeffs => {
            r.checks = 2 * 101;
            r.failures = verify_coeff_identities(p, -50..=50);
        }
    }
    Ok(r)
}

fn adem(modules: &[(String, AModule)], r: &mut SuiteReport) {
    for (name, m) in modules {
        r.checks += 1;
        r.failures.extend(m.validate_action().into_iter().map(|v| format!("{name}: {v}")));
        for n in LEVELS {
            r.checks += 1;
            match rplus_truncation(m, n, WINDOW) {
                Ok(t) => {
                    let v = t.module().validate_action();
                    r.failures.extend(v.into_iter().map(|v| format!("{name} F^{n}R+: {v}")));
                }
                Err(e) => r.failures.push(format!("{name} F^{n}R+: {e}")),
            }
        }
    }
}

/// ε is checked for A-linearity on every `F^n R_+(M)` and for surjectivity
/// on the whole of `R_+(M)` in the window.
fn epsilon(modules: &[(String, AModule)], r: &mut SuiteReport) {
    for (name, m) in modules {
        let p = m.prime();
        let Some(top) = m.top() else { continue };
        let all = WINDOW.0 - p.value() as i64 * top - 1;
        for n in LEVELS.chain([all]) {
            r.checks += 1;
            let eps = match rplus_truncation(m, n, WINDOW).and_then(|t| t.epsilon_map()) {
                Ok(e) => e,
                Err(e) => {
                    r.failures.push(format!("{name} F^{n}R+: {e}"));
                    continue;
                }
            };
            r.failures.extend(eps.linearity_failures().into_iter().map(|f| format!("{name} F^{n}R+: {f}")));
            if n != all {
                continue;
            }
            for d in m.space().degrees() {
                if !(WINDOW.0..=WINDOW.1).contains(&d) {
                    continue;
                }
                let rank = eps.map.matrix_in_degree(d).rank();
                let want = m.space().dim_in_degree(d);
                if rank != want {
                    r.failures.push(format!("{name}: ε has rank {rank} onto M_{d} of dimension {want}"));
                }
            }
        }
    }
}

fn omega(modules: &[(String, AModule)], r: &mut SuiteReport) {
    for (name, b) in modules {
        r.checks += 8;
        let f = omega_tower_failures(b, 0..=7, (-30, 30));
        r.failures.extend(f.into_iter().map(|f| format!("{name}: {f}")));
        for n in [-2, 0, 3] {
            r.checks += 1;
            let f = omega_bijection_failures(b, n, (-20, 30));
            r.failures.extend(f.into_iter().map(|f| format!("{name} stage {n}: {f}")));
        }
    }
}

fn filtration(modules: &[(String, AModule)], r: &mut SuiteReport) {
    for (name, m) in modules {
        let p = m.prime();
        let Some(top) = m.top() else { continue };
        let t_window = (p.value() as i64 * m.bottom().unwrap_or(0).min(0), p.value() as i64 * top);
        for v in [Variance::Homological, Variance::Cohomological] {
            r.checks += 1;
            let c = certify_collapse(m.space(), (-10, 10), t_window, v);
            if !c.is_certified() {
                r.failures.push(format!("{name} {v:?} page: {}", c.render().trim_end().replace('\n', "; ")));
            }
        }
        for n in LEVELS {
            r.checks += 1;
            let f = filtration_compare(m, n, WINDOW);
            r.failures.extend(f.into_iter().map(|f| format!("{name} n={n}: {f}")));
        }
        r.checks += 2;
        r.failures.extend(representative_failures(m, WINDOW).into_iter().map(|f| format!("{name}: {f}")));
        r.failures.extend(singer_count_failures(m, (-8, 8), t_window).into_iter().map(|f| format!("{name}: {f}")));
    }
}

/// Tate groups of seeded `C_p`-modules, plus the permutation modules of the
/// suite modules, whose Tate groups count the diagonal classes.
fn duality(modules: &[(String, AModule)], r: &mut SuiteReport) {
    let p = r.prime;
    let point = GradedVectorSpace::tight(p, vec![BasisElement { name: "a".into(), degree: 0 }]).expect("point");
    let triv = CpModule::trivial(point);
    let free = CpModule::free(p, "g", 0);
    for n in -8..=8 {
        r.checks += 2;
        for (what, m, want) in [("trivial", &triv, 1), ("free", &free, 0)] {
            let (c, h) = (tate_cohomology(m, n).dim(), tate_homology(m, n).dim());
            if c != want || h != want {
                r.failures.push(format!("{what} coefficients, n={n}: Ĥ^n has dim {c}, Ĥ_n has dim {h}, want {want}"));
            }
        }
    }
    for k in 0..20 {
        let seed = r.seed.wrapping_add(k);
        let m = random_cp_module(p, seed);
        let d = m.dual();
        for n in -8..=8 {
            r.checks += 2;
            let (c, h) = (tate_cohomology(&m, n), tate_homology(&m, -n - 1));
            if c.dim() != h.dim() {
                r.failures.push(format!("module seed {seed}: dim Ĥ^{n} = {} but dim Ĥ_{} = {}", c.dim(), -n - 1, h.dim()));
            }
            let (h, cd) = (tate_homology(&m, n), tate_cohomology(&d, n));
            for t in m.space().degrees() {
                if h.dim_in_degree(t) != cd.dim_in_degree(-t) {
                    r.failures.push(format!(
                        "module seed {seed}: Ĥ_{n} in degree {t} has dim {} but Ĥ^{n} of the dual in degree {} has dim {}",
                        h.dim_in_degree(t),
                        -t,
                        cd.dim_in_degree(-t)
                    ));
                }
            }
        }
    }
    for (name, b) in modules {
        let Some(top) = b.top() else { continue };
        let bottom = b.bottom().unwrap_or(0);
        let pv = p.value() as i64;
        for t in pv * bottom..=pv * top {
            let pm = permutation_module(b.space(), t, p);
            for n in [0, 1] {
                r.checks += 1;
                let got = tate_cohomology(&pm.module, n).dim();
                if got != pm.diagonal.len() {
                    r.failures.push(format!(
                        "{name}: (H^⊗{p})_{t} has dim Ĥ^{n} = {got} but {} diagonal classes",
                        pm.diagonal.len()
                    ));
                }
            }
        }
    }
}

pub const MAXALG_BOUND: i64 = 32;

fn maxalg(modules: &[(String, AModule)], r: &mut SuiteReport) -> Result<()> {
    let p = r.prime;
    for (name, m) in modules {
        for a in 0..m.dim() {
            r.checks += 1;
            let e = epsilon_star(a, m, None)?;
            let v = maximal_algebraic_test(&e, m, MAXALG_BOUND)?;
            if v != Verdict::FiniteCoaction {
                r.failures.push(format!("{name}: ε*({}) reports {v}", m.name_of(a)));
            }
        }
    }
    if p.is_two() {
        r.checks += 1;
        let m = AModule::trivial(p, "a", 0);
        let w = DualSingerElement::basis(&m, 1, -1, 0);
        let v = maximal_algebraic_test(&w, &m, MAXALG_BOUND)?;
        let want = Verdict::NonzeroBeyondBound(vec![1, 2, 4, 8, 16, 32]);
        if v != want {
            r.failures.push(format!("u^-1⊗a* reports {v}, want {want}"));
        }
    }
    Ok(())
}
