//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the test
//! harness so the lines always reach the output.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use singerlab::amodule::AModule;
use singerlab::ext::epsilon_tower_comparison;
use singerlab::extpower::verify_coeff_identities;
use singerlab::suites::{run_suite, Suite};
use singerlab::Prime;

const SEED: u64 = 1;

struct Outcome {
    passed: bool,
    detail: String,
}

fn suite_over(suite: Suite, primes: &[u32]) -> Outcome {
    let mut detail = Vec::new();
    let mut passed = true;
    for &p in primes {
        let r = run_suite(suite, Prime::new(p).unwrap(), SEED, None).unwrap();
        passed &= r.passed();
        detail.push(format!("p={p}: {} checks, {} failures", r.checks, r.failures.len()));
        if let Some(f) = r.failures.first() {
            detail.push(format!("first: {f}"));
        }
    }
    Outcome { passed, detail: detail.join("; ") }
}

fn adem() -> Outcome {
    suite_over(Suite::Adem, &[2, 3, 5])
}

fn epsilon() -> Outcome {
    suite_over(Suite::Epsilon, &[2, 3, 5])
}

fn tower() -> Outcome {
    let mut detail = Vec::new();
    let mut passed = true;
    for (p, depth, s_max, stems) in [(2, -24, 4, (0, 8)), (3, -60, 3, (0, 10))] {
        let p = Prime::new(p).unwrap();
        let cmp = epsilon_tower_comparison(&AModule::trivial(p, "a", 0), depth, s_max, stems).unwrap();
        let bad = cmp.mismatches();
        let same = cmp.report.limit() == cmp.oracle;
        passed &= bad.is_empty() && same;
        let cells: usize = cmp.oracle.cells.values().sum();
        detail.push(format!("p={p} stages 0..{depth}: {cells} classes, {} mismatches", bad.len()));
        if let Some(b) = bad.first() {
            detail.push(format!("first: {b}"));
        }
    }
    Outcome { passed, detail: detail.join("; ") }
}

fn coeffs() -> Outcome {
    let mut bad = Vec::new();
    for p in [3, 5, 7, 11] {
        bad.extend(verify_coeff_identities(Prime::new(p).unwrap(), -50..=50));
    }
    Outcome { passed: bad.is_empty(), detail: format!("p in 3,5,7,11, q in -50..50: {} failures", bad.len()) }
}

fn omega() -> Outcome {
    suite_over(Suite::Omega, &[2, 3, 5])
}

fn tate() -> Outcome {
    suite_over(Suite::Duality, &[2, 3, 5])
}

fn collapse() -> Outcome {
    suite_over(Suite::Filtration, &[2, 3, 5])
}

fn maxalg() -> Outcome {
    suite_over(Suite::Maxalg, &[2, 3, 5])
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run_cli(threads: &str, args: &[String]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_singerlab"))
        .args(args)
        .env("SINGERLAB_THREADS", threads)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let jobs = [
        s(&["ext", "--input", &data("joker.json"), "--max-s", "5", "--max-t", "20"]),
        s(&["ext", "--input", &data("f3.json"), "--max-s", "4", "--max-t", "30"]),
        s(&["ext", "--input", &data("f2.json"), "--max-s", "3", "--max-t", "9", "--tower", "0:-12"]),
        s(&["tate-e2", "--input", &data("joker.json"), "--s-window", "-8:8", "--t-window", "0:8"]),
        s(&["tate-e2", "--input", &data("moore3.json"), "--s-window", "-8:8", "--t-window", "0:3", "--variance", "cohomological"]),
    ];
    let mut differing = Vec::new();
    let mut bytes = 0;
    for job in &jobs {
        let a = run_cli("1", job);
        let b = run_cli("8", job);
        let c = run_cli("8", job);
        bytes += a.len();
        if a != b || b != c {
            differing.push(job[0..3].join(" "));
        }
    }
    Outcome {
        passed: differing.is_empty(),
        detail: format!("{} dumps ({bytes} bytes) at 1 and 8 threads, differing: {differing:?}", jobs.len()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Singer action satisfies the Adem relations", adem),
        ("epsilon is A-linear and surjective", epsilon),
        ("tower limit of Ext equals Ext of the point", tower),
        ("coefficient identities", coeffs),
        ("omega is compatible along the tower", omega),
        ("Tate cohomology of C_p and its dualities", tate),
        ("collapse and filtration comparison", collapse),
        ("maximal algebraic subcomodule", maxalg),
        ("deterministic dumps across thread counts", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name} [{:.1}s] {}", k + 1, start.elapsed().as_secs_f64(), o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
