use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use singerlab::amodule::AModule;
use singerlab::description::parse_module;
use singerlab::ext::{minimal_resolution, tower_comparison, CHART_HEADER};
use singerlab::singer::{rplus_truncation, SingerBasis};
use singerlab::suites::{run_suite, Suite};
use singerlab::tate_ss::{certify_collapse, e2_page, representative_cohomological, representative_homological, Variance};
use singerlab::{Error, Prime};

#[derive(Parser)]
#[command(name = "singerlab", version, about = "Singer construction, Tate spectral sequence and Ext charts over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Basis, degrees, filtrations and action table of F^n R_+(M) on a degree window.
    Rplus {
        #[arg(long)]
        input: PathBuf,
        /// Must agree with the prime of the input, if given.
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        min_filtration: i64,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        degree_window: (i64, i64),
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ext chart of the input module, or of the tower F^n R_+(M) with --tower.
    Ext {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_s: usize,
        #[arg(long, allow_hyphen_values = true)]
        max_t: i64,
        /// Stages n0, n0-1, ..., n1.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        tower: Option<(i64, i64)>,
        /// Stem window t-s for the tower (default 0:max_t-max_s).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        stems: Option<(i64, i64)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// E^2 page of the Tate spectral sequence, collapse certificate and representatives.
    TateE2 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        s_window: (i64, i64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        t_window: (i64, i64),
        #[arg(long, value_enum, default_value_t = VarianceArg::Homological)]
        variance: VarianceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs an invariant suite; exits 1 on any failure.
    Verify {
        /// adem, epsilon, omega, filtration, duality, maxalg, coeffs or all.
        suite: String,
        #[arg(long, default_value_t = 2)]
        prime: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run on this module instead of the seeded fixtures.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceArg {
    Homological,
    Cohomological,
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) | Error::NotPrime(_) | Error::Domain(_) => 2,
            Error::InsufficientWindow { .. } | Error::WindowTruncation { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let a = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((a, b))
}

fn read_module(path: &PathBuf) -> Result<AModule, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    parse_module(&text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

/// Reads and checks the Adem relations (exit 3 with the violation list).
fn read_valid_module(path: &PathBuf) -> Result<AModule, Failure> {
    let m = read_module(path)?;
    let v = m.validate_action();
    if !v.is_empty() {
        let mut message = format!("{}: {} Adem violations", path.display(), v.len());
        for x in &v {
            let _ = write!(message, "\n  {x}");
        }
        return Err(Failure { code: 3, message });
    }
    Ok(m)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rplus(m: &AModule, n: i64, window: (i64, i64)) -> Result<String, Failure> {
    let t = rplus_truncation(m, n, window)?;
    let r = t.module();
    let mut out = String::from("#singerlab-rplus v1\n");
    let _ = writeln!(out, "#prime {} min-filtration {n} window {}:{}", m.prime(), window.0, window.1);
    for (i, e) in t.keys().iter().enumerate() {
        let _ = writeln!(out, "basis\t{}\t{}\t{}", r.name_of(i), r.degree_of(i), e.fil(m));
    }
    for ((g, i), v) in r.action_table() {
        let _ = writeln!(out, "act\t{g}\t{}\t{}", r.name_of(*i), r.render(v));
    }
    Ok(out)
}

fn ext(m: &AModule, s_max: usize, t_max: i64, tower: Option<(i64, i64)>, stems: Option<(i64, i64)>) -> Result<String, Failure> {
    let Some((n0, n1)) = tower else {
        return Ok(minimal_resolution(m, s_max, t_max)?.chart().to_tsv());
    };
    let stems = stems.unwrap_or((0, t_max - s_max as i64));
    let cmp = tower_comparison(m, (n0, n1), s_max, stems)?;
    let mut out = format!("{CHART_HEADER}\n");
    let rows = |out: &mut String, chart: &singerlab::ext::ExtChart| {
        for line in chart.to_tsv().lines().skip(1) {
            let _ = writeln!(out, "{line}");
        }
    };
    for (label, chart) in cmp.report.labels.iter().zip(&cmp.report.charts) {
        let _ = writeln!(out, "#stage {label}");
        rows(&mut out, chart);
    }
    let _ = writeln!(out, "#limit");
    rows(&mut out, &cmp.report.limit());
    out.push_str(&cmp.report.render());
    let bad = cmp.mismatches();
    if bad.is_empty() {
        let _ = writeln!(out, "# epsilon agrees with the chart of the input in every cell");
    } else {
        for b in bad {
            let _ = writeln!(out, "# epsilon mismatch {b}");
        }
    }
    Ok(out)
}

fn tate_e2(m: &AModule, s_window: (i64, i64), t_window: (i64, i64), variance: Variance) -> String {
    let p = m.prime();
    let pv = p.value() as i64;
    let half = p.half() as i64;
    let b = m.space();
    let page = e2_page(b, s_window, t_window, variance);
    let mut out = page.to_tsv();
    out.push_str(&certify_collapse(b, s_window, t_window, variance).render());
    for (&(s, t), cell) in &page.cells {
        for c in &cell.classes {
            let q = b.degree_of(c.a);
            let shift = if p.is_two() { q } else { half * q };
            let (name, rep) = match variance {
                Variance::Homological => {
                    let r = c.r - shift;
                    let name = if p.is_two() {
                        format!("u^{r}⊗{}*", b.name_of(c.a))
                    } else {
                        format!("u^{}t^{r}⊗{}*", c.i, b.name_of(c.a))
                    };
                    (name, representative_homological(c.i, r, c.a, b))
                }
                Variance::Cohomological => {
                    let e = SingerBasis::new(c.i, c.r + shift, c.a);
                    (e.name(m), representative_cohomological(e, m))
                }
            };
            debug_assert_eq!(rep.class, *c);
            debug_assert_eq!(rep.class.t, pv * q);
            let _ = writeln!(out, "#rep\t{s}\t{t}\t{name}\t{}\t{}", rep.coeff, c.label(b, variance));
        }
    }
    out
}

fn verify(suite: &str, prime: u32, seed: u64, input: Option<&PathBuf>) -> Result<bool, Failure> {
    let suites: Vec<Suite> = match suite {
        "all" => Suite::ALL.to_vec(),
        s => vec![Suite::parse(s).ok_or_else(|| Failure { code: 2, message: format!("unknown suite {s:?}") })?],
    };
    let p = Prime::new(prime)?;
    let input = input.map(read_module).transpose()?;
    if let Some(m) = &input {
        if m.prime() != p {
            return Err(Failure { code: 2, message: format!("input is over p = {} but --prime is {p}", m.prime()) });
        }
    }
    let mut ok = true;
    for s in suites {
        let r = run_suite(s, p, seed, input.as_ref())?;
        print!("{}", r.render());
        ok &= r.passed();
    }
    Ok(ok)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SINGERLAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure { code: 2, message: format!("SINGERLAB_THREADS must be a number, got {v:?}") })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure { code: 2, message: e.to_string() })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Rplus { input, prime, min_filtration, degree_window, out } => {
            let m = read_valid_module(&input)?;
            if let Some(p) = prime {
                if p != m.prime().value() {
                    return Err(Failure { code: 2, message: format!("input is over p = {} but --prime is {p}", m.prime()) });
                }
            }
            emit(&out, &rplus(&m, min_filtration, degree_window)?)?;
        }
        Command::Ext { input, max_s, max_t, tower, stems, out } => {
            let m = read_valid_module(&input)?;
            emit(&out, &ext(&m, max_s, max_t, tower, stems)?)?;
        }
        Command::TateE2 { input, s_window, t_window, variance, out } => {
            let m = read_valid_module(&input)?;
            let v = match variance {
                VarianceArg::Homological => Variance::Homological,
                VarianceArg::Cohomological => Variance::Cohomological,
            };
            emit(&out, &tate_e2(&m, s_window, t_window, v))?;
        }
        Command::Verify { suite, prime, seed, input } => {
            if !verify(&suite, prime, seed, input.as_ref())? {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("singerlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
