use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singerlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn rplus_of_the_point() {
    let o = run(&["rplus", "--input", &data("f2.json"), "--prime", "2", "--min-filtration", "0", "--degree-window", "1:4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let basis: Vec<&str> = text.lines().filter(|l| l.starts_with("basis\t")).collect();
    assert_eq!(basis.len(), 4);
    assert!(text.contains("act\tSq^1\tSx^1(a)\tSx^2(a)"), "{text}");
}

#[test]
fn rplus_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("singerlab-rplus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.tsv");
    let args = ["rplus", "--input", &data("moore3.json"), "--min-filtration", "-3", "--degree-window", "-4:12"];
    let o = run(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout(&run(&args)));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rplus_rejects_a_prime_mismatch() {
    let o = run(&["rplus", "--input", &data("f2.json"), "--prime", "3", "--min-filtration", "0", "--degree-window", "1:4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chart_of_the_point() {
    let o = run(&["ext", "--input", &data("f2.json"), "--max-s", "3", "--max-t", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("#singerlab-chart v1"));
    for row in ["1\t1\t1\t", "1\t2\t1\t", "1\t4\t1\t", "1\t8\t1\t"] {
        assert!(text.lines().any(|l| l.starts_with(row)), "missing {row:?} in\n{text}");
    }
}

#[test]
fn chart_at_s_zero_lists_generators() {
    let o = run(&["ext", "--input", &data("joker.json"), "--max-s", "0", "--max-t", "8"]);
    assert_eq!(stdout(&o), "#singerlab-chart v1\n0\t0\t1\tx0_0_0\n");
    let o = run(&["ext", "--input", &data("f3.json"), "--max-s", "0", "--max-t", "8"]);
    assert_eq!(stdout(&o), "#singerlab-chart v1\n0\t0\t1\tx0_0_0\n");
}

#[test]
fn tower_report_is_appended() {
    let o = run(&["ext", "--input", &data("f2.json"), "--max-s", "2", "--max-t", "6", "--tower", "0:-6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("#stage -6\n"));
    assert!(text.contains("#limit\n"));
    assert!(text.contains("# stable s=1 t=1 dim=1"), "{text}");
}

#[test]
fn short_tower_reports_instead_of_guessing() {
    let o = run(&["ext", "--input", &data("f3.json"), "--max-s", "3", "--max-t", "13", "--tower", "0:-6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# epsilon mismatch"));
}

#[test]
fn parse_errors_give_line_and_column() {
    let o = run(&["ext", "--input", &data("malformed.json"), "--max-s", "1", "--max-t", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4 column 1"), "{}", stderr(&o));
}

#[test]
fn operations_must_exist_at_the_prime() {
    let o = run(&["tate-e2", "--input", &data("wrong_prime.json"), "--s-window", "-2:2", "--t-window", "0:4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("P^1"));
}

#[test]
fn adem_violations_exit_three() {
    let o = run(&["ext", "--input", &data("corrupted.json"), "--max-s", "1", "--max-t", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("Sq^1 Sq^1 = 0 fails on a"), "{}", stderr(&o));
}

#[test]
fn truncated_modules_name_the_horizon() {
    let o = run(&["ext", "--input", &data("truncated.json"), "--max-s", "2", "--max-t", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("up to degree 6"));
    let o = run(&["ext", "--input", &data("truncated.json"), "--max-s", "2", "--max-t", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn one_class_page_is_a_diagonal_line() {
    let o = run(&["tate-e2", "--input", &data("f3.json"), "--s-window", "-5:5", "--t-window", "0:6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> =
        text.lines().filter(|l| !l.starts_with('#')).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 11);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (k as i64 - 5).to_string());
        assert_eq!((r[1], r[2]), ("0", "1"));
    }
    assert!(text.contains("#collapse certified"));
    assert_eq!(text.lines().filter(|l| l.starts_with("#rep\t")).count(), 11);
}

#[test]
fn page_dumps_repeat() {
    let args = ["tate-e2", "--input", &data("joker.json"), "--s-window", "-4:4", "--t-window", "0:8"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "coeffs", "--prime", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("coeffs p=7 seed=0: pass"));
    let o = run(&["verify", "epsilon", "--prime", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "adem", "--prime", "2", "--input", &data("corrupted.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("input: Sq^1 Sq^1 = 0 fails on a: c != 0"), "{}", stdout(&o));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn thread_variable_is_checked() {
    let o = Command::new(env!("CARGO_BIN_EXE_singerlab"))
        .args(["verify", "coeffs", "--prime", "3"])
        .env("SINGERLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
