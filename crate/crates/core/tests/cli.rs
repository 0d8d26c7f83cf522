use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tls_resonance::numerics::text::{fmt_f64, parse_vector};
use tls_resonance::prony::SignalSeries;

const BIN: &str = env!("CARGO_BIN_EXE_tls-resonance");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(report: &str, key: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {report}"))
        .parse()
        .unwrap()
}

fn assert_exit(o: &Output, code: i32, tag: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    let line = err.lines().last().unwrap_or_default();
    assert!(line.starts_with(&format!("error: {tag}: ")), "{err}");
}

struct Bench {
    dir: TempDir,
}

impl Bench {
    fn new(n: usize) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let b = Bench { dir };
        let s = b.path("s.txt");
        let count = (n + 256).to_string();
        assert!(
            run(&["prony-gen", "--preset", "vanblaricum12", "--count", &count, "--out", &s])
                .status
                .success()
        );
        let o = run(&[
            "lp-build",
            "--signal",
            &s,
            "--N",
            &n.to_string(),
            "--M",
            "256",
            "--out-A",
            &b.path("A.txt"),
            "--out-b",
            &b.path("b.txt"),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        b
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).display().to_string()
    }

    fn with_problem<'a>(&'a self, args: &[&'a str], a: &'a str, b: &'a str) -> Vec<&'a str> {
        let mut v = args.to_vec();
        v.extend(["--A", a, "--b", b]);
        v
    }
}

fn data_lines(path: &str) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(str::to_owned)
        .collect()
}

#[test]
fn prony_gen_preset() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt").display().to_string();
    let o = run(&["prony-gen", "--preset", "vanblaricum12", "--count", "267", "--out", &s]);
    assert!(o.status.success());
    assert_eq!(value(&stdout(&o), "s0_re"), 12.0);
    let text = std::fs::read_to_string(&s).unwrap();
    assert_eq!(SignalSeries::parse(&text).unwrap().len(), 267);
}

#[test]
fn prony_gen_custom_params() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.txt");
    std::fs::write(&params, "T 0.5\n-1.0 0.0 2.0 0.0\n").unwrap();
    let s = dir.path().join("s.txt").display().to_string();
    let o = run(&[
        "prony-gen",
        "--params",
        params.to_str().unwrap(),
        "--count",
        "3",
        "--out",
        &s,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let series = SignalSeries::parse(&std::fs::read_to_string(&s).unwrap()).unwrap();
    for (k, v) in series.samples.iter().enumerate() {
        approx::assert_relative_eq!(v.re, 2.0 * (-0.5 * k as f64).exp(), max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }
}

#[test]
fn missing_out_is_usage_error() {
    let o = run(&["prony-gen", "--preset", "vanblaricum12", "--count", "10"]);
    assert_exit(&o, 2, "usage");
}

#[test]
fn unwritable_output_is_io_error() {
    let o = run(&[
        "prony-gen",
        "--preset",
        "vanblaricum12",
        "--count",
        "10",
        "--out",
        "/nonexistent/dir/s.txt",
    ]);
    assert_exit(&o, 1, "io");
}

#[test]
fn fit_routes_agree_and_match_spectrum() {
    let b = Bench::new(11);
    let (a, bb) = (b.path("A.txt"), b.path("b.txt"));
    let mut reports = Vec::new();
    for method in ["ls", "tls", "tls-closed"] {
        let out = b.path(&format!("x-{method}.txt"));
        let o = run(&b.with_problem(&["fit", "--method", method, "--out", &out], &a, &bb));
        assert!(o.status.success(), "{}", stderr(&o));
        reports.push(stdout(&o));
    }
    let eig = stdout(&run(&b.with_problem(&["eig"], &a, &bb)));
    approx::assert_relative_eq!(
        value(&reports[1], "sigma_min_sq"),
        value(&eig, "lambda_0"),
        max_relative = 1e-9
    );
    assert!(value(&reports[1], "bound_lhs") <= value(&reports[1], "bound_rhs"));

    let read = |m: &str| parse_vector(&std::fs::read_to_string(b.path(&format!("x-{m}.txt"))).unwrap()).unwrap();
    let (tls, closed) = (read("tls"), read("tls-closed"));
    assert!(tls.sub(&closed).norm() <= 1e-9 * tls.norm());
}

#[test]
fn fit_nongeneric_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.txt");
    let b = dir.path().join("b.txt");
    // C = [A, b] is the identity
    std::fs::write(&a, "2 1\n1 0\n0 0\n").unwrap();
    std::fs::write(&b, "2 1\n0 0\n1 0\n").unwrap();
    let out = dir.path().join("x.txt");
    let o = run(&[
        "fit",
        "--A",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--method",
        "tls",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_exit(&o, 3, "genericity");
}

#[test]
fn roots_recover_table_modes() {
    let b = Bench::new(12);
    let x = b.path("x.txt");
    let o = run(&b.with_problem(
        &["fit", "--method", "ls", "--out", &x],
        &b.path("A.txt"),
        &b.path("b.txt"),
    ));
    assert!(o.status.success());
    let o = run(&["roots", "--x", &x, "--T", "0.2"]);
    assert!(o.status.success());
    let lambdas: Vec<(f64, f64)> = stdout(&o)
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|t| t.parse().unwrap()).collect();
            (v[2], v[3])
        })
        .collect();
    assert_eq!(lambdas.len(), 12);
    let params = tls_resonance::prony::PronyParams::vanblaricum12();
    for m in &params.modes {
        let best = lambdas
            .iter()
            .map(|(re, im)| ((re - m.lambda.re).powi(2) + (im - m.lambda.im).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-5, "{} missing ({best})", m.lambda);
    }
}

#[test]
fn roots_single_mode_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.txt");
    std::fs::write(&x, "1 1\n-0.5 0\n").unwrap();
    let o = run(&["roots", "--x", x.to_str().unwrap(), "--T", "1.0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);

    std::fs::write(&x, "1 1\n0.5 zero\n").unwrap();
    let o = run(&["roots", "--x", x.to_str().unwrap(), "--T", "1.0"]);
    assert_exit(&o, 1, "parse");
}

#[test]
fn sweep_single_point() {
    let b = Bench::new(11);
    let out = b.path("sw.csv");
    let args = [
        "sweep",
        "--algorithm",
        "1",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0005",
        "--time",
        "30000",
        "--omega-min",
        "1.004",
        "--omega-max",
        "1.005",
        "--points",
        "1",
        "--out",
        &out,
    ];
    let o = run(&b.with_problem(&args, &b.path("A.txt"), &b.path("b.txt")));
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], "omega,p_decay");
}

#[test]
fn sweep_finds_benchmark_resonance() {
    let b = Bench::new(11);
    let out = b.path("sw.csv");
    let args = [
        "sweep",
        "--algorithm",
        "1",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0005",
        "--time",
        "30000",
        "--omega-min",
        "1.0",
        "--omega-max",
        "1.02",
        "--points",
        "21",
        "--out",
        &out,
    ];
    let o = run(&b.with_problem(&args, &b.path("A.txt"), &b.path("b.txt")));
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!((value(&report, "dominant_omega") - 1.0046).abs() <= value(&report, "delta"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# dominant omega=")));
}

#[test]
fn algorithm2_default_time() {
    let b = Bench::new(11);
    let out = b.path("sw.csv");
    let args = [
        "sweep",
        "--algorithm",
        "2",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0001",
        "--omega-min",
        "1.0046",
        "--omega-max",
        "1.0047",
        "--points",
        "1",
        "--out",
        &out,
    ];
    let o = run(&b.with_problem(&args, &b.path("A.txt"), &b.path("b.txt")));
    assert!(o.status.success(), "{}", stderr(&o));
    let tau = value(&stdout(&o), "time");
    assert_eq!(tau, std::f64::consts::PI / (2.0 * 0.0001));
    assert!((tau - 15707.96).abs() < 0.01);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains(&format!("# time={}", fmt_f64(tau))), "{text}");
}

#[test]
fn prepare_algorithm1_collapses() {
    let b = Bench::new(11);
    let out = b.path("state.txt");
    let args = [
        "prepare",
        "--algorithm",
        "1",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0005",
        "--time",
        "30000",
        "--out",
        &out,
    ];
    let o = run(&b.with_problem(&args, &b.path("A.txt"), &b.path("b.txt")));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(1.0 - value(&stdout(&o), "fidelity") <= 1e-9);
    let state = parse_vector(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(state.dim(), 256);
    approx::assert_relative_eq!(state.norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn prepare_off_resonance() {
    let b = Bench::new(11);
    let out = b.path("state.txt");
    let args = [
        "prepare",
        "--algorithm",
        "1",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0005",
        "--time",
        "30000",
        "--omega",
        "1.5",
        "--out",
        &out,
    ];
    let o = run(&b.with_problem(&args, &b.path("A.txt"), &b.path("b.txt")));
    if o.status.success() {
        assert!(value(&stdout(&o), "success_prob") < 1e-3);
    } else {
        assert_exit(&o, 4, "zero-probability");
    }
}

/// prony-gen, lp-build, fit and prepare chained through files only.
#[test]
fn pipeline_closure() {
    let b = Bench::new(11);
    let (a, bb) = (b.path("A.txt"), b.path("b.txt"));
    let x = b.path("x_ls.txt");
    assert!(run(&b.with_problem(&["fit", "--method", "ls", "--out", &x], &a, &bb))
        .status
        .success());
    let tls = b.path("x_tls.txt");
    assert!(
        run(&b.with_problem(&["fit", "--method", "tls", "--out", &tls], &a, &bb))
            .status
            .success()
    );
    let reference = format!("file:{x}");
    let state = b.path("state.txt");
    let args = [
        "prepare",
        "--algorithm",
        "2",
        "--epsilon0",
        "-1.0",
        "--coupling",
        "0.0001",
        "--ref",
        &reference,
        "--out",
        &state,
    ];
    let o = run(&b.with_problem(&args, &a, &bb));
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!((value(&report, "success_prob") - 0.998).abs() <= 0.005);
    assert!(1.0 - value(&report, "fidelity") <= 1e-9);
    assert!(Path::new(&state).exists());
}
