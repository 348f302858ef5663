use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

use mset_core::circuit::{build_netlist, delay_sweep, simulate, ComponentParams, NetlistKind};
use mset_core::correlation::{cross_correlate, peak_metrics, read_correlation, Kind, Mode};
use mset_core::expr::{eval, parse, Environment};
use mset_core::ops;
use mset_core::signal::csv::{read_csv, WriteCsv};
use mset_core::signal::gen::{generate, GenParams, Waveform};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mset(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mset").chain(args.iter().copied());
    let code = mset_cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let r = mset(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }
}

/// 1 Hz sine and cosine, one second at 1 kHz, as f.csv and g.csv.
fn sine_pair(d: &Dir) {
    for (kind, name) in [("sine", "f.csv"), ("cosine", "g.csv")] {
        ok(&[
            "gen",
            "--kind",
            kind,
            "--dt",
            "0.001",
            "--n",
            "1000",
            "--out",
            &d.arg(name),
        ]);
    }
}

#[test]
fn quarter_period_sine() {
    let d = Dir::new();
    ok(&[
        "gen",
        "--kind",
        "sine",
        "--freq",
        "1",
        "--dt",
        "0.25",
        "--n",
        "4",
        "--out",
        &d.arg("s.csv"),
    ]);
    let s = read_csv(d.path("s.csv")).unwrap();
    assert_eq!(s.samples(), &[0.0, 1.0, 0.0, -1.0]);
    assert_eq!(s.dt(), 0.25);
}

#[test]
fn sine_and_cosine_do_not_overlap_at_lag_zero() {
    let d = Dir::new();
    let dt = (1.0f64 / 4096.0).to_string();
    for (kind, name) in [("sine", "f.csv"), ("cosine", "g.csv")] {
        ok(&[
            "gen",
            "--kind",
            kind,
            "--dt",
            &dt,
            "--n",
            "4096",
            "--out",
            &d.arg(name),
        ]);
    }
    ok(&[
        "corr",
        "--kind",
        "common",
        "--a",
        &d.arg("f.csv"),
        "--b",
        &d.arg("g.csv"),
        "--out",
        &d.arg("r.csv"),
    ]);
    let r = read_correlation(fs::File::open(d.path("r.csv")).unwrap()).unwrap();
    assert_eq!(r.len(), 2 * 4096 - 1);
    assert!(r.at(0).unwrap().abs() <= 1e-3);
}

#[test]
fn self_common_product_equals_absolute() {
    let d = Dir::new();
    sine_pair(&d);
    let f = d.arg("f.csv");
    ok(&[
        "op",
        "--name",
        "common_product",
        "--a",
        &f,
        "--b",
        &f,
        "--out",
        &d.arg("cp.csv"),
    ]);
    ok(&[
        "op",
        "--name",
        "absolute",
        "--a",
        &f,
        "--out",
        &d.arg("abs.csv"),
    ]);
    assert_eq!(d.read("cp.csv"), d.read("abs.csv"));
}

#[test]
fn outputs_match_library_calls_byte_for_byte() {
    let d = Dir::new();
    sine_pair(&d);
    let (fa, ga) = (d.arg("f.csv"), d.arg("g.csv"));
    let p = GenParams::default();
    let f = generate(Waveform::Sine, &p, 1e-3, 1000).unwrap();
    let g = generate(Waveform::Cosine, &p, 1e-3, 1000).unwrap();
    assert_eq!(d.read("f.csv"), f.to_csv_string());

    let ops_cases = [
        ("complement", ops::complement(&f), false),
        ("sign", ops::sign_fn(&f).to_signal(), false),
        ("absolute", ops::absolute(&f), false),
        (
            "conjoint_sign",
            ops::conjoint_sign(&f, &g).unwrap().to_signal(),
            true,
        ),
        ("intersection", ops::intersection(&f, &g).unwrap(), true),
        ("union", ops::union(&f, &g).unwrap(), true),
        (
            "signify",
            ops::signify(&f, &ops::sign_fn(&g)).unwrap(),
            true,
        ),
        ("common_product", ops::common_product(&f, &g).unwrap(), true),
    ];
    for (name, want, binary) in ops_cases {
        let mut args = vec!["op", "--name", name, "--a", &fa];
        if binary {
            args.extend(["--b", &ga]);
        }
        assert_eq!(ok(&args), want.to_csv_string(), "{name}");
    }

    let r = cross_correlate(&f, &g, Kind::Classic, Mode::Full).unwrap();
    let text = ok(&[
        "corr",
        "--kind",
        "classic",
        "--a",
        &fa,
        "--b",
        &ga,
        "--metrics",
    ]);
    assert_eq!(
        text,
        format!("{}{}\n", r.to_csv_string(), peak_metrics(&r).unwrap())
    );

    let env = Environment::new()
        .with("f", f.clone())
        .unwrap()
        .with("g", g.clone())
        .unwrap();
    let e = eval(&parse(r"(f \/ g)~ * cos(f /\ -g)").unwrap(), &env).unwrap();
    let bf = format!("f={fa}");
    let bg = format!("g={ga}");
    assert_eq!(
        ok(&[
            "expr",
            "--text",
            r"(f \/ g)~ * cos(f /\ -g)",
            "--bind",
            &bf,
            "--bind",
            &bg
        ]),
        e.to_csv_string()
    );

    let net = build_netlist(
        NetlistKind::CommonProduct,
        ComponentParams::default().with_delay(1),
    );
    let trace = simulate(&net, &[("f", &f), ("g", &g)]).unwrap();
    ok(&[
        "sim",
        "--netlist",
        "common_product",
        "--a",
        &fa,
        "--b",
        &ga,
        "--delay",
        "1",
        "--trace",
        &d.arg("t.csv"),
    ]);
    assert_eq!(d.read("t.csv"), trace.to_csv_string());

    let ideal = build_netlist(NetlistKind::CommonProduct, ComponentParams::ideal());
    let exact = ops::common_product(&f, &g).unwrap();
    let table = delay_sweep(&ideal, &[("f", &f), ("g", &g)], &exact, 0..=2, 5, 3).unwrap();
    let text = ok(&[
        "sweep",
        "--netlist",
        "common_product",
        "--a",
        &fa,
        "--b",
        &ga,
        "--glitch-amp",
        "0",
        "--glitch-w",
        "0",
        "--spread",
        "0..2",
        "--seeds",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(text, table.to_csv_string());
}

#[test]
fn repeated_runs_are_identical() {
    let d = Dir::new();
    sine_pair(&d);
    let (fa, ga) = (d.arg("f.csv"), d.arg("g.csv"));
    let runs: Vec<Vec<String>> = vec![
        vec![
            "gen".into(),
            "--kind".into(),
            "white_noise".into(),
            "--dt".into(),
            "0.01".into(),
            "--n".into(),
            "64".into(),
        ],
        vec![
            "corr".into(),
            "--a".into(),
            fa.clone(),
            "--b".into(),
            ga.clone(),
            "--metrics".into(),
        ],
        vec![
            "sim".into(),
            "--netlist".into(),
            "common_product".into(),
            "--a".into(),
            fa.clone(),
            "--b".into(),
            ga.clone(),
            "--lowpass".into(),
            "50".into(),
            "--compare".into(),
        ],
        vec![
            "sweep".into(),
            "--netlist".into(),
            "union".into(),
            "--a".into(),
            fa,
            "--b".into(),
            ga,
            "--spread".into(),
            "0..3".into(),
            "--seeds".into(),
            "4".into(),
        ],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let svg = d.arg(&format!("plot{i}.svg"));
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.extend(["--svg", &svg]);
            let stdout = ok(&full);
            outputs.push((stdout, d.read(&format!("plot{i}.svg"))));
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
        let svg = &outputs[0].1;
        assert!(svg.contains(r#"viewBox="0 0 800 400""#) && svg.contains("<polyline"));
    }
}

#[test]
fn sim_compare_reports_errors() {
    let d = Dir::new();
    sine_pair(&d);
    let (fa, ga) = (d.arg("f.csv"), d.arg("g.csv"));
    let ideal = ok(&[
        "sim",
        "--netlist",
        "common_product",
        "--a",
        &fa,
        "--b",
        &ga,
        "--glitch-amp",
        "0",
        "--delay",
        "2",
        "--compare",
    ]);
    assert_eq!(ideal, "rms_error=0 max_error=0 latency_samples=12\n");

    let rms = |extra: &[&str]| -> f64 {
        let mut args = vec![
            "sim",
            "--netlist",
            "common_product",
            "--a",
            &fa,
            "--b",
            &ga,
            "--compare",
        ];
        args.extend(extra);
        let text = ok(&args);
        text.split_whitespace()
            .next()
            .unwrap()
            .trim_start_matches("rms_error=")
            .parse()
            .unwrap()
    };
    let raw = rms(&[]);
    let filtered = rms(&["--lowpass", "50"]);
    assert!(raw > 0.0 && filtered <= 0.5 * raw, "{raw} {filtered}");
}

#[test]
fn netlist_files_are_accepted() {
    let d = Dir::new();
    sine_pair(&d);
    let text = "input x\ncomparator s x gnd\ninverting_amp n x\nanalog_switch y x n s glitch_amp=0\noutput y\n";
    fs::write(d.path("abs.net"), text).unwrap();
    ok(&[
        "sim",
        "--netlist",
        &d.arg("abs.net"),
        "--a",
        &d.arg("f.csv"),
        "--out",
        &d.arg("y.csv"),
    ]);
    ok(&[
        "op",
        "--name",
        "absolute",
        "--a",
        &d.arg("f.csv"),
        "--out",
        &d.arg("abs.csv"),
    ]);
    assert_eq!(d.read("y.csv"), d.read("abs.csv"));

    let r = mset(&[
        "sim",
        "--netlist",
        &d.arg("abs.net"),
        "--a",
        &d.arg("f.csv"),
        "--compare",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("--compare"), "{}", r.stderr);
}

#[test]
fn exit_codes_and_error_names() {
    let d = Dir::new();
    sine_pair(&d);
    fs::write(d.path("bad.csv"), "# dt=0.1 t0=0\n1\nx\n").unwrap();
    ok(&[
        "gen",
        "--kind",
        "sine",
        "--dt",
        "0.001",
        "--n",
        "10",
        "--out",
        &d.arg("short.csv"),
    ]);
    let f = d.arg("f.csv");

    let usage = [
        vec![
            "gen", "--kind", "sine", "--dt", "0.1", "--n", "4", "--bogus",
        ],
        vec!["gen", "--kind", "zigzag", "--dt", "0.1", "--n", "4"],
        vec!["op", "--name", "frobnicate", "--a", &f],
        vec!["op", "--name", "union", "--a", &f],
        vec!["expr", "--text", "f", "--bind", "f"],
        vec!["sweep", "--netlist", "sign", "--a", &f, "--spread", "3..1"],
        vec!["sim", "--netlist", "no_such_kind_or_file", "--a", &f],
        vec!["sim", "--netlist", "union", "--a", &f],
        vec![],
    ];
    for args in usage {
        let r = mset(&args);
        assert_eq!(r.code, 1, "{args:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty());
    }
    let r = mset(&[
        "gen", "--kind", "sine", "--dt", "0.1", "--n", "4", "--bogus",
    ]);
    assert!(r.stderr.contains("--bogus"));

    let missing = d.arg("missing.csv");
    let short = d.arg("short.csv");
    let bad = d.arg("bad.csv");
    let bind = format!("f={f}");
    let data: [(Vec<&str>, &str); 7] = [
        (vec!["op", "--name", "absolute", "--a", &missing], "IoError"),
        (vec!["op", "--name", "absolute", "--a", &bad], "ParseError"),
        (
            vec!["op", "--name", "union", "--a", &f, "--b", &short],
            "ShapeMismatch",
        ),
        (
            vec!["gen", "--kind", "sine", "--dt", "0", "--n", "4"],
            "NonPositiveDt",
        ),
        (
            vec!["expr", "--text", "f + * f", "--bind", &bind],
            "SyntaxError",
        ),
        (
            vec!["expr", "--text", "f + q", "--bind", &bind],
            "UnboundVariable",
        ),
        (
            vec!["corr", "--a", &short, "--b", &f, "--mode", "valid"],
            "BadMode",
        ),
    ];
    for (args, name) in data {
        let r = mset(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stderr.contains(name), "{args:?}: {}", r.stderr);
    }
}

#[test]
fn version_and_help() {
    assert!(ok(&["version"]).starts_with("mset "));
    assert!(ok(&["--help"]).contains("sweep"));
}

fn binary_gen(seed_env: Option<&str>, extra: &[&str], dir: &Path, name: &str) -> String {
    let out = dir.join(name);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mset"));
    cmd.args([
        "gen",
        "--kind",
        "white_noise",
        "--dt",
        "0.01",
        "--n",
        "32",
        "--out",
    ])
    .arg(&out)
    .args(extra);
    cmd.env_remove("MSET_SEED");
    if let Some(s) = seed_env {
        cmd.env("MSET_SEED", s);
    }
    let status = cmd.status().unwrap();
    assert!(status.success());
    fs::read_to_string(out).unwrap()
}

#[test]
fn noise_seed_comes_from_flag_then_environment() {
    let d = Dir::new();
    let dir = d.0.path();
    let default = binary_gen(None, &[], dir, "a.csv");
    assert_eq!(binary_gen(Some("0"), &[], dir, "b.csv"), default);
    let seven = binary_gen(Some("7"), &[], dir, "c.csv");
    assert_ne!(seven, default);
    assert_eq!(binary_gen(Some("7"), &[], dir, "d.csv"), seven);
    assert_eq!(
        binary_gen(Some("7"), &["--seed", "0"], dir, "e.csv"),
        default
    );

    let status = Command::new(env!("CARGO_BIN_EXE_mset"))
        .args(["gen", "--kind", "white_noise", "--dt", "0.01", "--n", "4"])
        .env("MSET_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn binary_exit_codes() {
    let status = Command::new(env!("CARGO_BIN_EXE_mset"))
        .args(["op", "--name", "absolute", "--a", "/nonexistent/x.csv"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&status.stderr).contains("IoError"));
    let status = Command::new(env!("CARGO_BIN_EXE_mset"))
        .arg("--nope")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
}
