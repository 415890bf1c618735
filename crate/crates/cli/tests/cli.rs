use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tomobell::records::{parse_csv, read_csv, to_csv_string, SweepMeta, SweepRecord};
use tomobell_core::bell::Functional;
use tomobell_core::states::{format_density_matrix, BipartiteDims, DensityMatrix, StateFamily};
use tomobell_core::{c64, ComplexMatrix};

fn tomobell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomobell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_state(dir: &TempDir, name: &str, rho: &DensityMatrix, d: usize) -> String {
    let path = dir.path().join(name);
    let dims = BipartiteDims::square(d).unwrap();
    fs::write(&path, format_density_matrix(rho, dims).unwrap()).unwrap();
    path_str(&path).to_owned()
}

fn record(param: f64, bell_max: f64, purity: f64) -> SweepRecord {
    SweepRecord {
        param,
        bell_max,
        classical_bound: 2.0,
        purity,
        angles: [1.0 / 3.0, PI, 1e-300, -0.0, 2.0f64.sqrt(), 6.283185307179585, 0.1 + 0.2, 5e-324],
        partition1: "01|2".into(),
        partition2: "0|12".into(),
        separable: param > 0.5,
    }
}

#[test]
fn csv_round_trip_is_exact() {
    let meta = SweepMeta {
        family: StateFamily::Werner,
        dim: 3,
        functional: Functional::Chsh,
    };
    let records: Vec<SweepRecord> = (0..7)
        .map(|k| {
            let x = -1.0 + k as f64 / 3.0;
            record(x, (x * 7.3).exp() / 11.0, 1.0 / (k as f64 + 3.0))
        })
        .collect();
    let text = to_csv_string(&meta, &records);
    let (back_meta, back) = parse_csv(Path::new("mem.csv"), &text).unwrap();
    assert_eq!(back_meta, Some(meta));
    assert_eq!(back.len(), records.len());
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.param.to_bits(), b.param.to_bits());
        assert_eq!(a.bell_max.to_bits(), b.bell_max.to_bits());
        assert_eq!(a.purity.to_bits(), b.purity.to_bits());
        for (x, y) in a.angles.iter().zip(&b.angles) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a, b);
    }
}

#[test]
fn qubit_isotropic_sweep_reaches_tsirelson_bound() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("iso2.csv");
    let svg = dir.path().join("iso2.svg");
    let out = tomobell(&[
        "sweep", "--family", "isotropic", "--dim", "2", "--functional", "chsh",
        "--param-min", "0", "--param-max", "1", "--steps", "11", "--restarts", "16",
        "--out", path_str(&csv), "--plot", path_str(&svg),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (meta, records) = read_csv(&csv).unwrap();
    assert_eq!(meta.unwrap().family, StateFamily::Isotropic);
    assert_eq!(records.len(), 11);
    let params: Vec<f64> = records.iter().map(|r| r.param).collect();
    assert!(params.windows(2).all(|w| w[0] < w[1]));
    let last = records.last().unwrap();
    assert_eq!(last.param, 1.0);
    assert!((last.bell_max - 2.0 * SQRT_2).abs() < 1e-3, "{}", last.bell_max);
    for r in &records {
        assert!((r.purity - StateFamily::Isotropic.purity(2, r.param)).abs() < 1e-10);
        assert_eq!(r.separable, r.param <= 0.5);
        assert_eq!(r.partition1, "0|1");
    }
    let svg_text = fs::read_to_string(&svg).unwrap();
    let points = svg_text.split("class=\"bell-max\" points=\"").nth(1).unwrap();
    assert_eq!(points.split('"').next().unwrap().split(' ').count(), 11);
}

#[test]
fn qutrit_isotropic_curve_crosses_bound_near_threshold() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("iso3.csv");
    let out = tomobell(&[
        "sweep", "--family", "isotropic", "--dim", "3", "--param-min", "0.78",
        "--param-max", "0.80", "--steps", "3", "--out", path_str(&csv),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, records) = read_csv(&csv).unwrap();
    assert!(records[0].bell_max < 2.0, "{}", records[0].bell_max);
    assert!(records[2].bell_max > 2.0, "{}", records[2].bell_max);
}

#[test]
fn maximally_mixed_isotropic_purity() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("mixed.csv");
    let p = format!("{}", 1.0 / 9.0);
    let out = tomobell(&[
        "sweep", "--family", "isotropic", "--dim", "3", "--param-min", &p, "--param-max", &p,
        "--steps", "1", "--restarts", "2", "--out", path_str(&csv),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, records) = read_csv(&csv).unwrap();
    assert!((records[0].purity - 1.0 / 9.0).abs() < 1e-12);
    // uneven blocks: every correlation is (1/3)^2, so B = 2/9
    assert!((records[0].bell_max - 2.0 / 9.0).abs() < 1e-9, "{}", records[0].bell_max);
}

#[test]
fn plot_subcommand_renders_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("two.csv");
    let svg = dir.path().join("two.svg");
    let meta = SweepMeta {
        family: StateFamily::Isotropic,
        dim: 3,
        functional: Functional::I3,
    };
    fs::write(&csv, to_csv_string(&meta, &[record(0.2, 1.5, 0.3), record(0.9, 2.4, 0.8)])).unwrap();
    let out = tomobell(&["plot", "--out", path_str(&csv), "--plot", path_str(&svg)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = fs::read(&svg).unwrap();
    for class in ["bell-max", "purity"] {
        let text = String::from_utf8(first.clone()).unwrap();
        let tag = format!("class=\"{class}\" points=\"");
        let points = text.split(&tag).nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 2);
    }
    assert!(String::from_utf8_lossy(&first).contains(">p</text>"));

    let again = tomobell(&["plot", "--out", path_str(&csv), "--plot", path_str(&svg)]);
    assert!(again.status.success());
    assert_eq!(fs::read(&svg).unwrap(), first);
}

#[test]
fn malformed_csv_reports_line() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bad.csv");
    let meta = SweepMeta {
        family: StateFamily::Werner,
        dim: 2,
        functional: Functional::Chsh,
    };
    let text = to_csv_string(&meta, &[record(0.1, 1.0, 0.5), record(0.2, 1.0, 0.5), record(0.3, 1.0, 0.5)]);
    let broken: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 3 { l.replacen("e-1", "x", 1) } else { l.to_owned() })
        .collect();
    fs::write(&csv, broken.join("\n")).unwrap();
    let out = tomobell(&["plot", "--out", path_str(&csv), "--plot", path_str(&dir.path().join("bad.svg"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn eval_exit_codes() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = DensityMatrix::pure(&[0.0, h, -h, 0.0].map(|x| c64::new(x, 0.0))).unwrap();
    let file = write_state(&dir, "singlet.txt", &singlet, 2);
    let out = tomobell(&["eval", "--state-file", &file, "--functional", "chsh"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let text = stdout(&out);
    let value: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("value = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 2.0 * SQRT_2).abs() < 1e-3);
    assert!(text.contains("partitions = 0|1 0|1"));

    for (d, expected) in [(2, 0.0), (3, 2.0 / 9.0)] {
        let mixed = write_state(&dir, "mixed.txt", &DensityMatrix::maximally_mixed(d * d), d);
        let out = tomobell(&["eval", "--state-file", &mixed, "--restarts", "4"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let value: f64 = stdout(&out)
            .lines()
            .find_map(|l| l.strip_prefix("value = "))
            .unwrap()
            .parse()
            .unwrap();
        assert!((value - expected).abs() < 1e-6, "d = {d}: {value}");
    }
}

#[test]
fn eval_reports_violated_invariant() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("short.txt");
    let m = ComplexMatrix::identity(4).scale_real(0.9 / 4.0);
    let mut text = String::from("dim 2 2\n");
    for z in m.as_slice() {
        text.push_str(&format!("{} {}\n", z.re, z.im));
    }
    fs::write(&path, text).unwrap();
    let out = tomobell(&["eval", "--state-file", path_str(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unit trace"), "{}", stderr(&out));
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(tomobell(&["sweep", "--bogus"]).status.code(), Some(2));
    assert_eq!(tomobell(&[]).status.code(), Some(2));
    let out = tomobell(&["threshold", "--family", "isotropic", "--dim", "2", "--functional", "i3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tomobell(&["sweep", "--family", "werner", "--dim", "2", "--param-min", "-2", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tomobell(&["eval", "--state-file", "/nonexistent/state.txt"]);
    assert_eq!(out.status.code(), Some(4));
    let dir = TempDir::new().unwrap();
    let out = tomobell(&[
        "sweep", "--family", "isotropic", "--dim", "2", "--steps", "1", "--restarts", "1",
        "--out", path_str(&dir.path().join("missing/dir/out.csv")),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn qubit_werner_threshold() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("threshold.txt");
    let out = tomobell(&["threshold", "--family", "werner", "--dim", "2", "--out", path_str(&report)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text, stdout(&out));
    let phi: f64 = text.lines().find_map(|l| l.strip_prefix("phi = ")).unwrap().parse().unwrap();
    assert!((phi - (1.0 - 3.0 / SQRT_2) / 2.0).abs() < 5e-3, "{phi}");
    assert!(!text.contains("q = "));
}

#[test]
fn threshold_bracket_errors_are_reported() {
    let out = tomobell(&[
        "threshold", "--family", "isotropic", "--dim", "2", "--param-min", "0.9", "--param-max", "1",
        "--restarts", "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("does not straddle"), "{}", stderr(&out));
}
