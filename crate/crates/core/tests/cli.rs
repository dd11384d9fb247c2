use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dp1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp1"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// CSV body with the `#` summary lines removed.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const DP1: &str =
    "kind = \"confine\"\n[coefficients]\na = \"0\"\nb = \"j\"\nc = \"1\"\n[range]\nstart = 2\nend = 50\n";

#[test]
fn confine_dp1_family() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "c.toml", DP1);
    let o = dp1(&["confine", "--spec", &spec]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "1");
    let r = &v["result"];
    assert_eq!(r["kind"], "confine");
    assert_eq!(r["form"], "dP1");
    assert_eq!(r["parameters"]["A"], "1");
    assert_eq!(r["parameters"]["B"], "0");
    assert_eq!(r["parameters"]["C"], "1");
    let reports = r["rows"].as_array().unwrap();
    assert_eq!(reports.len(), 49);
    assert!(reports.iter().all(|x| x["laurent_verdict"] == "confined"));
    assert_eq!(v["spec"]["coefficients"]["b"], "j");
}

#[test]
fn degrees_csv_for_the_non_integrable_map() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "d.toml",
        "kind = \"degrees\"\n[coefficients]\na = \"1\"\nb = \"0\"\nc = \"1\"\n[seeds]\ny0 = \"1\"\ny1 = \"z\"\n[range]\nsteps = 9\n",
    );
    let out = dir.path().join("d.csv");
    let o = dp1(&[
        "degrees",
        "--spec",
        &spec,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    // Recomputed independently with a computer algebra system.
    let want = [0u64, 1, 2, 4, 10, 24, 56, 132, 312, 736, 1736];
    let got = rows(&csv);
    assert_eq!(got.len(), want.len());
    let mut running = 0;
    for (i, (r, d)) in got.iter().zip(want).enumerate() {
        running += d;
        assert_eq!(r[0], i.to_string());
        assert_eq!(r[1].parse::<f64>().unwrap(), d as f64);
        assert_eq!(r[2].parse::<f64>().unwrap(), running as f64);
    }
    let slope: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("# entropy_slope: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(slope >= (5f64 / 4.0).ln());

    let fast = dp1(&["degrees", "--spec", &spec, "--format", "csv", "--fast-degrees"]);
    assert!(fast.status.success());
    let fast_rows = rows(&stdout(&fast));
    assert!(fast_rows.iter().zip(&got).all(|(a, b)| a[..3] == b[..3]));
}

#[test]
fn decompose_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "x.toml",
        "kind = \"decompose\"\nvalues = [\"3/4\", \"-10/9\", \"7\"]\n",
    );
    let o = dp1(&["decompose", "--spec", &spec, "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "value,log+|x|_2,log+|x|_3,log+|x|_inf,total");
    let r = rows(&csv);
    let f = |s: &str| s.parse::<f64>().unwrap();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-10;
    assert_eq!(r[0][0], "0.75");
    assert!(close(f(&r[0][1]), 4f64.ln()) && close(f(&r[0][4]), 4f64.ln()));
    assert_eq!(r[1][0], "-10/9");
    assert!(close(f(&r[1][2]), 9f64.ln()) && close(f(&r[1][3]), (10f64 / 9.0).ln()));
    assert!(close(f(&r[1][4]), 10f64.ln()));
    assert!(close(f(&r[2][3]), 7f64.ln()) && close(f(&r[2][1]), 0.0));
}

#[test]
fn heights_report_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "h.toml",
        "kind = \"heights\"\n[coefficients]\na = \"0\"\nb = \"j\"\nc = \"1\"\n[seeds]\ny0 = \"1\"\ny1 = \"2\"\n[range]\nsteps = 10\n",
    );
    let o = dp1(&[
        "heights", "--spec", &spec, "--steps", "40", "--places", "2,inf", "--delta", "0.125",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["spec"]["range"]["steps"], 40);
    assert_eq!(v["spec"]["analysis"]["delta"], 0.125);
    let r = &v["result"];
    assert_eq!(r["rows"].as_array().unwrap().len(), 42);
    assert_eq!(r["growth"]["model"], "polynomial");
    let checks = r["lemma_checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks
        .iter()
        .all(|c| c["lemma"] == "confinement" && c["violations"] == 0));
    assert_eq!(r["naive_height_violations"].as_array().unwrap().len(), 0);
}

#[test]
fn json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "c.toml", DP1);
    let strip = |o: Output| {
        stdout(&o)
            .lines()
            .filter(|l| !l.contains("elapsed_seconds"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(dp1(&["confine", "--spec", &spec]));
    let b = strip(dp1(&["confine", "--spec", &spec]));
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let zero_c = write(
        dir.path(),
        "z.toml",
        "kind = \"confine\"\n[coefficients]\na = \"0\"\nb = \"j\"\nc = \"j - j\"\n[range]\nend = 3\n",
    );
    let o = dp1(&["confine", "--spec", &zero_c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("c ≢ 0"), "{}", stderr(&o));

    let spec = write(dir.path(), "c.toml", DP1);
    let o = dp1(&["confine", "--spec", &spec, "--delta", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("analysis.delta"));

    let o = dp1(&["heights", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(2));

    let bad = write(
        dir.path(),
        "b.toml",
        "kind = \"confine\"\n[coefficients]\na = \"0\"\nb = \"j +\"\nc = \"1\"\n",
    );
    let o = dp1(&["confine", "--spec", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coefficients.b"));

    // y_2 = 1/1² − 1 = 0, so the step producing y_3 divides by zero.
    let singular = write(
        dir.path(),
        "s.toml",
        "kind = \"heights\"\n[coefficients]\na = \"0\"\nb = \"0\"\nc = \"1\"\n[seeds]\ny0 = \"1\"\ny1 = \"1\"\n[range]\nsteps = 4\n",
    );
    let o = dp1(&["heights", "--spec", &singular]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("y_2"));

    let o = dp1(&["confine", "--spec", &spec, "--window", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn batch_runs_every_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("one.json");
    let out2 = dir.path().join("two.csv");
    let s1 = write(
        dir.path(),
        "1.toml",
        &format!("{DP1}[output]\npath = {:?}\n", out1.display().to_string()),
    );
    let s2 = write(
        dir.path(),
        "2.toml",
        &format!(
            "kind = \"decompose\"\nvalues = [\"5/8\"]\n[output]\npath = {:?}\nformat = \"csv\"\n",
            out2.display().to_string()
        ),
    );
    let o = dp1(&["batch", &s1, &s2]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out1).unwrap()).unwrap();
    assert_eq!(v["result"]["form"], "dP1");
    assert!(std::fs::read_to_string(out2).unwrap().contains("0.625"));
}
