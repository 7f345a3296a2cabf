use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/specs").join(name)
}

fn gqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqm")).args(args).output().expect("binary runs")
}

fn gqm_ok(args: &[&str]) -> String {
    let out = gqm(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn check_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let stdout = gqm_ok(&["check", "--spec", spec("ratchet.json").to_str().unwrap(), "--out", out]);
    assert!(stdout.contains("12 transitions, 72 composable pairs"), "{stdout}");
    let axioms: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("axioms.json")).unwrap()).unwrap();
    assert_eq!(axioms["valid"], true);
}

#[test]
fn every_verb_writes_its_files() {
    let cases: [(&str, &[&str]); 6] = [
        ("check", &["axioms.json"]),
        ("cayley", &["cayley.csv"]),
        ("state", &["state.json"]),
        ("evolve", &["amplitudes.csv", "evolve.csv"]),
        ("measure", &["measure.json"]),
        ("gns", &["gns.json"]),
    ];
    for (verb, files) in cases {
        let dir = tempfile::tempdir().unwrap();
        gqm_ok(&[verb, "--spec", spec("qubit.json").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        for f in files {
            assert!(dir.path().join(f).is_file(), "{verb} did not write {f}");
        }
    }
}

#[test]
fn format_flag_switches_file_type() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    gqm_ok(&["cayley", "--spec", spec("ratchet.json").to_str().unwrap(), "--out", out, "--format", "json"]);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cayley.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 12);

    gqm_ok(&["measure", "--spec", spec("ratchet.json").to_str().unwrap(), "--out", out, "--format", "csv"]);
    assert!(fs::read_to_string(dir.path().join("measure.csv")).unwrap().starts_with("path,value\n"));

    assert!(!gqm(&["cayley", "--spec", spec("ratchet.json").to_str().unwrap(), "--format", "xml"]).status.success());
}

#[test]
fn time_flags_override_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let s = spec("qubit.json");
    gqm_ok(&[
        "evolve",
        "--spec",
        s.to_str().unwrap(),
        "--out",
        out,
        "--t-start",
        "1",
        "--t-stop",
        "2",
        "--t-steps",
        "3",
    ]);
    let csv = fs::read_to_string(dir.path().join("amplitudes.csv")).unwrap();
    let times: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(times, vec![1.0, 1.5, 2.0]);
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((cols[1] - 0.5 * (cols[0] / 2.0).cos()).abs() < 1e-10);
    }
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        gqm_ok(&["run", "--spec", spec("ratchet.json").to_str().unwrap(), "--out", d.path().to_str().unwrap()]);
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn malformed_specs_exit_nonzero_with_their_code() {
    let dir = spec("malformed");
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let code = stem.split('-').next().unwrap();
        let out = gqm(&[
            "run",
            "--spec",
            path.to_str().unwrap(),
            "--out",
            tempfile::tempdir().unwrap().path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(2), "{stem}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(stderr.starts_with(&format!("error[{code}]")), "{stem}: {stderr}");
    }
}

#[test]
fn missing_spec_file_is_an_io_error() {
    let out = gqm(&["check", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error[E_IO]"));
}
