use std::path::Path;
use std::process::{Command, Output};

use planar3b::output::ParsedCsv;

fn planar3b(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planar3b"))
        .args(args)
        .env_remove("PLANAR3B_OUTPUT")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.ini");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn identical_config_gives_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    for (out, jobs) in [("a", "1"), ("b", "4")] {
        for cmd in ["potentials", "spectrum", "resonances", "wavefunction"] {
            let o = planar3b(&["--jobs", jobs, "--output", out, cmd], tmp.path());
            assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(files(&a), files(&b));
    for name in files(&a) {
        assert_eq!(
            std::fs::read(a.join(&name)).unwrap(),
            std::fs::read(b.join(&name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn every_csv_starts_with_the_header_comment() {
    let tmp = tempfile::tempdir().unwrap();
    for cmd in ["potentials", "spectrum", "resonances", "wavefunction"] {
        assert!(planar3b(&["--output", "out", cmd], tmp.path()).status.success());
    }
    let hash = planar3b::config::RunConfig::default().hash();
    for name in files(&tmp.path().join("out")) {
        let csv = ParsedCsv::read(&tmp.path().join("out").join(&name)).unwrap();
        let parts: Vec<&str> = csv.header.split(' ').collect();
        assert_eq!(parts.len(), 5, "{name}: {}", csv.header);
        assert_eq!(&parts[..2], ["#", "planar3b"]);
        assert_eq!(parts[2], env!("CARGO_PKG_VERSION"));
        assert_eq!(parts[4], hash);
    }
}

#[test]
fn env_var_and_flag_choose_the_output_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[output]\ndir = from_config\n");
    let run = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_planar3b"));
        cmd.current_dir(tmp.path()).env_remove("PLANAR3B_OUTPUT");
        if let Some(v) = env {
            cmd.env("PLANAR3B_OUTPUT", v);
        }
        let mut args = vec!["--config", cfg.as_str()];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["potentials", "--branch", "unified"]);
        assert!(cmd.args(&args).output().unwrap().status.success());
    };
    run(&[], None);
    run(&[], Some("from_env"));
    run(&["--output", "from_flag"], Some("from_env"));
    for dir in ["from_config", "from_env", "from_flag"] {
        assert!(tmp.path().join(dir).join("potential_unified.csv").exists(), "{dir}");
    }
}

#[test]
fn branch_selection_and_empty_rows() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(
        planar3b(&["--output", "o", "potentials", "--branch", "s-,I+"], tmp.path())
            .status
            .success()
    );
    assert_eq!(
        files(&tmp.path().join("o")),
        ["potential_I_plus.csv", "potential_s_minus.csv"]
    );
    let csv = ParsedCsv::read(&tmp.path().join("o/potential_s_minus.csv")).unwrap();
    assert_eq!(csv.columns, ["R", "V", "branch", "converged", "residual"]);
    let first = &csv.rows[0];
    assert_eq!((first[1].as_str(), first[3].as_str()), ("", "false"));
}

#[test]
fn config_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "[twobody]\nbogus = 1\n");
    assert_eq!(
        planar3b(&["--config", &bad, "potentials"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        planar3b(&["--config", "missing.ini", "potentials"], tmp.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        planar3b(&["potentials", "--branch", "III"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        planar3b(&["validate", "--only", "nothing"], tmp.path()).status.code(),
        Some(2)
    );
}

#[test]
fn solver_failures_exit_three() {
    let tmp = tempfile::tempdir().unwrap();
    // s- has no real root anywhere below a0 = 10.
    let short = write_config(tmp.path(), "[sweep]\nr_min = 1.5\nr_max = 8\n");
    let o = planar3b(
        &["--config", &short, "--output", "o", "potentials", "--branch", "s-"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(tmp.path().join("o/potential_s_minus.csv").exists());
    // Levels beyond R_max are rejected, leaving fewer than three.
    let capped = write_config(tmp.path(), "[wkb]\nr_max = 2\n");
    let o = planar3b(&["--config", &capped, "--output", "o", "spectrum"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validate_only_runs_one_module() {
    let tmp = tempfile::tempdir().unwrap();
    let o = planar3b(&["validate", "--only", "specfun"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = stdout
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l.contains(" specfun ")));
}

#[test]
fn loose_quadrature_tolerance_fails_validation() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[wkb]\nquad_tol = 1\n");
    let o = planar3b(&["--config", &cfg, "validate", "--only", "wkb"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.starts_with("FAIL [ 7]")));
    assert!(!stdout.lines().any(|l| l.starts_with("FAIL [ 5]")));
}

#[test]
fn atomic_units_add_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "[masses]\nunit = amu\nm = 6.015\nM = 132.905\n[units]\nr1_bohr = 100\n",
    );
    let o = planar3b(
        &["--config", &cfg, "--output", "o", "potentials", "--branch", "s+"],
        tmp.path(),
    );
    assert!(o.status.success());
    let csv = ParsedCsv::read(&tmp.path().join("o/potential_s_plus.csv")).unwrap();
    assert_eq!(csv.columns[5..], ["R_bohr", "V_hartree"]);
    let r = csv.column("R").unwrap();
    let rb = csv.column("R_bohr").unwrap();
    assert!((rb[0].unwrap() / r[0].unwrap() - 100.0).abs() < 1e-12);
}
