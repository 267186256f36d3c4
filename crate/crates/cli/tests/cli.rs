use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hocl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hocl"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = hocl(&["check", "--complex", "torus3x3t1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid; orientable; V=9 E=27 T=18\n");
}

#[test]
fn zeros_prints_six_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let o = hocl(&["zeros", "--complex", "case3", "--op", "1down"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.570796, 4.712389\n");
    let o = hocl(&["zeros", "--complex", "case1", "--op", "1up"], dir.path());
    assert_eq!(stdout(&o), "1.047198, 3.141593, 5.235988\n");
}

#[test]
fn spectrum_csv_follows_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = hocl(
        &[
            "spectrum",
            "--complex",
            "case1",
            "--op",
            "1up",
            "--points",
            "64",
            "--out",
            "s.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let rows: Vec<(f64, usize, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 64 * 6);
    for chunk in rows.chunks(6) {
        let d = chunk[0].0;
        let mut expected: Vec<f64> = (0..3)
            .flat_map(|k| {
                let x = 2.0 + 2.0 * (d - 2.0 * PI * k as f64 / 3.0).cos();
                [x, x]
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        for (row, e) in chunk.iter().zip(&expected) {
            assert!((row.2 - e).abs() < 1e-10);
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec![
            "spectrum",
            "--complex",
            "torus3x3t2",
            "--op",
            "2down",
            "--points",
            "16",
            "--out",
            "OUT.csv",
        ],
        vec![
            "commutator",
            "--complex",
            "case4",
            "--points",
            "32",
            "--out",
            "OUT.json",
        ],
        vec![
            "diffuse",
            "--complex",
            "case2",
            "--op",
            "combined",
            "--delta",
            "pi/3",
            "--seed",
            "7",
            "--tmax",
            "2",
            "--out",
            "OUT.csv",
        ],
    ];
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let name = format!("r{k}-{rep}");
            let args: Vec<String> = args.iter().map(|a| a.replace("OUT", &name)).collect();
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let o = hocl(&refs, dir.path());
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
            let file = args.last().unwrap();
            outputs.push((fs::read(dir.path().join(file)).unwrap(), o.stdout));
        }
        assert_eq!(outputs[0], outputs[1]);
    }
}

#[test]
fn generated_files_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let o = hocl(
        &["generate", "--torus", "4x3", "--type", "2", "--out", "t.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = hocl(&["check", "--complex", "t.json"], dir.path());
    assert_eq!(stdout(&o), "valid; orientable; V=12 E=36 T=24\n");
    let o = hocl(&["generate", "--case", "3"], dir.path());
    fs::write(dir.path().join("c3.json"), &o.stdout).unwrap();
    let o = hocl(&["zeros", "--complex", "c3.json", "--op", "1up"], dir.path());
    assert_eq!(
        stdout(&o),
        "0.523599, 1.570796, 2.617994, 3.665191, 4.712389, 5.759587\n"
    );
}

#[test]
fn diffuse_reports_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    let o = hocl(
        &[
            "diffuse",
            "--complex",
            "case1",
            "--op",
            "1up",
            "--delta",
            "pi/3",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("equilibrium: kernel_state"));
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(text.starts_with("t,simplex,component,re,im,psi,theta,phi,energy\n"));
    assert_eq!(text.lines().count(), 1 + 501 * 6);
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"vertices": 3, "edges": [], "triangles": [{"ref": [0, 1, 2], "dir": "aligned"}]}"#,
    )
    .unwrap();
    let cases: [&[&str]; 5] = [
        &["check", "--complex", "bad.json"],
        &["check", "--complex", "missing.json"],
        &["generate", "--torus", "2x3"],
        &[
            "diffuse",
            "--complex",
            "case1",
            "--op",
            "1up",
            "--delta",
            "1",
            "--dt",
            "5",
            "--out",
            "x.csv",
        ],
        &[
            "spectrum",
            "--complex",
            "case1",
            "--op",
            "1up",
            "--points",
            "0",
            "--out",
            "x.csv",
        ],
    ];
    for args in cases {
        let o = hocl(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    let o = hocl(&["check", "--complex", "bad.json"], dir.path());
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing face"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &[],
        &["spectrum", "--complex", "case1", "--op", "sideways", "--out", "x.csv"],
        &["spectrum", "--complex", "case1", "--op", "1up"],
        &["generate", "--case", "1", "--torus", "3x3"],
        &[
            "diffuse",
            "--complex",
            "case1",
            "--op",
            "1up",
            "--delta",
            "halfpi",
            "--out",
            "x.csv",
        ],
        &["zeros", "--complex", "case1", "--op", "1up", "--bogus"],
    ];
    for args in cases {
        assert_eq!(hocl(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn help_lists_the_flags() {
    let dir = tempfile::tempdir().unwrap();
    let expected: [(&str, &[&str]); 6] = [
        ("generate", &["--case", "--torus", "--type", "--out"]),
        ("spectrum", &["--complex", "--op", "--points", "--out"]),
        ("commutator", &["--complex", "--points", "--out"]),
        ("zeros", &["--complex", "--op", "--points"]),
        (
            "diffuse",
            &["--complex", "--op", "--delta", "--seed", "--tmax", "--dt", "--out"],
        ),
        ("check", &["--complex"]),
    ];
    for (sub, flags) in expected {
        let help = stdout(&hocl(&[sub, "--help"], dir.path()));
        let listed: Vec<&str> = help
            .lines()
            .filter_map(|l| l.split_whitespace().next())
            .filter(|w| w.starts_with("--"))
            .map(|w| w.trim_end_matches(','))
            .filter(|w| *w != "--help" && *w != "--threads")
            .collect();
        assert_eq!(listed, flags.to_vec(), "{sub}");
    }
}
