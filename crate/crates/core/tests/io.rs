use std::f64::consts::PI;

use hocl::cochain::Cochain;
use hocl::diffusion::{diffuse, DiffusionParams, Selector};
use hocl::generators::{
    builtin, directed_triangle, from_json, load_complex, save_complex, to_json, triangulated_torus, GeneratorError,
    TorusSpec, TorusType, TriangleCase,
};
use hocl::sweeps::{
    commutator_sweep, delta_grid, export_csv, export_json, export_trajectory_csv, spectrum_sweep, write_spectrum_csv,
    OperatorTag,
};

#[test]
fn complex_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut complexes: Vec<_> = TriangleCase::ALL.iter().map(|&c| directed_triangle(c)).collect();
    complexes.push(triangulated_torus(TorusSpec::new(3, 4, TorusType::Type2)).unwrap());
    for (k, c) in complexes.iter().enumerate() {
        let path = dir.path().join(format!("c{k}.json"));
        save_complex(c, &path).unwrap();
        assert_eq!(&load_complex(&path).unwrap(), c);
        assert_eq!(&from_json(&to_json(c)).unwrap(), c);
    }
}

#[test]
fn malformed_files_are_rejected() {
    let missing_face = r#"{"vertices": 3, "edges": [{"ref": [0, 1], "dir": "aligned"}],
        "triangles": [{"ref": [0, 1, 2], "dir": "aligned"}]}"#;
    let err = from_json(missing_face).unwrap_err();
    assert!(matches!(err, GeneratorError::Invalid(_)));
    assert!(err.to_string().contains("missing face"));
    assert!(matches!(from_json("{ not json"), Err(GeneratorError::Parse { .. })));
    assert!(matches!(
        from_json(r#"{"vertices": 1, "edges": [], "triangles": [], "extra": 0}"#),
        Err(GeneratorError::Parse { .. })
    ));
}

#[test]
fn builtins_resolve() {
    for name in ["case1", "case4", "torus3x3t1", "torus4x3t2"] {
        assert!(builtin(name).is_ok(), "{name}");
    }
    for name in ["case5", "torus2x3t1", "torus3x3t3", "cube"] {
        assert!(builtin(name).is_err(), "{name}");
    }
    let t = builtin("torus3x3t1").unwrap();
    assert_eq!((t.vertex_count(), t.edge_count(), t.triangle_count()), (9, 27, 18));
}

#[test]
fn exports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let c = directed_triangle(TriangleCase::Case1);
    let grid = delta_grid(32);
    let write = |name: &str| {
        let spectrum = spectrum_sweep(&c, OperatorTag::Combined, &grid).unwrap().named("case1");
        let commutator = commutator_sweep(&c, &grid).unwrap().named("case1");
        let paths = [
            dir.path().join(format!("{name}-s.csv")),
            dir.path().join(format!("{name}-s.json")),
            dir.path().join(format!("{name}-c.csv")),
        ];
        export_csv(&spectrum, &paths[0]).unwrap();
        export_json(&spectrum, &paths[1]).unwrap();
        export_csv(&commutator, &paths[2]).unwrap();
        paths.map(|p| std::fs::read_to_string(p).unwrap())
    };
    let a = write("a");
    let b = write("b");
    assert_eq!(a, b);
    assert!(a[0].starts_with("delta,index,eigenvalue\n"));
    assert_eq!(a[0].lines().count(), 1 + 32 * 6);
    assert!(a[2].starts_with("delta,frobenius_norm\n"));
    let doc: serde_json::Value = serde_json::from_str(&a[1]).unwrap();
    assert_eq!(doc["complex"], "case1");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 32 * 6);
}

#[test]
fn spectrum_csv_round_trips_values() {
    let c = directed_triangle(TriangleCase::Case2);
    let sweep = spectrum_sweep(&c, OperatorTag::Up1, &[0.25, PI]).unwrap();
    let mut buf = Vec::new();
    write_spectrum_csv(&sweep, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let parsed: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let flat: Vec<f64> = sweep.eigenvalues.concat();
    assert_eq!(parsed, flat);
}

#[test]
fn trajectory_csv_carries_energy_column() {
    let dir = tempfile::tempdir().unwrap();
    let c = directed_triangle(TriangleCase::Case1);
    let params = DiffusionParams {
        t_max: 0.5,
        ..DiffusionParams::default()
    };
    let traj = diffuse(Selector::Up, &c, PI / 3.0, &Cochain::random_unit(1, 3, 1), params).unwrap();
    let path = dir.path().join("traj.csv");
    export_trajectory_csv(&traj, &path).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,simplex,component,re,im,psi,theta,phi,energy");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), traj.times.len() * 3 * 2);
    for (k, e) in traj.energies.iter().enumerate() {
        assert!(rows[k * 6..(k + 1) * 6].iter().all(|r| r[8] == *e));
    }
}
