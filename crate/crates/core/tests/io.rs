use std::fs;
use std::path::Path;

use multifluid::grid::Dim;
use multifluid::integrator::Scheme;
use multifluid::io::snapshot::{csv_text, field_path, read_csv, read_grid_binary, write_csv, write_grid_binary};
use multifluid::io::{parse_config, run, RunConfig, Snapshot};
use multifluid::{Error, ExecPolicy};
use proptest::prelude::*;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden() -> Snapshot {
    Snapshot {
        dim: Dim::Two,
        nx: 3,
        ny: 2,
        x0: 0.0,
        y0: -0.5,
        dx: 0.5,
        dy: 0.5,
        time: 0.25,
        scheme: "pccu".into(),
        config_hash: "golden".into(),
        fields: vec![
            ("rho".into(), vec![1.0, 2.5, -0.125, 1e-300, std::f64::consts::PI, 6.02214076e23]),
            ("p".into(), vec![0.0, 0.1, 0.2, 0.30000000000000004, 0.4, 0.5]),
        ],
    }
}

#[test]
fn golden_fixture_decodes_to_known_values() {
    let s = read_grid_binary(&fixture("golden.meta")).unwrap();
    assert_eq!(s, golden());
    // x fastest: second row starts at index nx.
    assert_eq!(s.field("rho").unwrap()[3], 1e-300);
}

#[test]
fn writer_reproduces_golden_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("golden.meta");
    write_grid_binary(&golden(), &meta).unwrap();
    for name in ["golden.meta", "golden.rho.bin", "golden.p.bin"] {
        assert_eq!(fs::read(dir.path().join(name)).unwrap(), fs::read(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn truncated_array_is_reported_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("s.meta");
    write_grid_binary(&golden(), &meta).unwrap();
    fs::write(field_path(&meta, "p"), [0u8; 40]).unwrap();
    match read_grid_binary(&meta) {
        Err(Error::Format { path, .. }) => assert!(path.ends_with("s.p.bin")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(read_grid_binary(&dir.path().join("missing.meta")), Err(Error::Io { .. })));
}

fn arb_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_binary_round_trip_is_bit_exact(nx in 1usize..6, ny in 1usize..5, seed in arb_values(60), t in 0.0f64..10.0) {
        let mut s = golden();
        s.nx = nx;
        s.ny = ny;
        s.dim = if ny > 1 { Dim::Two } else { Dim::One };
        s.time = t;
        s.fields = vec![("rho".into(), seed[..nx * ny].to_vec()), ("u".into(), seed[30..30 + nx * ny].to_vec())];
        let dir = tempfile::tempdir().unwrap();
        let meta = dir.path().join("r.meta");
        write_grid_binary(&s, &meta).unwrap();
        let back = read_grid_binary(&meta).unwrap();
        for ((_, a), (_, b)) in s.fields.iter().zip(&back.fields) {
            prop_assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        prop_assert_eq!((back.nx, back.ny, back.time), (nx, ny, t));
    }

    #[test]
    fn csv_round_trip_is_bit_exact(nx in 1usize..40, vals in arb_values(200)) {
        let s = Snapshot {
            dim: Dim::One,
            nx,
            ny: 1,
            x0: -1.0,
            y0: 0.0,
            dx: 3.0 / nx as f64,
            dy: 1.0,
            time: 0.0,
            scheme: String::new(),
            config_hash: String::new(),
            fields: ["rho", "u", "p", "Gamma", "Pi"]
                .iter()
                .enumerate()
                .map(|(c, n)| (n.to_string(), vals[c * 40..c * 40 + nx].to_vec()))
                .collect(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_csv(&s, &path).unwrap();
        let back = read_csv(&path).unwrap();
        for ((_, a), (_, b)) in s.fields.iter().zip(&back.fields) {
            prop_assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}

#[test]
fn three_cell_csv_has_four_lines() {
    let mut s = golden();
    s.dim = Dim::One;
    s.nx = 3;
    s.ny = 1;
    s.fields = ["rho", "u", "p", "Gamma", "Pi"].iter().map(|n| (n.to_string(), vec![1.0, 2.0, 3.0])).collect();
    assert_eq!(csv_text(&s).lines().count(), 4);
}

fn run_in(dir: &Path, text: &str) -> multifluid::Result<multifluid::io::RunReport> {
    let mut cfg = parse_config(text).unwrap();
    cfg.out = dir.to_path_buf();
    run(&cfg, ExecPolicy::default())
}

#[test]
fn identical_configs_give_identical_files() {
    let text = "problem = ex4\nscheme = aiweno\nnx = 40\nny = 10\nt_final = 0.05";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run_in(a.path(), text).unwrap();
    let rb = run_in(b.path(), text).unwrap();
    assert_eq!(ra.steps, rb.steps);
    let names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(names.iter().any(|n| n.to_string_lossy().ends_with("schlieren.bin")));
    for n in names.iter().filter(|n| *n != "manifest.txt") {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap(), "{n:?}");
    }
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let text = "problem = ex2\nscheme = ldpccu\nnx = 90\nt_final = 0.005";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut cfg = parse_config(text).unwrap();
    cfg.out = a.path().to_path_buf();
    run(&cfg, ExecPolicy::Sequential).unwrap();
    cfg.out = b.path().to_path_buf();
    run(&cfg, ExecPolicy::default()).unwrap();
    let f = "ex2_ldpccu_000.csv";
    assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
}

#[test]
fn run_writes_schedule_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), "problem = ex1\nnx = 60\nsnapshots = 0.0, 0.1, 0.2").unwrap();
    assert_eq!(r.final_time, 3.0);
    assert_eq!(r.snapshots.len(), 4);
    let s0 = read_csv(&r.snapshots[0]).unwrap();
    assert_eq!(s0.field("rho").unwrap()[0], 1.0);
    let m = fs::read_to_string(&r.manifest).unwrap();
    assert!(m.starts_with("status: ok\n"));
    assert!(m.contains(&format!("steps: {}", r.steps)));
    let cfg = parse_config("problem = ex1\nnx = 60\nsnapshots = 0.0, 0.1, 0.2").unwrap();
    assert!(m.contains(&format!("config_hash: {}", cfg.hash())));
    // The config echo parses back.
    let echo = m.split("[config]\n").nth(1).unwrap();
    assert_eq!(parse_config(echo).unwrap().hash(), cfg.hash());
}

#[test]
fn abort_leaves_last_good_snapshot_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let err = run_in(dir.path(), "problem = ex3\nscheme = aiweno\nnx = 200\npositivity_fallback = false").unwrap_err();
    assert!(matches!(err, Error::SolverAbort { .. }), "{err}");
    let last = read_csv(&dir.path().join("ex3_aiweno_lastgood.csv")).unwrap();
    assert_eq!(last.nx, 200);
    assert!(last.field("p").unwrap().iter().all(|&p| p > 0.0));
    let m = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(m.starts_with("status: aborted"));
}

#[test]
fn reference_run_uses_pccu_on_the_fine_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_in(dir.path(), "problem = ex3\nscheme = aiweno\nreference = true\nt_final = 0.000002").unwrap();
    let s = read_csv(&r.snapshots[0]).unwrap();
    assert_eq!(s.nx, 6400);
    assert!(r.snapshots[0].to_string_lossy().contains("pccu"));
}

#[test]
fn config_hash_tracks_semantic_fields() {
    let base = RunConfig::new("ex1", Scheme::LdPccu);
    let mut variants = Vec::new();
    let mut c = base.clone();
    c.scheme = Scheme::Pccu;
    variants.push(c);
    let mut c = base.clone();
    c.theta = 1.5;
    variants.push(c);
    let mut c = base.clone();
    c.nx = Some(100);
    variants.push(c);
    let mut c = base.clone();
    c.hybrid = Some(true);
    variants.push(c);
    let mut c = base.clone();
    c.snapshots = Some(vec![1.0]);
    variants.push(c);
    for v in &variants {
        assert_ne!(v.hash(), base.hash());
    }
}
