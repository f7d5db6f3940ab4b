use nsk_core::diagnostics::DiagnosticsRecord;
use nsk_lab::io::{self, Manifest, ProfileMeta, ProfileReportFile};
use nsk_lab::sweep::{read_fits, read_sweep, run_sweep};
use nsk_lab::verify::{run_battery, VerifyOptions, VerifyReport};
use nsk_lab::{pipeline, RunConfig};
use rand::{Rng, SeedableRng};

fn short_run() -> RunConfig {
    let ov: Vec<String> = ["end_states.delta_s=0.1", "t_final=4", "diag_cadence=0.5", "snapshot_cadence=2", "perturbation.width=20"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    RunConfig::load(None, &ov).unwrap()
}

#[test]
fn profile_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (p, rep) = pipeline::run_profile(&RunConfig::default(), dir.path()).unwrap();
    let back = io::read_profile(dir.path()).unwrap();
    assert_eq!(back.xi, p.xi);
    assert_eq!(back.v, p.v);
    assert_eq!(back.dv, p.dv);
    assert_eq!(back.end_states, p.end_states);
    for (a, b) in back.u.iter().zip(&p.u) {
        assert!((a - b).abs() <= 1e-15);
    }
    let meta: ProfileMeta = io::read_json(&dir.path().join("profile.json")).unwrap();
    assert_eq!(meta, ProfileMeta::of(&p));
    let r: ProfileReportFile = io::read_json(&dir.path().join("profile_report.json")).unwrap();
    assert_eq!(r, rep);
    assert!(!r.oscillatory && !r.diffusion.skipped);
}

#[test]
fn csv_floats_are_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cols.csv");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let a: Vec<f64> = (0..500).map(|_| f64::from_bits(rng.gen::<u64>() >> 2)).collect();
    let b: Vec<f64> = (0..500).map(|_| rng.gen_range(-1e-300..1e300)).collect();
    io::write_columns(&path, &["a", "b"], &[&a, &b]).unwrap();
    let cols = io::read_columns(&path, &["a", "b"]).unwrap();
    assert_eq!(cols[0], a);
    assert_eq!(cols[1], b);
    assert!(io::read_columns(&path, &["b", "a"]).is_err());
}

#[test]
fn simulation_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_run();
    let sim = pipeline::run_simulate(&cfg, dir.path()).unwrap();
    let recs = io::read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(recs, sim.result.records);
    let header = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap(), DiagnosticsRecord::COLUMNS.join(","));

    let manifest: Manifest = io::read_json(&dir.path().join("manifest.json")).unwrap();
    assert_eq!(manifest.config, cfg);
    assert_eq!(manifest.grid, sim.grid);
    assert_eq!(manifest.evolve, sim.evolve);
    assert!(manifest.completed);
    assert_eq!(manifest.snapshots.len(), sim.result.snapshots.len());
    assert_eq!(manifest.decay, sim.decay);
    for (entry, state) in manifest.snapshots.iter().zip(&sim.result.snapshots) {
        let [x, v, u, w] = io::read_snapshot(&dir.path().join(&entry.file)).unwrap();
        assert_eq!(x, sim.grid.coordinates());
        assert_eq!((v, u, w), (state.v.clone(), state.u.clone(), state.w.clone()));
        assert_eq!(entry.t, state.t);
    }
}

#[test]
fn diagnostics_are_byte_reproducible() {
    let cfg = short_run();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    pipeline::run_simulate(&cfg, a.path()).unwrap();
    pipeline::run_simulate(&cfg, b.path()).unwrap();
    for f in ["diagnostics.csv", "manifest.json", "snapshot_0001.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn verify_report_schema() {
    let report = run_battery(&RunConfig::default(), &VerifyOptions::default()).unwrap();
    assert!(report.passed, "{:?}", report.failing);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify_report.json");
    io::write_json(&path, &report).unwrap();
    let value: serde_json::Value = io::read_json(&path).unwrap();
    let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), VerifyReport::FIELDS.len());
    for k in VerifyReport::FIELDS {
        assert!(keys.contains(&k), "missing {k}");
    }
    for c in value["checks"].as_array().unwrap() {
        for k in VerifyReport::CHECK_FIELDS {
            assert!(c.get(k).is_some(), "check lacks {k}");
        }
    }
    let back: VerifyReport = io::read_json(&path).unwrap();
    assert_eq!(back.checks.len(), report.checks.len());
    assert_eq!(back.failing, report.failing);
}

#[test]
fn sweep_tables_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<String> = ["0.02", "0.04", "0.08", "-1"].iter().map(|s| s.to_string()).collect();
    let out = run_sweep(None, &[], "end_states.delta_s", &values, false, dir.path()).unwrap();
    assert_eq!(out.rows.len(), 4);
    assert_eq!(out.rows[3].status, "config");
    assert!(out.rows[..3].iter().all(|r| r.status == "ok"));
    assert_eq!(out.fits.len(), 4);
    assert_eq!(read_sweep(&dir.path().join("sweep.csv")).unwrap(), out.rows);
    assert_eq!(read_fits(&dir.path().join("sweep_fits.csv")).unwrap(), out.fits);
    assert!(dir.path().join("run_001/profile.csv").exists());
}
