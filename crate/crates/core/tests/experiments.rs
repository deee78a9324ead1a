//! Figure jobs: file layout, content and the expected error trends.

use std::fs;

use chirp::experiments::{alpha_error_curve, run_experiment, ExperimentId, ExperimentSpec};
use chirp::gridfield::default_grid;
use chirp::{InitialState, QuadratureSpec};

fn header(path: &std::path::Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn fig3_panels_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec::preset(ExperimentId::Fig3, tmp.path());
    let report = run_experiment(&spec).unwrap();
    let dir = tmp.path().join("fig3");
    assert_eq!(header(&dir.join("a.csv")), "x,density_exact,density_psi0");
    assert_eq!(header(&dir.join("b.csv")), "x,density_psi0,density_psi1_minus_psi0");
    assert_eq!(header(&dir.join("c.csv")), "x,density_exact,density_psi0");
    assert_eq!(header(&dir.join("d.csv")), "x,density_psi0,density_psi1_minus_psi0");
    assert_eq!(fs::read_to_string(dir.join("a.csv")).unwrap().lines().count(), 8193);
    assert!(report.consistent);
    assert!(report.worst_exact_vs_oracle.unwrap() <= 1e-5);

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["experiment"], "fig3");
    assert_eq!(json["grid"]["n"], 8192);
    let cell = &json["cells"][0];
    for key in ["alpha", "t", "method", "f1", "f2", "f3", "f4", "s", "errors"] {
        assert!(!cell[key].is_null(), "missing {key}");
    }
    assert!(json.get("wall_time").is_none());
}

#[test]
fn fig4_error_grows_as_alpha_shrinks() {
    let tmp = tempfile::tempdir().unwrap();
    let report = run_experiment(&ExperimentSpec::preset(ExperimentId::Fig4, tmp.path())).unwrap();
    let errs: Vec<(f64, f64, f64)> = report
        .cells
        .iter()
        .map(|c| (c.alpha, c.errors["psi0_vs_exact"], c.errors["psi1_vs_exact"]))
        .collect();
    assert_eq!(errs.iter().map(|e| e.0).collect::<Vec<_>>(), [10.0, 5.0, 0.5]);
    assert!(errs[0].1 < errs[1].1 && errs[1].1 < errs[2].1);
    assert!(errs[0].2 < errs[1].2 && errs[1].2 < errs[2].2);
    for p in ["a", "b", "c"] {
        assert_eq!(
            header(&tmp.path().join(format!("fig4/{p}.csv"))),
            "x,density_exact,density_psi0,density_psi1"
        );
    }
}

#[test]
fn fig1_packet_broadens() {
    let tmp = tempfile::tempdir().unwrap();
    run_experiment(&ExperimentSpec::preset(ExperimentId::Fig1, tmp.path())).unwrap();
    let peak = |p: &str| {
        fs::read_to_string(tmp.path().join(format!("fig1/{p}.csv")))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .fold(0.0, f64::max)
    };
    // same norm, spread wider: the peak density drops
    assert!(peak("c") < 0.9 * peak("a"));
}

#[test]
fn sweep_table() {
    let rows = alpha_error_curve(
        &InitialState::Sinc { b: 1.0 },
        &[10.0, 0.3, 3.0, 1.0],
        5.0,
        &default_grid(),
        &QuadratureSpec::default(),
    )
    .unwrap();
    let alphas: Vec<f64> = rows.iter().map(|r| r.alpha).collect();
    assert_eq!(alphas, [0.3, 1.0, 3.0, 10.0]);
    assert!(rows.windows(2).all(|w| w[1].err_psi0 < w[0].err_psi0));
    assert!(rows.iter().all(|r| r.err_psi1 <= r.err_psi0));
    for r in rows.iter().filter(|r| r.alpha >= 3.0) {
        let want = -1.0 / (4.0 * r.alpha);
        assert!(((r.f4 - want) / want).abs() <= 0.1);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for k in 0..2 {
        let spec = ExperimentSpec::preset(ExperimentId::Fig2, tmp.path().join(k.to_string()));
        run_experiment(&spec).unwrap();
        let dir = spec.dir();
        let mut names: Vec<_> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
        names.sort();
        bytes.push(names.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[0].len(), 4);
}
