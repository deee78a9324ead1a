//! Figure-data jobs, alpha sweeps and invariance audits.
//!
//! Every job writes `<output_dir>/<id>/<panel>.csv` plus `report.json`.
//! Cells (one per `(alpha, t)`) run in parallel and write their own panels;
//! the report is assembled after all cells finish. Nothing time-dependent
//! goes into the files, so reruns are byte-identical.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::{f4_sweep, forward_coeffs, write_f4_csv, FactorCoeffs};
use crate::gridfield::{default_grid, density_sup_error, rel_l2_error, Grid, WaveField};
use crate::propagators::{chirped_oracle, exact_closed_form, psi0, psi0_at, psi1, Method};
use crate::specfun::QuadratureSpec;
use crate::state::InitialState;

/// Closed forms must match the spectral reference this well for a report
/// to count as consistent.
pub const ORACLE_GATE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Sweep,
    Invariance,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] = [
        ExperimentId::Fig1,
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::Sweep,
        ExperimentId::Invariance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Fig1 => "fig1",
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::Sweep => "sweep",
            ExperimentId::Invariance => "invariance",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: ExperimentId,
    pub state: InitialState,
    pub alphas: Vec<f64>,
    pub times: Vec<f64>,
    pub grid: Grid,
    pub output_dir: PathBuf,
    pub quad: QuadratureSpec,
}

impl ExperimentSpec {
    /// The parameters behind each figure, on the default grid.
    pub fn preset(id: ExperimentId, output_dir: impl Into<PathBuf>) -> Self {
        let (state, alphas, times) = match id {
            ExperimentId::Fig1 => (
                InitialState::AiryGauss {
                    eps: 1.0,
                    beta: 0.01,
                },
                vec![0.0],
                vec![0.0, 1.0, 2.0],
            ),
            ExperimentId::Fig2 => (
                InitialState::Gaussian { sigma: 1.0 },
                vec![10.0, 5.0, 0.5],
                (0..500).map(|i| 5.0 * (i + 1) as f64 / 500.0).collect(),
            ),
            ExperimentId::Fig3 => (InitialState::Sinc { b: 1.0 }, vec![0.3, 3.0], vec![5.0]),
            ExperimentId::Fig4 => (
                InitialState::Bessel { n: 0 },
                vec![10.0, 5.0, 0.5],
                vec![5.0],
            ),
            ExperimentId::Sweep => (
                InitialState::Sinc { b: 1.0 },
                vec![0.3, 1.0, 3.0, 10.0],
                vec![5.0],
            ),
            ExperimentId::Invariance => {
                (InitialState::Sinc { b: 1.0 }, vec![1.0], vec![0.0, 1.0, 5.0])
            }
        };
        ExperimentSpec {
            id,
            state,
            alphas,
            times,
            grid: default_grid(),
            output_dir: output_dir.into(),
            quad: QuadratureSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(format!("{}: {m}", self.id)));
        if self.alphas.is_empty() || self.times.is_empty() {
            return bad("alphas and times must be non-empty".into());
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
            return bad(format!("alpha must be finite and >= 0, got {a}"));
        }
        if let Some(t) = self.times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
            return bad(format!("t must be finite and >= 0, got {t}"));
        }
        self.state.validate()?;
        self.quad.validate()?;
        match self.id {
            ExperimentId::Fig1 if self.alphas.len() != 1 => {
                bad("takes a single alpha".into())
            }
            ExperimentId::Fig3 | ExperimentId::Fig4 | ExperimentId::Sweep
                if self.times.len() != 1 =>
            {
                bad("takes a single time".into())
            }
            ExperimentId::Invariance if self.alphas.len() != 1 => {
                bad("takes a single alpha".into())
            }
            ExperimentId::Fig2 if self.alphas.contains(&0.0) => {
                bad("the large-alpha series needs alpha > 0".into())
            }
            _ => Ok(()),
        }
    }

    pub fn dir(&self) -> PathBuf {
        self.output_dir.join(self.id.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridInfo {
    pub n: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        GridInfo {
            n: g.n(),
            x_min: g.x_min(),
            x_max: g.x_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub alpha: f64,
    pub t: f64,
    /// The evolution whose data was written for this cell.
    pub method: Method,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub s: f64,
    pub panels: Vec<String>,
    pub errors: BTreeMap<String, f64>,
}

impl CellReport {
    fn new(c: &FactorCoeffs, method: Method) -> Self {
        CellReport {
            alpha: c.alpha,
            t: c.t,
            method,
            f1: c.f1,
            f2: c.f2,
            f3: c.f3,
            f4: c.f4,
            s: c.s,
            panels: Vec::new(),
            errors: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub experiment: ExperimentId,
    pub state: String,
    pub grid: GridInfo,
    pub cells: Vec<CellReport>,
    /// Largest exact-vs-oracle error over all cells, if any were measured.
    pub worst_exact_vs_oracle: Option<f64>,
    pub consistent: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ComparisonReport {
    pub fn errors_are_valid(&self) -> bool {
        self.cells
            .iter()
            .flat_map(|c| c.errors.values())
            .all(|e| e.is_finite() && *e >= 0.0)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, self)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaErrorRow {
    pub alpha: f64,
    pub err_psi0: f64,
    pub err_psi1: f64,
    pub f4: f64,
}

/// Relative L2 errors of psi0 and psi1 against the exact solution, sorted
/// by alpha.
pub fn alpha_error_curve(
    state: &InitialState,
    alphas: &[f64],
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<Vec<AlphaErrorRow>> {
    let mut rows = alphas
        .par_iter()
        .map(|&alpha| {
            let row = || -> Result<AlphaErrorRow> {
                let ex = exact_closed_form(state, alpha, t, grid, quad)?;
                let p0 = psi0(state, alpha, t, grid, quad)?;
                let p1 = psi1(state, alpha, t, grid, quad)?;
                Ok(AlphaErrorRow {
                    alpha,
                    err_psi0: rel_l2_error(&p0.field, &ex.field)?,
                    err_psi1: rel_l2_error(&p1.field, &ex.field)?,
                    f4: ex.coeffs.f4,
                })
            };
            row().map_err(|e| cell_error(alpha, t, e))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(rows)
}

pub fn write_alpha_curve_csv<W: Write>(rows: &[AlphaErrorRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "err_psi0", "err_psi1", "f4"])?;
    for r in rows {
        w.write_record(fmt_row(&[r.alpha, r.err_psi0, r.err_psi1, r.f4]))?;
    }
    w.flush()?;
    Ok(())
}

fn cell_error(alpha: f64, t: f64, e: Error) -> Error {
    match e {
        Error::Cell { .. } => e,
        other => Error::Cell {
            alpha,
            t,
            source: Box::new(other),
        },
    }
}

fn fmt_row(values: &[f64]) -> Vec<String> {
    values.iter().map(f64::to_string).collect()
}

/// One CSV with an `x` column and named density columns.
fn write_columns(path: &Path, grid: &Grid, columns: &[(&str, Vec<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    let mut header = vec!["x"];
    header.extend(columns.iter().map(|(name, _)| *name));
    w.write_record(&header)?;
    for (j, x) in grid.xs().enumerate() {
        let mut row = vec![x.to_string()];
        row.extend(columns.iter().map(|(_, v)| v[j].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn difference(a: &WaveField, b: &WaveField) -> Vec<f64> {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .collect()
}

/// Panel letters `a, b, c, ...`.
fn letter(i: usize) -> String {
    char::from(b'a' + i as u8).to_string()
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ComparisonReport> {
    spec.validate()?;
    let start = Instant::now();
    let dir = spec.dir();
    fs::create_dir_all(&dir)?;

    let cells = match spec.id {
        ExperimentId::Fig1 => run_field_dumps(spec, &dir)?,
        ExperimentId::Fig2 => run_f4_curves(spec, &dir)?,
        ExperimentId::Fig3 => run_comparisons(spec, &dir, Layout::ExactPsi0ThenDifference)?,
        ExperimentId::Fig4 => run_comparisons(spec, &dir, Layout::AllDensities)?,
        ExperimentId::Sweep => run_sweep(spec, &dir)?,
        ExperimentId::Invariance => run_invariance(spec, &dir)?,
    };

    let worst = cells
        .iter()
        .filter_map(|c| c.errors.get("exact_vs_oracle").copied())
        .reduce(f64::max);
    let mut report = ComparisonReport {
        experiment: spec.id,
        state: spec.state.to_string(),
        grid: GridInfo::from(&spec.grid),
        cells,
        worst_exact_vs_oracle: worst,
        consistent: worst.is_none_or(|w| w <= ORACLE_GATE),
        wall_time: Duration::ZERO,
    };
    report.consistent &= report.errors_are_valid();
    report.write_json(&dir.join("report.json"))?;
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Pairs every alpha with every time, alpha-major.
fn cell_params(spec: &ExperimentSpec) -> Vec<(f64, f64)> {
    spec.alphas
        .iter()
        .flat_map(|&a| spec.times.iter().map(move |&t| (a, t)))
        .collect()
}

fn par_cells<F>(spec: &ExperimentSpec, f: F) -> Result<Vec<CellReport>>
where
    F: Fn(usize, f64, f64) -> Result<CellReport> + Sync,
{
    cell_params(spec)
        .into_par_iter()
        .enumerate()
        .map(|(i, (alpha, t))| f(i, alpha, t).map_err(|e| cell_error(alpha, t, e)))
        .collect()
}

fn exact_vs_oracle(
    spec: &ExperimentSpec,
    exact: &WaveField,
    alpha: f64,
    t: f64,
    errors: &mut BTreeMap<String, f64>,
) -> Result<()> {
    let oracle = chirped_oracle(&spec.state, alpha, t, &spec.grid, &spec.quad)?;
    errors.insert("exact_vs_oracle".into(), rel_l2_error(exact, &oracle.field)?);
    errors.insert(
        "density_sup_exact_vs_oracle".into(),
        density_sup_error(exact, &oracle.field)?,
    );
    Ok(())
}

/// Exact field at each time, one panel per cell.
fn run_field_dumps(spec: &ExperimentSpec, dir: &Path) -> Result<Vec<CellReport>> {
    par_cells(spec, |i, alpha, t| {
        let ex = exact_closed_form(&spec.state, alpha, t, &spec.grid, &spec.quad)?;
        let mut cell = CellReport::new(&ex.coeffs, Method::ExactClosedForm);
        exact_vs_oracle(spec, &ex.field, alpha, t, &mut cell.errors)?;
        let panel = letter(i);
        ex.field
            .write_csv(BufWriter::new(File::create(dir.join(format!("{panel}.csv")))?))?;
        cell.panels.push(panel);
        Ok(cell)
    })
}

/// f4 and its two asymptotic series against time, one file per alpha.
fn run_f4_curves(spec: &ExperimentSpec, dir: &Path) -> Result<Vec<CellReport>> {
    spec.alphas
        .par_iter()
        .map(|&alpha| {
            let t_end = *spec.times.last().expect("validated non-empty");
            let inner = || -> Result<CellReport> {
                let rows = f4_sweep(alpha, &spec.times)?;
                let panel = format!("alpha_{alpha}");
                write_f4_csv(&rows, BufWriter::new(File::create(dir.join(format!("{panel}.csv")))?))?;
                let mut cell = CellReport::new(&forward_coeffs(alpha, t_end)?, Method::ExactClosedForm);
                let small = rows.iter().map(|r| (r.f4_exact - r.f4_small_alpha).abs());
                let large = rows.iter().map(|r| (r.f4_exact - r.f4_large_alpha).abs());
                cell.errors.insert("max_small_alpha_residual".into(), small.fold(0.0, f64::max));
                cell.errors.insert("max_large_alpha_residual".into(), large.fold(0.0, f64::max));
                cell.panels.push(panel);
                Ok(cell)
            };
            inner().map_err(|e| cell_error(alpha, t_end, e))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// Two panels per cell: exact with psi0, then psi0 with |psi1 - psi0|^2.
    ExactPsi0ThenDifference,
    /// One panel per cell: exact, psi0 and psi1 densities.
    AllDensities,
}

/// The fields behind one comparison cell.
struct Compared {
    exact: WaveField,
    psi0: WaveField,
    psi1: WaveField,
}

fn compare_fields(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<(CellReport, Compared)> {
    let ex = exact_closed_form(state, alpha, t, grid, quad)?;
    let p0 = psi0(state, alpha, t, grid, quad)?;
    let p1 = psi1(state, alpha, t, grid, quad)?;
    let oracle = chirped_oracle(state, alpha, t, grid, quad)?;
    let mut cell = CellReport::new(&ex.coeffs, Method::ExactClosedForm);
    let e = &mut cell.errors;
    e.insert("psi0_vs_exact".into(), rel_l2_error(&p0.field, &ex.field)?);
    e.insert("psi1_vs_exact".into(), rel_l2_error(&p1.field, &ex.field)?);
    e.insert("exact_vs_oracle".into(), rel_l2_error(&ex.field, &oracle.field)?);
    e.insert(
        "density_sup_psi0_vs_exact".into(),
        density_sup_error(&p0.field, &ex.field)?,
    );
    e.insert(
        "density_sup_exact_vs_oracle".into(),
        density_sup_error(&ex.field, &oracle.field)?,
    );
    let fields = Compared {
        exact: ex.field,
        psi0: p0.field,
        psi1: p1.field,
    };
    Ok((cell, fields))
}

/// psi0 and psi1 against the exact solution, and the exact solution
/// against the spectral reference, for one `(alpha, t)`.
pub fn compare_cell(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<CellReport> {
    compare_fields(state, alpha, t, grid, quad)
        .map(|(cell, _)| cell)
        .map_err(|e| cell_error(alpha, t, e))
}

fn run_comparisons(spec: &ExperimentSpec, dir: &Path, layout: Layout) -> Result<Vec<CellReport>> {
    par_cells(spec, |i, alpha, t| {
        let g = &spec.grid;
        let (mut cell, f) = compare_fields(&spec.state, alpha, t, g, &spec.quad)?;
        let (ex, p0, p1) = (&f.exact, &f.psi0, &f.psi1);

        match layout {
            Layout::ExactPsi0ThenDifference => {
                let first = letter(2 * i);
                let second = letter(2 * i + 1);
                write_columns(
                    &dir.join(format!("{first}.csv")),
                    g,
                    &[
                        ("density_exact", ex.density()),
                        ("density_psi0", p0.density()),
                    ],
                )?;
                write_columns(
                    &dir.join(format!("{second}.csv")),
                    g,
                    &[
                        ("density_psi0", p0.density()),
                        ("density_psi1_minus_psi0", difference(p1, p0)),
                    ],
                )?;
                cell.panels = vec![first, second];
            }
            Layout::AllDensities => {
                let panel = letter(i);
                write_columns(
                    &dir.join(format!("{panel}.csv")),
                    g,
                    &[
                        ("density_exact", ex.density()),
                        ("density_psi0", p0.density()),
                        ("density_psi1", p1.density()),
                    ],
                )?;
                cell.panels = vec![panel];
            }
        }
        Ok(cell)
    })
}

fn run_sweep(spec: &ExperimentSpec, dir: &Path) -> Result<Vec<CellReport>> {
    let t = spec.times[0];
    let rows = alpha_error_curve(&spec.state, &spec.alphas, t, &spec.grid, &spec.quad)?;
    write_alpha_curve_csv(&rows, BufWriter::new(File::create(dir.join("sweep.csv"))?))?;
    rows.iter()
        .map(|r| {
            let mut cell = CellReport::new(&forward_coeffs(r.alpha, t)?, Method::ExactClosedForm);
            cell.errors.insert("psi0_vs_exact".into(), r.err_psi0);
            cell.errors.insert("psi1_vs_exact".into(), r.err_psi1);
            cell.panels.push("sweep".into());
            Ok(cell)
        })
        .collect()
}

/// Probe coordinates in profile space for the invariance audit.
pub fn invariance_probes() -> Vec<f64> {
    (0..20).map(|j| -9.5 + j as f64).collect()
}

/// `s |psi0|^2 (s x0)` at each probe, which must not depend on t.
pub fn invariant_density(
    state: &InitialState,
    c: &FactorCoeffs,
    probes: &[f64],
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    probes
        .iter()
        .map(|&x0| Ok(c.s * psi0_at(state, c, c.s * x0, quad)?.norm_sqr()))
        .collect()
}

fn run_invariance(spec: &ExperimentSpec, dir: &Path) -> Result<Vec<CellReport>> {
    let alpha = spec.alphas[0];
    let probes = invariance_probes();
    let columns = spec
        .times
        .iter()
        .map(|&t| {
            let c = forward_coeffs(alpha, t).map_err(|e| cell_error(alpha, t, e))?;
            let v = invariant_density(&spec.state, &c, &probes, &spec.quad)
                .map_err(|e| cell_error(alpha, t, e))?;
            Ok((c, v))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(dir.join("invariance.csv"))?));
    let mut header = vec!["x0".to_string()];
    header.extend(spec.times.iter().map(|t| format!("t={t}")));
    w.write_record(&header)?;
    for (j, x0) in probes.iter().enumerate() {
        let mut row = vec![x0.to_string()];
        row.extend(columns.iter().map(|(_, v)| v[j].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;

    let reference = &columns[0].1;
    Ok(columns
        .iter()
        .map(|(c, v)| {
            let mut cell = CellReport::new(c, Method::Psi0);
            let dev = v
                .iter()
                .zip(reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            cell.errors.insert("max_invariance_deviation".into(), dev);
            cell.panels.push("invariance".into());
            cell
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfield::make_grid;

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.as_str().parse::<ExperimentId>().unwrap(), id);
        }
        assert!("fig5".parse::<ExperimentId>().is_err());
    }

    #[test]
    fn presets_validate() {
        for id in ExperimentId::ALL {
            ExperimentSpec::preset(id, "out").validate().unwrap();
        }
        let mut bad = ExperimentSpec::preset(ExperimentId::Fig3, "out");
        bad.alphas.clear();
        assert!(bad.validate().is_err());
        bad.alphas = vec![-1.0];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn fig2_time_grid() {
        let s = ExperimentSpec::preset(ExperimentId::Fig2, "out");
        assert_eq!(s.times.len(), 500);
        assert_eq!(s.times[0], 0.01);
        assert_eq!(*s.times.last().unwrap(), 5.0);
    }

    #[test]
    fn small_sweep_writes_files_and_orders_rows() {
        let tmp = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::preset(ExperimentId::Sweep, tmp.path());
        spec.grid = make_grid(1024, -40.0, 40.0).unwrap();
        spec.alphas = vec![3.0, 0.3];
        let report = run_experiment(&spec).unwrap();
        assert_eq!(report.cells[0].alpha, 0.3);
        assert!(report.errors_are_valid());
        let csv = fs::read_to_string(tmp.path().join("sweep/sweep.csv")).unwrap();
        assert!(csv.starts_with("alpha,err_psi0,err_psi1,f4\n0.3,"));
        assert!(tmp.path().join("sweep/report.json").exists());
    }

    #[test]
    fn invariance_is_exact() {
        let tmp = tempfile::tempdir().unwrap();
        let spec = ExperimentSpec::preset(ExperimentId::Invariance, tmp.path());
        let report = run_experiment(&spec).unwrap();
        for cell in &report.cells {
            assert!(cell.errors["max_invariance_deviation"] <= 1e-12);
        }
    }

    #[test]
    fn failures_name_the_cell() {
        let tmp = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::preset(ExperimentId::Fig3, tmp.path());
        spec.state = InitialState::Tabulated(WaveField::zeros(make_grid(8, -1.0, 1.0).unwrap()));
        spec.alphas = vec![0.3];
        match run_experiment(&spec) {
            Err(Error::Cell { alpha, t, .. }) => assert_eq!((alpha, t), (0.3, 5.0)),
            other => panic!("expected a cell error, got {other:?}"),
        }
    }
}
