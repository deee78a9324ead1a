//! Command-line front end.
//!
//! Settings come from flags, then an optional `key = value` config file,
//! then built-in defaults; `CHIRP_OUT_DIR` replaces the default output
//! directory. Exit status is 0 on success, 2 for bad arguments and 1 when
//! a numerical guard trips.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{
    compare_cell, run_experiment, write_alpha_curve_csv, ComparisonReport, ExperimentId,
    ExperimentSpec,
};
use crate::gridfield::{default_grid, make_grid, Grid};
use crate::propagators::PropagatorRegistry;
use crate::selftest::run_selftest;
use crate::specfun::QuadratureSpec;
use crate::state::InitialState;

pub const OUT_DIR_ENV: &str = "CHIRP_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "chirp", version, about = "Chirped wave packets under free evolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one state with one method and write the field as CSV.
    Propagate(CommonArgs),
    /// Print psi0/psi1 errors against the exact solution, and the exact
    /// solution against the spectral reference.
    Compare(CommonArgs),
    /// Errors of psi0 and psi1 over a list of alphas at one time.
    Sweep(CommonArgs),
    /// Write the data behind a figure (fig1..fig4, sweep, invariance, or all).
    Figure(CommonArgs),
    /// Run the built-in invariant checks.
    Selftest(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Initial state: airy:<eps>, airygauss:<eps>,<beta>, sinc:<b>, bessel:<n>, gauss:<sigma>
    #[arg(long)]
    pub state: Option<String>,
    /// Chirp strength; a comma-separated list for sweep and figure
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,
    /// Evolution time; a comma-separated list for figure
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    /// Number of grid points
    #[arg(long)]
    pub n: Option<usize>,
    /// Left edge of the grid
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    /// Right edge of the grid (exclusive)
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: Option<f64>,
    /// Output directory [default: $CHIRP_OUT_DIR, else ./out]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: available parallelism]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Evaluations at the first quadrature level
    #[arg(long = "quad-panels")]
    pub quad_panels: Option<usize>,
    /// Experiment id for figure: fig1, fig2, fig3, fig4, sweep, invariance, all
    #[arg(long)]
    pub id: Option<String>,
    /// Propagation method for propagate (see the error message for the list)
    #[arg(long)]
    pub method: Option<String>,
    /// File of `key = value` lines supplying any of the flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const CONFIG_KEYS: [&str; 11] = [
    "state", "alpha", "t", "n", "xmin", "xmax", "out", "jobs", "quad-panels", "id", "method",
];

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn parse_config(text: &str, origin: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(format!("{}:{}: expected key = value", origin.display(), i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(usage(format!(
                "{}:{}: unknown key '{key}'",
                origin.display(),
                i + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| usage(format!("config: bad value '{v}' for {key}")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_value(key, x.trim())).collect()
}

impl CommonArgs {
    /// Fills options the flags left unset from the config file.
    pub fn merged(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        for (key, v) in parse_config(&text, &path)? {
            match key.as_str() {
                "state" => self.state = self.state.or(Some(v)),
                "alpha" => self.alpha = self.alpha.or(Some(parse_list(&key, &v)?)),
                "t" => self.t = self.t.or(Some(parse_list(&key, &v)?)),
                "n" => self.n = self.n.or(Some(parse_value(&key, &v)?)),
                "xmin" => self.xmin = self.xmin.or(Some(parse_value(&key, &v)?)),
                "xmax" => self.xmax = self.xmax.or(Some(parse_value(&key, &v)?)),
                "out" => self.out = self.out.or(Some(PathBuf::from(v))),
                "jobs" => self.jobs = self.jobs.or(Some(parse_value(&key, &v)?)),
                "quad-panels" => {
                    self.quad_panels = self.quad_panels.or(Some(parse_value(&key, &v)?))
                }
                "id" => self.id = self.id.or(Some(v)),
                "method" => self.method = self.method.or(Some(v)),
                _ => unreachable!("keys checked in parse_config"),
            }
        }
        Ok(self)
    }

    fn state(&self) -> Result<Option<InitialState>> {
        self.state.as_deref().map(str::parse).transpose()
    }

    fn required_state(&self) -> Result<InitialState> {
        self.state()?.ok_or_else(|| usage("--state is required"))
    }

    fn single(values: &Option<Vec<f64>>, flag: &str) -> Result<f64> {
        match values.as_deref() {
            Some([v]) => Ok(*v),
            Some(_) => Err(usage(format!("--{flag} takes a single value here"))),
            None => Err(usage(format!("--{flag} is required"))),
        }
    }

    fn grid(&self) -> Result<Grid> {
        let d = default_grid();
        if self.n.is_none() && self.xmin.is_none() && self.xmax.is_none() {
            return Ok(d);
        }
        make_grid(
            self.n.unwrap_or(d.n()),
            self.xmin.unwrap_or(d.x_min()),
            self.xmax.unwrap_or(d.x_max()),
        )
    }

    fn quad(&self) -> Result<QuadratureSpec> {
        let q = QuadratureSpec::default();
        match self.quad_panels {
            Some(p) => q.with_panels(p),
            None => Ok(q),
        }
    }

    fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Preset for `id`, with any explicitly given settings applied.
    fn experiment(&self, id: ExperimentId) -> Result<ExperimentSpec> {
        let mut spec = ExperimentSpec::preset(id, self.out_dir());
        if let Some(st) = self.state()? {
            spec.state = st;
        }
        if let Some(a) = &self.alpha {
            spec.alphas = a.clone();
        }
        if let Some(t) = &self.t {
            spec.times = t.clone();
        }
        spec.grid = self.grid()?;
        spec.quad = self.quad()?;
        Ok(spec)
    }
}

fn print_report(out: &mut impl Write, report: &ComparisonReport, dir: &Path) -> io::Result<()> {
    let worst = report
        .worst_exact_vs_oracle
        .map_or("n/a".to_string(), |w| format!("{w:.3e}"));
    writeln!(
        out,
        "{}: {} cells, worst exact_vs_oracle {worst}, written to {}",
        report.experiment,
        report.cells.len(),
        dir.display()
    )
}

fn gate(report: &ComparisonReport) -> Result<()> {
    if report.consistent {
        Ok(())
    } else {
        Err(Error::Aliasing(format!(
            "{}: exact and spectral solutions disagree (worst {:?})",
            report.experiment, report.worst_exact_vs_oracle
        )))
    }
}

fn propagate(args: &CommonArgs, out: &mut impl Write) -> Result<()> {
    let registry = PropagatorRegistry::default();
    let name = args.method.as_deref().unwrap_or("exact");
    let prop = registry.get(name).map_err(|_| {
        usage(format!(
            "unknown method '{name}', expected one of: {}",
            registry.names().join(", ")
        ))
    })?;
    let state = args.required_state()?;
    let alpha = CommonArgs::single(&args.alpha, "alpha")?;
    let t = CommonArgs::single(&args.t, "t")?;
    let grid = args.grid()?;
    let evolved = prop.evolve(&state, alpha, t, &grid, &args.quad()?)?;
    let dir = args.out_dir().join("propagate");
    fs::create_dir_all(&dir)?;
    let path = dir.join(format!("{name}.csv"));
    evolved.field.write_csv(BufWriter::new(fs::File::create(&path)?))?;
    writeln!(
        out,
        "{} {} alpha={alpha} t={t} s={} f4={} norm={:.12e} -> {}",
        evolved.method,
        evolved.state,
        evolved.coeffs.s,
        evolved.coeffs.f4,
        evolved.field.l2_norm(),
        path.display()
    )?;
    Ok(())
}

fn compare(args: &CommonArgs, out: &mut impl Write) -> Result<()> {
    let state = args.required_state()?;
    let alpha = CommonArgs::single(&args.alpha, "alpha")?;
    let t = CommonArgs::single(&args.t, "t")?;
    let cell = compare_cell(&state, alpha, t, &args.grid()?, &args.quad()?)?;
    writeln!(out, "state={state} alpha={alpha} t={t} s={} f4={}", cell.s, cell.f4)?;
    writeln!(out, "err_psi0={:.6e}", cell.errors["psi0_vs_exact"])?;
    writeln!(out, "err_psi1={:.6e}", cell.errors["psi1_vs_exact"])?;
    writeln!(out, "err_exact_vs_oracle={:.6e}", cell.errors["exact_vs_oracle"])?;
    Ok(())
}

fn sweep(args: &CommonArgs, out: &mut impl Write) -> Result<()> {
    let spec = args.experiment(ExperimentId::Sweep)?;
    let report = run_experiment(&spec)?;
    let rows: Vec<_> = report
        .cells
        .iter()
        .map(|c| crate::experiments::AlphaErrorRow {
            alpha: c.alpha,
            err_psi0: c.errors["psi0_vs_exact"],
            err_psi1: c.errors["psi1_vs_exact"],
            f4: c.f4,
        })
        .collect();
    write_alpha_curve_csv(&rows, &mut *out)?;
    Ok(())
}

fn figure(args: &CommonArgs, out: &mut impl Write) -> Result<()> {
    let id = args
        .id
        .as_deref()
        .ok_or_else(|| usage("--id is required (fig1..fig4, sweep, invariance, all)"))?;
    let ids: Vec<ExperimentId> = if id == "all" {
        ExperimentId::ALL.to_vec()
    } else {
        vec![id.parse()?]
    };
    for id in ids {
        let spec = args.experiment(id)?;
        let report = run_experiment(&spec)?;
        print_report(out, &report, &spec.dir())?;
        gate(&report)?;
    }
    Ok(())
}

fn selftest(args: &CommonArgs, out: &mut impl Write) -> Result<bool> {
    let checks = run_selftest(&args.quad()?)?;
    for c in &checks {
        writeln!(out, "{}", c.line())?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} checks, {failed} failed", checks.len())?;
    Ok(failed == 0)
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| usage(format!("cannot start thread pool: {e}")))
}

/// Runs a parsed command; `Ok(false)` means the command ran but reported
/// failed checks.
pub fn execute(cli: Cli, out: &mut (impl Write + Send)) -> Result<bool> {
    let (args, kind) = match cli.command {
        Command::Propagate(a) => (a, 0),
        Command::Compare(a) => (a, 1),
        Command::Sweep(a) => (a, 2),
        Command::Figure(a) => (a, 3),
        Command::Selftest(a) => (a, 4),
    };
    let args = args.merged()?;
    let pool = thread_pool(args.jobs)?;
    pool.install(|| match kind {
        0 => propagate(&args, out).map(|_| true),
        1 => compare(&args, out).map(|_| true),
        2 => sweep(&args, out).map(|_| true),
        3 => figure(&args, out).map(|_| true),
        _ => selftest(&args, out),
    })
}

/// Exit code for an error: 2 for bad input, 1 for everything else.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidGrid(_)
        | Error::InvalidParameter(_)
        | Error::UnknownPropagator(_)
        | Error::NoClosedForm(_)
        | Error::GridMismatch => 2,
        Error::Cell { source, .. } if !source.is_numerical() => exit_code(source),
        _ => 1,
    }
}

pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = io::stdout();
    match execute(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
