//! Command-line driver: parse a run configuration, dispatch one subcommand,
//! and emit plot-ready CSV/JSON artifacts.
//!
//! Exit codes: 0 success; 1 configuration, I/O, or verification failure;
//! 2 Nehari projection failure after restarts; 3 component collapse;
//! 4 incomplete segregation; 5 resolution or numerics failure.

mod verify;

pub use verify::{run_verify, CheckResult, VerifyReport};

use crate::config::{ConfigError, RunConfig};
use crate::geometry::GeometryError;
use crate::solver::{
    continuation_segregate, default_sweep_grid, minimize_system, partition_sweep, Partition,
    SolverError, SweepResult,
};
use crate::special::SpecialError;
use crate::spectral::{symbol_asymptotics, Problem, SpectralError, SpectralField};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("verification failed: {failed} of {total} checks")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    /// The process exit code this error maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::VerifyFailed { .. } => 1,
            CliError::Solver(e) => match e {
                SolverError::ProjectionFailure { .. } => 2,
                SolverError::Collapse { .. } => 3,
                SolverError::SegregationIncomplete { .. } => 4,
                SolverError::Resolution { .. }
                | SolverError::Numerics(_)
                | SolverError::SupportViolation { .. }
                | SolverError::Spectral(_) => 5,
            },
            CliError::Spectral(_) | CliError::Geometry(_) | CliError::Special(_) => 5,
        }
    }
}

/// Spectral solver for symmetry-reduced critical systems and optimal
/// partitions on the round sphere.
#[derive(Debug, Parser)]
#[command(name = "fracpart", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Path to a JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the configuration seed (and therefore the config hash).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the eigenvalue/symbol table (spectrum.csv).
    Spectrum,
    /// Run the cross-check suite of every module; print a JSON report.
    Verify {
        /// Also run the slow checks: the direct-integral bilinear form and
        /// interval self-convergence under mode doubling.
        #[arg(long)]
        deep: bool,
    },
    /// Minimize the coupled system at the first schedule strength
    /// (solution_0.csv).
    Solve,
    /// Run the full segregation continuation (solution_<stage>.csv,
    /// partition.json, and comparison.json when a sweep result is present).
    Segregate,
    /// Slide a two-cell interface over a grid of angles (sweep.csv,
    /// partition.json).
    Sweep,
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    std::fs::create_dir_all(&cli.out).map_err(|source| CliError::Io {
        path: cli.out.display().to_string(),
        source,
    })?;
    match cli.command {
        Command::Spectrum => cmd_spectrum(&cfg, &cli.out),
        Command::Verify { deep } => cmd_verify(&cfg, deep, &cli.out),
        Command::Solve => cmd_solve(&cfg, &cli.out),
        Command::Segregate => cmd_segregate(&cfg, &cli.out),
        Command::Sweep => cmd_sweep(&cfg, &cli.out),
    }
}

// ---------------------------------------------------------------------------
// artifact documents
// ---------------------------------------------------------------------------

/// partition.json: the optimal-partition summary of one route.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionDoc {
    /// Hash of the effective configuration that produced this file.
    pub config: String,
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub route: String,
    pub angles: Vec<f64>,
    pub cell_energies: Vec<f64>,
    pub total: f64,
}

impl PartitionDoc {
    fn new(cfg: &RunConfig, p: &Partition) -> Self {
        Self {
            config: cfg.hash(),
            m: cfg.m,
            n: cfg.n,
            s: cfg.s,
            route: p.route.as_str().to_string(),
            angles: p.angles.clone(),
            cell_energies: p.cell_energies.clone(),
            total: p.total,
        }
    }

    fn same_problem(&self, cfg: &RunConfig) -> bool {
        self.m == cfg.m && self.n == cfg.n && self.s == cfg.s
    }
}

/// One route's summary inside comparison.json.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RouteSummary {
    pub route: String,
    pub angles: Vec<f64>,
    pub total: f64,
}

/// comparison.json: segregation vs sweep, side by side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonDoc {
    pub config: String,
    pub m: usize,
    pub n: usize,
    pub s: f64,
    pub segregation: RouteSummary,
    pub sweep: RouteSummary,
    /// Largest angle difference between the two routes (null when the routes
    /// found different interface counts).
    pub max_angle_gap: Option<f64>,
    /// |total_seg - total_sweep| / max(total_seg, total_sweep).
    pub total_rel_gap: f64,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("plain data serializes");
    text.push('\n');
    write_file(path, &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Option<T> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

/// spectrum.csv: one row per retained mode, five columns.
fn write_spectrum_csv(path: &Path, cfg: &RunConfig, pr: &Problem) -> Result<(), CliError> {
    let table = pr.spectrum_table();
    let ratios = symbol_asymptotics(&pr.params, pr.k().saturating_sub(1))?;
    let mut out = format!("# config {}\n", cfg.hash());
    out.push_str("i,lambda_i,b_i,phi_lambda_i,ratio_r_i\n");
    for i in 0..pr.k() {
        // The growth ratio r_i = phi(b_i)/b_i^s is undefined at i = 0
        // (b_0 = 0).
        let ratio = if i == 0 {
            "NaN".to_string()
        } else {
            format!("{}", ratios[i - 1])
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i, table.lambda[i], table.b[i], table.phi[i], ratio
        ));
    }
    write_file(path, &out)
}

/// solution_<stage>.csv: quadrature nodes in ascending angle, all components.
fn write_solution_csv(
    path: &Path,
    cfg: &RunConfig,
    pr: &Problem,
    fields: &[SpectralField],
) -> Result<(), CliError> {
    let values: Vec<Vec<f64>> = fields
        .iter()
        .map(|f| pr.synthesize(f))
        .collect::<Result<_, _>>()
        .map_err(SolverError::from)?;
    let mut out = format!("# config {}\n", cfg.hash());
    out.push_str("theta,t");
    for i in 1..=fields.len() {
        out.push_str(&format!(",u_{i}"));
    }
    out.push('\n');
    let thetas = pr.basis.theta_nodes();
    let ts = pr.basis.nodes();
    // Node angles descend with the node index; emit ascending theta.
    for r in (0..pr.q()).rev() {
        out.push_str(&format!("{},{}", thetas[r], ts[r]));
        for v in &values {
            out.push_str(&format!(",{}", v[r]));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// sweep.csv: the interface grid with both cell energies.
fn write_sweep_csv(path: &Path, cfg: &RunConfig, sweep: &SweepResult) -> Result<(), CliError> {
    let mut out = format!("# config {}\n", cfg.hash());
    out.push_str("a,c_left,c_right,total\n");
    for p in &sweep.points {
        out.push_str(&format!("{},{},{},{}\n", p.a, p.c_left, p.c_right, p.total));
    }
    write_file(path, &out)
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_spectrum(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pr = cfg.build_problem()?;
    let path = out.join("spectrum.csv");
    write_spectrum_csv(&path, cfg, &pr)?;
    println!(
        "spectrum: N = {}, s = {}, {} modes, phi(0) = {:.12} -> {}",
        pr.params.big_n,
        pr.params.s,
        pr.k(),
        pr.phi(0),
        path.display()
    );
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, deep: bool, out: &Path) -> Result<(), CliError> {
    let report = run_verify(cfg, deep)?;
    let text = serde_json::to_string_pretty(&report).expect("plain data serializes");
    println!("{text}");
    let path = out.join("verify.json");
    std::fs::write(&path, &text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::VerifyFailed {
            failed: report.checks.iter().filter(|c| !c.pass).count(),
            total: report.checks.len(),
        })
    }
}

fn cmd_solve(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pr = cfg.build_problem()?;
    let eta = cfg.eta_schedule[0];
    let coupling = cfg.coupling(eta)?;
    let opts = cfg.solve_options();
    let state = minimize_system(&pr, &coupling, None, &opts)?;
    let path = out.join("solution_0.csv");
    write_solution_csv(&path, cfg, &pr, &state.fields)?;
    println!(
        "solve: ell = {}, eta = {}, energy = {:.10}, residual = {:.3e}, {} iterations -> {}",
        cfg.ell,
        eta,
        state.energy,
        state.residual,
        state.iterations,
        path.display()
    );
    Ok(())
}

fn cmd_segregate(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pr = cfg.build_problem()?;
    let template = cfg.coupling(cfg.eta_schedule[0])?;
    let opts = cfg.solve_options();
    // A sweep summary already in the output directory (or remembered by a
    // previous comparison) enables the side-by-side report; read it before
    // partition.json is overwritten below.
    let partition_path = out.join("partition.json");
    let comparison_path = out.join("comparison.json");
    let prior_sweep: Option<RouteSummary> = read_json::<PartitionDoc>(&partition_path)
        .filter(|doc| doc.route == "sweep" && doc.same_problem(cfg))
        .map(|doc| RouteSummary {
            route: doc.route,
            angles: doc.angles,
            total: doc.total,
        })
        .or_else(|| {
            read_json::<ComparisonDoc>(&comparison_path)
                .filter(|doc| doc.m == cfg.m && doc.n == cfg.n && doc.s == cfg.s)
                .map(|doc| doc.sweep)
        });

    let run = continuation_segregate(&pr, &template, &cfg.eta_schedule, &opts)?;
    for (stage, state) in run.states.iter().enumerate() {
        write_solution_csv(
            &out.join(format!("solution_{stage}.csv")),
            cfg,
            &pr,
            &state.fields,
        )?;
    }
    write_json(&partition_path, &PartitionDoc::new(cfg, &run.partition))?;

    println!("stage        eta        energy     coupling   residual  iters");
    for (stage, st) in run.stages.iter().enumerate() {
        println!(
            "{:>5} {:>10} {:>13.6} {:>12.3e} {:>10.2e} {:>6}",
            stage, st.eta, st.energy, st.coupling_integral, st.residual, st.iterations
        );
    }
    println!(
        "segregate: interfaces {:?}, total = {:.8} -> {}",
        run.partition.angles,
        run.partition.total,
        partition_path.display()
    );

    if let Some(sweep) = prior_sweep {
        let seg = RouteSummary {
            route: "segregation".to_string(),
            angles: run.partition.angles.clone(),
            total: run.partition.total,
        };
        let max_angle_gap = (seg.angles.len() == sweep.angles.len()).then(|| {
            seg.angles
                .iter()
                .zip(&sweep.angles)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        });
        let total_rel_gap =
            (seg.total - sweep.total).abs() / seg.total.abs().max(sweep.total.abs()).max(1e-300);
        let doc = ComparisonDoc {
            config: cfg.hash(),
            m: cfg.m,
            n: cfg.n,
            s: cfg.s,
            segregation: seg,
            sweep,
            max_angle_gap,
            total_rel_gap,
        };
        write_json(&comparison_path, &doc)?;
        println!(
            "comparison: angle gap {:?}, total gap {:.3e} -> {}",
            doc.max_angle_gap,
            doc.total_rel_gap,
            comparison_path.display()
        );
    }
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pr = cfg.build_problem()?;
    let opts = cfg.solve_options();
    let grid = default_sweep_grid();
    let sweep = partition_sweep(&pr, &grid, &opts)?;
    write_sweep_csv(&out.join("sweep.csv"), cfg, &sweep)?;
    let partition_path = out.join("partition.json");
    write_json(&partition_path, &PartitionDoc::new(cfg, &sweep.partition))?;
    println!(
        "sweep: {} grid points, argmin a = {:.4}, total = {:.8} -> {}",
        sweep.points.len(),
        sweep.partition.angles[0],
        sweep.partition.total,
        partition_path.display()
    );
    Ok(())
}
