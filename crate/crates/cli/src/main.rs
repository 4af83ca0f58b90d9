//! `persuasion` — command-line front end for the two-project persuasion
//! solver, its brute-force oracle, the Monte Carlo simulator, and the
//! comparative-statics sweeps.

mod config;
mod docs;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use persuasion_core::model::{BehaviorRule, RuleMode};
use persuasion_core::oracle::{compare_to_closed_form, oracle_solve, write_surface_csv};
use persuasion_core::sim::{reduce_chunks, simulate_chunks, write_chunk_trace_csv};
use persuasion_core::solver::{solve_benchmark, solve_two_project};
use persuasion_core::statics::{
    region_map, sweep_e, unexpected_mismatches, write_region_csv, write_sweep_csv,
};
use persuasion_core::{verify, Error, Policy};

use config::Overrides;

/// Exit 0 success; 1 invalid parameters/config (and failed verification);
/// 2 empty feasible set or empty regime; 3 I/O failure.
#[derive(Debug)]
enum CliError {
    Config(String),
    Model(Error),
    Io(String),
    VerifyFailed { passed: usize, total: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::VerifyFailed { .. } => 1,
            CliError::Model(Error::EmptyFeasibleSet) => 2,
            CliError::Model(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Model(err) => write!(f, "{err}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::VerifyFailed { passed, total } => {
                write!(f, "verification failed: {passed}/{total} checks passed")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Textbook,
}

impl From<ModeArg> for RuleMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Paper => RuleMode::Paper,
            ModeArg::Textbook => RuleMode::Textbook,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "persuasion",
    version,
    about = "Solver, brute-force oracle, and simulator for a two-project \
             investment-promotion persuasion game",
    after_help = "Model parameters (p, c, e, mu-a, mu-b) are mandatory and come from flags \
                  or a JSON config file (--config, or the PERSUASION_CONFIG environment \
                  variable); flags override the file."
)]
struct Cli {
    /// JSON config file; a previously emitted solution document also works.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Prior success probability, in (0, c).
    #[arg(long, global = true)]
    p: Option<f64>,

    /// Funding cost, in (0, 1).
    #[arg(long, global = true)]
    c: Option<f64>,

    /// Investor's information-acquisition effort cost, in (0, c).
    #[arg(long, global = true)]
    e: Option<f64>,

    /// Sender's spillover from project A, above mu-b.
    #[arg(long = "mu-a", global = true)]
    mu_a: Option<f64>,

    /// Sender's spillover from project B, above c.
    #[arg(long = "mu-b", global = true)]
    mu_b: Option<f64>,

    /// Investor behavior rule.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    /// Oracle grid points per accuracy axis (default 201).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Monte Carlo sample count (default 1000000).
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Master RNG seed (default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Artifact format; each subcommand has exactly one native format
    /// (json for solve/benchmark/oracle/simulate, csv for sweep/regions),
    /// so this flag only validates.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form solution of the two-project game.
    Solve,
    /// Closed-form solution of the single-project benchmark.
    Benchmark,
    /// Grid brute force plus a comparison against the closed form.
    Oracle {
        /// Also dump the full payoff surface as CSV.
        #[arg(long, value_name = "PATH")]
        surface: Option<PathBuf>,
    },
    /// Monte Carlo simulation of a policy (default: the solved optimum).
    Simulate {
        /// Accuracy for project A (default: optimal).
        #[arg(long = "sigma-a")]
        sigma_a: Option<f64>,
        /// Accuracy for project B (default: optimal).
        #[arg(long = "sigma-b")]
        sigma_b: Option<f64>,
        /// Also dump the per-chunk trace as CSV.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Threshold and cutoff sweep across effort costs (CSV).
    Sweep {
        /// Lowest effort on the grid (default: c/(steps+1)).
        #[arg(long = "e-min")]
        e_min: Option<f64>,
        /// Highest effort on the grid (default: c*steps/(steps+1)).
        #[arg(long = "e-max")]
        e_max: Option<f64>,
        /// Number of grid points.
        #[arg(long = "e-steps", default_value_t = 50)]
        e_steps: usize,
    },
    /// Regime map over the (p, e) plane (CSV).
    Regions {
        #[arg(long = "p-min")]
        p_min: Option<f64>,
        #[arg(long = "p-max")]
        p_max: Option<f64>,
        #[arg(long = "p-steps", default_value_t = 50)]
        p_steps: usize,
        #[arg(long = "e-min")]
        e_min: Option<f64>,
        #[arg(long = "e-max")]
        e_max: Option<f64>,
        #[arg(long = "e-steps", default_value_t = 10)]
        e_steps: usize,
        /// Cross-check every cell against the grid oracle.
        #[arg(long = "oracle-check")]
        oracle_check: bool,
    },
    /// Run the acceptance suite and report pass/fail counts.
    Verify {
        /// Only run checks whose name contains this substring.
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn emit(output: Option<&Path>, artifact: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, artifact)
            .map_err(|err| CliError::Io(format!("cannot write {}: {err}", path.display()))),
        None => {
            print!("{artifact}");
            std::io::stdout()
                .flush()
                .map_err(|err| CliError::Io(format!("cannot write stdout: {err}")))
        }
    }
}

fn check_format(flag: Option<FormatArg>, native: FormatArg) -> Result<(), CliError> {
    match flag {
        Some(requested) if requested != native => Err(CliError::Config(format!(
            "this subcommand emits {native:?} artifacts, not {requested:?}"
        ))),
        _ => Ok(()),
    }
}

/// Linear grid of `steps` points: `[lo, hi]` inclusive when both ends are
/// given, otherwise the interior points `c*k/(steps+1)`.
fn build_grid(
    name: &str,
    lo: Option<f64>,
    hi: Option<f64>,
    steps: usize,
    c: f64,
) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::Config(format!("{name}-steps must be positive")));
    }
    let grid = match (lo, hi) {
        (Some(lo), Some(hi)) => {
            if steps == 1 {
                vec![lo]
            } else {
                (0..steps)
                    .map(|k| lo + (hi - lo) * (k as f64 / (steps - 1) as f64))
                    .collect()
            }
        }
        (None, None) => (1..=steps)
            .map(|k| c * (k as f64 / (steps + 1) as f64))
            .collect(),
        _ => {
            return Err(CliError::Config(format!(
                "{name}-min and {name}-max must be given together"
            )))
        }
    };
    Ok(grid)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        p: cli.p,
        c: cli.c,
        e: cli.e,
        mu_a: cli.mu_a,
        mu_b: cli.mu_b,
        mode: cli.mode.map(RuleMode::from),
        grid: cli.grid,
        samples: cli.samples,
        seed: cli.seed,
    };
    // verify needs no model parameters
    if let Command::Verify { only } = &cli.command {
        check_format(cli.format, FormatArg::Json)?;
        return run_verify(only.as_deref(), cli.output.as_deref());
    }
    let run = config::resolve(cli.config.clone(), overrides)?;

    match &cli.command {
        Command::Solve => {
            check_format(cli.format, FormatArg::Json)?;
            let solution = solve_two_project(&run.params);
            let doc = docs::SolveDoc::new(&run, &solution);
            emit(cli.output.as_deref(), &docs::to_json(&doc))
        }
        Command::Benchmark => {
            check_format(cli.format, FormatArg::Json)?;
            let solution = solve_benchmark(&run.params);
            let doc = docs::SolveDoc::new(&run, &solution);
            emit(cli.output.as_deref(), &docs::to_json(&doc))
        }
        Command::Oracle { surface } => {
            check_format(cli.format, FormatArg::Json)?;
            let rule = BehaviorRule::for_mode(run.mode, &run.params);
            let keep_surface = surface.is_some();
            let oracle = oracle_solve(&run.params, &rule, run.grid, keep_surface)
                .map_err(CliError::Model)?;
            if let (Some(path), Some(cells)) = (surface, &oracle.payoff_surface) {
                let mut buf = Vec::new();
                write_surface_csv(&mut buf, cells)
                    .map_err(|err| CliError::Io(format!("cannot render surface: {err}")))?;
                fs::write(path, buf).map_err(|err| {
                    CliError::Io(format!("cannot write {}: {err}", path.display()))
                })?;
            }
            let report =
                compare_to_closed_form(&run.params, &rule, run.grid).map_err(CliError::Model)?;
            let solution = solve_two_project(&run.params);
            let doc = docs::OracleDoc::new(&run, &solution, &oracle, &report);
            emit(cli.output.as_deref(), &docs::to_json(&doc))
        }
        Command::Simulate {
            sigma_a,
            sigma_b,
            trace,
        } => {
            check_format(cli.format, FormatArg::Json)?;
            let rule = BehaviorRule::for_mode(run.mode, &run.params);
            let solved = solve_two_project(&run.params).policy;
            let policy = Policy::new(
                sigma_a.unwrap_or_else(|| solved.sigma_a()),
                sigma_b.unwrap_or_else(|| solved.sigma_b()),
            )
            .map_err(CliError::Model)?;
            let chunks = simulate_chunks(&run.params, &policy, &rule, run.samples, run.seed);
            if let Some(path) = trace {
                let mut buf = Vec::new();
                write_chunk_trace_csv(&mut buf, &chunks)
                    .map_err(|err| CliError::Io(format!("cannot render trace: {err}")))?;
                fs::write(path, buf).map_err(|err| {
                    CliError::Io(format!("cannot write {}: {err}", path.display()))
                })?;
            }
            let stats = reduce_chunks(&chunks, run.samples, run.seed);
            let exact =
                persuasion_core::oracle::enumerate_pm_payoff(&run.params, &policy, &rule).payoff;
            let doc = docs::SimulateDoc::new(&run, &policy, exact, &stats);
            emit(cli.output.as_deref(), &docs::to_json(&doc))
        }
        Command::Sweep {
            e_min,
            e_max,
            e_steps,
        } => {
            check_format(cli.format, FormatArg::Csv)?;
            let grid = build_grid("e", *e_min, *e_max, *e_steps, run.params.c())?;
            let rows = sweep_e(&run.params, &grid).map_err(CliError::Model)?;
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows)
                .map_err(|err| CliError::Io(format!("cannot render sweep: {err}")))?;
            emit(
                cli.output.as_deref(),
                &String::from_utf8(buf).expect("CSV is UTF-8"),
            )
        }
        Command::Regions {
            p_min,
            p_max,
            p_steps,
            e_min,
            e_max,
            e_steps,
            oracle_check,
        } => {
            check_format(cli.format, FormatArg::Csv)?;
            let c = run.params.c();
            let p_grid = build_grid("p", *p_min, *p_max, *p_steps, c)?;
            let e_grid = build_grid("e", *e_min, *e_max, *e_steps, c)?;
            let cells = region_map(&run.params, &p_grid, &e_grid, *oracle_check, run.grid)
                .map_err(CliError::Model)?;
            if cells.is_empty() {
                return Err(CliError::Model(Error::EmptyFeasibleSet));
            }
            if *oracle_check {
                let mismatches = unexpected_mismatches(&cells);
                if !mismatches.is_empty() {
                    eprintln!(
                        "warning: {} cells disagree with the grid oracle outside boundary bands",
                        mismatches.len()
                    );
                }
            }
            let mut buf = Vec::new();
            write_region_csv(&mut buf, &cells)
                .map_err(|err| CliError::Io(format!("cannot render regions: {err}")))?;
            emit(
                cli.output.as_deref(),
                &String::from_utf8(buf).expect("CSV is UTF-8"),
            )
        }
        Command::Verify { .. } => unreachable!("handled before config resolution"),
    }
}

fn run_verify(only: Option<&str>, output: Option<&Path>) -> Result<(), CliError> {
    let reports: Vec<_> = verify::run_all()
        .into_iter()
        .filter(|r| only.map(|needle| r.name.contains(needle)).unwrap_or(true))
        .collect();
    if reports.is_empty() {
        return Err(CliError::Config(format!(
            "no check matches {:?}",
            only.unwrap_or("")
        )));
    }
    let mut text = String::new();
    for report in &reports {
        text.push_str(&report.line());
        text.push('\n');
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    text.push_str(&format!("passed {passed}/{} checks\n", reports.len()));
    emit(output, &text)?;
    if passed == reports.len() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed {
            passed,
            total: reports.len(),
        })
    }
}
