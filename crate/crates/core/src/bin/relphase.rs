//! Command-line front end: states, phase distributions, Fisher information,
//! N-sweeps and the cross-family comparison.
//!
//! Exit status: 0 success, 1 invalid arguments, 2 numerical
//! non-convergence, 3 partial sweep failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use relphase::fisher::{FisherReport, DEFAULT_TOL, SWEEP_TOL};
use relphase::format::{csv_table, format_g12};
use relphase::states::{Family, Regime, SqueezedCoherent, StateSpec, TwoModeFockState};
use relphase::sweep::{compare_all, run_sweep, SweepOptions, SweepTable};
use relphase::{fisher_quantum_analytic, Error, PhaseDistribution};

#[derive(Debug, Parser)]
#[command(
    name = "relphase",
    version,
    about = "Relative phase distribution and Fisher information of two-mode states"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Quadrature tolerance [default: 1e-9 for `fisher`, 1e-7 for sweeps].
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output file; a directory for `compare-all`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Fock amplitudes of a state.
    State(StateArgs),
    /// Sample the relative phase distribution on a uniform grid.
    Dist {
        #[command(flatten)]
        state: StateArgs,
        /// Grid points on [-π, π) [default: max(4096, 16N)].
        #[arg(short = 'm', long = "points")]
        m_points: Option<usize>,
        /// Add the dp column.
        #[arg(long)]
        derivative: bool,
    },
    /// Compare F_Q with the Fisher information of the phase distribution.
    Fisher(StateArgs),
    /// Run `fisher` over a range of photon numbers.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Stride [default: 2 for parity-restricted families, else 1].
        #[arg(long)]
        step: Option<usize>,
        /// Add the family's reference curve as a column.
        #[arg(long)]
        reference: bool,
    },
    /// Sweep all seven families and write the summary and figure data.
    CompareAll,
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    /// fock, noon, phase, twin-fock, correlated-fock, sq-coh
    /// (or sq-coh-optimal, sq-coh-sqrt-shot).
    #[arg(long)]
    family: String,
    /// Squeezed-coherent regime.
    #[arg(long)]
    regime: Option<String>,
    /// Phase of a phase state.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi0: f64,
    /// Squeezing phase.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta_s: f64,
    /// Coherent-state phase.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta_c: f64,
    /// Accept theta_s - 2 theta_c != 0.
    #[arg(long)]
    allow_phase_mismatch: bool,
}

#[derive(Debug, Clone, Args)]
struct StateArgs {
    #[command(flatten)]
    family: Option<FamilyArgs>,
    /// Photon number N, or mean photon number for squeezed states.
    #[arg(long, visible_alias = "n-bar")]
    n: Option<usize>,
    /// Read the state from a JSON file instead.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    state: Option<PathBuf>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family, Error> {
        let regime = self.regime.as_deref().map(Regime::from_str).transpose()?;
        let name = self.family.trim().to_ascii_lowercase();
        if matches!(name.as_str(), "sq-coh" | "squeezed-coherent") {
            return Ok(match regime.unwrap_or(Regime::Optimal) {
                Regime::Optimal => Family::SqCohOptimal,
                Regime::SqrtShot => Family::SqCohSqrtShot,
            });
        }
        let family = Family::from_str(&name)?;
        let implied = match family {
            Family::SqCohOptimal => Some(Regime::Optimal),
            Family::SqCohSqrtShot => Some(Regime::SqrtShot),
            _ => None,
        };
        match (regime, implied) {
            (Some(r), None) => Err(Error::InvalidArgument(format!(
                "--regime {r} only applies to squeezed-coherent states"
            ))),
            (Some(r), Some(i)) if r != i => Err(Error::InvalidArgument(format!(
                "--regime {r} contradicts --family {family}"
            ))),
            _ => Ok(family),
        }
    }

    fn spec(&self, n: usize) -> Result<StateSpec, Error> {
        Ok(match self.family()?.spec(n) {
            StateSpec::PhaseState { n, .. } => StateSpec::PhaseState { n, phi0: self.phi0 },
            StateSpec::SqueezedCoherent(sc) => StateSpec::SqueezedCoherent(SqueezedCoherent {
                theta_s: self.theta_s,
                theta_c: self.theta_c,
                allow_phase_mismatch: self.allow_phase_mismatch,
                ..sc
            }),
            other => other,
        })
    }
}

/// A state to work on plus its spec when it came from the command line.
struct Target {
    state: TwoModeFockState,
    spec: Option<StateSpec>,
}

impl StateArgs {
    fn target(&self) -> Result<Target, Error> {
        if let Some(path) = &self.state {
            let text = std::fs::read_to_string(path)?;
            return Ok(Target {
                state: TwoModeFockState::from_json(&text)?,
                spec: None,
            });
        }
        let family = self
            .family
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("need --family or --state".into()))?;
        let n = self
            .n
            .ok_or_else(|| Error::InvalidArgument("need --n".into()))?;
        let spec = family.spec(n)?;
        Ok(Target {
            state: spec.build()?,
            spec: Some(spec),
        })
    }
}

enum Failure {
    Lib(Error),
    PartialSweep(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn json_text(value: &impl serde::Serialize) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value).map_err(Error::from)? + "\n")
}

fn check_tol(tol: f64) -> Result<f64, Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")).into())
    }
}

fn cmd_state(cli: &Cli, args: &StateArgs) -> Result<(), Failure> {
    let state = args.target()?.state;
    let text = match cli.format {
        Format::Json => state.to_json()? + "\n",
        Format::Csv => csv_table(
            "k,prob",
            state
                .probabilities()
                .iter()
                .enumerate()
                .map(|(k, p)| format!("{k},{}", format_g12(*p))),
        ),
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_dist(
    cli: &Cli,
    args: &StateArgs,
    m: Option<usize>,
    derivative: bool,
) -> Result<(), Failure> {
    let dist = PhaseDistribution::new(&args.target()?.state);
    let samples = dist.sample_grid(m.unwrap_or_else(|| dist.default_grid_size()))?;
    let text = match cli.format {
        Format::Json => {
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    if derivative {
                        json!({"phi": s.phi, "p": s.p, "dp": s.dp})
                    } else {
                        json!({"phi": s.phi, "p": s.p})
                    }
                })
                .collect();
            json_text(&rows)?
        }
        Format::Csv => csv_table(
            if derivative { "phi,p,dp" } else { "phi,p" },
            samples.iter().map(|s| {
                let row = format!("{},{}", format_g12(s.phi), format_g12(s.p));
                if derivative {
                    format!("{row},{}", format_g12(s.dp))
                } else {
                    row
                }
            }),
        ),
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_fisher(cli: &Cli, args: &StateArgs) -> Result<(), Failure> {
    let tol = check_tol(cli.tol.unwrap_or(DEFAULT_TOL))?;
    let target = args.target()?;
    let analytic = target.spec.as_ref().and_then(fisher_quantum_analytic);
    let report = FisherReport::compute(&target.state, analytic, tol)?;
    let text = match cli.format {
        Format::Json => json_text(&report)?,
        Format::Csv => csv_table(FisherReport::CSV_HEADER, [report.csv_row()]),
    };
    emit(cli.out.as_deref(), &text)
}

fn sweep_json(table: &SweepTable, with_reference: bool) -> Result<Value, Failure> {
    let mut value = serde_json::to_value(table).map_err(Error::from)?;
    if with_reference {
        if let Some(rows) = value.get_mut("rows").and_then(Value::as_array_mut) {
            for (row, report) in rows.iter_mut().zip(&table.rows) {
                row["reference"] = json!(table.family.reference_curve(report.n_total as f64));
            }
        }
    }
    Ok(value)
}

fn report_failures<'a>(
    failures: impl Iterator<Item = (Family, &'a relphase::sweep::SweepFailure)>,
) -> usize {
    let mut count = 0;
    for (family, f) in failures {
        eprintln!("{family} N={}: {}", f.n, f.error);
        count += 1;
    }
    count
}

fn cmd_sweep(
    cli: &Cli,
    family_args: &FamilyArgs,
    n_min: Option<usize>,
    n_max: Option<usize>,
    step: Option<usize>,
    reference: bool,
) -> Result<(), Failure> {
    let family = family_args.family()?;
    let tol = check_tol(cli.tol.unwrap_or(SWEEP_TOL))?;
    let mut opts = SweepOptions::for_family(family, tol);
    opts.n_min = n_min.unwrap_or(opts.n_min);
    opts.n_max = n_max.unwrap_or(opts.n_max);
    opts.step = step;
    opts.jobs = cli.jobs;
    // Validate the template once so a bad flag is an argument error, not N row failures.
    family_args.spec(opts.n_min)?;
    let table = run_sweep(family, &opts, |n| {
        family_args.spec(n).expect("family validated above")
    })?;
    let text = match cli.format {
        Format::Json => json_text(&sweep_json(&table, reference)?)?,
        Format::Csv => {
            eprintln!(
                "mean_rel_diff_percent={}",
                format_g12(table.mean_rel_diff_percent)
            );
            if let Some(fit) = table.fit {
                eprintln!(
                    "power_law_fit exponent={} prefactor={}",
                    format_g12(fit.exponent),
                    format_g12(fit.prefactor)
                );
            }
            table.csv(reference)
        }
    };
    emit(cli.out.as_deref(), &text)?;
    match report_failures(table.failures.iter().map(|f| (family, f))) {
        0 => Ok(()),
        n => Err(Failure::PartialSweep(n)),
    }
}

fn cmd_compare_all(cli: &Cli) -> Result<(), Failure> {
    let tol = check_tol(cli.tol.unwrap_or(SWEEP_TOL))?;
    let comparison = compare_all(tol, cli.jobs)?;
    let json = cli.format == Format::Json;
    let text = if json {
        json_text(&comparison.summary)?
    } else {
        comparison.summary_csv()
    };
    if let Some(dir) = &cli.out {
        comparison.write_bundles(dir, json)?;
        let name = if json { "summary.json" } else { "summary.csv" };
        std::fs::write(dir.join(name), &text)?;
    }
    emit(None, &text)?;
    match report_failures(comparison.failures()) {
        0 => Ok(()),
        n => Err(Failure::PartialSweep(n)),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::NonFinite { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::State(args) => cmd_state(&cli, args),
        Command::Dist {
            state,
            m_points,
            derivative,
        } => cmd_dist(&cli, state, *m_points, *derivative),
        Command::Fisher(args) => cmd_fisher(&cli, args),
        Command::Sweep {
            family,
            n_min,
            n_max,
            step,
            reference,
        } => cmd_sweep(&cli, family, *n_min, *n_max, *step, *reference),
        Command::CompareAll => cmd_compare_all(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::PartialSweep(n)) => {
            eprintln!("error: {n} sweep point(s) failed");
            ExitCode::from(3)
        }
    }
}
