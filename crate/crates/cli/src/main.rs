use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use gramdist::{exact_distance, full_bound_report, hadamard_chain, HadamardVariant, ToleranceConfig};
use gramdist_cli::{
    emit_report, generate_system, load_instance, replay_trial, run_campaign, save_instance, CampaignConfig, CheckId,
    Conditioning, DistanceReport, FieldChoice, Format, GeneratorConfig, HadamardReport, HarnessError, Instance,
    SizeRange,
};

/// Exact distances to finite-dimensional subspaces, Bessel-type bounds and
/// randomized verification campaigns.
#[derive(Debug, Parser)]
#[command(name = "gramdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distance and every applicable bound for an instance file.
    Distance {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Refined Hadamard chains of the instance's vector system.
    Hadamard {
        file: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Write generated instances as JSON files.
    Gen {
        #[arg(long)]
        out_dir: PathBuf,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run a seeded verification campaign.
    Verify {
        /// Comma-separated subset of checks (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        checks: Vec<CheckId>,
        /// Worker threads (default: all cores; 1 runs serially).
        #[arg(long)]
        threads: Option<usize>,
        /// Re-run a single trial instead of the whole campaign.
        #[arg(long)]
        replay_trial: Option<u64>,
        /// Multiply every bound by this factor before comparing.
        #[arg(long, default_value_t = 1.0)]
        mutate: f64,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Relative tolerance for inequality comparisons.
    #[arg(long, default_value_t = ToleranceConfig::default().compare_rel_tol)]
    tol_compare: f64,
    /// Relative pivot threshold below which a system counts as dependent.
    #[arg(long, default_value_t = ToleranceConfig::default().rank_rel_tol)]
    tol_rank: f64,
    /// Relative tolerance for orthogonality and orthonormality tests.
    #[arg(long, default_value_t = ToleranceConfig::default().orth_rel_tol)]
    tol_orth: f64,
}

impl TolArgs {
    fn config(&self) -> Result<ToleranceConfig, HarnessError> {
        Ok(ToleranceConfig::new(self.tol_rank, self.tol_orth, self.tol_compare)?)
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Ambient dimension, `lo..hi` or a single value.
    #[arg(long, default_value = "2..8")]
    dim: SizeRange,
    /// Number of vectors, `lo..hi` or a single value.
    #[arg(long, default_value = "1..7")]
    n: SizeRange,
    #[arg(long, value_enum, default_value_t = FieldChoice::Mixed)]
    field: FieldChoice,
    /// Singular-value ratio of the coordinate matrix, `lo..hi` or a single value.
    #[arg(long, default_value = "1..1e3")]
    conditioning: Conditioning,
    /// Generate orthonormal systems.
    #[arg(long)]
    orthonormal: bool,
    /// Attach interval data satisfying the interval condition.
    #[arg(long)]
    intervals: bool,
    /// Allow `n = dim` (the span may be the whole space).
    #[arg(long)]
    full_span: bool,
}

impl GenArgs {
    fn config(&self, tolerance: ToleranceConfig) -> GeneratorConfig {
        GeneratorConfig {
            seed: self.seed,
            field: self.field,
            dim: self.dim,
            n: self.n,
            proper_subspace: !self.full_span,
            conditioning: self.conditioning,
            orthonormal: self.orthonormal,
            intervals: self.intervals,
            trials: self.trials,
            tolerance,
        }
    }
}

fn load(file: &Path, tol: &TolArgs) -> anyhow::Result<Instance> {
    Ok(load_instance(file, tol.config()?)?)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Distance { file, output, tol } => {
            let inst = load(&file, &tol)?;
            let t = *inst.system.tolerance();
            let report = DistanceReport {
                distance: exact_distance(&inst.system, &inst.x, &t)?,
                bounds: full_bound_report(&inst.system, &inst.x, inst.intervals.as_ref(), &t)?,
            };
            print!("{}", emit_report(&report, output.format));
        }
        Command::Hadamard { file, output, tol } => {
            let inst = load(&file, &tol)?;
            let chains = HadamardVariant::ALL
                .into_iter()
                .map(|v| hadamard_chain(&inst.system, v))
                .collect::<gramdist::Result<Vec<_>>>()?;
            print!("{}", emit_report(&HadamardReport(chains), output.format));
        }
        Command::Gen { out_dir, gen, tol } => {
            let config = gen.config(tol.config()?);
            config.validate()?;
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for trial in 0..config.trials {
                let g = generate_system(&config, trial)?;
                let inst = Instance {
                    system: g.system,
                    x: g.x,
                    intervals: g.intervals,
                };
                save_instance(&inst, &out_dir.join(format!("instance-{trial:06}.json")))?;
            }
        }
        Command::Verify {
            checks,
            threads,
            replay_trial: replay,
            mutate,
            gen,
            output,
            tol,
        } => {
            let mut config = CampaignConfig::new(gen.config(tol.config()?));
            if !checks.is_empty() {
                config.checks = checks;
            }
            config.threads = threads;
            config.mutation = mutate;
            let result = match replay {
                Some(trial) => replay_trial(&config, trial)?,
                None => run_campaign(&config)?,
            };
            print!("{}", emit_report(&result, output.format));
            if !result.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<HarnessError>() {
        return e.exit_code() as u8;
    }
    match err.downcast_ref::<gramdist::Error>() {
        Some(e) if e.is_precondition() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
