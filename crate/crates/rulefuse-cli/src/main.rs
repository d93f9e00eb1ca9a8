use std::path::PathBuf;
use std::process::exit;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use rulefuse::ingest::{DatasetFormat, ImputePolicy};
use rulefuse::GaConfig;
use rulefuse_cli::commands::{
    cmd_bootstrap, cmd_compare, cmd_evaluate, cmd_integrate, BootstrapArgs, CfgOverrides,
    CompareArgs, EvaluateArgs, IntegrateArgs,
};
use rulefuse_cli::synth::{synth_dataset, SynthArgs};
use rulefuse_cli::CliError;

/// Merges fuzzy rule sets and their membership functions into one optimized
/// knowledge base.
#[derive(Parser)]
#[command(name = "rulefuse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a dataset into virtual sources and induce one knowledge base
    /// per source.
    Bootstrap(BootstrapCli),
    /// Evolve an integrated knowledge base from bootstrapped sources.
    Integrate(IntegrateCli),
    /// Score a stored knowledge base against a dataset.
    Evaluate(EvaluateCli),
    /// Run the evolution strategy and the baseline GA over shared seeds.
    Compare(CompareCli),
    /// Generate a synthetic Gaussian-cluster dataset.
    Synth(SynthCli),
}

#[derive(Args)]
struct BootstrapCli {
    /// Dataset file.
    #[arg(long)]
    data: PathBuf,
    /// Dataset format: hepatitis, iris, tictactoe, or generic.
    #[arg(long)]
    format: String,
    /// Number of virtual sources P.
    #[arg(long, default_value_t = 3)]
    sources: usize,
    /// Linguistic values per numeric feature.
    #[arg(long, default_value_t = 3)]
    linguistic: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Bounds padding as a fraction of the observed range.
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    /// Missing-value policy: keep or mean.
    #[arg(long, default_value = "keep")]
    impute: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IntegrateCli {
    /// Manifest written by bootstrap.
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// JSON config file with engine parameters.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the manifest's data path.
    #[arg(long)]
    data: Option<PathBuf>,
    #[command(flatten)]
    overrides: CfgOverrides,
}

#[derive(Args)]
struct EvaluateCli {
    /// Knowledge base JSON file.
    #[arg(long)]
    kb: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    format: String,
    #[arg(long, default_value = "keep")]
    impute: String,
}

#[derive(Args)]
struct CompareCli {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated seed list.
    #[arg(long, default_value = "1,2,3,4,5")]
    seeds: String,
    /// Fitness target for generations-to-target; defaults to the GA's
    /// median final fitness.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = GaConfig::default().crossover_rate)]
    crossover_rate: f64,
    #[arg(long, default_value_t = GaConfig::default().mutation_rate)]
    mutation_rate: f64,
    #[command(flatten)]
    overrides: CfgOverrides,
}

#[derive(Args)]
struct SynthCli {
    #[arg(long)]
    rows: usize,
    #[arg(long, default_value_t = 2)]
    features: usize,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Distance between adjacent class centers, in noise standard
    /// deviations.
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Base name of the generated files.
    #[arg(long, default_value = "synth")]
    name: String,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        exit(err.exit_code());
    }
}

fn parse_format(s: &str) -> Result<DatasetFormat, CliError> {
    DatasetFormat::from_str(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_impute(s: &str) -> Result<ImputePolicy, CliError> {
    ImputePolicy::from_str(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_seeds(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad seed `{part}`")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bootstrap(args) => {
            let manifest = cmd_bootstrap(&BootstrapArgs {
                data: args.data,
                format: parse_format(&args.format)?,
                sources: args.sources,
                linguistic: args.linguistic,
                seed: args.seed,
                margin: args.margin,
                impute: parse_impute(&args.impute)?,
                out: args.out.clone(),
            })?;
            println!(
                "wrote {} sources and manifest.json to {}",
                manifest.sources.len(),
                args.out.display()
            );
        }
        Command::Integrate(args) => {
            let outcome = cmd_integrate(&IntegrateArgs {
                manifest: args.manifest,
                out: args.out.clone(),
                config: args.config,
                data: args.data,
                overrides: args.overrides,
            })?;
            let last = outcome.history.last().expect("at least one generation");
            println!(
                "best fitness {} (accuracy {}, {} rules) after {} generations; outputs in {}",
                last.best_fitness,
                last.best_accuracy,
                last.best_rule_count,
                outcome.history.len(),
                args.out.display()
            );
        }
        Command::Evaluate(args) => {
            let report = cmd_evaluate(&EvaluateArgs {
                kb: args.kb,
                data: args.data,
                format: parse_format(&args.format)?,
                impute: parse_impute(&args.impute)?,
            })?;
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
        }
        Command::Compare(args) => {
            let rows = cmd_compare(&CompareArgs {
                manifest: args.manifest,
                out: args.out.clone(),
                seeds: parse_seeds(&args.seeds)?,
                target: args.target,
                config: args.config,
                overrides: args.overrides,
                ga: GaConfig {
                    crossover_rate: args.crossover_rate,
                    mutation_rate: args.mutation_rate,
                },
            })?;
            println!(
                "wrote {} comparison rows to {}",
                rows.len(),
                args.out.display()
            );
        }
        Command::Synth(args) => {
            let outcome = synth_dataset(&SynthArgs {
                rows: args.rows,
                features: args.features,
                classes: args.classes,
                seed: args.seed,
                separation: args.separation,
                out: args.out,
                name: args.name,
            })?;
            println!("wrote {}", outcome.csv_path.display());
        }
    }
    Ok(())
}
