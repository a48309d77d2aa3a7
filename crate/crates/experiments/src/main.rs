use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use linfreg_experiments::coeff_table::{export_tables, TABLE_BANDWIDTH};
use linfreg_experiments::{run, Experiment, ExperimentConfig, RunError};

#[derive(Parser)]
#[command(name = "linfreg", version, about = "Figure data, rate studies and bound audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steep transition profiles and their growing end states.
    WaveAdversarial(RunArgs),
    /// A perturbed pulse with and without the filter preconditioner.
    WaveRegularized(RunArgs),
    /// Deconvolution of the test signals at fixed error targets.
    PerconvRecon(RunArgs),
    /// Fitted convergence rates of the weighted filter.
    RateStudy(RunArgs),
    /// Randomized checks of every operator bound (manifest only).
    BoundsAudit(RunArgs),
    /// Write the test-signal coefficient tables.
    ExportSignals {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = TABLE_BANDWIDTH)]
        bandwidth: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Flat TOML file; missing keys take their defaults.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(experiment: Experiment, args: RunArgs) -> Result<bool, RunError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| RunError::Config(format!("{}: {e}", args.config.display())))?;
    let mut config = ExperimentConfig::from_toml(experiment, &text)?;
    if let Some(seed) = args.seed {
        config.set_seed(seed);
    }
    if let Some(out) = args.out {
        config.set_out_dir(out.to_string_lossy());
    }
    let dir = PathBuf::from(config.out_dir());
    let manifest = run(&config, &dir)?;
    for c in &manifest.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status} {} ({} cases): {}", c.name, c.cases, c.detail);
    }
    println!("manifest: {}", dir.join(linfreg_experiments::output::MANIFEST_NAME).display());
    Ok(manifest.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment = match cli.command {
        Command::WaveAdversarial(a) => (Experiment::WaveAdversarial, a),
        Command::WaveRegularized(a) => (Experiment::WaveRegularized, a),
        Command::PerconvRecon(a) => (Experiment::PerconvRecon, a),
        Command::RateStudy(a) => (Experiment::RateStudy, a),
        Command::BoundsAudit(a) => (Experiment::BoundsAudit, a),
        Command::ExportSignals { out, bandwidth } => {
            return match export_tables(&out, bandwidth) {
                Ok(paths) => {
                    paths.iter().for_each(|p| println!("{}", p.display()));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match execute(experiment.0, experiment.1) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
