use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smi_harness::{
    emit_correlations_csv, emit_csv, emit_plots, preset_experiment, run_eta_sweep,
    run_experiment, ExperimentConfig, HarnessError,
};

#[derive(Parser)]
#[command(
    name = "smi-harness",
    about = "Targeted-selection objectives over synthetic clustered data: \
             sample subsets, verify relevance/coverage bounds, and report \
             rank correlations as CSV and SVG"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the scenario's dataset and write dataset.json
    Generate(CommonArgs),
    /// Run the full experiment: samples.csv, correlations.csv, plots
    Run(CommonArgs),
    /// Sweep eta values and write correlations.csv
    Sweep(CommonArgs),
    /// Emit only the SVG scatter/bound plots
    Plot(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config file (JSON); mutually exclusive with --preset
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset scenario
    #[arg(long, value_parser = ["one-target", "two-target"])]
    preset: Option<String>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the scenario sample count
    #[arg(long)]
    samples: Option<usize>,
}

const DEFAULT_SAMPLES: usize = 1000;

fn resolve_config(args: &CommonArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            ExperimentConfig::from_json_str(&text)?
        }
        (None, Some(preset)) => preset_experiment(
            preset,
            args.seed.unwrap_or(0),
            args.samples.unwrap_or(DEFAULT_SAMPLES),
            args.out.clone().unwrap_or_else(|| PathBuf::from("out")),
        )
        .ok_or_else(|| HarnessError::Config(format!("unknown preset `{preset}`")))?,
        (None, None) => {
            return Err(HarnessError::Config(
                "one of --config or --preset is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if let Some(seed) = args.seed {
        config.scenario.seed = seed;
    }
    if let Some(samples) = args.samples {
        config.scenario.samples = samples;
    }
    if let Some(out) = &args.out {
        config.outputs = out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn execute(command: &Command) -> Result<(), HarnessError> {
    match command {
        Command::Generate(args) => {
            let config = resolve_config(args)?;
            let dataset = smi_core::generate_dataset(&config.scenario)?;
            std::fs::create_dir_all(&config.outputs).map_err(|source| HarnessError::Io {
                path: config.outputs.clone(),
                source,
            })?;
            let path = config.outputs.join("dataset.json");
            std::fs::write(&path, dataset.to_json_string() + "\n").map_err(|source| {
                HarnessError::Io {
                    path: path.clone(),
                    source,
                }
            })?;
            println!("wrote {}", path.display());
        }
        Command::Run(args) => {
            let config = resolve_config(args)?;
            let output = run_experiment(&config)?;
            let paths = emit_csv(&output.runs, &output.correlations, &config.outputs)?;
            for path in &paths {
                println!("wrote {}", path.display());
            }
            if config.emit_plots {
                for path in emit_plots(&output, &config.outputs)? {
                    println!("wrote {}", path.display());
                }
            }
            for row in &output.correlations.rows {
                println!(
                    "{} {} eta={} {} spearman={:.5}",
                    row.dataset, row.function, row.eta, row.metric, row.spearman
                );
            }
        }
        Command::Sweep(args) => {
            let config = resolve_config(args)?;
            let table = run_eta_sweep(&config)?;
            let path = emit_correlations_csv(&table, &config.outputs)?;
            println!("wrote {}", path.display());
            for row in &table.rows {
                println!(
                    "{} {} eta={} {} spearman={:.5}",
                    row.dataset, row.function, row.eta, row.metric, row.spearman
                );
            }
        }
        Command::Plot(args) => {
            let config = resolve_config(args)?;
            let output = run_experiment(&config)?;
            for path in emit_plots(&output, &config.outputs)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", serde_json::json!({ "error": err.to_string() }));
            ExitCode::FAILURE
        }
    }
}
