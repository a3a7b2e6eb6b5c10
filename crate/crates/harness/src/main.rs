use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sse_harness::config::{AlphaValue, ConfigBuilder, ConfigLayer, Preset};
use sse_harness::sweep::{
    bounds_table, concentration_table, run_bounds_sweep, run_concentration_check, run_simulation_sweep,
    simulation_table, write_table,
};
use sse_harness::SweepConfig;

/// Simulation and capacity bounds for the shotgun sequencing channel with erasures.
#[derive(Debug, Parser)]
#[command(name = "sse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Achievable rate and converse over a (c, delta) grid.
    Bounds(CommonArgs),
    /// Monte Carlo coverage and island statistics against analytic targets.
    Simulate(CommonArgs),
    /// Island length-bin concentration and reads-per-island tail.
    Concentration(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter set (fig2).
    #[arg(long)]
    preset: Option<Preset>,
    /// Input lengths.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Explicit coverage depths (alternative to --c-min/--c-max/--c-steps).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["c_min", "c_max", "c_steps"])]
    c: Option<Vec<f64>>,
    #[arg(long)]
    c_min: Option<f64>,
    #[arg(long)]
    c_max: Option<f64>,
    /// Number of evenly spaced depths from c-min to c-max inclusive.
    #[arg(long)]
    c_steps: Option<usize>,
    /// Erasure probabilities.
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<f64>>,
    /// Normalized read length L / log2 n.
    #[arg(long)]
    lbar: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Bins per log2 n of island length.
    #[arg(long)]
    lprime: Option<usize>,
    /// Overflow bin index.
    #[arg(long)]
    jmax: Option<usize>,
    /// "auto" or a positive number.
    #[arg(long)]
    alpha: Option<String>,
    /// maximal-run or strict-overlap.
    #[arg(long)]
    merge_mode: Option<String>,
    /// Output CSV path (standard output if absent).
    #[arg(long)]
    out: Option<String>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
}

impl CommonArgs {
    fn resolve(self) -> anyhow::Result<SweepConfig> {
        let mut builder = ConfigBuilder::new();
        if let Some(path) = &self.config {
            builder = builder.apply(ConfigLayer::from_file(path)?)?;
        }
        if let Some(preset) = self.preset {
            builder = builder.apply(preset.layer())?;
        }
        let flags = ConfigLayer {
            n: self.n,
            c: self.c,
            c_min: self.c_min,
            c_max: self.c_max,
            c_steps: self.c_steps,
            delta: self.delta,
            lbar: self.lbar,
            trials: self.trials,
            seed: self.seed,
            lprime: self.lprime,
            jmax: self.jmax,
            alpha: self.alpha.map(AlphaValue::Text),
            merge_mode: self.merge_mode,
            out: self.out,
            threads: self.threads,
        };
        Ok(builder.apply(flags)?.build()?)
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Bounds(args) => {
            let config = args.resolve()?;
            let table = bounds_table(&run_bounds_sweep(&config)?);
            write_table(&table, config.output_path.as_deref())?;
        }
        Command::Simulate(args) => {
            let config = args.resolve()?;
            let table = simulation_table(&run_simulation_sweep(&config)?, config.merge_mode);
            write_table(&table, config.output_path.as_deref())?;
        }
        Command::Concentration(args) => {
            let config = args.resolve()?;
            let table = concentration_table(&run_concentration_check(&config)?);
            write_table(&table, config.output_path.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
