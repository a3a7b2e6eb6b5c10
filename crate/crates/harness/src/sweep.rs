//! Bounds, simulation and concentration sweeps.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use sse_core::bounds::BoundPoint;
use sse_core::channel::{sample_reads_with, trial_rng, BitString, ChannelParams};
use sse_core::islands::{merge_true_islands_with, IslandSet};
use sse_core::stats::{
    partition_islands, pooled_q, AggregateReport, Estimate, PartitionReport, StatsAccumulator, TrialStats,
};
use sse_core::MergeMode;

use crate::config::{merge_mode_name, SweepConfig};
use crate::error::HarnessError;
use crate::table::{int, real, real_or_empty, real_or_na, Table};
use crate::SCHEMA_VERSION;

/// One channel realisation: input, reads, islands and their statistics.
#[derive(Debug, Clone)]
pub struct Trial {
    pub stats: TrialStats,
    pub islands: IslandSet,
}

/// Runs trial `trial` of an experiment. The outcome depends only on the
/// arguments, never on which thread runs it.
pub fn simulate_trial(params: &ChannelParams, mode: MergeMode, master_seed: u64, trial: u64) -> Trial {
    let mut rng = trial_rng(master_seed, trial);
    let x = BitString::random(params.n(), &mut rng);
    let reads = sample_reads_with(&x, params, &mut rng).expect("input length matches params");
    let islands = merge_true_islands_with(&reads, mode);
    Trial {
        stats: TrialStats::measure(&reads, &islands),
        islands,
    }
}

fn pool(config: &SweepConfig) -> Result<rayon::ThreadPool, HarnessError> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()?)
}

/// Runs `config.trials` trials in parallel and maps each through `f`.
/// Results come back in trial order.
fn run_trials<T, F>(pool: &rayon::ThreadPool, config: &SweepConfig, params: &ChannelParams, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Trial) -> T + Sync,
{
    pool.install(|| {
        (0..config.trials as u64)
            .into_par_iter()
            .map(|t| f(simulate_trial(params, config.merge_mode, config.master_seed, t)))
            .collect()
    })
}

// ---------------------------------------------------------------- bounds

/// Analytic bounds for every `(δ, c)` on the grid (grouped by `δ`).
pub fn run_bounds_sweep(config: &SweepConfig) -> Result<Vec<BoundPoint>, HarnessError> {
    let mut points = Vec::with_capacity(config.delta_values.len() * config.c_values.len());
    for &delta in &config.delta_values {
        for &c in &config.c_values {
            points.push(BoundPoint::new(c, delta, config.lbar)?);
        }
    }
    Ok(points)
}

pub const BOUNDS_COLUMNS: [&str; 11] = [
    "schema_version",
    "c",
    "delta",
    "lbar",
    "delta_e",
    "achievable",
    "converse_raw",
    "converse",
    "short_read",
    "noise_free_cap",
    "gap",
];

pub fn bounds_table(points: &[BoundPoint]) -> Table {
    let mut table = Table::new(BOUNDS_COLUMNS.to_vec());
    for p in points {
        table.push(vec![
            int(SCHEMA_VERSION),
            real(p.c),
            real(p.delta),
            real(p.lbar),
            real(p.delta_e),
            real_or_na(p.achievable),
            real(p.converse.raw),
            real(p.converse.value),
            int(u8::from(p.converse.short_read)),
            real_or_na(p.noise_free_cap),
            real_or_na(p.gap),
        ]);
    }
    table
}

// ------------------------------------------------------------ simulation

/// Monte Carlo estimates for every `(n, c, δ)` on the grid.
pub fn run_simulation_sweep(config: &SweepConfig) -> Result<Vec<AggregateReport>, HarnessError> {
    config.validate()?;
    let pool = pool(config)?;
    let mut reports = Vec::new();
    for &n in &config.n_values {
        for &c in &config.c_values {
            for &delta in &config.delta_values {
                let params = config.params(n, c, delta)?;
                let alpha = config.alpha.resolve(c);
                let stats = run_trials(&pool, config, &params, |t| t.stats);
                let mut acc = StatsAccumulator::new(alpha * params.log2_n());
                stats.iter().for_each(|s| acc.push(s));
                reports.push(AggregateReport::from_accumulator(&acc, &params, alpha));
            }
        }
    }
    Ok(reports)
}

pub const SIMULATION_COLUMNS: [&str; 31] = [
    "schema_version",
    "n",
    "c_nominal",
    "c_effective",
    "delta",
    "lbar",
    "L",
    "K",
    "trials",
    "merge_mode",
    "phi_mean",
    "phi_se",
    "phi_target",
    "phi_v_mean",
    "phi_v_se",
    "phi_v_target",
    "delta_e_mean",
    "delta_e_se",
    "delta_e_target",
    "reorder_mean",
    "reorder_se",
    "reorder_target",
    "sum_len_mean",
    "sum_len_se",
    "sum_len_target",
    "d_mean",
    "d_se",
    "alpha",
    "d_threshold",
    "d_tail_freq",
    "d_tail_se",
];

fn estimate_cells(e: &Estimate) -> [String; 2] {
    [real(e.mean), real_or_empty(e.se)]
}

pub fn simulation_table(reports: &[AggregateReport], mode: MergeMode) -> Table {
    let mut table = Table::new(SIMULATION_COLUMNS.to_vec());
    for r in reports {
        let p = &r.params;
        let mut row = vec![
            int(SCHEMA_VERSION),
            int(p.n()),
            real(p.c_nominal()),
            real(p.c_effective()),
            real(p.delta()),
            real(p.lbar()),
            int(p.read_len()),
            int(p.read_count()),
            int(r.trials),
            merge_mode_name(mode).to_string(),
        ];
        for (est, target) in [
            (&r.phi, r.phi_target),
            (&r.phi_v, r.phi_v_target),
            (&r.delta_e_hat, r.delta_e_target),
            (&r.reorder, r.reorder_target),
            (&r.sum_lengths, r.sum_lengths_target),
        ] {
            row.extend(estimate_cells(est));
            row.push(real(target));
        }
        row.extend(estimate_cells(&r.d_max));
        row.push(real(r.alpha));
        row.push(real(r.d_threshold));
        row.extend(estimate_cells(&r.d_tail));
        table.push(row);
    }
    table
}

// --------------------------------------------------------- concentration

/// Deviation statistics of one length bin across trials.
#[derive(Debug, Clone, PartialEq)]
pub struct BinResult {
    pub k: usize,
    /// Bin probability pooled over all trials.
    pub pooled_q: f64,
    /// Mean of `|Y'_k|` over non-degenerate trials.
    pub mean_count: f64,
    /// Mean of the per-trial expected count `n·q/Λ`.
    pub mean_expected: f64,
    /// Mean of the per-trial threshold `ε·n/Λ`.
    pub mean_threshold: f64,
    /// Trials in which the deviation event occurred.
    pub events: usize,
    pub event_freq: Estimate,
}

/// Concentration and reads-per-island tail results for one `(n, c, δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationResult {
    pub params: ChannelParams,
    pub trials: usize,
    /// Trials without any island.
    pub degenerate: usize,
    pub l_prime: usize,
    pub j_max: usize,
    pub bins: Vec<BinResult>,
    pub alpha: f64,
    pub d_threshold: f64,
    pub d_tail: Estimate,
}

fn indicator_estimate(hits: usize, count: usize) -> Estimate {
    let t = count as f64;
    let mean = if count == 0 { f64::NAN } else { hits as f64 / t };
    let se = (count > 1).then(|| (mean * (1.0 - mean) / (t - 1.0)).sqrt());
    Estimate { mean, se }
}

/// Per-bin deviation frequencies and the `D` tail frequency for every
/// `(n, c, δ)` on the grid.
///
/// Bin probabilities are pooled across all trials of a grid point and then
/// used as the reference mean for each trial's deviation event.
pub fn run_concentration_check(config: &SweepConfig) -> Result<Vec<ConcentrationResult>, HarnessError> {
    config.validate()?;
    let pool = pool(config)?;
    let mut results = Vec::new();
    for &n in &config.n_values {
        for &c in &config.c_values {
            for &delta in &config.delta_values {
                let params = config.params(n, c, delta)?;
                let alpha = config.alpha.resolve(c);
                let d_threshold = alpha * params.log2_n();
                let (l_prime, j_max) = (config.l_prime, config.j_max);
                let mut per_trial: Vec<(PartitionReport, usize)> = run_trials(&pool, config, &params, |t| {
                    (partition_islands(&t.islands, l_prime, j_max), t.stats.d_max)
                });
                let q_ref = pooled_q(per_trial.iter().map(|(r, _)| r));
                for (report, _) in per_trial.iter_mut() {
                    report.flag_events(&q_ref);
                }
                let live: Vec<&PartitionReport> =
                    per_trial.iter().map(|(r, _)| r).filter(|r| !r.degenerate).collect();
                let live_count = live.len();
                let bins = q_ref
                    .iter()
                    .map(|(&k, &q)| {
                        let events = live.iter().filter(|r| r.e_event_flags[&k]).count();
                        let mean_over = |f: &dyn Fn(&PartitionReport) -> f64| {
                            live.iter().map(|r| f(r)).sum::<f64>() / live_count as f64
                        };
                        BinResult {
                            k,
                            pooled_q: q,
                            mean_count: mean_over(&|r| r.bin_counts.get(&k).copied().unwrap_or(0) as f64),
                            mean_expected: mean_over(&|r| r.expected_count(q)),
                            mean_threshold: mean_over(&|r| r.deviation_threshold()),
                            events,
                            event_freq: indicator_estimate(events, live_count),
                        }
                    })
                    .collect();
                let tail_hits = per_trial.iter().filter(|(_, d)| *d as f64 > d_threshold).count();
                results.push(ConcentrationResult {
                    params,
                    trials: config.trials,
                    degenerate: config.trials - live_count,
                    l_prime,
                    j_max,
                    bins,
                    alpha,
                    d_threshold,
                    d_tail: indicator_estimate(tail_hits, config.trials),
                });
            }
        }
    }
    Ok(results)
}

pub const CONCENTRATION_COLUMNS: [&str; 23] = [
    "schema_version",
    "record",
    "n",
    "c_nominal",
    "c_effective",
    "delta",
    "lbar",
    "L",
    "trials",
    "degenerate_trials",
    "l_prime",
    "j_max",
    "k",
    "pooled_q",
    "mean_count",
    "expected_count",
    "threshold",
    "event_freq",
    "event_se",
    "alpha",
    "d_threshold",
    "d_tail_freq",
    "d_tail_se",
];

/// One `bin` row per length bin and one `d_tail` row per grid point.
pub fn concentration_table(results: &[ConcentrationResult]) -> Table {
    let mut table = Table::new(CONCENTRATION_COLUMNS.to_vec());
    for r in results {
        let p = &r.params;
        let lead = |record: &str| {
            vec![
                int(SCHEMA_VERSION),
                record.to_string(),
                int(p.n()),
                real(p.c_nominal()),
                real(p.c_effective()),
                real(p.delta()),
                real(p.lbar()),
                int(p.read_len()),
                int(r.trials),
                int(r.degenerate),
                int(r.l_prime),
                int(r.j_max),
            ]
        };
        for b in &r.bins {
            let mut row = lead("bin");
            row.extend([
                int(b.k),
                real(b.pooled_q),
                real(b.mean_count),
                real(b.mean_expected),
                real(b.mean_threshold),
                real(b.event_freq.mean),
                real_or_empty(b.event_freq.se),
            ]);
            row.extend(std::iter::repeat_n(String::new(), 4));
            table.push(row);
        }
        let mut row = lead("d_tail");
        row.extend(std::iter::repeat_n(String::new(), 7));
        row.extend([
            real(r.alpha),
            real(r.d_threshold),
            real(r.d_tail.mean),
            real_or_empty(r.d_tail.se),
        ]);
        table.push(row);
    }
    table
}

/// Writes `table` to `path`, or to standard output when `path` is `None`.
pub fn write_table(table: &Table, path: Option<&str>) -> Result<(), HarnessError> {
    let target = path.unwrap_or("<stdout>").to_string();
    let wrap = |source: io::Error| HarnessError::Write {
        path: target.clone(),
        source,
    };
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(wrap)?);
            table.write_csv(&mut w).map_err(wrap)?;
            w.flush().map_err(wrap)
        }
        None => table.write_csv(io::stdout().lock()).map_err(wrap),
    }
}
