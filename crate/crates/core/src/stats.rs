//! Coverage and island statistics for single trials and their aggregation.

use alloc::collections::BTreeMap;
use alloc::vec;

use crate::bounds;
use crate::channel::{ChannelParams, ReadSet};
use crate::islands::{Island, IslandSet};

/// Covered and visibly covered position counts of one read set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageCounts {
    pub n: usize,
    pub covered: usize,
    pub visible: usize,
}

impl CoverageCounts {
    pub fn of(reads: &ReadSet) -> Self {
        const COVERED: u8 = 1;
        const VISIBLE: u8 = 2;
        let n = reads.n();
        let mut mark = vec![0u8; n];
        for read in reads.reads() {
            for (j, sym) in read.symbols.iter().enumerate() {
                let p = (read.start + j) % n;
                mark[p] |= if sym.is_erased() { COVERED } else { COVERED | VISIBLE };
            }
        }
        let covered = mark.iter().filter(|&&m| m & COVERED != 0).count();
        let visible = mark.iter().filter(|&&m| m & VISIBLE != 0).count();
        CoverageCounts { n, covered, visible }
    }

    /// `Φ`
    pub fn phi(&self) -> f64 {
        self.covered as f64 / self.n as f64
    }

    /// `Φ_v`
    pub fn phi_v(&self) -> f64 {
        self.visible as f64 / self.n as f64
    }
}

/// Fraction of positions covered by at least one read.
pub fn coverage(reads: &ReadSet) -> f64 {
    CoverageCounts::of(reads).phi()
}

/// Fraction of positions carried unerased by at least one read.
pub fn visible_coverage(reads: &ReadSet) -> f64 {
    CoverageCounts::of(reads).phi_v()
}

/// Fraction of positions that are covered but erased in every covering read,
/// `Φ - Φ_v`. This is an unconditional estimate of `δ_e` (normalized by `n`,
/// not by the number of covered positions).
pub fn empirical_delta_e(reads: &ReadSet) -> f64 {
    let counts = CoverageCounts::of(reads);
    counts.phi() - counts.phi_v()
}

/// `D`: the largest number of reads merged into one island, 0 if none.
pub fn max_reads_per_island(islands: &IslandSet) -> usize {
    islands.islands().iter().map(|i| i.read_count).max().unwrap_or(0)
}

/// Default tail constant for the `D` check, twice the smallest admissible
/// value: `2·(-1/log2(1 - e^{-c}))`.
pub fn default_alpha(c: f64) -> f64 {
    2.0 * (-1.0 / libm::log2(-libm::expm1(-c)))
}

/// Measurements of one channel realisation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub n: usize,
    /// Covered positions.
    pub covered: usize,
    /// Visibly covered positions.
    pub visible: usize,
    pub phi: f64,
    pub phi_v: f64,
    /// `Φ - Φ_v`
    pub delta_e_hat: f64,
    /// `K'`
    pub k_prime: usize,
    /// `Σ N_i`
    pub sum_lengths: usize,
    /// Positions left erased inside islands.
    pub island_erasures: usize,
    /// `D`
    pub d_max: usize,
    pub length_histogram: BTreeMap<usize, usize>,
}

impl TrialStats {
    /// Measures a read set and the islands assembled from it.
    pub fn measure(reads: &ReadSet, islands: &IslandSet) -> Self {
        let counts = CoverageCounts::of(reads);
        let phi = counts.phi();
        let phi_v = counts.phi_v();
        let mut length_histogram = BTreeMap::new();
        for isl in islands.islands() {
            *length_histogram.entry(isl.len()).or_insert(0) += 1;
        }
        TrialStats {
            n: counts.n,
            covered: counts.covered,
            visible: counts.visible,
            phi,
            phi_v,
            delta_e_hat: phi - phi_v,
            k_prime: islands.len(),
            sum_lengths: islands.total_length(),
            island_erasures: islands.erased_count(),
            d_max: max_reads_per_island(islands),
            length_histogram,
        }
    }
}

/// Island counts per length bin, with the concentration test of one trial.
///
/// Bin `k` holds the islands with `(k-1)/L'·log2 n <= N < k/L'·log2 n`; bin
/// `J` pools everything from `k = J` upwards.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub n: usize,
    pub l_prime: usize,
    pub j_max: usize,
    /// `K'`
    pub k_prime: usize,
    /// `|Y'_k|` for the non-empty bins (`J` is the overflow bin).
    pub bin_counts: BTreeMap<usize, usize>,
    /// `|Y'_k| / K'`
    pub q_hat: BTreeMap<usize, f64>,
    /// Mean island length `Σ N_i / K'`.
    pub lambda_hat: f64,
    /// `log2 n · sqrt(2Λ/n)`
    pub epsilon: f64,
    /// Whether the bin count strayed more than `ε·n/Λ` from `n·q_k/Λ`.
    /// Empty until [`flag_events`](Self::flag_events) is called.
    pub e_event_flags: BTreeMap<usize, bool>,
    /// No islands: every other field is empty or zero.
    pub degenerate: bool,
}

impl PartitionReport {
    /// The bin holding an island of length `len`.
    pub fn bin_of(&self, len: usize) -> usize {
        length_bin(len, self.l_prime, self.j_max, libm::log2(self.n as f64))
    }

    /// Mean bin occupancy `n·q/Λ` given a bin probability `q`.
    pub fn expected_count(&self, q: f64) -> f64 {
        self.n as f64 * q / self.lambda_hat
    }

    /// Deviation threshold `ε·n/Λ`.
    pub fn deviation_threshold(&self) -> f64 {
        self.epsilon * self.n as f64 / self.lambda_hat
    }

    /// Evaluates the deviation event for every bin of `q_ref`, a reference
    /// bin distribution (typically pooled over many trials). Bins missing from
    /// this trial count as empty.
    pub fn flag_events(&mut self, q_ref: &BTreeMap<usize, f64>) {
        self.e_event_flags.clear();
        if self.degenerate {
            return;
        }
        let threshold = self.deviation_threshold();
        for (&k, &q) in q_ref {
            let count = self.bin_counts.get(&k).copied().unwrap_or(0) as f64;
            let dev = (count - self.expected_count(q)).abs();
            self.e_event_flags.insert(k, dev > threshold);
        }
    }
}

fn length_bin(len: usize, l_prime: usize, j_max: usize, log_n: f64) -> usize {
    let k = libm::floor(len as f64 * l_prime as f64 / log_n) as usize + 1;
    k.min(j_max)
}

/// Partitions islands into length bins of width `log2 n / L'`.
///
/// # Panics
///
/// If `l_prime < 1` or `j_max < 2`.
pub fn partition_islands(islands: &IslandSet, l_prime: usize, j_max: usize) -> PartitionReport {
    assert!(l_prime >= 1, "L' must be at least 1");
    assert!(j_max >= 2, "J must be at least 2");
    let n = islands.n();
    let log_n = libm::log2(n as f64);
    let k_prime = islands.len();
    let mut report = PartitionReport {
        n,
        l_prime,
        j_max,
        k_prime,
        bin_counts: BTreeMap::new(),
        q_hat: BTreeMap::new(),
        lambda_hat: 0.0,
        epsilon: 0.0,
        e_event_flags: BTreeMap::new(),
        degenerate: k_prime == 0,
    };
    if report.degenerate {
        return report;
    }
    for isl in islands.islands() {
        *report
            .bin_counts
            .entry(length_bin(isl.len(), l_prime, j_max, log_n))
            .or_insert(0) += 1;
    }
    report.q_hat = report
        .bin_counts
        .iter()
        .map(|(&k, &count)| (k, count as f64 / k_prime as f64))
        .collect();
    report.lambda_hat = islands.islands().iter().map(Island::len).sum::<usize>() as f64 / k_prime as f64;
    report.epsilon = log_n * libm::sqrt(2.0 * report.lambda_hat / n as f64);
    report
}

/// Bin distribution pooled over trials: `Σ |Y'_k| / Σ K'`.
pub fn pooled_q<'a, I>(reports: I) -> BTreeMap<usize, f64>
where
    I: IntoIterator<Item = &'a PartitionReport>,
{
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut total = 0usize;
    for r in reports {
        total += r.k_prime;
        for (&k, &c) in &r.bin_counts {
            *counts.entry(k).or_insert(0) += c;
        }
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}

/// Mean with an optional standard error (absent for a single sample).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub se: Option<f64>,
}

/// Exact integer sums of one per-trial quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Moments {
    sum: u128,
    sum_sq: u128,
}

impl Moments {
    fn push(&mut self, x: usize) {
        let x = x as u128;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    /// Mean and standard error of `scale·x` over `count` samples.
    fn estimate(&self, count: u64, scale: f64) -> Estimate {
        let t = count as f64;
        let mean = self.sum as f64 / t;
        let se = (count > 1).then(|| {
            let t_int = count as u128;
            // t·Σx² - (Σx)² is exact in integers
            let centered = (t_int * self.sum_sq - self.sum * self.sum) as f64;
            let var = centered / (t * (t - 1.0));
            libm::sqrt(var / t) * scale
        });
        Estimate {
            mean: mean * scale,
            se,
        }
    }
}

/// Commutative accumulator of trial statistics.
///
/// Every field is an exact integer sum, so merging in any order, serially or
/// in parallel, gives identical results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsAccumulator {
    d_threshold: f64,
    trials: u64,
    covered: Moments,
    visible: Moments,
    hidden: Moments,
    k_prime: Moments,
    sum_lengths: Moments,
    d_max: Moments,
    d_tail: Moments,
}

impl StatsAccumulator {
    /// `d_threshold` is the value `α·log2 n` that `D` is compared against.
    pub fn new(d_threshold: f64) -> Self {
        StatsAccumulator {
            d_threshold,
            trials: 0,
            covered: Moments::default(),
            visible: Moments::default(),
            hidden: Moments::default(),
            k_prime: Moments::default(),
            sum_lengths: Moments::default(),
            d_max: Moments::default(),
            d_tail: Moments::default(),
        }
    }

    pub fn push(&mut self, t: &TrialStats) {
        self.trials += 1;
        self.covered.push(t.covered);
        self.visible.push(t.visible);
        self.hidden.push(t.covered - t.visible);
        self.k_prime.push(t.k_prime);
        self.sum_lengths.push(t.sum_lengths);
        self.d_max.push(t.d_max);
        self.d_tail.push(usize::from(t.d_max as f64 > self.d_threshold));
    }

    /// # Panics
    ///
    /// If the two accumulators use different thresholds.
    pub fn merge(mut self, other: &StatsAccumulator) -> Self {
        assert_eq!(
            self.d_threshold.to_bits(),
            other.d_threshold.to_bits(),
            "merging accumulators with different D thresholds"
        );
        self.trials += other.trials;
        self.covered.merge(&other.covered);
        self.visible.merge(&other.visible);
        self.hidden.merge(&other.hidden);
        self.k_prime.merge(&other.k_prime);
        self.sum_lengths.merge(&other.sum_lengths);
        self.d_max.merge(&other.d_max);
        self.d_tail.merge(&other.d_tail);
        self
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }
}

/// Monte Carlo means next to their analytic targets.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateReport {
    pub params: ChannelParams,
    pub trials: u64,
    pub alpha: f64,
    /// `α·log2 n`
    pub d_threshold: f64,
    pub phi: Estimate,
    pub phi_v: Estimate,
    pub delta_e_hat: Estimate,
    /// `(log2 n / n)·K'`
    pub reorder: Estimate,
    /// `Σ N_i / n`
    pub sum_lengths: Estimate,
    pub d_max: Estimate,
    /// Frequency of `D > α·log2 n`.
    pub d_tail: Estimate,
    /// `1 - e^{-c}`
    pub phi_target: f64,
    /// `1 - e^{-c(1-δ)}`
    pub phi_v_target: f64,
    /// `e^{-c(1-δ)} - e^{-c}`
    pub delta_e_target: f64,
    /// `(c/λ̄)·e^{-c}`
    pub reorder_target: f64,
    /// `1 - e^{-c}`
    pub sum_lengths_target: f64,
}

impl AggregateReport {
    /// Builds the report from an accumulator. Targets are evaluated at the
    /// realised coverage `K·L/n` and the configured `λ̄`.
    ///
    /// # Panics
    ///
    /// If the accumulator is empty.
    pub fn from_accumulator(acc: &StatsAccumulator, params: &ChannelParams, alpha: f64) -> Self {
        assert!(acc.trials > 0, "aggregate needs at least one trial");
        let t = acc.trials;
        let n = params.n() as f64;
        let c = params.c_effective();
        let delta = params.delta();
        let inv_n = 1.0 / n;
        // c > 0 and δ in [0, 1) hold for every derived parameter set
        let phi_target = bounds::expected_coverage(c).expect("positive coverage");
        AggregateReport {
            params: *params,
            trials: t,
            alpha,
            d_threshold: acc.d_threshold,
            phi: acc.covered.estimate(t, inv_n),
            phi_v: acc.visible.estimate(t, inv_n),
            delta_e_hat: acc.hidden.estimate(t, inv_n),
            reorder: acc.k_prime.estimate(t, params.log2_n() * inv_n),
            sum_lengths: acc.sum_lengths.estimate(t, inv_n),
            d_max: acc.d_max.estimate(t, 1.0),
            d_tail: acc.d_tail.estimate(t, 1.0),
            phi_target,
            phi_v_target: bounds::expected_visible_coverage(c, delta).expect("valid erasure"),
            delta_e_target: bounds::analytic_delta_e(c, delta).expect("valid erasure"),
            reorder_target: (c / params.lbar()) * libm::exp(-c),
            sum_lengths_target: phi_target,
        }
    }
}

/// Aggregates trials of one parameter set; `alpha` fixes the `D` tail
/// threshold `α·log2 n`.
///
/// # Panics
///
/// If `trials` is empty.
pub fn aggregate(trials: &[TrialStats], params: &ChannelParams, alpha: f64) -> AggregateReport {
    let mut acc = StatsAccumulator::new(alpha * params.log2_n());
    for t in trials {
        acc.push(t);
    }
    AggregateReport::from_accumulator(&acc, params, alpha)
}
