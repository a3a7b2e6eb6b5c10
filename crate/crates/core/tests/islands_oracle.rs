//! Island assembly against the brute-force mask oracle, plus structural
//! properties of reads, islands and length partitions.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sse_core::channel::{sample_read_set, trial_rng, BitString, ChannelParams, ReadSet};
use sse_core::islands::{brute_force_islands, island_lengths, merge_true_islands, merge_true_islands_with};
use sse_core::stats::{partition_islands, CoverageCounts, TrialStats};
use sse_core::{MergeMode, Symbol};

fn random_case(n: usize, read_len: usize, reads: usize, delta: f64, seed: u64) -> (BitString, ReadSet) {
    let params = ChannelParams::with_reads(n, read_len, reads, delta).unwrap();
    let x = BitString::random(n, &mut trial_rng(seed, u64::MAX));
    let rs = sample_read_set(&x, &params, seed).unwrap();
    (x, rs)
}

#[test]
fn merge_matches_oracle_on_1000_trials() {
    let mut full = 0;
    for seed in 0..1000 {
        let (_, rs) = random_case(64, 7, 8, 0.4, seed);
        let merged = merge_true_islands(&rs);
        let oracle = brute_force_islands(&rs);
        assert_eq!(merged, oracle, "seed {seed}");
        assert_eq!(merged.total_length(), CoverageCounts::of(&rs).covered, "seed {seed}");
        full += usize::from(merged.full_circle());
    }
    // 8 reads of length 7 cannot cover 64 positions
    assert_eq!(full, 0);
}

#[test]
fn merge_matches_oracle_with_full_coverage() {
    let mut full = 0;
    for seed in 0..500 {
        let (_, rs) = random_case(32, 6, 20, 0.5, seed);
        let merged = merge_true_islands(&rs);
        assert_eq!(merged, brute_force_islands(&rs), "seed {seed}");
        full += usize::from(merged.full_circle());
    }
    assert!(full > 0, "no full-circle case exercised");
}

#[test]
fn order_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..200 {
        let (_, rs) = random_case(64, 7, 12, 0.3, seed);
        let base = merge_true_islands(&rs);
        let strict = merge_true_islands_with(&rs, MergeMode::StrictOverlap);
        let mut reads = rs.reads().to_vec();
        reads.shuffle(&mut rng);
        let shuffled = ReadSet::from_reads(*rs.params(), reads);
        assert_eq!(merge_true_islands(&shuffled).islands(), base.islands());
        assert_eq!(
            merge_true_islands_with(&shuffled, MergeMode::StrictOverlap).islands(),
            strict.islands()
        );
    }
}

fn check_structure(x: &BitString, rs: &ReadSet, mode: MergeMode) {
    let n = rs.n();
    let read_len = rs.params().read_len();
    let set = merge_true_islands_with(rs, mode);

    // islands are disjoint and cover exactly the covered positions
    let mut owner = vec![usize::MAX; n];
    for (i, isl) in set.islands().iter().enumerate() {
        assert!(isl.len() >= read_len || set.full_circle());
        for j in 0..isl.len() {
            let p = (isl.start + j) % n;
            assert_eq!(owner[p], usize::MAX, "position {p} in two islands");
            owner[p] = i;
        }
    }
    let counts = CoverageCounts::of(rs);
    assert_eq!(set.total_length(), counts.covered);
    assert_eq!(set.erased_count(), counts.covered - counts.visible);

    // every read sits inside exactly one island, and read counts add up
    let mut per_island = vec![0; set.len()];
    for (r, &i) in rs.reads().iter().zip(set.read_islands()) {
        for j in 0..read_len {
            assert_eq!(owner[(r.start + j) % n], i);
        }
        per_island[i] += 1;
    }
    let counted: Vec<usize> = set.islands().iter().map(|i| i.read_count).collect();
    assert_eq!(per_island, counted);
    assert_eq!(counted.iter().sum::<usize>(), rs.len());

    // a symbol is erased iff every covering read erases it
    let mut seen = vec![false; n];
    for r in rs.reads() {
        for (j, s) in r.symbols.iter().enumerate() {
            let p = (r.start + j) % n;
            if let Some(b) = s.bit() {
                assert_eq!(b, x.bit(p), "read disagrees with input");
                seen[p] = true;
            }
        }
    }
    for isl in set.islands() {
        for (j, s) in isl.symbols.iter().enumerate() {
            let p = (isl.start + j) % n;
            if seen[p] {
                assert_eq!(*s, Symbol::from_bit(x.bit(p)));
            } else {
                assert_eq!(*s, Symbol::Erased);
            }
        }
    }

    if mode == MergeMode::MaximalRun {
        // maximality: the position just before each island is uncovered
        if !set.full_circle() {
            for isl in set.islands() {
                assert_eq!(owner[(isl.start + n - 1) % n], usize::MAX);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn island_structure(
        n in 8usize..200,
        len_frac in 0.05f64..0.5,
        reads in 1usize..40,
        delta in 0.0f64..0.95,
        seed in any::<u64>(),
        strict in any::<bool>(),
    ) {
        let read_len = ((n as f64 * len_frac) as usize).clamp(1, n - 1);
        let (x, rs) = random_case(n, read_len, reads, delta, seed);
        let mode = if strict { MergeMode::StrictOverlap } else { MergeMode::MaximalRun };
        check_structure(&x, &rs, mode);
        prop_assert_eq!(merge_true_islands(&rs), brute_force_islands(&rs));
    }

    #[test]
    fn partition_is_exhaustive(
        seed in any::<u64>(),
        c in 0.2f64..4.0,
        l_prime in 1usize..5,
        j_max in 2usize..60,
    ) {
        let params = ChannelParams::derive(1 << 12, c, 1.75, 0.2).unwrap();
        let x = BitString::random(params.n(), &mut trial_rng(seed, 0));
        let rs = sample_read_set(&x, &params, seed).unwrap();
        let set = merge_true_islands(&rs);
        let report = partition_islands(&set, l_prime, j_max);
        prop_assert_eq!(report.bin_counts.values().sum::<usize>(), set.len());
        prop_assert!(report.bin_counts.keys().all(|&k| (1..=j_max).contains(&k)));
        for len in island_lengths(&set) {
            let k = report.bin_of(len);
            let log_n = params.log2_n();
            let lower = (k - 1) as f64 / l_prime as f64 * log_n;
            prop_assert!(len as f64 >= lower);
            if k < j_max {
                prop_assert!((len as f64) < k as f64 / l_prime as f64 * log_n);
            }
        }
    }
}

#[test]
fn short_bins_stay_empty() {
    // n = 2^17: L = round(1.75·17) = 30 ≥ λ̄·log2 n, so no island lands in a
    // bin k ≤ λ̄·L'
    let l_prime = 2;
    let params = ChannelParams::derive(1 << 17, 1.0, 1.75, 0.2).unwrap();
    assert!(params.read_len() as f64 >= params.lbar() * params.log2_n());
    for seed in 0..20 {
        let x = BitString::random(params.n(), &mut trial_rng(seed, 1));
        let rs = sample_read_set(&x, &params, seed).unwrap();
        let report = partition_islands(&merge_true_islands(&rs), l_prime, 40);
        for (&k, &q) in &report.q_hat {
            if k as f64 <= params.lbar() * l_prime as f64 {
                assert_eq!(q, 0.0, "bin {k} non-empty");
            }
        }
        assert!(report.bin_counts.keys().all(|&k| k as f64 > 3.5));
    }
}

#[test]
fn island_identity_holds_every_trial_at_scale() {
    let params = ChannelParams::derive(100_000, 1.0, 1.75, 0.3).unwrap();
    for seed in 0..5 {
        let x = BitString::random(params.n(), &mut trial_rng(seed, 2));
        let rs = sample_read_set(&x, &params, seed).unwrap();
        let set = merge_true_islands(&rs);
        let t = TrialStats::measure(&rs, &set);
        assert_eq!(t.sum_lengths, t.covered);
        assert_eq!(t.sum_lengths as f64, (t.phi * params.n() as f64).round());
        assert_eq!(set, brute_force_islands(&rs));
    }
}
