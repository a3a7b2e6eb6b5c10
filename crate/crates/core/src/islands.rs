//! Genie-aided assembly of reads into true islands.
//!
//! With the true start positions known, reads are sorted and swept once: a
//! read joins the current island when it starts inside (or, in the default
//! mode, immediately after) the island's current extent. The island keeps any
//! symbol that at least one of its reads carries unerased. The sweep is then
//! closed around the cycle, since an island may wrap past position `n - 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{ReadSet, Symbol};

/// When two successive reads are merged into one island.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MergeMode {
    /// `s_j <= s_i + L`: exactly adjacent reads merge, so islands are the
    /// maximal runs of covered positions.
    #[default]
    MaximalRun,
    /// `s_j < s_i + L`: reads must share at least one position. Two exactly
    /// adjacent reads give two touching islands.
    StrictOverlap,
}

impl MergeMode {
    #[inline]
    fn joins(self, start: usize, end: usize) -> bool {
        match self {
            MergeMode::MaximalRun => start <= end,
            MergeMode::StrictOverlap => start < end,
        }
    }
}

/// A contiguous (cyclic) stretch of the input reconstructed from reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Island {
    pub start: usize,
    pub symbols: Vec<Symbol>,
    pub read_count: usize,
}

impl Island {
    /// `N_i`
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn erased(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_erased()).count()
    }
}

/// All true islands of one read set, sorted by start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IslandSet {
    n: usize,
    islands: Vec<Island>,
    full_circle: bool,
    erased_count: usize,
    read_islands: Vec<usize>,
}

impl IslandSet {
    pub fn empty(n: usize) -> Self {
        IslandSet {
            n,
            islands: Vec::new(),
            full_circle: false,
            erased_count: 0,
            read_islands: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn islands(&self) -> &[Island] {
        &self.islands
    }

    /// `K'`
    pub fn len(&self) -> usize {
        self.islands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.islands.is_empty()
    }

    /// True when every position is covered and the whole cycle is a single
    /// island (starting at 0).
    pub fn full_circle(&self) -> bool {
        self.full_circle
    }

    /// Covered positions that no read carries unerased (`N_e`).
    pub fn erased_count(&self) -> usize {
        self.erased_count
    }

    /// `Σ N_i`, the number of covered positions.
    pub fn total_length(&self) -> usize {
        self.islands.iter().map(Island::len).sum()
    }

    /// Index into [`islands`](Self::islands) of the island holding each
    /// read, in the read set's order.
    pub fn read_islands(&self) -> &[usize] {
        &self.read_islands
    }

    fn from_parts(n: usize, islands: Vec<Island>, full_circle: bool, read_islands: Vec<usize>) -> Self {
        debug_assert!(islands.windows(2).all(|w| w[0].start < w[1].start));
        let erased_count = islands.iter().map(Island::erased).sum();
        IslandSet {
            n,
            islands,
            full_circle,
            erased_count,
            read_islands,
        }
    }
}

/// Island lengths `N_i` in start order.
pub fn island_lengths(islands: &IslandSet) -> Vec<usize> {
    islands.islands.iter().map(Island::len).collect()
}

/// Merges reads into true islands using maximal-run semantics.
pub fn merge_true_islands(reads: &ReadSet) -> IslandSet {
    merge_true_islands_with(reads, MergeMode::MaximalRun)
}

struct Run {
    start: usize,
    // exclusive, on the unrolled line; may exceed n
    end: usize,
    members: Vec<usize>,
}

/// Merges reads into true islands with the given merge rule. Runs in
/// `O(K log K + K·L)`.
pub fn merge_true_islands_with(reads: &ReadSet, mode: MergeMode) -> IslandSet {
    let n = reads.n();
    let read_len = reads.params().read_len();
    let all = reads.reads();
    if all.is_empty() {
        return IslandSet::empty(n);
    }

    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by_key(|&i| all[i].start);

    let mut runs: Vec<Run> = Vec::new();
    for &i in &order {
        let s = all[i].start;
        match runs.last_mut() {
            Some(run) if mode.joins(s, run.end) => {
                run.end = run.end.max(s + read_len);
                run.members.push(i);
            }
            _ => runs.push(Run {
                start: s,
                end: s + read_len,
                members: vec![i],
            }),
        }
    }

    // Close the cycle: the last run may reach past n into the leading runs.
    while runs.len() > 1 {
        let last = runs.len() - 1;
        let first_start = runs[0].start + n;
        if !mode.joins(first_start, runs[last].end) {
            break;
        }
        let first = runs.remove(0);
        let last = runs.len() - 1;
        let tail = &mut runs[last];
        tail.end = tail.end.max(first.end + n);
        tail.members.extend(first.members);
    }

    let full_circle = runs.len() == 1 && runs[0].end - runs[0].start >= n;
    let mut read_islands = vec![usize::MAX; all.len()];
    let mut islands: Vec<Island> = Vec::with_capacity(runs.len());
    // runs are already in start order apart from the wrapped tail, which keeps
    // the largest start
    for (idx, run) in runs.iter().enumerate() {
        let (start, len) = if full_circle {
            (0, n)
        } else {
            (run.start, run.end - run.start)
        };
        let mut symbols = vec![Symbol::Erased; len];
        for &ri in &run.members {
            let read = &all[ri];
            let offset = (read.start + n - start) % n;
            for (j, &sym) in read.symbols.iter().enumerate() {
                if !sym.is_erased() {
                    symbols[(offset + j) % len] = sym;
                }
            }
            read_islands[ri] = idx;
        }
        islands.push(Island {
            start,
            symbols,
            read_count: run.members.len(),
        });
    }
    IslandSet::from_parts(n, islands, full_circle, read_islands)
}

/// Reference island assembly straight from the covered-position mask.
///
/// Marks every covered position, keeps any unerased symbol seen there and
/// cuts the cycle into maximal covered runs. Each read is assigned to the run
/// containing its start. Costs `O(n + K·L)` time and `O(n)` memory.
pub fn brute_force_islands(reads: &ReadSet) -> IslandSet {
    let n = reads.n();
    let all = reads.reads();
    if all.is_empty() {
        return IslandSet::empty(n);
    }
    let mut covered = vec![false; n];
    let mut value = vec![Symbol::Erased; n];
    for read in all {
        for (j, &sym) in read.symbols.iter().enumerate() {
            let p = (read.start + j) % n;
            covered[p] = true;
            if !sym.is_erased() {
                value[p] = sym;
            }
        }
    }

    let mut run_of = vec![usize::MAX; n];
    let mut spans: Vec<(usize, usize)> = Vec::new();
    let full_circle = match covered.iter().position(|&c| !c) {
        None => {
            run_of.fill(0);
            spans.push((0, n));
            true
        }
        Some(gap) => {
            let mut in_run = false;
            for step in 1..=n {
                let p = (gap + step) % n;
                if covered[p] {
                    if !in_run {
                        spans.push((p, 0));
                        in_run = true;
                    }
                    let last = spans.len() - 1;
                    spans[last].1 += 1;
                    run_of[p] = last;
                } else {
                    in_run = false;
                }
            }
            false
        }
    };

    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.sort_by_key(|&i| spans[i].0);
    let mut rank = vec![0; spans.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut islands: Vec<Island> = order
        .iter()
        .map(|&i| {
            let (start, len) = spans[i];
            Island {
                start,
                symbols: (0..len).map(|j| value[(start + j) % n]).collect(),
                read_count: 0,
            }
        })
        .collect();
    let read_islands: Vec<usize> = all.iter().map(|r| rank[run_of[r.start]]).collect();
    for &i in &read_islands {
        islands[i].read_count += 1;
    }
    IslandSet::from_parts(n, islands, full_circle, read_islands)
}
