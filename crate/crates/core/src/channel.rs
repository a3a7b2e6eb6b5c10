//! Channel parameters and the SSE(δ) forward model.
//!
//! Reads are sampled with replacement: starts are i.i.d. uniform on `[0, n)`
//! and a read starting at `s` carries `x[s], x[s+1], ..., x[s+L-1]` with all
//! indices taken mod `n`. Each symbol of each read is then erased
//! independently with probability `δ`.

use alloc::vec::Vec;
use core::fmt;

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ParamError;

/// The random number generator used for every trial.
pub type TrialRng = ChaCha8Rng;

/// A read or island symbol: a bit, or an erasure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Symbol {
    Zero = 0,
    One = 1,
    Erased = 2,
}

impl Symbol {
    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }

    #[inline]
    pub fn is_erased(self) -> bool {
        self == Symbol::Erased
    }

    /// The carried bit, or `None` for an erasure.
    #[inline]
    pub fn bit(self) -> Option<bool> {
        match self {
            Symbol::Zero => Some(false),
            Symbol::One => Some(true),
            Symbol::Erased => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Erased => '?',
        };
        write!(f, "{c}")
    }
}

/// Binary channel input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(n: usize) -> Self {
        BitString(alloc::vec![false; n])
    }

    /// Parses a string of `'0'`/`'1'` characters; anything else yields `None`.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(BitString)
    }

    /// I.i.d. uniform bits.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut bits = Vec::with_capacity(n);
        while bits.len() < n {
            let word: u64 = rng.random();
            let take = (n - bits.len()).min(64);
            bits.extend((0..take).map(|i| (word >> i) & 1 == 1));
        }
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

/// Parameters `(n, λ̄, δ)` of the channel together with the derived read
/// length `L`, read count `K` and realised coverage depth `c = K·L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    n: usize,
    lbar: f64,
    delta: f64,
    c_nominal: f64,
    read_len: usize,
    read_count: usize,
}

impl ChannelParams {
    /// Derives `L = max(1, round(λ̄·log2 n))` and `K = max(1, round(c·n/L))`.
    pub fn derive(n: usize, c_nominal: f64, lbar: f64, delta: f64) -> Result<Self, ParamError> {
        if n < 4 {
            return Err(ParamError::InputTooShort(n));
        }
        check_delta(delta)?;
        if !(c_nominal > 0.0 && c_nominal.is_finite()) {
            return Err(ParamError::Coverage(c_nominal));
        }
        if !(lbar > 0.0 && lbar.is_finite()) {
            return Err(ParamError::ReadLength(lbar));
        }
        let log_n = libm::log2(n as f64);
        let read_len = (libm::round(lbar * log_n) as usize).max(1);
        if read_len >= n {
            return Err(ParamError::ReadTooLong { read_len, n });
        }
        let read_count = (libm::round(c_nominal * n as f64 / read_len as f64) as usize).max(1);
        Ok(ChannelParams {
            n,
            lbar,
            delta,
            c_nominal,
            read_len,
            read_count,
        })
    }

    /// Parameters with an explicitly chosen read length and read count.
    ///
    /// `λ̄` and the nominal coverage are back-filled as `L/log2 n` and
    /// `K·L/n`. Used for small hand-checkable configurations.
    pub fn with_reads(
        n: usize,
        read_len: usize,
        read_count: usize,
        delta: f64,
    ) -> Result<Self, ParamError> {
        if n < 4 {
            return Err(ParamError::InputTooShort(n));
        }
        check_delta(delta)?;
        if read_len == 0 || read_len >= n {
            return Err(ParamError::ReadTooLong { read_len, n });
        }
        Ok(ChannelParams {
            n,
            lbar: read_len as f64 / libm::log2(n as f64),
            delta,
            c_nominal: (read_count * read_len) as f64 / n as f64,
            read_len,
            read_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lbar(&self) -> f64 {
        self.lbar
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn c_nominal(&self) -> f64 {
        self.c_nominal
    }

    /// `L`
    pub fn read_len(&self) -> usize {
        self.read_len
    }

    /// `K`
    pub fn read_count(&self) -> usize {
        self.read_count
    }

    /// `K·L/n`; every comparison against an analytic formula uses this value.
    pub fn c_effective(&self) -> f64 {
        (self.read_count * self.read_len) as f64 / self.n as f64
    }

    pub fn log2_n(&self) -> f64 {
        libm::log2(self.n as f64)
    }
}

fn check_delta(delta: f64) -> Result<(), ParamError> {
    if (0.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(ParamError::ErasureOutOfRange(delta))
    }
}

/// One (possibly erased) read together with its true start position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Read {
    pub start: usize,
    pub symbols: Vec<Symbol>,
}

impl Read {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn unerased(&self) -> usize {
        self.symbols.iter().filter(|s| !s.is_erased()).count()
    }
}

/// The noise-free read of length `read_len` starting at `start`, wrapping
/// around the end of `x`.
///
/// # Panics
///
/// If `start` is not a position of `x` or `read_len` is not in `1..x.len()`.
pub fn extract_read(x: &BitString, start: usize, read_len: usize) -> Read {
    let n = x.len();
    assert!(start < n, "read start {start} outside [0, {n})");
    assert!(
        read_len >= 1 && read_len < n,
        "read length {read_len} outside [1, {n})"
    );
    let symbols = (0..read_len)
        .map(|j| Symbol::from_bit(x.bit((start + j) % n)))
        .collect();
    Read { start, symbols }
}

/// The multiset of reads produced by one use of the channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSet {
    params: ChannelParams,
    reads: Vec<Read>,
}

impl ReadSet {
    /// Wraps hand-built reads. Every read must lie on the cycle and have
    /// length `L`; the count is not forced to equal `K` so that degenerate
    /// sets can be built in tests.
    ///
    /// # Panics
    ///
    /// If a read violates the above.
    pub fn from_reads(params: ChannelParams, reads: Vec<Read>) -> Self {
        for r in &reads {
            assert!(r.start < params.n(), "read start {} outside cycle", r.start);
            assert_eq!(r.len(), params.read_len(), "read length mismatch");
        }
        ReadSet { params, reads }
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }
}

/// Runs the channel on `x` with a generator seeded from `seed`.
pub fn sample_read_set(x: &BitString, params: &ChannelParams, seed: u64) -> Result<ReadSet, ParamError> {
    let mut rng = TrialRng::seed_from_u64(seed);
    sample_reads_with(x, params, &mut rng)
}

/// Runs the channel on `x`, drawing all randomness from `rng`.
pub fn sample_reads_with<R: Rng + ?Sized>(
    x: &BitString,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<ReadSet, ParamError> {
    if x.len() != params.n() {
        return Err(ParamError::InputLength {
            got: x.len(),
            expected: params.n(),
        });
    }
    let n = params.n();
    let read_len = params.read_len();
    // delta is validated to lie in [0, 1)
    let erase = Bernoulli::new(params.delta()).expect("erasure probability in [0, 1)");
    let noisy = params.delta() > 0.0;
    let reads = (0..params.read_count())
        .map(|_| {
            let mut read = extract_read(x, rng.random_range(0..n), read_len);
            if noisy {
                for s in read.symbols.iter_mut() {
                    if erase.sample(rng) {
                        *s = Symbol::Erased;
                    }
                }
            }
            read
        })
        .collect();
    Ok(ReadSet { params: *params, reads })
}

/// Derives the seed of trial `trial` from the master seed.
///
/// Both values are pushed through the SplitMix64 finalizer so neighbouring
/// trial indices give unrelated streams. The mapping is fixed: serial and
/// parallel runs agree trial by trial.
pub fn child_seed(master_seed: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Generator for trial `trial` of an experiment seeded with `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> TrialRng {
    TrialRng::seed_from_u64(child_seed(master_seed, trial))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
