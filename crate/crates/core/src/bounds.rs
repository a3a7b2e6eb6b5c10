//! Closed-form coverage laws and capacity bounds.
//!
//! All quantities are functions of the coverage depth `c`, the erasure
//! probability `δ` and the normalized read length `λ̄ = L / log2 n`.

use libm::{exp, expm1};

use crate::error::DomainError;

fn check_coverage(c: f64) -> Result<(), DomainError> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(DomainError::Coverage(c))
    }
}

fn check_erasure(delta: f64, allow_one: bool) -> Result<(), DomainError> {
    let ok = if allow_one {
        (0.0..=1.0).contains(&delta)
    } else {
        (0.0..1.0).contains(&delta)
    };
    if ok {
        Ok(())
    } else {
        Err(DomainError::Erasure(delta))
    }
}

fn check_read_length(lbar: f64) -> Result<(), DomainError> {
    if lbar > 0.0 && lbar.is_finite() {
        Ok(())
    } else {
        Err(DomainError::ReadLength(lbar))
    }
}

/// Expected fraction of covered positions, `1 - e^{-c}`.
pub fn expected_coverage(c: f64) -> Result<f64, DomainError> {
    check_coverage(c)?;
    Ok(-expm1(-c))
}

/// Expected fraction of visibly covered positions, `1 - e^{-c(1-δ)}`.
pub fn expected_visible_coverage(c: f64, delta: f64) -> Result<f64, DomainError> {
    check_coverage(c)?;
    check_erasure(delta, true)?;
    Ok(-expm1(-c * (1.0 - delta)))
}

/// Probability that a position is covered but erased in every covering read:
/// `δ_e = e^{-c(1-δ)} - e^{-c}`.
pub fn analytic_delta_e(c: f64, delta: f64) -> Result<f64, DomainError> {
    check_coverage(c)?;
    check_erasure(delta, false)?;
    Ok(exp(-c * (1.0 - delta)) - exp(-c))
}

/// Rate guaranteed achievable by random coding:
///
/// `(1 - e^{-c(1-δ)}) - (1-δ)(e^{-c(1 - 1/(λ̄(1-δ)))} - e^{-c})`
///
/// Returns `Ok(None)` when `λ̄(1-δ) <= 1`, where no rate is guaranteed. That
/// is not the same as a zero rate.
pub fn achievable_rate(c: f64, delta: f64, lbar: f64) -> Result<Option<f64>, DomainError> {
    check_coverage(c)?;
    check_erasure(delta, false)?;
    check_read_length(lbar)?;
    let keep = 1.0 - delta;
    let eff = lbar * keep;
    if eff <= 1.0 {
        return Ok(None);
    }
    let visible = -expm1(-c * keep);
    let loss = keep * (exp(-c * (1.0 - 1.0 / eff)) - exp(-c));
    Ok(Some(visible - loss))
}

/// The upper bound on capacity with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Converse {
    /// `(1-δ_e)(1-e^{-c}) - (c/λ̄)e^{-c}` without clamping or the short-read
    /// cut-off.
    pub raw: f64,
    /// The bound itself: 0 for short reads, otherwise `raw` clamped at 0.
    pub value: f64,
    /// `λ̄ < c/(c - δ_e)`: capacity is exactly 0.
    pub short_read: bool,
    /// `raw` was negative and replaced by 0.
    pub clamped: bool,
}

/// Read-length threshold `c/(c - δ_e)` below which capacity vanishes.
pub fn short_read_threshold(c: f64, delta: f64) -> Result<f64, DomainError> {
    let de = analytic_delta_e(c, delta)?;
    Ok(c / (c - de))
}

/// Upper bound on capacity with regime information.
pub fn converse(c: f64, delta: f64, lbar: f64) -> Result<Converse, DomainError> {
    check_read_length(lbar)?;
    let de = analytic_delta_e(c, delta)?;
    let raw = (1.0 - de) * -expm1(-c) - (c / lbar) * exp(-c);
    let short_read = lbar < c / (c - de);
    let (value, clamped) = if short_read {
        (0.0, false)
    } else if raw < 0.0 {
        (0.0, true)
    } else {
        (raw, false)
    };
    Ok(Converse {
        raw,
        value,
        short_read,
        clamped,
    })
}

/// Upper bound on capacity (see [`converse`]).
pub fn converse_bound(c: f64, delta: f64, lbar: f64) -> Result<f64, DomainError> {
    converse(c, delta, lbar).map(|b| b.value)
}

/// Capacity of the erasure-free channel, `1 - e^{-c(1 - 1/λ̄)}`.
pub fn noise_free_capacity(c: f64, lbar: f64) -> Result<f64, DomainError> {
    check_coverage(c)?;
    if lbar.is_nan() || lbar <= 1.0 {
        return Err(DomainError::ShortReads(lbar));
    }
    Ok(-expm1(-c * (1.0 - 1.0 / lbar)))
}

/// Every analytic quantity at one `(c, δ, λ̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub c: f64,
    pub delta: f64,
    pub lbar: f64,
    pub delta_e: f64,
    pub exp_coverage: f64,
    pub exp_visible_coverage: f64,
    pub achievable: Option<f64>,
    pub converse: Converse,
    /// `None` when `λ̄ <= 1`.
    pub noise_free_cap: Option<f64>,
    /// `converse - achievable` where the achievable rate is defined.
    pub gap: Option<f64>,
}

impl BoundPoint {
    pub fn new(c: f64, delta: f64, lbar: f64) -> Result<Self, DomainError> {
        let achievable = achievable_rate(c, delta, lbar)?;
        let converse = converse(c, delta, lbar)?;
        let noise_free_cap = if lbar > 1.0 {
            Some(noise_free_capacity(c, lbar)?)
        } else {
            None
        };
        Ok(BoundPoint {
            c,
            delta,
            lbar,
            delta_e: analytic_delta_e(c, delta)?,
            exp_coverage: expected_coverage(c)?,
            exp_visible_coverage: expected_visible_coverage(c, delta)?,
            achievable,
            converse,
            noise_free_cap,
            gap: achievable.map(|a| converse.value - a),
        })
    }
}

/// Shorthand for [`BoundPoint::new`].
pub fn bound_point(c: f64, delta: f64, lbar: f64) -> Result<BoundPoint, DomainError> {
    BoundPoint::new(c, delta, lbar)
}
