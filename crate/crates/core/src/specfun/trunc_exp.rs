use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::erf::ln_erfc;
use super::gamma::{log1pmx, log_poisson};
use super::log_value::LogValue;
use crate::error::{Error, Result};

/// Default half-width, in units of `n^{-1/2}`, of the window around `t = 1`
/// where the edge asymptotic is refused.
pub const DEFAULT_EDGE_GUARD: f64 = 10.0;

/// `ln[e^{-z} Σ_{k=0}^{n} z^k/k!]`.
///
/// The sum is anchored at its largest term `k* = min(n, ⌊z⌋)`; the anchor
/// weight `z^{k*} e^{-z}/k*!` comes from [`log_poisson`] and the remaining
/// terms are accumulated as ratios to it, walking outward until they drop
/// below `1e-17` of the running sum.
pub fn trunc_exp_log_scaled(n: u64, z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::invalid(format!(
            "truncated exponential needs finite z >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mode = (z.floor() as u64).min(n);
    let mut sum = 1.0;
    let mut ratio = 1.0;
    for k in (1..=mode).rev() {
        ratio *= k as f64 / z;
        sum += ratio;
        if ratio < 1e-17 * sum {
            break;
        }
    }
    ratio = 1.0;
    for k in mode + 1..=n {
        ratio *= z / k as f64;
        sum += ratio;
        if ratio < 1e-17 * sum {
            break;
        }
    }
    Ok(log_poisson(mode as f64, z) + sum.ln())
}

/// `ln Σ_{k=0}^{n} z^k/k!` as a [`LogValue`].
pub fn trunc_exp_log(n: u64, z: f64) -> Result<LogValue> {
    Ok(LogValue::from_ln(trunc_exp_log_scaled(n, z)? + z))
}

/// Argument bundle of the edge asymptotic: `μ(t) = |t - 1 - ln t|^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRegime {
    pub t: f64,
    pub n: u64,
    pub mu: f64,
}

impl AsymptoticRegime {
    pub fn new(n: u64, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("asymptotic regime needs n >= 1"));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!(
                "asymptotic regime needs t > 0, got {t}"
            )));
        }
        // t - 1 - ln t = -(ln(1 + u) - u) with u = t - 1
        let mu = (-log1pmx(t - 1.0)).max(0.0).sqrt();
        Ok(AsymptoticRegime { t, n, mu })
    }
}

/// Uniform edge asymptotic for `e^{-nt} Σ_{k=0}^{n} (nt)^k/k!`:
///
/// `1_{t<1} + (1/√2) μ t/(t-1) erfc(√n μ)`.
///
/// Refuses `|t - 1| < guard / √n` (`guard` defaults to
/// [`DEFAULT_EDGE_GUARD`]); callers should sum exactly there.
pub fn trunc_exp_asymptotic(n: u64, t: f64, guard: Option<f64>) -> Result<LogValue> {
    let regime = AsymptoticRegime::new(n, t)?;
    let guard = guard.unwrap_or(DEFAULT_EDGE_GUARD);
    let width = guard / (n as f64).sqrt();
    if (t - 1.0).abs() < width {
        return Err(Error::regime(format!(
            "t = {t} lies within {width:.3e} of the edge t = 1 at n = {n}; use exact summation"
        )));
    }
    let mu = regime.mu;
    let ln_corr =
        FRAC_1_SQRT_2.ln() + (mu * t / (t - 1.0)).abs().ln() + ln_erfc((n as f64).sqrt() * mu);
    if t > 1.0 {
        Ok(LogValue::from_ln(ln_corr))
    } else {
        Ok(LogValue::ONE - LogValue::from_ln(ln_corr))
    }
}
