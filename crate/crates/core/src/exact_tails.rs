//! Deterministic tail quantities: the exact spectral-radius law of the
//! complex ensemble, expected exceedance counts, and first-moment brackets
//! on tail probabilities.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::deviation::Beta;
use crate::error::{Error, Result};
use crate::kernels::{self, phi, KernelIntegral, Region};
use crate::quadrature::integrate_log;
use crate::specfun::{ln_1m_exp, ln_add_exp, reg_gamma_ladder, reg_gamma_ln, LogValue};

/// Relative error a quadrature count must certify before it is returned.
pub const COUNT_REL_TOL: f64 = 1e-9;

/// Below this value of `Σ Q_k` the radius tail is reported as a bracket.
const TINY_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `max |σ|`
    Radius,
    /// `max Re σ`
    Rightmost,
    /// largest real eigenvalue (real ensemble)
    RealMax,
    /// largest modulus among non-real eigenvalues (real ensemble)
    ComplexMaxModulus,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Radius => "radius",
            Statistic::Rightmost => "rightmost",
            Statistic::RealMax => "real_max",
            Statistic::ComplexMaxModulus => "complex_max_modulus",
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radius" | "spectral_radius" => Ok(Statistic::Radius),
            "rightmost" => Ok(Statistic::Rightmost),
            "real" | "real_max" | "real-max" => Ok(Statistic::RealMax),
            "complex" | "complex_max_modulus" | "complex-max-modulus" => {
                Ok(Statistic::ComplexMaxModulus)
            }
            _ => Err(Error::invalid(format!("unknown statistic '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailQuery {
    pub ensemble: Beta,
    pub statistic: Statistic,
    pub n: u64,
    pub t: f64,
}

impl TailQuery {
    pub fn new(ensemble: Beta, statistic: Statistic, n: u64, t: f64) -> Result<Self> {
        if matches!(statistic, Statistic::RealMax | Statistic::ComplexMaxModulus)
            && ensemble != Beta::Real
        {
            return Err(Error::invalid(format!(
                "statistic {statistic} needs the real ensemble"
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!(
                "threshold must be finite and > 0, got {t}"
            )));
        }
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        Ok(TailQuery {
            ensemble,
            statistic,
            n,
            t,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbKind {
    Exact,
    UpperBound,
    LowerBound,
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProb {
    pub log_p: f64,
    pub kind: ProbKind,
}

impl LogProb {
    pub fn new(log_p: f64, kind: ProbKind) -> Self {
        LogProb {
            log_p: log_p.min(0.0),
            kind,
        }
    }

    /// The probability, clamped to `[0, 1]`.
    pub fn p(&self) -> f64 {
        self.log_p.exp().clamp(0.0, 1.0)
    }
}

/// Exact `P(max |σ| >= t)` for the complex ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KostlanTail {
    /// Best value; `kind` is `Exact`, or `Estimate` in the tiny-tail regime.
    pub value: LogProb,
    pub lower: LogProb,
    pub upper: LogProb,
    /// `ln Σ_k Q(k, n t²)`, the expected exceedance count.
    pub ln_sum_q: f64,
}

/// Neumaier-compensated sum; deterministic for a fixed input order.
pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `ln Σ exp(x_i)`.
fn ln_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + compensated_sum(xs.iter().map(|x| (x - m).exp())).ln()
}

fn check_threshold(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!(
            "threshold must be finite and > 0, got {t}"
        )));
    }
    Ok(())
}

/// Smallest order `k` whose `ln Q(k, x)` is within `margin` of `ln Q(n, x)`;
/// lower orders contribute less than `e^{-margin}` relative.
fn first_relevant_order(n: u64, x: f64, margin: f64) -> Result<u64> {
    let top = reg_gamma_ln(n as f64, x)?.ln_q;
    let (mut lo, mut hi) = (1u64, n);
    if reg_gamma_ln(1.0, x)?.ln_q >= top - margin {
        return Ok(1);
    }
    // ln Q(k, x) increases with k
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reg_gamma_ln(mid as f64, x)?.ln_q >= top - margin {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `ln P(max |σ| < t) = Σ_k ln P(k, n t²)` for the complex ensemble.
///
/// Orders whose `Q` is below `e^{-60}` times `Q(n, n t²)` are dropped; their
/// total relative contribution is below `n e^{-60}`.
pub fn kostlan_log_cdf(n: u64, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if t <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let x = n as f64 * t * t;
    let k_lo = first_relevant_order(n, x, 60.0)?;
    let ladder = reg_gamma_ladder(x, k_lo, n)?;
    Ok(compensated_sum(ladder.iter().map(|g| g.ln_p)))
}

/// Exact tail of the complex-ensemble spectral radius via Kostlan's
/// independent-chi representation: `1 - Π_k P(k, n t²)`.
pub fn kostlan_radius_tail(n: u64, t: f64) -> Result<KostlanTail> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    check_threshold(t)?;
    let x = n as f64 * t * t;
    let ladder = reg_gamma_ladder(x, 1, n)?;
    let ln_qs: Vec<f64> = ladder.iter().map(|g| g.ln_q).collect();
    let ln_sum_q = ln_sum_exp(&ln_qs);
    if ln_sum_q < TINY_TAIL.ln() {
        // S - S²/2 <= 1 - Π(1 - Q_k) <= S
        let s_half = 0.5 * ln_sum_q.exp();
        let lower = ln_sum_q + (-s_half).ln_1p();
        let mid = ln_sum_q + (-0.5 * s_half).ln_1p();
        return Ok(KostlanTail {
            value: LogProb::new(mid, ProbKind::Estimate),
            lower: LogProb::new(lower, ProbKind::LowerBound),
            upper: LogProb::new(ln_sum_q, ProbKind::UpperBound),
            ln_sum_q,
        });
    }
    let ln_cdf = compensated_sum(ladder.iter().map(|g| g.ln_p));
    let v = LogProb::new(ln_1m_exp(ln_cdf.min(0.0)), ProbKind::Exact);
    Ok(KostlanTail {
        value: v,
        lower: v,
        upper: v,
        ln_sum_q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountRoute {
    ClosedForm,
    Quadrature,
}

/// An expected exceedance count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedCount {
    pub value: LogValue,
    pub route: CountRoute,
    /// Relative error bound (zero for the closed form up to rounding).
    pub rel_error_bound: f64,
    /// `ln` of the certified bound on the mass beyond `r_max` (quadrature).
    pub ln_truncation: Option<f64>,
}

impl ExpectedCount {
    fn from_quadrature(k: KernelIntegral) -> Result<Self> {
        let bound = k.rel_error_bound();
        if !(bound <= COUNT_REL_TOL) {
            return Err(Error::numerical(
                format!("kernel quadrature certified only {bound:e} relative"),
                Some(bound),
            ));
        }
        Ok(ExpectedCount {
            value: k.value,
            route: CountRoute::Quadrature,
            rel_error_bound: bound,
            ln_truncation: Some(k.ln_truncation),
        })
    }
}

/// `Σ_{k=1}^{n} Q(k, n t²)`: expected number of complex-ensemble eigenvalues
/// with `|σ| >= t`.
pub fn complex_radius_count_closed_form(n: u64, t: f64) -> Result<LogValue> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let x = n as f64 * t * t;
    let ladder = reg_gamma_ladder(x, 1, n)?;
    let ln_qs: Vec<f64> = ladder.iter().map(|g| g.ln_q).collect();
    Ok(LogValue::from_ln(ln_sum_exp(&ln_qs)))
}

fn check_real_n(beta: Beta, n: u64) -> Result<()> {
    match beta {
        Beta::Complex if n >= 1 => Ok(()),
        Beta::Real if n >= 3 => Ok(()),
        _ => Err(Error::invalid(format!(
            "expected counts need n >= {} for beta = {beta}, got {n}",
            if beta == Beta::Real { 3 } else { 1 }
        ))),
    }
}

/// Expected number of eigenvalues with `|σ| >= t`.
pub fn expected_count_radius(beta: Beta, n: u64, t: f64) -> Result<ExpectedCount> {
    check_threshold(t)?;
    check_real_n(beta, n)?;
    match beta {
        Beta::Complex => Ok(ExpectedCount {
            value: complex_radius_count_closed_form(n, t)?,
            route: CountRoute::ClosedForm,
            rel_error_bound: 0.0,
            ln_truncation: None,
        }),
        Beta::Real => {
            ExpectedCount::from_quadrature(kernels::real_ensemble_count(n, Region::Outside(t))?)
        }
    }
}

/// Expected number of eigenvalues with `Re σ >= t`.
pub fn expected_count_rightmost(beta: Beta, n: u64, t: f64) -> Result<ExpectedCount> {
    check_threshold(t)?;
    check_real_n(beta, n)?;
    let k = match beta {
        Beta::Complex => kernels::complex_count(n, Region::RightOf(t))?,
        Beta::Real => kernels::real_ensemble_count(n, Region::RightOf(t))?,
    };
    ExpectedCount::from_quadrature(k)
}

/// Expected number of eigenvalues at or beyond `t` in the sense of the
/// query's statistic.
pub fn expected_count(q: &TailQuery) -> Result<ExpectedCount> {
    match q.statistic {
        Statistic::Radius => expected_count_radius(q.ensemble, q.n, q.t),
        Statistic::Rightmost => expected_count_rightmost(q.ensemble, q.n, q.t),
        Statistic::RealMax => {
            check_real_n(Beta::Real, q.n)?;
            ExpectedCount::from_quadrature(kernels::real_ensemble_real_count(
                q.n,
                Region::RightOf(q.t),
            )?)
        }
        Statistic::ComplexMaxModulus => {
            check_real_n(Beta::Real, q.n)?;
            ExpectedCount::from_quadrature(kernels::real_ensemble_complex_count(
                q.n,
                Region::Outside(q.t),
            )?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBracket {
    pub lower: LogProb,
    pub upper: LogProb,
    pub expected_count: ExpectedCount,
}

/// `(E[count]/n, min(E[count], 1))`: the first-moment bracket on
/// `P(statistic >= t)`, without using any exact route.
pub fn first_moment_bracket(q: &TailQuery) -> Result<TailBracket> {
    let count = expected_count(q)?;
    let ln_e = count.value.ln();
    Ok(TailBracket {
        lower: LogProb::new(ln_e - (q.n as f64).ln(), ProbKind::LowerBound),
        upper: LogProb::new(ln_e.min(0.0), ProbKind::UpperBound),
        expected_count: count,
    })
}

/// First-moment bracket, collapsed onto the exact value when the
/// statistic has one (complex-ensemble radius).
pub fn tail_bracket(q: &TailQuery) -> Result<TailBracket> {
    let mut b = first_moment_bracket(q)?;
    if q.ensemble == Beta::Complex && q.statistic == Statistic::Radius {
        let k = kostlan_radius_tail(q.n, q.t)?;
        b.lower = k.lower;
        b.upper = k.upper;
    }
    Ok(b)
}

/// The three tail integrals bracketed by integration by parts, with
/// `φ(r) = r² - 2 ln r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IbpIntegral {
    /// `∫_t^∞ r/(r²-1) e^{-nφ(r)} dr`
    Radial,
    /// `∫_t^∞ 1/(r²-1) e^{-nφ(r)} dr`
    Inverse,
    /// `∫_t^∞ (1/x) e^{-(n/2)φ(x)} dx`
    HalfRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IbpCheck {
    pub integral: IbpIntegral,
    pub n: f64,
    pub t: f64,
    /// `ln` of the quadrature value.
    pub ln_value: f64,
    /// `ln` of the lower bracket (`-inf` when the bracket is vacuous).
    pub ln_lower: f64,
    pub ln_upper: f64,
    pub quad_rel_error: f64,
}

impl IbpCheck {
    /// Whether the quadrature value sits inside the bracket, allowing the
    /// quadrature error.
    pub fn holds(&self) -> bool {
        let slack = (1.0 + 4.0 * self.quad_rel_error + 1e-13).ln();
        self.ln_value >= self.ln_lower - slack && self.ln_value <= self.ln_upper + slack
    }
}

/// Quadrature value and integration-by-parts bracket for `integral` at
/// `(n, t)`, `t > 1`.
pub fn ibp_bracket(integral: IbpIntegral, n: f64, t: f64) -> Result<IbpCheck> {
    if !(t > 1.0 && t.is_finite()) || !(n > 0.0 && n.is_finite()) {
        return Err(Error::invalid(format!(
            "bracket needs t > 1 and n > 0, got n = {n}, t = {t}"
        )));
    }
    let d = t * t - 1.0;
    let (m, ln_pref): (f64, Box<dyn Fn(f64) -> f64>) = match integral {
        IbpIntegral::Radial => (n, Box::new(|r: f64| (r / (r * r - 1.0)).ln())),
        IbpIntegral::Inverse => (n, Box::new(|r: f64| -(r * r - 1.0).ln())),
        IbpIntegral::HalfRate => (0.5 * n, Box::new(|r: f64| -r.ln())),
    };
    let (ln_upper, lower_factor) = match integral {
        IbpIntegral::Radial => (
            2.0 * t.ln() - n * phi(t) - (2.0 * n).ln() - 2.0 * d.ln(),
            1.0 - (t * t + 1.0) / (n * d * d),
        ),
        IbpIntegral::Inverse => (
            t.ln() - n * phi(t) - (2.0 * n).ln() - 2.0 * d.ln(),
            1.0 - (3.0 * t * t + 1.0) / (2.0 * n * d * d),
        ),
        IbpIntegral::HalfRate => (
            -0.5 * n * phi(t) - n.ln() - d.ln(),
            1.0 - 2.0 * t * t / (n * d * d),
        ),
    };
    let ln_lower = if lower_factor > 0.0 {
        ln_upper + lower_factor.ln()
    } else {
        f64::NEG_INFINITY
    };

    // φ is convex and the prefactors decrease on (1, ∞), so the mass beyond
    // R is at most pref(R) e^{-mφ(R)} / (m φ'(R)).
    let ln_f = |r: f64| ln_pref(r) - m * phi(r);
    let ln_tail = |r: f64| ln_f(r) - (m * (2.0 * r - 2.0 / r)).ln();
    let scale = 1.0 / (m * (2.0 * t - 2.0 / t));
    let mut r_max = t + 64.0 * scale;
    while ln_tail(r_max) > ln_f(t) + scale.ln() + (1e-17f64).ln() {
        r_max = t + 2.0 * (r_max - t);
    }
    let mut breaks = vec![t];
    for k in [1.0, 4.0, 16.0] {
        breaks.push(t + k * scale);
    }
    breaks.push(r_max);
    let q = integrate_log(ln_f, &breaks, 1e-12)?;
    let ln_value = ln_add_exp(q.ln_value, f64::NEG_INFINITY);
    Ok(IbpCheck {
        integral,
        n,
        t,
        ln_value,
        ln_lower,
        ln_upper,
        quad_rel_error: q.rel_error + (ln_tail(r_max) - ln_value).exp(),
    })
}
