//! Monte Carlo experiments: tail estimates, deviation-rate curves, Gumbel
//! comparisons and Saturn-effect counts.
//!
//! Every trial draws from its own [`SeedSpec`] stream, and results are
//! collected in trial order, so outputs do not depend on the worker count.

mod estimate;
mod gumbel;
pub mod stats;

use rayon::prelude::*;
use serde::Serialize;

use crate::deviation::{rate, Beta};
use crate::error::{Error, Result};
use crate::exact_tails::{kostlan_radius_tail, Statistic, TailQuery};
use crate::sampling::{
    extremal_stats, kostlan_sample_radius, sample_spectrum, ExtremalStats, SeedSpec,
};

pub use estimate::{CiMethod, ProbEstimate, Z95};
pub use gumbel::{
    default_grid, gumbel_check, gumbel_tail_profile, Centering, GumbelCheck, GumbelMode, GumbelRow,
    GumbelTailRow,
};

/// Trial budget shared by all Monte Carlo entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub trials: u64,
    pub master_seed: u64,
    /// Worker threads; `0` means one per available core.
    pub workers: usize,
}

impl McConfig {
    pub fn new(trials: u64, master_seed: u64, workers: usize) -> Self {
        McConfig {
            trials,
            master_seed,
            workers,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        Ok(())
    }
}

/// Runs `f(trial_index)` for every trial on `workers` threads and returns
/// the results in trial order. The first failing trial (by index) wins.
pub fn run_trials<T, F>(trials: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let out: Vec<Result<T>> = pool.install(|| (0..trials).into_par_iter().map(&f).collect());
    out.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Full matrix sampling and eigensolve.
    Matrix,
    /// Kostlan moduli (complex radius only).
    Kostlan,
    /// Deterministic evaluation, no sampling.
    Exact,
}

/// Value of the query's statistic, or `None` when the spectrum has no
/// eigenvalue of the required kind.
pub fn statistic_value(stats: &ExtremalStats, statistic: Statistic) -> Option<f64> {
    match statistic {
        Statistic::Radius => Some(stats.radius),
        Statistic::Rightmost => Some(stats.rightmost),
        Statistic::RealMax => stats.real_max,
        Statistic::ComplexMaxModulus => stats.complex_max_modulus,
    }
}

fn check_route(q: &TailQuery, route: Route) -> Result<()> {
    match route {
        Route::Matrix => Ok(()),
        Route::Kostlan if q.ensemble == Beta::Complex && q.statistic == Statistic::Radius => Ok(()),
        Route::Kostlan => Err(Error::invalid(
            "the kostlan route applies to the complex-ensemble radius only",
        )),
        Route::Exact => Err(Error::invalid(
            "estimate_tail samples; use exact_tails for exact values",
        )),
    }
}

/// One draw of the query's statistic.
pub fn sample_statistic(q: &TailQuery, route: Route, seed: SeedSpec) -> Result<Option<f64>> {
    match route {
        Route::Kostlan => Ok(Some(kostlan_sample_radius(q.n as usize, seed)?)),
        _ => {
            let s = sample_spectrum(q.ensemble, q.n as usize, seed)?;
            Ok(statistic_value(&extremal_stats(&s), q.statistic))
        }
    }
}

/// Frequency estimate of `P(statistic >= t)`.
pub fn estimate_tail(q: &TailQuery, cfg: &McConfig, route: Route) -> Result<ProbEstimate> {
    cfg.check()?;
    check_route(q, route)?;
    let hits = run_trials(cfg.trials, cfg.workers, |i| {
        let v = sample_statistic(q, route, SeedSpec::new(cfg.master_seed, i))?;
        Ok(matches!(v, Some(x) if x >= q.t))
    })?;
    ProbEstimate::from_counts(hits.iter().filter(|&&h| h).count() as u64, cfg.trials)
}

/// Limiting large-deviation rate of `P(statistic >= t)` per unit `n`.
///
/// Real eigenvalues of the real ensemble decay at half the complex rate and
/// dominate every statistic they enter.
pub fn rate_target(ensemble: Beta, statistic: Statistic, t: f64) -> Result<f64> {
    let beta = match (ensemble, statistic) {
        (Beta::Complex, _) | (Beta::Real, Statistic::ComplexMaxModulus) => Beta::Complex,
        (Beta::Real, _) => Beta::Real,
    };
    Ok(rate(beta, t)?.rate)
}

/// Deviation exponent `β` of the moderate deviation limit.
pub fn mdp_beta(ensemble: Beta, statistic: Statistic) -> f64 {
    match (ensemble, statistic) {
        (Beta::Complex, _) | (Beta::Real, Statistic::ComplexMaxModulus) => 2.0,
        (Beta::Real, _) => 1.0,
    }
}

/// Default `c` in the exact-route envelope
/// `gap ∈ [½ ln n/n - c/n, 3/2 ln n/n + c/n]`.
pub const LDP_ENVELOPE_C: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LdpRow {
    pub n: u64,
    /// `-(1/n) ln P`; `None` when the estimate has no hits.
    pub minus_log_p_over_n: Option<f64>,
    pub rate_target: f64,
    pub gap: Option<f64>,
    pub route: Route,
    /// Exact route only: whether the gap lies in the `log n / n` envelope.
    pub envelope_ok: Option<bool>,
    /// MC only.
    pub estimate: Option<ProbEstimate>,
    pub flagged: bool,
}

/// `-(1/n) ln P(statistic >= t)` along `n_list`, next to the limiting rate.
///
/// The complex-ensemble radius uses the exact Kostlan law; other queries
/// sample with `mc` (required then).
pub fn ldp_curve(
    ensemble: Beta,
    statistic: Statistic,
    t: f64,
    n_list: &[u64],
    mc: Option<&McConfig>,
) -> Result<Vec<LdpRow>> {
    if !(t >= 1.0) {
        return Err(Error::invalid(format!("ldp curve needs t >= 1, got {t}")));
    }
    let target = rate_target(ensemble, statistic, t)?;
    let exact = ensemble == Beta::Complex && statistic == Statistic::Radius;
    n_list
        .iter()
        .map(|&n| {
            let q = TailQuery::new(ensemble, statistic, n, t)?;
            let nf = n as f64;
            if exact {
                let lp = kostlan_radius_tail(n, t)?.value.log_p;
                let v = -lp / nf;
                let gap = v - target;
                let lo = 0.5 * nf.ln() / nf - LDP_ENVELOPE_C / nf;
                let hi = 1.5 * nf.ln() / nf + LDP_ENVELOPE_C / nf;
                let envelope_ok = (t > 1.0).then_some(gap >= lo && gap <= hi);
                return Ok(LdpRow {
                    n,
                    minus_log_p_over_n: Some(v),
                    rate_target: target,
                    gap: Some(gap),
                    route: Route::Exact,
                    envelope_ok,
                    estimate: None,
                    flagged: false,
                });
            }
            let cfg = mc.ok_or_else(|| {
                Error::invalid("this query has no exact route; a trial budget is required")
            })?;
            let est = estimate_tail(&q, cfg, Route::Matrix)?;
            let v = (est.hits > 0).then(|| -est.p_hat.ln() / nf);
            Ok(LdpRow {
                n,
                minus_log_p_over_n: v,
                rate_target: target,
                gap: v.map(|v| v - target),
                route: Route::Matrix,
                envelope_ok: None,
                estimate: Some(est),
                flagged: est.hits == 0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdpRow {
    pub n: u64,
    pub t: f64,
    pub d: f64,
    /// `ln P(statistic >= 1 + t d) / (n d²)`; `None` with no MC hits.
    pub value: Option<f64>,
    /// `-β t²`.
    pub target: f64,
    /// `sqrt(ln n / n) < d < 1`.
    pub regime_ok: bool,
    pub route: Route,
}

/// Moderate-deviation scaling with `d_n = n^{-d_exponent}`.
pub fn mdp_scaling(
    ensemble: Beta,
    statistic: Statistic,
    d_exponent: f64,
    t_grid: &[f64],
    n_list: &[u64],
    mc: Option<&McConfig>,
) -> Result<Vec<MdpRow>> {
    if !(d_exponent > 0.0 && d_exponent < 0.5) {
        return Err(Error::invalid(format!(
            "d_exponent must lie in (0, 1/2), got {d_exponent}"
        )));
    }
    if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("t grid values must be positive"));
    }
    let beta = mdp_beta(ensemble, statistic);
    let exact = ensemble == Beta::Complex && statistic == Statistic::Radius;
    let mut rows = Vec::with_capacity(n_list.len() * t_grid.len());
    for &n in n_list {
        let nf = n as f64;
        let d = nf.powf(-d_exponent);
        let regime_ok = d > (nf.ln() / nf).sqrt() && d < 1.0;
        for &t in t_grid {
            let thr = 1.0 + t * d;
            let q = TailQuery::new(ensemble, statistic, n, thr)?;
            let (lp, route) = if exact {
                (Some(kostlan_radius_tail(n, thr)?.value.log_p), Route::Exact)
            } else {
                let cfg = mc.ok_or_else(|| {
                    Error::invalid("this query has no exact route; a trial budget is required")
                })?;
                let e = estimate_tail(&q, cfg, Route::Matrix)?;
                ((e.hits > 0).then(|| e.p_hat.ln()), Route::Matrix)
            };
            rows.push(MdpRow {
                n,
                t,
                d,
                value: lp.map(|lp| lp / (nf * d * d)),
                target: -beta * t * t,
                regime_ok,
                route,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaturnRecord {
    pub trial: u64,
    pub real_max: Option<f64>,
    pub complex_max_modulus: Option<f64>,
    pub rightmost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturnCounts {
    pub n: u64,
    pub threshold: f64,
    pub trials: u64,
    pub real_exceed: u64,
    pub complex_exceed: u64,
    pub both: u64,
    #[serde(skip)]
    pub records: Vec<SaturnRecord>,
}

/// Counts trials of the real ensemble where the largest real eigenvalue,
/// the largest non-real modulus, or both reach `threshold`.
pub fn saturn_counts(n: u64, threshold: f64, cfg: &McConfig) -> Result<SaturnCounts> {
    cfg.check()?;
    if !(threshold > 1.0 && threshold.is_finite() || threshold == f64::INFINITY) {
        return Err(Error::invalid(format!(
            "threshold must exceed 1, got {threshold}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let records = run_trials(cfg.trials, cfg.workers, |i| {
        let s = sample_spectrum(Beta::Real, n as usize, SeedSpec::new(cfg.master_seed, i))?;
        let e = extremal_stats(&s);
        Ok(SaturnRecord {
            trial: i,
            real_max: e.real_max,
            complex_max_modulus: e.complex_max_modulus,
            rightmost: e.rightmost,
        })
    })?;
    let hit = |v: Option<f64>| matches!(v, Some(x) if x >= threshold);
    let (mut r, mut c, mut b) = (0, 0, 0);
    for rec in &records {
        let (hr, hc) = (hit(rec.real_max), hit(rec.complex_max_modulus));
        r += hr as u64;
        c += hc as u64;
        b += (hr && hc) as u64;
    }
    Ok(SaturnCounts {
        n,
        threshold,
        trials: cfg.trials,
        real_exceed: r,
        complex_exceed: c,
        both: b,
        records,
    })
}

/// Mean and standard error of the number of real eigenvalues.
pub fn mean_real_count(n: u64, cfg: &McConfig) -> Result<(f64, f64)> {
    cfg.check()?;
    let counts = run_trials(cfg.trials, cfg.workers, |i| {
        let s = sample_spectrum(Beta::Real, n as usize, SeedSpec::new(cfg.master_seed, i))?;
        Ok(s.real_eigs.len() as f64)
    })?;
    Ok(stats::mean_and_se(&counts))
}

/// Mean and standard error of the number of complex-ensemble eigenvalues
/// with `|σ| >= t`, from Kostlan moduli.
pub fn mean_radius_count(n: u64, t: f64, cfg: &McConfig) -> Result<(f64, f64)> {
    cfg.check()?;
    let counts = run_trials(cfg.trials, cfg.workers, |i| {
        let m =
            crate::sampling::kostlan_sample_moduli(n as usize, SeedSpec::new(cfg.master_seed, i))?;
        Ok(m.iter().filter(|&&r| r >= t).count() as f64)
    })?;
    Ok(stats::mean_and_se(&counts))
}

#[cfg(test)]
mod tests;
