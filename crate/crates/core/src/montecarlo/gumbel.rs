//! Gumbel-limit comparisons for the edge statistics.

use serde::Serialize;

use super::{run_trials, sample_statistic, stats, McConfig, Route};
use crate::deviation::{centering, gumbel_cdf_limit, Beta, CenteringKind, CenteringSequence};
use crate::error::{Error, Result};
use crate::exact_tails::{kostlan_log_cdf, Statistic, TailQuery};
use crate::sampling::SeedSpec;
use crate::specfun::ln_1m_exp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GumbelMode {
    /// Kostlan product CDF on a grid; complex radius only.
    ExactCdf,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    /// `1 + sqrt(γ_n/4n)` and `1/sqrt(4nγ_n)`.
    Sequence,
    /// Location and scale fitted to the law.
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GumbelRow {
    pub grid_t: f64,
    pub empirical_or_exact_cdf: f64,
    pub limit_cdf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GumbelCheck {
    pub n: u64,
    pub ensemble: Beta,
    pub statistic: Statistic,
    pub mode: GumbelMode,
    /// Sample size in MC mode.
    pub trials: Option<u64>,
    /// Centering behind `ks_stat`.
    pub centering: Centering,
    /// Radius `γ_n`, used as the reference coordinates in every mode.
    pub gamma: f64,
    /// Sequence-centered distance for the radius, fitted distance for the
    /// rightmost eigenvalue.
    pub ks_stat: f64,
    pub raw_ks: Option<f64>,
    pub fitted_ks: f64,
    /// Fitted law: statistic ≈ `location_fit + scale_fit · G`.
    pub location_fit: f64,
    pub scale_fit: f64,
    /// `4n (location_fit - 1)²`, the centering constant implied by the fit.
    pub implied_gamma: f64,
    /// `scale_fit · sqrt(4n implied_gamma)`; 1 when the fitted scale matches
    /// the one implied by the fitted location.
    pub scale_ratio: f64,
    #[serde(skip)]
    pub rows: Vec<GumbelRow>,
}

/// Default grid of scaled offsets, `[-5, 15]` in steps of `0.025`.
pub fn default_grid() -> Vec<f64> {
    (0..=800).map(|i| -5.0 + 0.025 * i as f64).collect()
}

fn limit_beta(ensemble: Beta, statistic: Statistic) -> Result<Beta> {
    match statistic {
        Statistic::Radius | Statistic::Rightmost => Ok(ensemble),
        _ => Err(Error::invalid(format!(
            "gumbel comparison covers radius and rightmost, not {statistic}"
        ))),
    }
}

/// Minimises `objective(a, ln b)` by a coarse scan followed by a
/// Hooke-Jeeves pattern search.
fn pattern_search(objective: impl Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let mut best = (0.0, 0.0, objective(0.0, 0.0));
    for i in -16..=16 {
        for j in -10..=10 {
            let (a, lb) = (0.25 * i as f64, 0.1 * j as f64);
            let v = objective(a, lb);
            if v < best.2 {
                best = (a, lb, v);
            }
        }
    }
    let mut step = 0.125;
    while step > 1e-7 {
        let mut moved = false;
        for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = objective(best.0 + da, best.1 + db);
            if v < best.2 {
                best = (best.0 + da, best.1 + db, v);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

fn fitted_summary(c: &CenteringSequence, a: f64, ln_b: f64) -> (f64, f64, f64, f64) {
    let loc = c.location() + a * c.scale();
    let scale = ln_b.exp() * c.scale();
    let n = c.n as f64;
    let implied_gamma = 4.0 * n * (loc - 1.0).powi(2);
    let ratio = scale * (4.0 * n * implied_gamma).sqrt();
    (loc, scale, implied_gamma, ratio)
}

/// Compares the law of `(stat - 1 - sqrt(γ_n/4n)) sqrt(4nγ_n)` with
/// `exp(-(β/2) e^{-t})` on `grid`.
///
/// The rightmost eigenvalue has no usable centering sequence at reachable
/// `n`, so its distance is reported after fitting location and scale.
pub fn gumbel_check(
    ensemble: Beta,
    statistic: Statistic,
    n: u64,
    mode: GumbelMode,
    grid: &[f64],
    mc: Option<&McConfig>,
) -> Result<GumbelCheck> {
    let beta = limit_beta(ensemble, statistic)?;
    if n < 200 {
        return Err(Error::invalid(format!(
            "gumbel comparison needs n >= 200, got {n}"
        )));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(
            "grid must be strictly increasing with two or more points",
        ));
    }
    let c = centering(CenteringKind::Radius, n)?;
    let limit = |s: f64| gumbel_cdf_limit(beta, s);
    match mode {
        GumbelMode::ExactCdf => {
            if ensemble != Beta::Complex || statistic != Statistic::Radius {
                return Err(Error::invalid(
                    "exact_cdf mode needs the complex-ensemble radius",
                ));
            }
            let cdf = grid
                .iter()
                .map(|&s| kostlan_log_cdf(n, c.location() + c.scale() * s).map(f64::exp))
                .collect::<Result<Vec<_>>>()?;
            let dist = |a: f64, ln_b: f64| {
                let b = ln_b.exp();
                grid.iter()
                    .zip(&cdf)
                    .map(|(&s, &f)| (f - limit((s - a) / b)).abs())
                    .fold(0.0, f64::max)
            };
            let raw = dist(0.0, 0.0);
            let (a, lb, fitted) = pattern_search(dist);
            let (location_fit, scale_fit, implied_gamma, scale_ratio) = fitted_summary(&c, a, lb);
            let rows = grid
                .iter()
                .zip(&cdf)
                .map(|(&s, &f)| GumbelRow {
                    grid_t: s,
                    empirical_or_exact_cdf: f,
                    limit_cdf: limit(s),
                })
                .collect();
            Ok(GumbelCheck {
                n,
                ensemble,
                statistic,
                mode,
                trials: None,
                centering: Centering::Sequence,
                gamma: c.gamma,
                ks_stat: raw,
                raw_ks: Some(raw),
                fitted_ks: fitted,
                location_fit,
                scale_fit,
                implied_gamma,
                scale_ratio,
                rows,
            })
        }
        GumbelMode::Mc => {
            let cfg = mc.ok_or_else(|| Error::invalid("mc mode needs a trial budget"))?;
            if cfg.trials < 2 {
                return Err(Error::invalid("mc mode needs at least two trials"));
            }
            let q = TailQuery::new(ensemble, statistic, n, 1.0)?;
            let route = if ensemble == Beta::Complex && statistic == Statistic::Radius {
                Route::Kostlan
            } else {
                Route::Matrix
            };
            let draws = run_trials(cfg.trials, cfg.workers, |i| {
                sample_statistic(&q, route, SeedSpec::new(cfg.master_seed, i))
            })?;
            let mut s: Vec<f64> = draws
                .into_iter()
                .map(|v| (v.unwrap_or(f64::NAN) - c.location()) / c.scale())
                .collect();
            if s.iter().any(|x| !x.is_finite()) {
                return Err(Error::numerical("non-finite statistic in a trial", None));
            }
            s.sort_by(f64::total_cmp);
            let dist = |a: f64, ln_b: f64| {
                let b = ln_b.exp();
                stats::ks_one_sample(&s, |x| limit((x - a) / b))
            };
            let raw = (statistic == Statistic::Radius).then(|| dist(0.0, 0.0));
            let (a, lb, fitted) = pattern_search(dist);
            let (location_fit, scale_fit, implied_gamma, scale_ratio) = fitted_summary(&c, a, lb);
            let m = s.len() as f64;
            let rows = grid
                .iter()
                .map(|&t| GumbelRow {
                    grid_t: t,
                    empirical_or_exact_cdf: s.partition_point(|&x| x <= t) as f64 / m,
                    limit_cdf: limit(t),
                })
                .collect();
            Ok(GumbelCheck {
                n,
                ensemble,
                statistic,
                mode,
                trials: Some(cfg.trials),
                centering: if raw.is_some() {
                    Centering::Sequence
                } else {
                    Centering::Fitted
                },
                gamma: c.gamma,
                ks_stat: raw.unwrap_or(fitted),
                raw_ks: raw,
                fitted_ks: fitted,
                location_fit,
                scale_fit,
                implied_gamma,
                scale_ratio,
                rows,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GumbelTailRow {
    pub s: f64,
    /// `-ln(1 - F_n)` at radius `1 + sqrt(γ_n/4n) + s/sqrt(4nγ_n)`.
    pub minus_log_survival: f64,
    /// `s`, the limit value of `-ln(1 - exp(-e^{-s}))` for large `s`.
    pub prediction: f64,
    /// `minus_log_survival >= s - 1`: the tail is at most `e · e^{-s}`.
    pub one_sided_ok: bool,
    /// `|minus_log_survival - s| <= 1`.
    pub two_sided_ok: bool,
}

/// Exponential-tail profile of the exact complex-radius law.
pub fn gumbel_tail_profile(n: u64, s_grid: &[f64]) -> Result<Vec<GumbelTailRow>> {
    let c = centering(CenteringKind::Radius, n)?;
    s_grid
        .iter()
        .map(|&s| {
            let ln_f = kostlan_log_cdf(n, c.location() + c.scale() * s)?;
            let m = -ln_1m_exp(ln_f.min(0.0));
            Ok(GumbelTailRow {
                s,
                minus_log_survival: m,
                prediction: s,
                one_sided_ok: m >= s - 1.0,
                two_sided_ok: (m - s).abs() <= 1.0,
            })
        })
        .collect()
}
