use serde::Serialize;

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Counts below this (in either hits or misses) use the Wilson interval.
const WILSON_BELOW: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    Wilson,
    Normal,
}

/// Frequency estimate of a probability with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbEstimate {
    pub hits: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
    pub method: CiMethod,
}

impl ProbEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Result<Self> {
        if trials == 0 || hits > trials {
            return Err(Error::invalid(format!(
                "need 0 <= hits <= trials and trials > 0, got {hits}/{trials}"
            )));
        }
        let n = trials as f64;
        let p = hits as f64 / n;
        let z2 = Z95 * Z95;
        let (ci95, method) = if hits < WILSON_BELOW || trials - hits < WILSON_BELOW {
            let denom = 1.0 + z2 / n;
            let centre = (p + z2 / (2.0 * n)) / denom;
            let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
            // the Wilson interval always contains p; guard rounding at the ends
            (
                (
                    0f64.max(centre - half).min(p),
                    1f64.min(centre + half).max(p),
                ),
                CiMethod::Wilson,
            )
        } else {
            let half = Z95 * (p * (1.0 - p) / n).sqrt();
            (((p - half).max(0.0), (p + half).min(1.0)), CiMethod::Normal)
        };
        Ok(ProbEstimate {
            hits,
            trials,
            p_hat: p,
            ci95,
            method,
        })
    }

    /// Binomial standard error at `p_hat`.
    pub fn se(&self) -> f64 {
        (self.p_hat * (1.0 - self.p_hat) / self.trials as f64).sqrt()
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci95.0 <= p && p <= self.ci95.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wilson_reference() {
        // statsmodels proportion_confint(3, 100, method="wilson")
        let e = ProbEstimate::from_counts(3, 100).unwrap();
        assert_eq!(e.method, CiMethod::Wilson);
        assert!(
            (e.ci95.0 - 0.010_254_524_024_038_91).abs() < 1e-12,
            "{:?}",
            e.ci95
        );
        assert!((e.ci95.1 - 0.084_519_364_290_527_63).abs() < 1e-12);
        let z = ProbEstimate::from_counts(0, 1000).unwrap();
        assert_eq!(z.ci95.0, 0.0);
        assert!(z.ci95.1 > 0.0);
    }

    #[test]
    fn normal_branch() {
        let e = ProbEstimate::from_counts(500, 1000).unwrap();
        assert_eq!(e.method, CiMethod::Normal);
        let half = Z95 * (0.25f64 / 1000.0).sqrt();
        assert!((e.ci95.1 - 0.5 - half).abs() < 1e-15);
        assert!(ProbEstimate::from_counts(5, 0).is_err());
        assert!(ProbEstimate::from_counts(5, 4).is_err());
    }

    proptest! {
        #[test]
        fn interval_contains_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
            let hits = (frac * trials as f64).round() as u64;
            let e = ProbEstimate::from_counts(hits, trials).unwrap();
            prop_assert!(0.0 <= e.ci95.0 && e.ci95.0 <= e.p_hat && e.p_hat <= e.ci95.1 && e.ci95.1 <= 1.0);
            prop_assert_eq!(e.p_hat, hits as f64 / trials as f64);
        }
    }
}
