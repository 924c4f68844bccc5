//! Globally adaptive Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a fixed 20-point rule and again on its two
//! halves; the difference is the panel's error estimate. The panel with the
//! largest estimate is split until the total meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 20;
const MAX_PANELS: usize = 20_000;

/// Nodes and weights on `[-1, 1]`, from Newton iteration on `P_ORDER`.
fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let m = ORDER;
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=m {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        out
    })
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * rule().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the panel error estimates.
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let m = 0.5 * (a + b);
    let coarse = panel(f, a, b);
    let fine = panel(f, a, m) + panel(f, m, b);
    Panel {
        a,
        b,
        value: fine,
        error: (fine - coarse).abs(),
    }
}

/// `∫ f` over the consecutive intervals of `breaks` (at least two points,
/// increasing), to `max(abs_tol, rel_tol |I|)`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quadrature> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("quadrature breakpoints must increase"));
    }
    if breaks.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("quadrature limits must be finite"));
    }
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .map(|w| make_panel(&f, w[0], w[1]))
        .collect();
    let mut value: f64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if !value.is_finite() {
            return Err(Error::numerical("non-finite integrand", None));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            // resum to drop the drift of the running totals
            let value = heap.iter().map(|p| p.value).sum();
            let error = heap.iter().map(|p| p.error).sum();
            return Ok(Quadrature {
                value,
                error,
                panels: heap.len(),
            });
        }
        let rel = if value != 0.0 {
            error / value.abs()
        } else {
            error
        };
        if heap.len() >= MAX_PANELS {
            return Err(Error::numerical(
                format!("quadrature did not converge in {MAX_PANELS} panels"),
                Some(rel),
            ));
        }
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if !(worst.a < m && m < worst.b) {
            return Err(Error::numerical("quadrature panel underflow", Some(rel)));
        }
        let left = make_panel(&f, worst.a, m);
        let right = make_panel(&f, m, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
}

pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quadrature> {
    integrate_pieces(f, &[a, b], rel_tol, abs_tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogQuadrature {
    /// `ln ∫ f`.
    pub ln_value: f64,
    /// Estimated relative error of the integral.
    pub rel_error: f64,
}

/// `ln ∫ exp(log_f)` over `breaks`, for integrands too small (or too large)
/// for `f64`. The integrand is rescaled by its largest sampled value first.
pub fn integrate_log<F: Fn(f64) -> f64>(
    log_f: F,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<LogQuadrature> {
    if breaks.len() < 2 {
        return Err(Error::invalid("quadrature needs at least two breakpoints"));
    }
    let mut peak = f64::NEG_INFINITY;
    for w in breaks.windows(2) {
        for i in 0..=64 {
            let x = w[0] + (w[1] - w[0]) * (i as f64 / 64.0);
            let v = log_f(x);
            if v > peak {
                peak = v;
            }
        }
    }
    if peak == f64::NEG_INFINITY {
        return Ok(LogQuadrature {
            ln_value: f64::NEG_INFINITY,
            rel_error: 0.0,
        });
    }
    let q = integrate_pieces(|x| (log_f(x) - peak).exp(), breaks, rel_tol, 0.0)?;
    Ok(LogQuadrature {
        ln_value: peak + q.value.ln(),
        rel_error: q.error / q.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let r = rule();
        let wsum: f64 = r.iter().map(|p| p.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // ∫ x^38 over [-1, 1] = 2/39
        let m: f64 = r.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_and_peaked() {
        let q = integrate(|x: f64| x.exp(), 0.0, 1.0, 1e-14, 0.0).unwrap();
        assert!((q.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        // narrow Gaussian off-centre
        let s = 1e-3;
        let q = integrate(
            |x: f64| (-(x - 0.3) * (x - 0.3) / (2.0 * s * s)).exp(),
            0.0,
            1.0,
            1e-12,
            0.0,
        )
        .unwrap();
        let exact = s * (2.0 * std::f64::consts::PI).sqrt();
        assert!((q.value / exact - 1.0).abs() < 1e-11, "{}", q.value / exact);
        // integrable endpoint singularity
        let q = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, 1e-10, 0.0).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn log_scaled() {
        // ∫_0^1 e^{-2000 - 50x} dx
        let q = integrate_log(|x| -2000.0 - 50.0 * x, &[0.0, 1.0], 1e-13).unwrap();
        let exact = -2000.0 + ((1.0 - (-50f64).exp()) / 50.0).ln();
        assert!((q.ln_value - exact).abs() < 1e-12);
        let z = integrate_log(|_| f64::NEG_INFINITY, &[0.0, 1.0], 1e-13).unwrap();
        assert_eq!(z.ln_value, f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-8, 0.0).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-8, 0.0).is_err());
        assert!(matches!(
            integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-12, 0.0),
            Err(Error::Numerical { .. })
        ));
    }
}
