//! One-point intensities of the Ginibre eigenvalue processes and their
//! certified integrals over the regions `|z| >= t` and `Re z >= t`.
//!
//! Conventions: `K_n` is the complex-ensemble intensity per unit area;
//! `S^{C,C}_n` is the real-ensemble intensity of eigenvalues in the open
//! upper half plane (so complex eigenvalues in a conjugation-symmetric
//! region are counted by twice its upper-half integral); `S^{R,R}_n` is the
//! intensity of real eigenvalues per unit length.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::deviation::edge_exponent;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_log, integrate_pieces};
use crate::specfun::{erfcx, ln_add_exp, ln_gamma, log_poisson, reg_gamma_ln, LogValue};

/// Truncation target: neglected tail mass relative to the computed value.
const TRUNCATION_REL: f64 = 1e-16;
const OUTER_REL_TOL: f64 = 1e-12;
const INNER_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint { re, im }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Plane(ComplexPoint),
    Line(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntensityValue {
    pub at: Location,
    pub value: LogValue,
}

fn check_n(n: u64, min: u64) -> Result<()> {
    if n < min {
        return Err(Error::invalid(format!("kernel needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// `ln Q(a, x)`.
fn ln_q(a: f64, x: f64) -> Result<f64> {
    Ok(reg_gamma_ln(a, x)?.ln_q)
}

/// `ln K_n(r)` as a function of the modulus.
fn ln_k_complex(n: u64, r: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(nf.ln() - PI.ln() + ln_q(nf, nf * r * r)?)
}

/// Diagonal of the complex-ensemble kernel, `(n/π) e^{-n|z|²} 𝔢_{n-1}(n|z|²)
/// = (n/π) Q(n, n|z|²)`.
pub fn k_complex(n: u64, z: ComplexPoint) -> Result<IntensityValue> {
    check_n(n, 1)?;
    if !z.is_finite() {
        return Err(Error::invalid("kernel point must be finite"));
    }
    Ok(IntensityValue {
        at: Location::Plane(z),
        value: LogValue::from_ln(ln_k_complex(n, z.abs())?),
    })
}

/// `√2 n^{3/2} y erfcx(√(2n) y) / √π` for `y >= 0`; bounded by `n/π`.
fn scc_transverse(n: f64, y: f64) -> f64 {
    (2.0 / PI).sqrt() * n * n.sqrt() * y * erfcx((2.0 * n).sqrt() * y)
}

/// Upper-half-plane intensity of complex eigenvalues of the real ensemble.
pub fn s_complex_real_ensemble(n: u64, z: ComplexPoint) -> Result<IntensityValue> {
    check_n(n, 2)?;
    if !z.is_finite() {
        return Err(Error::invalid("kernel point must be finite"));
    }
    if z.im == 0.0 {
        return Err(Error::invalid(
            "S^CC is defined off the real axis; use s_real_real_ensemble",
        ));
    }
    let nf = n as f64;
    let r2 = z.re * z.re + z.im * z.im;
    let ln = scc_transverse(nf, z.im.abs()).ln() + ln_q(nf - 1.0, nf * r2)?;
    Ok(IntensityValue {
        at: Location::Plane(z),
        value: LogValue::from_ln(ln),
    })
}

/// The two terms of `ln S^{R,R}_n(x)`.
fn ln_srr_terms(n: u64, x: f64) -> Result<(f64, f64)> {
    let nf = n as f64;
    let a = 0.5 * nf;
    let y = nf * x * x;
    let first = 0.5 * (nf / (2.0 * PI)).ln() + ln_q(nf - 1.0, y)?;
    // (n/2)^{n/2} |x|^{n-1} e^{-n x²/2} / Γ(n/2) · P((n-1)/2, n x²/2)
    let second = if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        log_poisson(a, 0.5 * y) + a.ln() - x.abs().ln() + reg_gamma_ln(a - 0.5, 0.5 * y)?.ln_p
    };
    Ok((first, second))
}

/// Intensity of real eigenvalues of the real ensemble, per unit length.
pub fn s_real_real_ensemble(n: u64, x: f64) -> Result<IntensityValue> {
    check_n(n, 3)?;
    if !x.is_finite() {
        return Err(Error::invalid("kernel point must be finite"));
    }
    let (a, b) = ln_srr_terms(n, x)?;
    Ok(IntensityValue {
        at: Location::Line(x),
        value: LogValue::from_ln(ln_add_exp(a, b)),
    })
}

/// Region of the plane (or line) over which an intensity is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `|z| >= t`, or `|x| >= t` on the line.
    Outside(f64),
    /// `Re z >= t`, or `x >= t` on the line.
    RightOf(f64),
}

impl Region {
    fn threshold(self) -> f64 {
        match self {
            Region::Outside(t) | Region::RightOf(t) => t,
        }
    }

    fn check(self) -> Result<()> {
        let t = self.threshold();
        match self {
            Region::Outside(t) if t.is_finite() && t >= 0.0 => Ok(()),
            Region::RightOf(t) if t.is_finite() && t > 0.0 => Ok(()),
            _ => Err(Error::invalid(format!(
                "region threshold out of scope: {t} (need t >= 0 for |z| >= t, t > 0 for Re z >= t)"
            ))),
        }
    }
}

/// A certified kernel integral: quadrature over `[t, r_max]` plus a
/// rigorous bound on the neglected mass beyond `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIntegral {
    pub value: LogValue,
    /// Estimated relative quadrature error.
    pub quad_rel_error: f64,
    /// `ln` of the bound on the mass beyond `r_max`.
    pub ln_truncation: f64,
    pub r_max: f64,
}

impl KernelIntegral {
    /// Relative size of the truncation bound.
    pub fn truncation_rel(&self) -> f64 {
        (self.ln_truncation - self.value.ln()).exp()
    }

    /// Total relative error bound (quadrature estimate plus truncation).
    pub fn rel_error_bound(&self) -> f64 {
        self.quad_rel_error + self.truncation_rel()
    }

    fn zero() -> Self {
        KernelIntegral {
            value: LogValue::ZERO,
            quad_rel_error: 0.0,
            ln_truncation: f64::NEG_INFINITY,
            r_max: f64::INFINITY,
        }
    }

    fn add(self, other: KernelIntegral) -> KernelIntegral {
        let value = self.value + other.value;
        let w = |k: &KernelIntegral| {
            if k.value.is_zero() {
                0.0
            } else {
                (k.value.ln() - value.ln()).exp()
            }
        };
        KernelIntegral {
            value,
            quad_rel_error: w(&self) * self.quad_rel_error + w(&other) * other.quad_rel_error,
            ln_truncation: ln_add_exp(self.ln_truncation, other.ln_truncation),
            r_max: self.r_max.max(other.r_max),
        }
    }

    fn scale_ln(self, ln_c: f64) -> KernelIntegral {
        KernelIntegral {
            value: LogValue::from_ln(self.value.ln() + ln_c),
            ln_truncation: self.ln_truncation + ln_c,
            ..self
        }
    }
}

/// `ln [R² e^{-nφ(R)} / (2n (R²-1)²)]`: upper bound on
/// `∫_R^∞ r/(r²-1) e^{-nφ(r)} dr` for `R > 1`.
pub(crate) fn ln_ibp_radial_upper(n: f64, r: f64) -> f64 {
    2.0 * r.ln() - n * phi(r) - (2.0 * n).ln() - 2.0 * (r * r - 1.0).ln()
}

/// `ln [R e^{-nφ(R)} / (2n (R²-1)²)]`: upper bound on
/// `∫_R^∞ 1/(r²-1) e^{-nφ(r)} dr` for `R > 1`.
pub(crate) fn ln_ibp_inverse_upper(n: f64, r: f64) -> f64 {
    r.ln() - n * phi(r) - (2.0 * n).ln() - 2.0 * (r * r - 1.0).ln()
}

/// `ln [e^{-(n/2)φ(R)} / (n (R²-1))]`: upper bound on
/// `∫_R^∞ (1/x) e^{-(n/2)φ(x)} dx` for `R > 1`.
pub(crate) fn ln_ibp_half_upper(n: f64, r: f64) -> f64 {
    -0.5 * n * phi(r) - n.ln() - (r * r - 1.0).ln()
}

/// `φ(r) = r² - 2 ln r`.
pub(crate) fn phi(r: f64) -> f64 {
    edge_exponent(r) + 1.0
}

/// Breakpoints from `lo` to `hi` with extra nodes around the edge `r = 1`.
fn edge_breaks(lo: f64, hi: f64, n: f64) -> Vec<f64> {
    let w = 1.0 / n.sqrt();
    let mut b = vec![lo];
    for x in [
        1.0 - 8.0 * w,
        1.0 - 2.0 * w,
        1.0,
        1.0 + 2.0 * w,
        1.0 + 8.0 * w,
    ] {
        if x > lo && x < hi {
            b.push(x);
        }
    }
    b.push(hi);
    b
}

/// Certified `∫_t^∞ exp(log_f(r)) dr`.
///
/// `ln_tail(R)` must bound `ln ∫_R^∞ exp(log_f)` for every `R > 1`. With
/// `sqrt_sub` the variable `r = t + u²` absorbs an inverse square-root
/// behaviour at `r = t`.
fn certified_tail<F, C>(
    log_f: F,
    ln_tail: C,
    t: f64,
    n: f64,
    sqrt_sub: bool,
) -> Result<KernelIntegral>
where
    F: Fn(f64) -> f64,
    C: Fn(f64) -> f64,
{
    let run = |r_max: f64| -> Result<(f64, f64)> {
        let breaks = edge_breaks(t, r_max, n);
        let q = if sqrt_sub {
            let ub: Vec<f64> = breaks.iter().map(|&b| (b - t).sqrt()).collect();
            integrate_log(
                |u| {
                    if u <= 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        log_f(t + u * u) + (2.0 * u).ln()
                    }
                },
                &ub,
                OUTER_REL_TOL,
            )?
        } else {
            integrate_log(&log_f, &breaks, OUTER_REL_TOL)?
        };
        Ok((q.ln_value, q.rel_error))
    };
    let w = 1.0 / n.sqrt();
    let mut r_max = t.max(1.0) + (10.0 * w).max(0.1);
    let (ln_first, _) = run(r_max)?;
    if ln_first == f64::NEG_INFINITY {
        return Ok(KernelIntegral::zero());
    }
    // Push r_max out until the tail certificate is negligible relative to
    // the mass already found (which only grows as r_max increases).
    let target = ln_first + TRUNCATION_REL.ln();
    let mut guard = 0;
    while ln_tail(r_max) > target {
        r_max = 1.0 + (r_max - 1.0) * 1.25;
        guard += 1;
        if guard > 200 {
            return Err(Error::numerical(
                "kernel tail certificate did not close",
                Some((ln_tail(r_max) - ln_first).exp()),
            ));
        }
    }
    let (ln_value, rel) = run(r_max)?;
    Ok(KernelIntegral {
        value: LogValue::from_ln(ln_value),
        quad_rel_error: rel,
        ln_truncation: ln_tail(r_max),
        r_max,
    })
}

/// `ln [2 n^n / (n-1)!] + integration by parts`: bound on `∫_R^∞ 2π r K_n(r) dr`.
///
/// From `Q(n, u) <= [u^{n-1} e^{-u}/(n-1)!] · u/(u-n+1)` for `u > n-1`.
fn ln_complex_radial_tail(n: f64, r: f64) -> f64 {
    LN_2 + n * n.ln() - ln_gamma(n) + ln_ibp_radial_upper(n, r)
}

/// Expected number of complex-ensemble eigenvalues in `region`.
pub fn complex_count(n: u64, region: Region) -> Result<KernelIntegral> {
    check_n(n, 1)?;
    region.check()?;
    let nf = n as f64;
    let tail = |r: f64| ln_complex_radial_tail(nf, r);
    match region {
        Region::Outside(t) => certified_tail(
            |r| (2.0 * PI * r).ln() + ln_k_complex(n, r).unwrap_or(f64::NAN),
            tail,
            t,
            nf,
            false,
        ),
        Region::RightOf(t) => certified_tail(
            |r| (2.0 * (t / r).min(1.0).acos() * r).ln() + ln_k_complex(n, r).unwrap_or(f64::NAN),
            tail,
            t,
            nf,
            true,
        ),
    }
}

/// `∫_0^{θ_max} scc_transverse(r sin θ) dθ`.
fn scc_angular(n: f64, r: f64, theta_max: f64) -> Result<f64> {
    if theta_max <= 0.0 || r == 0.0 {
        return Ok(0.0);
    }
    let g = |th: f64| scc_transverse(n, r * th.sin());
    // the transverse profile saturates once r sin θ exceeds a few n^{-1/2}
    let mut breaks = vec![0.0];
    for c in [1.0, 4.0] {
        let s = c / (n.sqrt() * r);
        if s < 1.0 {
            let th = s.asin();
            if th < theta_max {
                breaks.push(th);
            }
            if theta_max > PI / 2.0 && PI - th < theta_max && PI - th > PI / 2.0 {
                breaks.push(PI - th);
            }
        }
    }
    breaks.push(theta_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(integrate_pieces(g, &breaks, INNER_REL_TOL, 0.0)?.value)
}

/// Expected number of non-real eigenvalues of the real ensemble in the
/// (conjugation-symmetric) `region`: twice the upper-half-plane integral of
/// `S^{C,C}`.
pub fn real_ensemble_complex_count(n: u64, region: Region) -> Result<KernelIntegral> {
    check_n(n, 2)?;
    region.check()?;
    let nf = n as f64;
    // transverse factor <= n/π over an angle <= π, then as for K_{n-1} with
    // Q(n-1, u) <= [u^{n-2} e^{-u}/(n-2)!] · u/(u-n+2), then integration by parts
    let tail =
        |r: f64| LN_2 + (nf - 1.0) * nf.ln() - ln_gamma(nf - 1.0) + ln_ibp_inverse_upper(nf, r);
    let t = region.threshold();
    let theta_max = |r: f64| match region {
        Region::Outside(_) => PI,
        Region::RightOf(t) => (t / r).min(1.0).acos(),
    };
    let log_f = |r: f64| {
        let q = ln_q(nf - 1.0, nf * r * r).unwrap_or(f64::NAN);
        let a = scc_angular(nf, r, theta_max(r)).unwrap_or(f64::NAN);
        LN_2 + r.ln() + a.ln() + q
    };
    certified_tail(log_f, tail, t, nf, matches!(region, Region::RightOf(_)))
}

/// Expected number of real eigenvalues of the real ensemble in `region`
/// (`|x| >= t` or `x >= t`).
pub fn real_ensemble_real_count(n: u64, region: Region) -> Result<KernelIntegral> {
    check_n(n, 3)?;
    region.check()?;
    let nf = n as f64;
    let a = 0.5 * nf;
    let tail = |r: f64| {
        // first term: Q(n-1, n x²) <= n^{n-2}/(n-2)! · e^{-nφ}/(x²-1), then integration by parts
        let first = 0.5 * (nf / (2.0 * PI)).ln() + (nf - 2.0) * nf.ln() - ln_gamma(nf - 1.0)
            + ln_ibp_inverse_upper(nf, r);
        // second term: <= (a^a/Γ(a)) e^{-aφ(x)}/x, then integration by parts
        let second = a * a.ln() - ln_gamma(a) + ln_ibp_half_upper(nf, r);
        ln_add_exp(first, second)
    };
    let log_f = |x: f64| {
        let (p, q) = ln_srr_terms(n, x).unwrap_or((f64::NAN, f64::NAN));
        ln_add_exp(p, q)
    };
    let half = certified_tail(log_f, tail, region.threshold(), nf, false)?;
    Ok(match region {
        Region::Outside(_) => half.scale_ln(LN_2),
        Region::RightOf(_) => half,
    })
}

/// Expected count of all real-ensemble eigenvalues in `region`.
pub fn real_ensemble_count(n: u64, region: Region) -> Result<KernelIntegral> {
    Ok(real_ensemble_complex_count(n, region)?.add(real_ensemble_real_count(n, region)?))
}

/// Expected number of real eigenvalues of an `n x n` real Ginibre matrix.
pub fn expected_real_eigenvalues(n: u64) -> Result<f64> {
    Ok(real_ensemble_real_count(n, Region::Outside(0.0))?
        .value
        .value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn k_complex_examples() {
        let v = k_complex(1, ComplexPoint::new(0.0, 0.0))
            .unwrap()
            .value
            .value();
        assert!(rel(v, 1.0 / PI) < 1e-15);
        let v = k_complex(50, ComplexPoint::new(0.5, 0.0))
            .unwrap()
            .value
            .value();
        assert!(rel(v, 50.0 / PI) < 0.01);
        // mpmath: (50/π) Q(50, 12.5)
        assert!(rel(v, 15.915_494_309_189_515) < 1e-14, "{v}");
        let a = k_complex(50, ComplexPoint::new(0.3, 0.4))
            .unwrap()
            .value
            .ln();
        let b = k_complex(50, ComplexPoint::new(0.5, 0.0))
            .unwrap()
            .value
            .ln();
        assert!((a - b).abs() < 1e-13);
        assert!(k_complex(0, ComplexPoint::new(0.0, 0.0)).is_err());
        assert!(k_complex(3, ComplexPoint::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn scc_examples() {
        // mpmath, with the erfc factor evaluated directly
        let v = s_complex_real_ensemble(100, ComplexPoint::new(0.5, 0.5)).unwrap();
        assert!(rel(v.value.value(), 31.521_781_251_492_232) < 1e-10);
        let v = s_complex_real_ensemble(200, ComplexPoint::new(1.3, 0.2)).unwrap();
        assert!(rel(v.value.value(), 2.140_065_013_694_823e-16) < 1e-10);
        assert!(s_complex_real_ensemble(10, ComplexPoint::new(0.5, 0.0)).is_err());
        assert!(s_complex_real_ensemble(1, ComplexPoint::new(0.5, 0.1)).is_err());
        // linear vanishing at the real axis
        let n = 100;
        let a = s_complex_real_ensemble(n, ComplexPoint::new(0.2, 1e-6))
            .unwrap()
            .value
            .value();
        let b = s_complex_real_ensemble(n, ComplexPoint::new(0.2, 2e-6))
            .unwrap()
            .value
            .value();
        assert!(rel(b / a, 2.0) < 1e-4);
        let a = s_complex_real_ensemble(n, ComplexPoint::new(0.2, -1e-6))
            .unwrap()
            .value
            .value();
        assert!(a > 0.0 && a < 1e-3);
    }

    #[test]
    fn scc_matches_shifted_complex_kernel_outside_disk() {
        // S^CC ≈ e^{1-|z|²} K_{n-1}(z) when |z| > 1 and √n Im z ≫ 1
        let n = 400u64;
        for (x, y) in [(0.9, 0.9), (1.1, 0.5), (0.3, 1.2)] {
            let z = ComplexPoint::new(x, y);
            let s = s_complex_real_ensemble(n, z).unwrap().value.ln();
            let k = k_complex(n - 1, z).unwrap().value.ln() + 1.0 - x * x - y * y;
            let env = 1.0 / (n as f64 * y * y) + 1.0 / (n as f64).sqrt();
            assert!(
                ((s - k).exp() - 1.0).abs() < env,
                "({x},{y}) {}",
                (s - k).exp()
            );
        }
    }

    #[test]
    fn srr_examples() {
        let v = s_real_real_ensemble(3, 0.0).unwrap().value.value();
        assert!(rel(v, (3.0 / (2.0 * PI)).sqrt()) < 1e-15);
        let a = s_real_real_ensemble(200, 0.7).unwrap().value.ln();
        let b = s_real_real_ensemble(200, -0.7).unwrap().value.ln();
        assert!((a - b).abs() < 1e-13);
        // mpmath
        for (x, want) in [
            (0.0, 5.641_895_835_477_563),
            (1.0, 4.734_410_792_118_942),
            (1.3, 2.036_835_767_432_292_8e-7),
        ] {
            let v = s_real_real_ensemble(200, x).unwrap().value.value();
            assert!(rel(v, want) < 1e-12, "x={x} {v}");
        }
        assert!(s_real_real_ensemble(2, 0.5).is_err());
    }

    #[test]
    fn srr_large_x_shape() {
        // Outside the disk S^RR follows √(π/2n) K_{n-1} e^{1-x²} + x^{-1} √n e^{-(n/2)(φ(x)-1)}
        // up to a constant factor on the second term.
        let n = 200u64;
        let nf = n as f64;
        let gap = |x: f64| {
            let k = k_complex(n - 1, ComplexPoint::new(x, 0.0))
                .unwrap()
                .value
                .ln();
            let first = 0.5 * (PI / (2.0 * nf)).ln() + k + 1.0 - x * x;
            let second = -x.ln() + 0.5 * nf.ln() - 0.5 * nf * edge_exponent(x);
            s_real_real_ensemble(n, x).unwrap().value.ln() - ln_add_exp(first, second)
        };
        let g0 = gap(1.2);
        // the factor is 1/(2√π)
        assert!((g0 + (2.0 * PI.sqrt()).ln()).abs() < 1e-3, "{g0}");
        for x in [1.3, 1.5, 2.0, 3.0] {
            assert!((gap(x) - g0).abs() < 0.1);
        }
    }

    #[test]
    fn complex_mass_is_n() {
        for n in [1u64, 2, 7, 50, 200, 500] {
            let m = complex_count(n, Region::Outside(0.0)).unwrap();
            assert!(rel(m.value.value(), n as f64) < 1e-10, "n={n} {:?}", m);
            assert!(m.truncation_rel() < 1e-15);
        }
    }

    #[test]
    fn complex_tail_closed_forms() {
        let m = complex_count(1, Region::Outside(1.0)).unwrap();
        assert!(rel(m.value.value(), (-1.0f64).exp()) < 1e-12);
        let m = complex_count(2, Region::Outside(1.0)).unwrap();
        assert!(rel(m.value.value(), 4.0 * (-2.0f64).exp()) < 1e-12);
    }

    #[test]
    fn rightmost_half_plane_and_containment() {
        let n = 100u64;
        let m = complex_count(n, Region::RightOf(1e-9)).unwrap();
        assert!((m.value.value() - 50.0).abs() < 1e-6 * 100.0);
        for t in [1.0, 1.1, 1.3] {
            let a = complex_count(n, Region::RightOf(t)).unwrap().value.ln();
            let b = complex_count(n, Region::Outside(t)).unwrap().value.ln();
            assert!(a < b);
        }
        assert!(complex_count(n, Region::RightOf(0.0)).is_err());
        assert!(complex_count(n, Region::Outside(-1.0)).is_err());
    }

    #[test]
    fn real_ensemble_pair_consistency() {
        for n in [3u64, 10, 50] {
            let c = real_ensemble_complex_count(n, Region::Outside(0.0))
                .unwrap()
                .value
                .value();
            let r = real_ensemble_real_count(n, Region::Outside(0.0))
                .unwrap()
                .value
                .value();
            assert!((c + r - n as f64).abs() < 1e-8 * n as f64, "n={n} {c} {r}");
        }
    }

    #[test]
    fn expected_real_counts() {
        // mpmath quadrature of S^RR over the line
        for (n, want) in [
            (50u64, 6.099_529_927_391_100),
            (100, 8.448_906_448_157_276),
            (200, 11.762_627_987_272_299),
        ] {
            let v = expected_real_eigenvalues(n).unwrap();
            assert!(rel(v, want) < 1e-10, "n={n} {v}");
        }
        // odd n: 1 + √2 Σ_{k=1}^{(n-1)/2} (4k-3)!!/(4k-2)!!
        let v = expected_real_eigenvalues(5).unwrap();
        assert!(
            rel(v, 1.0 + 2f64.sqrt() * (0.5 + 15.0 / 48.0)) < 1e-10,
            "{v}"
        );
        let v = expected_real_eigenvalues(3).unwrap();
        assert!(rel(v, 1.0 + 0.5 * 2f64.sqrt()) < 1e-10, "{v}");
    }
}
