use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln(1 + x) - x` for `x > -1`, without cancellation near zero.
pub fn log1pmx(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // -x^2/2 + x^3/3 - x^4/4 + ...
        let mut pow = x * x;
        let mut sum = -0.5 * pow;
        let mut k = 3.0;
        loop {
            pow *= -x;
            let term = -pow / k;
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() || k > 80.0 {
                break;
            }
            k += 1.0;
        }
        sum
    } else {
        x.ln_1p() - x
    }
}

/// `ln Γ(a) - [(a - 1/2) ln a - a + ln √(2π)]` for `a >= 10`.
pub fn stirling_tail(a: f64) -> f64 {
    debug_assert!(a >= 10.0);
    let r = 1.0 / a;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0
                    + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 / 156.0))))))
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_tail(x);
    }
    if x == x.trunc() {
        // (x-1)! is exact in f64 here
        let mut fact = 1.0;
        let mut k = 2.0;
        while k < x {
            fact *= k;
            k += 1.0;
        }
        return fact.ln();
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < 10.0 {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma(shifted) - prod.ln()
}

/// `ln[x^a e^{-x} / Γ(a + 1)]`, the log Poisson weight, for `a >= 0`, `x >= 0`.
///
/// For large `a` the leading terms are combined through [`log1pmx`], so the
/// result keeps full relative accuracy even when `a ln x` and `x` are both
/// of order 10^7.
pub fn log_poisson(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if a == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if a == 0.0 {
        return -x;
    }
    if a >= 10.0 {
        let delta = (x - a) / a;
        a * log1pmx(delta) - 0.5 * (2.0 * PI * a).ln() - stirling_tail(a)
    } else {
        a * x.ln() - x - ln_gamma(a + 1.0)
    }
}
