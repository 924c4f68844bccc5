use std::cmp::Ordering;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

/// A real number stored as `sign * exp(log_abs)`.
///
/// Zero is represented by `sign == 0` with `log_abs == -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogValue {
    log_abs: f64,
    sign: i8,
}

/// `ln(e^a + e^b)` without overflow.
#[inline]
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if hi == f64::INFINITY {
        return f64::INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 - e^l)` for `l <= 0`, accurate at both ends.
#[inline]
pub fn ln_1m_exp(l: f64) -> f64 {
    if l > -std::f64::consts::LN_2 {
        (-l.exp_m1()).ln()
    } else {
        (-l.exp()).ln_1p()
    }
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogValue = LogValue {
        log_abs: 0.0,
        sign: 1,
    };

    /// Positive value `exp(log_abs)`; `-inf` gives zero.
    pub fn from_ln(log_abs: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { log_abs, sign: 1 }
        }
    }

    pub fn from_signed_ln(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                log_abs,
                sign: sign.signum(),
            }
        }
    }

    pub fn new(value: f64) -> Self {
        if value == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                log_abs: value.abs().ln(),
                sign: if value > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Natural log of a nonnegative value (`-inf` for zero, NaN if negative).
    pub fn ln(&self) -> f64 {
        match self.sign {
            0 => f64::NEG_INFINITY,
            1 => self.log_abs,
            _ => f64::NAN,
        }
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn abs(self) -> Self {
        LogValue::from_ln(self.log_abs)
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k % 2 == 0 {
            self.sign.abs()
        } else {
            self.sign
        };
        LogValue::from_signed_ln(sign, self.log_abs * f64::from(k))
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            log_abs: self.log_abs,
            sign: -self.sign,
        }
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (hi, lo) = match self.log_abs.partial_cmp(&rhs.log_abs) {
            Some(Ordering::Less) => (rhs, self),
            _ => (self, rhs),
        };
        let d = lo.log_abs - hi.log_abs;
        if hi.sign == lo.sign {
            LogValue {
                log_abs: hi.log_abs + d.exp().ln_1p(),
                sign: hi.sign,
            }
        } else if d == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                log_abs: hi.log_abs + ln_1m_exp(d),
                sign: hi.sign,
            }
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::from_signed_ln(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(rhs.sign != 0, "LogValue division by zero");
        LogValue::from_signed_ln(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

impl Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> Self {
        iter.fold(LogValue::ZERO, |acc, x| acc + x)
    }
}
