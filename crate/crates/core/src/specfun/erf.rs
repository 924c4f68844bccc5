//! Error functions after W. J. Cody's rational Chebyshev approximations
//! (CALERF). The middle and outer intervals approximate `erfcx` directly,
//! so the scaled function never forms `exp(x^2)`.

#![allow(clippy::excessive_precision)]

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const THRESHOLD: f64 = 0.46875;

const A: [f64; 5] = [
    3.1611237438705656,
    113.864154151050156,
    377.485237685302021,
    3209.37758913846947,
    0.185777706184603153,
];
const B: [f64; 4] = [
    23.6012909523441209,
    244.024637934444173,
    1282.61652607737228,
    2844.23683343917062,
];
const C: [f64; 9] = [
    0.564188496988670089,
    8.88314979438837594,
    66.1191906371416295,
    298.635138197400131,
    881.95222124176909,
    1712.04761263407058,
    2051.07837782607147,
    1230.33935479799725,
    2.15311535474403846e-8,
];
const D: [f64; 8] = [
    15.7449261107098347,
    117.693950891312499,
    537.181101862009858,
    1621.38957456669019,
    3290.79923573345963,
    4362.61909014324716,
    3439.36767414372164,
    1230.33935480374942,
];
const P: [f64; 6] = [
    0.305326634961232344,
    0.360344899949804439,
    0.125781726111229246,
    0.0160837851487422766,
    6.58749161529837803e-4,
    0.0163153871373020978,
];
const Q: [f64; 5] = [
    2.56852019228982242,
    1.87295284992346047,
    0.527905102951428412,
    0.0605183413124413191,
    0.00233520497626869185,
];

/// erf(x)/x on |x| <= 0.46875, as a function of z = x^2.
fn small_ratio(z: f64) -> f64 {
    ((((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3])
        / ((((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3])
}

/// erfcx(y) on 0.46875 < y <= 4.
fn mid_erfcx(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

/// erfcx(y) on y > 4.
fn outer_erfcx(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + P[i]) * z;
        den = (den + Q[i]) * z;
    }
    let r = z * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

fn erfcx_positive(y: f64) -> f64 {
    if y <= 4.0 {
        mid_erfcx(y)
    } else {
        outer_erfcx(y)
    }
}

/// `exp(-y^2)` with the square split so the rounding of `y*y` does not
/// leak into the exponent.
fn exp_neg_square(y: f64) -> f64 {
    let yt = (y * 16.0).trunc() / 16.0;
    (-yt * yt).exp() * (-(y - yt) * (y + yt)).exp()
}

fn exp_pos_square(y: f64) -> f64 {
    let yt = (y * 16.0).trunc() / 16.0;
    (yt * yt).exp() * ((y - yt) * (y + yt)).exp()
}

pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return x * small_ratio(y * y);
    }
    let tail = erfcx_positive(y) * exp_neg_square(y);
    if x < 0.0 {
        tail - 1.0
    } else {
        1.0 - tail
    }
}

pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - x * small_ratio(y * y);
    }
    let tail = erfcx_positive(y) * exp_neg_square(y);
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return (y * y).exp() * (1.0 - x * small_ratio(y * y));
    }
    let r = erfcx_positive(y);
    if x < 0.0 {
        if x < -26.628_735_713_751_4 {
            return f64::INFINITY;
        }
        2.0 * exp_pos_square(y) - r
    } else {
        r
    }
}

/// `ln erfc(x)`, finite for every finite `x`.
pub fn ln_erfc(x: f64) -> f64 {
    if x <= THRESHOLD {
        erfc(x).ln()
    } else {
        erfcx_positive(x).ln() - x * x
    }
}
