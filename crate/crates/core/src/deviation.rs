//! Closed-form deviation laws: the rate function, centering sequences, the
//! limiting Gumbel and real-edge tails, and the moderate deviation envelopes.

use std::f64::consts::PI;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::specfun::{ln_add_exp, log1pmx};

/// Dyson index of the ensemble: 1 for real Ginibre, 2 for complex Ginibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beta {
    Real,
    Complex,
}

impl Beta {
    pub fn value(self) -> u8 {
        match self {
            Beta::Real => 1,
            Beta::Complex => 2,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }
}

impl TryFrom<u8> for Beta {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Beta::Real),
            2 => Ok(Beta::Complex),
            _ => Err(Error::invalid(format!("beta must be 1 or 2, got {v}"))),
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEvaluation {
    pub t: f64,
    pub beta: Beta,
    /// Nats per unit `n`; `+inf` below the edge.
    pub rate: f64,
    pub finite: bool,
}

/// `t^2 - 2 ln t - 1`, accurate near `t = 1`.
pub(crate) fn edge_exponent(t: f64) -> f64 {
    let u = t - 1.0;
    if u.abs() < 0.5 {
        u * u - 2.0 * log1pmx(u)
    } else {
        t * t - 2.0 * t.ln() - 1.0
    }
}

/// The rate `I_β(t) = (β/2)(t² - 2 ln t - 1)` for `t >= 1`, `+inf` below.
pub fn rate(beta: Beta, t: f64) -> Result<RateEvaluation> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::invalid(format!("rate needs finite t > 0, got {t}")));
    }
    let rate = if t < 1.0 {
        f64::INFINITY
    } else {
        0.5 * beta.as_f64() * edge_exponent(t)
    };
    Ok(RateEvaluation {
        t,
        beta,
        rate,
        finite: rate.is_finite(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteringKind {
    Radius,
    Rightmost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenteringSequence {
    pub n: u64,
    pub gamma: f64,
    pub kind: CenteringKind,
}

impl CenteringSequence {
    /// Location `1 + sqrt(γ / 4n)` of the edge fluctuations.
    pub fn location(&self) -> f64 {
        1.0 + (self.gamma / (4.0 * self.n as f64)).sqrt()
    }

    /// Fluctuation scale `1 / sqrt(4nγ)`.
    pub fn scale(&self) -> f64 {
        1.0 / (4.0 * self.n as f64 * self.gamma).sqrt()
    }
}

fn centering_value(kind: CenteringKind, n: f64) -> f64 {
    let ln_n = n.ln();
    let lln = ln_n.ln();
    match kind {
        CenteringKind::Radius => ln_n - 2.0 * lln - (2.0 * PI).ln(),
        CenteringKind::Rightmost => 0.5 * (ln_n - 5.0 * lln - (2.0 * PI.powi(4)).ln()),
    }
}

/// `γ_n` (radius) or `γ'_n` (rightmost). Nonpositive values are a regime error.
pub fn centering(kind: CenteringKind, n: u64) -> Result<CenteringSequence> {
    if n < 3 {
        return Err(Error::invalid(format!("centering needs n >= 3, got {n}")));
    }
    let gamma = centering_value(kind, n as f64);
    if gamma <= 0.0 {
        return Err(Error::regime(format!(
            "centering undefined at this n: {kind:?} gamma = {gamma} at n = {n}"
        )));
    }
    Ok(CenteringSequence { n, gamma, kind })
}

/// Limit law `exp(-(β/2) e^{-t})` of the centered and scaled extremal statistic.
pub fn gumbel_cdf_limit(beta: Beta, t: f64) -> f64 {
    (-0.5 * beta.as_f64() * (-t).exp()).exp()
}

/// Limiting right tail `e^{-t²} / (4 √π t)` of the largest real eigenvalue at
/// the threshold `1 + t/√n`.
pub fn real_tail_limit(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!(
            "real tail limit needs t > 0, got {t}"
        )));
    }
    Ok((-t * t).exp() / (4.0 * PI.sqrt() * t))
}

/// Upper end of the default moderate deviation window `d ≪ 1`.
pub const DEFAULT_WINDOW_MAX: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MdpStatistic {
    Radius,
    Rightmost,
    RealMax,
}

/// Which eigenvalues an envelope term accounts for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MdpRoute {
    Complex,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MdpTerm {
    pub route: MdpRoute,
    /// Log of the term without the unknown constant.
    pub log_shape: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdpEnvelope {
    pub beta: Beta,
    pub stat: MdpStatistic,
    pub n: u64,
    pub d: f64,
    pub terms: Vec<MdpTerm>,
    /// `ln C`, applied to every term.
    pub log_constant: f64,
    /// `ln C + ln Σ exp(log_shape)`.
    pub log_bound: f64,
    pub window_ok: bool,
    pub warning: Option<String>,
}

/// `d² + 2d - 2 ln(1 + d)`, the exact exponent integrated in the proof.
pub fn mdp_exponent(d: f64) -> f64 {
    d * d - 2.0 * log1pmx(d)
}

/// Log upper bound on `P(stat >= 1 + d)` from the moderate deviation asymptotics.
///
/// `constant` multiplies every term (its value is not determined by the asymptotics).
pub fn mdp_envelope(
    beta: Beta,
    stat: MdpStatistic,
    n: u64,
    d: f64,
    constant: f64,
) -> Result<MdpEnvelope> {
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::invalid(format!("d must lie in (0, 1), got {d}")));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::invalid(format!(
            "constant must be positive, got {constant}"
        )));
    }
    if stat == MdpStatistic::RealMax && beta != Beta::Real {
        return Err(Error::invalid("real_max needs the real ensemble"));
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let ln_d = d.ln();
    let h = mdp_exponent(d);
    let real_term = MdpTerm {
        route: MdpRoute::Real,
        log_shape: -0.5 * ln_n - ln_d - 0.5 * nf * h,
    };
    let complex_shape = match stat {
        MdpStatistic::Radius => -0.5 * ln_n - 2.0 * ln_d - nf * h,
        MdpStatistic::Rightmost => -ln_n - 2.5 * ln_d - nf * h,
        MdpStatistic::RealMax => -ln_n - 2.0 * ln_d - nf * h,
    };
    let mut terms = vec![MdpTerm {
        route: MdpRoute::Complex,
        log_shape: complex_shape,
    }];
    if beta == Beta::Real {
        terms.push(real_term);
    }
    let log_constant = constant.ln();
    let log_bound = log_constant
        + terms
            .iter()
            .fold(f64::NEG_INFINITY, |acc, t| ln_add_exp(acc, t.log_shape));

    let lower = match stat {
        MdpStatistic::Radius | MdpStatistic::Rightmost => {
            let kind = if stat == MdpStatistic::Radius {
                CenteringKind::Radius
            } else {
                CenteringKind::Rightmost
            };
            let g = centering_value(kind, nf);
            (g > 0.0).then(|| (g / (4.0 * nf)).sqrt())
        }
        MdpStatistic::RealMax => Some(nf.sqrt().recip()),
    };
    let warning = match lower {
        None => Some(format!(
            "window lower edge undefined at n = {n} (centering <= 0)"
        )),
        Some(lo) if d < lo => Some(format!("d = {d} below window lower edge {lo}")),
        _ if d > DEFAULT_WINDOW_MAX => Some(format!(
            "d = {d} above window upper edge {DEFAULT_WINDOW_MAX}"
        )),
        _ => None,
    };
    Ok(MdpEnvelope {
        beta,
        stat,
        n,
        d,
        terms,
        log_constant,
        log_bound,
        window_ok: warning.is_none(),
        warning,
    })
}
