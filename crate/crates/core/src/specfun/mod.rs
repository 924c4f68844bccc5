//! Log-space special functions: truncated exponential sums, regularized
//! incomplete gamma, `erfc`/`erfcx`, and the uniform asymptotics of the
//! truncated exponential around the edge `t = 1`.

mod erf;
mod gamma;
mod incgamma;
mod log_value;
mod trunc_exp;

pub use erf::{erf, erfc, erfcx, ln_erfc};
pub use gamma::{ln_gamma, log1pmx, log_poisson, stirling_tail};
pub use incgamma::{reg_gamma_ladder, reg_gamma_ln, reg_gamma_p, reg_gamma_q, GammaPair};
pub use log_value::{ln_1m_exp, ln_add_exp, LogValue};
pub use trunc_exp::{
    trunc_exp_asymptotic, trunc_exp_log, trunc_exp_log_scaled, AsymptoticRegime, DEFAULT_EDGE_GUARD,
};
