//! Cobb-Douglas limits of `f` at both ends of the capital axis.
//!
//! As `k → 0` the function behaves like `A_z k^{α_z}` and as `k → ∞` like
//! `B_z k^{β_z}`. Which of `θ` and `θ + ωψ` is the small-k exponent depends
//! only on the sign of ψ. The small-k limit function is `g₁` (ψ > 0) or
//! `g₂` (ψ < 0); the large-k one is `f₁` (ψ > 0) or `f₂` (ψ < 0).

use crate::error::{Error, Result};
use crate::params::ValidatedParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticSummary {
    pub alpha_z: f64,
    pub beta_z: f64,
    pub a_z: f64,
    pub b_z: f64,
    pub psi_positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Zero,
    Infinity,
}

/// `(α_z, β_z)`: `(θ, θ+ωψ)` when ψ > 0, swapped when ψ < 0.
pub fn limit_exponents(p: &ValidatedParams) -> (f64, f64) {
    let low = p.theta();
    let high = p.theta() + p.omega() * p.psi();
    if p.psi() > 0.0 {
        (low, high)
    } else {
        (high, low)
    }
}

/// `(A_z, B_z)`: `(Aβ^ω, Aα^ω)` when ψ > 0, swapped when ψ < 0.
pub fn limit_coefficients(p: &ValidatedParams) -> (f64, f64) {
    let (lna_z, lnb_z) = log_limit_coefficients(p);
    (lna_z.exp(), lnb_z.exp())
}

fn log_limit_coefficients(p: &ValidatedParams) -> (f64, f64) {
    let with_beta = p.a().ln() + p.omega() * p.beta().ln();
    let with_alpha = p.a().ln() + p.omega() * p.alpha().ln();
    if p.psi() > 0.0 {
        (with_beta, with_alpha)
    } else {
        (with_alpha, with_beta)
    }
}

pub fn summary(p: &ValidatedParams) -> AsymptoticSummary {
    let (alpha_z, beta_z) = limit_exponents(p);
    let (a_z, b_z) = limit_coefficients(p);
    AsymptoticSummary {
        alpha_z,
        beta_z,
        a_z,
        b_z,
        psi_positive: p.psi() > 0.0,
    }
}

fn check_k(k: f64) -> Result<f64> {
    if k.is_finite() && k > 0.0 {
        Ok(k)
    } else {
        Err(Error::Domain { k })
    }
}

/// `ln` of the limit function at the chosen end.
pub fn log_limit_function(p: &ValidatedParams, k: f64, end: End) -> Result<f64> {
    let k = check_k(k)?;
    let (alpha_z, beta_z) = limit_exponents(p);
    let (lna_z, lnb_z) = log_limit_coefficients(p);
    Ok(match end {
        End::Zero => lna_z + alpha_z * k.ln(),
        End::Infinity => lnb_z + beta_z * k.ln(),
    })
}

fn limit_function(p: &ValidatedParams, k: f64, end: End) -> Result<f64> {
    let ln = log_limit_function(p, k, end)?;
    let v = ln.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { k })
    }
}

/// `A_z k^{α_z}`: `g₁` for ψ > 0, `g₂` for ψ < 0.
pub fn limit_function_at_zero(p: &ValidatedParams, k: f64) -> Result<f64> {
    limit_function(p, k, End::Zero)
}

/// `B_z k^{β_z}`: `f₁` for ψ > 0, `f₂` for ψ < 0.
pub fn limit_function_at_infinity(p: &ValidatedParams, k: f64) -> Result<f64> {
    limit_function(p, k, End::Infinity)
}

/// `|f(k) / limit(k) − 1|`, evaluated as `|expm1(ln f − ln limit)|`.
pub fn relative_gap(p: &ValidatedParams, k: f64, end: End) -> Result<f64> {
    let diff = p.log_f(k)? - log_limit_function(p, k, end)?;
    Ok(diff.exp_m1().abs())
}

/// `d ln f / d ln k`, which equals the capital share.
pub fn loglog_slope(p: &ValidatedParams, k: f64) -> Result<f64> {
    p.capital_share(k)
}
