//! Elasticity of substitution σ(k).
//!
//! With the bracketed factors `a(k) = α(θ+ωψ)k^ψ + βθ` and
//! `b(k) = α(1−θ−ωψ)k^ψ + β(1−θ)`, the closed form is
//! `σ = a·b / (a·b − αβωψ²k^ψ)`. Dividing through by `(αk^ψ + β)²` turns
//! every term into a function of the weight `u` alone:
//! `σ = N / (N − ωψ²u(1−u))` with `N = s(1−s)` and `s = θ + ωψu` the share.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::ValidatedParams;

/// σ(k) in the weight form. Finite and positive under Φ.
pub fn sigma_closed(p: &ValidatedParams, k: f64) -> Result<f64> {
    let u = p.weight(k)?;
    let share = p.theta() + p.omega() * p.psi() * u;
    let n = share * (1.0 - share);
    let d = n - p.omega() * p.psi() * p.psi() * u * (1.0 - u);
    let sigma = n / d;
    if sigma.is_finite() && d != 0.0 {
        Ok(sigma)
    } else {
        Err(Error::Numeric {
            what: "sigma_closed",
            k,
        })
    }
}

/// The literal quotient of the two bracketed factors. Overflows for extreme
/// `k`; kept as a reference for [`sigma_closed`].
pub fn sigma_literal(p: &ValidatedParams, k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain { k });
    }
    let (alpha, beta, theta, psi, omega) = (p.alpha(), p.beta(), p.theta(), p.psi(), p.omega());
    let kp = k.powf(psi);
    let top = theta + omega * psi;
    let a = alpha * top * kp + beta * theta;
    let b = alpha * (1.0 - top) * kp + beta * (1.0 - theta);
    let ab = a * b;
    let sigma = ab / (ab - alpha * beta * omega * psi * psi * kp);
    if sigma.is_finite() {
        Ok(sigma)
    } else {
        Err(Error::Overflow { k })
    }
}

/// σ from the intensive-form identity `σ = f'(f − kf') / (−k f f'')`, using
/// only the evaluated derivatives.
pub fn sigma_from_derivatives(p: &ValidatedParams, k: f64) -> Result<f64> {
    let f = p.f(k)?;
    let f1 = p.f_prime(k)?;
    let f2 = p.f_double_prime(k)?;
    let den = -k * f * f2;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Numeric {
            what: "sigma_from_derivatives",
            k,
        });
    }
    Ok(f1 * (f - k * f1) / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSeries {
    pub grid: Vec<f64>,
    pub sigma: Vec<f64>,
}

pub fn sigma_scan(p: &ValidatedParams, grid: &Grid) -> Result<SigmaSeries> {
    let ks = grid.values();
    let sigma = ks
        .iter()
        .map(|&k| sigma_closed(p, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SigmaSeries { grid: ks, sigma })
}

/// Whether σ sits above or below the Cobb-Douglas value of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    AboveOne,
    BelowOne,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::AboveOne => "ABOVE_ONE",
            Regime::BelowOne => "BELOW_ONE",
        }
    }
}

pub fn classify_regime(p: &ValidatedParams) -> Regime {
    if p.omega() > 0.0 {
        Regime::AboveOne
    } else {
        Regime::BelowOne
    }
}
