//! Numerically stable evaluation of `f`, its first two derivatives, the
//! curvature polynomial `g` and the capital share.
//!
//! Everything that can leave the f64 range at extreme `k` is routed through
//! `ln k`. The normalized weight `u(k) = αk^ψ / (αk^ψ + β)` is computed as a
//! logistic transform of `ψ ln k + ln(α/β)`, which keeps the share, σ and the
//! curvature term bounded for any `k`.

use crate::error::{Error, Result};
use crate::params::{RawParams, ValidatedParams};

const MAX_LN: f64 = 709.782712893384; // ln(f64::MAX)

/// `ln(e^x + e^y)` for two terms.
pub fn log_sum_exp2(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `1 / (1 + e^{-x})` without overflow.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn positive_k(k: f64) -> Result<f64> {
    if k.is_finite() && k > 0.0 {
        Ok(k)
    } else {
        Err(Error::Domain { k })
    }
}

fn finite(v: f64, k: f64) -> Result<f64> {
    if v.is_nan() {
        Err(Error::Numeric {
            what: "evaluation",
            k,
        })
    } else if v.is_infinite() {
        Err(Error::Overflow { k })
    } else {
        Ok(v)
    }
}

/// Coefficients of `g` in the basis `u^2, u(1-u), (1-u)^2`; also the
/// coefficients of `k^{2ψ}/α², k^ψ/(αβ), 1/β²` in the literal polynomial.
pub(crate) fn g_coefficients(p: &RawParams) -> [f64; 3] {
    let op = p.omega * p.psi;
    let top = p.theta + op;
    [
        top * (1.0 - top),
        op * (1.0 - p.psi) + 2.0 * p.theta * (1.0 - top),
        p.theta * (1.0 - p.theta),
    ]
}

// The formulas below do not assume Φ so the Inada checker can run them on
// arbitrary parameters. Public entry points live on `ValidatedParams`.
impl RawParams {
    /// `ln α + ψ ln k - ln β`, the logit of the weight `u`.
    fn weight_logit(&self, ln_k: f64) -> f64 {
        let ln_alpha = self.alpha.ln();
        if ln_alpha == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        ln_alpha + self.psi * ln_k - self.beta.ln()
    }

    pub(crate) fn weight_at_ln(&self, ln_k: f64) -> f64 {
        logistic(self.weight_logit(ln_k))
    }

    pub(crate) fn log_f_at_ln(&self, ln_k: f64) -> f64 {
        let ln_alpha = self.alpha.ln();
        let inner = if ln_alpha == f64::NEG_INFINITY {
            self.beta.ln()
        } else {
            log_sum_exp2(ln_alpha + self.psi * ln_k, self.beta.ln())
        };
        self.a.ln() + self.theta * ln_k + self.omega * inner
    }

    pub(crate) fn share_at_ln(&self, ln_k: f64) -> f64 {
        self.theta + self.omega * self.psi * self.weight_at_ln(ln_k)
    }

    /// `ln f'(k)` through `f'(k) = f(k) · share / k`; NaN if the share is
    /// not positive.
    pub(crate) fn log_f_prime_at_ln(&self, ln_k: f64) -> f64 {
        let share = self.share_at_ln(ln_k);
        if share > 0.0 {
            self.log_f_at_ln(ln_k) - ln_k + share.ln()
        } else {
            f64::NAN
        }
    }

    pub(crate) fn log_f(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        finite(self.log_f_at_ln(k.ln()), k)
    }

    /// `f(k) / k^m`, direct when every intermediate is representable and
    /// through `ln f` otherwise.
    fn f_over_power(&self, k: f64, m: i32) -> Result<f64> {
        let kp = k.powf(self.psi);
        let s = self.alpha * kp + self.beta;
        let direct = self.a * k.powf(self.theta) * s.powf(self.omega) / k.powi(m);
        if kp.is_normal() && s.is_normal() && direct.is_normal() {
            return Ok(direct);
        }
        let ln = self.log_f_at_ln(k.ln()) - f64::from(m) * k.ln();
        if ln.is_nan() {
            return Err(Error::Numeric { what: "f", k });
        }
        if ln > MAX_LN {
            return Err(Error::Overflow { k });
        }
        Ok(ln.exp())
    }

    pub(crate) fn eval_f(&self, k: f64) -> Result<f64> {
        if k == 0.0 {
            return Ok(0.0);
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Domain { k });
        }
        self.f_over_power(k, 0)
    }

    pub(crate) fn weight(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        Ok(self.weight_at_ln(k.ln()))
    }

    pub(crate) fn capital_share(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        Ok(self.share_at_ln(k.ln()))
    }

    pub(crate) fn eval_f_prime(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        let share = self.share_at_ln(k.ln());
        finite(self.f_over_power(k, 1)? * share, k)
    }

    /// `g(k) / (αk^ψ + β)^2`: the literal quotient when it is representable,
    /// otherwise the same quantity expanded in the weight `u`.
    pub(crate) fn curvature(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        let kp = k.powf(self.psi);
        let s = self.alpha * kp + self.beta;
        let g = self.g_literal(kp);
        let s2 = s * s;
        if g.is_finite() && s2.is_normal() && kp.is_normal() {
            return Ok(g / s2);
        }
        let u = self.weight_at_ln(k.ln());
        let [c2, c1, c0] = g_coefficients(self);
        finite(
            c2 * u * u + c1 * u * (1.0 - u) + c0 * (1.0 - u) * (1.0 - u),
            k,
        )
    }

    fn g_literal(&self, kp: f64) -> f64 {
        let [c2, c1, c0] = g_coefficients(self);
        let (a, b) = (self.alpha, self.beta);
        c2 * a * a * kp * kp + c1 * a * b * kp + c0 * b * b
    }

    pub(crate) fn eval_g(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        finite(self.g_literal(k.powf(self.psi)), k)
    }

    pub(crate) fn eval_f_double_prime(&self, k: f64) -> Result<f64> {
        let k = positive_k(k)?;
        let curvature = self.curvature(k)?;
        finite(-self.f_over_power(k, 2)? * curvature, k)
    }
}

impl ValidatedParams {
    /// `f(k) = A k^θ (αk^ψ + β)^ω` for `k ≥ 0`, with `f(0) = 0`.
    ///
    /// Returns [`Error::Overflow`] rather than infinity when the value is not
    /// representable; [`ValidatedParams::log_f`] stays finite there.
    pub fn f(&self, k: f64) -> Result<f64> {
        self.raw().eval_f(k)
    }

    /// `ln f(k) = ln A + θ ln k + ω · lse(ln α + ψ ln k, ln β)`.
    pub fn log_f(&self, k: f64) -> Result<f64> {
        self.raw().log_f(k)
    }

    /// `f'(k) = f(k) [α(θ+ωψ)k^ψ + βθ] / [k(αk^ψ + β)]`.
    pub fn f_prime(&self, k: f64) -> Result<f64> {
        self.raw().eval_f_prime(k)
    }

    /// `f''(k) = -f(k) g(k) / [k² (αk^ψ + β)²]`.
    pub fn f_double_prime(&self, k: f64) -> Result<f64> {
        self.raw().eval_f_double_prime(k)
    }

    /// The quadratic in `k^ψ` whose sign fixes the curvature of `f`.
    pub fn g(&self, k: f64) -> Result<f64> {
        self.raw().eval_g(k)
    }

    /// `k f'(k) / f(k) = θ + ωψ u(k)`, strictly between θ and θ + ωψ.
    pub fn capital_share(&self, k: f64) -> Result<f64> {
        self.raw().capital_share(k)
    }

    /// Normalized weight `u(k) = αk^ψ / (αk^ψ + β)` in (0, 1).
    pub fn weight(&self, k: f64) -> Result<f64> {
        self.raw().weight(k)
    }

    /// All per-point quantities at one capital level.
    pub fn eval_row(&self, k: f64) -> Result<EvalRow> {
        Ok(EvalRow {
            k,
            f: self.f(k)?,
            f_prime: self.f_prime(k)?,
            f_double_prime: self.f_double_prime(k)?,
            sigma: crate::elasticity::sigma_closed(self, k)?,
            share: self.capital_share(k)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRow {
    pub k: f64,
    pub f: f64,
    pub f_prime: f64,
    pub f_double_prime: f64,
    pub sigma: f64,
    pub share: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn lse_and_logistic_edges() {
        assert_eq!(log_sum_exp2(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_sum_exp2(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_sum_exp2(1000.0, 0.0), 1000.0);
        assert_eq!(logistic(-800.0), 0.0);
        assert_eq!(logistic(800.0), 1.0);
        assert!((logistic(0.25f64.ln()) - 0.2).abs() < 1e-16);
    }

    #[test]
    fn value_at_one_is_a() {
        for p in [ValidatedParams::case1(), ValidatedParams::case2()] {
            assert!((p.f(1.0).unwrap() - 1.05).abs() < 1e-12);
            assert!((p.log_f(1.0).unwrap() - 1.05f64.ln()).abs() < 1e-15);
            assert_eq!(p.f(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn domain_errors() {
        let p = ValidatedParams::case1();
        assert!(matches!(p.f(-1.0), Err(Error::Domain { .. })));
        assert!(matches!(p.f(f64::NAN), Err(Error::Domain { .. })));
        for k in [0.0, -2.0, f64::INFINITY] {
            assert!(p.f_prime(k).is_err());
            assert!(p.f_double_prime(k).is_err());
            assert!(p.g(k).is_err());
            assert!(p.capital_share(k).is_err());
            assert!(p.log_f(k).is_err());
        }
    }

    // Hand expansion at k = 1, where k^ψ = 1 and αk^ψ + β = 1.
    #[test]
    fn hand_values_at_one() {
        let c1 = ValidatedParams::case1();
        let c2 = ValidatedParams::case2();
        assert!(rel(c1.f_prime(1.0).unwrap(), 0.8778) < 1e-12);
        assert!(rel(c2.f_prime(1.0).unwrap(), 0.8778) < 1e-12);
        assert!(rel(c1.g(1.0).unwrap(), 0.111184) < 1e-12);
        assert!(rel(c2.g(1.0).unwrap(), 0.163024) < 1e-12);
        assert!(rel(c1.f_double_prime(1.0).unwrap(), -0.1167432) < 1e-12);
        assert!(rel(c1.capital_share(1.0).unwrap(), 0.836) < 1e-12);
        assert!(rel(c2.capital_share(1.0).unwrap(), 0.836) < 1e-12);
    }

    #[test]
    fn share_limits_near_zero() {
        let s1 = ValidatedParams::case1().capital_share(1e-8).unwrap();
        let s2 = ValidatedParams::case2().capital_share(1e-8).unwrap();
        assert!((s1 - 0.8).abs() < 1e-6);
        assert!((s2 - 0.98).abs() < 1e-6);
    }

    #[test]
    fn log_f_extremes() {
        let c2 = ValidatedParams::case2();
        assert!(c2.log_f(1e-12).unwrap().is_finite());
        let c1 = ValidatedParams::case1();
        let k: f64 = 1e12;
        let dominant = 0.8 * k.ln() + 0.2 * (0.2f64.ln() + 0.9 * k.ln()) + 1.05f64.ln();
        assert!((c1.log_f(k).unwrap() - dominant).abs() < 1e-9);
    }

    #[test]
    fn overflow_is_explicit() {
        // ln f(1e300) ≈ 729 > ln(f64::MAX).
        let p = ValidatedParams::new(RawParams::new(1e20, 1.0, 1.0, 0.5, 0.01, 49.0)).unwrap();
        assert!(matches!(p.f(1e300), Err(Error::Overflow { .. })));
        assert!(p.log_f(1e300).unwrap().is_finite());
    }

    #[test]
    fn curvature_routes_agree() {
        // Literal g/s² against the u-expansion at points where both are finite.
        let p = ValidatedParams::case2();
        let [c2, c1, c0] = g_coefficients(p.raw());
        for k in [1e-6, 0.3, 1.0, 7.0, 1e5] {
            let u = p.weight(k).unwrap();
            let expanded = c2 * u * u + c1 * u * (1.0 - u) + c0 * (1.0 - u) * (1.0 - u);
            assert!(rel(p.raw().curvature(k).unwrap(), expanded) < 1e-12);
        }
    }
}
