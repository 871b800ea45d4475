//! Numerical checks of the Inada conditions and finite-difference oracles.
//!
//! Sign conditions (f ≥ 0, f' > 0, f'' < 0) are checked on a log grid.
//! Limit conditions follow the factorization `f'(k) = (f(k)/k) · share(k)`:
//! the share tends to a constant in (0, 1) at both ends, so `f'` diverges at
//! zero and vanishes at infinity exactly when `ln f'` is eventually monotone
//! in `ln k` with the right sign. Near-Cobb-Douglas exponents make that
//! approach slow (`k^{-0.01}` needs hundreds of decades to pass 1e3), so each
//! limit check first requires monotonicity on the three outermost grid points
//! and then keeps probing `ln f'` (or `ln f`) in log space beyond the grid
//! until the threshold is crossed.

use std::f64::consts::LN_10;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::{RawParams, ValidatedParams};

/// Tail probes step out 2^j − 1 decades past the grid end, j = 0..=20.
const TAIL_DOUBLINGS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Worst case (sign checks) or last probe (limit checks).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub log10_k: f64,
    pub value: f64,
    /// `value` is a log10 of the measured quantity.
    pub log_scale: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub verdict: Verdict,
    pub witness: Witness,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InadaReport {
    pub nonneg_and_zero_at_origin: Check,
    pub f_increasing: Check,
    pub f_prime_diverges_at_zero: Check,
    pub f_prime_vanishes_at_infinity: Check,
    pub f_concave: Check,
    pub f_diverges_at_infinity: Check,
    pub share_limit_zero: f64,
    pub share_limit_infinity: f64,
    pub slope_estimate_zero: f64,
    pub slope_estimate_infinity: f64,
    pub grids_used: String,
}

impl InadaReport {
    pub fn checks(&self) -> [(&'static str, &Check); 6] {
        [
            ("nonneg_and_zero_at_origin", &self.nonneg_and_zero_at_origin),
            ("f_increasing", &self.f_increasing),
            ("f_prime_diverges_at_zero", &self.f_prime_diverges_at_zero),
            (
                "f_prime_vanishes_at_infinity",
                &self.f_prime_vanishes_at_infinity,
            ),
            ("f_concave", &self.f_concave),
            ("f_diverges_at_infinity", &self.f_diverges_at_infinity),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.passed())
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks()
            .into_iter()
            .filter(|(_, c)| !c.passed())
            .map(|(n, _)| n)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub k_min: f64,
    pub k_max: f64,
    pub points_per_decade: usize,
    pub divergence_threshold: f64,
    pub vanishing_threshold: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            k_min: 1e-8,
            k_max: 1e8,
            points_per_decade: 4,
            divergence_threshold: 1e3,
            vanishing_threshold: 1e-2,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.k_min > 0.0 && self.k_min < 1.0 && self.k_max > 1.0 && self.k_max.is_finite()) {
            return bad("need 0 < k_min < 1 < k_max");
        }
        if !(self.divergence_threshold > 0.0 && self.vanishing_threshold > 0.0) {
            return bad("thresholds must be positive");
        }
        if self.points_per_decade == 0 {
            return bad("points_per_decade must be at least 1");
        }
        Ok(())
    }

    fn grid(&self) -> Result<Grid> {
        let decades = (self.k_max / self.k_min).log10();
        let points = (decades * self.points_per_decade as f64).round() as usize + 1;
        Grid::log(self.k_min, self.k_max, points.max(3))
    }
}

/// Inada check for parameters in Φ.
pub fn check_inada(p: &ValidatedParams, cfg: &ProbeConfig) -> Result<InadaReport> {
    check_inada_raw(p.raw(), cfg)
}

/// Diagnostics entry point: runs every check without requiring Φ.
pub fn check_inada_raw(p: &RawParams, cfg: &ProbeConfig) -> Result<InadaReport> {
    cfg.validate()?;
    let ks = cfg.grid()?.values();
    let fail = |k: f64| {
        move |_: Error| Error::Numeric {
            what: "check_inada",
            k,
        }
    };
    let mut f = Vec::with_capacity(ks.len());
    let mut f1 = Vec::with_capacity(ks.len());
    let mut f2 = Vec::with_capacity(ks.len());
    for &k in &ks {
        f.push(p.eval_f(k).map_err(fail(k))?);
        f1.push(p.eval_f_prime(k).map_err(fail(k))?);
        f2.push(p.eval_f_double_prime(k).map_err(fail(k))?);
    }
    let n = ks.len();
    let first = ks[0].ln();
    let last = ks[n - 1].ln();

    let log_f = |ln_k: f64| p.log_f_at_ln(ln_k);
    let log_f_prime = |ln_k: f64| p.log_f_prime_at_ln(ln_k);

    // f ≥ 0 on the grid, and f falls below the smallest normal f64 as k → 0.
    let min_f = worst(&ks, &f, |a, b| a < b);
    let to_zero = tail(first, -1.0, log_f, Direction::Down, f64::MIN_POSITIVE.ln());
    let nonneg = Check {
        verdict: verdict(min_f.value >= 0.0 && to_zero.passed() && f[0] < f[1]),
        witness: if to_zero.passed() {
            min_f
        } else {
            to_zero.witness
        },
    };

    let min_f1 = worst(&ks, &f1, |a, b| a < b);
    let increasing = Check {
        verdict: verdict(f1.iter().all(|v| *v > 0.0)),
        witness: min_f1,
    };

    let max_f2 = worst(&ks, &f2, |a, b| a > b);
    let concave = Check {
        verdict: verdict(f2.iter().all(|v| *v < 0.0)),
        witness: max_f2,
    };

    let grid_ok_zero = f1[0] > f1[1] && f1[1] > f1[2];
    let diverge_zero = tail(
        first,
        -1.0,
        log_f_prime,
        Direction::Up,
        cfg.divergence_threshold.ln(),
    );
    let f_prime_diverges_at_zero = Check {
        verdict: verdict(grid_ok_zero && diverge_zero.passed()),
        witness: diverge_zero.witness,
    };

    let grid_ok_inf = f1[n - 1] < f1[n - 2] && f1[n - 2] < f1[n - 3];
    let vanish_inf = tail(
        last,
        1.0,
        log_f_prime,
        Direction::Down,
        cfg.vanishing_threshold.ln(),
    );
    let f_prime_vanishes_at_infinity = Check {
        verdict: verdict(grid_ok_inf && vanish_inf.passed()),
        witness: vanish_inf.witness,
    };

    let grid_f_up = f[n - 1] > f[n - 2] && f[n - 2] > f[n - 3];
    let diverge_inf = tail(
        last,
        1.0,
        log_f,
        Direction::Up,
        cfg.divergence_threshold.ln(),
    );
    let f_diverges_at_infinity = Check {
        verdict: verdict(grid_f_up && diverge_inf.passed()),
        witness: diverge_inf.witness,
    };

    let slope =
        |i: usize, j: usize| (log_f(ks[j].ln()) - log_f(ks[i].ln())) / (ks[j].ln() - ks[i].ln());

    Ok(InadaReport {
        nonneg_and_zero_at_origin: nonneg,
        f_increasing: increasing,
        f_prime_diverges_at_zero,
        f_prime_vanishes_at_infinity,
        f_concave: concave,
        f_diverges_at_infinity,
        share_limit_zero: p.share_at_ln(first),
        share_limit_infinity: p.share_at_ln(last),
        slope_estimate_zero: slope(0, 1),
        slope_estimate_infinity: slope(n - 2, n - 1),
        grids_used: format!(
            "log grid [{}, {}] with {} points ({}/decade); log-space tail probes up to {} decades beyond each end",
            crate::format::num(cfg.k_min),
            crate::format::num(cfg.k_max),
            n,
            cfg.points_per_decade,
            (1u64 << TAIL_DOUBLINGS) - 1
        ),
    })
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn worst(ks: &[f64], vs: &[f64], better_witness: impl Fn(f64, f64) -> bool) -> Witness {
    let mut idx = 0;
    for i in 1..vs.len() {
        if better_witness(vs[i], vs[idx]) {
            idx = i;
        }
    }
    Witness {
        log10_k: ks[idx].log10(),
        value: vs[idx],
        log_scale: false,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Up,
    Down,
}

/// Walks `ln k` outward from `start` in steps of 2^j − 1 decades and reports
/// whether the log-quantity crosses `target` while moving strictly in
/// `direction` at every step.
fn tail(
    start: f64,
    sign: f64,
    log_value: impl Fn(f64) -> f64,
    direction: Direction,
    target: f64,
) -> Check {
    let mut prev: Option<f64> = None;
    let mut witness = Witness {
        log10_k: start / LN_10,
        value: f64::NAN,
        log_scale: true,
    };
    for j in 0..=TAIL_DOUBLINGS {
        let decades = ((1u64 << j) - 1) as f64;
        let ln_k = start + sign * decades * LN_10;
        let v = log_value(ln_k);
        witness = Witness {
            log10_k: ln_k / LN_10,
            value: v / LN_10,
            log_scale: true,
        };
        if v.is_nan() {
            break;
        }
        let moving = match (prev, direction) {
            (None, _) => true,
            (Some(p), Direction::Up) => v > p,
            (Some(p), Direction::Down) => v < p,
        };
        if !moving {
            break;
        }
        let crossed = match direction {
            Direction::Up => v > target,
            Direction::Down => v < target,
        };
        if crossed {
            return Check {
                verdict: Verdict::Pass,
                witness,
            };
        }
        prev = Some(v);
    }
    Check {
        verdict: Verdict::Fail,
        witness,
    }
}

/// Step pair `(k − h_minus, k + h_plus)` around a power-of-two step near
/// `k · scale`; both offsets are recovered exactly from the rounded points.
fn steps(k: f64, scale: f64) -> (f64, f64, f64, f64) {
    let h = (k * scale).log2().round().exp2();
    let hi = k + h;
    let lo = k - h;
    (lo, hi, k - lo, hi - k)
}

fn sample(fun: &impl Fn(f64) -> f64, x: f64, k: f64) -> Result<f64> {
    let v = fun(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numeric {
            what: "finite difference sample",
            k,
        })
    }
}

/// Central difference with step `h ≈ k ε^{1/3}`.
pub fn finite_diff_first(fun: impl Fn(f64) -> f64, k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain { k });
    }
    let (lo, hi, _, _) = steps(k, f64::EPSILON.cbrt());
    Ok((sample(&fun, hi, k)? - sample(&fun, lo, k)?) / (hi - lo))
}

/// Three-point second difference with step `h ≈ k ε^{1/4}`.
pub fn finite_diff_second(fun: impl Fn(f64) -> f64, k: f64) -> Result<f64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain { k });
    }
    let (lo, hi, hm, hp) = steps(k, f64::EPSILON.sqrt().sqrt());
    let (fm, f0, fp) = (
        sample(&fun, lo, k)?,
        sample(&fun, k, k)?,
        sample(&fun, hi, k)?,
    );
    Ok(2.0 * ((fp - f0) / hp - (f0 - fm) / hm) / (hp + hm))
}
