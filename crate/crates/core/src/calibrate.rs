//! Least-squares calibration of the six parameters to `(k, y)` data.
//!
//! `f` is invariant under `(A, α, β) → (A c^{−ω}, cα, cβ)`, so the fit works
//! in the chart `α + β = 1`. The remaining five coordinates are mapped to
//! unconstrained reals so that every iterate lies strictly inside Φ:
//!
//! | coordinate | parameter |
//! |---|---|
//! | `z0` | `ln A` |
//! | `z1` | `α = s(z1)`, `β = s(−z1)` |
//! | `z2` | `θ = s(z2)` |
//! | `z3` | `ωψ = (1 − θ) s(z3)` |
//! | `z4` | `ψ = s(z4)` if ψ > 0, `ψ = −exp(z4)` if ψ < 0 |
//!
//! with the algebraic sigmoid `s(z) = (1 + z/√(1+z²))/2`. Its slope decays
//! like `|z|⁻³` rather than exponentially, so an iterate that drifts towards
//! an edge of Φ still sees the gradient pulling it back. The sign of ψ is
//! fixed by the initial guess.

use std::io::Read;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::params::{RawParams, ValidatedParams};

const NPARAM: usize = 5;
const MIN_OBSERVATIONS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub k: f64,
    pub y: f64,
}

impl Observation {
    pub fn new(k: f64, y: f64) -> Option<Self> {
        (k.is_finite() && y.is_finite() && k > 0.0 && y > 0.0).then_some(Self { k, y })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Stop when an accepted step lowers the objective by less than this
    /// fraction.
    pub relative_decrease_tol: f64,
    pub step_tol: f64,
    /// Largest gradient component of ½·SSR allowed in a converged fit.
    pub gradient_tol: f64,
    pub initial_damping: f64,
    /// Largest ratio `2‖a‖/‖v‖` of geodesic acceleration to velocity before
    /// a trial step is rejected; `None` switches the acceleration off.
    pub acceleration_ratio: Option<f64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            relative_decrease_tol: 1e-12,
            step_tol: 1e-10,
            gradient_tol: 1e-6,
            initial_damping: 1e-3,
            acceleration_ratio: Some(0.75),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Normalized so that α + β = 1.
    pub params: ValidatedParams,
    /// Root mean squared error of the `ln y` residuals.
    pub rmse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    pub step_norm: f64,
    /// Sum of squared log residuals after each accepted step, starting with
    /// the initial guess.
    pub objective_history: Vec<f64>,
}

/// Rescales `(A, α, β)` so that `α + β = 1` without changing `f`.
pub fn normalize(p: &ValidatedParams) -> ValidatedParams {
    let total = p.alpha() + p.beta();
    if total == 1.0 {
        return *p;
    }
    let raw = p.raw();
    let alpha = raw.alpha / total;
    let scaled = RawParams {
        a: raw.a * total.powf(raw.omega),
        alpha,
        beta: 1.0 - alpha,
        ..*raw
    };
    ValidatedParams::new(scaled).expect("scaling preserves membership in Φ")
}

/// Pulls a parameter tuple into the interior of Φ, keeping at least `margin`
/// from every open bound. ωψ is shrunk before θ when their sum is too large;
/// ω keeps the sign of ψ. Non-positive scale parameters are replaced by
/// `margin`.
pub fn project_into_phi(raw: &RawParams, margin: f64) -> Result<ValidatedParams> {
    raw.validate()?;
    let clamp = |x: f64| x.clamp(margin, 1.0 - margin);
    let theta = raw.theta.clamp(margin, 1.0 - 2.0 * margin);
    let psi = if raw.psi >= 0.0 {
        raw.psi.clamp(margin, 1.0 - margin)
    } else {
        raw.psi.min(-margin)
    };
    let omega_psi = clamp((raw.omega * raw.psi).abs()).min(1.0 - margin - theta);
    let positive = |x: f64| if x > 0.0 { x } else { margin };
    ValidatedParams::new(RawParams::new(
        positive(raw.a),
        positive(raw.alpha),
        positive(raw.beta),
        theta,
        psi,
        omega_psi / psi,
    ))
}

#[derive(Debug, Clone, Copy)]
struct Chart {
    psi_positive: bool,
}

/// `(1 + z/√(1+z²))/2`, written without cancellation for negative `z`.
fn squash(z: f64) -> f64 {
    let root = z.hypot(1.0);
    if z >= 0.0 {
        0.5 * (1.0 + z / root)
    } else {
        0.5 / (root * (root - z))
    }
}

fn unsquash(x: f64) -> f64 {
    (x - 0.5) / (x * (1.0 - x)).sqrt()
}

impl Chart {
    fn coords(&self, p: &ValidatedParams) -> [f64; NPARAM] {
        let omega_psi = p.omega() * p.psi();
        let psi = if self.psi_positive {
            unsquash(p.psi())
        } else {
            (-p.psi()).ln()
        };
        [
            p.a().ln(),
            unsquash(p.alpha()),
            unsquash(p.theta()),
            unsquash(omega_psi / (1.0 - p.theta())),
            psi,
        ]
    }

    fn params(&self, z: &[f64]) -> Result<ValidatedParams> {
        let theta = squash(z[2]);
        let omega_psi = (1.0 - theta) * squash(z[3]);
        let psi = if self.psi_positive {
            squash(z[4])
        } else {
            -z[4].exp()
        };
        ValidatedParams::new(RawParams::new(
            z[0].exp(),
            squash(z[1]),
            squash(-z[1]),
            theta,
            psi,
            omega_psi / psi,
        ))
    }
}

struct Problem<'a> {
    data: &'a [Observation],
    log_y: Vec<f64>,
    chart: Chart,
}

impl Problem<'_> {
    fn residuals(&self, z: &[f64]) -> Option<DVector<f64>> {
        let p = self.chart.params(z).ok()?;
        let mut r = DVector::zeros(self.data.len());
        for (i, obs) in self.data.iter().enumerate() {
            let v = self.log_y[i] - p.log_f(obs.k).ok()?;
            if !v.is_finite() {
                return None;
            }
            r[i] = v;
        }
        Some(r)
    }

    /// Central differences of the residuals in each chart coordinate.
    fn jacobian(&self, z: &[f64]) -> Option<DMatrix<f64>> {
        let mut jac = DMatrix::zeros(self.data.len(), NPARAM);
        let mut zp = z.to_vec();
        for j in 0..NPARAM {
            let h = f64::EPSILON.cbrt() * z[j].abs().max(1.0);
            zp[j] = z[j] + h;
            let up = self.residuals(&zp)?;
            zp[j] = z[j] - h;
            let down = self.residuals(&zp)?;
            zp[j] = z[j];
            jac.set_column(j, &((up - down) / (2.0 * h)));
        }
        Some(jac)
    }
}

fn check_data(data: &[Observation]) -> Result<()> {
    let mut ks: Vec<f64> = data.iter().map(|o| o.k).collect();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    if data.len() < MIN_OBSERVATIONS || ks.len() < MIN_OBSERVATIONS {
        return Err(Error::InsufficientData {
            needed: MIN_OBSERVATIONS,
            got: data.len(),
            distinct: ks.len(),
        });
    }
    Ok(())
}

/// Damped Gauss-Newton (Levenberg-Marquardt) on the log residuals
/// `ln y_i − ln f(k_i)`, with geodesic acceleration unless switched off.
/// The objective is sloppy along the (ψ, ωψ) valley; the second-order
/// correction keeps steps on it instead of shooting off to an edge of Φ.
pub fn fit(data: &[Observation], init: &RawParams, opts: &FitOptions) -> Result<FitResult> {
    check_data(data)?;
    let report = init.validate()?;
    if !report.overall {
        return Err(Error::InitOutsidePhi(report));
    }
    let start = normalize(&ValidatedParams::new(*init)?);
    let chart = Chart {
        psi_positive: start.psi() > 0.0,
    };
    let problem = Problem {
        data,
        log_y: data.iter().map(|o| o.y.ln()).collect(),
        chart,
    };

    let mut z = DVector::from_column_slice(&chart.coords(&start));
    let mut r = problem.residuals(z.as_slice()).ok_or(Error::Numeric {
        what: "fit residuals",
        k: f64::NAN,
    })?;
    let mut cost = r.norm_squared();
    let mut history = vec![cost];
    let mut damping = opts.initial_damping;
    let mut iterations = 0;
    let mut step_norm = f64::INFINITY;
    let mut gradient_norm;
    let mut stopped_by_tolerance = false;

    loop {
        let jac = problem.jacobian(z.as_slice()).ok_or(Error::Numeric {
            what: "fit jacobian",
            k: f64::NAN,
        })?;
        let gradient = jac.tr_mul(&r);
        gradient_norm = gradient.amax();
        if cost == 0.0 {
            stopped_by_tolerance = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let normal = jac.tr_mul(&jac);
        let mut accepted = None;
        while damping < 1e16 {
            let mut lhs = normal.clone();
            for i in 0..NPARAM {
                lhs[(i, i)] += damping * normal[(i, i)].max(1e-12);
            }
            let Some(chol) = lhs.cholesky() else {
                damping *= 10.0;
                continue;
            };
            let mut step = chol.solve(&(-&gradient));
            if let Some(max_ratio) = opts.acceleration_ratio {
                // Second directional derivative of the residuals along the
                // step, then the matching correction to the step.
                let h = 0.1;
                let Some(rh) = problem.residuals((&z + &step * h).as_slice()) else {
                    damping *= 10.0;
                    continue;
                };
                let rvv = ((rh - &r) / h - &jac * &step) * (2.0 / h);
                let accel = chol.solve(&(-jac.tr_mul(&rvv)));
                // Written so that a NaN ratio also rejects.
                let bent_too_far = !matches!(
                    (2.0 * accel.norm()).partial_cmp(&(max_ratio * step.norm())),
                    Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
                );
                if bent_too_far {
                    damping *= 10.0;
                    continue;
                }
                step += accel * 0.5;
            }
            let candidate = &z + &step;
            match problem.residuals(candidate.as_slice()) {
                Some(rc) if rc.norm_squared() < cost => {
                    accepted = Some((candidate, rc, step.norm()));
                    damping = (damping / 10.0).max(1e-15);
                    break;
                }
                _ => damping *= 10.0,
            }
        }
        let Some((candidate, rc, norm)) = accepted else {
            // No descent direction at any damping: the iterate is as good as
            // f64 allows.
            step_norm = 0.0;
            stopped_by_tolerance = true;
            break;
        };
        let new_cost = rc.norm_squared();
        let decrease = (cost - new_cost) / cost;
        z = candidate;
        r = rc;
        cost = new_cost;
        step_norm = norm;
        history.push(cost);
        if decrease < opts.relative_decrease_tol || step_norm < opts.step_tol {
            let jac = problem.jacobian(z.as_slice()).ok_or(Error::Numeric {
                what: "fit jacobian",
                k: f64::NAN,
            })?;
            gradient_norm = jac.tr_mul(&r).amax();
            stopped_by_tolerance = true;
            break;
        }
    }

    let params = chart.params(z.as_slice())?;
    Ok(FitResult {
        params,
        rmse: (cost / data.len() as f64).sqrt(),
        iterations,
        converged: stopped_by_tolerance && gradient_norm <= opts.gradient_tol,
        gradient_norm,
        step_norm,
        objective_history: history,
    })
}

/// Observations `y_i = f(k_i) · exp(ε_i)` with `ε_i ~ N(0, noise_sd²)` drawn
/// from a ChaCha8 stream seeded with `seed`.
pub fn generate_synthetic(
    p: &ValidatedParams,
    grid: &Grid,
    noise_sd: f64,
    seed: u64,
) -> Result<Vec<Observation>> {
    let normal = Normal::new(0.0, noise_sd).map_err(|_| Error::Numeric {
        what: "noise_sd",
        k: f64::NAN,
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grid.values()
        .into_iter()
        .map(|k| {
            let eps = if noise_sd > 0.0 {
                normal.sample(&mut rng)
            } else {
                0.0
            };
            let y = p.f(k)? * eps.exp();
            Observation::new(k, y).ok_or(Error::Numeric {
                what: "synthetic sample",
                k,
            })
        })
        .collect()
}

/// Reads the `k,y` CSV data format.
pub fn read_observations(reader: impl Read) -> Result<Vec<Observation>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "k" || &headers[1] != "y" {
        return Err(Error::BadObservation {
            row: 0,
            msg: format!(
                "header must be `k,y`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let bad = |msg: String| Error::BadObservation { row, msg };
        if rec.len() != 2 {
            return Err(bad(format!("expected 2 fields, got {}", rec.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("`{s}` is not a number")))
        };
        let (k, y) = (parse(&rec[0])?, parse(&rec[1])?);
        out.push(Observation::new(k, y).ok_or_else(|| {
            bad(format!(
                "k and y must be positive and finite, got ({k}, {y})"
            ))
        })?);
    }
    Ok(out)
}

pub fn write_observations(data: &[Observation], mut out: impl std::io::Write) -> Result<()> {
    writeln!(out, "k,y")?;
    for o in data {
        writeln!(
            out,
            "{},{}",
            crate::format::num(o.k),
            crate::format::num(o.y)
        )?;
    }
    Ok(())
}
