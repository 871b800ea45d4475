//! Parameters of the production function `f(k) = A k^θ (α k^ψ + β)^ω` and
//! membership checks for the feasibility set Φ.

use std::fmt;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// Unvalidated parameter tuple `(A, α, β, θ, ψ, ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub psi: f64,
    pub omega: f64,
}

/// Parameter names in file order.
pub const KEYS: [&str; 6] = ["A", "alpha", "beta", "theta", "psi", "omega"];

impl RawParams {
    pub const fn new(a: f64, alpha: f64, beta: f64, theta: f64, psi: f64, omega: f64) -> Self {
        Self {
            a,
            alpha,
            beta,
            theta,
            psi,
            omega,
        }
    }

    /// First benchmark economy: ω > 0, elasticity above one.
    pub const CASE_1: Self = Self::new(1.05, 0.2, 0.8, 0.8, 0.9, 0.2);
    /// Second benchmark economy: ω < 0, elasticity below one.
    pub const CASE_2: Self = Self::new(1.05, 0.2, 0.8, 0.8, -0.9, -0.2);

    pub fn values(&self) -> [f64; 6] {
        [
            self.a, self.alpha, self.beta, self.theta, self.psi, self.omega,
        ]
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        KEYS.iter()
            .position(|k| *k == key)
            .map(|i| self.values()[i])
    }

    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        match key {
            "A" => Some(&mut self.a),
            "alpha" => Some(&mut self.alpha),
            "beta" => Some(&mut self.beta),
            "theta" => Some(&mut self.theta),
            "psi" => Some(&mut self.psi),
            "omega" => Some(&mut self.omega),
            _ => None,
        }
    }

    /// Checks every Φ inequality and reports each one separately.
    pub fn validate(&self) -> Result<ValidationReport> {
        for (name, v) in KEYS.iter().zip(self.values()) {
            if !v.is_finite() {
                return Err(Error::NonFinite { name });
            }
        }
        let op = self.omega * self.psi;
        let unit = |x: f64| 0.0 < x && x < 1.0;
        let mut report = ValidationReport {
            positivity_a: self.a > 0.0,
            positivity_alpha: self.alpha > 0.0,
            positivity_beta: self.beta > 0.0,
            theta_in_unit_interval: unit(self.theta),
            theta_plus_omega_psi_in_unit_interval: unit(self.theta + op),
            psi_below_one: self.psi < 1.0,
            omega_psi_in_unit_interval: unit(op),
            overall: false,
        };
        report.overall = report.flags().iter().all(|(_, ok)| *ok);
        Ok(report)
    }

    /// Parses the `key=value` parameter format. All six keys are required,
    /// each exactly once; `#` starts a comment.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::ParamFile {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut out = RawParams::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN);
        let mut seen = [false; 6];
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(lineno, format!("expected key=value, got `{body}`")))?;
            let key = key.trim();
            let value = value.trim();
            let pos = KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| err(lineno, format!("unknown key `{key}`")))?;
            if seen[pos] {
                return Err(err(lineno, format!("duplicate key `{key}`")));
            }
            let parsed = parse_decimal(value)
                .ok_or_else(|| err(lineno, format!("`{value}` is not a decimal number")))?;
            *out.slot(key).expect("key checked above") = parsed;
            seen[pos] = true;
        }
        let missing: Vec<&str> = KEYS
            .iter()
            .zip(seen)
            .filter(|(_, s)| !s)
            .map(|(k, _)| *k)
            .collect();
        if !missing.is_empty() {
            return Err(err(0, format!("missing keys: {}", missing.join(", "))));
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    /// Renders the parameter file format; `parse` reads it back exactly.
    pub fn to_file_string(&self) -> String {
        KEYS.iter()
            .zip(self.values())
            .map(|(k, v)| format!("{k}={}\n", crate::format::num(v)))
            .collect()
    }

    pub fn set(&mut self, key: &str, value: f64) -> bool {
        match self.slot(key) {
            Some(s) => {
                *s = value;
                true
            }
            None => false,
        }
    }
}

/// Accepts plain decimal or scientific notation; rejects `inf`, `nan` and
/// anything else `f64::from_str` would take that is not a number literal.
fn parse_decimal(s: &str) -> Option<f64> {
    let ok = !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return None;
    }
    s.parse::<f64>().ok()
}

/// Per-condition verdicts for membership in Φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub positivity_a: bool,
    pub positivity_alpha: bool,
    pub positivity_beta: bool,
    pub theta_in_unit_interval: bool,
    pub theta_plus_omega_psi_in_unit_interval: bool,
    pub psi_below_one: bool,
    pub omega_psi_in_unit_interval: bool,
    pub overall: bool,
}

impl ValidationReport {
    /// The seven conditions, named as they are printed.
    pub fn flags(&self) -> [(&'static str, bool); 7] {
        [
            ("positivity_A", self.positivity_a),
            ("positivity_alpha", self.positivity_alpha),
            ("positivity_beta", self.positivity_beta),
            ("theta_in_unit_interval", self.theta_in_unit_interval),
            (
                "theta_plus_omega_psi_in_unit_interval",
                self.theta_plus_omega_psi_in_unit_interval,
            ),
            ("psi_below_one", self.psi_below_one),
            (
                "omega_psi_in_unit_interval",
                self.omega_psi_in_unit_interval,
            ),
        ]
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.flags()
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n)
            .collect()
    }
}

/// Parameters certified to lie in Φ. Only obtainable through validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedParams {
    raw: RawParams,
}

impl ValidatedParams {
    pub fn new(raw: RawParams) -> Result<Self> {
        let report = raw.validate()?;
        if report.overall {
            Ok(Self { raw })
        } else {
            Err(Error::NotInPhi(report))
        }
    }

    pub fn case1() -> Self {
        Self {
            raw: RawParams::CASE_1,
        }
    }

    pub fn case2() -> Self {
        Self {
            raw: RawParams::CASE_2,
        }
    }

    pub fn raw(&self) -> &RawParams {
        &self.raw
    }

    pub fn a(&self) -> f64 {
        self.raw.a
    }
    pub fn alpha(&self) -> f64 {
        self.raw.alpha
    }
    pub fn beta(&self) -> f64 {
        self.raw.beta
    }
    pub fn theta(&self) -> f64 {
        self.raw.theta
    }
    pub fn psi(&self) -> f64 {
        self.raw.psi
    }
    pub fn omega(&self) -> f64 {
        self.raw.omega
    }

    /// Draws a random member of Φ by rejection sampling.
    ///
    /// θ is uniform on (0.01, 0.99), ψ uniform on (−2, 1) with |ψ| ≥ 0.01,
    /// ωψ uniform on (0.01, 0.99); draws with θ + ωψ outside (0.01, 0.99)
    /// are rejected. A, α and β are log-uniform on [0.1, 10].
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let theta = rng.random_range(0.01..0.99);
            let psi: f64 = rng.random_range(-2.0..1.0);
            if psi.abs() < 0.01 {
                continue;
            }
            let omega_psi = rng.random_range(0.01..0.99);
            if !(0.01..0.99).contains(&(theta + omega_psi)) {
                continue;
            }
            let mut log_uniform = || 10f64.powf(rng.random_range(-1.0..=1.0));
            let raw = RawParams::new(
                log_uniform(),
                log_uniform(),
                log_uniform(),
                theta,
                psi,
                omega_psi / psi,
            );
            if let Ok(p) = Self::new(raw) {
                return p;
            }
        }
    }
}

impl TryFrom<RawParams> for ValidatedParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw)
    }
}

impl fmt::Display for RawParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={} alpha={} beta={} theta={} psi={} omega={}",
            self.a, self.alpha, self.beta, self.theta, self.psi, self.omega
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(key: &str, v: f64) -> RawParams {
        let mut p = RawParams::CASE_1;
        p.set(key, v);
        p
    }

    #[test]
    fn benchmarks_are_members() {
        assert!(RawParams::CASE_1.validate().unwrap().overall);
        assert!(RawParams::CASE_2.validate().unwrap().overall);
    }

    #[test]
    fn mixed_signs_fail_omega_psi() {
        let mut p = RawParams::CASE_2;
        p.omega = 0.2;
        let r = p.validate().unwrap();
        assert!(!r.omega_psi_in_unit_interval);
        assert!(!r.overall);
    }

    #[test]
    fn theta_boundary_is_excluded() {
        let r = with("theta", 1.0).validate().unwrap();
        assert!(!r.theta_in_unit_interval);
        assert!(!r.overall);
        let r = with("psi", 1.0).validate().unwrap();
        assert!(!r.psi_below_one);
    }

    #[test]
    fn reports_every_failure() {
        let p = RawParams::new(-1.0, 0.0, 0.8, 1.2, 0.9, 0.2);
        let r = p.validate().unwrap();
        assert_eq!(
            r.failed(),
            vec![
                "positivity_A",
                "positivity_alpha",
                "theta_in_unit_interval",
                "theta_plus_omega_psi_in_unit_interval"
            ]
        );
    }

    #[test]
    fn non_finite_is_not_a_phi_failure() {
        let err = with("beta", f64::NAN).validate().unwrap_err();
        assert!(matches!(err, Error::NonFinite { name: "beta" }));
        assert!(matches!(
            with("A", f64::INFINITY).validate(),
            Err(Error::NonFinite { name: "A" })
        ));
    }

    #[test]
    fn validated_only_through_validation() {
        assert!(ValidatedParams::new(RawParams::CASE_1).is_ok());
        assert!(matches!(
            ValidatedParams::new(with("alpha", -0.2)),
            Err(Error::NotInPhi(r)) if !r.positivity_alpha
        ));
    }

    #[test]
    fn parses_param_file() {
        let text =
            "# case 1\nA=1.05\nalpha = 0.2\nbeta=0.8 # weight\ntheta=0.8\npsi=0.9\nomega=0.2\n\n";
        let p = RawParams::parse(text, Path::new("case1.txt")).unwrap();
        assert_eq!(p, RawParams::CASE_1);
        let back = RawParams::parse(&p.to_file_string(), Path::new("x")).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn param_file_errors() {
        let base = RawParams::CASE_1.to_file_string();
        let origin = Path::new("p.txt");
        let unknown = format!("{base}gamma=1\n");
        assert!(matches!(
            RawParams::parse(&unknown, origin),
            Err(Error::ParamFile { line: 7, .. })
        ));
        let dup = format!("{base}A=2\n");
        assert!(RawParams::parse(&dup, origin).is_err());
        let missing = base.replace("omega=0.2\n", "");
        let err = RawParams::parse(&missing, origin).unwrap_err().to_string();
        assert!(err.contains("missing keys: omega"), "{err}");
        assert!(RawParams::parse(&base.replace("0.9", "nan"), origin).is_err());
        assert!(RawParams::parse(&base.replace("0.9", "inf"), origin).is_err());
        assert!(RawParams::parse("A 1.05", origin).is_err());
    }

    #[test]
    fn sampler_stays_in_phi_and_covers_both_signs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let draws: Vec<_> = (0..2000)
            .map(|_| ValidatedParams::sample(&mut rng))
            .collect();
        assert!(draws.iter().all(|p| p.raw().validate().unwrap().overall));
        assert!(draws.iter().any(|p| p.psi() > 0.0));
        assert!(draws.iter().any(|p| p.psi() < 0.0));
    }
}
