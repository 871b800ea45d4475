//! f64 evaluation against a 256-bit evaluation of `A k^θ (α k^ψ + β)^ω`
//! computed term by term with no log-domain rewriting.

use astro_float::{BigFloat, Consts, RoundingMode};
use ves_core::{RawParams, ValidatedParams};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

struct Oracle {
    cc: Consts,
}

impl Oracle {
    fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    fn big(x: f64) -> BigFloat {
        BigFloat::from_f64(x, PREC)
    }

    fn f(&mut self, p: &RawParams, k: f64) -> BigFloat {
        let k = Self::big(k);
        let inner = Self::big(p.alpha)
            .mul(&k.pow(&Self::big(p.psi), PREC, RM, &mut self.cc), PREC, RM)
            .add(&Self::big(p.beta), PREC, RM);
        Self::big(p.a)
            .mul(
                &k.pow(&Self::big(p.theta), PREC, RM, &mut self.cc),
                PREC,
                RM,
            )
            .mul(
                &inner.pow(&Self::big(p.omega), PREC, RM, &mut self.cc),
                PREC,
                RM,
            )
    }

    fn ln_f(&mut self, p: &RawParams, k: f64) -> f64 {
        let f = self.f(p, k);
        to_f64(&f.ln(PREC, RM, &mut self.cc))
    }

    /// |value − exact| / |exact|, rounded to f64 only at the end.
    fn rel_err(&mut self, p: &RawParams, k: f64, value: f64) -> f64 {
        let exact = self.f(p, k);
        let diff = Self::big(value).sub(&exact, PREC, RM).div(&exact, PREC, RM);
        to_f64(&diff).abs()
    }
}

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().expect("decimal rendering parses")
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[test]
fn case1_at_ten_matches_to_1e_12() {
    let mut oracle = Oracle::new();
    let p = ValidatedParams::case1();
    let err = oracle.rel_err(p.raw(), 10.0, p.f(10.0).unwrap());
    assert!(err < 1e-12, "relative error {err:e}");
}

#[test]
fn supported_range_matches_to_1e_9() {
    let mut oracle = Oracle::new();
    for p in [ValidatedParams::case1(), ValidatedParams::case2()] {
        let mut worst: f64 = 0.0;
        for k in log_grid(1e-12, 1e12, 97) {
            let err = oracle.rel_err(p.raw(), k, p.f(k).unwrap());
            worst = worst.max(err);
        }
        assert!(
            worst < 1e-9,
            "worst relative error {worst:e} for {}",
            p.raw()
        );
    }
}

#[test]
fn log_f_matches_oracle_where_direct_form_overflows() {
    // αk^ψ ≈ 2e10 at k = 1e-12 for the second benchmark; far beyond that the
    // direct form leaves f64 but the logarithm does not.
    let mut oracle = Oracle::new();
    let p = ValidatedParams::case2();
    for k in [1e-12, 1e-200, 1e-300] {
        let exact = oracle.ln_f(p.raw(), k);
        let got = p.log_f(k).unwrap();
        assert!(
            (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
            "k={k:e}: {got} vs {exact}"
        );
    }
}

#[test]
fn random_draws_match_on_moderate_range() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut oracle = Oracle::new();
    for _ in 0..40 {
        let p = ValidatedParams::sample(&mut rng);
        for k in log_grid(1e-3, 1e3, 9) {
            let err = oracle.rel_err(p.raw(), k, p.f(k).unwrap());
            assert!(err < 1e-11, "{err:e} at k={k} for {}", p.raw());
        }
    }
}
