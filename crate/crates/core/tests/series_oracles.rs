mod common;

use bohrkit::sampling::{sample_schur_omega, SchurSampleSpec};
use bohrkit::series::{affine_compose, blaschke_coeffs, majorant_eval, DomainGamma, TruncatedPowerSeries};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use common::{cauchy_coefficients, point_in_disk, rng};

type Exact = Complex<BigRational>;

fn exact(re: (i64, i64), im: (i64, i64)) -> Exact {
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

fn to_f64(c: &Exact) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap())
}

/// Series of `(a - z)/(1 - conj(a) z)` by long division:
/// `d_0 = a`, `d_n = conj(a) d_{n-1} + num_n` with numerator `(a, -1, 0, ...)`.
fn factor_by_division(a: &Exact, n: usize) -> Vec<Exact> {
    let abar = a.conj();
    let mut d = vec![a.clone()];
    for k in 1..=n {
        let num_k = if k == 1 { exact((-1, 1), (0, 1)) } else { Exact::zero() };
        d.push(&abar * &d[k - 1] + num_k);
    }
    d
}

fn exact_product(x: &[Exact], y: &[Exact], n: usize) -> Vec<Exact> {
    (0..=n)
        .map(|k| (0..=k).fold(Exact::zero(), |acc, i| acc + &x[i] * &y[k - i]))
        .collect()
}

#[test]
fn blaschke_matches_exact_rational_product() {
    let n = 10;
    let zeros = [exact((1, 2), (0, 1)), exact((0, 1), (-3, 10))];
    let mut product = vec![Exact::zero(); n + 1];
    product[0] = exact((1, 1), (0, 1));
    for a in &zeros {
        product = exact_product(&product, &factor_by_division(a, n), n);
    }

    let zeros_f: Vec<Complex64> = zeros.iter().map(to_f64).collect();
    let s = blaschke_coeffs(&zeros_f, Complex64::new(1.0, 0.0), n).unwrap();
    for (k, (got, want)) in s.coeffs().iter().zip(&product).enumerate() {
        let want = to_f64(want);
        assert!((got - want).norm() < 1e-12, "c_{k}: {got} vs {want}");
    }
}

fn mobius(a: f64) -> impl Fn(Complex64) -> Complex64 {
    move |w| (a - w) / (1.0 - a * w)
}

#[test]
fn affine_compose_matches_cauchy_extraction() {
    let g = DomainGamma::new(0.2).unwrap();
    let h = blaschke_coeffs(&[Complex64::new(0.5, 0.0)], Complex64::new(1.0, 0.0), 400).unwrap();
    let out = affine_compose(&h, g, 8).unwrap();
    let phi = mobius(0.5);
    let oracle = cauchy_coefficients(|z| phi(g.affine_map(z)), 0.5, 8, 256);
    for (k, (got, want)) in out.coeffs().iter().zip(&oracle).enumerate() {
        assert!((got - want).norm() < 1e-10, "a_{k}: {got} vs {want}");
    }
}

#[test]
fn sampled_functions_agree_with_binomial_recombination() {
    // factor-wise composition vs composing the whole product with G
    for (seed, gamma) in [(1u64, 0.1), (2, 0.35), (3, 0.6), (4, 0.75)] {
        let g = DomainGamma::new(gamma).unwrap();
        let spec = SchurSampleSpec::new(6, seed, g).unwrap();
        let direct = sample_schur_omega(&spec, 40).unwrap();
        let (zeros, phase) = spec.blaschke_data();
        let h = blaschke_coeffs(&zeros, phase, 1500).unwrap();
        let recombined = affine_compose(&h, g, 40).unwrap();
        assert!(
            recombined.coeff_error() < 1e-13,
            "omitted-term bound {}",
            recombined.coeff_error()
        );
        for (k, (a, b)) in direct.coeffs().iter().zip(recombined.coeffs()).enumerate() {
            assert!((a - b).norm() < 1e-12, "seed {seed}, a_{k}: {a} vs {b}");
        }
    }
}

#[test]
fn blaschke_partial_sums_stay_bounded() {
    let mut r = rng(11);
    for seed in 0..10u64 {
        let spec = SchurSampleSpec::new(8, seed, DomainGamma::unit_disk()).unwrap();
        let (zeros, phase) = spec.blaschke_data();
        let s = blaschke_coeffs(&zeros, phase, 600).unwrap();
        let err = s.eval_error(0.9);
        for _ in 0..20 {
            let z = point_in_disk(&mut r, 0.9);
            let series = s.eval(z);
            let direct = zeros.iter().fold(phase, |acc, a| acc * (a - z) / (1.0 - a.conj() * z));
            assert!((series - direct).norm() < 1e-10 + err);
            assert!(series.norm() <= 1.0 + 10.0 * err + 1e-12);
        }
    }
}

#[test]
fn affine_compose_evaluates_composition() {
    let mut r = rng(5);
    let g = DomainGamma::new(0.4).unwrap();
    let spec = SchurSampleSpec::new(4, 77, DomainGamma::unit_disk()).unwrap();
    let (zeros, phase) = spec.blaschke_data();
    let h = blaschke_coeffs(&zeros, phase, 800).unwrap();
    let composed = affine_compose(&h, g, 120).unwrap();
    let blaschke = |w: Complex64| zeros.iter().fold(phase, |acc, a| acc * (a - w) / (1.0 - a.conj() * w));
    for _ in 0..100 {
        let z = point_in_disk(&mut r, 0.7);
        let want = blaschke(g.affine_map(z));
        let tol = composed.eval_error(z.norm()) + 1e-12;
        assert!((composed.eval(z) - want).norm() <= tol);
    }
}

#[test]
fn sampled_series_respect_bohr_bound_on_omega() {
    for gamma in [0.0, 0.3, 0.7] {
        let g = DomainGamma::new(gamma).unwrap();
        let r = (1.0 + gamma) / (3.0 + gamma);
        for seed in 0..40u64 {
            let spec = SchurSampleSpec::new((seed % 9) as usize, seed, g).unwrap();
            let s = sample_schur_omega(&spec, 200).unwrap();
            assert!(s.coeffs()[0].norm() <= 1.0 + 1e-15);
            let m = majorant_eval(&s, r).unwrap();
            assert!(
                m.value <= 1.0 + m.error + 1e-12,
                "gamma {gamma} seed {seed}: {}",
                m.value
            );
        }
    }
}

proptest! {
    #[test]
    fn majorant_nondecreasing_in_r(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30),
        r1 in 0.0f64..0.95,
        dr in 0.0f64..0.04,
    ) {
        let s = TruncatedPowerSeries::new(
            coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect(),
            0.0,
        ).unwrap();
        let lo = majorant_eval(&s, r1).unwrap().value;
        let hi = majorant_eval(&s, r1 + dr).unwrap().value;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn compose_with_zero_gamma_is_identity(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30),
        n in 0usize..40,
    ) {
        let h = TruncatedPowerSeries::new(
            coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect(),
            0.0,
        ).unwrap();
        let out = affine_compose(&h, DomainGamma::unit_disk(), n).unwrap();
        for k in 0..=n {
            let want = h.coeffs().get(k).copied().unwrap_or_default();
            prop_assert_eq!(out.coeffs()[k], want);
        }
    }
}
