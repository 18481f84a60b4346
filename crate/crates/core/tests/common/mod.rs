#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Taylor coefficients `c_0..=c_n` of an analytic `f` by the trapezoidal rule
/// on the circle `|z| = rho` with `m` nodes:
/// `c_k = (1/m) Σ_j f(rho w_j) w_j^(-k) / rho^k`.
pub fn cauchy_coefficients<F: Fn(Complex64) -> Complex64>(f: F, rho: f64, n: usize, m: usize) -> Vec<Complex64> {
    let values: Vec<(Complex64, Complex64)> = (0..m)
        .map(|j| {
            let w = Complex64::from_polar(1.0, TAU * j as f64 / m as f64);
            (w, f(w * rho))
        })
        .collect();
    (0..=n)
        .map(|k| {
            let sum: Complex64 = values.iter().map(|(w, fv)| fv * w.powi(-(k as i32))).sum();
            sum / (m as f64 * rho.powi(k as i32))
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A point uniformly distributed in the disk of radius `radius`.
pub fn point_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    Complex64::from_polar(radius * u.sqrt(), TAU * v)
}

pub fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Complex64> {
    let degree = rng.random_range(0..=max_degree);
    (0..=degree)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}
