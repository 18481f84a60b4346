//! Seeded members of the Schur class of `Ω_γ`: finite Blaschke products
//! composed with `G(z) = (1 - γ) z + γ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{composed_blaschke, DomainGamma, TruncatedPowerSeries};
use crate::tolerances::{DEFAULT_MAX_DEGREE, SAMPLE_ZERO_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurSampleSpec {
    degree: usize,
    seed: u64,
    gamma: DomainGamma,
}

impl SchurSampleSpec {
    pub fn new(degree: usize, seed: u64, gamma: DomainGamma) -> Result<Self> {
        Self::with_max_degree(degree, seed, gamma, DEFAULT_MAX_DEGREE)
    }

    pub fn with_max_degree(degree: usize, seed: u64, gamma: DomainGamma, max_degree: usize) -> Result<Self> {
        if degree > max_degree {
            return Err(Error::domain(format!(
                "Blaschke degree {degree} exceeds the maximum {max_degree}"
            )));
        }
        Ok(SchurSampleSpec { degree, seed, gamma })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn gamma(&self) -> DomainGamma {
        self.gamma
    }

    /// Zeros (uniform in the disk of radius 0.95) and unimodular phase drawn
    /// from the seeded stream.
    pub fn blaschke_data(&self) -> (Vec<Complex64>, Complex64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let zeros = (0..self.degree)
            .map(|_| {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                Complex64::from_polar(SAMPLE_ZERO_RADIUS * u.sqrt(), TAU * v)
            })
            .collect();
        let theta: f64 = rng.random();
        (zeros, Complex64::from_polar(1.0, TAU * theta))
    }
}

/// Taylor coefficients through order `n` of the sampled function on the unit
/// disk.
///
/// Each Möbius factor is composed with `G` in closed form before the factors
/// are multiplied, so every returned coefficient is exact up to rounding. The
/// result equals `affine_compose(blaschke_coeffs(zeros, phase, K), γ, n)` for
/// large enough `K`.
pub fn sample_schur_omega(spec: &SchurSampleSpec, n: usize) -> Result<TruncatedPowerSeries> {
    let (zeros, phase) = spec.blaschke_data();
    composed_blaschke(&zeros, phase, spec.gamma, n)
}
