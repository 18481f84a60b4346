//! The extremal family `f_γ = φ_a ∘ G`,
//! `f_γ(z) = (a - γ - (1 - γ) z) / (1 - aγ - a(1 - γ) z) = A_0 - Σ_{n>=1} A_n z^n`,
//! and the expansions of its transformed majorants in powers of `1 - a`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{bernardi_majorant, cesaro_majorant, lerch_tail_sum_to, log_bound, BernardiParams};
use crate::series::{truncation_order, DomainGamma, Estimate, TruncatedPowerSeries};
use crate::tolerances::rounding_allowance;

/// Truncation target for extremal majorants; they feed `O((1-a)^2)` remainders
/// as small as `1e-10`.
const EXTREMAL_TARGET: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalParams {
    a: f64,
    gamma: DomainGamma,
}

impl ExtremalParams {
    pub fn new(a: f64, gamma: DomainGamma) -> Result<Self> {
        if !(a > gamma.value() && a < 1.0) {
            return Err(Error::precondition(format!(
                "extremal parameter a = {a} must satisfy gamma = {} < a < 1",
                gamma.value()
            )));
        }
        Ok(ExtremalParams { a, gamma })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn gamma(&self) -> DomainGamma {
        self.gamma
    }

    /// `A_0 = (a - γ)/(1 - aγ)`.
    pub fn a0(&self) -> f64 {
        (self.a - self.gamma.value()) / (1.0 - self.a * self.gamma.value())
    }

    /// Geometric ratio `a(1 - γ)/(1 - aγ)` of the `A_n`.
    pub fn ratio(&self) -> f64 {
        let g = self.gamma.value();
        self.a * (1.0 - g) / (1.0 - self.a * g)
    }

    /// `A_n = (1 - a^2)/(a(1 - aγ)) * ratio^n` for `n >= 1`.
    pub fn coefficient(&self, n: usize) -> f64 {
        let g = self.gamma.value();
        (1.0 - self.a * self.a) / (self.a * (1.0 - self.a * g)) * self.ratio().powi(n as i32)
    }

    /// The rational closed form of `f_γ`, valid on all of `Ω_γ`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let g = self.gamma.value();
        let a = self.a;
        (a - g - z * (1.0 - g)) / (1.0 - a * g - z * (a * (1.0 - g)))
    }
}

/// `(A_0, -A_1, ..., -A_N)`; the `A_n` decrease, so `A_{N+1}` bounds the tail.
pub fn extremal_coeffs(p: &ExtremalParams, n: usize) -> TruncatedPowerSeries {
    let q = p.ratio();
    let lead = p.coefficient(0);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Complex64::new(p.a0(), 0.0));
    let mut qn = q;
    for _ in 1..=n {
        coeffs.push(Complex64::new(-lead * qn, 0.0));
        qn *= q;
    }
    let tail = lead * qn;
    TruncatedPowerSeries::schur(coeffs, tail.min(1.0)).expect("extremal coefficients are finite")
}

fn extremal_series_for(p: &ExtremalParams, r: f64) -> Result<TruncatedPowerSeries> {
    let n = truncation_order(r, 1.0, EXTREMAL_TARGET)?;
    Ok(extremal_coeffs(p, n))
}

/// `majorant = bound + first_order + remainder`, where the remainder is
/// whatever is left after the closed-form terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub bound: f64,
    pub first_order: f64,
    pub remainder: f64,
    /// Directly summed operator majorant of the extremal function.
    pub majorant: Estimate,
    /// Certified truncation error plus a rounding allowance for the whole
    /// identity.
    pub numerical_error: f64,
}

fn check_open_unit(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in (0,1), got {r}")))
    }
}

/// `(2r + (3 + γ)(1 - r) ln(1 - r)) / (r(1 - r))`; vanishes at the Cesàro
/// radius and is positive beyond it.
pub fn cesaro_sharpness_factor(gamma: DomainGamma, r: f64) -> f64 {
    (2.0 * r + (3.0 + gamma.value()) * (1.0 - r) * (-r).ln_1p()) / (r * (1.0 - r))
}

/// `1/β - (2/(1+γ)) Σ_{n>=1} r^n/(n+β)`; vanishes at the Bernardi radius and
/// is negative beyond it.
pub fn bernardi_sharpness_factor(gamma: DomainGamma, beta: f64, r: f64) -> Result<Estimate> {
    let s = lerch_tail_sum_to(r, beta, 1, EXTREMAL_TARGET)?;
    let scale = 2.0 / (1.0 + gamma.value());
    Ok(Estimate::new(1.0 / beta - scale * s.value, scale * s.error))
}

/// Cesàro majorant of `f_γ` split as
/// `(1/r) ln(1/(1-r)) + ((1-a)/(1-aγ)) (2r + (3+γ)(1-r) ln(1-r))/(r(1-r)) + D`.
pub fn cesaro_extremal_decomposition(p: &ExtremalParams, r: f64) -> Result<Decomposition> {
    check_open_unit(r)?;
    let s = extremal_series_for(p, r)?;
    let majorant = cesaro_majorant(&s, r)?;
    let bound = log_bound(r)?;
    let weight = (1.0 - p.a) / (1.0 - p.a * p.gamma.value());
    let first_order = weight * cesaro_sharpness_factor(p.gamma, r);
    let remainder = majorant.value - bound - first_order;
    let numerical_error = majorant.error
        + rounding_allowance(s.order() + 1, majorant.value)
        + rounding_allowance(8, bound + first_order.abs());
    Ok(Decomposition {
        bound,
        first_order,
        remainder,
        majorant,
        numerical_error,
    })
}

/// Bernardi majorant `Σ |A_n| r^n/(n+β)` of `f_γ` split as
/// `1/β - (1-a) (1+γ)/(1-aγ) (1/β - (2/(1+γ)) Σ_{n>=1} r^n/(n+β)) + M`.
///
/// The weight `(1+γ)/(1-aγ)` is the exact derivative of `1 - A_0` in `1 - a`
/// at `a = 1`, up to `O(1-a)`; with it the remainder `M` is `O((1-a)^2)`. See
/// [`bernardi_unweighted_first_order`] for the form without it.
pub fn bernardi_extremal_decomposition(p: &ExtremalParams, beta: f64, r: f64) -> Result<Decomposition> {
    check_open_unit(r)?;
    let params = BernardiParams::with_beta(beta)?;
    let s = extremal_series_for(p, r)?;
    let majorant = bernardi_majorant(&s, &params, r)?;
    let bound = 1.0 / beta;
    let factor = bernardi_sharpness_factor(p.gamma, beta, r)?;
    let g = p.gamma.value();
    let weight = (1.0 - p.a) * (1.0 + g) / (1.0 - p.a * g);
    let first_order = -weight * factor.value;
    let remainder = majorant.value - bound - first_order;
    let numerical_error = majorant.error
        + weight * factor.error
        + rounding_allowance(s.order() + 1, majorant.value)
        + rounding_allowance(8, bound + first_order.abs());
    Ok(Decomposition {
        bound,
        first_order,
        remainder,
        majorant,
        numerical_error,
    })
}

/// `-(1-a) (1/β - (2/(1+γ)) Σ r^n/(n+β))`. Matches the linear term of the
/// Bernardi expansion only when `γ = 0`; for `γ > 0` the leftover is of
/// order `1 - a`.
pub fn bernardi_unweighted_first_order(p: &ExtremalParams, beta: f64, r: f64) -> Result<f64> {
    check_open_unit(r)?;
    BernardiParams::with_beta(beta)?;
    Ok(-(1.0 - p.a) * bernardi_sharpness_factor(p.gamma, beta, r)?.value)
}
