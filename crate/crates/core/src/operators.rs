//! Cesàro and Bernardi transforms in coefficient space, their majorants, the
//! closed-form bound `(1/r) ln(1/(1-r))`, Lerch-type tail sums, and quadrature
//! evaluations of both integral representations.
//!
//! Two normalizations of the Bernardi operator coexist here. The operator
//! itself carries the prefactor `(1 + β)`:
//! `L_β f(z) = (1 + β) Σ a_n z^n / (n + β)`.
//! The majorant used for the Bohr-type inequality on `Ω_γ` does not:
//! `Σ |a_n| r^n / (n + β) <= 1/β`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadResult};
use crate::series::{check_radius, geometric_partial, Estimate, TruncatedPowerSeries};
use crate::tolerances::{
    LEADING_ZERO, LOG_BOUND_SERIES_CUTOFF, MAX_ORDER, QUAD_MAX_EVALS, QUAD_TARGET, TRUNCATION_TARGET,
};

/// `(β, m)`: the Bernardi parameter and the order of the zero of `f` at the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernardiParams {
    beta: f64,
    m: usize,
}

impl BernardiParams {
    pub fn new(beta: f64, m: usize) -> Result<Self> {
        if !beta.is_finite() || beta <= -(m as f64) {
            return Err(Error::domain(format!("beta must exceed -m = -{m}, got {beta}")));
        }
        Ok(BernardiParams { beta, m })
    }

    /// `m = 0`, which needs `β > 0`.
    pub fn with_beta(beta: f64) -> Result<Self> {
        Self::new(beta, 0)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Coefficients `c_n = (1/(n+1)) Σ_{k<=n} a_k`.
///
/// For `n > N` the output satisfies `|c_n| <= (P + (n - N) B)/(n + 1) <= B + P/(N + 2)`
/// with `P = Σ_{k<=N} |a_k|`; Schur inputs additionally give `|c_n| <= 1`.
pub fn cesaro_transform(s: &TruncatedPowerSeries) -> TruncatedPowerSeries {
    let mut prefix = Complex64::new(0.0, 0.0);
    let coeffs: Vec<Complex64> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &a)| {
            prefix += a;
            prefix / (n + 1) as f64
        })
        .collect();
    let magnitude: f64 = s.coeffs().iter().map(|c| c.norm()).sum();
    let mut tail = s.tail_bound() + magnitude / (s.order() + 2) as f64;
    if s.is_schur() {
        tail = tail.min(1.0);
    }
    TruncatedPowerSeries::new(coeffs, tail)
        .expect("averages of finite coefficients are finite")
        .with_coeff_error(s.coeff_error())
}

/// `C_f(r) = Σ_n (1/(n+1)) (Σ_{k<=n} |a_k|) r^n`.
///
/// Beyond the stored order the known prefix `P` keeps contributing
/// `P Σ_{n>N} r^n/(n+1)`, which is summed explicitly. The unknown tail
/// coefficients add at most `B Σ_{n>N} (n - N) r^n / (n + 1)`, bounded by
/// `B r^(N+1) min(1/(1-r), 1/((N+2)(1-r)^2))`. The returned value is the sum of
/// the known parts, so the true majorant lies in `[value - δ, value + error]`
/// with `δ` only the rounding and tail-sum error.
pub fn cesaro_majorant(s: &TruncatedPowerSeries, r: f64) -> Result<Estimate> {
    check_radius(r)?;
    let n_max = s.order();
    let mut prefix = 0.0;
    let mut value = 0.0;
    let mut rn = 1.0;
    for (n, c) in s.coeffs().iter().enumerate() {
        prefix += c.norm();
        value += prefix / (n + 1) as f64 * rn;
        rn *= r;
    }
    let mut error = 0.0;
    if prefix > 0.0 && r > 0.0 {
        let ext = lerch_tail_sum_to(r, 1.0, n_max + 1, TRUNCATION_TARGET * 0.1 / prefix.max(1.0))?;
        value += prefix * ext.value;
        error += prefix * ext.error;
    }
    let rn1 = r.powi(n_max as i32 + 1);
    let b = s.tail_bound();
    if b > 0.0 {
        let loose = rn1 / (1.0 - r);
        let tight = rn1 / ((n_max + 2) as f64 * (1.0 - r) * (1.0 - r));
        error += b * loose.min(tight);
    }
    let de = s.coeff_error();
    if de > 0.0 {
        // each prefix sum moves by at most (n + 1) de, each average by de
        error += de * geometric_partial(r, n_max);
        if r > 0.0 {
            error += de * (n_max + 1) as f64 * lerch_tail_sum(r, 1.0, n_max + 1)?.value;
        }
    }
    Ok(Estimate::new(value, error))
}

/// Evaluate `∫_0^1 f(tz)/(1 - tz) dt` by adaptive quadrature, `f` being the
/// stored polynomial part of `s`.
pub fn cesaro_integral_oracle(s: &TruncatedPowerSeries, z: Complex64) -> Result<QuadResult> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("|z| must be < 1, got {}", z.norm())));
    }
    integrate(
        |t| {
            let w = z * t;
            s.eval(w) / (1.0 - w)
        },
        0.0,
        1.0,
        QUAD_TARGET,
        QUAD_MAX_EVALS,
    )
}

fn check_leading_zeros(s: &TruncatedPowerSeries, p: &BernardiParams) -> Result<()> {
    for (n, c) in s.coeffs().iter().enumerate().take(p.m) {
        if c.norm() > LEADING_ZERO {
            return Err(Error::precondition(format!(
                "coefficient a_{n} = {c} must vanish when m = {}",
                p.m
            )));
        }
    }
    Ok(())
}

/// Coefficients `c_n = (1 + β) a_n / (β + n)` for `n >= m`, zero below `m`.
pub fn bernardi_transform(s: &TruncatedPowerSeries, p: &BernardiParams) -> Result<TruncatedPowerSeries> {
    check_leading_zeros(s, p)?;
    let beta = p.beta;
    let scale = 1.0 + beta;
    let coeffs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &a)| {
            if n < p.m {
                Complex64::new(0.0, 0.0)
            } else {
                a * scale / (beta + n as f64)
            }
        })
        .collect();
    let n_max = s.order();
    let tail = s.tail_bound() * scale.abs() / (beta + (n_max + 1).max(p.m) as f64);
    let coeff_error = s.coeff_error() * scale.abs() / (beta + p.m as f64);
    Ok(TruncatedPowerSeries::new(coeffs, tail)?.with_coeff_error(coeff_error))
}

/// `Σ_{n>=m} |a_n| r^n / (n + β)`, without the `(1 + β)` prefactor, with tail
/// error `B r^(N+1) / ((N + 1 + β)(1 - r))`.
pub fn bernardi_majorant(s: &TruncatedPowerSeries, p: &BernardiParams, r: f64) -> Result<Estimate> {
    check_radius(r)?;
    let beta = p.beta;
    let mut value = 0.0;
    let mut weights = 0.0;
    let mut rn = 1.0;
    for (n, c) in s.coeffs().iter().enumerate() {
        if n >= p.m {
            let w = rn / (n as f64 + beta);
            value += c.norm() * w;
            weights += w;
        }
        rn *= r;
    }
    let n_max = s.order();
    let next = (n_max + 1).max(p.m);
    let error = s.tail_bound() * r.powi(next as i32) / ((next as f64 + beta) * (1.0 - r)) + s.coeff_error() * weights;
    Ok(Estimate::new(value, error))
}

/// Evaluate `(1 + β) z^(-β) ∫_0^z f(ξ) ξ^(β-1) dξ` through the radial
/// substitution `ξ = t z`.
///
/// Writing `f(w) = w^m g(w)` the integral is `(1 + β) z^m ∫_0^1 t^(β'-1) g(tz) dt`
/// with `β' = m + β > 0`. For `β' < 1` the endpoint singularity is removed by
/// `t = u^(1/β')`, giving `(1/β') ∫_0^1 g(u^(1/β') z) du`.
pub fn bernardi_integral_oracle(s: &TruncatedPowerSeries, z: Complex64, p: &BernardiParams) -> Result<QuadResult> {
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("|z| must be < 1, got {}", z.norm())));
    }
    check_leading_zeros(s, p)?;
    let beta = p.beta;
    let scale = 1.0 + beta;
    if z == Complex64::new(0.0, 0.0) {
        let value = match (p.m, s.coeffs().first()) {
            (0, Some(&a0)) => a0 * scale / beta,
            _ => Complex64::new(0.0, 0.0),
        };
        return Ok(QuadResult {
            value,
            error: 0.0,
            evals: 0,
            panels: 0,
        });
    }

    let shifted: Vec<Complex64> = s.coeffs().iter().skip(p.m).copied().collect();
    let g = |w: Complex64| {
        shifted
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    };
    let order = p.m as f64 + beta;
    let prefactor = z.powu(p.m as u32) * scale;

    let (quad, jacobian) = if order < 1.0 {
        let q = integrate(|u| g(z * u.powf(1.0 / order)), 0.0, 1.0, QUAD_TARGET, QUAD_MAX_EVALS)?;
        (q, 1.0 / order)
    } else {
        let q = integrate(
            |t| g(z * t) * t.powf(order - 1.0),
            0.0,
            1.0,
            QUAD_TARGET,
            QUAD_MAX_EVALS,
        )?;
        (q, 1.0)
    };
    Ok(QuadResult {
        value: quad.value * prefactor * jacobian,
        error: quad.error * prefactor.norm() * jacobian,
        ..quad
    })
}

/// `(1/r) ln(1/(1-r))`, equal to one at `r = 0`.
pub fn log_bound(r: f64) -> Result<f64> {
    check_radius(r)?;
    if r < LOG_BOUND_SERIES_CUTOFF {
        // 1 + r/2 + r^2/3 + ... + r^5/6
        Ok((0..6).rev().fold(0.0, |acc, k| acc * r + 1.0 / (k + 1) as f64))
    } else {
        Ok(-(-r).ln_1p() / r)
    }
}

/// `Σ_{n>=start} r^n / (n + β)` at the default truncation target.
pub fn lerch_tail_sum(r: f64, beta: f64, start: usize) -> Result<Estimate> {
    lerch_tail_sum_to(r, beta, start, TRUNCATION_TARGET)
}

/// `Σ_{n>=start} r^n / (n + β)` summed until the omitted part, bounded by
/// `r^(N+1) / ((N + 1 + β)(1 - r))`, is at most `target`.
pub fn lerch_tail_sum_to(r: f64, beta: f64, start: usize, target: f64) -> Result<Estimate> {
    check_radius(r)?;
    if !beta.is_finite() || beta <= -(start as f64) {
        return Err(Error::domain(format!("beta must exceed -start = -{start}, got {beta}")));
    }
    if !(target > 0.0) {
        return Err(Error::domain("truncation target must be positive"));
    }
    let tail_after = |n: usize, rn1: f64| rn1 / ((n as f64 + 1.0 + beta) * (1.0 - r));

    let mut rn = if start == 0 { 1.0 } else { r.powi(start as i32) };
    // omitted part of the empty sum
    let empty = rn / ((start as f64 + beta) * (1.0 - r));
    if empty <= target {
        return Ok(Estimate::new(0.0, empty));
    }
    let mut value = 0.0;
    let mut n = start;
    loop {
        value += rn / (n as f64 + beta);
        rn *= r;
        let err = tail_after(n, rn);
        if err <= target {
            return Ok(Estimate::new(value, err));
        }
        n += 1;
        if n - start > MAX_ORDER {
            return Err(Error::TruncationCap {
                r,
                needed: f64::INFINITY,
                cap: MAX_ORDER,
            });
        }
    }
}
