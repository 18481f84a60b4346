//! The radius equations and a bracketed bisection/Newton solver.
//!
//! Every equation is oriented so that `g > 0` to the left of the root and
//! `g < 0` to the right.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{lerch_tail_sum_to, BernardiParams};
use crate::series::{DomainGamma, Estimate};
use crate::tolerances::RADIUS_SERIES_TARGET;

const NEWTON_STEPS: usize = 8;

/// Left end of the Cesàro bracket; `g(0) = 0` is a spurious root and
/// `g'(0) = 1 + γ > 0`.
pub const CESARO_BRACKET_LO: f64 = 1e-6;
pub const CESARO_BRACKET_HI: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn finite(x: f64, gx: f64) -> Result<f64> {
    if gx.is_finite() {
        Ok(gx)
    } else {
        Err(Error::numerical(format!("g({x}) = {gx} is not finite")))
    }
}

/// Bisection down to bracket width `tol`, then at most eight Newton steps with
/// a centered finite-difference slope. A Newton step that leaves the bracket
/// sends the estimate back to the bisection midpoint and ends the polish.
pub fn solve_bracketed<G>(mut g: G, lo: f64, hi: f64, tol: f64) -> Result<RadiusResult>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "need lo < hi and tol > 0 (lo={lo}, hi={hi}, tol={tol})"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut g_lo = finite(lo, g(lo)?)?;
    let g_hi = finite(hi, g(hi)?)?;
    if g_lo == 0.0 || g_hi == 0.0 {
        let value = if g_lo == 0.0 { lo } else { hi };
        return Ok(RadiusResult {
            value,
            bracket_lo: value,
            bracket_hi: value,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Bracketing { lo, hi, g_lo, g_hi });
    }

    let mut iterations = 0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = finite(mid, g(mid)?)?;
        iterations += 1;
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }

    let midpoint = lo + 0.5 * (hi - lo);
    let mut x = midpoint;
    let mut gx = finite(x, g(x)?)?;
    for _ in 0..NEWTON_STEPS {
        if gx == 0.0 {
            break;
        }
        let h = 1e-7 * x.abs().max(1e-3);
        let slope = match (g(x + h), g(x - h)) {
            (Ok(a), Ok(b)) => (a - b) / (2.0 * h),
            _ => break,
        };
        if !slope.is_finite() || slope == 0.0 {
            break;
        }
        let next = x - gx / slope;
        if !(lo..=hi).contains(&next) {
            x = midpoint;
            gx = finite(x, g(x)?)?;
            break;
        }
        let g_next = finite(next, g(next)?)?;
        iterations += 1;
        if g_next.abs() >= gx.abs() {
            break;
        }
        x = next;
        gx = g_next;
    }

    Ok(RadiusResult {
        value: x,
        bracket_lo: lo,
        bracket_hi: hi,
        residual: gx.abs(),
        iterations,
        converged: hi - lo <= tol,
    })
}

/// `(3 + γ)(1 - x) ln(1/(1 - x)) - 2x`.
pub fn cesaro_equation(gamma: DomainGamma, x: f64) -> f64 {
    (3.0 + gamma.value()) * (1.0 - x) * -(-x).ln_1p() - 2.0 * x
}

/// `1/β - (2/(1+γ)) Σ_{n>=1} r^n/(n+β)`, with the certified error of the sum.
pub fn bernardi_equation(gamma: DomainGamma, beta: f64, r: f64, target: f64) -> Result<Estimate> {
    let scale = 2.0 / (1.0 + gamma.value());
    let s = lerch_tail_sum_to(r, beta, 1, target)?;
    Ok(Estimate::new(1.0 / beta - scale * s.value, scale * s.error))
}

/// `x^(-m) (x^m/(m+β) - 2 Σ_{n>=m+1} x^n/(n+β)) = 1/(m+β) - 2 Σ_{j>=1} x^j/(j+m+β)`.
pub fn bernardi_classic_equation(params: &BernardiParams, x: f64, target: f64) -> Result<Estimate> {
    let shift = params.m() as f64 + params.beta();
    let s = lerch_tail_sum_to(x, shift, 1, target)?;
    Ok(Estimate::new(1.0 / shift - 2.0 * s.value, 2.0 * s.error))
}

pub fn cesaro_radius(gamma: DomainGamma, tol: f64) -> Result<RadiusResult> {
    solve_bracketed(
        |x| Ok(cesaro_equation(gamma, x)),
        CESARO_BRACKET_LO,
        CESARO_BRACKET_HI,
        tol,
    )
}

/// Bracket a decreasing equation with `g(0) > 0` by moving the right end
/// toward one until the sign changes.
fn bracket_from_zero<G>(g: &mut G) -> Result<(f64, f64)>
where
    G: FnMut(f64) -> Result<f64>,
{
    let mut lo = 0.0;
    let mut hi = 0.5;
    for _ in 0..60 {
        if g(hi)? < 0.0 {
            return Ok((lo, hi));
        }
        lo = hi;
        hi = 0.5 * (1.0 + hi);
    }
    Err(Error::Bracketing {
        lo,
        hi,
        g_lo: g(lo)?,
        g_hi: g(hi)?,
    })
}

pub fn bernardi_radius(gamma: DomainGamma, beta: f64, tol: f64) -> Result<RadiusResult> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    let mut g = |r: f64| bernardi_equation(gamma, beta, r, RADIUS_SERIES_TARGET).map(|e| e.value);
    let (lo, hi) = bracket_from_zero(&mut g)?;
    solve_bracketed(g, lo, hi, tol)
}

pub fn bernardi_radius_classic(beta: f64, m: usize, tol: f64) -> Result<RadiusResult> {
    let params = BernardiParams::new(beta, m)?;
    let mut g = |x: f64| bernardi_classic_equation(&params, x, RADIUS_SERIES_TARGET).map(|e| e.value);
    let (lo, hi) = bracket_from_zero(&mut g)?;
    solve_bracketed(g, lo, hi, tol)
}

/// `(1 + γ)/(3 + γ)`, the Bohr radius of the identity operator on `B(Ω_γ)`
/// obtained from the coefficient bound `|a_n| <= (1 - |a_0|^2)/(1 + γ)`. Used
/// as a reference value only.
pub fn bohr_radius_omega(gamma: DomainGamma) -> f64 {
    let g = gamma.value();
    (1.0 + g) / (3.0 + g)
}

/// One of the three radius problems, by name and parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "equation", rename_all = "kebab-case")]
pub enum RadiusEquation {
    Cesaro { gamma: DomainGamma },
    Bernardi { gamma: DomainGamma, beta: f64 },
    BernardiClassic { beta: f64, m: usize },
}

impl RadiusEquation {
    pub fn name(&self) -> &'static str {
        match self {
            RadiusEquation::Cesaro { .. } => "cesaro",
            RadiusEquation::Bernardi { .. } => "bernardi",
            RadiusEquation::BernardiClassic { .. } => "bernardi-classic",
        }
    }

    pub fn solve(&self, tol: f64) -> Result<RadiusResult> {
        match *self {
            RadiusEquation::Cesaro { gamma } => cesaro_radius(gamma, tol),
            RadiusEquation::Bernardi { gamma, beta } => bernardi_radius(gamma, beta, tol),
            RadiusEquation::BernardiClassic { beta, m } => bernardi_radius_classic(beta, m, tol),
        }
    }

    /// The defining equation at `x`, with the certified error of any series
    /// inside it summed to `target`.
    pub fn evaluate(&self, x: f64, target: f64) -> Result<Estimate> {
        match *self {
            RadiusEquation::Cesaro { gamma } => Ok(Estimate::new(cesaro_equation(gamma, x), 0.0)),
            RadiusEquation::Bernardi { gamma, beta } => bernardi_equation(gamma, beta, x, target),
            RadiusEquation::BernardiClassic { beta, m } => {
                bernardi_classic_equation(&BernardiParams::new(beta, m)?, x, target)
            }
        }
    }
}
