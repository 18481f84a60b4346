//! Verification suites: the coefficient bound on `Ω_γ`, the Bohr-type
//! inequalities below each radius, sharpness witnesses above it, the order of
//! the extremal remainders, and the closed-form series identities.
//!
//! Every comparison allows a slack of `SLACK_FACTOR` times the certified
//! numerical error of the quantities compared.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{bernardi_extremal_decomposition, cesaro_extremal_decomposition, Decomposition, ExtremalParams};
use crate::operators::{bernardi_majorant, cesaro_majorant, log_bound, BernardiParams};
use crate::radii::{bernardi_radius, cesaro_radius};
use crate::sampling::{sample_schur_omega, SchurSampleSpec};
use crate::series::{majorant_eval, truncation_order, DomainGamma, TruncatedPowerSeries};
use crate::tolerances::{
    rounding_allowance, LEMMA1_DENOMINATOR_FLOOR, RADIUS_TOL, REMAINDER_SIGNAL_FACTOR, SLACK_FACTOR,
};

/// Truncation target for sampled series in the inequality scans.
const SCAN_TARGET: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Cesaro,
    Bernardi,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Cesaro => "cesaro",
            OperatorKind::Bernardi => "bernardi",
        }
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cesaro" => Ok(OperatorKind::Cesaro),
            "bernardi" => Ok(OperatorKind::Bernardi),
            other => Err(Error::domain(format!("unknown operator {other:?}"))),
        }
    }
}

/// Draw `count` sample specs from a master stream: degree uniform in
/// `0..=degree_max`, independent sub-seeds.
pub fn sample_specs(gamma: DomainGamma, count: usize, degree_max: usize, seed: u64) -> Result<Vec<SchurSampleSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.random_range(0..=degree_max);
            let sub_seed: u64 = rng.random();
            SchurSampleSpec::with_max_degree(degree, sub_seed, gamma, degree_max)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub gamma: DomainGamma,
    /// Samples that entered the ratio.
    pub samples: usize,
    /// Samples skipped because `1 - |a_0|^2` was below the floor.
    pub skipped: usize,
    /// `max |a_n| (1 + γ) / (1 - |a_0|^2)` over samples and `1 <= n <= N`.
    pub max_ratio: f64,
    pub worst_spec: Option<SchurSampleSpec>,
    pub worst_n: usize,
}

/// `max_{1<=n<=N} |a_n| (1 + γ)/(1 - |a_0|^2)` and the index attaining it, or
/// `None` when the denominator is below the floor.
pub fn lemma1_ratio(s: &TruncatedPowerSeries, gamma: DomainGamma) -> Option<(f64, usize)> {
    let a0 = s.coeffs()[0].norm();
    let denom = 1.0 - a0 * a0;
    if denom < LEMMA1_DENOMINATOR_FLOOR {
        return None;
    }
    let scale = (1.0 + gamma.value()) / denom;
    s.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| (c.norm() * scale, n))
        .max_by(|x, y| x.0.total_cmp(&y.0))
        .or(Some((0.0, 0)))
}

pub fn lemma1_check(
    gamma: DomainGamma,
    num_samples: usize,
    degree_max: usize,
    order: usize,
    seed: u64,
) -> Result<Lemma1Report> {
    if num_samples == 0 {
        return Err(Error::domain("lemma1_check needs at least one sample"));
    }
    let specs = sample_specs(gamma, num_samples, degree_max, seed)?;
    let ratios: Vec<Option<(f64, usize)>> = specs
        .par_iter()
        .map(|spec| sample_schur_omega(spec, order).map(|s| lemma1_ratio(&s, gamma)))
        .collect::<Result<_>>()?;

    let mut report = Lemma1Report {
        gamma,
        samples: 0,
        skipped: 0,
        max_ratio: 0.0,
        worst_spec: None,
        worst_n: 0,
    };
    for (spec, ratio) in specs.iter().zip(ratios) {
        match ratio {
            None => report.skipped += 1,
            Some((ratio, n)) => {
                report.samples += 1;
                if report.worst_spec.is_none() || ratio > report.max_ratio {
                    report.max_ratio = ratio;
                    report.worst_spec = Some(*spec);
                    report.worst_n = n;
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub op: OperatorKind,
    pub gamma: DomainGamma,
    pub beta: Option<f64>,
    pub radius: f64,
    pub r: f64,
    pub bound: f64,
    pub samples: usize,
    pub violations: usize,
    /// Largest `majorant - bound` seen; negative when every sample is strictly
    /// inside the bound.
    pub max_margin: f64,
    pub worst_spec: Option<SchurSampleSpec>,
}

/// Operator majorant of seeded Schur samples on `Ω_γ` at `r = fraction * radius`
/// against the operator bound (`(1/r) ln(1/(1-r))` for Cesàro, `1/β` for
/// Bernardi).
pub fn below_radius_check(
    op: OperatorKind,
    gamma: DomainGamma,
    beta: Option<f64>,
    fraction: f64,
    num_samples: usize,
    degree_max: usize,
    seed: u64,
) -> Result<InequalityReport> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::domain(format!(
            "radius fraction must lie in (0,1], got {fraction}"
        )));
    }
    let (radius, bound_at, params) = match op {
        OperatorKind::Cesaro => (cesaro_radius(gamma, RADIUS_TOL)?.value, None, None),
        OperatorKind::Bernardi => {
            let beta = beta.ok_or_else(|| Error::domain("the Bernardi check needs beta"))?;
            let params = BernardiParams::with_beta(beta)?;
            (
                bernardi_radius(gamma, beta, RADIUS_TOL)?.value,
                Some(1.0 / beta),
                Some(params),
            )
        }
    };
    let r = fraction * radius;
    let bound = match bound_at {
        Some(b) => b,
        None => log_bound(r)?,
    };
    let order = truncation_order(r, 1.0, SCAN_TARGET)?;
    let specs = sample_specs(gamma, num_samples, degree_max, seed)?;
    let margins: Vec<(f64, f64)> = specs
        .par_iter()
        .map(|spec| {
            let s = sample_schur_omega(spec, order)?;
            let m = match &params {
                None => cesaro_majorant(&s, r)?,
                Some(p) => bernardi_majorant(&s, p, r)?,
            };
            let err = m.error + rounding_allowance(order + 1, m.value) + rounding_allowance(4, bound);
            Ok((m.value - bound, err))
        })
        .collect::<Result<_>>()?;

    let mut report = InequalityReport {
        op,
        gamma,
        beta: params.map(|p| p.beta()),
        radius,
        r,
        bound,
        samples: specs.len(),
        violations: 0,
        max_margin: f64::NEG_INFINITY,
        worst_spec: None,
    };
    for (spec, (margin, err)) in specs.iter().zip(margins) {
        if margin > SLACK_FACTOR * err {
            report.violations += 1;
        }
        if margin > report.max_margin {
            report.max_margin = margin;
            report.worst_spec = Some(*spec);
        }
    }
    Ok(report)
}

/// `M_f(r) = Σ |a_n| r^n` of seeded samples against one, at `r`.
pub fn bohr_check(
    gamma: DomainGamma,
    r: f64,
    num_samples: usize,
    degree_max: usize,
    seed: u64,
) -> Result<(usize, f64)> {
    let order = truncation_order(r, 1.0, SCAN_TARGET)?;
    let specs = sample_specs(gamma, num_samples, degree_max, seed)?;
    let excess: Vec<(f64, f64)> = specs
        .par_iter()
        .map(|spec| {
            let m = majorant_eval(&sample_schur_omega(spec, order)?, r)?;
            Ok((m.value - 1.0, m.error + rounding_allowance(order + 1, m.value)))
        })
        .collect::<Result<_>>()?;
    let violations = excess.iter().filter(|(m, e)| *m > SLACK_FACTOR * e).count();
    let worst = excess.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
    Ok((violations, worst))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub op: OperatorKind,
    pub gamma: DomainGamma,
    pub beta: Option<f64>,
    pub r: f64,
    pub radius: f64,
    pub a_values: Vec<f64>,
    /// Extremal majorant minus the operator bound, per `a`.
    pub margins: Vec<f64>,
    /// Certified numerical error of each margin.
    pub errors: Vec<f64>,
    pub witness_found: bool,
    /// First `a` whose margin clears the slack.
    pub witness_a: Option<f64>,
    /// Set for Bernardi scans with `0 < β < 1`, outside the regime where the
    /// extremal construction is known to be sharp.
    pub exploratory: bool,
}

fn build_sharpness(
    op: OperatorKind,
    gamma: DomainGamma,
    beta: Option<f64>,
    r: f64,
    radius: f64,
    a_list: &[f64],
    decompose: impl Fn(&ExtremalParams) -> Result<Decomposition>,
) -> Result<SharpnessReport> {
    if !(r > radius) || !(r < 1.0) {
        return Err(Error::precondition(format!(
            "r = {r} must lie strictly between the radius {radius} and 1"
        )));
    }
    if a_list.is_empty() {
        return Err(Error::domain("the list of extremal parameters is empty"));
    }
    let mut margins = Vec::with_capacity(a_list.len());
    let mut errors = Vec::with_capacity(a_list.len());
    let mut witness_a = None;
    for &a in a_list {
        let d = decompose(&ExtremalParams::new(a, gamma)?)?;
        let margin = d.majorant.value - d.bound;
        if witness_a.is_none() && margin > SLACK_FACTOR * d.numerical_error {
            witness_a = Some(a);
        }
        margins.push(margin);
        errors.push(d.numerical_error);
    }
    Ok(SharpnessReport {
        op,
        gamma,
        beta,
        r,
        radius,
        a_values: a_list.to_vec(),
        margins,
        errors,
        witness_found: witness_a.is_some(),
        witness_a,
        exploratory: beta.is_some_and(|b| b < 1.0),
    })
}

pub fn sharpness_scan_cesaro(gamma: DomainGamma, r: f64, a_list: &[f64]) -> Result<SharpnessReport> {
    let radius = cesaro_radius(gamma, RADIUS_TOL)?.value;
    build_sharpness(OperatorKind::Cesaro, gamma, None, r, radius, a_list, |p| {
        cesaro_extremal_decomposition(p, r)
    })
}

pub fn sharpness_scan_bernardi(gamma: DomainGamma, beta: f64, r: f64, a_list: &[f64]) -> Result<SharpnessReport> {
    let radius = bernardi_radius(gamma, beta, RADIUS_TOL)?.value;
    build_sharpness(OperatorKind::Bernardi, gamma, Some(beta), r, radius, a_list, |p| {
        bernardi_extremal_decomposition(p, beta, r)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderFit {
    pub op: OperatorKind,
    pub gamma: DomainGamma,
    pub beta: Option<f64>,
    pub r: f64,
    /// Least-squares slope of `ln|remainder|` against `ln(1 - a)`.
    pub slope: f64,
    pub a_values: Vec<f64>,
    pub remainders: Vec<f64>,
    pub errors: Vec<f64>,
    /// Which points cleared the noise floor and entered the fit.
    pub used: Vec<bool>,
}

/// The ladder `1 - 10^-k`, `k = 1..=4`.
pub fn default_ladder() -> Vec<f64> {
    (1..=4).map(|k| 1.0 - 10f64.powi(-k)).collect()
}

pub fn remainder_order_check(
    op: OperatorKind,
    gamma: DomainGamma,
    beta: Option<f64>,
    r: f64,
    a_list: &[f64],
) -> Result<RemainderFit> {
    let decompose = |p: &ExtremalParams| match op {
        OperatorKind::Cesaro => cesaro_extremal_decomposition(p, r),
        OperatorKind::Bernardi => {
            let beta = beta.ok_or_else(|| Error::domain("the Bernardi remainder needs beta"))?;
            bernardi_extremal_decomposition(p, beta, r)
        }
    };
    let mut fit = RemainderFit {
        op,
        gamma,
        beta: if op == OperatorKind::Bernardi { beta } else { None },
        r,
        slope: f64::NAN,
        a_values: a_list.to_vec(),
        remainders: Vec::with_capacity(a_list.len()),
        errors: Vec::with_capacity(a_list.len()),
        used: Vec::with_capacity(a_list.len()),
    };
    let mut points = Vec::new();
    for &a in a_list {
        let d = decompose(&ExtremalParams::new(a, gamma)?)?;
        let usable = d.remainder.abs() > REMAINDER_SIGNAL_FACTOR * d.numerical_error;
        if usable {
            points.push(((1.0 - a).ln(), d.remainder.abs().ln()));
        }
        fit.remainders.push(d.remainder);
        fit.errors.push(d.numerical_error);
        fit.used.push(usable);
    }
    if points.len() < 2 {
        return Err(Error::Inconclusive(format!(
            "{} of {} remainders rise above the noise floor; a slope needs two",
            points.len(),
            a_list.len()
        )));
    }
    fit.slope = least_squares_slope(&points);
    Ok(fit)
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub grid: Vec<f64>,
    /// `Σ_{n>=1} n r^n/(n+1) = 1/(1-r) - (1/r) ln(1/(1-r))`.
    pub weighted_geometric: f64,
    /// `Σ_{n>=0} r^n/(n+1) = (1/r) ln(1/(1-r))`.
    pub log_series: f64,
    /// `Σ_{n>=1} (1/(n+1)) Σ_{k=1}^{n} q^(k-1) r^n = (L(r) - L(qr))/(1-q)`.
    pub partial_geometric: f64,
    pub max_deviation: f64,
}

/// Ratios `a(1-γ)/(1-aγ)` of a few extremal functions.
const IDENTITY_RATIOS: [(f64, f64); 3] = [(0.5, 0.0), (0.9, 0.3), (0.99, 0.6)];

/// Direct summation of the series identities used by the extremal
/// expansions, over `r = 0.1, ..., 0.9`.
pub fn identity_suite() -> Result<IdentityReport> {
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut dev = [0.0f64; 3];
    for &r in &grid {
        let order = truncation_order(r, 1.0, 1e-16)?;
        let lb = log_bound(r)?;

        let (mut weighted, mut plain) = (0.0, 0.0);
        let mut rn = 1.0;
        for n in 0..=order {
            let w = rn / (n + 1) as f64;
            plain += w;
            weighted += n as f64 * w;
            rn *= r;
        }
        dev[0] = dev[0].max((weighted - (1.0 / (1.0 - r) - lb)).abs());
        dev[1] = dev[1].max((plain - lb).abs());

        for (a, g) in IDENTITY_RATIOS {
            let q = a * (1.0 - g) / (1.0 - a * g);
            let order = truncation_order(r, 1.0 / (1.0 - q), 1e-16)?;
            let mut inner = 0.0;
            let mut qk = 1.0;
            let mut rn = r;
            let mut sum = 0.0;
            for n in 1..=order {
                inner += qk;
                qk *= q;
                sum += inner / (n + 1) as f64 * rn;
                rn *= r;
            }
            let closed = (lb - log_bound(q * r)?) / (1.0 - q);
            dev[2] = dev[2].max((sum - closed).abs());
        }
    }
    Ok(IdentityReport {
        grid,
        weighted_geometric: dev[0],
        log_series: dev[1],
        partial_geometric: dev[2],
        max_deviation: dev.iter().copied().fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::blaschke_coeffs;
    use num_complex::Complex64;

    #[test]
    fn mobius_equality_case() {
        for a in [0.1, 0.5, 0.9] {
            let s = blaschke_coeffs(&[Complex64::new(a, 0.0)], Complex64::new(1.0, 0.0), 10).unwrap();
            let (ratio, n) = lemma1_ratio(&s, DomainGamma::unit_disk()).unwrap();
            assert!((ratio - 1.0).abs() < 1e-14);
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn constant_sample_is_skipped() {
        let s = blaschke_coeffs(&[], Complex64::new(0.0, 1.0), 5).unwrap();
        assert!(lemma1_ratio(&s, DomainGamma::unit_disk()).is_none());
    }

    #[test]
    fn lemma1_needs_samples() {
        assert!(lemma1_check(DomainGamma::unit_disk(), 0, 4, 10, 1).is_err());
    }

    #[test]
    fn sample_specs_are_deterministic() {
        let g = DomainGamma::new(0.25).unwrap();
        assert_eq!(sample_specs(g, 20, 8, 5).unwrap(), sample_specs(g, 20, 8, 5).unwrap());
        assert!(sample_specs(g, 200, 8, 5).unwrap().iter().all(|s| s.degree() <= 8));
    }

    #[test]
    fn identities_at_half() {
        let r = 0.5f64;
        let lb = log_bound(r).unwrap();
        assert!((1.0 / (1.0 - r) - lb - (2.0 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-15);
        let rep = identity_suite().unwrap();
        assert!(rep.max_deviation <= 1e-10, "{rep:?}");
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(f64, f64)> = (1..5).map(|k| (-(k as f64), 2.0 * -(k as f64) + 0.3)).collect();
        assert!((least_squares_slope(&pts) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_point_ladder_is_inconclusive() {
        let g = DomainGamma::new(0.3).unwrap();
        let err = remainder_order_check(OperatorKind::Cesaro, g, None, 0.4, &[0.99]).unwrap_err();
        assert!(matches!(err, Error::Inconclusive(_)));
    }

    #[test]
    fn operator_names_parse() {
        assert_eq!("cesaro".parse::<OperatorKind>().unwrap(), OperatorKind::Cesaro);
        assert_eq!("bernardi".parse::<OperatorKind>().unwrap(), OperatorKind::Bernardi);
        assert!("libera".parse::<OperatorKind>().is_err());
    }
}
