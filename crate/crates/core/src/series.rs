//! Truncated power series with a certified bound on the omitted tail, and the
//! function constructors built on them (Möbius factors, Blaschke products,
//! composition with the affine map `G(z) = (1 - γ) z + γ`).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tolerances::{MAX_ORDER, TRUNCATION_TARGET};

/// Parameter of the disk `Ω_γ = {|z + γ/(1-γ)| < 1/(1-γ)}`, `0 <= γ < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DomainGamma(f64);

impl DomainGamma {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && (0.0..1.0).contains(&gamma) {
            Ok(DomainGamma(gamma))
        } else {
            Err(Error::domain("gamma must lie in [0,1)"))
        }
    }

    pub fn unit_disk() -> Self {
        DomainGamma(0.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The affine map `G` sending `Ω_γ` onto the unit disk.
    pub fn affine_map(self, z: Complex64) -> Complex64 {
        z * (1.0 - self.0) + self.0
    }

    /// Whether `z` lies in the open disk `Ω_γ`.
    pub fn contains(self, z: Complex64) -> bool {
        let g = self.0;
        (z + g / (1.0 - g)).norm() < 1.0 / (1.0 - g)
    }
}

/// A value together with a nonnegative bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Estimate { value, error }
    }
}

/// Coefficients `c_0..c_N` of a power series plus a uniform bound `B` with
/// `|c_n| <= B` for every `n > N`.
///
/// `coeff_error` bounds the absolute error of each stored coefficient when the
/// coefficients themselves come out of a truncated computation; it is zero for
/// series given exactly. The `schur` flag records that the series represents a
/// function bounded by one on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPowerSeries {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
    coeff_error: f64,
    schur: bool,
}

impl TruncatedPowerSeries {
    pub fn new(coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a series needs at least one coefficient"));
        }
        if let Some(n) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain(format!("coefficient {n} is not finite")));
        }
        if !(tail_bound >= 0.0) || !tail_bound.is_finite() {
            return Err(Error::domain("tail bound must be finite and nonnegative"));
        }
        Ok(TruncatedPowerSeries {
            coeffs,
            tail_bound,
            coeff_error: 0.0,
            schur: false,
        })
    }

    /// A polynomial: exact coefficients, zero tail.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::new(coeffs, 0.0)
    }

    pub fn from_real(coeffs: &[f64], tail_bound: f64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), tail_bound)
    }

    /// A truncation of a function in the Schur class of the unit disk.
    pub fn schur(coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if tail_bound > 1.0 {
            return Err(Error::domain("Schur-class series need tail_bound <= 1"));
        }
        let mut s = Self::new(coeffs, tail_bound)?;
        s.schur = true;
        Ok(s)
    }

    pub(crate) fn with_coeff_error(mut self, coeff_error: f64) -> Self {
        self.coeff_error = coeff_error;
        self
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation order `N` (index of the last stored coefficient).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn coeff_error(&self) -> f64 {
        self.coeff_error
    }

    pub fn is_schur(&self) -> bool {
        self.schur
    }

    /// The same polynomial with zero coefficients appended up to `order`.
    /// Only exact polynomials (zero tail) can be extended this way.
    pub fn zero_padded(&self, order: usize) -> Result<Self> {
        if self.tail_bound != 0.0 {
            return Err(Error::precondition("only series with a zero tail can be padded"));
        }
        let mut out = self.clone();
        if order > self.order() {
            out.coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        }
        Ok(out)
    }

    /// Sum of the stored terms at `z` (Horner).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Bound on `|f(z) - self.eval(z)|` for `|z| = r < 1`.
    pub fn eval_error(&self, r: f64) -> f64 {
        let n = self.order();
        let rn1 = r.powi(n as i32 + 1);
        self.tail_bound * rn1 / (1.0 - r) + self.coeff_error * geometric_partial(r, n)
    }
}

/// `sum_{n=0}^{N} r^n`.
pub(crate) fn geometric_partial(r: f64, n: usize) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        (1.0 - r.powi(n as i32 + 1)) / (1.0 - r)
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in [0,1), got {r}")))
    }
}

/// Smallest `N` with `tail_bound * r^(N+1) / (1 - r) <= target`.
pub fn truncation_order(r: f64, tail_bound: f64, target: f64) -> Result<usize> {
    check_radius(r)?;
    if tail_bound == 0.0 || r == 0.0 || tail_bound / (1.0 - r) * r <= target {
        return Ok(0);
    }
    // r^(N+1) <= target (1 - r) / tail_bound
    let needed = ((target * (1.0 - r) / tail_bound).ln() / r.ln()).ceil() - 1.0;
    if !needed.is_finite() || needed > MAX_ORDER as f64 {
        return Err(Error::TruncationCap {
            r,
            needed,
            cap: MAX_ORDER,
        });
    }
    let mut n = needed.max(0.0) as usize;
    // guard the floating-point ceiling
    while tail_bound * r.powi(n as i32 + 1) / (1.0 - r) > target {
        n += 1;
        if n > MAX_ORDER {
            return Err(Error::TruncationCap {
                r,
                needed: n as f64,
                cap: MAX_ORDER,
            });
        }
    }
    Ok(n)
}

/// Truncation order for the default target at a Schur-type tail bound of one.
pub fn default_order(r: f64) -> Result<usize> {
    truncation_order(r, 1.0, TRUNCATION_TARGET)
}

/// Majorant `sum |c_n| r^n` over the stored coefficients, with the bound
/// `tail_bound * r^(N+1) / (1 - r)` on the omitted tail.
pub fn majorant_eval(s: &TruncatedPowerSeries, r: f64) -> Result<Estimate> {
    check_radius(r)?;
    let mut value = 0.0;
    let mut rn = 1.0;
    for c in s.coeffs() {
        value += c.norm() * rn;
        rn *= r;
    }
    Ok(Estimate::new(value, s.eval_error(r)))
}

/// Product of two coefficient lists truncated after index `n`.
pub(crate) fn mul_truncated(x: &[Complex64], y: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, &xi) in x.iter().enumerate().take(n + 1) {
        if xi == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &yj) in y.iter().enumerate().take(n + 1 - i) {
            out[i + j] += xi * yj;
        }
    }
    out
}

/// Taylor coefficients through order `n` of `z -> φ_a(G(z))` where
/// `φ_a(w) = (a - w) / (1 - conj(a) w)` and `G(z) = (1 - γ) z + γ`.
///
/// With `d = 1 - conj(a) γ` the composition is `(p - s z) / (1 - q z)`,
/// `p = (a - γ)/d`, `s = (1 - γ)/d`, `q = conj(a)(1 - γ)/d`.
pub(crate) fn composed_mobius_series(a: Complex64, gamma: f64, n: usize) -> Vec<Complex64> {
    let d = Complex64::new(1.0, 0.0) - a.conj() * gamma;
    let p = (a - gamma) / d;
    let s = Complex64::new(1.0 - gamma, 0.0) / d;
    let q = a.conj() * (1.0 - gamma) / d;
    let lead = p * q - s;
    let mut out = Vec::with_capacity(n + 1);
    out.push(p);
    let mut qk = Complex64::new(1.0, 0.0);
    for _ in 1..=n {
        out.push(qk * lead);
        qk *= q;
    }
    out
}

fn check_blaschke_inputs(zeros: &[Complex64], phase: Complex64) -> Result<()> {
    for (j, z) in zeros.iter().enumerate() {
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!(
                "Blaschke zero {j} = {z} must lie strictly inside the unit disk"
            )));
        }
    }
    if !((phase.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::domain(format!("phase {phase} must be unimodular")));
    }
    Ok(())
}

/// Taylor coefficients through order `n` of `phase * prod_j (a_j - z)/(1 - conj(a_j) z)`.
pub fn blaschke_coeffs(zeros: &[Complex64], phase: Complex64, n: usize) -> Result<TruncatedPowerSeries> {
    composed_blaschke(zeros, phase, DomainGamma::unit_disk(), n)
}

/// The Blaschke product composed with `G`, built factor by factor from the
/// closed-form composed Möbius maps.
pub(crate) fn composed_blaschke(
    zeros: &[Complex64],
    phase: Complex64,
    gamma: DomainGamma,
    n: usize,
) -> Result<TruncatedPowerSeries> {
    check_blaschke_inputs(zeros, phase)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[0] = phase;
    for &a in zeros {
        let factor = composed_mobius_series(a, gamma.value(), n);
        coeffs = mul_truncated(&coeffs, &factor, n);
    }
    TruncatedPowerSeries::schur(coeffs, 1.0)
}

/// Iterations spent bounding a single binomial tail before falling back to
/// the total mass `1/(1-γ)`.
const BINOMIAL_TAIL_BUDGET: usize = 100_000;

/// First `n + 1` Taylor coefficients of `z -> h((1 - γ) z + γ)`:
/// `a_n = sum_{k>=n} b_k C(k,n) γ^(k-n) (1-γ)^n`.
///
/// Binomial weights are advanced with running updates in log space, which
/// keeps `(1-γ)^n` from underflowing at large `n`. Unknown coefficients of `h`
/// beyond its order contribute at most `tail_bound * sum_{k>K} w(k, n)`, which
/// is folded into the output `coeff_error`.
pub fn affine_compose(h: &TruncatedPowerSeries, gamma: DomainGamma, n: usize) -> Result<TruncatedPowerSeries> {
    let g = gamma.value();
    let k_max = h.order();
    let b = h.coeffs();
    let tail = h.tail_bound();

    if g == 0.0 {
        let mut coeffs: Vec<Complex64> = b.iter().copied().take(n + 1).collect();
        coeffs.resize(n + 1, Complex64::new(0.0, 0.0));
        let coeff_error = if n > k_max {
            h.coeff_error().max(tail)
        } else {
            h.coeff_error()
        };
        let tail_out = if n >= k_max {
            tail
        } else {
            b[n + 1..].iter().map(|c| c.norm()).fold(tail, f64::max)
        };
        return finish_compose(h, coeffs, tail_out, coeff_error);
    }

    let ln_g = g.ln();
    let ln_1mg = (1.0 - g).ln();
    // Coefficients through k_max are needed to bound the tail of a polynomial input.
    let last = if tail == 0.0 { n.max(k_max) } else { n };
    let mut coeffs = Vec::with_capacity(last + 1);
    let mut worst_omitted = 0.0f64;

    for j in 0..=last {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut lw = j as f64 * ln_1mg; // ln C(j,j) + 0 ln γ + j ln(1-γ)
        let mut k = j;
        while k <= k_max {
            acc += b[k] * lw.exp();
            lw += ((k + 1) as f64 / (k + 1 - j) as f64).ln() + ln_g;
            k += 1;
        }
        coeffs.push(acc);

        if tail > 0.0 && j <= n {
            // k is now max(k_max + 1, j) and lw its log-weight
            worst_omitted = worst_omitted.max(tail * binomial_tail(lw, k, j, g));
        }
    }

    let mut tail_out = if tail == 0.0 {
        coeffs[n + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max)
    } else {
        b.iter().map(|c| c.norm()).fold(tail, f64::max) / (1.0 - g)
    };
    if h.is_schur() {
        tail_out = tail_out.min(1.0);
    }
    coeffs.truncate(n + 1);
    let coeff_error = h.coeff_error() / (1.0 - g) + worst_omitted;
    finish_compose(h, coeffs, tail_out, coeff_error)
}

/// `sum_{k >= k0} C(k, j) γ^(k-j) (1-γ)^j`, given the log-weight at `k0`.
fn binomial_tail(mut lw: f64, k0: usize, j: usize, g: f64) -> f64 {
    let mut sum = 0.0;
    for k in k0..k0 + BINOMIAL_TAIL_BUDGET {
        let ratio = g * (k + 1) as f64 / (k + 1 - j) as f64;
        let w = lw.exp();
        if ratio < 1.0 {
            // the ratios decrease in k, so the rest is dominated by a geometric series
            return (sum + w / (1.0 - ratio)).min(1.0 / (1.0 - g));
        }
        sum += w;
        lw += ratio.ln();
    }
    1.0 / (1.0 - g)
}

fn finish_compose(
    h: &TruncatedPowerSeries,
    coeffs: Vec<Complex64>,
    tail: f64,
    coeff_error: f64,
) -> Result<TruncatedPowerSeries> {
    let s = if h.is_schur() {
        TruncatedPowerSeries::schur(coeffs, tail.min(1.0))?
    } else {
        TruncatedPowerSeries::new(coeffs, tail)?
    };
    Ok(s.with_coeff_error(coeff_error))
}
