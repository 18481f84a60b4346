//! Bohr-type radii for the Cesàro and Bernardi operators acting on functions
//! bounded by one on the disks `Ω_γ = {|z + γ/(1-γ)| < 1/(1-γ)}`, `0 <= γ < 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated power series with certified tail bounds, Blaschke
//!   products and composition with `G(z) = (1 - γ) z + γ`;
//! * [`sampling`]: seeded Schur-class samples on `Ω_γ`;
//! * [`operators`]: Cesàro and Bernardi transforms, their majorants and
//!   quadrature evaluations of their integral forms;
//! * [`radii`]: the radius equations and their bracketed solver;
//! * [`extremal`] and [`verify`]: the extremal family and the numerical
//!   verification suites built on it.

// `!(x < y)` comparisons are deliberate: they reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extremal;
pub mod operators;
pub mod quad;
pub mod radii;
pub mod sampling;
pub mod series;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use extremal::{
    bernardi_extremal_decomposition, cesaro_extremal_decomposition, extremal_coeffs, Decomposition, ExtremalParams,
};
pub use operators::{
    bernardi_integral_oracle, bernardi_majorant, bernardi_transform, cesaro_integral_oracle, cesaro_majorant,
    cesaro_transform, lerch_tail_sum, log_bound, BernardiParams,
};
pub use radii::{
    bernardi_radius, bernardi_radius_classic, bohr_radius_omega, cesaro_radius, solve_bracketed, RadiusEquation,
    RadiusResult,
};
pub use sampling::{sample_schur_omega, SchurSampleSpec};
pub use series::{affine_compose, blaschke_coeffs, majorant_eval, DomainGamma, Estimate, TruncatedPowerSeries};
pub use verify::{
    identity_suite, lemma1_check, remainder_order_check, sharpness_scan_bernardi, sharpness_scan_cesaro, Lemma1Report,
    OperatorKind, SharpnessReport,
};
