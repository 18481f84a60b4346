//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands on
//! a real interval.

#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum over panels of `|K15 - G7|`.
    pub error: f64,
    pub evals: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += pair * w;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Panel { a, b, value, error }
}

/// Integrate `f` over `[a, b]` to the absolute target `tol`, spending at most
/// `max_evals` integrand evaluations.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_evals: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    let mut panels = vec![gk15(&mut f, a, b)];
    let mut evals = 15;
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::numerical(format!(
                "non-finite integrand on [{a}, {b}] after {evals} evaluations"
            )));
        }
        if error <= tol {
            return Ok(QuadResult {
                value,
                error,
                evals,
                panels: panels.len(),
            });
        }
        if evals + 30 > max_evals {
            return Err(Error::numerical(format!(
                "quadrature budget of {max_evals} evaluations exhausted: error estimate {error:e} \
                 over {} panels, target {tol:e}",
                panels.len()
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::numerical(format!(
                "quadrature panel [{}, {}] cannot be split further; error estimate {error:e}",
                p.a, p.b
            )));
        }
        panels.push(gk15(&mut f, p.a, mid));
        panels.push(gk15(&mut f, mid, p.b));
        evals += 30;
    }
}
