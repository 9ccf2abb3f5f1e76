//! Adaptive numerical quadrature.
//!
//! A 15-point Gauss–Kronrod rule with recursive bisection covers finite
//! intervals. Semi-infinite integrals of power-law-decaying integrands are
//! summed over geometrically growing windows until an analytic remainder
//! bound drops below tolerance; bisection alone cannot be trusted there
//! because a single panel over a huge range can miss all the mass.

use crate::error::{Error, Result};

// Kronrod abscissae for the 15-point rule (positive half, descending).
// Gauss points are at odd indices (1, 3, 5, 7). The tables keep the full
// published precision even though f64 truncates the trailing digits.
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One Gauss–Kronrod 15/7 panel: returns (kronrod estimate, error estimate).
fn gk15_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = WG7[3] * f_center;
    let mut result_kronrod = WGK15[7] * f_center;

    for (j, &x) in XGK15.iter().enumerate().take(7) {
        let abscissa = half * x;
        let f_lo = f(center - abscissa);
        let f_hi = f(center + abscissa);
        let f_sum = f_lo + f_hi;
        result_kronrod += WGK15[j] * f_sum;
        if j % 2 == 1 {
            result_gauss += WG7[j / 2] * f_sum;
        }
    }

    let integral = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    (integral, err)
}

const MAX_DEPTH: usize = 60;

fn adaptive_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    evals: &mut usize,
) -> Result<f64> {
    let (whole, err) = gk15_panel(f, a, b);
    *evals += 15;
    if !whole.is_finite() {
        return Err(Error::Quadrature(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    if err <= tol || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH && err > tol.max(1e-300) * 1e3 {
            return Err(Error::Quadrature(format!(
                "max subdivision depth reached on [{a}, {b}] with error {err:.3e} > tol {tol:.3e}"
            )));
        }
        return Ok(whole);
    }
    let mid = 0.5 * (a + b);
    let left = adaptive_rec(f, a, mid, 0.5 * tol, depth + 1, evals)?;
    let right = adaptive_rec(f, mid, b, 0.5 * tol, depth + 1, evals)?;
    Ok(left + right)
}

/// Integrate `f` over the finite interval `[a, b]` to the given relative
/// tolerance (with a small absolute floor for integrals near zero).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature("bounds must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let (rough, _) = gk15_panel(&f, a, b);
    let scale = rough.abs().max(1e-12);
    let tol = rel_tol * scale;
    let mut evals = 0;
    adaptive_rec(&f, a, b, tol, 0, &mut evals)
}

/// Integrate over a wide interval `[a, b]` with `0 <= a`, splitting at
/// geometric breakpoints first. Suitable for integrands that decay like a
/// power law: the split keeps every panel at a scale where the rule can see
/// the local mass.
pub fn integrate_geometric<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let start = a.max(1e-12);
    if b / start <= 16.0 {
        return integrate(f, a, b, rel_tol);
    }
    let mut breaks = vec![a];
    // First window covers [a, max(a, 1) * 2], then quadruple.
    let mut edge = if a < 1.0 { 1.0 } else { a * 2.0 };
    while edge < b {
        breaks.push(edge);
        edge *= 4.0;
    }
    breaks.push(b);

    let mut total = 0.0;
    // Window tolerances are relative to a first-pass magnitude estimate.
    let mut rough_total = 0.0;
    let mut panels = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let (est, _) = gk15_panel(&f, w[0], w[1]);
        rough_total += est.abs();
        panels.push((w[0], w[1]));
    }
    let tol = rel_tol * rough_total.max(1e-12);
    for (lo, hi) in panels {
        let mut evals = 0;
        total += adaptive_rec(&f, lo, hi, tol * ((hi - lo) / (b - a)).max(1e-6), 0, &mut evals)?;
    }
    Ok(total)
}

/// Integrate `f` over `[a, inf)` where `|f(x)| <= coeff * x^(-exponent)`
/// with `exponent > 1`. Windows `[a, 2a], [2a, 4a], ...` are summed until
/// the analytic envelope remainder `coeff * x^(1-exponent) / (exponent-1)`
/// is below tolerance.
pub fn integrate_upper_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    coeff: f64,
    exponent: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Quadrature("lower bound must be positive".into()));
    }
    if exponent <= 1.0 {
        return Err(Error::Quadrature(format!(
            "envelope exponent {exponent} <= 1: integral may diverge"
        )));
    }
    let remainder = |x: f64| coeff * x.powf(1.0 - exponent) / (exponent - 1.0);

    let mut total = 0.0;
    let mut lo = a;
    // The first remainder bound also bounds the total, giving a scale.
    let scale = remainder(a).max(1e-12);
    for _ in 0..4096 {
        let hi = lo * 2.0;
        let mut evals = 0;
        let window_tol = rel_tol * scale * 1e-3;
        total += adaptive_rec(&f, lo, hi, window_tol, 0, &mut evals)?;
        lo = hi;
        if remainder(lo) <= rel_tol * total.abs().max(scale * 1e-6) {
            return Ok(total);
        }
    }
    Err(Error::Quadrature(format!(
        "upper tail from {a} did not converge: remainder bound {:.3e} after 4096 windows",
        remainder(lo)
    )))
}
