//! Shared numerical routines: normal distribution helpers, adaptive
//! Gauss–Kronrod quadrature, scalar minimization, entropy functions.

use crate::error::{Error, Result};
use statrs::function::erf;

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erf::erfc(-x / SQRT_2)
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Binary entropy h(e) in bits; h(0) = h(1) = 0.
pub fn binary_entropy(e: f64) -> f64 {
    if e <= 0.0 || e >= 1.0 {
        return 0.0;
    }
    -(e * e.log2() + (1.0 - e) * (1.0 - e).log2())
}

/// x·log2(x) with the continuous extension 0 at x = 0.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

// Gauss–Kronrod 7-15 node pair on [-1, 1].
const KRONROD_NODES: [f64; 8] = [
    0.000000000000000000000000000000000e0,
    2.077849550078984676006894037732449e-1,
    4.058451513773971669066064120769615e-1,
    5.860872354676911302941448382587296e-1,
    7.415311855993944398638647732807884e-1,
    8.648644233597690727897127886409262e-1,
    9.491079123427585245261896840478513e-1,
    9.914553711208126392068546975263285e-1,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    2.094821410847278280129991748917143e-1,
    2.044329400752988924141619992346491e-1,
    1.903505780647854099132564024210137e-1,
    1.690047266392679028265834265985503e-1,
    1.406532597155259187451895905102379e-1,
    1.047900103222501838398763225415180e-1,
    6.309209262997855329070066318920429e-2,
    2.293532201052922496373200805896959e-2,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    4.179591836734693877551020408163265e-1,
    3.818300505051189449503697754889751e-1,
    2.797053914892766679014677714237796e-1,
    1.294849661688696932706114326790820e-1,
];

/// One Gauss–Kronrod 7-15 panel over [a, b]; returns (integral, error estimate).
fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = KRONROD_WEIGHTS[0] * fc;
    let mut gauss = GAUSS_WEIGHTS[0] * fc;
    for i in 1..8 {
        let x = h * KRONROD_NODES[i];
        let fsum = f(c - x) + f(c + x);
        kronrod += KRONROD_WEIGHTS[i] * fsum;
        if i % 2 == 0 {
            gauss += GAUSS_WEIGHTS[i / 2] * fsum;
        }
    }
    let integral = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    // Standard QUADPACK-style sharpening of the raw difference.
    let err = if err > 0.0 {
        (200.0 * err).powf(1.5).min(err.max(1e-300))
    } else {
        0.0
    };
    (integral, err)
}

/// Adaptive Gauss–Kronrod quadrature of `f` over [a, b] to absolute
/// tolerance `abs_tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 4096;
    let (v, e) = gk15(&mut f, a, b);
    if e <= abs_tol {
        return Ok(v);
    }
    // Worklist of panels, largest error first.
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= abs_tol {
            return Ok(panels.iter().map(|p| p.2).sum());
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "error estimate {total_err:.3e} above tolerance {abs_tol:.3e} after {MAX_PANELS} panels"
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty panel list");
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}

/// Golden-section minimization of a unimodal `f` on [a, b] to absolute
/// tolerance `tol` on the argument. Returns (argmin, min).
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}

/// Minimize a scalar function over [a, b] by a dense grid scan followed by
/// golden-section refinement around the best grid cell.
pub fn grid_then_golden_min(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    grid_step: f64,
    tol: f64,
) -> (f64, f64) {
    let n = ((b - a) / grid_step).ceil() as usize;
    let n = n.max(2);
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=n {
        let x = a + (b - a) * i as f64 / n as f64;
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = a + (b - a) * best_i.saturating_sub(1) as f64 / n as f64;
    let hi = a + (b - a) * (best_i + 1).min(n) as f64 / n as f64;
    let (x, v) = golden_section_min(&mut f, lo, hi, tol);
    if v <= best {
        (x, v)
    } else {
        (a + (b - a) * best_i as f64 / n as f64, best)
    }
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Mean squared deviation about a fixed reference value.
pub fn mean_sq_about(xs: &[f64], r: f64) -> f64 {
    xs.iter().map(|x| (x - r) * (x - r)).sum::<f64>() / xs.len() as f64
}

/// Standard error of the sample-variance estimator, from the data itself
/// (uses the fourth central moment).
pub fn variance_standard_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2) / n).max(0.0).sqrt()
}
