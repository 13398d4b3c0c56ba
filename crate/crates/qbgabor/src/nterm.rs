//! Greedy best n-term approximation over Gabor coefficient grids, weak-type
//! sparsity norms, and empirical decay-rate curves.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gabor::{CoefficientGrid, GaborSystem, LatticeWeight};
use crate::norms::lorentz_star_norm;

/// Default lower end of the log-log fit window.
const FIT_MIN_N: usize = 4;
/// Errors below this multiple of the initial error count as numerical floor
/// and are excluded from the fit.
const FIT_FLOOR_REL: f64 = 1e-13;

/// Decay curve of tail errors with its fitted log-log slope.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NTermCurve {
    pub n_values: Vec<usize>,
    pub errors: Vec<f64>,
    pub fitted_slope: f64,
    /// Target rate `1/p - 1/q` (with `1/q = 0` at `q = inf`).
    pub reference_alpha: f64,
}

/// Summary emitted next to a curve.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CurveSummary {
    pub alpha_ref: f64,
    pub slope: f64,
    #[serde(rename = "C_impl")]
    pub c_impl: f64,
    pub weak_norm: f64,
}

/// Indices of the `n` largest weighted magnitudes `|c[k,j]| * m[k,j]`.
///
/// Ties are broken lexicographically by `(frequency, time)`; the result is
/// sorted in selection order and deterministic.
pub fn greedy_select(
    coeffs: &CoefficientGrid,
    weight: &LatticeWeight,
    n: usize,
) -> Result<Vec<usize>> {
    let total = coeffs.values().len();
    if n > total {
        return Err(Error::CountTooLarge {
            requested: n,
            available: total,
        });
    }
    check_weight(coeffs, weight)?;
    let m = coeffs.freq_len();
    let mut order: Vec<usize> = (0..total).collect();
    let key = |idx: usize| coeffs.values()[idx].norm() * weight.values()[idx];
    order.sort_by(|&a, &b| {
        key(b)
            .partial_cmp(&key(a))
            .expect("weighted magnitudes are finite")
            .then_with(|| {
                let (ka, ja) = (a / m, a % m);
                let (kb, jb) = (b / m, b % m);
                (ja, ka).cmp(&(jb, kb))
            })
    });
    order.truncate(n);
    Ok(order)
}

/// Weighted `l^q` norm of the tail left after removing the greedy top `n`.
pub fn tail_error(
    coeffs: &CoefficientGrid,
    weight: &LatticeWeight,
    n: usize,
    q: f64,
) -> Result<f64> {
    if q.is_nan() || q <= 0.0 {
        return Err(Error::invalid_exponent(format!(
            "tail exponent q must be positive, got {q}"
        )));
    }
    check_weight(coeffs, weight)?;
    let total = coeffs.values().len();
    if n > total {
        return Err(Error::CountTooLarge {
            requested: n,
            available: total,
        });
    }
    let mut weighted: Vec<f64> = coeffs
        .values()
        .iter()
        .zip(weight.values())
        .map(|(c, w)| c.norm() * w)
        .collect();
    weighted.sort_by(|a, b| b.partial_cmp(a).expect("finite magnitudes"));
    let tail = &weighted[n..];
    Ok(crate::norms::lp_accumulate(tail.iter().copied(), q))
}

/// Tail error of the canonical-dual analysis coefficients of a signal.
pub fn n_term_error(
    f: &crate::grid::Signal,
    sys: &GaborSystem,
    n: usize,
    q: f64,
    weight: &LatticeWeight,
) -> Result<f64> {
    let dual = sys.canonical_dual_dense()?.clone();
    let coeffs = sys.dgt_with(f, &dual)?;
    tail_error(&coeffs, weight, n, q)
}

/// Weak-type norm `sup_n n^{1/p} (c m)^*(n)` of the weighted rearrangement.
pub fn weak_norm(coeffs: &CoefficientGrid, p: f64, weight: &LatticeWeight) -> Result<f64> {
    check_weight(coeffs, weight)?;
    lorentz_star_norm(coeffs.values(), p, f64::INFINITY, weight.values())
}

/// Tail-sum constant `(q/p - 1)^{-1/q}` from the integral comparison
/// `sum_{k>n} k^{-q/p} <= n^{1-q/p} / (q/p - 1)`; equals 1 at `q = inf`.
pub fn rate_constant(p: f64, q: f64) -> f64 {
    if q.is_infinite() {
        1.0
    } else {
        (q / p - 1.0).powf(-1.0 / q)
    }
}

/// Compute the decay curve of a coefficient grid over the given counts.
///
/// Requires `p < q`. The fit window keeps counts in `[4, NM/4]` whose
/// errors sit above the numerical floor; the slope is ordinary least
/// squares on `(log n, log error)`.
pub fn decay_curve_grid(
    coeffs: &CoefficientGrid,
    p: f64,
    q: f64,
    weight: &LatticeWeight,
    n_values: &[usize],
) -> Result<NTermCurve> {
    if p.is_nan() || p <= 0.0 || q.is_nan() || q <= 0.0 {
        return Err(Error::invalid_exponent(format!(
            "exponents must be positive, got p = {p}, q = {q}"
        )));
    }
    if p >= q {
        return Err(Error::InvalidFitWindow {
            reason: format!("decay rate requires p < q, got p = {p}, q = {q}"),
        });
    }
    if n_values.is_empty() {
        return Err(Error::InvalidFitWindow {
            reason: "empty list of term counts".to_string(),
        });
    }
    let total = coeffs.values().len();
    let mut counts: Vec<usize> = n_values.to_vec();
    counts.sort_unstable();
    counts.dedup();
    if *counts.last().unwrap() > total {
        return Err(Error::CountTooLarge {
            requested: *counts.last().unwrap(),
            available: total,
        });
    }
    let errors: Vec<f64> = counts
        .iter()
        .map(|&n| tail_error(coeffs, weight, n, q))
        .collect::<Result<_>>()?;

    let full_error = tail_error(coeffs, weight, 0, q)?;
    let floor = full_error * FIT_FLOOR_REL;
    let fit_max = (total / 4).max(FIT_MIN_N);
    let fit_points: Vec<(f64, f64)> = counts
        .iter()
        .zip(&errors)
        .filter(|(&n, &e)| n >= FIT_MIN_N && n <= fit_max && e > floor)
        .map(|(&n, &e)| ((n as f64).ln(), e.ln()))
        .collect();
    if fit_points.len() < 2 {
        return Err(Error::InvalidFitWindow {
            reason: format!(
                "only {} usable points in the fit window [{FIT_MIN_N}, {fit_max}]",
                fit_points.len()
            ),
        });
    }
    let fitted_slope = least_squares_slope(&fit_points);
    let reference_alpha = 1.0 / p - if q.is_infinite() { 0.0 } else { 1.0 / q };
    Ok(NTermCurve {
        n_values: counts,
        errors,
        fitted_slope,
        reference_alpha,
    })
}

/// Decay curve of a signal through its canonical-dual coefficients.
pub fn decay_curve(
    f: &crate::grid::Signal,
    sys: &GaborSystem,
    p: f64,
    q: f64,
    weight: &LatticeWeight,
    n_values: &[usize],
) -> Result<NTermCurve> {
    let dual = sys.canonical_dual_dense()?.clone();
    let coeffs = sys.dgt_with(f, &dual)?;
    decay_curve_grid(&coeffs, p, q, weight, n_values)
}

/// Summary values reported next to a curve.
pub fn curve_summary(
    coeffs: &CoefficientGrid,
    curve: &NTermCurve,
    p: f64,
    q: f64,
    weight: &LatticeWeight,
) -> Result<CurveSummary> {
    Ok(CurveSummary {
        alpha_ref: curve.reference_alpha,
        slope: curve.fitted_slope,
        c_impl: rate_constant(p, q),
        weak_norm: weak_norm(coeffs, p, weight)?,
    })
}

/// Check `error(n) * n^alpha <= C_impl * weak_norm` for every positive count
/// in the curve; returns the worst ratio to the allowed bound.
pub fn rate_bound_margin(curve: &NTermCurve, weak: f64, p: f64, q: f64) -> f64 {
    let alpha = 1.0 / p - if q.is_infinite() { 0.0 } else { 1.0 / q };
    let allowed = rate_constant(p, q) * weak;
    let mut worst: f64 = 0.0;
    for (&n, &e) in curve.n_values.iter().zip(&curve.errors) {
        if n == 0 {
            continue;
        }
        worst = worst.max(e * (n as f64).powf(alpha) / allowed);
    }
    worst
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn check_weight(coeffs: &CoefficientGrid, weight: &LatticeWeight) -> Result<()> {
    if weight.values().len() != coeffs.values().len() || weight.time_len() != coeffs.time_len() {
        return Err(Error::ShapeMismatch {
            expected: format!(
                "lattice weight for a {} x {} grid",
                coeffs.time_len(),
                coeffs.freq_len()
            ),
            got: weight.values().len(),
        });
    }
    Ok(())
}

/// Coefficient grid whose weighted rearrangement is exactly `k^{-1/p}`,
/// laid out in a fixed scrambled order. Test and verification helper.
pub fn synthetic_power_grid(lattice: crate::gabor::LatticeParams, p: f64) -> CoefficientGrid {
    let total = lattice.time_shifts() * lattice.m;
    let mut values = vec![Complex64::new(0.0, 0.0); total];
    for k in 0..total {
        // deterministic scramble so greedy selection has to work for it
        let pos = (k * 2654435761) % total;
        let magnitude = ((k + 1) as f64).powf(-1.0 / p);
        let phase = 0.7 * (k as f64);
        values[pos] = Complex64::new(phase.cos(), phase.sin()) * magnitude;
    }
    CoefficientGrid::new(lattice, values).expect("synthetic grid is finite")
}
