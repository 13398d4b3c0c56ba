//! Solid quasi-norms: weighted `l^p`, mixed time-frequency norms, Lorentz
//! functionals built on the nonincreasing rearrangement, local-maximum
//! control functions, and the Wiener-amalgam norms they induce.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridGroup, Signal, Weight};

/// Below this exponent, `|x|^p` is evaluated on max-rescaled inputs to avoid
/// under/overflow of tiny powers.
const RESCALE_EXPONENT: f64 = 0.25;

/// Symmetric window `{-q, ..., q}` around the identity of `Z_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodQ {
    radius: usize,
}

impl NeighborhoodQ {
    pub fn new(radius: usize) -> Self {
        NeighborhoodQ { radius }
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of points in the window.
    #[inline]
    pub fn span(&self) -> usize {
        2 * self.radius + 1
    }

    pub(crate) fn check_fits(&self, group: GridGroup) -> Result<()> {
        if self.span() > group.order() {
            return Err(Error::RadiusTooLarge {
                radius: self.radius,
                span: self.span(),
                order: group.order(),
            });
        }
        Ok(())
    }

    pub(crate) fn offsets(&self) -> impl Iterator<Item = i64> {
        -(self.radius as i64)..=(self.radius as i64)
    }
}

/// Descriptor of a solid quasi-norm.
#[derive(Debug, Clone, PartialEq)]
pub enum QuasiNormSpec {
    /// `( sum |f[i]|^p w[i]^p )^{1/p}`, max-form for `p = inf`.
    WeightedLp { p: f64, weight: Vec<f64> },
    /// Inner `p`-sum over the time index, outer `q`-sum over the frequency
    /// index, weight applied inside. Arrays are laid out time-major:
    /// `index = k * freq_len + j`.
    MixedPq {
        p: f64,
        q: f64,
        weight: Vec<f64>,
        time_len: usize,
        freq_len: usize,
    },
    /// Lorentz functional of the weighted rearrangement. With `maximal_r`
    /// set, the averaged (maximal) form is used instead of the plain one.
    Lorentz {
        p: f64,
        q: f64,
        weight: Vec<f64>,
        maximal_r: Option<f64>,
    },
}

impl QuasiNormSpec {
    pub fn lp(p: f64, len: usize) -> Result<Self> {
        Self::lp_weighted(p, vec![1.0; len])
    }

    pub fn lp_weighted(p: f64, weight: Vec<f64>) -> Result<Self> {
        check_exponent("p", p)?;
        check_weight_values(&weight)?;
        Ok(QuasiNormSpec::WeightedLp { p, weight })
    }

    pub fn lp_from_weight(p: f64, weight: &Weight) -> Result<Self> {
        Self::lp_weighted(p, weight.values().to_vec())
    }

    pub fn mixed(p: f64, q: f64, time_len: usize, freq_len: usize) -> Result<Self> {
        Self::mixed_weighted(p, q, vec![1.0; time_len * freq_len], time_len, freq_len)
    }

    pub fn mixed_weighted(
        p: f64,
        q: f64,
        weight: Vec<f64>,
        time_len: usize,
        freq_len: usize,
    ) -> Result<Self> {
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        check_weight_values(&weight)?;
        if weight.len() != time_len * freq_len {
            return Err(Error::ShapeMismatch {
                expected: format!("weight of length {}", time_len * freq_len),
                got: weight.len(),
            });
        }
        Ok(QuasiNormSpec::MixedPq {
            p,
            q,
            weight,
            time_len,
            freq_len,
        })
    }

    pub fn lorentz(p: f64, q: f64, len: usize) -> Result<Self> {
        Self::lorentz_weighted(p, q, vec![1.0; len])
    }

    pub fn lorentz_weighted(p: f64, q: f64, weight: Vec<f64>) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::invalid_exponent(
                "lorentz p must be finite".to_string(),
            ));
        }
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        check_weight_values(&weight)?;
        Ok(QuasiNormSpec::Lorentz {
            p,
            q,
            weight,
            maximal_r: None,
        })
    }

    pub fn lorentz_maximal(p: f64, q: f64, r: f64, weight: Vec<f64>) -> Result<Self> {
        check_maximal_exponents(p, q, r)?;
        check_weight_values(&weight)?;
        Ok(QuasiNormSpec::Lorentz {
            p,
            q,
            weight,
            maximal_r: Some(r),
        })
    }

    /// Exponent `r = min(1, p, q)` for which the induced functional is
    /// declared an `r`-norm. See [`subadditivity_exponent`] for the exponent
    /// actually guaranteed per functional.
    ///
    /// [`subadditivity_exponent`]: QuasiNormSpec::subadditivity_exponent
    pub fn r_exponent(&self) -> f64 {
        match self {
            QuasiNormSpec::WeightedLp { p, .. } => p.min(1.0),
            QuasiNormSpec::MixedPq { p, q, .. } => p.min(*q).min(1.0),
            QuasiNormSpec::Lorentz { p, q, .. } => p.min(*q).min(1.0),
        }
    }

    /// Largest exponent `s` for which `N(f+g)^s <= N(f)^s + N(g)^s` holds
    /// exactly for the implemented functional.
    ///
    /// For weighted `l^p` and the mixed norm this is `min(1, p, q)`. The
    /// plain Lorentz functional is only quasi-subadditive in general; at
    /// `q = p` it coincides with weighted `l^p` and inherits `min(1, p)`,
    /// and at `q = inf` the sharp exponent is `p / (p + 1)`, obtained by
    /// optimizing the split of the distribution-function bound
    /// `count(s + t) <= (a/s)^p + (b/t)^p`. The averaged (maximal) form is
    /// an `r`-norm for its own parameter `r`.
    pub fn subadditivity_exponent(&self) -> Option<f64> {
        match self {
            QuasiNormSpec::WeightedLp { .. } | QuasiNormSpec::MixedPq { .. } => {
                Some(self.r_exponent())
            }
            QuasiNormSpec::Lorentz {
                p,
                q,
                maximal_r: Some(r),
                ..
            } => {
                let _ = (p, q);
                Some(*r)
            }
            QuasiNormSpec::Lorentz {
                p,
                q,
                maximal_r: None,
                ..
            } => {
                if (*q - *p).abs() < 1e-15 {
                    Some(p.min(1.0))
                } else if q.is_infinite() {
                    Some(p / (p + 1.0))
                } else {
                    None
                }
            }
        }
    }

    fn expected_len(&self) -> usize {
        match self {
            QuasiNormSpec::WeightedLp { weight, .. } => weight.len(),
            QuasiNormSpec::MixedPq {
                time_len, freq_len, ..
            } => time_len * freq_len,
            QuasiNormSpec::Lorentz { weight, .. } => weight.len(),
        }
    }
}

fn check_exponent(name: &str, value: f64) -> Result<()> {
    if value.is_nan() || value <= 0.0 {
        return Err(Error::invalid_exponent(format!(
            "{name} must be positive, got {value}"
        )));
    }
    Ok(())
}

fn check_maximal_exponents(p: f64, q: f64, r: f64) -> Result<()> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    if r.is_nan() || r <= 0.0 || r > 1.0 {
        return Err(Error::invalid_exponent(format!(
            "maximal exponent r must lie in (0, 1], got {r}"
        )));
    }
    if r >= p {
        return Err(Error::invalid_exponent(format!(
            "maximal exponent requires r < p, got r = {r}, p = {p}"
        )));
    }
    if r > q {
        return Err(Error::invalid_exponent(format!(
            "maximal exponent requires r <= q, got r = {r}, q = {q}"
        )));
    }
    Ok(())
}

fn check_weight_values(weight: &[f64]) -> Result<()> {
    for (i, &v) in weight.iter().enumerate() {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NonPositiveWeight { index: i, value: v });
        }
    }
    Ok(())
}

/// `p`-sum `( sum v[i]^p )^{1/p}` of nonnegative values in fixed index
/// order; `max` for `p = inf`. Small exponents are evaluated on max-rescaled
/// inputs.
pub(crate) fn lp_accumulate(values: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, f64::max);
    }
    if p < RESCALE_EXPONENT {
        let scale = values.clone().fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let sum: f64 = values.map(|v| (v / scale).powf(p)).sum();
        return scale * sum.powf(1.0 / p);
    }
    let sum: f64 = values.map(|v| v.powf(p)).sum();
    sum.powf(1.0 / p)
}

/// Evaluate the quasi-norm described by `spec` on a flat array.
pub fn y_norm(values: &[Complex64], spec: &QuasiNormSpec) -> Result<f64> {
    if values.len() != spec.expected_len() {
        return Err(Error::ShapeMismatch {
            expected: format!("array of length {}", spec.expected_len()),
            got: values.len(),
        });
    }
    if values.is_empty() {
        return Ok(0.0);
    }
    match spec {
        QuasiNormSpec::WeightedLp { p, weight } => Ok(lp_accumulate(
            values.iter().zip(weight.iter()).map(|(v, w)| v.norm() * w),
            *p,
        )),
        QuasiNormSpec::MixedPq {
            p,
            q,
            weight,
            time_len,
            freq_len,
        } => {
            let inner = |j: usize| {
                lp_accumulate(
                    (0..*time_len).map(move |k| {
                        let idx = k * freq_len + j;
                        values[idx].norm() * weight[idx]
                    }),
                    *p,
                )
            };
            Ok(lp_accumulate((0..*freq_len).map(inner), *q))
        }
        QuasiNormSpec::Lorentz {
            p,
            q,
            weight,
            maximal_r,
        } => match maximal_r {
            None => lorentz_star_norm(values, *p, *q, weight),
            Some(r) => lorentz_maximal_norm(values, *p, *q, *r, weight),
        },
    }
}

/// Convenience wrapper taking a signal.
pub fn y_norm_signal(signal: &Signal, spec: &QuasiNormSpec) -> Result<f64> {
    y_norm(signal.values(), spec)
}

/// Local sup over the moving window: `result[x] = max_{u in x+Q} |F[u]|`.
pub fn control_function(signal: &Signal, q: NeighborhoodQ) -> Result<Signal> {
    q.check_fits(signal.group())?;
    let group = signal.group();
    let l = group.order();
    let mags = signal.magnitudes();
    let mut out = vec![0.0; l];
    for (x, out_x) in out.iter_mut().enumerate() {
        let mut best: f64 = 0.0;
        for u in q.offsets() {
            best = best.max(mags[group.reduce(x as i64 + u)]);
        }
        *out_x = best;
    }
    Signal::from_real(group, &out)
}

/// Wiener-amalgam quasi-norm: the `spec`-norm of the control function.
///
/// `spec` must describe a one-dimensional norm over the signal's group
/// (weighted `l^p` or Lorentz); the two-dimensional mixed norm applies to
/// coefficient grids, not signals.
pub fn amalgam_norm(signal: &Signal, q: NeighborhoodQ, spec: &QuasiNormSpec) -> Result<f64> {
    if matches!(spec, QuasiNormSpec::MixedPq { .. }) {
        return Err(Error::bad_params(
            "amalgam norm over a signal requires a weighted lp or lorentz spec".to_string(),
        ));
    }
    let control = control_function(signal, q)?;
    y_norm(control.values(), spec)
}

/// Nonincreasing rearrangement of weighted magnitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    /// `sorted[k]` is the `(k+1)`-th largest value of `|lambda_i| * m_i`.
    pub sorted: Vec<f64>,
    /// `permutation[k]` is the original index realizing `sorted[k]`; ties
    /// keep the smaller original index first.
    pub permutation: Vec<usize>,
}

/// Sort weighted magnitudes `|lambda_i| * m_i` in nonincreasing order.
pub fn rearrange(values: &[Complex64], weight: &[f64]) -> Result<Rearrangement> {
    if values.len() != weight.len() {
        return Err(Error::LengthMismatch {
            left: values.len(),
            right: weight.len(),
        });
    }
    check_weight_values(weight)?;
    let magnitudes: Vec<f64> = values
        .iter()
        .zip(weight.iter())
        .map(|(v, w)| v.norm() * w)
        .collect();
    let mut permutation: Vec<usize> = (0..values.len()).collect();
    permutation.sort_by(|&a, &b| {
        magnitudes[b]
            .partial_cmp(&magnitudes[a])
            .expect("weighted magnitudes are finite")
            .then(a.cmp(&b))
    });
    let sorted = permutation.iter().map(|&i| magnitudes[i]).collect();
    Ok(Rearrangement {
        sorted,
        permutation,
    })
}

/// Plain Lorentz quasi-norm of the weighted rearrangement.
///
/// For `q = inf` this is `sup_n n^{1/p} * sorted[n]` (1-indexed). For finite
/// `q` the defining integral over the counting measure is the exact sum
/// `((q/p) * sum_n sorted[n]^q * (n^{q/p} - (n-1)^{q/p}))^{1/q}`, which makes
/// the `q = p` case agree with the weighted `l^p` norm identically.
pub fn lorentz_star_norm(values: &[Complex64], p: f64, q: f64, weight: &[f64]) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::invalid_exponent(
            "lorentz p must be finite".to_string(),
        ));
    }
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let r = rearrange(values, weight)?;
    Ok(star_from_sorted(&r.sorted, p, q))
}

fn star_from_sorted(sorted: &[f64], p: f64, q: f64) -> f64 {
    if sorted.is_empty() || sorted[0] == 0.0 {
        return 0.0;
    }
    let scale = sorted[0];
    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for (k, &s) in sorted.iter().enumerate() {
            let n = (k + 1) as f64;
            best = best.max(n.powf(1.0 / p) * (s / scale));
        }
        return scale * best;
    }
    let ratio = q / p;
    let mut sum = 0.0;
    let mut prev_pow = 0.0;
    for (k, &s) in sorted.iter().enumerate() {
        let n = (k + 1) as f64;
        let pow = n.powf(ratio);
        sum += (s / scale).powf(q) * (pow - prev_pow);
        prev_pow = pow;
    }
    scale * (ratio * sum).powf(1.0 / q)
}

/// Averaged (maximal) Lorentz quasi-norm.
///
/// The building block is the running maximum over index sets `E` with more
/// than `n` elements of the `r`-th power mean over `E`; the maximizing set
/// of each cardinality consists of the largest entries, so only prefix means
/// of the rearrangement enter.
pub fn lorentz_maximal_norm(
    values: &[Complex64],
    p: f64,
    q: f64,
    r: f64,
    weight: &[f64],
) -> Result<f64> {
    check_maximal_exponents(p, q, r)?;
    let re = rearrange(values, weight)?;
    let sorted = re.sorted;
    if sorted.is_empty() || sorted[0] == 0.0 {
        return Ok(0.0);
    }
    let scale = sorted[0];
    let len = sorted.len();

    // avg[n] = ((1/(n+1)) * sum_{k <= n} s_k^r)^{1/r} for prefixes of size n+1.
    let mut prefix = 0.0;
    let mut avg = Vec::with_capacity(len);
    for (k, &s) in sorted.iter().enumerate() {
        prefix += (s / scale).powf(r);
        avg.push((prefix / (k + 1) as f64).powf(1.0 / r));
    }
    // g[n] = max over prefix sizes N > n of avg; suffix maximum.
    let mut g = avg;
    for n in (0..len.saturating_sub(1)).rev() {
        g[n] = g[n].max(g[n + 1]);
    }

    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for (n, &gn) in g.iter().enumerate() {
            best = best.max(((n + 1) as f64).powf(1.0 / p) * gn);
        }
        return Ok(scale * best);
    }
    let ratio = q / p;
    let mut sum = 0.0;
    let mut prev_pow = 0.0;
    for (n, &gn) in g.iter().enumerate() {
        let pow = ((n + 1) as f64).powf(ratio);
        sum += gn.powf(q) * (pow - prev_pow);
        prev_pow = pow;
    }
    Ok(scale * (ratio * sum).powf(1.0 / q))
}

/// Norm of a coefficient sequence supported on a point set: the pileup
/// function `P[y] = sum_{i : y in x_i + Q} |lambda_i|` measured in `spec`.
pub fn sequence_norm(
    coefficients: &[Complex64],
    points: &[usize],
    group: GridGroup,
    q: NeighborhoodQ,
    spec: &QuasiNormSpec,
) -> Result<f64> {
    if coefficients.len() != points.len() {
        return Err(Error::LengthMismatch {
            left: coefficients.len(),
            right: points.len(),
        });
    }
    q.check_fits(group)?;
    let pileup = pileup_function(coefficients, points, group, q)?;
    y_norm(pileup.values(), spec)
}

/// The pileup `sum_i |lambda_i| * indicator(x_i + Q)` as a real signal.
pub fn pileup_function(
    coefficients: &[Complex64],
    points: &[usize],
    group: GridGroup,
    q: NeighborhoodQ,
) -> Result<Signal> {
    let l = group.order();
    let mut out = vec![0.0; l];
    for (&x, c) in points.iter().zip(coefficients.iter()) {
        if x >= l {
            return Err(Error::bad_params(format!(
                "point {x} outside group of order {l}"
            )));
        }
        let mag = c.norm();
        for u in q.offsets() {
            out[group.reduce(x as i64 + u)] += mag;
        }
    }
    Signal::from_real(group, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGroup;

    fn z(l: usize) -> GridGroup {
        GridGroup::new(l).unwrap()
    }

    fn c(values: &[f64]) -> Vec<Complex64> {
        values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn control_radius_zero_is_magnitude() {
        let f = Signal::random(z(16), 1);
        let k = control_function(&f, NeighborhoodQ::new(0)).unwrap();
        for (kx, fx) in k.values().iter().zip(f.values()) {
            assert!((kx.re - fx.norm()).abs() < 1e-15);
            assert_eq!(kx.im, 0.0);
        }
    }

    #[test]
    fn control_of_delta_is_window_indicator() {
        let g = z(8);
        let d = Signal::delta(g, 0);
        let k = control_function(&d, NeighborhoodQ::new(1)).unwrap();
        let want = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        for (kx, w) in k.values().iter().zip(want) {
            assert_eq!(kx.re, w);
        }
    }

    #[test]
    fn control_matches_window_max_oracle() {
        let g = z(32);
        let f = Signal::random(g, 2);
        let radius = 3;
        let k = control_function(&f, NeighborhoodQ::new(radius)).unwrap();
        for x in 0..32i64 {
            let mut want: f64 = 0.0;
            for u in -(radius as i64)..=(radius as i64) {
                want = want.max(f.get(x + u).norm());
            }
            assert_eq!(k.get(x).re, want);
        }
    }

    #[test]
    fn control_dominates_magnitude_and_grows_with_radius() {
        let f = Signal::random(z(24), 3);
        let k1 = control_function(&f, NeighborhoodQ::new(1)).unwrap();
        let k2 = control_function(&f, NeighborhoodQ::new(4)).unwrap();
        for x in 0..24 {
            assert!(k1.values()[x].re >= f.values()[x].norm() - 1e-15);
            assert!(k2.values()[x].re >= k1.values()[x].re - 1e-15);
        }
    }

    #[test]
    fn control_rejects_oversized_radius() {
        let f = Signal::zeros(z(8));
        assert!(matches!(
            control_function(&f, NeighborhoodQ::new(4)),
            Err(Error::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn amalgam_radius_zero_is_plain_norm() {
        let f = Signal::random(z(16), 4);
        let spec = QuasiNormSpec::lp(0.7, 16).unwrap();
        let a = amalgam_norm(&f, NeighborhoodQ::new(0), &spec).unwrap();
        let plain = y_norm(f.values(), &spec).unwrap();
        assert!((a - plain).abs() <= 1e-12 * plain);
    }

    #[test]
    fn amalgam_of_delta_counts_window() {
        let d = Signal::delta(z(8), 0);
        let spec = QuasiNormSpec::lp(1.0, 8).unwrap();
        let a = amalgam_norm(&d, NeighborhoodQ::new(1), &spec).unwrap();
        assert!((a - 3.0).abs() < 1e-14);
    }

    #[test]
    fn amalgam_matches_two_stage_oracle() {
        let g = z(20);
        let f = Signal::random(g, 5);
        let w = Weight::polynomial(g, 1.0).unwrap();
        let spec = QuasiNormSpec::lp_from_weight(0.5, &w).unwrap();
        let got = amalgam_norm(&f, NeighborhoodQ::new(2), &spec).unwrap();

        // Brute-force control then direct p-sum.
        let mut sum = 0.0;
        for x in 0..20i64 {
            let mut m: f64 = 0.0;
            for u in -2..=2i64 {
                m = m.max(f.get(x + u).norm());
            }
            sum += (m * w.get(x)).powf(0.5);
        }
        let want = sum.powf(2.0);
        assert!((got - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn y_norm_euclidean_case() {
        let spec = QuasiNormSpec::mixed(2.0, 2.0, 2, 2).unwrap();
        let vals = c(&[3.0, 0.0, 0.0, 4.0]);
        assert!((y_norm(&vals, &spec).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn y_norm_single_entry_for_every_exponent_pair() {
        let mut weight = vec![1.0; 12];
        weight[7] = 2.5;
        for (p, q) in [(0.5, 2.0), (1.0, 1.0), (2.0, f64::INFINITY), (0.3, 0.7)] {
            let spec = QuasiNormSpec::mixed_weighted(p, q, weight.clone(), 3, 4).unwrap();
            let mut vals = c(&[0.0; 12]);
            vals[7] = Complex64::new(0.0, -1.5);
            let got = y_norm(&vals, &spec).unwrap();
            assert!((got - 1.5 * 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn y_norm_matches_nested_loop_oracle() {
        let g = z(16);
        let f = Signal::random(g, 6);
        let vals = f.values();
        let spec = QuasiNormSpec::mixed(0.5, f64::INFINITY, 4, 4).unwrap();
        let got = y_norm(vals, &spec).unwrap();

        let mut want: f64 = 0.0;
        for j in 0..4 {
            let mut inner = 0.0;
            for k in 0..4 {
                inner += vals[k * 4 + j].norm().powf(0.5);
            }
            want = want.max(inner.powf(2.0));
        }
        assert!((got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn y_norm_is_solid_and_homogeneous() {
        let g = z(16);
        let f = Signal::random(g, 7);
        let spec = QuasiNormSpec::lp(0.8, 16).unwrap();
        let nf = y_norm(f.values(), &spec).unwrap();

        let shrunk: Vec<Complex64> = f.values().iter().map(|v| v * 0.5).collect();
        assert!(y_norm(&shrunk, &spec).unwrap() <= nf * (1.0 + 1e-12));

        let scaled: Vec<Complex64> = f
            .values()
            .iter()
            .map(|v| v * Complex64::new(0.0, 3.0))
            .collect();
        let ns = y_norm(&scaled, &spec).unwrap();
        assert!((ns - 3.0 * nf).abs() <= 1e-12 * ns);
    }

    #[test]
    fn y_norm_tiny_exponent_survives_extreme_scales() {
        let spec = QuasiNormSpec::lp(0.1, 3).unwrap();
        let vals = vec![
            Complex64::new(1e-200, 0.0),
            Complex64::new(2e-200, 0.0),
            Complex64::new(0.5e-200, 0.0),
        ];
        let got = y_norm(&vals, &spec).unwrap();
        let reference = {
            // same values scaled to order one
            let v = [1.0, 2.0, 0.5f64];
            let sum: f64 = v.iter().map(|x| x.powf(0.1)).sum();
            sum.powf(10.0) * 1e-200
        };
        assert!(got.is_finite() && got > 0.0);
        assert!((got - reference).abs() <= 1e-10 * reference);
    }

    #[test]
    fn rearrange_examples() {
        let vals = c(&[0.0, 3.0, 1.0]);
        let r = rearrange(&vals, &[1.0; 3]).unwrap();
        assert_eq!(r.sorted, vec![3.0, 1.0, 0.0]);
        assert_eq!(r.permutation, vec![1, 2, 0]);

        let sorted_in = c(&[5.0, 4.0, 2.0, 1.0]);
        let r2 = rearrange(&sorted_in, &[1.0; 4]).unwrap();
        assert_eq!(r2.permutation, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rearrange_ties_keep_original_order() {
        let vals = c(&[2.0, 7.0, 2.0, 7.0]);
        let r = rearrange(&vals, &[1.0; 4]).unwrap();
        assert_eq!(r.permutation, vec![1, 3, 0, 2]);
    }

    #[test]
    fn rearrange_matches_insertion_sort_oracle() {
        let g = z(32);
        let f = Signal::random(g, 8);
        let w: Vec<f64> = (0..32).map(|i| 0.5 + (i as f64 * 0.37).fract()).collect();
        let r = rearrange(f.values(), &w).unwrap();

        // library-free insertion sort of the products, descending
        let mut oracle: Vec<f64> = f
            .values()
            .iter()
            .zip(&w)
            .map(|(v, wi)| v.norm() * wi)
            .collect();
        for i in 1..oracle.len() {
            let mut j = i;
            while j > 0 && oracle[j - 1] < oracle[j] {
                oracle.swap(j - 1, j);
                j -= 1;
            }
        }
        for (a, b) in r.sorted.iter().zip(&oracle) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn star_norm_of_exact_power_sequence_is_one() {
        let p = 0.5;
        let vals: Vec<Complex64> = (1..=64)
            .map(|k| Complex64::new((k as f64).powf(-1.0 / p), 0.0))
            .collect();
        let got = lorentz_star_norm(&vals, p, f64::INFINITY, &vec![1.0; 64]).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_norm_small_example() {
        let vals = c(&[2.0, 1.0]);
        let got = lorentz_star_norm(&vals, 1.0, f64::INFINITY, &[1.0, 1.0]).unwrap();
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn star_norm_at_q_equals_p_is_weighted_lp() {
        let g = z(48);
        let f = Signal::random(g, 9);
        let w: Vec<f64> = (0..48).map(|i| 1.0 + (i % 5) as f64 * 0.3).collect();
        for p in [0.5, 1.0, 2.0] {
            let star = lorentz_star_norm(f.values(), p, p, &w).unwrap();
            let spec = QuasiNormSpec::lp_weighted(p, w.clone()).unwrap();
            let lp = y_norm(f.values(), &spec).unwrap();
            assert!((star - lp).abs() <= 1e-12 * lp);
        }
    }

    #[test]
    fn maximal_norm_single_spike() {
        let mut vals = c(&[0.0; 8]);
        vals[3] = Complex64::new(1.0, 0.0);
        let got = lorentz_maximal_norm(&vals, 2.0, f64::INFINITY, 1.0, &[1.0; 8]).unwrap();
        assert!((got - 1.0).abs() < 1e-13);
    }

    // Brute force over all index subsets; feasible for len <= 8.
    fn maximal_oracle(vals: &[Complex64], p: f64, q: f64, r: f64, w: &[f64]) -> f64 {
        let n = vals.len();
        let mags: Vec<f64> = vals.iter().zip(w).map(|(v, wi)| v.norm() * wi).collect();
        let f_ss = |t: usize| -> f64 {
            let mut best: f64 = 0.0;
            for mask in 1u32..(1 << n) {
                let size = mask.count_ones() as usize;
                if size <= t {
                    continue;
                }
                let mut sum = 0.0;
                for (i, &m) in mags.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        sum += m.powf(r);
                    }
                }
                best = best.max((sum / size as f64).powf(1.0 / r));
            }
            best
        };
        if q.is_infinite() {
            (0..n)
                .map(|t| ((t + 1) as f64).powf(1.0 / p) * f_ss(t))
                .fold(0.0, f64::max)
        } else {
            let ratio = q / p;
            let mut sum = 0.0;
            for nn in 1..=n {
                sum += f_ss(nn - 1).powf(q)
                    * ((nn as f64).powf(ratio) - ((nn - 1) as f64).powf(ratio));
            }
            (ratio * sum).powf(1.0 / q)
        }
    }

    #[test]
    fn maximal_norm_matches_subset_oracle() {
        let g = z(8);
        for seed in 0..4 {
            let f = Signal::random(g, 100 + seed);
            let w: Vec<f64> = (0..8).map(|i| 1.0 + 0.2 * i as f64).collect();
            for (p, q, r) in [(2.0, f64::INFINITY, 1.0), (3.0, 2.0, 1.0), (1.5, 1.0, 0.5)] {
                let got = lorentz_maximal_norm(f.values(), p, q, r, &w).unwrap();
                let want = maximal_oracle(f.values(), p, q, r, &w);
                assert!(
                    (got - want).abs() <= 1e-10 * want.max(1e-30),
                    "p={p} q={q} r={r}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn maximal_norm_of_constant_ones() {
        let vals = c(&[1.0; 8]);
        let got = lorentz_maximal_norm(&vals, 2.0, f64::INFINITY, 1.0, &[1.0; 8]).unwrap();
        let want = maximal_oracle(&vals, 2.0, f64::INFINITY, 1.0, &[1.0; 8]);
        assert!((got - want).abs() <= 1e-12 * want);
        // prefix means are all 1, so the norm is sup n^{1/2} over n <= 8
        assert!((got - (8f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn maximal_norm_rejects_bad_exponents() {
        let vals = c(&[1.0]);
        assert!(matches!(
            lorentz_maximal_norm(&vals, 1.0, f64::INFINITY, 1.0, &[1.0]),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            lorentz_maximal_norm(&vals, 2.0, 0.5, 1.0, &[1.0]),
            Err(Error::InvalidExponent { .. })
        ));
    }

    #[test]
    fn hunt_sandwich_on_random_arrays() {
        let g = z(64);
        let w = vec![1.0; 64];
        for seed in 0..20 {
            let f = Signal::random(g, 200 + seed);
            let star = lorentz_star_norm(f.values(), 2.0, f64::INFINITY, &w).unwrap();
            let maximal = lorentz_maximal_norm(f.values(), 2.0, f64::INFINITY, 1.0, &w).unwrap();
            assert!(star <= maximal * (1.0 + 1e-12));
            assert!(maximal <= 2.0 * star * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sequence_norm_singleton() {
        let g = z(8);
        let spec = QuasiNormSpec::lp(1.0, 8).unwrap();
        let got = sequence_norm(&c(&[1.0]), &[0], g, NeighborhoodQ::new(1), &spec).unwrap();
        assert!((got - 3.0).abs() < 1e-14);
    }

    #[test]
    fn sequence_norm_disjoint_supports_closed_form() {
        let g = z(32);
        let points = [0usize, 9, 18];
        let coeffs = c(&[2.0, 0.5, 1.0]);
        let q = NeighborhoodQ::new(2);
        let w = Weight::polynomial(g, 1.0).unwrap();
        let p = 0.8;
        let spec = QuasiNormSpec::lp_from_weight(p, &w).unwrap();
        let got = sequence_norm(&coeffs, &points, g, q, &spec).unwrap();

        let mut sum = 0.0;
        for (&x, cf) in points.iter().zip(coeffs.iter()) {
            let mut window = 0.0;
            for u in -2..=2i64 {
                window += w.get(x as i64 + u).powf(p);
            }
            sum += cf.norm().powf(p) * window;
        }
        let want = sum.powf(1.0 / p);
        assert!((got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn sequence_norm_of_zeros_is_zero() {
        let g = z(16);
        let spec = QuasiNormSpec::lp(0.5, 16).unwrap();
        let got = sequence_norm(&c(&[0.0, 0.0]), &[3, 7], g, NeighborhoodQ::new(2), &spec).unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn spec_validation_errors() {
        assert!(matches!(
            QuasiNormSpec::lp(0.0, 4),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            QuasiNormSpec::lorentz(f64::INFINITY, 1.0, 4),
            Err(Error::InvalidExponent { .. })
        ));
        let spec = QuasiNormSpec::lp(2.0, 4).unwrap();
        assert!(matches!(
            y_norm(&c(&[1.0, 2.0]), &spec),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
