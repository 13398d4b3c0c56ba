//! The cyclic group `Z_L`: signals, translation/modulation/involution,
//! circular convolution, and weight functions with validated growth classes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Pair-check sample count used when a group is too large for the
/// exhaustive weight check.
const WEIGHT_SAMPLE_PAIRS: usize = 1_000_000;
/// Largest group order for which weight checks enumerate all pairs.
const WEIGHT_EXHAUSTIVE_LIMIT: usize = 4096;
/// Slack on the weight inequalities, covering rounding in `w(x)*w(y)`.
const WEIGHT_SLACK: f64 = 1e-12;

/// The finite cyclic group `Z_L` with the circular metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridGroup {
    order: usize,
}

impl GridGroup {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::bad_params(format!(
                "group order must be at least 2, got {order}"
            )));
        }
        Ok(GridGroup { order })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Reduce an arbitrary integer to the canonical representative in `[0, L)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> usize {
        x.rem_euclid(self.order as i64) as usize
    }

    /// Circular distance to the identity, `min(x mod L, L - x mod L)`.
    #[inline]
    pub fn metric(&self, x: i64) -> usize {
        let r = self.reduce(x);
        r.min(self.order - r)
    }

    #[inline]
    pub(crate) fn add(&self, a: usize, b: usize) -> usize {
        let s = a + b;
        if s >= self.order {
            s - self.order
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: usize, b: usize) -> usize {
        if a >= b {
            a - b
        } else {
            a + self.order - b
        }
    }
}

/// A complex-valued function on `Z_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    group: GridGroup,
    values: Vec<Complex64>,
}

impl Signal {
    /// Wrap raw values, checking the length and that every entry is finite.
    pub fn new(group: GridGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch {
                expected: format!("signal of length {}", group.order()),
                got: values.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::bad_params(format!(
                    "signal entry {i} is not finite: {v}"
                )));
            }
        }
        Ok(Signal { group, values })
    }

    pub fn zeros(group: GridGroup) -> Self {
        Signal {
            group,
            values: vec![Complex64::new(0.0, 0.0); group.order()],
        }
    }

    /// Unit impulse at `pos`.
    pub fn delta(group: GridGroup, pos: i64) -> Self {
        let mut s = Signal::zeros(group);
        let p = group.reduce(pos);
        s.values[p] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn from_real(group: GridGroup, values: &[f64]) -> Result<Self> {
        Signal::new(
            group,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Complex signal with independent standard-normal real and imaginary
    /// parts, reproducible from the seed.
    pub fn random(group: GridGroup, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..group.order())
            .map(|_| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = rng.sample(rand_distr::StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        Signal { group, values }
    }

    #[inline]
    pub fn group(&self) -> GridGroup {
        self.group
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, x: i64) -> Complex64 {
        self.values[self.group.reduce(x)]
    }

    /// Euclidean norm.
    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sup norm of the magnitudes.
    pub fn norm_sup(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise inner product `sum f[x] * conj(g[x])`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.check_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Shift by `x`: `result[y] = f[(y - x) mod L]`.
    pub fn translate(&self, x: i64) -> Signal {
        let l = self.group.order();
        let shift = self.group.reduce(x);
        let mut values = Vec::with_capacity(l);
        for y in 0..l {
            values.push(self.values[self.group.sub(y, shift)]);
        }
        Signal {
            group: self.group,
            values,
        }
    }

    /// Pointwise multiplication by the character `exp(2*pi*i*m*t/L)`.
    pub fn modulate(&self, m: i64) -> Signal {
        let l = self.group.order() as f64;
        let freq = self.group.reduce(m) as f64;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(t, v)| {
                let phase = TAU * freq * t as f64 / l;
                v * Complex64::new(phase.cos(), phase.sin())
            })
            .collect();
        Signal {
            group: self.group,
            values,
        }
    }

    /// `result[x] = conj(f[(-x) mod L])`; applying it twice is the identity.
    pub fn involution(&self) -> Signal {
        let l = self.group.order();
        let mut values = Vec::with_capacity(l);
        for x in 0..l {
            values.push(self.values[self.group.sub(0, x)].conj());
        }
        Signal {
            group: self.group,
            values,
        }
    }

    /// Circular convolution `result[x] = sum_y F[y] * G[(x-y) mod L]`.
    ///
    /// The inner sum runs in a fixed index order so results are bitwise
    /// reproducible.
    pub fn convolve(&self, other: &Signal) -> Result<Signal> {
        self.check_group(other)?;
        let l = self.group.order();
        let mut values = vec![Complex64::new(0.0, 0.0); l];
        for (x, out) in values.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for y in 0..l {
                acc += self.values[y] * other.values[self.group.sub(x, y)];
            }
            *out = acc;
        }
        Ok(Signal {
            group: self.group,
            values,
        })
    }

    /// Pointwise magnitudes as a real signal.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub(crate) fn check_group(&self, other: &Signal) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch {
                left: self.group.order(),
                right: other.group.order(),
            });
        }
        Ok(())
    }
}

impl std::ops::Add<&Signal> for &Signal {
    type Output = Signal;
    fn add(self, rhs: &Signal) -> Signal {
        assert_eq!(self.group, rhs.group, "signal groups must match");
        Signal {
            group: self.group,
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub<&Signal> for &Signal {
    type Output = Signal;
    fn sub(self, rhs: &Signal) -> Signal {
        assert_eq!(self.group, rhs.group, "signal groups must match");
        Signal {
            group: self.group,
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Mul<Complex64> for &Signal {
    type Output = Signal;
    fn mul(self, rhs: Complex64) -> Signal {
        Signal {
            group: self.group,
            values: self.values.iter().map(|a| a * rhs).collect(),
        }
    }
}

/// Growth class a weight has been validated against.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// No growth condition beyond positivity.
    Plain,
    /// `w(x+y) <= w(x) * w(y)` for all pairs.
    Submultiplicative,
    /// `m(x+y) <= w(x) * m(y)` against the stored partner `w`.
    Moderate { partner: Box<Weight> },
}

/// Outcome of a pairwise weight inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightReport {
    pub ok: bool,
    /// Largest observed value of the ratio that must stay `<= 1`.
    pub worst_ratio: f64,
    /// Pair realizing the worst ratio.
    pub witness: (usize, usize),
}

/// A strictly positive weight on `Z_L` tagged with its validated class.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    group: GridGroup,
    values: Vec<f64>,
    kind: WeightKind,
}

impl Weight {
    /// Positive weight with no growth condition.
    pub fn plain(group: GridGroup, values: Vec<f64>) -> Result<Self> {
        check_positive(&values)?;
        check_len(group, &values)?;
        Ok(Weight {
            group,
            values,
            kind: WeightKind::Plain,
        })
    }

    /// Weight validated to satisfy `w(x+y) <= w(x) * w(y)`.
    pub fn submultiplicative(group: GridGroup, values: Vec<f64>) -> Result<Self> {
        check_positive(&values)?;
        check_len(group, &values)?;
        let report = check_submultiplicative(group, &values);
        if !report.ok {
            return Err(Error::WeightCheckFailed {
                kind: "submultiplicative",
                worst_ratio: report.worst_ratio,
                x: report.witness.0,
                y: report.witness.1,
            });
        }
        Ok(Weight {
            group,
            values,
            kind: WeightKind::Submultiplicative,
        })
    }

    /// Weight validated to satisfy `m(x+y) <= w(x) * m(y)` against `partner`.
    pub fn moderate(group: GridGroup, values: Vec<f64>, partner: Weight) -> Result<Self> {
        check_positive(&values)?;
        check_len(group, &values)?;
        if partner.group != group {
            return Err(Error::GroupMismatch {
                left: group.order(),
                right: partner.group.order(),
            });
        }
        let report = check_moderate(group, &values, partner.values());
        if !report.ok {
            return Err(Error::WeightCheckFailed {
                kind: "moderate",
                worst_ratio: report.worst_ratio,
                x: report.witness.0,
                y: report.witness.1,
            });
        }
        Ok(Weight {
            group,
            values,
            kind: WeightKind::Moderate {
                partner: Box::new(partner),
            },
        })
    }

    /// The constant weight 1, trivially submultiplicative.
    pub fn ones(group: GridGroup) -> Self {
        Weight {
            group,
            values: vec![1.0; group.order()],
            kind: WeightKind::Submultiplicative,
        }
    }

    /// Polynomial weight `(1 + d(x,0))^s`, submultiplicative for `s >= 0`.
    pub fn polynomial(group: GridGroup, s: f64) -> Result<Self> {
        if s < 0.0 {
            return Err(Error::bad_params(format!(
                "polynomial weight exponent must be nonnegative, got {s}"
            )));
        }
        let values = (0..group.order())
            .map(|x| (1.0 + group.metric(x as i64) as f64).powf(s))
            .collect();
        Weight::submultiplicative(group, values)
    }

    #[inline]
    pub fn group(&self) -> GridGroup {
        self.group
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    #[inline]
    pub fn get(&self, x: i64) -> f64 {
        self.values[self.group.reduce(x)]
    }

    /// True when the weight is validated submultiplicative (the constant
    /// weight qualifies).
    pub fn is_submultiplicative(&self) -> bool {
        matches!(self.kind, WeightKind::Submultiplicative)
    }

    /// True when `w(x) == w(-x)` for all `x` up to relative rounding.
    pub fn is_symmetric(&self) -> bool {
        let l = self.group.order();
        (0..l).all(|x| {
            let a = self.values[x];
            let b = self.values[self.group.sub(0, x)];
            (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
        })
    }
}

fn check_positive(values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::NonPositiveWeight { index: i, value: v });
        }
    }
    Ok(())
}

fn check_len(group: GridGroup, values: &[f64]) -> Result<()> {
    if values.len() != group.order() {
        return Err(Error::ShapeMismatch {
            expected: format!("weight of length {}", group.order()),
            got: values.len(),
        });
    }
    Ok(())
}

/// Check `w(x+y) <= w(x) * w(y)` over all pairs (or a fixed-seed sample when
/// the group is larger than the exhaustive limit).
pub fn check_submultiplicative(group: GridGroup, values: &[f64]) -> WeightReport {
    check_pairs(group, |x, y| {
        values[group.add(x, y)] / (values[x] * values[y])
    })
}

/// Check `m(x+y) <= w(x) * m(y)` over all pairs (or a fixed-seed sample).
pub fn check_moderate(group: GridGroup, m: &[f64], w: &[f64]) -> WeightReport {
    check_pairs(group, |x, y| m[group.add(x, y)] / (w[x] * m[y]))
}

fn check_pairs(group: GridGroup, ratio: impl Fn(usize, usize) -> f64) -> WeightReport {
    let l = group.order();
    let mut worst = f64::NEG_INFINITY;
    let mut witness = (0, 0);
    let consider = |x: usize, y: usize, worst: &mut f64, witness: &mut (usize, usize)| {
        let r = ratio(x, y);
        if r > *worst {
            *worst = r;
            *witness = (x, y);
        }
    };
    if l <= WEIGHT_EXHAUSTIVE_LIMIT {
        for x in 0..l {
            for y in 0..l {
                consider(x, y, &mut worst, &mut witness);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5142_4731);
        for _ in 0..WEIGHT_SAMPLE_PAIRS {
            let x = rng.gen_range(0..l);
            let y = rng.gen_range(0..l);
            consider(x, y, &mut worst, &mut witness);
        }
    }
    WeightReport {
        ok: worst <= 1.0 + WEIGHT_SLACK,
        worst_ratio: worst,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(l: usize) -> GridGroup {
        GridGroup::new(l).unwrap()
    }

    #[test]
    fn metric_is_circular() {
        let g = z(8);
        assert_eq!(g.metric(0), 0);
        assert_eq!(g.metric(3), 3);
        assert_eq!(g.metric(5), 3);
        assert_eq!(g.metric(-1), 1);
        assert_eq!(g.metric(12), 4);
    }

    #[test]
    fn metric_triangle_inequality() {
        let g = z(11);
        for x in 0..11i64 {
            for y in 0..11i64 {
                assert!(g.metric(x + y) <= g.metric(x) + g.metric(y));
            }
        }
    }

    #[test]
    fn group_order_must_be_at_least_two() {
        assert!(GridGroup::new(1).is_err());
        assert!(GridGroup::new(0).is_err());
    }

    #[test]
    fn translate_shifts_delta() {
        let g = z(8);
        let d = Signal::delta(g, 0);
        let shifted = d.translate(3);
        assert_eq!(shifted, Signal::delta(g, 3));
    }

    #[test]
    fn translate_fixes_constants() {
        let g = z(12);
        let ones = Signal::from_real(g, &[1.0; 12]).unwrap();
        for x in [-5, 0, 1, 7, 100] {
            assert_eq!(ones.translate(x), ones);
        }
    }

    #[test]
    fn translate_wraps_indices() {
        let g = z(4);
        let f = Signal::from_real(g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let t = f.translate(1);
        let want = Signal::from_real(g, &[4.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(t, want);
    }

    #[test]
    fn translate_composes() {
        let g = z(16);
        let f = Signal::random(g, 11);
        for (x, y) in [(3, 5), (-2, 9), (15, 1)] {
            assert_eq!(f.translate(x).translate(y), f.translate(x + y));
        }
    }

    #[test]
    fn modulate_zero_is_identity() {
        let g = z(10);
        let f = Signal::random(g, 1);
        assert_eq!(f.modulate(0), f);
    }

    #[test]
    fn modulate_fixes_delta_at_origin() {
        let g = z(6);
        let d = Signal::delta(g, 0);
        for m in 0..6 {
            let out = d.modulate(m);
            assert!((&out - &d).norm2() < 1e-15);
        }
    }

    #[test]
    fn modulate_ones_gives_roots_of_unity() {
        let g = z(4);
        let ones = Signal::from_real(g, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let out = ones.modulate(1);
        let want = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        for (got, want) in out.values().iter().zip(want) {
            assert!((got - want).norm() < 1e-14);
        }
    }

    #[test]
    fn modulate_preserves_magnitudes() {
        let g = z(9);
        let f = Signal::random(g, 2);
        let out = f.modulate(4);
        for (a, b) in f.values().iter().zip(out.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-13);
        }
    }

    #[test]
    fn convolve_with_delta_is_identity() {
        let g = z(16);
        let f = Signal::random(g, 3);
        let out = Signal::delta(g, 0).convolve(&f).unwrap();
        assert!((&out - &f).norm2() < 1e-13 * f.norm2());
    }

    #[test]
    fn convolve_deltas_adds_positions() {
        let g = z(8);
        let a = Signal::delta(g, 3);
        let b = Signal::delta(g, 7);
        let out = a.convolve(&b).unwrap();
        assert_eq!(out, Signal::delta(g, 10)); // (3 + 7) mod 8 = 2
    }

    // Independent O(L^2) oracle accumulating over output positions instead.
    fn convolve_oracle(f: &Signal, g: &Signal) -> Signal {
        let l = f.len();
        let mut out = Signal::zeros(f.group());
        for y in 0..l {
            for x in 0..l {
                out.values_mut()[f.group().add(y, x)] += f.values()[y] * g.values()[x];
            }
        }
        out
    }

    #[test]
    fn convolve_matches_direct_sum_oracle() {
        let g = z(16);
        let a = Signal::random(g, 5);
        let b = Signal::random(g, 6);
        let got = a.convolve(&b).unwrap();
        let want = convolve_oracle(&a, &b);
        assert!((&got - &want).norm2() <= 1e-12 * want.norm2());
    }

    #[test]
    fn convolve_rejects_group_mismatch() {
        let a = Signal::zeros(z(8));
        let b = Signal::zeros(z(9));
        assert!(matches!(a.convolve(&b), Err(Error::GroupMismatch { .. })));
    }

    #[test]
    fn convolve_commutes_with_translation() {
        let g = z(24);
        let f = Signal::random(g, 7);
        let h = Signal::random(g, 8);
        let base = f.convolve(&h).unwrap();
        for x in [1, 5, 23] {
            let left = f.translate(x).convolve(&h).unwrap();
            let right = base.translate(x);
            assert!((&left - &right).norm2() <= 1e-12 * base.norm2());
        }
    }

    #[test]
    fn involution_examples() {
        let g = z(3);
        let f = Signal::new(
            g,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(3.0, 0.0),
            ],
        )
        .unwrap();
        let out = f.involution();
        let want = Signal::new(
            g,
            vec![
                Complex64::new(1.0, -1.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(out, want);

        let d = Signal::delta(z(8), 5);
        assert_eq!(d.involution(), Signal::delta(z(8), 3));
    }

    #[test]
    fn involution_fixes_real_even_signals() {
        let g = z(8);
        let vals: Vec<f64> = (0..8).map(|x| 1.0 + g.metric(x as i64) as f64).collect();
        let f = Signal::from_real(g, &vals).unwrap();
        assert_eq!(f.involution(), f);
    }

    #[test]
    fn involution_twice_is_identity() {
        let f = Signal::random(z(13), 9);
        assert_eq!(f.involution().involution(), f);
    }

    #[test]
    fn polynomial_weight_is_submultiplicative() {
        let g = z(16);
        let w = Weight::polynomial(g, 2.0).unwrap();
        let report = check_submultiplicative(g, w.values());
        assert!(report.ok);
    }

    #[test]
    fn constant_weight_has_unit_worst_ratio() {
        let g = z(16);
        let report = check_submultiplicative(g, &[1.0; 16]);
        assert!(report.ok);
        assert!((report.worst_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_growth_weight_fails_with_witness() {
        let g = z(16);
        let values: Vec<f64> = (0..16)
            .map(|x| ((g.metric(x as i64) as f64).powi(2)).exp())
            .collect();
        let report = check_submultiplicative(g, &values);
        assert!(!report.ok);
        let (x, y) = report.witness;
        let direct = values[g.add(x, y)] / (values[x] * values[y]);
        assert!(direct > 1.0 + 1e-12);
        assert!(matches!(
            Weight::submultiplicative(g, values),
            Err(Error::WeightCheckFailed { .. })
        ));
    }

    #[test]
    fn moderate_check_accepts_polynomial_pair() {
        let g = z(32);
        let w = Weight::polynomial(g, 2.0).unwrap();
        let m: Vec<f64> = (0..32)
            .map(|x| (1.0 + g.metric(x as i64) as f64).powf(1.5))
            .collect();
        let wm = Weight::moderate(g, m, w).unwrap();
        assert!(matches!(wm.kind(), WeightKind::Moderate { .. }));
    }

    #[test]
    fn weights_must_be_positive() {
        let g = z(4);
        assert!(matches!(
            Weight::plain(g, vec![1.0, 0.0, 1.0, 1.0]),
            Err(Error::NonPositiveWeight { index: 1, .. })
        ));
    }
}
