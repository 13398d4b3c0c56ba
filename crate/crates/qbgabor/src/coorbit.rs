//! Well-spread point sets, nearest-point partitions of unity, the sampled
//! approximation operator, its oscillation-controlled gap bound, and the
//! Richardson inversion that yields atomic coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridGroup, Signal, Weight};
use crate::norms::{amalgam_norm, sequence_norm, NeighborhoodQ, QuasiNormSpec};

/// Consecutive non-contracting residual steps tolerated before giving up.
const CONTRACTION_PATIENCE: usize = 5;

/// A finite set of points in `Z_L` with its covering radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    group: GridGroup,
    points: Vec<usize>,
    density_radius: usize,
}

impl PointSet {
    /// Strictly increasing points in `[0, L)`; the covering radius is
    /// computed, not assumed.
    pub fn new(group: GridGroup, points: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::bad_params("point set must be nonempty".to_string()));
        }
        for w in points.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::bad_params(format!(
                    "points must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if *points.last().unwrap() >= group.order() {
            return Err(Error::bad_params(format!(
                "point {} outside group of order {}",
                points.last().unwrap(),
                group.order()
            )));
        }
        let density_radius = (0..group.order())
            .map(|x| {
                points
                    .iter()
                    .map(|&p| group.metric(x as i64 - p as i64))
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap();
        Ok(PointSet {
            group,
            points,
            density_radius,
        })
    }

    /// Every point of the group.
    pub fn full(group: GridGroup) -> Self {
        PointSet {
            group,
            points: (0..group.order()).collect(),
            density_radius: 0,
        }
    }

    /// Arithmetic progression `{0, spacing, 2 spacing, ...}`.
    pub fn regular(group: GridGroup, spacing: usize) -> Result<Self> {
        if spacing == 0 || !group.order().is_multiple_of(spacing) {
            return Err(Error::bad_params(format!(
                "spacing {spacing} must divide the group order {}",
                group.order()
            )));
        }
        PointSet::new(group, (0..group.order()).step_by(spacing).collect())
    }

    #[inline]
    pub fn group(&self) -> GridGroup {
        self.group
    }

    #[inline]
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest radius whose windows centered at the points cover the group.
    #[inline]
    pub fn density_radius(&self) -> usize {
        self.density_radius
    }

    /// Relative-separation count for the reference window: the largest
    /// number of points whose `Q`-windows meet a fixed point's window.
    pub fn separation(&self, q: NeighborhoodQ) -> usize {
        let reach = 2 * q.radius();
        self.points
            .iter()
            .map(|&xj| {
                self.points
                    .iter()
                    .filter(|&&xi| self.group.metric(xi as i64 - xj as i64) <= reach)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest number of point windows covering any single group element.
    pub fn max_overlap(&self, q: NeighborhoodQ) -> usize {
        (0..self.group.order())
            .map(|x| {
                self.points
                    .iter()
                    .filter(|&&p| self.group.metric(x as i64 - p as i64) <= q.radius())
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Nearest-point partition of unity: each group element is owned by the
/// circularly nearest point of the set, so the member functions are
/// disjoint indicators that sum to one exactly. A distance tie between the
/// point to the left and the point to the right goes to the left one (the
/// point the element lies to the right of), which makes evenly spaced
/// points produce identical cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Bupu {
    point_set: PointSet,
    size: NeighborhoodQ,
    owner: Vec<usize>,
}

impl Bupu {
    pub fn build(point_set: PointSet, size: NeighborhoodQ) -> Result<Self> {
        if point_set.density_radius() > size.radius() {
            return Err(Error::NotDense {
                density: point_set.density_radius(),
                radius: size.radius(),
            });
        }
        let group = point_set.group();
        let owner = (0..group.order())
            .map(|x| {
                let mut best_idx = 0usize;
                let mut best_key = (usize::MAX, usize::MAX);
                for (i, &p) in point_set.points().iter().enumerate() {
                    let d = group.metric(x as i64 - p as i64);
                    let rightward = group.sub(x, p);
                    let key = (d, rightward);
                    if key < best_key {
                        best_key = key;
                        best_idx = i;
                    }
                }
                best_idx
            })
            .collect();
        Ok(Bupu {
            point_set,
            size,
            owner,
        })
    }

    #[inline]
    pub fn point_set(&self) -> &PointSet {
        &self.point_set
    }

    #[inline]
    pub fn size(&self) -> NeighborhoodQ {
        self.size
    }

    #[inline]
    pub fn group(&self) -> GridGroup {
        self.point_set.group()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.point_set.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.point_set.is_empty()
    }

    /// Index of the member function owning group element `x`.
    #[inline]
    pub fn owner(&self, x: usize) -> usize {
        self.owner[x]
    }

    /// The `i`-th member function as an indicator signal.
    pub fn member(&self, i: usize) -> Signal {
        let group = self.group();
        let values: Vec<f64> = self
            .owner
            .iter()
            .map(|&o| if o == i { 1.0 } else { 0.0 })
            .collect();
        Signal::from_real(group, &values).expect("indicator is finite")
    }

    /// `<F, psi_i>` for all members: sums of `F` over each ownership cell.
    pub fn coefficients(&self, f: &Signal) -> Result<Vec<Complex64>> {
        if f.group() != self.group() {
            return Err(Error::GroupMismatch {
                left: self.group().order(),
                right: f.group().order(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.len()];
        for (x, &o) in self.owner.iter().enumerate() {
            out[o] += f.values()[x];
        }
        Ok(out)
    }

    /// Verify the partition properties exactly: members are `{0,1}`-valued,
    /// sum to one, and are supported inside their point's window.
    pub fn validate(&self) -> Result<()> {
        let group = self.group();
        for (x, &o) in self.owner.iter().enumerate() {
            let d = group.metric(x as i64 - self.point_set.points()[o] as i64);
            if d > self.size.radius() {
                return Err(Error::bad_params(format!(
                    "member {o} extends to distance {d}, outside its window of radius {}",
                    self.size.radius()
                )));
            }
        }
        Ok(())
    }
}

/// Local modulus of continuity `result[x] = max_{u in U} |G[(x+u) mod L] - G[x]|`.
pub fn oscillation(g: &Signal, u: NeighborhoodQ) -> Signal {
    let group = g.group();
    let l = group.order();
    let mut out = vec![0.0; l];
    for (x, out_x) in out.iter_mut().enumerate() {
        let base = g.values()[x];
        let mut best: f64 = 0.0;
        for off in u.offsets() {
            best = best.max((g.get(x as i64 + off) - base).norm());
        }
        *out_x = best;
    }
    Signal::from_real(group, &out).expect("oscillation is finite")
}

/// The sampled approximation operator
/// `T_Psi F = sum_i <F, psi_i> T_{x_i} G`.
pub fn apply_t_psi(f: &Signal, g: &Signal, bupu: &Bupu) -> Result<Signal> {
    f.check_group(g)?;
    let coeffs = bupu.coefficients(f)?;
    let mut out = Signal::zeros(f.group());
    for (i, &c) in coeffs.iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let shifted = g.translate(bupu.point_set().points()[i] as i64);
        for (o, s) in out.values_mut().iter_mut().zip(shifted.values()) {
            *o += c * s;
        }
    }
    Ok(out)
}

/// Rigorous bound on the operator gap between convolution by `G` and its
/// sampled approximation: the amalgam norm of the `U`-oscillation of `G` in
/// `l^p_w` with `p <= 1` and submultiplicative `w`, where the discrete
/// convolution inequality has constant one.
pub fn gap_bound(
    g: &Signal,
    u: NeighborhoodQ,
    p: f64,
    weight: &Weight,
    q: NeighborhoodQ,
) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid_exponent(format!(
            "gap bound requires 0 < p <= 1, got {p}"
        )));
    }
    if !weight.is_submultiplicative() {
        return Err(Error::bad_params(
            "gap bound requires a submultiplicative weight".to_string(),
        ));
    }
    if weight.group() != g.group() {
        return Err(Error::GroupMismatch {
            left: g.group().order(),
            right: weight.group().order(),
        });
    }
    let spec = QuasiNormSpec::lp_from_weight(p, weight)?;
    amalgam_norm(&oscillation(g, u), q, &spec)
}

/// Result of the Richardson inversion of the sampled operator.
#[derive(Debug, Clone)]
pub struct AtomicDecomposition {
    /// One coefficient per partition member.
    pub coefficients: Vec<Complex64>,
    /// Sup-norm residuals `||F - T_Psi H_k||` per iteration.
    pub residual_history: Vec<f64>,
}

impl AtomicDecomposition {
    /// Synthesize `sum_i lambda_i T_{x_i} G`.
    pub fn synthesize(&self, g: &Signal, bupu: &Bupu) -> Signal {
        let mut out = Signal::zeros(g.group());
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let shifted = g.translate(bupu.point_set().points()[i] as i64);
            for (o, s) in out.values_mut().iter_mut().zip(shifted.values()) {
                *o += c * s;
            }
        }
        out
    }
}

/// Invert the sampled operator by the fixed-point iteration
/// `H <- F + H - T_Psi H`, stopping when `||F - T_Psi H||_inf <= tol`.
///
/// The caller must supply `F` in the range of convolution by `G` (synthesize
/// it as `H * G`); the iteration reports failure when the residuals stop
/// contracting.
pub fn atomic_decompose(
    f: &Signal,
    g: &Signal,
    bupu: &Bupu,
    tol: f64,
    max_iter: usize,
) -> Result<AtomicDecomposition> {
    f.check_group(g)?;
    let mut h = f.clone();
    let mut history = Vec::new();
    let mut non_contracting = 0usize;
    for _ in 0..max_iter {
        let approx = apply_t_psi(&h, g, bupu)?;
        let residual_signal = f - &approx;
        let residual = residual_signal.norm_sup();
        if let Some(&prev) = history.last() {
            let ratio: f64 = residual / prev;
            if ratio >= 1.0 || ratio.is_nan() {
                non_contracting += 1;
                if non_contracting >= CONTRACTION_PATIENCE {
                    return Err(Error::NotContractive {
                        ratio,
                        count: non_contracting,
                    });
                }
            } else {
                non_contracting = 0;
            }
        }
        history.push(residual);
        if residual <= tol {
            return Ok(AtomicDecomposition {
                coefficients: bupu.coefficients(&h)?,
                residual_history: history,
            });
        }
        h = &h + &residual_signal;
    }
    Err(Error::MaxIterExceeded {
        max_iter,
        residual: *history.last().unwrap_or(&f64::INFINITY),
    })
}

/// Norm of the sample sequence `(F(x_i))_i` through the pileup construction.
pub fn sampled_norm(
    f: &Signal,
    points: &PointSet,
    q: NeighborhoodQ,
    spec: &QuasiNormSpec,
) -> Result<f64> {
    if f.group() != points.group() {
        return Err(Error::GroupMismatch {
            left: f.group().order(),
            right: points.group().order(),
        });
    }
    let samples: Vec<Complex64> = points.points().iter().map(|&x| f.values()[x]).collect();
    sequence_norm(&samples, points.points(), f.group(), q, spec)
}

/// Norm of the indicator of the composite window `Q + U`; the constant in
/// the partition-coefficient analysis bound.
pub fn analysis_bound_constant(
    group: GridGroup,
    u: NeighborhoodQ,
    q: NeighborhoodQ,
    spec: &QuasiNormSpec,
) -> Result<f64> {
    let radius = u.radius() + q.radius();
    let combined = NeighborhoodQ::new(radius);
    combined.check_fits(group)?;
    let mut values = vec![0.0; group.order()];
    for off in combined.offsets() {
        values[group.reduce(off)] = 1.0;
    }
    let indicator = Signal::from_real(group, &values)?;
    crate::norms::y_norm(indicator.values(), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows;

    fn z(l: usize) -> GridGroup {
        GridGroup::new(l).unwrap()
    }

    #[test]
    fn point_set_density_and_separation() {
        let g = z(16);
        let ps = PointSet::new(g, vec![0, 4, 8, 12]).unwrap();
        assert_eq!(ps.density_radius(), 2);
        assert_eq!(ps.separation(NeighborhoodQ::new(1)), 1);
        assert_eq!(ps.separation(NeighborhoodQ::new(2)), 3);
        assert_eq!(ps.max_overlap(NeighborhoodQ::new(2)), 2);
    }

    #[test]
    fn point_set_rejects_disorder() {
        let g = z(8);
        assert!(PointSet::new(g, vec![3, 3]).is_err());
        assert!(PointSet::new(g, vec![5, 2]).is_err());
        assert!(PointSet::new(g, vec![0, 9]).is_err());
        assert!(PointSet::new(g, vec![]).is_err());
    }

    #[test]
    fn full_bupu_members_are_deltas() {
        let g = z(8);
        let bupu = Bupu::build(PointSet::full(g), NeighborhoodQ::new(0)).unwrap();
        for i in 0..8 {
            assert_eq!(bupu.member(i), Signal::delta(g, i as i64));
        }
        bupu.validate().unwrap();
    }

    #[test]
    fn two_point_bupu_matches_nearest_cells() {
        let g = z(8);
        let ps = PointSet::new(g, vec![0, 4]).unwrap();
        let bupu = Bupu::build(ps, NeighborhoodQ::new(2)).unwrap();
        // nearest to 0: {7, 0, 1, 2} (the tie at 2 stays with 0), rest to 4
        let m0 = bupu.member(0);
        let m1 = bupu.member(1);
        let want0 = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        for (x, want) in want0.iter().enumerate() {
            assert_eq!(m0.values()[x].re, *want);
            assert_eq!(m1.values()[x].re, 1.0 - want);
        }
        bupu.validate().unwrap();
    }

    #[test]
    fn bupu_partition_sums_to_one_on_random_dense_sets() {
        let g = z(64);
        // every third point, covering radius 1
        let ps = PointSet::new(g, (0..64).step_by(3).collect()).unwrap();
        assert!(ps.density_radius() <= 3);
        let bupu = Bupu::build(ps, NeighborhoodQ::new(3)).unwrap();
        bupu.validate().unwrap();
        let mut sum = vec![0.0; 64];
        for i in 0..bupu.len() {
            for (s, v) in sum.iter_mut().zip(bupu.member(i).values()) {
                *s += v.re;
            }
        }
        assert!(sum.iter().all(|&s| s == 1.0));
    }

    #[test]
    fn bupu_requires_density() {
        let g = z(32);
        let ps = PointSet::new(g, vec![0, 16]).unwrap();
        assert!(matches!(
            Bupu::build(ps, NeighborhoodQ::new(2)),
            Err(Error::NotDense { .. })
        ));
    }

    #[test]
    fn oscillation_radius_zero_vanishes() {
        let f = Signal::random(z(32), 1);
        let osc = oscillation(&f, NeighborhoodQ::new(0));
        assert_eq!(osc.norm_sup(), 0.0);
    }

    #[test]
    fn oscillation_of_constant_vanishes() {
        let f = Signal::from_real(z(16), &[2.5; 16]).unwrap();
        for r in 0..5 {
            assert_eq!(oscillation(&f, NeighborhoodQ::new(r)).norm_sup(), 0.0);
        }
    }

    #[test]
    fn oscillation_matches_brute_force() {
        let f = Signal::random(z(24), 2);
        let osc = oscillation(&f, NeighborhoodQ::new(2));
        for x in 0..24i64 {
            let mut want: f64 = 0.0;
            for u in -2..=2i64 {
                want = want.max((f.get(x + u) - f.get(x)).norm());
            }
            assert_eq!(osc.get(x).re, want);
        }
    }

    #[test]
    fn oscillation_monotone_in_radius() {
        let f = Signal::random(z(32), 3);
        let small = oscillation(&f, NeighborhoodQ::new(1));
        let large = oscillation(&f, NeighborhoodQ::new(4));
        for x in 0..32 {
            assert!(small.values()[x].re <= large.values()[x].re + 1e-15);
        }
    }

    #[test]
    fn oscillation_dominates_translate_differences() {
        // |T_y G - T_x G| <= T_y (osc G) pointwise whenever y is in x + U
        let g = Signal::random(z(32), 4);
        let radius = 2usize;
        let osc = oscillation(&g, NeighborhoodQ::new(radius));
        for x in 0..32i64 {
            for off in -(radius as i64)..=(radius as i64) {
                let y = x + off;
                let ty = g.translate(y);
                let tx = g.translate(x);
                let bound = osc.translate(y);
                for z_pt in 0..32 {
                    assert!(
                        (ty.values()[z_pt] - tx.values()[z_pt]).norm()
                            <= bound.values()[z_pt].re + 1e-13
                    );
                }
            }
        }
    }

    #[test]
    fn t_psi_with_full_sampling_is_convolution() {
        let g = z(32);
        let f = Signal::random(g, 5);
        let kernel = Signal::random(g, 6);
        let bupu = Bupu::build(PointSet::full(g), NeighborhoodQ::new(0)).unwrap();
        let via_t_psi = apply_t_psi(&f, &kernel, &bupu).unwrap();
        let via_convolution = f.convolve(&kernel).unwrap();
        assert!((&via_t_psi - &via_convolution).norm2() <= 1e-12 * via_convolution.norm2());
    }

    #[test]
    fn t_psi_of_zero_is_zero() {
        let g = z(16);
        let kernel = Signal::random(g, 7);
        let bupu = Bupu::build(PointSet::regular(g, 2).unwrap(), NeighborhoodQ::new(1)).unwrap();
        let out = apply_t_psi(&Signal::zeros(g), &kernel, &bupu).unwrap();
        assert_eq!(out.norm2(), 0.0);
    }

    #[test]
    fn t_psi_matches_direct_evaluation() {
        let g = z(24);
        let f = Signal::random(g, 8);
        let kernel = Signal::random(g, 9);
        let ps = PointSet::regular(g, 4).unwrap();
        let bupu = Bupu::build(ps, NeighborhoodQ::new(2)).unwrap();
        let got = apply_t_psi(&f, &kernel, &bupu).unwrap();

        // direct evaluation from the member indicators
        let mut want = Signal::zeros(g);
        for i in 0..bupu.len() {
            let psi = bupu.member(i);
            let mut c = Complex64::new(0.0, 0.0);
            for x in 0..24 {
                c += f.values()[x] * psi.values()[x].re;
            }
            let shifted = kernel.translate(bupu.point_set().points()[i] as i64);
            for (w, s) in want.values_mut().iter_mut().zip(shifted.values()) {
                *w += c * s;
            }
        }
        assert!((&got - &want).norm2() <= 1e-12 * want.norm2());
    }

    #[test]
    fn gap_bound_zero_radius_vanishes() {
        let g = z(64);
        let kernel = windows::reproducing_kernel(g, 4).unwrap();
        let w = Weight::ones(g);
        let bound = gap_bound(
            &kernel,
            NeighborhoodQ::new(0),
            1.0,
            &w,
            NeighborhoodQ::new(2),
        )
        .unwrap();
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn gap_bound_validates_preconditions() {
        let g = z(32);
        let kernel = Signal::random(g, 10);
        let w = Weight::ones(g);
        assert!(gap_bound(
            &kernel,
            NeighborhoodQ::new(1),
            2.0,
            &w,
            NeighborhoodQ::new(1)
        )
        .is_err());
        let plain = Weight::plain(g, vec![1.0; 32]).unwrap();
        assert!(gap_bound(
            &kernel,
            NeighborhoodQ::new(1),
            1.0,
            &plain,
            NeighborhoodQ::new(1)
        )
        .is_err());
    }

    #[test]
    fn gap_bound_nonincreasing_in_oscillation_radius() {
        let g = z(128);
        let kernel = windows::reproducing_kernel(g, 6).unwrap();
        let w = Weight::polynomial(g, 1.0).unwrap();
        let q = NeighborhoodQ::new(2);
        let mut prev = f64::INFINITY;
        for radius in [8usize, 4, 2, 1, 0] {
            let bound = gap_bound(&kernel, NeighborhoodQ::new(radius), 0.8, &w, q).unwrap();
            assert!(bound <= prev * (1.0 + 1e-12));
            prev = bound;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn empirical_gap_below_gap_bound() {
        let g = z(128);
        let kernel = windows::reproducing_kernel(g, 5).unwrap();
        let ps = PointSet::regular(g, 2).unwrap();
        let u = NeighborhoodQ::new(1);
        let bupu = Bupu::build(ps, u).unwrap();
        let w = Weight::ones(g);
        let p = 1.0;
        let q = NeighborhoodQ::new(2);
        let spec = QuasiNormSpec::lp_from_weight(p, &w).unwrap();
        let bound = gap_bound(&kernel, u, p, &w, q).unwrap();
        for seed in 0..20 {
            let h = Signal::random(g, 100 + seed);
            let f = h.convolve(&kernel).unwrap();
            let exact = f.convolve(&kernel).unwrap();
            let approx = apply_t_psi(&f, &kernel, &bupu).unwrap();
            let gap_norm = amalgam_norm(&(&exact - &approx), q, &spec).unwrap();
            let f_norm = amalgam_norm(&f, q, &spec).unwrap();
            assert!(
                gap_norm <= bound * f_norm * (1.0 + 1e-10),
                "seed {seed}: {gap_norm} vs {} * {f_norm}",
                bound
            );
        }
    }

    #[test]
    fn atomic_decompose_full_sampling_converges_immediately() {
        let g = z(64);
        let kernel = windows::reproducing_kernel(g, 6).unwrap();
        let h = Signal::random(g, 11);
        let f = h.convolve(&kernel).unwrap();
        let bupu = Bupu::build(PointSet::full(g), NeighborhoodQ::new(0)).unwrap();
        let deco = atomic_decompose(&f, &kernel, &bupu, 1e-12, 50).unwrap();
        assert_eq!(deco.residual_history.len(), 1);
        // with delta members the coefficients are the samples of H = F
        for (c, v) in deco.coefficients.iter().zip(f.values()) {
            assert!((c - v).norm() < 1e-12);
        }
        let recon = deco.synthesize(&kernel, &bupu);
        assert!((&recon - &f).norm_sup() <= 1e-12);
    }

    #[test]
    fn atomic_decompose_reconstructs_shifted_range_elements() {
        let g = z(256);
        let kernel = windows::reproducing_kernel(g, 6).unwrap();
        let shaping = windows::gaussian(g);
        let base = kernel
            .convolve(&shaping.convolve(&shaping.involution()).unwrap())
            .unwrap();
        let f = base.translate(37);
        let bupu = Bupu::build(PointSet::regular(g, 2).unwrap(), NeighborhoodQ::new(1)).unwrap();
        let deco = atomic_decompose(&f, &kernel, &bupu, 1e-8, 200).unwrap();
        let recon = deco.synthesize(&kernel, &bupu);
        assert!((&recon - &f).norm_sup() <= 1e-8);
        // geometric decay of the recorded residuals
        for w in deco.residual_history.windows(2) {
            if w[0] > 1e-13 {
                assert!(w[1] < w[0]);
            }
        }
    }

    #[test]
    fn atomic_decompose_detects_non_contraction() {
        let g = z(128);
        let kernel = windows::reproducing_kernel(g, 8).unwrap();
        let h = Signal::random(g, 12);
        let f = h.convolve(&kernel).unwrap();
        // four points with huge windows: hopeless approximation
        let ps = PointSet::new(g, vec![0, 32, 64, 96]).unwrap();
        let bupu = Bupu::build(ps, NeighborhoodQ::new(32)).unwrap();
        let err = atomic_decompose(&f, &kernel, &bupu, 1e-10, 400).unwrap_err();
        assert!(matches!(
            err,
            Error::NotContractive { .. } | Error::MaxIterExceeded { .. }
        ));
    }

    #[test]
    fn sampled_norm_of_delta_counts_window() {
        let g = z(16);
        let ps = PointSet::new(g, vec![0, 8]).unwrap();
        let spec = QuasiNormSpec::lp(1.0, 16).unwrap();
        let got = sampled_norm(&Signal::delta(g, 0), &ps, NeighborhoodQ::new(1), &spec).unwrap();
        assert!((got - 3.0).abs() < 1e-14);
    }

    #[test]
    fn sampled_norm_misses_off_sample_mass() {
        let g = z(16);
        let ps = PointSet::new(g, vec![0, 8]).unwrap();
        let spec = QuasiNormSpec::lp(1.0, 16).unwrap();
        // supported away from the samples but inside their windows
        let f = Signal::delta(g, 1);
        let got = sampled_norm(&f, &ps, NeighborhoodQ::new(2), &spec).unwrap();
        assert_eq!(got, 0.0);
        let amalgam = amalgam_norm(&f, NeighborhoodQ::new(2), &spec).unwrap();
        assert!(amalgam > 0.0);
    }

    #[test]
    fn sampled_norm_bounded_by_overlap_times_amalgam() {
        let g = z(64);
        let ps = PointSet::regular(g, 4).unwrap();
        let q = NeighborhoodQ::new(3);
        let overlap = ps.max_overlap(q) as f64;
        let w = Weight::polynomial(g, 1.0).unwrap();
        let spec = QuasiNormSpec::lp_from_weight(0.8, &w).unwrap();
        for seed in 0..50 {
            let f = Signal::random(g, 300 + seed);
            let sampled = sampled_norm(&f, &ps, q, &spec).unwrap();
            let amalgam = amalgam_norm(&f, q, &spec).unwrap();
            assert!(sampled <= overlap * amalgam * (1.0 + 1e-10));
        }
    }

    #[test]
    fn sampled_norm_separated_windows_have_unit_constant() {
        let g = z(64);
        let ps = PointSet::regular(g, 8).unwrap();
        let q = NeighborhoodQ::new(3); // spacing 8 > 2*3+1 = 7: disjoint
        assert_eq!(ps.max_overlap(q), 1);
        let spec = QuasiNormSpec::lp(0.5, 64).unwrap();
        for seed in 0..50 {
            let f = Signal::random(g, 400 + seed);
            let sampled = sampled_norm(&f, &ps, q, &spec).unwrap();
            let amalgam = amalgam_norm(&f, q, &spec).unwrap();
            assert!(sampled <= amalgam * (1.0 + 1e-10));
        }
    }
}
