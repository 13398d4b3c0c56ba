//! Discrete Gabor systems on `Z_L`: coefficient transforms, the frame
//! operator with its bounds, canonical dual windows, and coefficient-side
//! quasi-norms.

use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{GridGroup, Signal};
use crate::norms::{lp_accumulate, NeighborhoodQ};

/// Relative threshold under which the smallest frame-operator eigenvalue is
/// treated as zero.
const FRAME_EPS: f64 = 1e-10;
/// Default residual tolerance for dual-window computations.
pub const DUAL_TOL: f64 = 1e-10;
/// Largest group order for which the dense frame operator is assembled.
const DENSE_LIMIT: usize = 4096;

/// Lattice parameters of a Gabor system: `a` divides `L` (time step) and
/// `M` divides `L` (number of frequency channels, step `b = L/M`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LatticeParams {
    #[serde(rename = "L")]
    pub l: usize,
    pub a: usize,
    #[serde(rename = "M")]
    pub m: usize,
}

impl LatticeParams {
    pub fn new(l: usize, a: usize, m: usize) -> Result<Self> {
        if l < 2 || a == 0 || m == 0 || !l.is_multiple_of(a) || !l.is_multiple_of(m) {
            return Err(Error::bad_params(format!(
                "lattice requires a | L and M | L with L >= 2, got L={l}, a={a}, M={m}"
            )));
        }
        Ok(LatticeParams { l, a, m })
    }

    /// Number of time shifts `N = L / a`.
    pub fn time_shifts(&self) -> usize {
        self.l / self.a
    }

    /// Frequency step `b = L / M`.
    pub fn freq_step(&self) -> usize {
        self.l / self.m
    }

    /// Redundancy `M / a` of the system.
    pub fn redundancy(&self) -> f64 {
        self.m as f64 / self.a as f64
    }
}

/// Gabor coefficients on the `N x M` lattice grid, time-major
/// (`index = n * M + m`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientGrid {
    lattice: LatticeParams,
    values: Vec<Complex64>,
}

impl CoefficientGrid {
    pub fn new(lattice: LatticeParams, values: Vec<Complex64>) -> Result<Self> {
        let expect = lattice.time_shifts() * lattice.m;
        if values.len() != expect {
            return Err(Error::ShapeMismatch {
                expected: format!("{} x {} coefficient grid", lattice.time_shifts(), lattice.m),
                got: values.len(),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::bad_params(format!(
                    "coefficient {i} is not finite: {v}"
                )));
            }
        }
        Ok(CoefficientGrid { lattice, values })
    }

    pub fn zeros(lattice: LatticeParams) -> Self {
        let len = lattice.time_shifts() * lattice.m;
        CoefficientGrid {
            lattice,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    #[inline]
    pub fn lattice(&self) -> LatticeParams {
        self.lattice
    }

    /// Number of time shifts (rows).
    #[inline]
    pub fn time_len(&self) -> usize {
        self.lattice.time_shifts()
    }

    /// Number of frequency channels (columns).
    #[inline]
    pub fn freq_len(&self) -> usize {
        self.lattice.m
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.values[n * self.lattice.m + m]
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `sum c[n,m] * conj(d[n,m])`.
    pub fn inner(&self, other: &CoefficientGrid) -> Result<Complex64> {
        if self.lattice != other.lattice {
            return Err(Error::ShapeMismatch {
                expected: format!("{} x {} grid", self.time_len(), self.freq_len()),
                got: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// Two-dimensional control function: sliding maximum of magnitudes over
    /// the periodic product box of the given radius on both axes.
    pub fn control_function(&self, q: NeighborhoodQ) -> Vec<f64> {
        let n = self.time_len();
        let m = self.freq_len();
        let r = q.radius() as i64;
        // separable pass: first along the frequency axis, then along time
        let mut tmp = vec![0.0f64; n * m];
        for row in 0..n {
            for col in 0..m {
                let mut best: f64 = 0.0;
                for v in -r..=r {
                    let cc = (col as i64 + v).rem_euclid(m as i64) as usize;
                    best = best.max(self.values[row * m + cc].norm());
                }
                tmp[row * m + col] = best;
            }
        }
        let mut out = vec![0.0f64; n * m];
        for row in 0..n {
            for col in 0..m {
                let mut best: f64 = 0.0;
                for u in -r..=r {
                    let rr = (row as i64 + u).rem_euclid(n as i64) as usize;
                    best = best.max(tmp[rr * m + col]);
                }
                out[row * m + col] = best;
            }
        }
        out
    }
}

/// Weight on the lattice grid, stored time-major like the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeWeight {
    time_len: usize,
    freq_len: usize,
    values: Vec<f64>,
}

impl LatticeWeight {
    pub fn new(lattice: LatticeParams, values: Vec<f64>) -> Result<Self> {
        let time_len = lattice.time_shifts();
        let freq_len = lattice.m;
        if values.len() != time_len * freq_len {
            return Err(Error::ShapeMismatch {
                expected: format!("lattice weight of length {}", time_len * freq_len),
                got: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::NonPositiveWeight { index: i, value: v });
            }
        }
        Ok(LatticeWeight {
            time_len,
            freq_len,
            values,
        })
    }

    pub fn ones(lattice: LatticeParams) -> Self {
        let len = lattice.time_shifts() * lattice.m;
        LatticeWeight {
            time_len: lattice.time_shifts(),
            freq_len: lattice.m,
            values: vec![1.0; len],
        }
    }

    /// Polynomial lattice weight `(1 + d(ak,0)^2 + d(bj,0)^2)^{s/2}` with
    /// circular distances on both axes.
    pub fn polynomial(lattice: LatticeParams, s: f64) -> Self {
        let group = GridGroup::new(lattice.l).expect("lattice order is at least 2");
        let n = lattice.time_shifts();
        let m = lattice.m;
        let b = lattice.freq_step();
        let mut values = Vec::with_capacity(n * m);
        for k in 0..n {
            let dt = group.metric((k * lattice.a) as i64) as f64;
            for j in 0..m {
                let df = group.metric((j * b) as i64) as f64;
                values.push((1.0 + dt * dt + df * df).powf(s / 2.0));
            }
        }
        LatticeWeight {
            time_len: n,
            freq_len: m,
            values,
        }
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_len(&self) -> usize {
        self.time_len
    }

    pub fn freq_len(&self) -> usize {
        self.freq_len
    }
}

/// Dense frame operator together with its extreme eigenvalues.
#[derive(Debug, Clone)]
pub struct FrameData {
    operator: DMatrix<Complex64>,
    lower: f64,
    upper: f64,
}

impl FrameData {
    /// The operator as a dense Hermitian matrix.
    pub fn operator(&self) -> &DMatrix<Complex64> {
        &self.operator
    }

    /// Lower frame bound (smallest eigenvalue).
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Upper frame bound (largest eigenvalue).
    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn apply(&self, f: &Signal) -> Signal {
        let v = DVector::from_column_slice(f.values());
        let out = &self.operator * v;
        Signal::new(f.group(), out.data.into()).expect("frame operator output is finite")
    }
}

/// Which window performs the coefficient analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisSide {
    /// Analyze with the canonical dual window.
    WithDual,
    /// Analyze with the system window itself.
    WithWindow,
}

/// Method for computing the canonical dual window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualMethod {
    /// Direct dense solve of `S gamma = g`.
    DenseSolve,
    /// Richardson iteration `gamma += 2/(A+B) (g - S gamma)` with the frame
    /// bounds driving the step size.
    Neumann { max_iter: usize, tol: f64 },
}

/// Outcome of the two-sided amalgam/plain coefficient norm comparison.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AmalgamComparison {
    pub plain: f64,
    pub amalgam: f64,
    pub ratio: f64,
}

/// A Gabor system: window plus lattice, with cached derived frame data.
#[derive(Clone)]
pub struct GaborSystem {
    group: GridGroup,
    window: Signal,
    lattice: LatticeParams,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
    frame: OnceLock<FrameData>,
    dual: OnceLock<Signal>,
}

impl std::fmt::Debug for GaborSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaborSystem")
            .field("lattice", &self.lattice)
            .field("window_energy", &self.window.norm2())
            .finish()
    }
}

impl GaborSystem {
    pub fn new(window: Signal, a: usize, m: usize) -> Result<Self> {
        let group = window.group();
        let lattice = LatticeParams::new(group.order(), a, m)?;
        if window.norm2() == 0.0 {
            return Err(Error::bad_params(
                "window must have nonzero energy".to_string(),
            ));
        }
        let mut planner = FftPlanner::new();
        let fft_forward = planner.plan_fft_forward(m);
        let fft_inverse = planner.plan_fft_inverse(m);
        Ok(GaborSystem {
            group,
            window,
            lattice,
            fft_forward,
            fft_inverse,
            frame: OnceLock::new(),
            dual: OnceLock::new(),
        })
    }

    #[inline]
    pub fn group(&self) -> GridGroup {
        self.group
    }

    #[inline]
    pub fn window(&self) -> &Signal {
        &self.window
    }

    #[inline]
    pub fn lattice(&self) -> LatticeParams {
        self.lattice
    }

    /// The atom `M_{mb} T_{na} g` at lattice position `(n, m)`.
    pub fn atom(&self, n: usize, m: usize) -> Signal {
        self.window
            .translate((n * self.lattice.a) as i64)
            .modulate((m * self.lattice.freq_step()) as i64)
    }

    /// Gabor coefficients `c[n,m] = <f, M_{mb} T_{na} g>` via the folded-FFT
    /// factorization: the windowed slice of length `L` is folded to length
    /// `M` and transformed channel-wise.
    pub fn dgt(&self, f: &Signal) -> Result<CoefficientGrid> {
        self.dgt_with(f, &self.window)
    }

    fn check_signal(&self, f: &Signal) -> Result<()> {
        if f.group() != self.group {
            return Err(Error::GroupMismatch {
                left: self.group.order(),
                right: f.group().order(),
            });
        }
        Ok(())
    }

    /// Same transform with an explicit analysis window (used for dual-side
    /// analysis).
    pub fn dgt_with(&self, f: &Signal, window: &Signal) -> Result<CoefficientGrid> {
        self.check_signal(f)?;
        self.check_signal(window)?;
        let l = self.group.order();
        let m = self.lattice.m;
        let n_shifts = self.lattice.time_shifts();
        let a = self.lattice.a;
        let fv = f.values();
        let gv = window.values();
        let mut out = vec![Complex64::new(0.0, 0.0); n_shifts * m];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for n in 0..n_shifts {
            let shift = n * a;
            for slot in buf.iter_mut() {
                *slot = Complex64::new(0.0, 0.0);
            }
            for lidx in 0..l {
                let widx = self.group.sub(lidx, shift);
                buf[lidx % m] += fv[lidx] * gv[widx].conj();
            }
            self.fft_forward.process(&mut buf);
            out[n * m..(n + 1) * m].copy_from_slice(&buf);
        }
        CoefficientGrid::new(self.lattice, out)
    }

    /// Direct double-sum evaluation of the same coefficients; the slow
    /// reference path kept as the second route for verification.
    pub fn dgt_direct(&self, f: &Signal) -> Result<CoefficientGrid> {
        self.dgt_direct_with(f, &self.window)
    }

    pub fn dgt_direct_with(&self, f: &Signal, window: &Signal) -> Result<CoefficientGrid> {
        self.check_signal(f)?;
        self.check_signal(window)?;
        let l = self.group.order();
        let m_ch = self.lattice.m;
        let n_shifts = self.lattice.time_shifts();
        let a = self.lattice.a;
        let mut out = vec![Complex64::new(0.0, 0.0); n_shifts * m_ch];
        for n in 0..n_shifts {
            for m in 0..m_ch {
                let mut acc = Complex64::new(0.0, 0.0);
                for lidx in 0..l {
                    let widx = self.group.sub(lidx, n * a);
                    let phase = -std::f64::consts::TAU * (m * lidx) as f64 / m_ch as f64;
                    acc += f.values()[lidx]
                        * window.values()[widx].conj()
                        * Complex64::new(phase.cos(), phase.sin());
                }
                out[n * m_ch + m] = acc;
            }
        }
        CoefficientGrid::new(self.lattice, out)
    }

    /// Synthesis `sum_{n,m} c[n,m] M_{mb} T_{na} g`, the adjoint of `dgt`
    /// with the same window.
    pub fn idgt(&self, coeffs: &CoefficientGrid) -> Result<Signal> {
        self.idgt_with(coeffs, &self.window)
    }

    pub fn idgt_with(&self, coeffs: &CoefficientGrid, window: &Signal) -> Result<Signal> {
        if coeffs.lattice != self.lattice {
            return Err(Error::ShapeMismatch {
                expected: format!(
                    "{} x {} coefficient grid",
                    self.lattice.time_shifts(),
                    self.lattice.m
                ),
                got: coeffs.values.len(),
            });
        }
        self.check_signal(window)?;
        let l = self.group.order();
        let m = self.lattice.m;
        let n_shifts = self.lattice.time_shifts();
        let a = self.lattice.a;
        let gv = window.values();
        let mut out = vec![Complex64::new(0.0, 0.0); l];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for n in 0..n_shifts {
            buf.copy_from_slice(&coeffs.values[n * m..(n + 1) * m]);
            self.fft_inverse.process(&mut buf);
            let shift = n * a;
            for (lidx, slot) in out.iter_mut().enumerate() {
                let widx = self.group.sub(lidx, shift);
                *slot += buf[lidx % m] * gv[widx];
            }
        }
        Signal::new(self.group, out)
    }

    /// Dense frame operator with its bounds; errors when the smallest
    /// eigenvalue vanishes relative to the largest.
    pub fn frame_data(&self) -> Result<&FrameData> {
        if let Some(fd) = self.frame.get() {
            return check_frame(fd).map(|_| fd);
        }
        let fd = self.build_frame_data()?;
        let fd = self.frame.get_or_init(|| fd);
        check_frame(fd).map(|_| fd)
    }

    /// Frame bounds `(A, B)` regardless of whether the system is a frame.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        if let Some(fd) = self.frame.get() {
            return Ok((fd.lower, fd.upper));
        }
        let fd = self.build_frame_data()?;
        let fd = self.frame.get_or_init(|| fd);
        Ok((fd.lower, fd.upper))
    }

    fn build_frame_data(&self) -> Result<FrameData> {
        let l = self.group.order();
        if l > DENSE_LIMIT {
            return Err(Error::bad_params(format!(
                "dense frame operator is limited to order {DENSE_LIMIT}, got {l}"
            )));
        }
        let mut op = DMatrix::<Complex64>::zeros(l, l);
        for col in 0..l {
            let e = Signal::delta(self.group, col as i64);
            let image = self.idgt(&self.dgt(&e)?)?;
            for (row, v) in image.values().iter().enumerate() {
                op[(row, col)] = *v;
            }
        }
        // symmetrize before the eigensolve; roundoff asymmetry is ~1e-15
        let herm = (&op + &op.adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = herm.symmetric_eigen();
        let mut lower = f64::INFINITY;
        let mut upper = f64::NEG_INFINITY;
        for ev in eigen.eigenvalues.iter() {
            lower = lower.min(*ev);
            upper = upper.max(*ev);
        }
        Ok(FrameData {
            operator: op,
            lower,
            upper,
        })
    }

    /// Canonical dual window `gamma = S^{-1} g`.
    pub fn canonical_dual(&self, method: DualMethod) -> Result<Signal> {
        match method {
            DualMethod::DenseSolve => self.canonical_dual_dense().cloned(),
            DualMethod::Neumann { max_iter, tol } => {
                Ok(self.canonical_dual_neumann(max_iter, tol)?.0)
            }
        }
    }

    /// Cached dense-solve dual.
    pub fn canonical_dual_dense(&self) -> Result<&Signal> {
        if let Some(d) = self.dual.get() {
            return Ok(d);
        }
        let fd = self.frame_data()?;
        let herm = (fd.operator() + fd.operator().adjoint()) * Complex64::new(0.5, 0.0);
        let rhs = DVector::from_column_slice(self.window.values());
        let solution = herm
            .clone()
            .cholesky()
            .map(|ch| ch.solve(&rhs))
            .or_else(|| herm.lu().solve(&rhs))
            .ok_or_else(|| Error::bad_params("frame operator solve failed".to_string()))?;
        let gamma = Signal::new(self.group, solution.data.into())?;
        let residual = (&fd.apply(&gamma) - &self.window).norm2();
        if residual > DUAL_TOL * self.window.norm2() {
            return Err(Error::bad_params(format!(
                "dual residual {residual:.3e} exceeds tolerance"
            )));
        }
        Ok(self.dual.get_or_init(|| gamma))
    }

    /// Dual via the frame-bound Richardson iteration; also returns the
    /// residual history. The contraction factor is `(B-A)/(B+A)`.
    pub fn canonical_dual_neumann(&self, max_iter: usize, tol: f64) -> Result<(Signal, Vec<f64>)> {
        let fd = self.frame_data()?;
        let (a, b) = (fd.lower, fd.upper);
        let step = 2.0 / (a + b);
        let predicted = (b - a) / (b + a);
        let g_norm = self.window.norm2();
        let mut gamma = Signal::zeros(self.group);
        let mut history = Vec::new();
        let mut stall_count = 0usize;
        let mut last_residual = f64::INFINITY;
        for _ in 0..max_iter {
            let residual_signal = &self.window - &fd.apply(&gamma);
            let residual = residual_signal.norm2();
            history.push(residual);
            if residual <= tol * g_norm {
                return Ok((gamma, history));
            }
            if last_residual.is_finite() && last_residual > 0.0 {
                let ratio = residual / last_residual;
                if ratio > predicted * 1.1 {
                    stall_count += 1;
                    if stall_count >= 10 {
                        return Err(Error::NeumannStalled {
                            ratio,
                            predicted,
                            count: stall_count,
                        });
                    }
                } else {
                    stall_count = 0;
                }
            }
            last_residual = residual;
            gamma = &gamma + &(&residual_signal * Complex64::new(step, 0.0));
        }
        Err(Error::MaxIterExceeded {
            max_iter,
            residual: last_residual,
        })
    }

    /// Tight window `S^{-1/2} g`.
    pub fn tight_window(&self) -> Result<Signal> {
        let fd = self.frame_data()?;
        let herm = (fd.operator() + fd.operator().adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = herm.symmetric_eigen();
        let l = self.group.order();
        let g = DVector::from_column_slice(self.window.values());
        // S^{-1/2} g = V diag(lambda^{-1/2}) V^H g
        let vh_g = eigen.eigenvectors.adjoint() * g;
        let mut scaled = vh_g;
        for i in 0..l {
            let lam = eigen.eigenvalues[i];
            scaled[i] *= Complex64::new(1.0 / lam.sqrt(), 0.0);
        }
        let out = &eigen.eigenvectors * scaled;
        Signal::new(self.group, out.data.into())
    }

    /// Mixed-norm of the analysis coefficients: inner `p`-sum over the time
    /// index, outer `q`-sum over the frequency index, weight applied inside.
    pub fn modulation_norm(
        &self,
        f: &Signal,
        p: f64,
        q: f64,
        weight: &LatticeWeight,
        side: AnalysisSide,
    ) -> Result<f64> {
        let coeffs = match side {
            AnalysisSide::WithDual => {
                let dual = self.canonical_dual_dense()?.clone();
                self.dgt_with(f, &dual)?
            }
            AnalysisSide::WithWindow => self.dgt(f)?,
        };
        mixed_norm_grid(&coeffs, p, q, weight)
    }

    /// Plain vs amalgam mixed norm of the coefficient grid, with the
    /// two-dimensional control function over the periodic product box.
    pub fn amalgam_comparison(
        &self,
        f: &Signal,
        p: f64,
        q: f64,
        weight: &LatticeWeight,
        box_radius: NeighborhoodQ,
        side: AnalysisSide,
    ) -> Result<AmalgamComparison> {
        let coeffs = match side {
            AnalysisSide::WithDual => {
                let dual = self.canonical_dual_dense()?.clone();
                self.dgt_with(f, &dual)?
            }
            AnalysisSide::WithWindow => self.dgt(f)?,
        };
        amalgam_comparison_grid(&coeffs, p, q, weight, box_radius)
    }
}

fn check_frame(fd: &FrameData) -> Result<()> {
    let threshold = FRAME_EPS * fd.upper;
    if fd.lower <= threshold || fd.lower.is_nan() {
        return Err(Error::NotAFrame {
            lower: fd.lower,
            upper: fd.upper,
            threshold,
        });
    }
    Ok(())
}

/// Mixed `(p, q)` norm of a coefficient grid under a lattice weight.
pub fn mixed_norm_grid(
    coeffs: &CoefficientGrid,
    p: f64,
    q: f64,
    weight: &LatticeWeight,
) -> Result<f64> {
    check_grid_weight(coeffs, weight)?;
    let n = coeffs.time_len();
    let m = coeffs.freq_len();
    let values = coeffs.values();
    let w = weight.values();
    let inner = |j: usize| {
        lp_accumulate(
            (0..n).map(move |k| values[k * m + j].norm() * w[k * m + j]),
            p,
        )
    };
    Ok(lp_accumulate((0..m).map(inner), q))
}

/// Mixed norm of the sliding-max control grid versus the plain grid.
pub fn amalgam_comparison_grid(
    coeffs: &CoefficientGrid,
    p: f64,
    q: f64,
    weight: &LatticeWeight,
    box_radius: NeighborhoodQ,
) -> Result<AmalgamComparison> {
    check_grid_weight(coeffs, weight)?;
    let plain = mixed_norm_grid(coeffs, p, q, weight)?;
    let control = coeffs.control_function(box_radius);
    let n = coeffs.time_len();
    let m = coeffs.freq_len();
    let w = weight.values();
    let control = &control;
    let inner = |j: usize| lp_accumulate((0..n).map(move |k| control[k * m + j] * w[k * m + j]), p);
    let amalgam = lp_accumulate((0..m).map(inner), q);
    let ratio = if plain > 0.0 { amalgam / plain } else { 1.0 };
    Ok(AmalgamComparison {
        plain,
        amalgam,
        ratio,
    })
}

fn check_grid_weight(coeffs: &CoefficientGrid, weight: &LatticeWeight) -> Result<()> {
    if weight.time_len() != coeffs.time_len() || weight.freq_len() != coeffs.freq_len() {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windows;

    fn z(l: usize) -> GridGroup {
        GridGroup::new(l).unwrap()
    }

    fn gaussian_system(l: usize, a: usize, m: usize) -> GaborSystem {
        GaborSystem::new(windows::gaussian(z(l)), a, m).unwrap()
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeParams::new(16, 3, 4).is_err());
        assert!(LatticeParams::new(16, 4, 5).is_err());
        let lat = LatticeParams::new(16, 4, 8).unwrap();
        assert_eq!(lat.time_shifts(), 4);
        assert_eq!(lat.freq_step(), 2);
        assert!((lat.redundancy() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dgt_with_delta_window_sifts() {
        let g = z(16);
        let sys = GaborSystem::new(Signal::delta(g, 0), 1, 16).unwrap();
        let f = Signal::random(g, 1);
        let c = sys.dgt(&f).unwrap();
        for n in 0..16 {
            for m in 0..16 {
                let phase = -std::f64::consts::TAU * (m * n) as f64 / 16.0;
                let want = f.values()[n] * Complex64::new(phase.cos(), phase.sin());
                assert!((c.get(n, m) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dgt_autocorrelation_at_origin() {
        let sys = gaussian_system(32, 4, 8);
        let c = sys.dgt(sys.window()).unwrap();
        assert!((c.get(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dgt_matches_direct_sum_oracle() {
        let g = z(32);
        let sys = gaussian_system(32, 4, 8);
        let f = Signal::random(g, 2);
        let fast = sys.dgt(&f).unwrap();
        let slow = sys.dgt_direct(&f).unwrap();
        let scale = slow.norm2();
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn idgt_of_unit_coefficient_is_window() {
        let sys = gaussian_system(32, 4, 8);
        let mut c = CoefficientGrid::zeros(sys.lattice());
        c.values_mut()[0] = Complex64::new(1.0, 0.0);
        let f = sys.idgt(&c).unwrap();
        assert!((&f - sys.window()).norm2() < 1e-13);
    }

    #[test]
    fn idgt_of_zero_grid_is_zero() {
        let sys = gaussian_system(16, 4, 4);
        let c = CoefficientGrid::zeros(sys.lattice());
        let f = sys.idgt(&c).unwrap();
        assert_eq!(f.norm2(), 0.0);
    }

    #[test]
    fn dgt_idgt_are_adjoint() {
        let g = z(48);
        let sys = gaussian_system(48, 4, 12);
        for seed in 0..5 {
            let f = Signal::random(g, 10 + seed);
            let mut c = CoefficientGrid::zeros(sys.lattice());
            let rand_grid = Signal::random(z(c.values().len()), 20 + seed);
            c.values_mut().copy_from_slice(rand_grid.values());
            let lhs = sys.dgt(&f).unwrap().inner(&c).unwrap();
            let rhs = f.inner(&sys.idgt(&c).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * f.norm2() * c.norm2());
        }
    }

    #[test]
    fn delta_orthogonal_system_has_flat_frame_operator() {
        let g = z(16);
        let sys = GaborSystem::new(Signal::delta(g, 0), 1, 16).unwrap();
        let fd = sys.frame_data().unwrap();
        assert!((fd.lower() - 16.0).abs() < 1e-10);
        assert!((fd.upper() - 16.0).abs() < 1e-10);
        for row in 0..16 {
            for col in 0..16 {
                let want = if row == col { 16.0 } else { 0.0 };
                assert!((fd.operator()[(row, col)] - Complex64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn frame_bounds_match_rayleigh_quotients() {
        let sys = gaussian_system(128, 4, 16);
        let fd = sys.frame_data().unwrap();
        assert!(fd.lower() > 0.0);
        for seed in 0..20 {
            let v = Signal::random(z(128), seed);
            let quotient = fd.apply(&v).inner(&v).unwrap().re / v.norm2().powi(2);
            assert!(quotient >= fd.lower() - 1e-8);
            assert!(quotient <= fd.upper() + 1e-8);
        }
    }

    #[test]
    fn undersampled_lattice_is_not_a_frame() {
        let sys = gaussian_system(32, 8, 4);
        assert!(matches!(sys.frame_data(), Err(Error::NotAFrame { .. })));
        let (a, b) = sys.frame_bounds().unwrap();
        assert!(a <= 1e-10 * b);
    }

    #[test]
    fn tight_frame_dual_is_scaled_window() {
        let g = z(16);
        let sys = GaborSystem::new(Signal::delta(g, 0), 1, 16).unwrap();
        let gamma = sys.canonical_dual(DualMethod::DenseSolve).unwrap();
        let want = &Signal::delta(g, 0) * Complex64::new(1.0 / 16.0, 0.0);
        assert!((&gamma - &want).norm2() < 1e-12);
    }

    #[test]
    fn neumann_and_dense_duals_agree() {
        let sys = gaussian_system(128, 4, 16);
        let dense = sys.canonical_dual(DualMethod::DenseSolve).unwrap();
        let (neumann, history) = sys.canonical_dual_neumann(500, 1e-10).unwrap();
        assert!((&dense - &neumann).norm2() <= 1e-8 * dense.norm2());
        assert!(history.len() >= 2);
        assert!(history.last().unwrap() <= &(1e-10 * sys.window().norm2()));
    }

    #[test]
    fn neumann_on_undersampled_lattice_fails() {
        let sys = gaussian_system(32, 8, 4);
        assert!(sys.canonical_dual_neumann(100, 1e-10).is_err());
    }

    #[test]
    fn reconstruction_with_dual_window() {
        let sys = gaussian_system(64, 4, 16);
        let dual = sys.canonical_dual_dense().unwrap().clone();
        for seed in 0..5 {
            let f = Signal::random(z(64), 30 + seed);
            let c = sys.dgt(&f).unwrap();
            let back = sys.idgt_with(&c, &dual).unwrap();
            assert!((&back - &f).norm2() <= 1e-10 * f.norm2());
            // swapped roles
            let c2 = sys.dgt_with(&f, &dual).unwrap();
            let back2 = sys.idgt(&c2).unwrap();
            assert!((&back2 - &f).norm2() <= 1e-10 * f.norm2());
        }
    }

    #[test]
    fn covariance_shifts_coefficient_magnitudes() {
        let sys = gaussian_system(32, 4, 8);
        let f = Signal::random(z(32), 40);
        let c = sys.dgt(&f).unwrap();
        let (n0, m0) = (3usize, 5usize);
        let shifted = f
            .translate((n0 * sys.lattice().a) as i64)
            .modulate((m0 * sys.lattice().freq_step()) as i64);
        let cs = sys.dgt(&shifted).unwrap();
        let (n_len, m_len) = (c.time_len(), c.freq_len());
        for n in 0..n_len {
            for m in 0..m_len {
                let src = c.get((n + n_len - n0) % n_len, (m + m_len - m0) % m_len);
                assert!((cs.get(n, m).norm() - src.norm()).abs() <= 1e-12 * (1.0 + src.norm()));
            }
        }
    }

    #[test]
    fn modulation_norm_zero_signal() {
        let sys = gaussian_system(32, 4, 8);
        let w = LatticeWeight::ones(sys.lattice());
        let got = sys
            .modulation_norm(
                &Signal::zeros(z(32)),
                1.0,
                2.0,
                &w,
                AnalysisSide::WithWindow,
            )
            .unwrap();
        assert_eq!(got, 0.0);
    }

    #[test]
    fn modulation_norm_parseval_for_orthogonal_system() {
        let g = z(16);
        let sys = GaborSystem::new(Signal::delta(g, 0), 1, 16).unwrap();
        let w = LatticeWeight::ones(sys.lattice());
        for seed in 0..5 {
            let f = Signal::random(g, 50 + seed);
            let got = sys
                .modulation_norm(&f, 2.0, 2.0, &w, AnalysisSide::WithDual)
                .unwrap();
            let want = f.norm2() / 4.0; // ||f||_2 / sqrt(L)
            assert!((got - want).abs() <= 1e-10 * want);
        }
    }

    #[test]
    fn amalgam_comparison_radius_zero_is_unit_ratio() {
        let sys = gaussian_system(32, 4, 8);
        let f = Signal::random(z(32), 60);
        let w = LatticeWeight::ones(sys.lattice());
        let cmp = sys
            .amalgam_comparison(
                &f,
                0.8,
                0.8,
                &w,
                NeighborhoodQ::new(0),
                AnalysisSide::WithWindow,
            )
            .unwrap();
        assert!((cmp.ratio - 1.0).abs() < 1e-12);
        assert!((cmp.plain - cmp.amalgam).abs() <= 1e-12 * cmp.plain);
    }

    #[test]
    fn amalgam_comparison_one_hot_grid_counts_box() {
        let lattice = LatticeParams::new(64, 4, 16).unwrap();
        let mut c = CoefficientGrid::zeros(lattice);
        c.values_mut()[5 * 16 + 7] = Complex64::new(2.0, 1.0);
        let w = LatticeWeight::ones(lattice);
        let q = NeighborhoodQ::new(1);
        let (p, qq) = (0.8, 0.5);
        let cmp = amalgam_comparison_grid(&c, p, qq, &w, q).unwrap();
        // indicator of a 3x3 box: (2q+1)^{1/p} * (2q+1)^{1/q}
        let want = 3f64.powf(1.0 / p) * 3f64.powf(1.0 / qq);
        assert!((cmp.ratio - want).abs() <= 1e-12 * want);
        let r = p.min(qq).min(1.0);
        assert!(cmp.ratio <= (9f64).powf(1.0 / r) * (1.0 + 1e-12));
    }

    #[test]
    fn amalgam_comparison_dominates_plain() {
        let sys = gaussian_system(32, 4, 8);
        let w = LatticeWeight::ones(sys.lattice());
        for seed in 0..10 {
            let f = Signal::random(z(32), 70 + seed);
            let cmp = sys
                .amalgam_comparison(
                    &f,
                    0.8,
                    0.8,
                    &w,
                    NeighborhoodQ::new(1),
                    AnalysisSide::WithWindow,
                )
                .unwrap();
            assert!(cmp.amalgam >= cmp.plain * (1.0 - 1e-12));
            let bound = (9f64).powf(1.0 / 0.8);
            assert!(cmp.ratio <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lattice_weight_polynomial_is_symmetric_and_positive() {
        let lattice = LatticeParams::new(32, 4, 8).unwrap();
        let w = LatticeWeight::polynomial(lattice, 2.0);
        assert!(w.values().iter().all(|&v| v >= 1.0));
        // symmetry in the time index: k and N-k give the same distance
        let n = lattice.time_shifts();
        let m = lattice.m;
        for k in 1..n {
            for j in 0..m {
                let a = w.values()[k * m + j];
                let b = w.values()[(n - k) * m + j];
                assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
