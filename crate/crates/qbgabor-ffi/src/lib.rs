//! C ABI over the core library: opaque handles, integer status codes, and
//! flat `f64` buffers. Every entry point catches panics and reports them as
//! a status; the last error message is kept per thread and can be fetched
//! with [`qbg_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use num_complex::Complex64;
use qbgabor::gabor::{CoefficientGrid, DualMethod, GaborSystem, LatticeParams, LatticeWeight};
use qbgabor::grid::{GridGroup, Signal};
use qbgabor::norms::{amalgam_norm, lorentz_star_norm, NeighborhoodQ, QuasiNormSpec};
use qbgabor::{io, windows, Error};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbgStatus {
    Ok = 0,
    /// The lattice does not generate a frame.
    NotAFrame = 2,
    /// File i/o or format failure.
    Io = 3,
    /// Invalid argument or numerical precondition failure.
    Invalid = 4,
    /// A null pointer was passed where data was required.
    NullArgument = 5,
    /// An internal panic was caught; state may be stale.
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let cleaned = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(cleaned).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> QbgStatus {
    match err {
        Error::NotAFrame { .. } => QbgStatus::NotAFrame,
        Error::Io(_) | Error::Format { .. } => QbgStatus::Io,
        _ => QbgStatus::Invalid,
    }
}

fn fail(err: Error) -> QbgStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn guard(body: impl FnOnce() -> QbgStatus) -> QbgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&message);
            QbgStatus::Panic
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qbg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque complex signal on `Z_L`.
pub struct QbgSignal(Signal);
/// Opaque Gabor system (window plus lattice, with cached frame data).
pub struct QbgSystem(GaborSystem);
/// Opaque coefficient grid.
pub struct QbgGrid(CoefficientGrid);

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> QbgStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return QbgStatus::NullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    QbgStatus::Ok
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(unsafe { std::slice::from_raw_parts(ptr, len) })
    }
}

unsafe fn complex_values(
    re: *const f64,
    im: *const f64,
    len: usize,
) -> Result<Vec<Complex64>, QbgStatus> {
    let re = match unsafe { slice_arg(re, len) } {
        Some(s) => s,
        None => {
            set_error("real-part pointer is null");
            return Err(QbgStatus::NullArgument);
        }
    };
    let im = unsafe { slice_arg(im, len) };
    Ok((0..len)
        .map(|i| Complex64::new(re[i], im.map(|s| s[i]).unwrap_or(0.0)))
        .collect())
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, QbgStatus> {
    if path.is_null() {
        set_error("path is null");
        return Err(QbgStatus::NullArgument);
    }
    match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_error("path is not valid UTF-8");
            Err(QbgStatus::Invalid)
        }
    }
}

macro_rules! deref_or_null {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => {
                set_error("handle is null");
                return QbgStatus::NullArgument;
            }
        }
    };
}

// ---------------------------------------------------------------------------
// signals
// ---------------------------------------------------------------------------

/// Create a signal from `len` samples; `im` may be null for a real signal.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_create(
    len: u32,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QbgSignal,
) -> QbgStatus {
    guard(|| {
        let values = match unsafe { complex_values(re, im, len as usize) } {
            Ok(v) => v,
            Err(status) => return status,
        };
        let group = match GridGroup::new(len as usize) {
            Ok(g) => g,
            Err(e) => return fail(e),
        };
        match Signal::new(group, values) {
            Ok(signal) => unsafe { write_out(out, QbgSignal(signal)) },
            Err(e) => fail(e),
        }
    })
}

/// Periodized unit-energy Gaussian window.
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_gaussian(len: u32, out: *mut *mut QbgSignal) -> QbgStatus {
    guard(|| match GridGroup::new(len as usize) {
        Ok(group) => unsafe { write_out(out, QbgSignal(windows::gaussian(group))) },
        Err(e) => fail(e),
    })
}

/// Compactly supported raised-cosine window.
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_raised_cosine(len: u32, out: *mut *mut QbgSignal) -> QbgStatus {
    guard(|| match GridGroup::new(len as usize) {
        Ok(group) => unsafe { write_out(out, QbgSignal(windows::raised_cosine(group))) },
        Err(e) => fail(e),
    })
}

/// Seeded complex white-noise signal; reproducible across platforms.
///
/// # Safety
/// `out` must be a valid location for a handle.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_random(
    len: u32,
    seed: u64,
    out: *mut *mut QbgSignal,
) -> QbgStatus {
    guard(|| match GridGroup::new(len as usize) {
        Ok(group) => unsafe { write_out(out, QbgSignal(Signal::random(group, seed))) },
        Err(e) => fail(e),
    })
}

/// Length of the signal, 0 for a null handle.
///
/// # Safety
/// `signal` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_len(signal: *const QbgSignal) -> u32 {
    unsafe { signal.as_ref() }.map_or(0, |s| s.0.len() as u32)
}

/// Copy the samples into caller-provided buffers of the signal length;
/// `im` may be null to skip the imaginary parts.
///
/// # Safety
/// `re` (and `im` when non-null) must hold `qbg_signal_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_copy_data(
    signal: *const QbgSignal,
    re: *mut f64,
    im: *mut f64,
) -> QbgStatus {
    guard(|| {
        let signal = deref_or_null!(signal);
        if re.is_null() {
            set_error("real-part output is null");
            return QbgStatus::NullArgument;
        }
        let len = signal.0.len();
        let re_out = unsafe { std::slice::from_raw_parts_mut(re, len) };
        for (slot, v) in re_out.iter_mut().zip(signal.0.values()) {
            *slot = v.re;
        }
        if !im.is_null() {
            let im_out = unsafe { std::slice::from_raw_parts_mut(im, len) };
            for (slot, v) in im_out.iter_mut().zip(signal.0.values()) {
                *slot = v.im;
            }
        }
        QbgStatus::Ok
    })
}

/// Read a signal file (binary or CSV).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_read(
    path: *const c_char,
    out: *mut *mut QbgSignal,
) -> QbgStatus {
    guard(|| {
        let path = match unsafe { path_arg(path) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match io::read_signal(path) {
            Ok(signal) => unsafe { write_out(out, QbgSignal(signal)) },
            Err(e) => fail(e),
        }
    })
}

/// Write a signal file (binary, or CSV for `.csv` paths).
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_write(
    signal: *const QbgSignal,
    path: *const c_char,
) -> QbgStatus {
    guard(|| {
        let signal = deref_or_null!(signal);
        let path = match unsafe { path_arg(path) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match io::write_signal(path, &signal.0) {
            Ok(()) => QbgStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Release a signal handle; null is ignored.
///
/// # Safety
/// `signal` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbg_signal_free(signal: *mut QbgSignal) {
    if !signal.is_null() {
        drop(unsafe { Box::from_raw(signal) });
    }
}

// ---------------------------------------------------------------------------
// systems and transforms
// ---------------------------------------------------------------------------

/// Build a Gabor system from a window and lattice steps `a`, `m`.
///
/// # Safety
/// `window` must be a live signal handle; `out` a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_system_create(
    window: *const QbgSignal,
    a: u32,
    m: u32,
    out: *mut *mut QbgSystem,
) -> QbgStatus {
    guard(|| {
        let window = deref_or_null!(window);
        match GaborSystem::new(window.0.clone(), a as usize, m as usize) {
            Ok(sys) => unsafe { write_out(out, QbgSystem(sys)) },
            Err(e) => fail(e),
        }
    })
}

/// Extreme eigenvalues of the frame operator, whether or not the system is
/// a frame.
///
/// # Safety
/// `lower` and `upper` must be writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qbg_system_frame_bounds(
    system: *const QbgSystem,
    lower: *mut f64,
    upper: *mut f64,
) -> QbgStatus {
    guard(|| {
        let system = deref_or_null!(system);
        if lower.is_null() || upper.is_null() {
            set_error("bound output is null");
            return QbgStatus::NullArgument;
        }
        match system.0.frame_bounds() {
            Ok((a, b)) => {
                unsafe {
                    *lower = a;
                    *upper = b;
                }
                QbgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Canonical dual window. `method` 0 is the dense solve; 1 is the
/// frame-bound iteration with `tol` and `max_iter`.
///
/// # Safety
/// `out` must be a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_system_canonical_dual(
    system: *const QbgSystem,
    method: u32,
    tol: f64,
    max_iter: u32,
    out: *mut *mut QbgSignal,
) -> QbgStatus {
    guard(|| {
        let system = deref_or_null!(system);
        let method = match method {
            0 => DualMethod::DenseSolve,
            1 => DualMethod::Neumann {
                max_iter: max_iter as usize,
                tol,
            },
            other => {
                set_error(&format!("unknown dual method {other}"));
                return QbgStatus::Invalid;
            }
        };
        match system.0.canonical_dual(method) {
            Ok(dual) => unsafe { write_out(out, QbgSignal(dual)) },
            Err(e) => fail(e),
        }
    })
}

/// Release a system handle; null is ignored.
///
/// # Safety
/// `system` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbg_system_free(system: *mut QbgSystem) {
    if !system.is_null() {
        drop(unsafe { Box::from_raw(system) });
    }
}

/// Analyze a signal into coefficients; with `use_dual` nonzero the analysis
/// window is the canonical dual.
///
/// # Safety
/// All handles must be live; `out` a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_dgt(
    system: *const QbgSystem,
    signal: *const QbgSignal,
    use_dual: u8,
    out: *mut *mut QbgGrid,
) -> QbgStatus {
    guard(|| {
        let system = deref_or_null!(system);
        let signal = deref_or_null!(signal);
        let result = if use_dual != 0 {
            system
                .0
                .canonical_dual_dense()
                .cloned()
                .and_then(|dual| system.0.dgt_with(&signal.0, &dual))
        } else {
            system.0.dgt(&signal.0)
        };
        match result {
            Ok(grid) => unsafe { write_out(out, QbgGrid(grid)) },
            Err(e) => fail(e),
        }
    })
}

/// Synthesize a signal from coefficients; with `use_dual` nonzero the
/// synthesis window is the canonical dual.
///
/// # Safety
/// All handles must be live; `out` a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_idgt(
    system: *const QbgSystem,
    grid: *const QbgGrid,
    use_dual: u8,
    out: *mut *mut QbgSignal,
) -> QbgStatus {
    guard(|| {
        let system = deref_or_null!(system);
        let grid = deref_or_null!(grid);
        let result = if use_dual != 0 {
            system
                .0
                .canonical_dual_dense()
                .cloned()
                .and_then(|dual| system.0.idgt_with(&grid.0, &dual))
        } else {
            system.0.idgt(&grid.0)
        };
        match result {
            Ok(signal) => unsafe { write_out(out, QbgSignal(signal)) },
            Err(e) => fail(e),
        }
    })
}

/// Build a coefficient grid for the lattice `(l, a, m)` from row-major
/// samples (time index outer); `im` may be null.
///
/// # Safety
/// `re`/`im` must hold `(l/a) * m` doubles; `out` a valid handle location.
#[no_mangle]
pub unsafe extern "C" fn qbg_grid_create(
    l: u32,
    a: u32,
    m: u32,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QbgGrid,
) -> QbgStatus {
    guard(|| {
        let lattice = match LatticeParams::new(l as usize, a as usize, m as usize) {
            Ok(lat) => lat,
            Err(e) => return fail(e),
        };
        let len = lattice.time_shifts() * lattice.m;
        let values = match unsafe { complex_values(re, im, len) } {
            Ok(v) => v,
            Err(status) => return status,
        };
        match CoefficientGrid::new(lattice, values) {
            Ok(grid) => unsafe { write_out(out, QbgGrid(grid)) },
            Err(e) => fail(e),
        }
    })
}

/// Grid dimensions: rows (time shifts) and columns (channels).
///
/// # Safety
/// `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qbg_grid_dims(
    grid: *const QbgGrid,
    rows: *mut u32,
    cols: *mut u32,
) -> QbgStatus {
    guard(|| {
        let grid = deref_or_null!(grid);
        if rows.is_null() || cols.is_null() {
            set_error("dimension output is null");
            return QbgStatus::NullArgument;
        }
        unsafe {
            *rows = grid.0.time_len() as u32;
            *cols = grid.0.freq_len() as u32;
        }
        QbgStatus::Ok
    })
}

/// Copy the coefficients in row-major order; `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must hold `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn qbg_grid_copy_data(
    grid: *const QbgGrid,
    re: *mut f64,
    im: *mut f64,
) -> QbgStatus {
    guard(|| {
        let grid = deref_or_null!(grid);
        if re.is_null() {
            set_error("real-part output is null");
            return QbgStatus::NullArgument;
        }
        let len = grid.0.values().len();
        let re_out = unsafe { std::slice::from_raw_parts_mut(re, len) };
        for (slot, v) in re_out.iter_mut().zip(grid.0.values()) {
            *slot = v.re;
        }
        if !im.is_null() {
            let im_out = unsafe { std::slice::from_raw_parts_mut(im, len) };
            for (slot, v) in im_out.iter_mut().zip(grid.0.values()) {
                *slot = v.im;
            }
        }
        QbgStatus::Ok
    })
}

/// Release a grid handle; null is ignored.
///
/// # Safety
/// `grid` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbg_grid_free(grid: *mut QbgGrid) {
    if !grid.is_null() {
        drop(unsafe { Box::from_raw(grid) });
    }
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

/// Weighted `l^p` quasi-norm of a flat array; `im` and `weight` may be null
/// (real data, constant weight). `p` may be `INFINITY`.
///
/// # Safety
/// Non-null pointers must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qbg_lp_norm(
    re: *const f64,
    im: *const f64,
    len: u32,
    p: f64,
    weight: *const f64,
    out: *mut f64,
) -> QbgStatus {
    guard(|| {
        let len = len as usize;
        let values = match unsafe { complex_values(re, im, len) } {
            Ok(v) => v,
            Err(status) => return status,
        };
        let weight = unsafe { slice_arg(weight, len) }
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| vec![1.0; len]);
        if out.is_null() {
            set_error("norm output is null");
            return QbgStatus::NullArgument;
        }
        let spec = match QuasiNormSpec::lp_weighted(p, weight) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        match qbgabor::norms::y_norm(&values, &spec) {
            Ok(norm) => {
                unsafe { *out = norm };
                QbgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Lorentz quasi-norm of the weighted rearrangement; `q` may be `INFINITY`
/// for the weak-type form.
///
/// # Safety
/// Non-null pointers must hold `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qbg_lorentz_star_norm(
    re: *const f64,
    im: *const f64,
    len: u32,
    p: f64,
    q: f64,
    weight: *const f64,
    out: *mut f64,
) -> QbgStatus {
    guard(|| {
        let len = len as usize;
        let values = match unsafe { complex_values(re, im, len) } {
            Ok(v) => v,
            Err(status) => return status,
        };
        let weight = unsafe { slice_arg(weight, len) }
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| vec![1.0; len]);
        if out.is_null() {
            set_error("norm output is null");
            return QbgStatus::NullArgument;
        }
        match lorentz_star_norm(&values, p, q, &weight) {
            Ok(norm) => {
                unsafe { *out = norm };
                QbgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Wiener-amalgam `l^p` norm of a signal over the window of the given
/// radius; `weight` of the signal length may be null.
///
/// # Safety
/// `weight`, when non-null, must hold signal-length doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbg_amalgam_lp_norm(
    signal: *const QbgSignal,
    radius: u32,
    p: f64,
    weight: *const f64,
    out: *mut f64,
) -> QbgStatus {
    guard(|| {
        let signal = deref_or_null!(signal);
        if out.is_null() {
            set_error("norm output is null");
            return QbgStatus::NullArgument;
        }
        let len = signal.0.len();
        let weight = unsafe { slice_arg(weight, len) }
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| vec![1.0; len]);
        let spec = match QuasiNormSpec::lp_weighted(p, weight) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        match amalgam_norm(&signal.0, NeighborhoodQ::new(radius as usize), &spec) {
            Ok(norm) => {
                unsafe { *out = norm };
                QbgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Mixed `(p, q)` coefficient norm of a signal under the system: the inner
/// `p`-sum runs over time shifts, the outer `q`-sum over channels. `weight`
/// of length `rows * cols` may be null; `use_dual` selects dual-window
/// analysis.
///
/// # Safety
/// `weight`, when non-null, must hold `rows * cols` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbg_modulation_norm(
    system: *const QbgSystem,
    signal: *const QbgSignal,
    p: f64,
    q: f64,
    weight: *const f64,
    use_dual: u8,
    out: *mut f64,
) -> QbgStatus {
    guard(|| {
        let system = deref_or_null!(system);
        let signal = deref_or_null!(signal);
        if out.is_null() {
            set_error("norm output is null");
            return QbgStatus::NullArgument;
        }
        let lattice = system.0.lattice();
        let len = lattice.time_shifts() * lattice.m;
        let weight = match unsafe { slice_arg(weight, len) } {
            Some(values) => match LatticeWeight::new(lattice, values.to_vec()) {
                Ok(w) => w,
                Err(e) => return fail(e),
            },
            None => LatticeWeight::ones(lattice),
        };
        let side = if use_dual != 0 {
            qbgabor::gabor::AnalysisSide::WithDual
        } else {
            qbgabor::gabor::AnalysisSide::WithWindow
        };
        match system.0.modulation_norm(&signal.0, p, q, &weight, side) {
            Ok(norm) => {
                unsafe { *out = norm };
                QbgStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn make_signal(len: u32, seed: u64) -> *mut QbgSignal {
        let mut out = ptr::null_mut();
        let status = unsafe { qbg_signal_random(len, seed, &mut out) };
        assert_eq!(status, QbgStatus::Ok);
        out
    }

    #[test]
    fn roundtrip_through_the_c_surface() {
        unsafe {
            let mut window = ptr::null_mut();
            assert_eq!(qbg_signal_gaussian(128, &mut window), QbgStatus::Ok);
            let mut system = ptr::null_mut();
            assert_eq!(qbg_system_create(window, 4, 16, &mut system), QbgStatus::Ok);

            let f = make_signal(128, 9);
            let mut grid = ptr::null_mut();
            assert_eq!(qbg_dgt(system, f, 0, &mut grid), QbgStatus::Ok);

            let mut rows = 0;
            let mut cols = 0;
            assert_eq!(qbg_grid_dims(grid, &mut rows, &mut cols), QbgStatus::Ok);
            assert_eq!((rows, cols), (32, 16));

            let mut back = ptr::null_mut();
            assert_eq!(qbg_idgt(system, grid, 1, &mut back), QbgStatus::Ok);

            let mut f_re = vec![0.0; 128];
            let mut f_im = vec![0.0; 128];
            let mut b_re = vec![0.0; 128];
            let mut b_im = vec![0.0; 128];
            assert_eq!(
                qbg_signal_copy_data(f, f_re.as_mut_ptr(), f_im.as_mut_ptr()),
                QbgStatus::Ok
            );
            assert_eq!(
                qbg_signal_copy_data(back, b_re.as_mut_ptr(), b_im.as_mut_ptr()),
                QbgStatus::Ok
            );
            let err: f64 = (0..128)
                .map(|i| {
                    let dr = f_re[i] - b_re[i];
                    let di = f_im[i] - b_im[i];
                    dr * dr + di * di
                })
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-10);

            qbg_signal_free(back);
            qbg_grid_free(grid);
            qbg_signal_free(f);
            qbg_system_free(system);
            qbg_signal_free(window);
        }
    }

    #[test]
    fn frame_bounds_and_not_a_frame_status() {
        unsafe {
            let mut window = ptr::null_mut();
            assert_eq!(qbg_signal_gaussian(32, &mut window), QbgStatus::Ok);
            let mut system = ptr::null_mut();
            assert_eq!(qbg_system_create(window, 8, 4, &mut system), QbgStatus::Ok);

            let mut lower = 0.0;
            let mut upper = 0.0;
            assert_eq!(
                qbg_system_frame_bounds(system, &mut lower, &mut upper),
                QbgStatus::Ok
            );
            assert!(lower < 1e-10 * upper);

            let mut dual = ptr::null_mut();
            let status = qbg_system_canonical_dual(system, 0, 1e-10, 100, &mut dual);
            assert_eq!(status, QbgStatus::NotAFrame);
            let message = CStr::from_ptr(qbg_last_error_message());
            assert!(message.to_string_lossy().contains("frame"));

            qbg_system_free(system);
            qbg_signal_free(window);
        }
    }

    #[test]
    fn norms_through_the_c_surface() {
        unsafe {
            let re = [3.0, 4.0, 0.0, 0.0];
            let mut out = 0.0;
            assert_eq!(
                qbg_lp_norm(re.as_ptr(), ptr::null(), 4, 2.0, ptr::null(), &mut out),
                QbgStatus::Ok
            );
            assert!((out - 5.0).abs() < 1e-14);

            let re = [2.0, 1.0];
            assert_eq!(
                qbg_lorentz_star_norm(
                    re.as_ptr(),
                    ptr::null(),
                    2,
                    1.0,
                    f64::INFINITY,
                    ptr::null(),
                    &mut out
                ),
                QbgStatus::Ok
            );
            assert!((out - 2.0).abs() < 1e-14);

            // invalid exponent surfaces as Invalid
            assert_eq!(
                qbg_lp_norm(re.as_ptr(), ptr::null(), 2, 0.0, ptr::null(), &mut out),
                QbgStatus::Invalid
            );
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out = ptr::null_mut();
            assert_eq!(
                qbg_signal_create(4, ptr::null(), ptr::null(), &mut out),
                QbgStatus::NullArgument
            );
            assert_eq!(qbg_signal_len(ptr::null()), 0);
            let mut norm = 0.0;
            assert_eq!(
                qbg_amalgam_lp_norm(ptr::null(), 1, 1.0, ptr::null(), &mut norm),
                QbgStatus::NullArgument
            );
            qbg_signal_free(ptr::null_mut());
            qbg_grid_free(ptr::null_mut());
            qbg_system_free(ptr::null_mut());
        }
    }

    #[test]
    fn file_io_through_the_c_surface() {
        unsafe {
            let dir = std::env::temp_dir().join("qbg_ffi_io_test");
            std::fs::create_dir_all(&dir).unwrap();
            let path = dir.join("f.sig");
            let path_c = CString::new(path.to_str().unwrap()).unwrap();

            let f = make_signal(24, 3);
            assert_eq!(qbg_signal_write(f, path_c.as_ptr()), QbgStatus::Ok);
            let mut back = ptr::null_mut();
            assert_eq!(qbg_signal_read(path_c.as_ptr(), &mut back), QbgStatus::Ok);
            assert_eq!(qbg_signal_len(back), 24);

            let missing = CString::new(dir.join("missing.sig").to_str().unwrap()).unwrap();
            let mut nothing = ptr::null_mut();
            assert_eq!(
                qbg_signal_read(missing.as_ptr(), &mut nothing),
                QbgStatus::Io
            );

            qbg_signal_free(back);
            qbg_signal_free(f);
            std::fs::remove_dir_all(&dir).ok();
        }
    }

    #[test]
    fn modulation_norm_matches_library() {
        unsafe {
            let mut window = ptr::null_mut();
            assert_eq!(qbg_signal_gaussian(64, &mut window), QbgStatus::Ok);
            let mut system = ptr::null_mut();
            assert_eq!(qbg_system_create(window, 4, 16, &mut system), QbgStatus::Ok);
            let f = make_signal(64, 5);

            let mut got = 0.0;
            assert_eq!(
                qbg_modulation_norm(system, f, 0.5, 2.0, ptr::null(), 0, &mut got),
                QbgStatus::Ok
            );

            let group = GridGroup::new(64).unwrap();
            let sys = GaborSystem::new(windows::gaussian(group), 4, 16).unwrap();
            let signal = Signal::random(group, 5);
            let weight = LatticeWeight::ones(sys.lattice());
            let want = sys
                .modulation_norm(
                    &signal,
                    0.5,
                    2.0,
                    &weight,
                    qbgabor::gabor::AnalysisSide::WithWindow,
                )
                .unwrap();
            assert!((got - want).abs() <= 1e-12 * want);

            qbg_signal_free(f);
            qbg_system_free(system);
            qbg_signal_free(window);
        }
    }
}
