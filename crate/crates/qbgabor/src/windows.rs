//! Stock signal generators: analysis windows and test kernels.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{GridGroup, Signal};

/// Periodized Gaussian `sum_j exp(-pi (l - L/2 + jL)^2 / L)` centered at
/// `L/2`, normalized to unit energy. Decays below 1e-14 well inside half a
/// period, the stand-in here for a rapidly decaying window class.
pub fn gaussian(group: GridGroup) -> Signal {
    let l = group.order();
    let lf = l as f64;
    let center = lf / 2.0;
    let mut values = vec![0.0; l];
    for (x, v) in values.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in -2..=2i64 {
            let t = x as f64 - center + j as f64 * lf;
            acc += (-PI * t * t / lf).exp();
        }
        *v = acc;
    }
    normalize(group, values)
}

/// Raised-cosine bump of width `L/8` (at least 4 samples) centered at `L/2`,
/// zero elsewhere, normalized to unit energy. The short support keeps dense
/// channel lattices well covered.
pub fn raised_cosine(group: GridGroup) -> Signal {
    let l = group.order();
    let width = (l / 8).max(4).min(l);
    let start = l / 2 - width / 2;
    let mut values = vec![0.0; l];
    for t in 0..width {
        values[start + t] = (PI * t as f64 / width as f64).sin().powi(2);
    }
    normalize(group, values)
}

/// Real even kernel whose spectrum is the 0/1 indicator of the band
/// `|k| <= band`; it is idempotent under circular convolution and acts as
/// the identity on band-limited signals. Computed as the cosine sum
/// `(1/L) * (1 + 2 sum_{k<=band} cos(2 pi k x / L))`.
pub fn reproducing_kernel(group: GridGroup, band: usize) -> Result<Signal> {
    let l = group.order();
    if 2 * band + 1 > l {
        return Err(crate::error::Error::bad_params(format!(
            "band {band} does not fit in a group of order {l}"
        )));
    }
    let lf = l as f64;
    let mut values = vec![0.0; l];
    for (x, v) in values.iter_mut().enumerate() {
        let mut acc = 1.0;
        for k in 1..=band {
            acc += 2.0 * (TAU * k as f64 * x as f64 / lf).cos();
        }
        *v = acc / lf;
    }
    Signal::from_real(group, &values)
}

fn normalize(group: GridGroup, values: Vec<f64>) -> Signal {
    let energy: f64 = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    let values = values
        .into_iter()
        .map(|v| Complex64::new(v / energy, 0.0))
        .collect();
    Signal::new(group, values).expect("normalized window is finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(l: usize) -> GridGroup {
        GridGroup::new(l).unwrap()
    }

    #[test]
    fn gaussian_has_unit_energy_and_decays() {
        let g = gaussian(z(128));
        assert!((g.norm2() - 1.0).abs() < 1e-12);
        // Centered at L/2, negligible at the wrap-around point.
        assert!(g.values()[0].norm() < 1e-14);
        assert!(g.values()[64].norm() > 0.1);
    }

    #[test]
    fn raised_cosine_support_and_energy() {
        let w = raised_cosine(z(128));
        assert!((w.norm2() - 1.0).abs() < 1e-12);
        let support: Vec<usize> = (0..128).filter(|&x| w.values()[x].norm() > 0.0).collect();
        assert!(support.len() < 16);
        assert!(support.iter().all(|&x| (56..72).contains(&x)));
    }

    #[test]
    fn reproducing_kernel_is_idempotent() {
        let group = z(64);
        let k = reproducing_kernel(group, 5).unwrap();
        let kk = k.convolve(&k).unwrap();
        assert!((&kk - &k).norm2() < 1e-12);
    }

    #[test]
    fn reproducing_kernel_reproduces_band_limited_signals() {
        let group = z(64);
        let k = reproducing_kernel(group, 5).unwrap();
        // build a band-limited signal as a combination of low frequencies
        let mut f = Signal::zeros(group);
        for (freq, amp) in [(0i64, 0.7), (3, 1.3), (-5, 0.4)] {
            let tone = Signal::from_real(group, &vec![amp; 64])
                .unwrap()
                .modulate(freq);
            f = &f + &tone;
        }
        let reproduced = f.convolve(&k).unwrap();
        assert!((&reproduced - &f).norm2() <= 1e-12 * f.norm2());
    }
}
