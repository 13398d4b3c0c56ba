//! Time-frequency analysis on finite cyclic groups with quasi-norm machinery.
//!
//! The crate is organized around a small set of concrete objects: complex
//! signals on `Z_L` ([`grid`]), solid quasi-norms including Wiener-amalgam
//! and Lorentz functionals ([`norms`]), discrete Gabor systems with frame
//! operators and canonical duals ([`gabor`]), partition-of-unity
//! discretization of convolution operators ([`coorbit`]), and greedy n-term
//! approximation over coefficient grids ([`nterm`]).

pub mod coorbit;
pub mod error;
pub mod gabor;
pub mod grid;
pub mod io;
pub mod norms;
pub mod nterm;
pub mod verify;
pub mod windows;

pub use error::{Error, Result};
pub use num_complex::Complex64;
