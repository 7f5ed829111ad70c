//! Two-dimensional super-resolution by coordinate combination.
//!
//! A 2-D point source at `(x₁, x₂)` observed through its Fourier samples on
//! `{0..Ω}²` is folded into the scalars `d = e^{ix₁} + e^{ix₂}` and
//! `g = e^{ix₁} − e^{ix₂}`. Binomial sums of the lattice samples turn the
//! measurement into power-sum sequences of these scalars, so 1-D Hankel
//! spectral tools apply:
//!
//! * [`detect`] counts sources by thresholding Hankel singular values.
//! * [`recover`] runs MUSIC on both sequences and pairs the roots.
//! * [`theory`] evaluates the resolution-limit and Vandermonde inequalities
//!   behind those algorithms on concrete instances.
//!
//! The crate is `no_std` with `alloc`; disable the default `std` feature to
//! use it on bare targets.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod assign;
pub mod combine;
pub mod detect;
mod error;
pub mod linalg;
pub mod model;
pub mod music;
pub mod recover;
pub mod spectral;
pub mod theory;

pub use error::{Error, LinalgError, Result};
pub use num_complex::Complex64;

/// `(x₁, x₂)` in radians.
pub type Point = [f64; 2];
