//! Inverse source reconstruction for the 3D wave equation using a single
//! high-contrast particle as a contrast agent.
//!
//! The pipeline has three stages:
//!
//! 1. [`forward`] evaluates the background field `V` radiated by a compactly
//!    supported source `J` through the retarded potential.
//! 2. [`perturbation`] synthesizes what a detector at `x` records once a small
//!    ball-shaped particle sits at `z`: the leading-order series over the
//!    radially symmetric eigenmodes of the Newtonian potential ([`spectrum`]).
//! 3. [`reconstruct`] inverts that series with the nonharmonic Riesz basis
//!    `{cos(ω_n t), sin(ω_n t)}` built in [`riesz`], recovering `V(z, ·)` and,
//!    over a lattice of particle positions, the source itself.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. IO, configuration, and the command line live in the companion
//! `wavesource` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod forward;
pub mod geometry;
pub mod medium;
pub mod perturbation;
pub mod quadrature;
pub mod reconstruct;
pub mod riesz;
pub mod series;
pub mod source;
pub mod spectrum;

pub use error::{Error, Result};
pub use geometry::{Ball, Vec3};
pub use medium::MediumConfig;
pub use series::TimeSeries;
