//! Numerical toolkit for the one-phase, one-dimensional fractional Stefan
//! problem with a Caputo time derivative.
//!
//! The crate is organised bottom-up:
//!
//! - [`special_fn`]: Euler gamma and the two-parameter Wright function.
//! - [`analytic`]: closed-form similarity solution, the transcendental
//!   equation for the front coefficient `p`, and physical scaling.
//! - [`scheme`]: front-fixing finite-difference scheme with blended
//!   rectangle/trapezoid fractional quadrature.
//! - [`phi_net`]: the fixed feed-forward network predicting the blend
//!   parameter, and the calibration functional it was trained against.
//! - [`p_iter`]: recovery of `p` from the numerical solution alone.
//!
//! All numerical code is generic over the scalar type through [`Real`];
//! the `*64` aliases below fix it to `f64`, which is what the CLI uses.

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod p_iter;
pub mod phi_net;
pub mod scalar;
pub mod scheme;
pub mod special_fn;

pub use analytic::{FrontMethod, FrontResult, ModelParams, PhysicalParams};
pub use error::{Error, Result};
pub use p_iter::{IterStep, PIterConfig, PhiMode};
pub use phi_net::PhiNetWeights;
pub use scalar::Real;
pub use scheme::{MeshSpec, PhysicalGrid, SolutionGrid, Tridiagonal};
pub use special_fn::WrightOptions;

pub type ModelParams64 = ModelParams<f64>;
pub type FrontResult64 = FrontResult<f64>;
pub type MeshSpec64 = MeshSpec<f64>;
pub type SolutionGrid64 = SolutionGrid<f64>;
pub type PhysicalGrid64 = PhysicalGrid<f64>;
pub type Tridiagonal64 = Tridiagonal<f64>;
pub type PIterConfig64 = PIterConfig<f64>;
pub type PhiMode64 = PhiMode<f64>;
pub type IterStep64 = IterStep<f64>;

pub type ModelParams32 = ModelParams<f32>;
pub type MeshSpec32 = MeshSpec<f32>;
pub type SolutionGrid32 = SolutionGrid<f32>;
