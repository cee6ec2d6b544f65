//! Numerical toolkit for semiclassical matrix Schrödinger operators
//! `P(h) = -h² Δ I_N + V(x)` with radial, Hermitian matrix potentials.
//!
//! The core modules ([`model`], [`carleman`], [`operators`], [`numerics`]) are
//! generic over the real scalar type; [`experiments`] runs in `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleman;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod numerics;
pub mod operators;
pub mod scalar;
pub mod smooth;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type MatrixPotential64 = model::MatrixPotential<f64>;
pub type MatrixPotential32 = model::MatrixPotential<f32>;
pub type RadialGrid64 = operators::RadialGrid<f64>;
pub type DiscretizedOperator64 = operators::DiscretizedOperator<f64>;
pub type WeightFunction64 = carleman::WeightFunction<f64>;
pub type EigsResult64 = numerics::EigsResult<f64>;
