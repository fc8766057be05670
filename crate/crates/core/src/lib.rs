//! Numerical laboratory for projective Anosov subgroups of SL(d, ℝ) and the
//! flow space 𝕃 = {[v:α] : α(v) > 0} on which they act.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`, which is what the diagnostics are tuned for.

pub mod basic;
pub mod error;
pub mod flow;
pub mod gallery;
pub mod groups;
pub mod linalg;
pub mod scalar;
pub mod thermo;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vector = linalg::Vector<f64>;
pub type Covector = linalg::Covector<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type ProjPoint = linalg::ProjPoint<f64>;
pub type ProjHyperplane = linalg::ProjHyperplane<f64>;
pub type EigenData = linalg::EigenData<f64>;
pub type FlowPoint = flow::FlowPoint<f64>;
pub type TangentVector = flow::TangentVector<f64>;
pub type HopfCoord = flow::HopfCoord<f64>;
pub type GeneratorSet = groups::GeneratorSet<f64>;
pub type GroupElement = groups::GroupElement<f64>;
pub type LimitSample = groups::LimitSample<f64>;
pub type BasicPoint = basic::BasicPoint<f64>;
pub type LimitAtlas = basic::LimitAtlas<f64>;
pub type UnstableChart = basic::UnstableChart<f64>;
