//! Numerical laboratory for uncertainty relations among the three
//! components of angular momentum.
//!
//! The operator algebra, state models, moments and relation catalog are
//! generic over a [`Real`] scalar (`f32` or `f64`); the Monte Carlo and
//! optimization layers work in `f64`. Double-precision aliases for the
//! generic types are exported at the crate root.

// `!(x > 0.0)` style guards reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod measure_sim;
pub mod moments;
pub mod optimize;
pub mod prober;
pub mod relations;
pub mod rng;
pub mod scalar;
pub mod soak;
pub mod spin_ops;
pub mod states;
pub mod triangle;

pub use error::{Error, Result};
pub use relations::RelationId;
pub use scalar::Real;
pub use spin_ops::{Axis, SpinQuantumNumber};

pub type Matrix = linalg::CMatrix<f64>;
pub type Operator = spin_ops::OperatorMatrix<f64>;
pub type SpinOperators = spin_ops::SpinOperatorSet<f64>;
pub type Bloch = states::BlochVector<f64>;
pub type State = states::QuantumState<f64>;
pub type FamilyPoint = states::StateFamilyPoint<f64>;
pub type Report = relations::RelationReport<f64>;
pub type Moments = relations::SpinMoments<f64>;
pub type Context = relations::RelationContext<f64>;
pub type Point = triangle::TrianglePoint<f64>;

pub type Matrix32 = linalg::CMatrix<f32>;
pub type SpinOperators32 = spin_ops::SpinOperatorSet<f32>;
pub type State32 = states::QuantumState<f32>;
pub type Context32 = relations::RelationContext<f32>;
