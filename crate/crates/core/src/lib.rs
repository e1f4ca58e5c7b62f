//! Statevector laboratory for structured quantum neural networks.
//!
//! The crate simulates real-amplitude parameterized circuits, builds the
//! tree-tensor, step-controlled and alternating-layer-encoder families,
//! differentiates objectives with the exact ±π/4 parameter-shift rule, and
//! verifies the gradient-norm lower bounds those families satisfy —
//! exactly by trigonometric grid quadrature where the parameter count
//! allows, by seeded Monte Carlo beyond that. A training layer runs the
//! encoder and binary-classifier descent loops, and a data layer supplies
//! synthetic two-class sets and IDX image files.
//!
//! All numerics are generic over the [`Real`] scalar; the `*64` aliases
//! below are the types to use unless memory is the constraint.

pub mod circuits;
pub mod data;
pub mod gradients;
pub mod learn;
pub mod real;
pub mod simulator;
pub mod theory;

pub use real::Real;

/// Double-precision statevector, the default for every verification suite.
pub type StateVector64 = simulator::StateVector<f64>;
/// Single-precision statevector for memory-bound simulations.
pub type StateVector32 = simulator::StateVector<f32>;

pub type Objective64 = gradients::Objective<f64>;
pub type ObjectiveTemplate64 = gradients::ObjectiveTemplate<f64>;
pub type GradientVector64 = gradients::GradientVector<f64>;

pub type ExpectationReport64 = theory::ExpectationReport<f64>;
pub type BoundReport64 = theory::BoundReport<f64>;

pub type TrainConfig64 = learn::TrainConfig<f64>;
pub type TrainedModel64 = learn::TrainedModel<f64>;
pub type Metrics64 = learn::Metrics<f64>;
pub type LabeledStateSet64 = learn::LabeledStateSet<f64>;

pub type RawDataset64 = data::RawDataset<f64>;
