//! Reverse-mode gradients over network parameters with forward-mode spatial
//! derivatives nested inside.
//!
//! A training step records one [`Tape`] per mini-batch. Network activations are
//! carried as stacked `[value | d/dx1 | d/dx2]` matrices so each layer is a
//! single matrix product, and the physical fields leave the network as
//! [`SpatialDual`]s of tape variables.

mod dual;
mod tape;
mod tensor;
mod trig;

pub use dual::{spatial_derivatives, Scalar, SpatialDual};
pub use tape::{guard_nonzero, sigmoid, Activation, NodeId, Tape, UnaryKind, Var};
pub use tensor::Tensor;
