//! Reversible arithmetic over the Clifford+T gate set.
//!
//! Circuits are built as gate lists over named registers, lowered to
//! Clifford+T, costed, simulated on a dense or sparse statevector and
//! checked exhaustively against classical oracles. Noise characterization
//! lives in [`verify`].

pub mod arith;
pub mod circuit;
pub mod error;
pub mod exec;
pub mod gates;
pub mod rng;
pub mod sparse;
pub mod state;
pub mod uncompute;
pub mod verify;

pub use arith::{ArithInstance, ArithKind, TaylorConstants};
pub use circuit::{Circuit, Register, RegisterLayout, ResourceReport, Role};
pub use error::{Error, Result};
pub use exec::Exec;
pub use gates::{Gate, UnitaryMatrix};
pub use sparse::SparseState;
pub use state::{Amplitude, MeasurementCounts, StateVector};
pub use uncompute::{bennett_wrap, BennettSpec};
pub use verify::{EquivalenceReport, NoiseModel, RBResult};
