//! Quantum circuit optimization driven by Hoare-style postconditions.
//!
//! Every executed gate contributes a classical relation between the SSA
//! variables of its target qubits before and after the gate. A gate (or a
//! group of gates whose product is the identity) is dropped when a SAT
//! query proves it can only ever act as the identity on the reachable
//! computational-basis support.

pub mod bench;
pub mod circuit;
pub mod cli;
pub mod cond;
pub mod decompose;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod metrics;
pub mod opt;
pub mod sim;
pub mod text;

pub use circuit::{Circuit, GateKind, Instruction, OpKind, QubitId, Violation};
pub use error::{Error, Result};
pub use metrics::Metrics;
