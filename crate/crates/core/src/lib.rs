//! Reversible quantum compilation of one-dimensional cellular automata.
//!
//! The crate is split into four layers:
//!
//! * [`statevec`]: a dense statevector simulator for the gate set `{H, X, MCX}`.
//! * [`circuit`]: the gate/circuit representation, register layouts and the QCT text format.
//! * [`ca`]: the classical CA engine (ground truth and preimage oracle) and the
//!   compiler that turns a rule into reversible layers with ancilla uncomputation.
//! * [`grover`]: phase oracle, diffusion, iteration schedules and the search driver.
//!
//! Qubit `b` is bit `b` of a basis index throughout, and CA cell `i` of the
//! x-register lives on qubit `i`.

pub mod ca;
pub mod circuit;
pub mod error;
pub mod grover;
pub mod statevec;

pub use ca::{Boundary, CaRule, CaState, EvolutionSpec, PreimageReport};
pub use circuit::{Circuit, Control, Gate, GateKind, LayoutMode, Polarity, RegisterLayout};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use statevec::{StateVector, DEFAULT_MAX_QUBITS};
