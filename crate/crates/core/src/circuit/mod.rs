//! Gate and circuit representation.
//!
//! The gate set is deliberately tiny: Hadamard, Pauli-X and a multi-controlled
//! X whose controls each carry a polarity. Every gate in the set is its own
//! inverse, so inverting a circuit only reverses the gate order.

mod layout;
pub mod qct;

use std::fmt;

use crate::error::{invalid, Error, Result};

pub use layout::{LayoutMode, RegisterLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires when the control qubit is `|1⟩`.
    Positive,
    /// Fires when the control qubit is `|0⟩`.
    Negative,
}

impl Polarity {
    /// The polarity that fires on the given bit value.
    pub fn matching(bit: bool) -> Self {
        if bit {
            Polarity::Positive
        } else {
            Polarity::Negative
        }
    }

    pub fn fires_on(self) -> bool {
        self == Polarity::Positive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn positive(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(qubit: usize) -> Self {
        Control {
            qubit,
            polarity: Polarity::Negative,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Hadamard,
    PauliX,
    Mcx,
}

/// A single gate. Construction validates that the target and the controls
/// are pairwise distinct, so every `Gate` value is well formed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl Gate {
    pub fn h(qubit: usize) -> Self {
        Gate {
            kind: GateKind::Hadamard,
            target: qubit,
            controls: Vec::new(),
        }
    }

    pub fn x(qubit: usize) -> Self {
        Gate {
            kind: GateKind::PauliX,
            target: qubit,
            controls: Vec::new(),
        }
    }

    /// Multi-controlled X: flips `target` iff every control matches its polarity.
    ///
    /// With zero controls this acts like [`Gate::x`] but stays an `Mcx` gate
    /// structurally; with two positive controls it is the Toffoli gate.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Result<Self> {
        for (i, c) in controls.iter().enumerate() {
            if c.qubit == target {
                return Err(invalid(format!("qubit {target} is both control and target")));
            }
            if controls[..i].iter().any(|o| o.qubit == c.qubit) {
                return Err(invalid(format!("duplicate control qubit {}", c.qubit)));
            }
        }
        Ok(Gate {
            kind: GateKind::Mcx,
            target,
            controls,
        })
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Result<Self> {
        Gate::mcx(vec![Control::positive(c0), Control::positive(c1)], target)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Largest qubit index touched by the gate.
    pub fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .map(|c| c.qubit)
            .fold(self.target, usize::max)
    }

    /// `(mask, value)` such that the gate fires on basis index `i` iff `i & mask == value`.
    ///
    /// Only meaningful for qubit indices below the pointer width.
    pub fn control_mask(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            let bit = 1usize << c.qubit;
            let value = if c.polarity.fires_on() { value | bit } else { value };
            (mask | bit, value)
        })
    }

    /// True for gates that permute basis states (X and MCX).
    pub fn is_permutation(&self) -> bool {
        self.kind != GateKind::Hadamard
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Hadamard => write!(f, "h {}", self.target),
            GateKind::PauliX => write!(f, "x {}", self.target),
            GateKind::Mcx => {
                f.write_str("mcx")?;
                for c in &self.controls {
                    let sign = if c.polarity.fires_on() { '+' } else { '-' };
                    write!(f, " {sign}{}", c.qubit)?;
                }
                write!(f, " t{}", self.target)
            }
        }
    }
}

/// An ordered gate list over `num_qubits` qubits. Immutable once built;
/// composition and inversion produce new circuits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn empty(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if let Some((pos, g)) = gates
            .iter()
            .enumerate()
            .find(|(_, g)| g.max_qubit() >= num_qubits)
        {
            return Err(Error::AtGate {
                position: pos,
                source: Box::new(invalid(format!(
                    "qubit {} out of range for {num_qubits} qubits",
                    g.max_qubit()
                ))),
            });
        }
        Ok(Circuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `next`. The result spans the wider of the two registers.
    pub fn then(&self, next: &Circuit) -> Circuit {
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&next.gates);
        Circuit {
            num_qubits: self.num_qubits.max(next.num_qubits),
            gates,
        }
    }

    /// Concatenates circuits in application order.
    pub fn sequence<'a>(num_qubits: usize, parts: impl IntoIterator<Item = &'a Circuit>) -> Result<Circuit> {
        let gates = parts
            .into_iter()
            .flat_map(|c| c.gates.iter().cloned())
            .collect();
        Circuit::from_gates(num_qubits, gates)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    /// True when the circuit contains no Hadamard gates.
    pub fn is_permutation(&self) -> bool {
        self.gates.iter().all(Gate::is_permutation)
    }

    /// Follows a basis state through a permutation circuit without allocating
    /// a statevector. Returns `None` if the circuit contains a Hadamard gate.
    pub fn trace_basis(&self, mut index: u128) -> Option<u128> {
        for g in &self.gates {
            let t = 1u128 << g.target;
            match g.kind {
                GateKind::Hadamard => return None,
                GateKind::PauliX => index ^= t,
                GateKind::Mcx => {
                    let fires = g
                        .controls
                        .iter()
                        .all(|c| ((index >> c.qubit) & 1 == 1) == c.polarity.fires_on());
                    if fires {
                        index ^= t;
                    }
                }
            }
        }
        Some(index)
    }
}
