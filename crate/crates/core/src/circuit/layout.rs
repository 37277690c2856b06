use std::ops::Range;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayoutMode {
    /// One ancilla register per evolution step: `n·(m+1)` qubits.
    Literal,
    /// x-register plus a single output register: `2n` qubits.
    Compressed,
}

/// Placement of the logical registers on flat qubit indices.
///
/// The x-register always occupies `[0, n)`. Register blocks follow it
/// contiguously; the phase ancilla, when present, is the last qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    n: usize,
    m: usize,
    mode: LayoutMode,
    phase_ancilla: bool,
}

impl RegisterLayout {
    pub fn new(n: usize, m: usize, mode: LayoutMode, with_phase_ancilla: bool) -> Result<Self> {
        if n == 0 {
            return Err(invalid("register width must be at least 1"));
        }
        if m == 0 {
            return Err(invalid("step count must be at least 1"));
        }
        Ok(RegisterLayout {
            n,
            m,
            mode,
            phase_ancilla: with_phase_ancilla,
        })
    }

    pub fn literal(n: usize, m: usize, with_phase_ancilla: bool) -> Result<Self> {
        Self::new(n, m, LayoutMode::Literal, with_phase_ancilla)
    }

    pub fn compressed(n: usize, m: usize, with_phase_ancilla: bool) -> Result<Self> {
        Self::new(n, m, LayoutMode::Compressed, with_phase_ancilla)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mode(&self) -> LayoutMode {
        self.mode
    }

    fn block_count(&self) -> usize {
        match self.mode {
            LayoutMode::Literal => self.m + 1,
            LayoutMode::Compressed => 2,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n * self.block_count() + usize::from(self.phase_ancilla)
    }

    pub fn x_register(&self) -> Range<usize> {
        0..self.n
    }

    /// Register holding `f^(j)(x)`. Layer 0 is the x-register; a compressed
    /// layout only has layers 0 and `m`.
    pub fn layer(&self, j: usize) -> Result<Range<usize>> {
        let block = match (self.mode, j) {
            (_, 0) => 0,
            (LayoutMode::Literal, j) if j <= self.m => j,
            (LayoutMode::Compressed, j) if j == self.m => 1,
            _ => {
                return Err(invalid(format!(
                    "layer {j} does not exist in a {:?} layout with m = {}",
                    self.mode, self.m
                )))
            }
        };
        Ok(block * self.n..(block + 1) * self.n)
    }

    /// All work registers after the x-register, in order. The last one is the output.
    pub fn ancilla_layers(&self) -> Vec<Range<usize>> {
        (1..self.block_count())
            .map(|b| b * self.n..(b + 1) * self.n)
            .collect()
    }

    pub fn output_register(&self) -> Range<usize> {
        let b = self.block_count() - 1;
        b * self.n..(b + 1) * self.n
    }

    /// Intermediate layers `1..m` that uncomputation must restore to zero.
    pub fn intermediate_layers(&self) -> Vec<Range<usize>> {
        let mut layers = self.ancilla_layers();
        layers.pop();
        layers
    }

    pub fn phase_ancilla(&self) -> Option<usize> {
        self.phase_ancilla.then(|| self.n * self.block_count())
    }

    pub(crate) fn require_phase_ancilla(&self) -> Result<usize> {
        self.phase_ancilla()
            .ok_or_else(|| invalid("layout has no phase ancilla"))
    }

    pub fn check_budget(&self, max_qubits: usize) -> Result<()> {
        let q = self.num_qubits();
        if q > max_qubits {
            return Err(Error::Resource(format!(
                "{:?} layout for n = {}, m = {} needs {q} qubits, budget is {max_qubits}",
                self.mode, self.n, self.m
            )));
        }
        Ok(())
    }
}
