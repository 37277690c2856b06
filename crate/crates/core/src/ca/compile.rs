//! Compiles a CA rule into reversible circuits.
//!
//! Each step writes the new generation into a fresh all-zero ancilla layer,
//! which makes any rule reversible. After the last layer is written the
//! intermediate layers are uncomputed in reverse order, leaving
//! `|x⟩|0…0⟩…|f^(m)(x)⟩`.

use std::ops::Range;

use super::{evolution_table, neighbors, Boundary, CaRule, EvolutionSpec};
use crate::circuit::{Circuit, Control, Gate, LayoutMode, Polarity, RegisterLayout};
use crate::error::{invalid, Error, Result};
use crate::statevec::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellUpdateStyle {
    /// `(X⊗X⊗I)·T·(X⊗X⊗I)·T·(I⊗I⊗X)` on `(x[i-1], x[i+1], a[i])`. Rule 90 only.
    PaperDecomposition,
    /// One MCX per true table row, polarities spelling out the neighborhood.
    GenericTable,
}

fn check_layout(spec: &EvolutionSpec, layout: &RegisterLayout) -> Result<()> {
    if layout.n() != spec.n() || layout.m() != spec.m() {
        return Err(invalid(format!(
            "layout is for n = {}, m = {} but spec has n = {}, m = {}",
            layout.n(),
            layout.m(),
            spec.n(),
            spec.m()
        )));
    }
    Ok(())
}

fn cell_gates(
    rule: CaRule,
    boundary: Boundary,
    cell: usize,
    source: &Range<usize>,
    dest: &Range<usize>,
    style: CellUpdateStyle,
) -> Result<Vec<Gate>> {
    let n = source.len();
    let (left, right) = neighbors(cell, n, boundary);
    let left = left.map(|j| source.start + j);
    let right = right.map(|j| source.start + j);
    let center = source.start + cell;
    let target = dest.start + cell;

    let mut gates = Vec::new();
    match style {
        CellUpdateStyle::PaperDecomposition => {
            if rule != CaRule::RULE_90 {
                return Err(Error::Unsupported(format!(
                    "the XOR decomposition only implements rule 90, not rule {}",
                    rule.wolfram_number()
                )));
            }
            let present: Vec<usize> = [left, right].into_iter().flatten().collect();
            // a ← 1
            gates.push(Gate::x(target));
            // a ← a ⊕ l·r; a fixed-zero neighbor means this never fires.
            if present.len() == 2 {
                gates.push(Gate::mcx(present.iter().map(|&q| Control::positive(q)).collect(), target)?);
            }
            // a ← a ⊕ ¬l·¬r; a fixed-zero neighbor negates to a constant 1 and drops out.
            gates.extend(present.iter().map(|&q| Gate::x(q)));
            gates.push(Gate::mcx(present.iter().map(|&q| Control::positive(q)).collect(), target)?);
            gates.extend(present.iter().map(|&q| Gate::x(q)));
        }
        CellUpdateStyle::GenericTable => {
            'rows: for (l, c, r) in rule.true_rows() {
                let mut controls = Vec::with_capacity(3);
                for (qubit, bit) in [(left, l), (Some(center), c), (right, r)] {
                    match qubit {
                        Some(q) => controls.push(Control {
                            qubit: q,
                            polarity: Polarity::matching(bit),
                        }),
                        // Boundary cell reads 0: a row needing 1 there never fires.
                        None if bit => continue 'rows,
                        None => {}
                    }
                }
                gates.push(Gate::mcx(controls, target)?);
            }
        }
    }
    Ok(gates)
}

/// `C_i`: writes the rule's output for cell `cell` of `source_layer` into the
/// (assumed zero) ancilla for that cell in `dest_layer`.
pub fn build_cell_update(
    spec: &EvolutionSpec,
    layout: &RegisterLayout,
    cell: usize,
    source_layer: usize,
    dest_layer: usize,
    style: CellUpdateStyle,
) -> Result<Circuit> {
    if layout.n() != spec.n() {
        return Err(invalid("layout width does not match spec"));
    }
    if cell >= spec.n() {
        return Err(invalid(format!("cell {cell} out of range for n = {}", spec.n())));
    }
    if source_layer == dest_layer {
        return Err(invalid("source and destination layers coincide"));
    }
    let source = layout.layer(source_layer)?;
    let dest = layout.layer(dest_layer)?;
    let gates = cell_gates(spec.rule(), spec.boundary(), cell, &source, &dest, style)?;
    Circuit::from_gates(layout.num_qubits(), gates)
}

/// `A_j = C_n … C_1`: computes layer `j` from layer `j - 1`, cell 0 first.
pub fn build_layer(
    spec: &EvolutionSpec,
    layout: &RegisterLayout,
    j: usize,
    style: CellUpdateStyle,
) -> Result<Circuit> {
    check_layout(spec, layout)?;
    if layout.mode() != LayoutMode::Literal {
        return Err(invalid("per-step layers need a literal layout"));
    }
    if j == 0 {
        return Err(invalid("layer 0 is the input register"));
    }
    let source = layout.layer(j - 1)?;
    let dest = layout.layer(j)?;
    let mut gates = Vec::new();
    for cell in 0..spec.n() {
        gates.extend(cell_gates(spec.rule(), spec.boundary(), cell, &source, &dest, style)?);
    }
    Circuit::from_gates(layout.num_qubits(), gates)
}

/// `U_CA = A_1⁻¹ … A_{m-1}⁻¹ · A_m … A_1` on a literal layout.
pub fn build_uca(
    spec: &EvolutionSpec,
    layout: &RegisterLayout,
    style: CellUpdateStyle,
    max_qubits: usize,
) -> Result<Circuit> {
    check_layout(spec, layout)?;
    layout.check_budget(max_qubits)?;
    let layers = (1..=spec.m())
        .map(|j| build_layer(spec, layout, j, style))
        .collect::<Result<Vec<_>>>()?;
    let uncompute: Vec<Circuit> = layers[..spec.m() - 1]
        .iter()
        .rev()
        .map(Circuit::inverse)
        .collect();
    Circuit::sequence(layout.num_qubits(), layers.iter().chain(&uncompute))
}

/// `H` on every x-register qubit.
pub fn prepare_superposition(layout: &RegisterLayout) -> Circuit {
    let gates = layout.x_register().map(Gate::h).collect();
    Circuit::from_gates(layout.num_qubits(), gates).expect("x-register lies inside the layout")
}

/// The net permutation `|x⟩|y⟩ → |x⟩|y ⊕ f^(m)(x)⟩`, tabulated classically.
///
/// This is what the literal `U_CA` does once its intermediate layers are
/// uncomputed, without paying for `n·(m-1)` extra qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedEvolution {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    table: Vec<u64>,
}

impl CompressedEvolution {
    pub fn table(&self) -> &[u64] {
        &self.table
    }

    /// Self-inverse, so this also undoes itself.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        state.apply_xor_function(&self.inputs, &self.outputs, &self.table)
    }
}

pub fn build_uca_compressed(
    spec: &EvolutionSpec,
    layout: &RegisterLayout,
    max_qubits: usize,
) -> Result<CompressedEvolution> {
    check_layout(spec, layout)?;
    layout.check_budget(max_qubits)?;
    Ok(CompressedEvolution {
        inputs: layout.x_register().collect(),
        outputs: layout.output_register().collect(),
        table: evolution_table(spec)?,
    })
}

/// `U_CA` in whichever form the layout calls for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evolution {
    Literal { forward: Circuit, inverse: Circuit },
    Compressed(CompressedEvolution),
}

impl Evolution {
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match self {
            Evolution::Literal { forward, .. } => state.apply_circuit(forward),
            Evolution::Compressed(c) => c.apply(state),
        }
    }

    pub fn apply_inverse(&self, state: &mut StateVector) -> Result<()> {
        match self {
            Evolution::Literal { inverse, .. } => state.apply_circuit(inverse),
            Evolution::Compressed(c) => c.apply(state),
        }
    }

    pub fn circuit(&self) -> Option<&Circuit> {
        match self {
            Evolution::Literal { forward, .. } => Some(forward),
            Evolution::Compressed(_) => None,
        }
    }
}

pub fn build_evolution(
    spec: &EvolutionSpec,
    layout: &RegisterLayout,
    style: CellUpdateStyle,
    max_qubits: usize,
) -> Result<Evolution> {
    match layout.mode() {
        LayoutMode::Literal => {
            let forward = build_uca(spec, layout, style, max_qubits)?;
            let inverse = forward.inverse();
            Ok(Evolution::Literal { forward, inverse })
        }
        LayoutMode::Compressed => Ok(Evolution::Compressed(build_uca_compressed(spec, layout, max_qubits)?)),
    }
}
