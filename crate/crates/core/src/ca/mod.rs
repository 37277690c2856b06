//! Classical one-dimensional binary cellular automata.
//!
//! This is the ground truth every quantum result is checked against. States
//! are packed into a `u64` (cell `i` at bit `i`) and a step is computed
//! word-parallel from the rule's true rows.

mod compile;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

pub use compile::{
    build_cell_update, build_evolution, build_layer, build_uca, build_uca_compressed,
    prepare_superposition, CellUpdateStyle, CompressedEvolution, Evolution,
};

/// Largest register the exhaustive preimage scan will enumerate.
pub const MAX_ENUMERATION_CELLS: usize = 24;

pub const MAX_CELLS: usize = 64;

/// Radius-1 binary rule as an 8-entry table indexed by `4·left + 2·center + right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CaRule {
    table: [bool; 8],
}

impl CaRule {
    /// `x'[i] = x[i-1] ⊕ x[i+1]`.
    pub const RULE_90: CaRule = CaRule::from_wolfram(90);

    pub const fn from_wolfram(number: u8) -> Self {
        let mut table = [false; 8];
        let mut i = 0;
        while i < 8 {
            table[i] = (number >> i) & 1 == 1;
            i += 1;
        }
        CaRule { table }
    }

    pub fn from_table(table: [bool; 8]) -> Self {
        CaRule { table }
    }

    pub fn table(&self) -> [bool; 8] {
        self.table
    }

    pub fn wolfram_number(&self) -> u8 {
        self.table
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << i))
    }

    pub fn output(&self, left: bool, center: bool, right: bool) -> bool {
        self.table[neighborhood_index(left, center, right)]
    }

    /// Whether flipping the center cell can ever change the output.
    pub fn uses_center(&self) -> bool {
        (0..8).any(|i| i & 0b010 == 0 && self.table[i] != self.table[i | 0b010])
    }

    /// Neighborhoods `(left, center, right)` that map to 1.
    pub fn true_rows(&self) -> impl Iterator<Item = (bool, bool, bool)> + '_ {
        (0..8)
            .filter(|&i| self.table[i])
            .map(|i| (i & 4 != 0, i & 2 != 0, i & 1 != 0))
    }
}

pub fn neighborhood_index(left: bool, center: bool, right: bool) -> usize {
    (usize::from(left) << 2) | (usize::from(center) << 1) | usize::from(right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Cell 0's left neighbor is cell `n-1` and vice versa.
    Periodic,
    /// Cells outside the lattice read as 0.
    FixedZero,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "fixed_zero" | "fixed-zero" => Ok(Boundary::FixedZero),
            _ => Err(invalid(format!("unknown boundary '{s}'"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::FixedZero => "fixed_zero",
        })
    }
}

/// Cell indices of the left and right neighbors of cell `i`; `None` is a
/// fixed-zero boundary cell.
pub fn neighbors(i: usize, n: usize, boundary: Boundary) -> (Option<usize>, Option<usize>) {
    match boundary {
        Boundary::Periodic => (Some((i + n - 1) % n), Some((i + 1) % n)),
        Boundary::FixedZero => (i.checked_sub(1), (i + 1 < n).then_some(i + 1)),
    }
}

/// A row of `n` cells. Serialized as a bit string with cell 0 leftmost.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaState {
    n: usize,
    bits: u64,
}

fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl CaState {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > MAX_CELLS {
            return Err(invalid(format!("cell count {n} outside 1..={MAX_CELLS}")));
        }
        if bits & !width_mask(n) != 0 {
            return Err(invalid(format!("bits {bits:#b} do not fit in {n} cells")));
        }
        Ok(CaState { n, bits })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn cell(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn cells(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.cell(i)).collect()
    }
}

impl FromStr for CaState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < 64 => bits |= 1 << i,
                '1' => {}
                _ => return Err(invalid(format!("'{s}' is not a bit string"))),
            }
        }
        CaState::new(s.chars().count(), bits)
    }
}

impl fmt::Display for CaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.cell(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// What to evolve: `n` cells for `m` steps under `rule`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvolutionSpec {
    n: usize,
    m: usize,
    rule: CaRule,
    boundary: Boundary,
}

impl EvolutionSpec {
    pub fn new(n: usize, m: usize, rule: CaRule, boundary: Boundary) -> Result<Self> {
        if m == 0 {
            return Err(invalid("step count m must be at least 1"));
        }
        if n == 0 || n > MAX_CELLS {
            return Err(invalid(format!("cell count {n} outside 1..={MAX_CELLS}")));
        }
        // At n = 2 both neighbors are the same cell, and at n = 1 they are the
        // cell itself: the two-control update collapses.
        if boundary == Boundary::Periodic && n < 3 {
            return Err(invalid(format!("periodic boundary needs n ≥ 3, got {n}")));
        }
        Ok(EvolutionSpec { n, m, rule, boundary })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rule(&self) -> CaRule {
        self.rule
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Same lattice and step count with a different rule.
    pub fn with_rule(&self, rule: CaRule) -> Self {
        EvolutionSpec { rule, ..*self }
    }

    pub fn state(&self, bits: u64) -> Result<CaState> {
        CaState::new(self.n, bits)
    }

    /// `f^(m)(x)`.
    pub fn evolve(&self, x: CaState) -> CaState {
        ca_evolve(x, self.rule, self.boundary, self.m)
    }
}

/// One synchronous update of every cell.
pub fn ca_step(state: CaState, rule: CaRule, boundary: Boundary) -> CaState {
    CaState {
        n: state.n,
        bits: step_bits(state.bits, state.n, rule, boundary),
    }
}

pub fn ca_evolve(state: CaState, rule: CaRule, boundary: Boundary, m: usize) -> CaState {
    let bits = (0..m).fold(state.bits, |b, _| step_bits(b, state.n, rule, boundary));
    CaState { n: state.n, bits }
}

pub(crate) fn step_bits(x: u64, n: usize, rule: CaRule, boundary: Boundary) -> u64 {
    let mask = width_mask(n);
    // left[i] = x[i-1], right[i] = x[i+1]
    let (left, right) = match boundary {
        Boundary::Periodic if n < 64 => (
            ((x << 1) | (x >> (n - 1))) & mask,
            ((x >> 1) | (x << (n - 1))) & mask,
        ),
        Boundary::Periodic => (x.rotate_left(1), x.rotate_right(1)),
        Boundary::FixedZero => ((x << 1) & mask, x >> 1),
    };
    let pick = |word: u64, want: bool| if want { word } else { !word & mask };
    rule.true_rows().fold(0, |acc, (l, c, r)| {
        acc | (pick(left, l) & pick(x, c) & pick(right, r))
    })
}

/// The exact preimage set `X_q = { x : f^(m)(x) = q }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageReport {
    pub target: CaState,
    /// Sorted ascending by bit pattern.
    pub preimages: Vec<CaState>,
}

impl PreimageReport {
    pub fn l(&self) -> usize {
        self.preimages.len()
    }

    pub fn contains(&self, x: CaState) -> bool {
        self.preimages.binary_search(&x).is_ok()
    }
}

fn enumeration_guard(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_CELLS {
        return Err(Error::Resource(format!(
            "exhaustive scan of 2^{n} states exceeds the {MAX_ENUMERATION_CELLS}-cell guard"
        )));
    }
    Ok(())
}

/// Scans all `2^n` initial states.
pub fn preimages(spec: &EvolutionSpec, q: CaState) -> Result<PreimageReport> {
    enumeration_guard(spec.n)?;
    if q.len() != spec.n {
        return Err(invalid(format!(
            "target has {} cells, spec has {}",
            q.len(),
            spec.n
        )));
    }
    let preimages = (0..1u64 << spec.n)
        .into_par_iter()
        .filter(|&x| {
            (0..spec.m).fold(x, |b, _| step_bits(b, spec.n, spec.rule, spec.boundary)) == q.bits
        })
        .map(|bits| CaState { n: spec.n, bits })
        .collect();
    Ok(PreimageReport { target: q, preimages })
}

/// `f^(m)(x)` for every `x` in `0..2^n`, indexed by `x`.
pub fn evolution_table(spec: &EvolutionSpec) -> Result<Vec<u64>> {
    enumeration_guard(spec.n)?;
    Ok((0..1u64 << spec.n)
        .into_par_iter()
        .map(|x| (0..spec.m).fold(x, |b, _| step_bits(b, spec.n, spec.rule, spec.boundary)))
        .collect())
}
