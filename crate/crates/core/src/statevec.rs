//! Dense statevector simulator.
//!
//! Amplitudes are stored as `Complex64`, indexed so that qubit `b` is bit `b`
//! of the basis index. X and MCX are applied as pure amplitude swaps and never
//! touch the floating-point values, so permutation circuits stay bit-exact.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{invalid, Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 26;

/// Below this many qubits gate kernels stay on the calling thread.
const PARALLEL_THRESHOLD: usize = 14;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

#[inline]
fn insert_zero_bit(x: usize, bit: usize) -> usize {
    let low = x & ((1 << bit) - 1);
    ((x >> bit) << (bit + 1)) | low
}

impl StateVector {
    /// `|index⟩` on `num_qubits` qubits, under the default qubit budget.
    pub fn new_basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        Self::new_basis_state_with_limit(num_qubits, index, DEFAULT_MAX_QUBITS)
    }

    pub fn new_basis_state_with_limit(num_qubits: usize, index: usize, max_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(invalid("a state needs at least one qubit"));
        }
        if num_qubits > max_qubits {
            return Err(Error::Resource(format!(
                "{num_qubits} qubits exceeds the budget of {max_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(invalid(format!("basis index {index} out of range for {num_qubits} qubits")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps explicit amplitudes. The length must be a power of two (at least 2)
    /// and the norm must be 1 within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(invalid(format!("amplitude count {len} is not a power of two ≥ 2")));
        }
        let state = StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(invalid(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Like [`StateVector::from_amplitudes`] but rescales to unit norm first.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(invalid("cannot normalize the zero vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(invalid("states have different qubit counts"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    /// Calls `f(a, b)` on every amplitude pair differing only in bit `target`,
    /// with `a` the bit-0 half. `f` sees the lower index of the pair.
    fn for_each_pair<F>(&mut self, target: usize, f: F)
    where
        F: Fn(usize, &mut Complex64, &mut Complex64) + Sync,
    {
        let half = 1usize << target;
        let block = half << 1;
        let body = |(chunk, amps): (usize, &mut [Complex64])| {
            let (lo, hi) = amps.split_at_mut(half);
            let base = chunk * block;
            for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                f(base + j, a, b);
            }
        };
        if self.num_qubits < PARALLEL_THRESHOLD {
            self.amplitudes.chunks_mut(block).enumerate().for_each(body);
        } else {
            self.amplitudes
                .par_chunks_mut(block)
                .enumerate()
                .with_min_len((1 << 12) / block.min(1 << 12))
                .for_each(body);
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.check_qubit(gate.max_qubit())?;
        let target = gate.target();
        match gate.kind() {
            GateKind::Hadamard => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_each_pair(target, |_, a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * s;
                    *b = (x - y) * s;
                });
            }
            GateKind::PauliX => self.for_each_pair(target, |_, a, b| std::mem::swap(a, b)),
            GateKind::Mcx => {
                let (mask, value) = gate.control_mask();
                self.for_each_pair(target, |i, a, b| {
                    if i & mask == value {
                        std::mem::swap(a, b);
                    }
                });
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() > self.num_qubits {
            return Err(invalid(format!(
                "circuit spans {} qubits, state has {}",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        for (position, g) in circuit.gates().iter().enumerate() {
            self.apply_gate(g).map_err(|e| Error::AtGate {
                position,
                source: Box::new(e),
            })?;
        }
        Ok(())
    }

    /// Applies the permutation `|x⟩|y⟩ → |x⟩|y ⊕ table[x]⟩`, where `x` is read
    /// from `inputs` (first entry = least significant bit) and `y` lives on
    /// `outputs`. The map is an involution, so it is its own inverse.
    pub fn apply_xor_function(&mut self, inputs: &[usize], outputs: &[usize], table: &[u64]) -> Result<()> {
        for &q in inputs.iter().chain(outputs) {
            self.check_qubit(q)?;
        }
        let mut seen = 0usize;
        for &q in inputs.iter().chain(outputs) {
            if seen & (1 << q) != 0 {
                return Err(invalid(format!("qubit {q} appears twice in xor function registers")));
            }
            seen |= 1 << q;
        }
        if table.len() != 1usize << inputs.len() {
            return Err(invalid(format!(
                "table has {} entries, expected 2^{}",
                table.len(),
                inputs.len()
            )));
        }
        if table.iter().any(|&y| outputs.len() < 64 && y >> outputs.len() != 0) {
            return Err(invalid("table value wider than the output register"));
        }

        // Precompute the flip mask for every table entry.
        let flips: Vec<usize> = table
            .iter()
            .map(|&y| {
                outputs
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| (y >> bit) & 1 == 1)
                    .fold(0usize, |acc, (_, &q)| acc | (1 << q))
            })
            .collect();
        let contiguous = inputs.windows(2).all(|w| w[1] == w[0] + 1);
        let (shift, in_mask) = (inputs.first().copied().unwrap_or(0), (1usize << inputs.len()) - 1);
        let gather = |idx: usize| -> usize {
            if contiguous {
                (idx >> shift) & in_mask
            } else {
                inputs
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (bit, &q)| acc | (((idx >> q) & 1) << bit))
            }
        };
        for idx in 0..self.amplitudes.len() {
            let partner = idx ^ flips[gather(idx)];
            if partner > idx {
                self.amplitudes.swap(idx, partner);
            }
        }
        Ok(())
    }

    /// Probability that the listed qubits read `pattern`.
    pub fn marginal_probability(&self, qubits: &[usize], pattern: &[bool]) -> Result<f64> {
        if qubits.len() != pattern.len() {
            return Err(invalid(format!(
                "{} qubits but {} pattern bits",
                qubits.len(),
                pattern.len()
            )));
        }
        let mut mask = 0usize;
        let mut value = 0usize;
        for (&q, &bit) in qubits.iter().zip(pattern) {
            self.check_qubit(q)?;
            if mask & (1 << q) != 0 {
                return Err(invalid(format!("qubit {q} listed twice")));
            }
            mask |= 1 << q;
            if bit {
                value |= 1 << q;
            }
        }
        let p: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == value)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(p.clamp(0.0, 1.0))
    }

    /// Samples one basis index with probability `|amplitude|²`. The state is
    /// left untouched; collapsing is up to the caller.
    pub fn measure_all(&self, rng_seed: u64) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        self.sample_with(&mut rng)
    }

    /// `shots` independent samples from one seeded stream.
    pub fn sample(&self, rng_seed: u64, shots: usize) -> Vec<usize> {
        let cumulative: Vec<f64> = self
            .amplitudes
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a.norm_sqr();
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap_or(&1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        (0..shots)
            .map(|_| {
                let r = rng.gen::<f64>() * total;
                let i = cumulative.partition_point(|&c| c <= r);
                self.clamp_to_support(i)
            })
            .collect()
    }

    pub(crate) fn sample_with<R: Rng>(&self, rng: &mut R) -> usize {
        let r = rng.gen::<f64>() * self.norm().powi(2);
        let mut acc = 0.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            acc += a.norm_sqr();
            if r < acc {
                return i;
            }
        }
        self.clamp_to_support(self.amplitudes.len())
    }

    // Rounding can push r past the final partial sum; fall back to the last
    // index that carries any weight.
    fn clamp_to_support(&self, i: usize) -> usize {
        if i < self.amplitudes.len() {
            return i;
        }
        self.amplitudes
            .iter()
            .rposition(|a| a.norm_sqr() > 0.0)
            .unwrap_or(0)
    }

    /// Reduced density matrix of a single qubit, `[[ρ00, ρ01], [ρ10, ρ11]]`.
    pub fn reduced_qubit_density(&self, qubit: usize) -> Result<[[Complex64; 2]; 2]> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let (mut p0, mut p1, mut c) = (0.0, 0.0, Complex64::new(0.0, 0.0));
        for i in 0..self.dim() / 2 {
            let i0 = insert_zero_bit(i, qubit);
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i0 | bit]);
            p0 += a0.norm_sqr();
            p1 += a1.norm_sqr();
            c += a0 * a1.conj();
        }
        let re = |x: f64| Complex64::new(x, 0.0);
        Ok([[re(p0), c], [c.conj(), re(p1)]])
    }

    /// `Tr ρ²` of a single qubit; 1 iff the qubit is unentangled with the rest.
    pub fn qubit_purity(&self, qubit: usize) -> Result<f64> {
        let rho = self.reduced_qubit_density(qubit)?;
        Ok(rho[0][0].norm_sqr() + rho[1][1].norm_sqr() + 2.0 * rho[0][1].norm_sqr())
    }
}
