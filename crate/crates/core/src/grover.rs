//! Amplitude amplification over CA initial states.
//!
//! A search register layout is `x | work | z`: the x-register holds candidate
//! initial states, the work register(s) receive `f^(m)(x)`, and `z` is the
//! phase ancilla kept in `(|0⟩ - |1⟩)/√2` so that an MCX into it negates the
//! amplitude of the branch that fires.
//!
//! Two oracle styles are supported:
//!
//! * [`OracleStyle::Recompute`] evaluates `U_CA`, marks, then undoes `U_CA`,
//!   so the work register is back at zero before every diffusion.
//! * [`OracleStyle::PaperLiteral`] evaluates `U_CA` once during preparation
//!   and afterwards only marks the output register. Diffusion then acts on an
//!   x-register that stays entangled with `f^(m)(x)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ca::{build_evolution, preimages, CaState, CellUpdateStyle, Evolution, EvolutionSpec, PreimageReport};
use crate::circuit::{Circuit, Control, Gate, LayoutMode, Polarity, RegisterLayout};
use crate::error::{invalid, Error, Result};
use crate::statevec::{StateVector, DEFAULT_MAX_QUBITS};

/// The pattern `q` an evolution must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TargetPattern(CaState);

impl TargetPattern {
    pub fn new(spec: &EvolutionSpec, q: CaState) -> Result<Self> {
        if q.len() != spec.n() {
            return Err(invalid(format!(
                "target has {} cells, register has {}",
                q.len(),
                spec.n()
            )));
        }
        Ok(TargetPattern(q))
    }

    pub fn state(&self) -> CaState {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleStyle {
    Recompute,
    PaperLiteral,
}

/// How the target pattern conditions the marking gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conditioning {
    /// One MCX whose control polarities spell out the pattern.
    Folded,
    /// X on every output qubit whose pattern bit is 0, an all-positive MCX,
    /// then the same X layer again.
    Sandwich,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub cell_style: CellUpdateStyle,
    pub conditioning: Conditioning,
    pub max_qubits: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            cell_style: CellUpdateStyle::GenericTable,
            conditioning: Conditioning::Folded,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

/// `X` then `H` on the phase ancilla: `|0⟩ → (|0⟩ - |1⟩)/√2`.
pub fn prepare_phase_ancilla(layout: &RegisterLayout) -> Result<Circuit> {
    let z = layout.require_phase_ancilla()?;
    Circuit::from_gates(layout.num_qubits(), vec![Gate::x(z), Gate::h(z)])
}

/// The pattern-conditioned `T_n` from the output register into the phase ancilla.
pub fn build_marking(layout: &RegisterLayout, q: &TargetPattern, conditioning: Conditioning) -> Result<Circuit> {
    let z = layout.require_phase_ancilla()?;
    let out = layout.output_register();
    if q.state().len() != out.len() {
        return Err(invalid("target length does not match the output register"));
    }
    let bits: Vec<(usize, bool)> = out.zip(q.state().cells()).collect();
    let gates = match conditioning {
        Conditioning::Folded => {
            let controls = bits
                .iter()
                .map(|&(qubit, e)| Control {
                    qubit,
                    polarity: Polarity::matching(e),
                })
                .collect();
            vec![Gate::mcx(controls, z)?]
        }
        Conditioning::Sandwich => {
            let flips: Vec<Gate> = bits.iter().filter(|(_, e)| !e).map(|&(q, _)| Gate::x(q)).collect();
            let all_ones = Gate::mcx(bits.iter().map(|&(q, _)| Control::positive(q)).collect(), z)?;
            flips
                .iter()
                .cloned()
                .chain(std::iter::once(all_ones))
                .chain(flips.iter().cloned())
                .collect()
        }
    };
    Circuit::from_gates(layout.num_qubits(), gates)
}

/// The phase oracle `U_T`.
#[derive(Clone, Debug)]
pub struct Oracle {
    style: OracleStyle,
    evolution: Evolution,
    marking: Circuit,
}

impl Oracle {
    pub fn style(&self) -> OracleStyle {
        self.style
    }

    pub fn evolution(&self) -> &Evolution {
        &self.evolution
    }

    pub fn marking(&self) -> &Circuit {
        &self.marking
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match self.style {
            OracleStyle::Recompute => {
                self.evolution.apply(state)?;
                state.apply_circuit(&self.marking)?;
                self.evolution.apply_inverse(state)
            }
            OracleStyle::PaperLiteral => state.apply_circuit(&self.marking),
        }
    }

    /// The oracle as a plain gate list. Fails for a recompute oracle over a
    /// compressed layout, whose evolution is a table rather than gates.
    pub fn to_circuit(&self) -> Result<Circuit> {
        match self.style {
            OracleStyle::PaperLiteral => Ok(self.marking.clone()),
            OracleStyle::Recompute => match &self.evolution {
                Evolution::Literal { forward, inverse } => Ok(forward.then(&self.marking).then(inverse)),
                Evolution::Compressed(_) => Err(Error::Unsupported(
                    "a compressed evolution has no gate-level form".into(),
                )),
            },
        }
    }
}

pub fn build_oracle(
    spec: &EvolutionSpec,
    q: &TargetPattern,
    layout: &RegisterLayout,
    style: OracleStyle,
    options: &CompileOptions,
) -> Result<Oracle> {
    let marking = build_marking(layout, q, options.conditioning)?;
    let evolution = build_evolution(spec, layout, options.cell_style, options.max_qubits)?;
    Ok(Oracle {
        style,
        evolution,
        marking,
    })
}

/// `U_G = 2|Ψ_c⟩⟨Ψ_c| - I` on the x-register.
///
/// The inner reflection is an all-negative-control MCX into the `|−⟩` phase
/// ancilla, which gives `I - 2|0⟩⟨0|`; the trailing X on the ancilla
/// contributes the `-1` that turns it into `2|0⟩⟨0| - I` exactly.
pub fn build_diffusion(layout: &RegisterLayout) -> Result<Circuit> {
    let z = layout.require_phase_ancilla()?;
    let wall: Vec<Gate> = layout.x_register().map(Gate::h).collect();
    let mut gates = wall.clone();
    gates.push(Gate::mcx(layout.x_register().map(Control::negative).collect(), z)?);
    gates.push(Gate::x(z));
    gates.extend(wall);
    Circuit::from_gates(layout.num_qubits(), gates)
}

fn check_counts(search_space: u64, marked: u64) -> Result<()> {
    if marked == 0 {
        return Err(Error::NoMarkedStates(format!(
            "no marked states among {search_space}"
        )));
    }
    if marked > search_space {
        return Err(invalid(format!("{marked} marked states exceed N = {search_space}")));
    }
    Ok(())
}

/// Rotation angle per half-iteration, `θ = arcsin √(l/N)`.
pub fn rotation_angle(search_space: u64, marked: u64) -> f64 {
    (marked as f64 / search_space as f64).sqrt().asin()
}

/// `round(π/(4θ) - 1/2)`.
pub fn optimal_iterations(search_space: u64, marked: u64) -> Result<u64> {
    check_counts(search_space, marked)?;
    let theta = rotation_angle(search_space, marked);
    Ok((FRAC_PI_4 / theta - 0.5).round().max(0.0) as u64)
}

/// The large-N approximation `(π/4)·√(N/l)`, unrounded.
pub fn approximate_iterations(search_space: u64, marked: u64) -> Result<f64> {
    check_counts(search_space, marked)?;
    Ok(FRAC_PI_4 * (search_space as f64 / marked as f64).sqrt())
}

/// `sin²((2k+1)θ)`.
pub fn closed_form_success(search_space: u64, marked: u64, iterations: u64) -> f64 {
    let theta = rotation_angle(search_space, marked);
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Probability of reading each x-register value, marginalized over everything else.
pub fn x_register_distribution(state: &StateVector, layout: &RegisterLayout) -> Vec<f64> {
    let mask = (1usize << layout.n()) - 1;
    let mut dist = vec![0.0; 1 << layout.n()];
    for (i, a) in state.amplitudes().iter().enumerate() {
        dist[i & mask] += a.norm_sqr();
    }
    dist
}

/// Total probability that the x-register reads a member of `X_q`.
pub fn success_probability(state: &StateVector, layout: &RegisterLayout, report: &PreimageReport) -> f64 {
    let dist = x_register_distribution(state, layout);
    report
        .preimages
        .iter()
        .fold(0.0, |acc, x| acc + dist[x.bits() as usize])
        .min(1.0)
}

/// Amplitudes of `|x⟩|0…0⟩|−⟩` for every `x`. Valid when all work registers
/// are back at zero (recompute style).
pub fn search_register_amplitudes(state: &StateVector, layout: &RegisterLayout) -> Result<Vec<Complex64>> {
    let z = layout.require_phase_ancilla()?;
    Ok((0..1usize << layout.n())
        .map(|x| (state.amplitude(x) - state.amplitude(x | (1 << z))) * FRAC_1_SQRT_2)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Run a fixed number of iterations, given or derived from `l`.
    FixedK,
    /// Unknown `l`: stages `L = 1, 2, 4, …` each draw `k` uniformly from
    /// `[0, ⌈(π/4)√(N/L)⌉]`.
    Doubling,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverPlan {
    pub schedule: Schedule,
    /// Explicit iteration count for [`Schedule::FixedK`].
    pub k: Option<u64>,
    /// Known preimage count; must be absent for [`Schedule::Doubling`].
    pub l_hint: Option<u64>,
    pub oracle_style: OracleStyle,
    pub mode: LayoutMode,
    pub options: CompileOptions,
    /// Upper bound on full `L = 1 … N` sweeps of the doubling schedule.
    pub max_sweeps: usize,
}

impl Default for GroverPlan {
    fn default() -> Self {
        GroverPlan {
            schedule: Schedule::FixedK,
            k: None,
            l_hint: None,
            oracle_style: OracleStyle::Recompute,
            mode: LayoutMode::Compressed,
            options: CompileOptions::default(),
            max_sweeps: 8,
        }
    }
}

impl GroverPlan {
    pub fn doubling() -> Self {
        GroverPlan {
            schedule: Schedule::Doubling,
            ..Default::default()
        }
    }

    pub fn fixed(k: u64) -> Self {
        GroverPlan {
            k: Some(k),
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schedule == Schedule::Doubling && self.l_hint.is_some() {
            return Err(invalid("a doubling schedule cannot take an l hint"));
        }
        if self.schedule == Schedule::Doubling && self.max_sweeps == 0 {
            return Err(invalid("a doubling schedule needs at least one sweep"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub measured_x: CaState,
    /// `f^(m)(measured_x) == q`, checked classically.
    pub verified: bool,
    pub oracle_calls: u64,
    pub iterations_used: u64,
    /// Exact probability of a verified readout in the final measured state.
    pub success_probability: f64,
    pub seed: u64,
    /// Iteration count of each stage; a single entry for a fixed schedule.
    pub stage_iterations: Vec<u64>,
    pub l_classical: usize,
}

/// One prepared search register plus the operators that act on it.
pub struct Searcher {
    spec: EvolutionSpec,
    layout: RegisterLayout,
    oracle: Oracle,
    diffusion: Circuit,
    preparation: Circuit,
    state: StateVector,
    iterations: u64,
}

impl Searcher {
    pub fn new(
        spec: &EvolutionSpec,
        q: &TargetPattern,
        mode: LayoutMode,
        style: OracleStyle,
        options: &CompileOptions,
    ) -> Result<Self> {
        let layout = RegisterLayout::new(spec.n(), spec.m(), mode, true)?;
        layout.check_budget(options.max_qubits)?;
        let oracle = build_oracle(spec, q, &layout, style, options)?;
        let diffusion = build_diffusion(&layout)?;
        let preparation = prepare_phase_ancilla(&layout)?.then(&crate::ca::prepare_superposition(&layout));
        let state = StateVector::new_basis_state_with_limit(layout.num_qubits(), 0, options.max_qubits)?;
        let mut searcher = Searcher {
            spec: *spec,
            layout,
            oracle,
            diffusion,
            preparation,
            state,
            iterations: 0,
        };
        searcher.prepare()?;
        Ok(searcher)
    }

    fn prepare(&mut self) -> Result<()> {
        self.state.apply_circuit(&self.preparation)?;
        if self.oracle.style == OracleStyle::PaperLiteral {
            self.oracle.evolution.apply(&mut self.state)?;
        }
        Ok(())
    }

    /// Back to the freshly prepared superposition.
    pub fn reset(&mut self) -> Result<()> {
        self.state = StateVector::new_basis_state_with_limit(self.layout.num_qubits(), 0, self.layout.num_qubits())?;
        self.iterations = 0;
        self.prepare()
    }

    pub fn apply_oracle(&mut self) -> Result<()> {
        self.oracle.apply(&mut self.state)
    }

    pub fn apply_diffusion(&mut self) -> Result<()> {
        self.state.apply_circuit(&self.diffusion)
    }

    /// One `U_G U_T`.
    pub fn iterate(&mut self) -> Result<()> {
        self.apply_oracle()?;
        self.apply_diffusion()?;
        self.iterations += 1;
        Ok(())
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn diffusion(&self) -> &Circuit {
        &self.diffusion
    }

    pub fn success_probability(&self, report: &PreimageReport) -> f64 {
        success_probability(&self.state, &self.layout, report)
    }

    /// Samples the full register and keeps the x-register reading.
    pub fn measure_x<R: Rng>(&self, rng: &mut R) -> CaState {
        let index = self.state.sample_with(rng);
        let x = index & ((1usize << self.layout.n()) - 1);
        CaState::new(self.spec.n(), x as u64).expect("x-register fits the spec width")
    }
}

/// Prepares, amplifies, measures and classically verifies.
pub fn grover_search(spec: &EvolutionSpec, q: &TargetPattern, plan: &GroverPlan, rng_seed: u64) -> Result<SearchResult> {
    plan.validate()?;
    let report = preimages(spec, q.state())?;
    let mut searcher = Searcher::new(spec, q, plan.mode, plan.oracle_style, &plan.options)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let search_space = 1u64 << spec.n();

    let run_stage = |searcher: &mut Searcher, k: u64, rng: &mut ChaCha8Rng| -> Result<(CaState, bool, f64)> {
        searcher.reset()?;
        for _ in 0..k {
            searcher.iterate()?;
        }
        let x = searcher.measure_x(rng);
        Ok((x, spec.evolve(x) == q.state(), searcher.success_probability(&report)))
    };

    match plan.schedule {
        Schedule::FixedK => {
            let k = match plan.k {
                Some(k) => k,
                None => {
                    // With nothing to find, fall back to the single-solution count.
                    let l = plan.l_hint.unwrap_or(report.l() as u64).max(1);
                    optimal_iterations(search_space, l)?
                }
            };
            let (x, verified, p) = run_stage(&mut searcher, k, &mut rng)?;
            Ok(SearchResult {
                measured_x: x,
                verified,
                oracle_calls: k,
                iterations_used: k,
                success_probability: p,
                seed: rng_seed,
                stage_iterations: vec![k],
                l_classical: report.l(),
            })
        }
        Schedule::Doubling => {
            let mut stages = Vec::new();
            let mut last = None;
            'sweeps: for _ in 0..plan.max_sweeps {
                let mut guess = 1u64;
                while guess <= search_space {
                    let bound = (FRAC_PI_4 * (search_space as f64 / guess as f64).sqrt()).ceil() as u64;
                    let k = rng.gen_range(0..=bound);
                    stages.push(k);
                    let outcome = run_stage(&mut searcher, k, &mut rng)?;
                    let hit = outcome.1;
                    last = Some(outcome);
                    if hit {
                        break 'sweeps;
                    }
                    guess *= 2;
                }
            }
            let (x, verified, p) = last.expect("at least one stage runs");
            let total: u64 = stages.iter().sum();
            Ok(SearchResult {
                measured_x: x,
                verified,
                oracle_calls: total,
                iterations_used: total,
                success_probability: p,
                seed: rng_seed,
                stage_iterations: stages,
                l_classical: report.l(),
            })
        }
    }
}

/// Success probability after each of `0..=iterations` under both oracle styles.
#[derive(Clone, Debug, PartialEq)]
pub struct StylePoint {
    pub iteration: u64,
    pub recompute: f64,
    pub paper_literal: f64,
    /// `sin²((2j+1)θ)`, or `None` when nothing is marked.
    pub closed_form: Option<f64>,
}

pub fn compare_oracle_styles(
    spec: &EvolutionSpec,
    q: &TargetPattern,
    mode: LayoutMode,
    iterations: u64,
    options: &CompileOptions,
) -> Result<Vec<StylePoint>> {
    let report = preimages(spec, q.state())?;
    let mut recompute = Searcher::new(spec, q, mode, OracleStyle::Recompute, options)?;
    let mut literal = Searcher::new(spec, q, mode, OracleStyle::PaperLiteral, options)?;
    let search_space = 1u64 << spec.n();
    let mut points = Vec::with_capacity(iterations as usize + 1);
    for j in 0..=iterations {
        if j > 0 {
            recompute.iterate()?;
            literal.iterate()?;
        }
        points.push(StylePoint {
            iteration: j,
            recompute: recompute.success_probability(&report),
            paper_literal: literal.success_probability(&report),
            closed_form: (report.l() > 0).then(|| closed_form_success(search_space, report.l() as u64, j)),
        });
    }
    Ok(points)
}
