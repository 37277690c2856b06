//! Command-line frontend for `qca-core`.
//!
//! Exit codes: 0 found / all checks pass, 1 not found / a check failed,
//! 2 usage error, 3 resource limit.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use qca_core::ca::{build_cell_update, build_uca, ca_evolve, preimages, prepare_superposition, CellUpdateStyle};
use qca_core::circuit::qct::export_qct;
use qca_core::grover::{
    build_diffusion, build_oracle, compare_oracle_styles, grover_search, CompileOptions, Conditioning,
    GroverPlan, OracleStyle, Schedule, SearchResult, TargetPattern,
};
use qca_core::{
    Boundary, CaRule, CaState, EvolutionSpec, LayoutMode, RegisterLayout, StateVector, DEFAULT_MAX_QUBITS,
};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the qubit budget.
pub const MAX_QUBITS_ENV: &str = "QCA_MAX_QUBITS";

#[derive(Debug, Parser)]
#[command(name = "qca", version, about = "Quantum evolution and preimage search for 1D cellular automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the classical trajectory of an initial state.
    Evolve(EvolveArgs),
    /// Grover search for an initial state that evolves into --target.
    Search(SearchArgs),
    /// Cross-check the compiled circuits against the classical engine.
    Verify(VerifyArgs),
    /// Emit U_CA or one Grover iteration as QCT text.
    Circuit(CircuitArgs),
    /// Success probability per iteration for both oracle styles.
    Compare(CompareArgs),
}

fn parse_state(s: &str) -> Result<CaState, String> {
    s.parse::<CaState>()
        .map_err(|_| format!("'{s}' is not a bit string of 0s and 1s"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    #[value(name = "fixed_zero", alias = "fixed-zero")]
    FixedZero,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::FixedZero => Boundary::FixedZero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Compressed,
    Literal,
}

impl From<ModeArg> for LayoutMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Compressed => LayoutMode::Compressed,
            ModeArg::Literal => LayoutMode::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleStyleArg {
    Recompute,
    #[value(name = "paper_literal", alias = "paper-literal")]
    PaperLiteral,
}

impl From<OracleStyleArg> for OracleStyle {
    fn from(s: OracleStyleArg) -> Self {
        match s {
            OracleStyleArg::Recompute => OracleStyle::Recompute,
            OracleStyleArg::PaperLiteral => OracleStyle::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    #[value(name = "fixed_k", alias = "fixed")]
    FixedK,
    Doubling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CellStyleArg {
    #[value(alias = "generic_table")]
    Generic,
    #[value(alias = "paper_decomposition")]
    Paper,
}

impl From<CellStyleArg> for CellUpdateStyle {
    fn from(s: CellStyleArg) -> Self {
        match s {
            CellStyleArg::Generic => CellUpdateStyle::GenericTable,
            CellStyleArg::Paper => CellUpdateStyle::PaperDecomposition,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    /// The evolution operator U_CA.
    Uca,
    /// One oracle-then-diffusion iteration U_G·U_T.
    Iteration,
}

#[derive(Debug, Clone, Args)]
pub struct CaArgs {
    /// Cells per register.
    #[arg(long)]
    pub n: usize,
    /// Evolution steps.
    #[arg(long)]
    pub m: usize,
    /// Wolfram rule number.
    #[arg(long, default_value_t = 90)]
    pub rule: u8,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Periodic)]
    pub boundary: BoundaryArg,
}

impl CaArgs {
    fn spec(&self) -> Result<EvolutionSpec, CliError> {
        EvolutionSpec::new(self.n, self.m, CaRule::from_wolfram(self.rule), self.boundary.into()).map_err(CliError::from)
    }

    fn check_width(&self, flag: &str, s: &CaState) -> Result<(), CliError> {
        if s.len() != self.n {
            return Err(CliError::Usage(format!(
                "{flag} has {} cells but --n is {}",
                s.len(),
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub ca: CaArgs,
    /// Initial state, cell 0 leftmost.
    #[arg(long, value_parser = parse_state)]
    pub init: CaState,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub ca: CaArgs,
    /// Pattern the evolution must reach, cell 0 leftmost.
    #[arg(long, value_parser = parse_state)]
    pub target: CaState,
    #[arg(long, value_enum, default_value_t = ModeArg::Compressed)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = OracleStyleArg::Recompute)]
    pub oracle_style: OracleStyleArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::FixedK)]
    pub schedule: ScheduleArg,
    /// Iteration count for the fixed schedule; derived from the preimage count if omitted.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent runs with seeds seed, seed+1, …
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub repeats: u64,
    #[arg(long, visible_alias = "style", value_enum, default_value_t = CellStyleArg::Generic)]
    pub cell_style: CellStyleArg,
    /// Emit the target conditioner as explicit X gates around an all-positive MCX.
    #[arg(long)]
    pub literal_st: bool,
    #[arg(long, default_value_t = 8)]
    pub max_sweeps: usize,
    /// Record wall-clock time (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub ca: CaArgs,
    #[arg(long, value_parser = parse_state)]
    pub target: Option<CaState>,
}

#[derive(Debug, Clone, Args)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub ca: CaArgs,
    #[arg(long, value_enum, default_value_t = CircuitKind::Uca)]
    pub which: CircuitKind,
    #[arg(long, visible_alias = "style", value_enum, default_value_t = CellStyleArg::Generic)]
    pub cell_style: CellStyleArg,
    /// Required for --which iteration.
    #[arg(long, value_parser = parse_state)]
    pub target: Option<CaState>,
    #[arg(long, value_enum, default_value_t = OracleStyleArg::Recompute)]
    pub oracle_style: OracleStyleArg,
    #[arg(long)]
    pub literal_st: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub ca: CaArgs,
    #[arg(long, value_parser = parse_state)]
    pub target: CaState,
    #[arg(long)]
    pub iterations: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Compressed)]
    pub mode: ModeArg,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Resource(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<qca_core::Error> for CliError {
    fn from(e: qca_core::Error) -> Self {
        match e {
            qca_core::Error::Resource(m) => CliError::Resource(m),
            qca_core::Error::AtGate { ref source, .. } if matches!(**source, qca_core::Error::Resource(_)) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Reads the qubit budget from [`MAX_QUBITS_ENV`], falling back to the default.
pub fn max_qubits_from_env() -> Result<usize, CliError> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_QUBITS_ENV}='{v}' is not a qubit count"))),
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
    }
}

/// Runs a parsed command, writing the report to `out` unless an `--output` path is given.
pub fn run(cli: &Cli, max_qubits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Evolve(a) => cmd_evolve(a, out),
        Command::Search(a) => cmd_search(a, max_qubits, out),
        Command::Verify(a) => cmd_verify(a, max_qubits, out),
        Command::Circuit(a) => cmd_circuit(a, max_qubits, out),
        Command::Compare(a) => cmd_compare(a, max_qubits, out),
    }
}

pub fn cmd_evolve(args: &EvolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    args.ca.check_width("--init", &args.init)?;
    let spec = args.ca.spec()?;
    let mut state = args.init;
    writeln!(out, "{state}")?;
    for _ in 0..spec.m() {
        state = ca_evolve(state, spec.rule(), spec.boundary(), 1);
        writeln!(out, "{state}")?;
    }
    Ok(EXIT_FOUND)
}

/// Either a single iteration count or the per-stage list of a doubling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum IterationField {
    Fixed(u64),
    Stages(Vec<u64>),
}

/// One search run, in the stable output schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub n: usize,
    pub m: usize,
    pub rule: u8,
    pub boundary: String,
    pub target: String,
    pub mode: &'static str,
    pub oracle_style: &'static str,
    pub schedule: &'static str,
    pub k: IterationField,
    pub iterations_used: u64,
    pub oracle_calls: u64,
    pub measured_x: String,
    pub verified: bool,
    pub success_probability: f64,
    pub l_classical: usize,
    pub seed: u64,
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    n: usize,
    m: usize,
    rule: u8,
    boundary: &'a str,
    target: &'a str,
    mode: &'a str,
    oracle_style: &'a str,
    schedule: &'a str,
    k: String,
    iterations_used: u64,
    oracle_calls: u64,
    measured_x: &'a str,
    verified: bool,
    success_probability: f64,
    l_classical: usize,
    seed: u64,
    wall_time_ms: Option<u64>,
}

impl SearchRecord {
    fn csv_row(&self) -> CsvRow<'_> {
        let k = match &self.k {
            IterationField::Fixed(k) => k.to_string(),
            IterationField::Stages(ks) => ks.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
        };
        CsvRow {
            n: self.n,
            m: self.m,
            rule: self.rule,
            boundary: &self.boundary,
            target: &self.target,
            mode: self.mode,
            oracle_style: self.oracle_style,
            schedule: self.schedule,
            k,
            iterations_used: self.iterations_used,
            oracle_calls: self.oracle_calls,
            measured_x: &self.measured_x,
            verified: self.verified,
            success_probability: self.success_probability,
            l_classical: self.l_classical,
            seed: self.seed,
            wall_time_ms: self.wall_time_ms,
        }
    }
}

fn search_plan(args: &SearchArgs, max_qubits: usize) -> GroverPlan {
    GroverPlan {
        schedule: match args.schedule {
            ScheduleArg::FixedK => Schedule::FixedK,
            ScheduleArg::Doubling => Schedule::Doubling,
        },
        k: args.k,
        l_hint: None,
        oracle_style: args.oracle_style.into(),
        mode: args.mode.into(),
        options: CompileOptions {
            cell_style: args.cell_style.into(),
            conditioning: if args.literal_st { Conditioning::Sandwich } else { Conditioning::Folded },
            max_qubits,
        },
        max_sweeps: args.max_sweeps,
    }
}

fn record(args: &SearchArgs, spec: &EvolutionSpec, r: SearchResult, wall_time_ms: Option<u64>) -> SearchRecord {
    SearchRecord {
        n: spec.n(),
        m: spec.m(),
        rule: spec.rule().wolfram_number(),
        boundary: spec.boundary().to_string(),
        target: args.target.to_string(),
        mode: match args.mode {
            ModeArg::Compressed => "compressed",
            ModeArg::Literal => "literal",
        },
        oracle_style: match args.oracle_style {
            OracleStyleArg::Recompute => "recompute",
            OracleStyleArg::PaperLiteral => "paper_literal",
        },
        schedule: match args.schedule {
            ScheduleArg::FixedK => "fixed_k",
            ScheduleArg::Doubling => "doubling",
        },
        k: match args.schedule {
            ScheduleArg::FixedK => IterationField::Fixed(r.stage_iterations[0]),
            ScheduleArg::Doubling => IterationField::Stages(r.stage_iterations.clone()),
        },
        iterations_used: r.iterations_used,
        oracle_calls: r.oracle_calls,
        measured_x: r.measured_x.to_string(),
        verified: r.verified,
        success_probability: r.success_probability,
        l_classical: r.l_classical,
        seed: r.seed,
        wall_time_ms,
    }
}

/// Runs the configured search `repeats` times and returns one record per run.
pub fn search_records(args: &SearchArgs, max_qubits: usize) -> Result<Vec<SearchRecord>, CliError> {
    args.ca.check_width("--target", &args.target)?;
    if args.schedule == ScheduleArg::Doubling && args.k.is_some() {
        return Err(CliError::Usage("--k only applies to --schedule fixed_k".into()));
    }
    let spec = args.ca.spec()?;
    let q = TargetPattern::new(&spec, args.target)?;
    let plan = search_plan(args, max_qubits);
    // Fail on budget before fanning out.
    RegisterLayout::new(spec.n(), spec.m(), plan.mode, true)?.check_budget(max_qubits)?;

    (0..args.repeats)
        .into_par_iter()
        .map(|i| {
            let seed = args.seed.wrapping_add(i);
            let start = Instant::now();
            let result = grover_search(&spec, &q, &plan, seed)?;
            let elapsed = args.timing.then(|| start.elapsed().as_millis() as u64);
            Ok(record(args, &spec, result, elapsed))
        })
        .collect()
}

pub fn render_records(records: &[SearchRecord], format: FormatArg) -> Result<String, CliError> {
    match format {
        FormatArg::Json => {
            let mut s = String::new();
            for r in records {
                s.push_str(&serde_json::to_string(r).map_err(|e| CliError::Usage(e.to_string()))?);
                s.push('\n');
            }
            Ok(s)
        }
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r.csv_row()).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_search(args: &SearchArgs, max_qubits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = search_records(args, max_qubits)?;
    emit(&render_records(&records, args.format)?, args.output.as_ref(), out)?;
    if records.len() > 1 {
        let hits = records.iter().filter(|r| r.verified).count();
        let mean_calls = records.iter().map(|r| r.oracle_calls as f64).sum::<f64>() / records.len() as f64;
        eprintln!(
            "{hits}/{} runs verified, mean oracle calls {mean_calls:.2}",
            records.len()
        );
    }
    Ok(if records.iter().any(|r| r.verified) { EXIT_FOUND } else { EXIT_NOT_FOUND })
}

/// Outcome of the quantum-versus-classical cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub lines: Vec<String>,
    pub passed: bool,
}

/// Compiles the circuits from `circuit_rule` and checks them against the
/// classical engine running `spec`'s rule. The CLI always passes the same
/// rule; tests pass a different one to exercise the failure path.
pub fn verify_report(
    spec: &EvolutionSpec,
    target: Option<CaState>,
    circuit_rule: CaRule,
    max_qubits: usize,
) -> Result<VerifyReport, CliError> {
    let n = spec.n();
    if n > qca_core::ca::MAX_ENUMERATION_CELLS {
        return Err(CliError::Resource(format!("n = {n} is beyond the enumeration guard")));
    }
    let layout = RegisterLayout::literal(n, spec.m(), false)?;
    layout.check_budget(max_qubits)?;
    let circuit_spec = spec.with_rule(circuit_rule);
    let mut lines = Vec::new();
    let mut passed = true;

    let mut styles = vec![CellUpdateStyle::GenericTable];
    if circuit_rule == CaRule::RULE_90 {
        styles.insert(0, CellUpdateStyle::PaperDecomposition);
    }

    // Single-cell truth table on a 3-cell periodic probe: cells 0, 1, 2 are
    // the left, center and right inputs, the layer-1 copy of cell 1 the output.
    let probe = EvolutionSpec::new(3, 1, circuit_rule, Boundary::Periodic)?;
    let probe_layout = RegisterLayout::literal(3, 1, false)?;
    for &style in &styles {
        let update = build_cell_update(&probe, &probe_layout, 1, 0, 1, style)?;
        let mut good = 0;
        for x in 0..8u128 {
            let out = update.trace_basis(x).expect("cell updates are permutations");
            let (l, c, r) = (x & 1 != 0, x & 2 != 0, x & 4 != 0);
            let want = if spec.rule().output(l, c, r) { x | 1 << 4 } else { x };
            if out == want {
                good += 1;
            } else {
                passed = false;
                lines.push(format!(
                    "truth table mismatch ({}): neighborhood {}{}{}",
                    style_name(style),
                    u8::from(l),
                    u8::from(c),
                    u8::from(r)
                ));
            }
        }
        lines.push(format!("truth table ({}): {good}/8 neighborhoods match", style_name(style)));
    }

    let total = 1usize << n;
    let mask = (total - 1) as u128;
    let out_shift = layout.output_register().start;
    let dense = layout.num_qubits() <= 16;
    let mut uca_for_superposition = None;
    for &style in &styles {
        let uca = build_uca(&circuit_spec, &layout, style, max_qubits)?;
        let mut matched = 0usize;
        let mut clean = 0usize;
        for x in 0..total as u64 {
            let xs = spec.state(x)?;
            let want = spec.evolve(xs);
            let idx = if dense {
                let mut s = StateVector::new_basis_state_with_limit(layout.num_qubits(), x as usize, max_qubits)?;
                s.apply_circuit(&uca)?;
                s.amplitudes().iter().position(|a| a.norm_sqr() == 1.0).map(|i| i as u128)
            } else {
                uca.trace_basis(u128::from(x))
            };
            let Some(idx) = idx else {
                passed = false;
                lines.push(format!("not a basis state: x={xs}"));
                continue;
            };
            let got = ((idx >> out_shift) & mask) as u64;
            if got == want.bits() {
                matched += 1;
            } else {
                passed = false;
                lines.push(format!(
                    "mismatch ({}): x={xs} quantum={} classical={want}",
                    style_name(style),
                    CaState::new(n, got)?
                ));
            }
            // Input untouched, everything between input and output back at zero.
            if idx & mask == u128::from(x) && idx >> n & ((1u128 << (out_shift - n)) - 1) == 0 {
                clean += 1;
            } else {
                passed = false;
                lines.push(format!("dirty ancilla ({}): x={xs}", style_name(style)));
            }
        }
        lines.push(format!("evolution ({}): {matched}/{total} basis states match", style_name(style)));
        lines.push(format!(
            "uncompute ({}): {clean}/{total} basis states leave intermediate layers at zero",
            style_name(style)
        ));
        uca_for_superposition = Some(uca);
    }

    // One dense run over the uniform superposition.
    let uca = uca_for_superposition.expect("at least one style");
    let mut s = StateVector::new_basis_state_with_limit(layout.num_qubits(), 0, max_qubits)?;
    s.apply_circuit(&prepare_superposition(&layout))?;
    s.apply_circuit(&uca)?;
    let amp = 1.0 / (total as f64).sqrt();
    let mut deviation = 0.0f64;
    let mut on_pairs = 0.0;
    for x in 0..total {
        let fx = spec.evolve(spec.state(x as u64)?).bits() as usize;
        let a = s.amplitude(x | (fx << out_shift));
        deviation = deviation.max((a - amp).norm());
        on_pairs += a.norm_sqr();
    }
    // Weight left off the (x, f(x)) pairs also counts as deviation.
    deviation = deviation.max((1.0 - on_pairs).max(0.0).sqrt());
    passed &= deviation < 1e-12;
    lines.push(format!("superposition: max amplitude deviation {deviation:.3e}"));

    if let Some(q) = target {
        let report = preimages(spec, q)?;
        let members: Vec<String> = report.preimages.iter().map(ToString::to_string).collect();
        lines.push(format!("preimages of {q}: l={} X_q={{{}}}", report.l(), members.join(",")));
    }
    lines.push(format!("result: {}", if passed { "PASS" } else { "FAIL" }));
    Ok(VerifyReport { lines, passed })
}

fn style_name(style: CellUpdateStyle) -> &'static str {
    match style {
        CellUpdateStyle::PaperDecomposition => "paper",
        CellUpdateStyle::GenericTable => "generic",
    }
}

pub fn cmd_verify(args: &VerifyArgs, max_qubits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = args.ca.spec()?;
    if let Some(t) = &args.target {
        args.ca.check_width("--target", t)?;
    }
    let report = verify_report(&spec, args.target, spec.rule(), max_qubits)?;
    let mut text = String::new();
    for l in &report.lines {
        let _ = writeln!(text, "{l}");
    }
    out.write_all(text.as_bytes())?;
    Ok(if report.passed { EXIT_FOUND } else { EXIT_NOT_FOUND })
}

pub fn cmd_circuit(args: &CircuitArgs, max_qubits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = args.ca.spec()?;
    let style: CellUpdateStyle = args.cell_style.into();
    let circuit = match args.which {
        CircuitKind::Uca => {
            let layout = RegisterLayout::literal(spec.n(), spec.m(), false)?;
            build_uca(&spec, &layout, style, max_qubits)?
        }
        CircuitKind::Iteration => {
            let target = args
                .target
                .ok_or_else(|| CliError::Usage("--which iteration needs --target".into()))?;
            args.ca.check_width("--target", &target)?;
            let layout = RegisterLayout::literal(spec.n(), spec.m(), true)?;
            layout.check_budget(max_qubits)?;
            let options = CompileOptions {
                cell_style: style,
                conditioning: if args.literal_st { Conditioning::Sandwich } else { Conditioning::Folded },
                max_qubits,
            };
            let q = TargetPattern::new(&spec, target)?;
            let oracle = build_oracle(&spec, &q, &layout, args.oracle_style.into(), &options)?;
            oracle.to_circuit()?.then(&build_diffusion(&layout)?)
        }
    };
    emit(&export_qct(&circuit), args.output.as_ref(), out)?;
    Ok(EXIT_FOUND)
}

pub fn cmd_compare(args: &CompareArgs, max_qubits: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    args.ca.check_width("--target", &args.target)?;
    let spec = args.ca.spec()?;
    let q = TargetPattern::new(&spec, args.target)?;
    let options = CompileOptions {
        max_qubits,
        ..Default::default()
    };
    let points = compare_oracle_styles(&spec, &q, args.mode.into(), args.iterations, &options)?;
    let mut text = String::from("iteration,recompute,paper_literal,closed_form\n");
    for p in points {
        let closed = p.closed_form.map(|c| format!("{c:.12}")).unwrap_or_default();
        let _ = writeln!(text, "{},{:.12},{:.12},{closed}", p.iteration, p.recompute, p.paper_literal);
    }
    out.write_all(text.as_bytes())?;
    Ok(EXIT_FOUND)
}
