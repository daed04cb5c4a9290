//! `witnesskit` command-line interface.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::concurrence::{concurrence_general, DEFAULT_NORMALIZATION};
use crate::error::WitnessError;
use crate::io::{
    breakdown_json, discrepancy_json, parse_state, parse_state_or_density, parse_witness, report_json,
    to_json_string, StateDoc, StateOrDensity, WitnessDoc,
};
use crate::separability::{certify_witness, noise_threshold, positivity_probe, SeesawConfig};
use crate::states::PureState;
use crate::tensor::{expectation_mixed, expectation_pure};
use crate::witness::{canonical_witness, compare_witnesses, operator_form_witness, StateKind, Witness};

/// Largest qubit count accepted anywhere on the command line.
pub const MAX_QUBITS: usize = 12;
pub const THREADS_ENV: &str = "WITNESSKIT_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;
pub const EXIT_NO_DETECTION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "witnesskit", version, about = "Concurrence-based entanglement witnesses")]
pub struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build named states.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Print C^2 and C of a qubit state.
    Concurrence {
        state: String,
        #[arg(long)]
        normalization: Option<f64>,
        #[arg(long)]
        breakdown: bool,
    },
    /// Build a witness for a target state.
    WitnessBuild(WitnessBuildArgs),
    /// Print Tr(W rho).
    WitnessEval { witness: String, state: String },
    /// Certify a witness against product states and evaluate it on a target.
    Certify(CertifyArgs),
    /// Entrywise comparison of two witnesses.
    Compare { a: String, b: String },
    /// White-noise mixing weight above which the target stays detected.
    NoiseThreshold {
        witness: String,
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum StateAction {
    Make {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Ghz,
    W,
}

impl From<KindArg> for StateKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Ghz => StateKind::Ghz,
            KindArg::W => StateKind::W,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Canonical,
    Operator,
}

#[derive(Args, Debug)]
pub struct WitnessBuildArgs {
    pub state: String,
    #[arg(long, value_enum)]
    pub form: FormArg,
    /// Operator-form family; inferred from the state when omitted.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub hermitize: bool,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    pub witness: String,
    #[arg(long)]
    pub target: String,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also run the sampled positivity probe with this many product states.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: "Validation",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.kind, "message": self.message, "code": self.code})
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        let (code, kind) = match &e {
            WitnessError::NoConvergence { .. } => (EXIT_NO_CONVERGENCE, "NoConvergence"),
            WitnessError::NoDetection { .. } => (EXIT_NO_DETECTION, "NoDetection"),
            WitnessError::NotHermitian { .. } => (EXIT_VALIDATION, "NotHermitian"),
            WitnessError::DimensionMismatch { .. } => (EXIT_VALIDATION, "DimensionMismatch"),
            WitnessError::LabelOutOfRange { .. } => (EXIT_VALIDATION, "LabelOutOfRange"),
            WitnessError::BadArity(_) => (EXIT_VALIDATION, "BadArity"),
            WitnessError::BadProbability(_) => (EXIT_VALIDATION, "BadProbability"),
            WitnessError::BadPositions { .. } => (EXIT_VALIDATION, "BadPositions"),
            WitnessError::WrongShape(_) => (EXIT_VALIDATION, "WrongShape"),
            WitnessError::InvalidShape(_) => (EXIT_VALIDATION, "InvalidShape"),
            WitnessError::InvalidState(_) => (EXIT_VALIDATION, "InvalidState"),
            WitnessError::InvalidConfig(_) => (EXIT_VALIDATION, "InvalidConfig"),
            WitnessError::Format(_) => (EXIT_VALIDATION, "Format"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// What a successful (or partially successful) command produced.
struct Output {
    json: Value,
    pretty: String,
    /// Write the JSON here instead of stdout.
    out: Option<String>,
    /// Non-zero status reported after printing the output.
    trailing_error: Option<CliError>,
}

impl Output {
    fn new(json: Value, pretty: String) -> Self {
        Self {
            json,
            pretty,
            out: None,
            trailing_error: None,
        }
    }
}

struct Inputs {
    stdin_used: bool,
}

impl Inputs {
    fn read(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            if self.stdin_used {
                return Err(CliError::validation("standard input can back only one argument"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::validation(format!("reading stdin: {e}")))?;
            Ok(s)
        } else {
            fs::read_to_string(PathBuf::from(path)).map_err(|e| CliError::validation(format!("reading {path}: {e}")))
        }
    }

    fn state(&mut self, path: &str) -> Result<PureState, CliError> {
        let psi = parse_state(&self.read(path)?)?;
        check_size(psi.dim())?;
        Ok(psi)
    }

    fn witness(&mut self, path: &str) -> Result<Witness, CliError> {
        let w = parse_witness(&self.read(path)?)?;
        check_size(w.dim())?;
        Ok(w)
    }
}

fn check_size(d: usize) -> Result<(), CliError> {
    if d > 1 << MAX_QUBITS {
        return Err(CliError::validation(format!(
            "joint dimension {d} exceeds the {MAX_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}

fn check_qubits(m: usize) -> Result<(), CliError> {
    if m > MAX_QUBITS {
        return Err(CliError::validation(format!("at most {MAX_QUBITS} qubits supported, got {m}")));
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn infer_kind(psi: &PureState) -> Option<StateKind> {
    let m = psi.shape().m();
    if !psi.shape().is_qubits() || m < 2 {
        return None;
    }
    [StateKind::Ghz, StateKind::W].into_iter().find(|k| {
        k.state(m)
            .map(|s| s.amplitudes().inner(psi.amplitudes()).norm_sqr() > 1.0 - 1e-12)
            .unwrap_or(false)
    })
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let mut inputs = Inputs { stdin_used: false };
    match &cli.command {
        Command::State {
            action: StateAction::Make { kind, qubits, out },
        } => {
            check_qubits(*qubits)?;
            let psi = StateKind::from(*kind).state(*qubits)?;
            let doc = serde_json::to_value(StateDoc::from_state(&psi)).expect("state serializes");
            let pretty = format!("{}{} state on {} qubits", StateKind::from(*kind).name(), qubits, qubits);
            let mut o = Output::new(doc, pretty);
            o.out = out.clone();
            Ok(o)
        }
        Command::Concurrence {
            state,
            normalization,
            breakdown,
        } => {
            let psi = inputs.state(state)?;
            let b = concurrence_general(&psi, normalization.unwrap_or(DEFAULT_NORMALIZATION))?;
            let mut v = json!({"c_squared": b.total_squared, "c": b.total});
            if *breakdown {
                v["breakdown"] = breakdown_json(&b, true);
            }
            let mut pretty = format!("C^2 = {}\nC   = {}", b.total_squared, b.total);
            if *breakdown {
                for (k, t) in b.w_terms.iter().chain(&b.ghz_terms) {
                    pretty.push_str(&format!("\n  {k:<24} {t}"));
                }
            }
            Ok(Output::new(v, pretty))
        }
        Command::WitnessBuild(args) => {
            let psi = inputs.state(&args.state)?;
            let mut w = match args.form {
                FormArg::Canonical => canonical_witness(&psi, args.gamma)?,
                FormArg::Operator => {
                    if args.gamma.is_some() {
                        return Err(CliError::validation("--gamma applies to the canonical form only"));
                    }
                    let kind = match args.kind {
                        Some(k) => k.into(),
                        None => infer_kind(&psi).ok_or_else(|| {
                            CliError::validation("operator form needs --kind unless the state is a GHZ or W state")
                        })?,
                    };
                    if !psi.shape().is_qubits() {
                        return Err(WitnessError::WrongShape("operator form is defined for qubits".into()).into());
                    }
                    operator_form_witness(kind, psi.shape().m())?
                }
            };
            if args.hermitize {
                w = w.hermitized()?;
            }
            let pretty = format!(
                "{} witness for {} (gamma = {}, dim = {}, hermitian = {})",
                w.form,
                w.source,
                w.gamma,
                w.dim(),
                w.is_hermitian()
            );
            let doc = serde_json::to_value(WitnessDoc::from_witness(&w)).expect("witness serializes");
            let mut o = Output::new(doc, pretty);
            o.out = args.out.clone();
            Ok(o)
        }
        Command::WitnessEval { witness, state } => {
            let w = inputs.witness(witness)?;
            let input = parse_state_or_density(&inputs.read(state)?)?;
            let (value, dims) = match &input {
                StateOrDensity::Pure(psi) => (expectation_pure(&w.matrix, psi.amplitudes())?, psi.shape().dims()),
                StateOrDensity::Mixed(rho) => (expectation_mixed(&w.matrix, rho.matrix())?, rho.shape().dims()),
            };
            if dims != w.dims.as_slice() {
                return Err(WitnessError::DimensionMismatch {
                    expected: w.dim(),
                    found: dims.iter().product(),
                }
                .into());
            }
            let v = json!({"expectation": value.re, "imag": value.im});
            Ok(Output::new(v, format!("Tr(W rho) = {}", value.re)))
        }
        Command::Certify(args) => {
            let w = inputs.witness(&args.witness)?;
            let target = inputs.state(&args.target)?;
            let cfg = SeesawConfig {
                restarts: args.restarts,
                max_sweeps: args.max_sweeps,
                tolerance: args.tolerance,
                seed: args.seed,
            };
            let report = certify_witness(&w, &target, &cfg)?;
            let probe = match args.samples {
                Some(k) => Some(positivity_probe(&w, k, k / 10, args.seed)?),
                None => None,
            };
            let v = report_json(&report, probe.as_ref());
            let mut pretty = format!(
                "min product expectation = {}\nvalid witness           = {}\ndetection value         = {}\ndetects target          = {}\nrestarts agreeing       = {}/{}",
                report.min_product_expectation,
                report.is_valid_witness,
                report.detection_value,
                report.detects_target,
                report.restarts_agreeing,
                report.restarts
            );
            if let Some(p) = &probe {
                pretty.push_str(&format!("\nprobe worst             = {}", p.worst()));
            }
            let mut o = Output::new(v, pretty);
            if !report.converged {
                o.trailing_error = Some(
                    WitnessError::NoConvergence {
                        iterations: report.sweeps_used,
                    }
                    .into(),
                );
            }
            Ok(o)
        }
        Command::Compare { a, b } => {
            let wa = inputs.witness(a)?;
            let wb = inputs.witness(b)?;
            let r = compare_witnesses(&wa, &wb)?;
            let mut pretty = format!("max |a - b| = {} at {} positions", r.max_abs_diff, r.positions.len());
            for p in &r.positions {
                pretty.push_str(&format!("\n  ({}, {}): {} vs {}", p.row, p.col, p.a, p.b));
            }
            Ok(Output::new(discrepancy_json(&r), pretty))
        }
        Command::NoiseThreshold { witness, target } => {
            let w = inputs.witness(witness)?;
            let psi = inputs.state(target)?;
            let p = noise_threshold(&w, &psi)?;
            Ok(Output::new(json!({"p_star": p}), format!("p* = {p}")))
        }
    }
}

fn emit_error(err: &CliError) {
    let _ = writeln!(io::stderr(), "{}", to_json_string(&err.to_json()));
}

/// Parses `args` (program name first) and runs the command. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        emit_error(&e);
        return e.code;
    }
    match execute(&cli) {
        Ok(out) => {
            let text = if cli.pretty { out.pretty.clone() } else { to_json_string(&out.json) };
            let written = match out.out.as_deref() {
                Some(path) if path != "-" => fs::write(path, format!("{text}\n")),
                _ => writeln!(io::stdout(), "{text}"),
            };
            if let Err(e) = written {
                let err = CliError::validation(format!("writing output: {e}"));
                emit_error(&err);
                return err.code;
            }
            match out.trailing_error {
                Some(e) => {
                    emit_error(&e);
                    e.code
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            emit_error(&e);
            e.code
        }
    }
}
