//! Command-line front end. Each command returns its exit code and output so the
//! binary stays a thin wrapper.

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lindblad::{evolve_with, DensityMatrix, EvolveOptions, LindbladModel};
use crate::metrology::{run_protocol_with, Coupling, DEFAULT_N_MAX};
use crate::model::{load_model, PresetParams, DEFAULT_GAMMA, DEFAULT_R};
use crate::operator::{fmt_complex, parse_complex, C64};
use crate::stabilizer::{verify_theorem_7_with, CodeKind};
use crate::vectorize::{verify_vec_theorem_with, DualForm};
use crate::zeta::{verify_theorem_16_with, DEFAULT_CLOSURE_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_REPRESENTABILITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dfstab", version, about = "Decoherence-free stabilizer codes for Lindblad models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the stabilizers and verify the DFS/sDFS code
    Check(CheckArgs),
    /// Encode the stabilizers as a ζ or vec additive code and test dual membership
    Encode(EncodeArgs),
    /// Integrate the master equation and record purity
    Simulate(SimulateArgs),
    /// Run the Heisenberg-limit probing protocol
    Metrology(MetrologyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Model file path or preset name (example1, example2, example_hl)
    pub model: String,
    /// Squeezing parameter for presets
    #[arg(long, default_value_t = DEFAULT_R, allow_negative_numbers = true)]
    pub r: f64,
    /// Rate for presets
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    pub gamma: f64,
    /// Qubit count for example1
    #[arg(long, default_value_t = 1)]
    pub n_qubits: usize,
    /// n+ - n- for example1
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub imbalance: i32,
}

impl ModelArgs {
    fn load(&self) -> Result<LindbladModel> {
        let params = PresetParams { r: self.r, gamma: self.gamma, n_qubits: self.n_qubits, imbalance: self.imbalance };
        load_model(&self.model, &params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Dfs,
    Sdfs,
}

impl From<KindArg> for CodeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Dfs => CodeKind::Dfs,
            KindArg::Sdfs => CodeKind::Sdfs,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = KindArg::Dfs)]
    pub kind: KindArg,
    /// Explicit eigenvalue c_l per jump operator (repeat in order), e.g. 0.82+0i
    #[arg(long = "eigval", allow_hyphen_values = true)]
    pub eigvals: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormalismArg {
    Zeta,
    Vec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualArg {
    Strict,
    CoordinateSum,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = FormalismArg::Zeta)]
    pub formalism: FormalismArg,
    #[arg(long, value_enum, default_value_t = KindArg::Dfs)]
    pub kind: KindArg,
    /// Explicit eigenvalue c_l per jump operator (repeat in order)
    #[arg(long = "eigval", allow_hyphen_values = true)]
    pub eigvals: Vec<String>,
    /// +_ζ closure depth for the self-orthogonality check
    #[arg(long, default_value_t = DEFAULT_CLOSURE_DEPTH)]
    pub depth: usize,
    /// Dual-membership test for the vec formalism
    #[arg(long, value_enum, default_value_t = DualArg::Strict)]
    pub dual: DualArg,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `ket:0101`, `code:0+1` (code-basis indices), or `amps:re,im;re,im;...`
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Step size; defaults to 1e-3 over the model's fastest rate
    #[arg(long)]
    pub dt: Option<f64>,
    /// CSV destination; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record every k-th step
    #[arg(long, default_value_t = 1)]
    pub sample_every: usize,
    /// Include density-matrix entries in the CSV
    #[arg(long)]
    pub with_rho: bool,
    /// Code used by `code:` state specs
    #[arg(long, value_enum, default_value_t = KindArg::Dfs)]
    pub kind: KindArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CouplingArg {
    Independent,
    Collective,
}

#[derive(Debug, Clone, Args)]
pub struct MetrologyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    #[arg(long, value_enum, default_value_t = CouplingArg::Independent)]
    pub coupling: CouplingArg,
    /// Write `n, qfi, bound` rows here
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Exit code plus the text destined for standard output and standard error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self { code, stdout, stderr: String::new() }
    }
}

/// Exit code for an error raised after the model loaded.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotZetaRepresentable { .. } => EXIT_REPRESENTABILITY,
        Error::Parse(_) | Error::InvalidInput(_) => EXIT_PARSE,
        _ => EXIT_NUMERICAL,
    }
}

fn failure(code: i32, e: &Error) -> Outcome {
    let mut stderr = format!("error: {e}\n");
    if code == EXIT_REPRESENTABILITY {
        stderr.push_str("hint: rerun with --formalism vec, which handles sums of tensor products\n");
    }
    Outcome { code, stdout: String::new(), stderr }
}

/// Loads the model (failures exit 2) and runs `f` (failures mapped by [`exit_code`]).
fn with_model(args: &ModelArgs, f: impl FnOnce(&LindbladModel) -> Result<Outcome>) -> Outcome {
    let model = match args.load() {
        Ok(m) => m,
        Err(e) => return failure(EXIT_PARSE, &e),
    };
    f(&model).unwrap_or_else(|e| failure(exit_code(&e), &e))
}

fn parse_eigvals(raw: &[String], model: &LindbladModel) -> Result<Option<Vec<C64>>> {
    if raw.is_empty() {
        return Ok(None);
    }
    if raw.len() != model.jumps().len() {
        return Err(Error::invalid(format!(
            "{} --eigval values given for {} jump operators",
            raw.len(),
            model.jumps().len()
        )));
    }
    raw.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>().map(Some)
}

pub fn cmd_check(args: &CheckArgs) -> Outcome {
    with_model(&args.model, |model| {
        let eig = parse_eigvals(&args.eigvals, model)?;
        let report = verify_theorem_7_with(model, args.kind.into(), eig.as_deref())?;
        let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
        Ok(Outcome::ok(code, report.to_key_value()))
    })
}

pub fn cmd_encode(args: &EncodeArgs) -> Outcome {
    with_model(&args.model, |model| {
        let eig = parse_eigvals(&args.eigvals, model)?;
        let kind = args.kind.into();
        let (exists, text) = match args.formalism {
            FormalismArg::Zeta => {
                let r = verify_theorem_16_with(model, kind, eig.as_deref(), args.depth)?;
                (r.exists, r.to_key_value())
            }
            FormalismArg::Vec => {
                let form = match args.dual {
                    DualArg::Strict => DualForm::Strict,
                    DualArg::CoordinateSum => DualForm::CoordinateSum,
                };
                let r = verify_vec_theorem_with(model, kind, eig.as_deref(), form)?;
                let mut text = r.to_key_value();
                for (i, g) in r.generators.iter().enumerate() {
                    let nz: Vec<String> = g
                        .coords()
                        .iter()
                        .enumerate()
                        .filter(|(_, z)| z.norm() > 1e-14)
                        .map(|(k, z)| format!("{k}:{}", fmt_complex(*z)))
                        .collect();
                    text.push_str(&format!("generator[{i}] = {}\n", nz.join(" ")));
                }
                (r.exists, text)
            }
        };
        Ok(Outcome::ok(if exists { EXIT_OK } else { EXIT_NEGATIVE }, text))
    })
}

/// Parses a state spec into a normalized ket.
pub fn parse_state(spec: &str, model: &LindbladModel, kind: CodeKind) -> Result<DVector<C64>> {
    let dim = model.dim();
    let (tag, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("state spec {spec:?} needs a ket:, code: or amps: prefix")))?;
    let mut v = DVector::from_element(dim, C64::new(0.0, 0.0));
    match tag {
        "ket" => {
            let bits = body.trim().trim_start_matches('|').trim_end_matches('>').trim_end_matches('⟩');
            if bits.len() != model.n_qubits() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::invalid(format!("ket {bits:?} must be {} binary digits", model.n_qubits())));
            }
            v[usize::from_str_radix(bits, 2).expect("binary digits")] = C64::new(1.0, 0.0);
        }
        "code" => {
            let report = verify_theorem_7_with(model, kind, None)?;
            let basis = report.code.basis_vectors();
            if basis.is_empty() {
                return Err(Error::invalid("the model has an empty code space"));
            }
            for part in body.split('+') {
                let i: usize =
                    part.trim().parse().map_err(|_| Error::invalid(format!("bad code-basis index {part:?}")))?;
                let b = basis
                    .get(i)
                    .ok_or_else(|| Error::invalid(format!("code-basis index {i} out of range 0..{}", basis.len())))?;
                v += b;
            }
        }
        "amps" => {
            let amps: Vec<&str> = body.split(';').collect();
            if amps.len() != dim {
                return Err(Error::invalid(format!("{} amplitudes given for dimension {dim}", amps.len())));
            }
            for (i, a) in amps.iter().enumerate() {
                let (re, im) =
                    a.split_once(',').ok_or_else(|| Error::invalid(format!("amplitude {a:?} must be re,im")))?;
                let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad number {x:?}")));
                v[i] = C64::new(parse(re)?, parse(im)?);
            }
        }
        _ => return Err(Error::invalid(format!("unknown state kind {tag:?} (expected ket, code or amps)"))),
    }
    let n = v.norm();
    if n <= 1e-12 {
        return Err(Error::invalid("state has zero norm"));
    }
    Ok(v / C64::new(n, 0.0))
}

pub fn cmd_simulate(args: &SimulateArgs) -> Outcome {
    with_model(&args.model, |model| {
        if !(args.t.is_finite() && args.t >= 0.0) {
            return Err(Error::invalid(format!("--t {} must be finite and nonnegative", args.t)));
        }
        let dt = args.dt.unwrap_or_else(|| model.default_dt());
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("--dt {dt} must be positive")));
        }
        let psi = parse_state(&args.state, model, args.kind.into())?;
        let rho = DensityMatrix::pure(&psi)?;
        let options = EvolveOptions { sample_every: args.sample_every.max(1), keep_states: args.with_rho };
        let traj = evolve_with(model, &rho, args.t, dt, options)?;
        let summary = format!(
            "steps = {}\ndt = {}\nmin_purity = {}\nmax_purity = {}\nmax_trace_drift = {:e}\n",
            traj.steps,
            traj.dt,
            traj.min_purity(),
            traj.max_purity(),
            traj.max_trace_drift()
        );
        match &args.out {
            Some(path) => {
                traj.write_csv(BufWriter::new(File::create(path)?), args.with_rho)?;
                Ok(Outcome::ok(EXIT_OK, summary))
            }
            None => {
                let mut buf = Vec::new();
                traj.write_csv(&mut buf, args.with_rho)?;
                let csv = String::from_utf8(buf).map_err(|e| Error::Io(io::Error::other(e)))?;
                Ok(Outcome { code: EXIT_OK, stdout: csv, stderr: summary })
            }
        }
    })
}

pub fn cmd_metrology(args: &MetrologyArgs) -> Outcome {
    with_model(&args.model, |model| {
        let coupling = match args.coupling {
            CouplingArg::Independent => Coupling::Independent,
            CouplingArg::Collective => Coupling::Collective,
        };
        let report = run_protocol_with(model, args.nmax, coupling)?;
        if let Some(path) = &args.csv {
            report.write_csv(BufWriter::new(File::create(path)?))?;
        }
        let mut text = report.to_key_value();
        for r in &report.rows {
            text.push_str(&format!(
                "row n = {} member = {} qfi = {} bound = {} dissipator_residual = {:e}\n",
                r.n, r.member, r.qfi, r.bound, r.dissipator_residual
            ));
        }
        Ok(Outcome::ok(if report.hl_achievable { EXIT_OK } else { EXIT_NEGATIVE }, text))
    })
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Metrology(a) => cmd_metrology(a),
    }
}

/// Parses `argv` (program name first) and runs the command. Usage errors exit 2.
pub fn run_from_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
