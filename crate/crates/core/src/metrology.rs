//! Heisenberg-limit probing: extreme-eigenvector probes over `n` copies of a
//! block, code membership, quantum Fisher information and the decision pipeline.

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lindblad::{dissipator, JumpOperator, LindbladModel};
use crate::operator::{OperatorMatrix, C64, MAX_DENSE_QUBITS};
use crate::stabilizer::{verify_theorem_7, CodeKind, CodeSpace, Theorem7Report};
use crate::tolerance;

pub const DEFAULT_N_MAX: usize = 4;

/// Relative tolerance for the `qfi(n) / qfi(1) = n²` check.
const SCALING_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Extremes {
    pub psi_max: DVector<C64>,
    pub lambda_max: f64,
    pub psi_min: DVector<C64>,
    pub lambda_min: f64,
}

impl Extremes {
    pub fn gap(&self) -> f64 {
        self.lambda_max - self.lambda_min
    }
}

/// Unit vector in the span of `cols` with the largest overlap with `code`,
/// or the first column when there is no overlap to maximize.
fn pick_in_eigenspace(cols: &DMatrix<C64>, code: Option<&CodeSpace>) -> DVector<C64> {
    let first = cols.column(0).into_owned();
    let mut v = match code {
        Some(q) if cols.ncols() > 1 && !q.is_empty() => {
            let overlap = q.basis().adjoint() * cols;
            let svd = overlap.svd(false, true);
            let s_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            if s_max <= tolerance::RANK {
                first
            } else {
                let idx = svd.singular_values.iter().position(|s| *s == s_max).expect("max exists");
                let v_t = svd.v_t.expect("requested V^T");
                let w: DVector<C64> = v_t.row(idx).adjoint();
                let v = cols * w;
                let n = linalg::vnorm(&v);
                v / C64::new(n, 0.0)
            }
        }
        _ => first,
    };
    linalg::fix_phase(&mut v);
    v
}

/// Extreme eigenpairs of a Hermitian operator; degenerate extremes are resolved
/// toward the code space when one is given.
pub fn extreme_eigvecs(h: &OperatorMatrix, code: Option<&CodeSpace>) -> Result<Extremes> {
    if let Some(q) = code {
        if q.n_qubits() != h.n_qubits() {
            return Err(Error::DimensionMismatch { expected: h.dim(), found: 1 << q.n_qubits() });
        }
    }
    let (values, vectors) = linalg::hermitian_eigen(h.matrix())?;
    let lambda_min = values[0];
    let lambda_max = values[values.len() - 1];
    let tol = 1e-9 * lambda_max.abs().max(lambda_min.abs()).max(1.0);
    let pick = |target: f64| {
        let idx: Vec<usize> = (0..values.len()).filter(|&i| (values[i] - target).abs() <= tol).collect();
        let cols: Vec<DVector<C64>> = idx.iter().map(|&i| vectors.column(i).into_owned()).collect();
        pick_in_eigenspace(&linalg::columns_to_matrix(h.dim(), &cols), code)
    };
    Ok(Extremes { psi_max: pick(lambda_max), lambda_max, psi_min: pick(lambda_min), lambda_min })
}

fn kron_power(v: &DVector<C64>, n: usize) -> DVector<C64> {
    let mut out = v.clone();
    for _ in 1..n {
        out = out.kronecker(v);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeState {
    pub n_copies: usize,
    pub block_qubits: usize,
    pub amplitudes: DVector<C64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
}

impl ProbeState {
    pub fn n_qubits(&self) -> usize {
        self.n_copies * self.block_qubits
    }
}

/// `(|ψmax>^{⊗n} + |ψmin>^{⊗n})` normalized, including the overlap term.
pub fn probe_state(ext: &Extremes, n_copies: usize) -> Result<ProbeState> {
    if n_copies == 0 {
        return Err(Error::invalid("probe needs at least one copy"));
    }
    let block_qubits = crate::operator::qubits_for_dim(ext.psi_max.len())?;
    let total = block_qubits * n_copies;
    if total > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount { found: total, max: MAX_DENSE_QUBITS });
    }
    let sum = kron_power(&ext.psi_max, n_copies) + kron_power(&ext.psi_min, n_copies);
    let norm = linalg::vnorm(&sum);
    if norm <= tolerance::EXACT {
        return Err(Error::Numerical("extreme eigenvectors cancel in the probe superposition".into()));
    }
    Ok(ProbeState {
        n_copies,
        block_qubits,
        amplitudes: sum / C64::new(norm, 0.0),
        lambda_max: ext.lambda_max,
        lambda_min: ext.lambda_min,
    })
}

/// Residual of the state against `code^{⊗n}`.
pub fn code_residual(state: &DVector<C64>, code: &CodeSpace, n_copies: usize) -> Result<f64> {
    code.tensor_power(n_copies)?.residual(state)
}

pub fn code_membership(state: &DVector<C64>, code: &CodeSpace, n_copies: usize) -> Result<bool> {
    Ok(code_residual(state, code, n_copies)? < tolerance::MEMBERSHIP)
}

/// `4 (<h²> - <h>²)` for a pure state.
pub fn qfi(state: &DVector<C64>, h: &OperatorMatrix) -> Result<f64> {
    let defect = h.hermiticity_defect();
    if defect > tolerance::scaled(h.frobenius_norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let hpsi = h.apply(state)?;
    let mean = state.dotc(&hpsi).re;
    let second = hpsi.norm_squared();
    Ok((4.0 * (second - mean * mean)).max(0.0))
}

/// `h = Σ_i 𝕀 ⊗ … ⊗ H ⊗ … ⊗ 𝕀` over `n` blocks.
pub fn copies_generator(h: &OperatorMatrix, n: usize) -> Result<OperatorMatrix> {
    let mut out = h.embed(0, n)?;
    for i in 1..n {
        out = &out + &h.embed(i, n)?;
    }
    Ok(out)
}

/// How the environment couples to `n` copies of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Coupling {
    /// Each copy has its own jump operators.
    #[default]
    Independent,
    /// One jump per block operator, summed over copies.
    Collective,
}

impl Coupling {
    pub fn as_str(self) -> &'static str {
        match self {
            Coupling::Independent => "independent",
            Coupling::Collective => "collective",
        }
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent" => Ok(Coupling::Independent),
            "collective" => Ok(Coupling::Collective),
            _ => Err(Error::invalid(format!("unknown coupling '{s}' (expected independent or collective)"))),
        }
    }
}

pub fn copies_model(model: &LindbladModel, n: usize, coupling: Coupling) -> Result<LindbladModel> {
    let h = copies_generator(model.hamiltonian(), n)?;
    let mut jumps = Vec::new();
    for j in model.jumps() {
        match coupling {
            Coupling::Independent => {
                for i in 0..n {
                    jumps.push(JumpOperator { lambda: j.lambda, op: j.op.embed(i, n)? });
                }
            }
            Coupling::Collective => jumps.push(JumpOperator { lambda: j.lambda, op: copies_generator(&j.op, n)? }),
        }
    }
    LindbladModel::new(h, jumps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HlRow {
    pub n: usize,
    pub member: bool,
    pub residual: f64,
    pub qfi: f64,
    /// `1 / (n (λmax - λmin))`; infinite for a zero gap.
    pub bound: f64,
    /// `||L_D(|ψ><ψ|)||_F` under the `n`-copy model.
    pub dissipator_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HlReport {
    pub coupling: Coupling,
    pub n_max: usize,
    pub theorem7: Theorem7Report,
    pub extremes: Extremes,
    pub rows: Vec<HlRow>,
    /// Probe at `n_max` lies in the code.
    pub member_of_code: bool,
    pub n_star: Option<usize>,
    pub qfi_scaling_ok: bool,
    pub dissipator_ok: bool,
    pub hl_achievable: bool,
    pub reason: Option<String>,
}

impl HlReport {
    pub fn gap(&self) -> f64 {
        self.extremes.gap()
    }

    pub fn bound_delta_eta(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.bound)
    }

    pub fn qfi(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.qfi)
    }

    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "coupling = {}", self.coupling.as_str());
        let _ = writeln!(s, "n_max = {}", self.n_max);
        let _ = writeln!(s, "theorem7_passed = {}", self.theorem7.passed());
        let _ = writeln!(s, "code_dimension = {}", self.theorem7.code.dim());
        let _ = writeln!(s, "lambda_max = {}", self.extremes.lambda_max);
        let _ = writeln!(s, "lambda_min = {}", self.extremes.lambda_min);
        let _ = writeln!(s, "member_of_code = {}", self.member_of_code);
        let _ = writeln!(s, "n_star = {}", self.n_star.map_or("none".to_string(), |n| n.to_string()));
        let _ = writeln!(s, "qfi = {}", self.qfi());
        let _ = writeln!(s, "bound_delta_eta = {}", self.bound_delta_eta());
        let _ = writeln!(s, "qfi_scaling_ok = {}", self.qfi_scaling_ok);
        let _ = writeln!(s, "dissipator_ok = {}", self.dissipator_ok);
        let _ = writeln!(s, "hl_achievable = {}", self.hl_achievable);
        if let Some(r) = &self.reason {
            let _ = writeln!(s, "reason = {r}");
        }
        s
    }

    /// Columns `n, qfi, bound`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "qfi", "bound"]).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([r.n.to_string(), r.qfi.to_string(), r.bound.to_string()]).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

pub fn run_protocol(model: &LindbladModel, n_max: usize) -> Result<HlReport> {
    run_protocol_with(model, n_max, Coupling::default())
}

/// Stabilizer check, probe construction and per-`n` membership, QFI and
/// dissipator checks for `n = 1..=n_max`.
pub fn run_protocol_with(model: &LindbladModel, n_max: usize, coupling: Coupling) -> Result<HlReport> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let total = n_max.saturating_mul(model.n_qubits());
    if total > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount { found: total, max: MAX_DENSE_QUBITS });
    }
    let theorem7 = verify_theorem_7(model, CodeKind::Dfs)?;
    let code = &theorem7.code;
    let extremes = extreme_eigvecs(model.hamiltonian(), (!code.is_empty()).then_some(code))?;
    let gap = extremes.gap();
    let zero_gap = gap <= tolerance::scaled(model.hamiltonian().frobenius_norm());

    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let probe = probe_state(&extremes, n)?;
        let residual =
            if code.is_empty() { linalg::vnorm(&probe.amplitudes) } else { code_residual(&probe.amplitudes, code, n)? };
        let h = copies_generator(model.hamiltonian(), n)?;
        let big = copies_model(model, n, coupling)?;
        let psi = &probe.amplitudes;
        let rho = OperatorMatrix::outer(psi, psi)?;
        let d = dissipator(&big, &rho)?.frobenius_norm();
        rows.push(HlRow {
            n,
            member: residual < tolerance::MEMBERSHIP,
            residual,
            qfi: qfi(psi, &h)?,
            bound: if zero_gap { f64::INFINITY } else { 1.0 / (n as f64 * gap) },
            dissipator_residual: d,
        });
    }

    let n_star = rows.iter().rposition(|r| !r.member).map_or(Some(1), |i| (i + 1 < n_max).then_some(i + 2));
    let member_of_code = rows.last().is_some_and(|r| r.member);
    let q1 = rows[0].qfi;
    let qfi_scaling_ok = !zero_gap
        && rows.iter().all(|r| {
            let want = q1 * (r.n * r.n) as f64;
            (r.qfi - want).abs() <= SCALING_TOL * want.max(1e-300)
        });
    let rate: f64 = model.jumps().iter().map(|j| j.lambda * j.op.frobenius_norm().powi(2)).sum();
    let dissipator_ok = rows
        .iter()
        .filter(|r| n_star.is_some_and(|s| r.n >= s))
        .all(|r| r.dissipator_residual <= tolerance::scaled(rate * r.n as f64));

    let reason = if zero_gap {
        Some("zero generator gap")
    } else if !theorem7.passed() {
        Some("no DFS code")
    } else if n_star.is_none() {
        Some("probe not in code")
    } else if !dissipator_ok {
        Some("dissipator does not annihilate probe")
    } else if !qfi_scaling_ok {
        Some("qfi not quadratic in n")
    } else {
        None
    };
    Ok(HlReport {
        coupling,
        n_max,
        theorem7,
        extremes,
        member_of_code,
        n_star,
        qfi_scaling_ok,
        dissipator_ok,
        hl_achievable: reason.is_none(),
        reason: reason.map(str::to_string),
        rows,
    })
}
