//! Model files and built-in example models.
//!
//! A model file is JSON:
//!
//! ```json
//! {
//!   "n_qubits": 2,
//!   "hamiltonian": [{"scale": [0.68, 0.0], "pauli": "XX"}],
//!   "lindblad_ops": [
//!     {"lambda": 1.0, "terms": [{"scale": [0.82, 0.0], "pauli": "II"}, {"scale": [0.82, 0.0], "pauli": "ZZ"}]}
//!   ]
//! }
//! ```
//!
//! A term is a bare letter string (`"XZ"`), `{"scale", "pauli"}`, or
//! `{"scale", "factors"}` where each factor lists `a0..a3` as eight reals
//! `[a0_re, a0_im, a1_re, a1_im, a2_re, a2_im, a3_re, a3_im]`. A file may
//! instead name a preset: `{"preset": "example_hl", "r": 0.5, "gamma": 1.0}`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::lindblad::{JumpOperator, LindbladModel};
use crate::operator::{pauli_matrix, OperatorMatrix, Pauli, PauliFactor, PauliProduct, PauliSum, C64, IMAG, ONE, ZERO};

pub const DEFAULT_R: f64 = 0.5;
pub const DEFAULT_GAMMA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Example1,
    Example2,
    ExampleHl,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Example1, Preset::Example2, Preset::ExampleHl];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Example1 => "example1",
            Preset::Example2 => "example2",
            Preset::ExampleHl => "example_hl",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset {s:?} (expected example1, example2 or example_hl)")))
    }
}

/// Parameters shared by the presets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PresetParams {
    /// Squeezing parameter; `s = sinh r`, `c = cosh r`.
    pub r: f64,
    pub gamma: f64,
    /// Qubit count for `example1` (default 1).
    pub n_qubits: usize,
    /// `n+ - n-` selecting the `example1` eigenspace (default 1).
    pub imbalance: i32,
}

impl Default for PresetParams {
    fn default() -> Self {
        Self { r: DEFAULT_R, gamma: DEFAULT_GAMMA, n_qubits: 1, imbalance: 1 }
    }
}

impl PresetParams {
    fn validate(&self) -> Result<()> {
        if !self.r.is_finite() {
            return Err(Error::Parse(format!("r = {} must be finite", self.r)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Parse(format!("gamma = {} must be finite and nonnegative", self.gamma)));
        }
        Ok(())
    }
}

/// `s + c = e^r`
pub fn squeeze_sum(r: f64) -> f64 {
    r.sinh() + r.cosh()
}

/// `σx + iσy + σz`, the single-qubit factor of the squeezed-reservoir jump.
pub fn squeezed_factor() -> PauliFactor {
    PauliFactor::new(ZERO, ONE, IMAG, ONE)
}

pub fn build_preset(preset: Preset, params: &PresetParams) -> Result<LindbladModel> {
    params.validate()?;
    match preset {
        Preset::Example1 => example1(params.n_qubits, params.r, params.gamma, params.imbalance),
        Preset::Example2 => example2(params.r, params.gamma),
        Preset::ExampleHl => example_hl(params.r, params.gamma),
    }
}

/// `J = Σ_j (s+c)/2 (σx_j + iσy_j + σz_j)`, `H_S = Σ_j γ/4 (n+ - n-)(s+c)² σy_j`.
pub fn example1(n_qubits: usize, r: f64, gamma: f64, imbalance: i32) -> Result<LindbladModel> {
    let a = squeeze_sum(r) / 2.0;
    let single_j = PauliProduct::unit(vec![squeezed_factor()])?.with_scale(C64::new(a, 0.0)).to_matrix();
    let single_h = pauli_matrix(Pauli::Y).scale(C64::new(gamma * imbalance as f64 * a * a, 0.0));
    let mut j = OperatorMatrix::zeros(n_qubits);
    let mut h = OperatorMatrix::zeros(n_qubits);
    for q in 0..n_qubits {
        j = &j + &single_j.embed(q, n_qubits)?;
        h = &h + &single_h.embed(q, n_qubits)?;
    }
    LindbladModel::new(h, vec![JumpOperator { lambda: gamma, op: j }])
}

/// `J = (s+c)/2 ⊗_{j=1}^5 (σx + iσy + σz)` as a product.
pub fn example2_jump(r: f64) -> PauliProduct {
    PauliProduct { factors: vec![squeezed_factor(); 5], scale: C64::new(squeeze_sum(r) / 2.0, 0.0) }
}

/// Five-qubit model with `H_S = (iγc/2)(J† - J)`, `c = (s+c)/2`, so `H_ev = 0` on the `+` branch.
pub fn example2(r: f64, gamma: f64) -> Result<LindbladModel> {
    let j = example2_jump(r).to_matrix();
    let c = squeeze_sum(r) / 2.0;
    let h = (&j.adjoint() - &j).scale(IMAG * (gamma * c / 2.0));
    LindbladModel::new(h, vec![JumpOperator { lambda: gamma, op: j }])
}

/// `⊗_{j=1}^5 η0 σy` with `η0 = γ(s+c)²/4`, stored as unit letters times `η0^5`.
pub fn example2_product_hamiltonian(r: f64, gamma: f64) -> PauliProduct {
    let eta0 = gamma * squeeze_sum(r).powi(2) / 4.0;
    PauliProduct { factors: vec![PauliFactor::letter(Pauli::Y); 5], scale: C64::new(eta0.powi(5), 0.0) }
}

/// `J = (s+c)/2 (𝕀⊗𝕀 + σz⊗σz)`, `H_S = γ(s+c)²/4 σx⊗σx`.
pub fn example_hl(r: f64, gamma: f64) -> Result<LindbladModel> {
    let a = squeeze_sum(r) / 2.0;
    let j = PauliSum::new(
        2,
        vec![
            PauliProduct::from_letters("II")?.with_scale(C64::new(a, 0.0)),
            PauliProduct::from_letters("ZZ")?.with_scale(C64::new(a, 0.0)),
        ],
    )?;
    let h = PauliSum::from(PauliProduct::from_letters("XX")?.with_scale(C64::new(gamma * a * a, 0.0)));
    LindbladModel::from_pauli(&h, &[(gamma, j)])
}

/// `H_S = σx`, single jump `σz` with unit rate: no decoherence-free code survives the Hamiltonian.
pub fn counter_model() -> LindbladModel {
    LindbladModel::new(pauli_matrix(Pauli::X), vec![JumpOperator { lambda: 1.0, op: pauli_matrix(Pauli::Z) }])
        .expect("valid counter-model")
}

/// Parses model JSON text.
pub fn parse_model(text: &str) -> Result<LindbladModel> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    model_from_value(&value)
}

/// Reads a model file, or builds a preset when `spec` is a preset name.
pub fn load_model(spec: &str, params: &PresetParams) -> Result<LindbladModel> {
    if let Ok(p) = spec.parse::<Preset>() {
        return build_preset(p, params);
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read model file {}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn perr(path: impl fmt::Display, msg: impl fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn model_from_value(v: &Value) -> Result<LindbladModel> {
    let obj = v.as_object().ok_or_else(|| perr("$", "expected a JSON object"))?;
    if let Some(p) = obj.get("preset") {
        let name = p.as_str().ok_or_else(|| perr("preset", "expected a string"))?;
        let preset: Preset = name.parse()?;
        let mut params = PresetParams::default();
        if let Some(r) = obj.get("r") {
            params.r = r.as_f64().ok_or_else(|| perr("r", "expected a number"))?;
        }
        if let Some(g) = obj.get("gamma") {
            params.gamma = g.as_f64().ok_or_else(|| perr("gamma", "expected a number"))?;
        }
        if let Some(n) = obj.get("n_qubits") {
            params.n_qubits = n.as_u64().ok_or_else(|| perr("n_qubits", "expected a positive integer"))? as usize;
        }
        if let Some(i) = obj.get("imbalance") {
            params.imbalance = i.as_i64().ok_or_else(|| perr("imbalance", "expected an integer"))? as i32;
        }
        return build_preset(preset, &params);
    }
    let n = obj
        .get("n_qubits")
        .ok_or_else(|| perr("n_qubits", "missing"))?
        .as_u64()
        .filter(|n| *n >= 1)
        .ok_or_else(|| perr("n_qubits", "expected a positive integer"))? as usize;
    let h = match obj.get("hamiltonian") {
        None | Some(Value::Null) => PauliSum::zero(n).map_err(|e| perr("n_qubits", e))?,
        Some(terms) => parse_terms(terms, n, "hamiltonian")?,
    };
    let mut jumps = Vec::new();
    if let Some(ops) = obj.get("lindblad_ops") {
        let ops = ops.as_array().ok_or_else(|| perr("lindblad_ops", "expected an array"))?;
        for (l, op) in ops.iter().enumerate() {
            let path = format!("lindblad_ops[{l}]");
            let lambda = op
                .get("lambda")
                .ok_or_else(|| perr(&path, "missing lambda"))?
                .as_f64()
                .ok_or_else(|| perr(format!("{path}.lambda"), "expected a number"))?;
            if !(lambda.is_finite() && lambda >= 0.0) {
                return Err(perr(format!("{path}.lambda"), "must be finite and nonnegative"));
            }
            let terms = op.get("terms").ok_or_else(|| perr(&path, "missing terms"))?;
            jumps.push((lambda, parse_terms(terms, n, &format!("{path}.terms"))?));
        }
    }
    LindbladModel::from_pauli(&h, &jumps).map_err(|e| match e {
        Error::NotHermitian(d) => perr("hamiltonian", format!("not Hermitian (deviation {d:.3e})")),
        other => other,
    })
}

fn parse_terms(v: &Value, n: usize, path: &str) -> Result<PauliSum> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected an array of terms"))?;
    let mut sum = PauliSum::zero(n).map_err(|e| perr("n_qubits", e))?;
    for (i, t) in arr.iter().enumerate() {
        let tp = format!("{path}[{i}]");
        let term = parse_term(t, &tp)?;
        if term.n_qubits() != n {
            return Err(perr(tp, format!("term has {} qubits, model has {n}", term.n_qubits())));
        }
        sum.push(term)?;
    }
    Ok(sum)
}

fn parse_term(v: &Value, path: &str) -> Result<PauliProduct> {
    if let Some(s) = v.as_str() {
        return PauliProduct::from_letters(s).map_err(|e| perr(path, e));
    }
    let obj = v.as_object().ok_or_else(|| perr(path, "expected a Pauli string or an object"))?;
    let scale = match obj.get("scale") {
        None => ONE,
        Some(s) => parse_complex(s, &format!("{path}.scale"))?,
    };
    let product = match (obj.get("pauli"), obj.get("factors")) {
        (Some(p), None) => {
            let s = p.as_str().ok_or_else(|| perr(format!("{path}.pauli"), "expected a string"))?;
            PauliProduct::from_letters(s).map_err(|e| perr(format!("{path}.pauli"), e))?
        }
        (None, Some(f)) => {
            let fp = format!("{path}.factors");
            let arr = f.as_array().ok_or_else(|| perr(&fp, "expected an array"))?;
            let factors = arr
                .iter()
                .enumerate()
                .map(|(q, f)| parse_factor(f, &format!("{fp}[{q}]")))
                .collect::<Result<Vec<_>>>()?;
            PauliProduct::unit(factors).map_err(|e| perr(&fp, e))?
        }
        (Some(_), Some(_)) => return Err(perr(path, "give either pauli or factors, not both")),
        (None, None) => return Err(perr(path, "missing pauli or factors")),
    };
    Ok(product.with_scale(scale))
}

fn parse_complex(v: &Value, path: &str) -> Result<C64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(perr(path, "expected [re, im] numbers")),
        },
        _ => Err(perr(path, "expected [re, im]")),
    }
}

fn parse_factor(v: &Value, path: &str) -> Result<PauliFactor> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected 8 numbers"))?;
    if arr.len() != 8 {
        return Err(perr(path, format!("expected 8 numbers, found {}", arr.len())));
    }
    let mut nums = [0.0; 8];
    for (k, x) in arr.iter().enumerate() {
        nums[k] = x.as_f64().ok_or_else(|| perr(format!("{path}[{k}]"), "expected a number"))?;
    }
    Ok(PauliFactor::new(
        C64::new(nums[0], nums[1]),
        C64::new(nums[2], nums[3]),
        C64::new(nums[4], nums[5]),
        C64::new(nums[6], nums[7]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::commutator;

    #[test]
    fn presets_parse_by_name() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            let m = build_preset(p, &PresetParams::default()).unwrap();
            assert_eq!(m.jumps().len(), 1);
        }
        assert!("example3".parse::<Preset>().is_err());
    }

    #[test]
    fn example2_effective_hamiltonian_vanishes() {
        let m = example2(0.5, 1.0).unwrap();
        let c = C64::new(squeeze_sum(0.5) / 2.0, 0.0);
        let hev = crate::lindblad::h_ev(&m, &[c]).unwrap();
        assert!(hev.frobenius_norm() < 1e-12 * m.hamiltonian().frobenius_norm());
        // the ⊗σy product does not commute with J
        let product = example2_product_hamiltonian(0.5, 1.0).to_matrix();
        assert!(commutator(&product, &m.jumps()[0].op).unwrap().frobenius_norm() > 1.0);
    }

    #[test]
    fn json_forms_agree() {
        let letters =
            r#"{"n_qubits": 2, "hamiltonian": ["XX"], "lindblad_ops": [{"lambda": 1, "terms": ["II", "ZZ"]}]}"#;
        let scaled = r#"{"n_qubits": 2,
            "hamiltonian": [{"scale": [1, 0], "pauli": "XX"}],
            "lindblad_ops": [{"lambda": 1, "terms": [
                {"scale": [1, 0], "factors": [[1,0,0,0,0,0,0,0],[1,0,0,0,0,0,0,0]]},
                {"factors": [[0,0,0,0,0,0,1,0],[0,0,0,0,0,0,1,0]]}]}]}"#;
        let a = parse_model(letters).unwrap();
        let b = parse_model(scaled).unwrap();
        assert_eq!(a, b);
        let hl = parse_model(r#"{"preset": "example_hl", "r": 0.5}"#).unwrap();
        assert_eq!(hl, example_hl(0.5, 1.0).unwrap());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let cases = [
            (r#"{"hamiltonian": []}"#, "n_qubits"),
            (r#"{"n_qubits": 1, "hamiltonian": ["Q"]}"#, "hamiltonian[0]"),
            (r#"{"n_qubits": 1, "hamiltonian": ["XX"]}"#, "hamiltonian[0]"),
            (r#"{"n_qubits": 1, "lindblad_ops": [{"lambda": -1, "terms": []}]}"#, "lindblad_ops[0].lambda"),
            (
                r#"{"n_qubits": 1, "lindblad_ops": [{"lambda": 1, "terms": [{"factors": [[1,2,3]]}]}]}"#,
                "lindblad_ops[0].terms[0].factors[0]",
            ),
            (r#"{"n_qubits": 1, "hamiltonian": [{"scale": [0, 1], "pauli": "X"}]}"#, "hamiltonian"),
            ("{\n\"n_qubits\": 1,,}", "line 2"),
        ];
        for (text, needle) in cases {
            match parse_model(text) {
                Err(Error::Parse(msg)) => assert!(msg.contains(needle), "{msg:?} lacks {needle:?}"),
                other => panic!("expected parse error for {text}, got {other:?}"),
            }
        }
    }
}
