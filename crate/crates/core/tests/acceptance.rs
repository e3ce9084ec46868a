//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use dfstab::lindblad::{evolve_with, h_ev, EvolveOptions};
use dfstab::metrology::{extreme_eigvecs, probe_state};
use dfstab::model::{self, squeeze_sum, squeezed_factor};
use dfstab::operator::{Pauli, PauliFactor, PauliProduct};
use dfstab::vectorize::{standard_formalism_roundtrip, vec_sum, vec_symplectic, xz_composition, xz_entries};
use dfstab::zeta::{symplectic_form, zeta_of_operator, zeta_sum};
use dfstab::{
    build_stabilizers, dissipator, pauli_matrix, vectorize, verify_theorem_7, zeta, CodeKind, DensityMatrix, Ket,
    LindbladModel, OperatorMatrix, ZetaVector, C64,
};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn ket(amps: &[C64]) -> Ket {
    let v = Ket::from_column_slice(amps);
    let n = v.norm();
    v / C64::new(n, 0.0)
}

fn kron_all(vs: &[&Ket]) -> Ket {
    vs[1..].iter().fold(vs[0].clone(), |acc, v| acc.kronecker(*v))
}

fn zeta_of_letters(text: &str) -> Vec<C64> {
    zeta(&PauliProduct::from_letters(text).unwrap()).unwrap().coords().to_vec()
}

fn ints(xs: &[i32]) -> Vec<C64> {
    xs.iter().map(|&x| c(x as f64, 0.0)).collect()
}

fn one_spectrum() -> Outcome {
    let plus = ket(&[c(1.0, 0.0), c(0.0, 0.0)]);
    let minus = ket(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    let mut worst: f64 = 0.0;
    for r in [0.25, 0.5, 1.0] {
        let m = model::example1(3, r, 1.0, 1).map_err(e)?;
        let j = &m.jumps()[0].op;
        let half = squeeze_sum(r) / 2.0;
        for mask in 0..8u32 {
            let parts: Vec<&Ket> = (0..3).map(|q| if mask >> q & 1 == 1 { &minus } else { &plus }).collect();
            let n_minus = mask.count_ones() as f64;
            let lambda = (3.0 - 2.0 * n_minus) * half;
            let v = kron_all(&parts);
            let res = (j.apply(&v).map_err(e)? - &v * c(lambda, 0.0)).norm();
            worst = worst.max(res);
            ensure(res < 1e-10, || format!("r = {r}, mask {mask:03b}: residual {res:e}"))?;
        }
    }
    Ok(format!("24 product eigenvectors, max residual {worst:.1e}"))
}

fn two_five_qubit_vectors() -> Outcome {
    let n = 5;
    let s1 = zeta(&PauliProduct::unit(vec![squeezed_factor(); n]).unwrap()).map_err(e)?;
    let mut want_s1 = vec![c(0.0, 0.0); 5];
    want_s1.extend(vec![c(1.0, 0.0); 5]);
    want_s1.extend(vec![c(0.0, 1.0); 5]);
    want_s1.extend(vec![c(1.0, 0.0); 5]);
    ensure(s1.coords() == want_s1.as_slice(), || format!("v_S1 = {s1}"))?;

    let s2 = zeta(&PauliProduct::identity(n).unwrap()).map_err(e)?;
    let mut want_s2 = vec![c(1.0, 0.0); 5];
    want_s2.extend(vec![c(0.0, 0.0); 15]);
    ensure(s2.coords() == want_s2.as_slice(), || format!("v_S2 = {s2}"))?;

    // the reference vector carries the unit σy letters; the η0^5 scale sits outside ζ
    let (r, gamma) = (0.5, 1.0);
    let hs = model::example2_product_hamiltonian(r, gamma);
    let mut want_hs = vec![c(0.0, 0.0); 10];
    want_hs.extend(vec![c(1.0, 0.0); 5]);
    want_hs.extend(vec![c(0.0, 0.0); 5]);
    let unit = PauliProduct::unit(hs.factors().to_vec()).unwrap();
    ensure(zeta(&unit).map_err(e)?.coords() == want_hs.as_slice(), || "v_HS letters differ".into())?;
    let eta0 = gamma * squeeze_sum(r).powi(2) / 4.0;
    ensure((hs.scale() - c(eta0.powi(5), 0.0)).norm() < 1e-12 * eta0.powi(5), || "H_S scale is not η0^5".into())?;
    let dense = PauliProduct::unit(vec![PauliFactor::letter(Pauli::Y).scaled(c(eta0, 0.0)); 5]).unwrap();
    ensure(hs.to_matrix().relative_distance(&dense.to_matrix()) < 1e-12, || "⊗η0σy mismatch".into())?;

    let m = model::example2(r, gamma).map_err(e)?;
    let stab = build_stabilizers(&m, CodeKind::Dfs).map_err(e)?;
    let hev = h_ev(&m, &stab.eigvals()[..1]).map_err(e)?;
    let v_hev = zeta_of_operator(&hev, m.hamiltonian().frobenius_norm().max(1.0), "H_ev").map_err(e)?;
    ensure(v_hev.coords().iter().all(|z| *z == c(0.0, 0.0)), || format!("v_Hev = {v_hev}"))?;
    for j in 1..=n {
        for l in 1..=3 {
            let f = symplectic_form(&v_hev, &s1, l, j).map_err(e)?;
            ensure(f == c(0.0, 0.0), || format!("<v_Hev, v_S1>_(ζ({l},{j})) = {f}"))?;
        }
    }
    Ok(format!("v_S1, v_S2, v_HS exact; ||H_ev||_F = {:.1e}; 15 forms zero", hev.frobenius_norm()))
}

fn three_qubit_sum() -> Outcome {
    let i = c(0.0, 1.0);
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let a =
        PauliProduct::unit(vec![PauliFactor::new(o, z, i, o), PauliFactor::new(o, o, -i, z), PauliFactor::identity()])
            .unwrap();
    let b = PauliProduct::unit(vec![PauliFactor::identity(), PauliFactor::identity(), PauliFactor::new(o, o, z, -i)])
        .unwrap();
    let va = zeta(&a).map_err(e)?;
    let vb = zeta(&b).map_err(e)?;
    ensure(va.coords() == [o, o, o, z, o, z, i, -i, z, o, z, z], || format!("v_A = {va}"))?;
    ensure(vb.coords() == [o, o, o, z, z, o, z, z, z, z, z, -i], || format!("v_B = {vb}"))?;
    let expected = [o, o, o, z, o, o, i, -i, z, o, z, -i];
    let sum = zeta_sum(&va, &vb).map_err(e)?;
    ensure(sum.coords() == expected, || format!("v_A +ζ v_B = {sum}"))?;
    let ab = PauliProduct::factorize(&a.to_matrix().checked_mul(&b.to_matrix()).map_err(e)?).map_err(e)?.unwrap();
    let dev = max_diff(zeta(&ab.with_unit_scale()).map_err(e)?.coords(), &expected);
    ensure(dev < 1e-12, || format!("ζ(AB) from the dense product deviates by {dev:e}"))?;
    Ok(format!("sum exact, dense ζ(AB) deviation {dev:.1e}"))
}

fn four_equivalence_example() -> Outcome {
    let cases = [
        ("XI", [0, 1, 1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0]),
        ("IZ", [1, 0, 0, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1]),
        // the listed -1 at coordinate 11 belongs at 13
        ("XZ", [0, 0, 1, 0, 0, 0, 0, 1], [0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0]),
    ];
    for (letters, z_want, v_expected) in cases {
        let zv = zeta_of_letters(letters);
        ensure(zv == ints(&z_want), || format!("ζ({letters}) = {zv:?}"))?;
        let v = vectorize(&PauliProduct::from_letters(letters).unwrap().to_matrix()).map_err(e)?;
        ensure(v.coords() == ints(&v_expected).as_slice(), || format!("vec({letters}) = {:?}", v.coords()))?;
    }
    // reference ζ(X⊗I)
    let want_za = ints(&[0, 1, 1, 0, 0, 0, 0, 0]);
    ensure(zeta_of_letters("XI") == want_za, || "ζ(X⊗I)".into())?;
    let a = PauliProduct::from_letters("XI").unwrap().to_matrix();
    let b = PauliProduct::from_letters("IZ").unwrap().to_matrix();
    let oracle = vectorize(&a.checked_mul(&b).map_err(e)?).map_err(e)?;
    let sum = vec_sum(&a, &vectorize(&b).map_err(e)?).map_err(e)?;
    let dev = max_diff(sum.coords(), oracle.coords());
    ensure(dev == 0.0, || format!("(A⊗I)vec(B) deviates by {dev:e}"))?;
    let listed_ab = ints(&[0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, -1, 0, 0, 0, 0]);
    let typo: Vec<usize> = (0..16).filter(|&k| listed_ab[k] != oracle.coords()[k]).collect();
    ensure(typo == [11, 13], || format!("listed vec(AB) differs at {typo:?}"))?;
    let eq = dfstab::vectorize::zeta_vec_equivalence(
        &PauliProduct::from_letters("XI").unwrap(),
        &PauliProduct::from_letters("IZ").unwrap(),
    )
    .map_err(e)?;
    ensure(eq.max_deviation == 0.0, || format!("ζ-to-vec deviation {:e}", eq.max_deviation))?;
    Ok("max deviation 0; listed vec(AB) differs only at coordinates 11/13".into())
}

fn five_homomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_z, mut worst_v): (f64, f64) = (0.0, 0.0);
    for k in 0..1000 {
        let n = 1 + k % 3;
        let (a, b) = commuting_pair(&mut rng, n);
        let sum = zeta_sum(&zeta(&a).map_err(e)?, &zeta(&b).map_err(e)?).map_err(e)?;
        let oracle = zeta_of_product(&a, &b);
        worst_z = worst_z.max(rel_diff(sum.coords(), oracle.coords()));
        let (am, bm) = (a.to_matrix(), b.to_matrix());
        let lhs = vec_sum(&am, &vectorize(&bm).map_err(e)?).map_err(e)?;
        let direct = vectorize(&am.checked_mul(&bm).map_err(e)?).map_err(e)?;
        worst_v = worst_v.max(rel_diff(lhs.coords(), direct.coords()));
        // the ζ sum must also reproduce the full tensor product
        let dense = vectorize(&dfstab::zeta::zeta_inverse(&sum).to_matrix()).map_err(e)?;
        let full = rel_diff(dense.coords(), direct.coords());
        worst_z = worst_z.max(full);
    }
    ensure(worst_z < 1e-12 && worst_v < 1e-12, || format!("ζ {worst_z:e}, vec {worst_v:e}"))?;
    Ok(format!("1000 pairs, ζ rel {worst_z:.1e}, vec rel {worst_v:.1e}"))
}

fn six_symplectic_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let n = 1 + k % 3;
        let (u, v, w) = (rand_zeta(&mut rng, n), rand_zeta(&mut rng, n), rand_zeta(&mut rng, n));
        let (al, be) = (rand_c(&mut rng), rand_c(&mut rng));
        let comb: Vec<C64> = u.coords().iter().zip(v.coords()).map(|(x, y)| al * x + be * y).collect();
        let comb = ZetaVector::from_coords(comb).unwrap();
        for j in 1..=n {
            for l in 1..=3 {
                let f = |x: &ZetaVector, y: &ZetaVector| symplectic_form(x, y, l, j).unwrap();
                worst = worst.max((f(&comb, &w) - (al * f(&u, &w) + be * f(&v, &w))).norm());
                worst = worst.max((f(&u, &w) + f(&w, &u)).norm());
                worst = worst.max(f(&u, &u).norm());
            }
        }
        let (a, b, cm) = (rand_dense(&mut rng, n), rand_dense(&mut rng, n), rand_dense(&mut rng, n));
        let g = |x: &OperatorMatrix, y: &OperatorMatrix| vec_symplectic(x, y).unwrap();
        let lin = &a.scale(al) + &b.scale(be);
        let scale = (1usize << n) as f64;
        worst = worst.max((g(&lin, &cm) - (al * g(&a, &cm) + be * g(&b, &cm))).norm() / scale);
        worst = worst.max((g(&a, &cm) + g(&cm, &a)).norm() / scale);
        worst = worst.max(g(&a, &a).norm() / scale);
    }
    ensure(worst < 1e-12, || format!("max axiom defect {worst:e}"))?;
    Ok(format!("500 triples, all ζ(l,j) and vec forms, max defect {worst:.1e}"))
}

fn seven_group_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let n = 1 + k % 3;
        let axes: Vec<[C64; 3]> = (0..n).map(|_| null_axis(&mut rng)).collect();
        let alphas: Vec<Vec<C64>> = (0..3).map(|_| (0..n).map(|_| rand_c(&mut rng)).collect()).collect();
        let [x, y, z] = [0, 1, 2].map(|i| null_member(&axes, &alphas[i]));
        let add = |p: &ZetaVector, q: &ZetaVector| zeta_sum(p, q).unwrap();
        // closure: the sum stays in the family with coefficient α + β
        let xy_alpha: Vec<C64> = alphas[0].iter().zip(&alphas[1]).map(|(p, q)| p + q).collect();
        worst = worst.max(rel_diff(add(&x, &y).coords(), null_member(&axes, &xy_alpha).coords()));
        worst = worst.max(rel_diff(add(&x, &y).coords(), add(&y, &x).coords()));
        worst = worst.max(rel_diff(add(&add(&x, &y), &z).coords(), add(&x, &add(&y, &z)).coords()));
        let id = ZetaVector::identity(n);
        worst = worst.max(rel_diff(add(&x, &id).coords(), x.coords()));
        worst = worst.max(rel_diff(add(&id, &x).coords(), x.coords()));
        let neg: Vec<C64> = alphas[0].iter().map(|a| -a).collect();
        let inv = null_member(&axes, &neg);
        worst = worst.max(rel_diff(add(&x, &inv).coords(), id.coords()));
    }
    ensure(worst < 1e-12, || format!("max group-axiom defect {worst:e}"))?;
    Ok(format!("500 null-family triples, max defect {worst:.1e}"))
}

fn hl_probe(m: &LindbladModel) -> Result<Ket, String> {
    let t7 = verify_theorem_7(m, CodeKind::Dfs).map_err(e)?;
    let ext = extreme_eigvecs(m.hamiltonian(), Some(&t7.code)).map_err(e)?;
    Ok(probe_state(&ext, 1).map_err(e)?.amplitudes)
}

fn purity_window(m: &LindbladModel, psi: &Ket, t: f64, dt: f64) -> Result<f64, String> {
    let rho = DensityMatrix::pure(psi).map_err(e)?;
    let opts = EvolveOptions { sample_every: 1, keep_states: false };
    let traj = evolve_with(m, &rho, t, dt, opts).map_err(e)?;
    Ok(traj.points.iter().map(|p| (p.purity - 1.0).abs()).fold(0.0, f64::max))
}

fn eight_dynamics() -> Outcome {
    let gamma = 1.0;
    let m = model::example_hl(0.5, gamma).map_err(e)?;
    let probe = hl_probe(&m)?;
    let rho = OperatorMatrix::outer(&probe, &probe).map_err(e)?;
    let d = dissipator(&m, &rho).map_err(e)?.frobenius_norm();
    ensure(d < 1e-12, || format!("||L_D(ρ_MaxMin)||_F = {d:e}"))?;
    let drift = purity_window(&m, &probe, 10.0 / gamma, 1e-3 / gamma)?;
    ensure(drift < 1e-6, || format!("probe purity drift {drift:e}"))?;
    // |01> alone is annihilated by the jump; mixing in |00> exposes it
    let control = ket(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let rho0 = DensityMatrix::pure(&control).map_err(e)?;
    let traj =
        evolve_with(&m, &rho0, 10.0 / gamma, 1e-3 / gamma, EvolveOptions { sample_every: 100, keep_states: false })
            .map_err(e)?;
    let low = traj.min_purity();
    ensure(low < 0.999, || format!("control purity stays at {low}"))?;
    Ok(format!("||L_D||_F {d:.1e}, probe drift {drift:.1e}, control min purity {low:.3}"))
}

fn nine_stabilizer_pipeline() -> Outcome {
    let cases: Vec<(&str, LindbladModel, bool)> = vec![
        ("example1", model::example1(1, 0.5, 1.0, 1).map_err(e)?, true),
        ("example2", model::example2(0.5, 1.0).map_err(e)?, true),
        ("example_hl", model::example_hl(0.5, 1.0).map_err(e)?, true),
        ("counter", model::counter_model(), false),
    ];
    let mut notes = Vec::new();
    for (name, m, expect) in cases {
        let r = verify_theorem_7(&m, CodeKind::Dfs).map_err(e)?;
        ensure(r.passed() == expect, || format!("{name}: passed = {}", r.passed()))?;
        ensure(r.consistent, || format!("{name}: algebraic and dynamical verdicts disagree"))?;
        if r.passed() {
            let rate = m.rate_scale();
            let mut drift: f64 = 0.0;
            let basis = r.code.basis_vectors();
            // first and last code vectors plus the uniform superposition
            let mut probes = vec![basis[0].clone(), basis[basis.len() - 1].clone()];
            probes.push(basis.iter().skip(1).fold(basis[0].clone(), |acc, v| acc + v));
            for psi in probes {
                let psi = &psi / C64::new(psi.norm(), 0.0);
                drift = drift.max(purity_window(&m, &psi, 10.0 / rate, 1e-2 / rate)?);
            }
            ensure(drift < 1e-6, || format!("{name}: purity drift {drift:e}"))?;
            notes.push(format!("{name} dim {} drift {drift:.0e}", r.code.dim()));
        } else {
            notes.push(format!("{name} negative"));
        }
    }
    Ok(notes.join(", "))
}

fn ten_standard_formalism() -> Outcome {
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let r = standard_formalism_roundtrip(&[a], &[b]).map_err(e)?;
        ensure(r.roundtrip_ok, || format!("X({})Z({}) roundtrip", a as u8, b as u8))?;
    }
    let xz = |a: bool, b: bool| {
        let x = if a { pauli_matrix(Pauli::X) } else { OperatorMatrix::identity(1) };
        let z = if b { pauli_matrix(Pauli::Z) } else { OperatorMatrix::identity(1) };
        x.checked_mul(&z).unwrap()
    };
    let as_matrix = |v: [i8; 4]| DMatrix::from_row_slice(2, 2, &v.map(|x| c(x as f64, 0.0)));
    let mut listed_wrong = 0;
    for case in 0..16u8 {
        let [a1, b1, a2, b2] = [case & 8 != 0, case & 4 != 0, case & 2 != 0, case & 1 != 0];
        ensure(as_matrix(xz_entries(a1, b1)) == *xz(a1, b1).matrix(), || format!("entries of X({a1})Z({b1})"))?;
        let product = xz(a1, b1).checked_mul(&xz(a2, b2)).unwrap();
        ensure(as_matrix(xz_composition(a1, b1, a2, b2)) == *product.matrix(), || {
            format!("composition case {case:04b}")
        })?;
        if as_matrix(listed_composition(a1, b1, a2, b2)) != *product.matrix() {
            listed_wrong += 1;
        }
    }
    Ok(format!("4 roundtrips, 16 compositions exact (listed entry formulas disagree in {listed_wrong}/16)"))
}

/// Alternative entry formulas, kept to report how many cases they miss.
fn listed_composition(a1: bool, b1: bool, a2: bool, b2: bool) -> [i8; 4] {
    let (a1, a2) = (a1 as i8, a2 as i8);
    let s1: i8 = if b1 { -1 } else { 1 };
    let s2: i8 = if b2 { -1 } else { 1 };
    [
        (1 - a1) * (1 - s1) + s1 * a2 * a1,
        (1 - a1) * s1 * s2 + (1 - s1) * s2 * a2 * a1,
        (1 - s1) * a1 + s1 * a2 * (1 - a1),
        a1 * s1 * s2 + (1 - s1) * s2 * (1 - a1) * a2,
    ]
}

fn eleven_heisenberg() -> Outcome {
    let m = model::example_hl(0.5, 1.0).map_err(e)?;
    let report = dfstab::run_protocol(&m, 4).map_err(e)?;
    ensure(report.hl_achievable, || format!("hl_achievable = false ({:?})", report.reason))?;
    let q1 = report.rows[0].qfi;
    let gap = report.extremes.lambda_max - report.extremes.lambda_min;
    let mut worst: f64 = 0.0;
    for row in &report.rows {
        let n = row.n as f64;
        worst = worst.max((row.qfi / q1 - n * n).abs() / (n * n));
        let bound = 1.0 / (n * gap);
        worst = worst.max((1.0 / row.qfi.sqrt() - bound).abs() / bound);
        worst = worst.max((row.bound - bound).abs() / bound);
    }
    ensure(worst < 1e-9, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("n = 1..4, qfi(1) = {q1:.4}, max relative deviation {worst:.1e}"))
}

fn twelve_rk4_order() -> Outcome {
    let m = model::example1(1, 0.5, 1.0, 1).map_err(e)?;
    let psi = ket(&[c(1.0, 0.0), c(0.0, 1.0)]);
    let rho0 = DensityMatrix::pure(&psi).map_err(e)?;
    let t = 1.0;
    let exact = exact_evolution(&m, rho0.as_operator().matrix(), t);
    let err = |dt: f64| -> Result<f64, String> {
        let traj =
            evolve_with(&m, &rho0, t, dt, EvolveOptions { sample_every: usize::MAX, keep_states: false }).map_err(e)?;
        Ok((traj.final_state.matrix() - &exact).norm())
    };
    let dt = 0.02;
    let (e1, e2) = (err(dt)?, err(dt / 2.0)?);
    let ratio = e1 / e2;
    ensure((12.0..=20.0).contains(&ratio), || format!("error ratio {ratio} ({e1:e} -> {e2:e})"))?;
    Ok(format!("dt {dt} -> {}: error {e1:.2e} -> {e2:.2e}, ratio {ratio:.2}", dt / 2.0))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("single-block spectrum", one_spectrum),
        ("five-qubit ζ vectors and forms", two_five_qubit_vectors),
        ("three-qubit ζ sum", three_qubit_sum),
        ("ζ/vec equivalence example", four_equivalence_example),
        ("homomorphism on commuting pairs", five_homomorphism),
        ("symplectic form axioms", six_symplectic_axioms),
        ("group axioms", seven_group_axioms),
        ("dynamics certification", eight_dynamics),
        ("stabilizer pipeline verdicts", nine_stabilizer_pipeline),
        ("standard formalism recovery", ten_standard_formalism),
        ("Heisenberg scaling", eleven_heisenberg),
        ("RK4 convergence order", twelve_rk4_order),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
