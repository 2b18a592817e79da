//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use dirac_lindblad::coarse_grain::{
    chi_from_kraus, coarse_grained_generator, dissipation_limit, dissipation_matrix_model,
    gamma_sinc, kraus_from_unitary, limit_dissipation_matrix, limit_entries, markov_comparison,
    model_lamb_shift, osr_apply, ExactModel, GammaForm, ModelParams,
};
use dirac_lindblad::correspondence::{
    solve_coefficients, verify_synthetic, FactorConvention, DEFAULT_INTERIOR_EXCLUDE,
};
use dirac_lindblad::fock::{
    annihilation, fock_state, hs_basis, number, partial_trace, thermal_state, DensityMatrix,
};
use dirac_lindblad::lindblad::{
    build_generator, evolve_master, to_lindblad_form, DissipationMatrix, EvolveOptions, Generator,
    LindbladForm, LindbladGenerator,
};
use dirac_lindblad::linalg::{self, c, Operator};
use dirac_lindblad::poly_mech::{
    affine_bracket, consistency_chain, dirac_bracket, poisson_bracket, AffineConstraint,
    ConstraintSystem, Multiplier, PhaseLayout, PolyObservable,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_density(r: &mut impl Rng, dim: usize) -> DensityMatrix {
    let g = Operator::from_fn(dim, dim, |_, _| {
        Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    DensityMatrix::new(rho / tr).unwrap()
}

// ---------- 1. Dirac algebra ----------

fn monomials() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..=2u32 {
        for b in 0..=2 - a {
            for c in 0..=2 - a - b {
                for d in 0..=2 - a - b - c {
                    out.push(vec![a, b, c, d]);
                }
            }
        }
    }
    out
}

fn random_poly(r: &mut impl Rng, l: &Arc<PhaseLayout>) -> PolyObservable {
    PolyObservable::from_terms(
        l,
        monomials()
            .into_iter()
            .map(|e| (e, r.gen_range(-4i32..=4) as f64))
            .filter(|(_, c)| *c != 0.0),
    )
    .unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let l = PhaseLayout::new(2).unwrap();
    let mut r = rng(101);
    let br = |a: &PolyObservable, b: &PolyObservable| poisson_bracket(a, b).unwrap();
    let mut failures = 0;
    let mut cases = 0;
    while cases < 200 {
        let (a, b, cc) = (random_poly(&mut r, &l), random_poly(&mut r, &l), random_poly(&mut r, &l));
        if br(&a, &b) != -&br(&b, &a) {
            failures += 1;
        }
        let leib = &(&br(&a, &b) * &cc) + &(&b * &br(&a, &cc));
        if br(&a, &(&b * &cc)) != leib {
            failures += 1;
        }
        let jac = &(&br(&a, &br(&b, &cc)) + &br(&b, &br(&cc, &a))) + &br(&cc, &br(&a, &b));
        if !jac.is_zero() {
            failures += 1;
        }
        let f: Vec<f64> = (0..4).map(|_| r.gen_range(-4i32..=4) as f64).collect();
        let g: Vec<f64> = (0..4).map(|_| r.gen_range(-4i32..=4) as f64).collect();
        let (Ok(f), Ok(g)) = (
            AffineConstraint::new(f, r.gen_range(-3i32..=3) as f64),
            AffineConstraint::new(g, r.gen_range(-3i32..=3) as f64),
        ) else {
            continue;
        };
        if affine_bracket(&f, &g).abs() < 0.5 {
            continue;
        }
        let cs = ConstraintSystem::classify(PolyObservable::zero(&l), vec![f.clone(), g.clone()], vec![])
            .unwrap();
        for phi in [&f, &g] {
            if !dirac_bracket(&phi.to_poly(&l).unwrap(), &a, &cs).unwrap().is_zero() {
                failures += 1;
            }
        }
        cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        failures == 0 && secs < 5.0,
        format!("{cases} cases, {failures} violations, {secs:.2} s"),
    )
}

// ---------- 2. Constraint chain ----------

fn criterion_2() -> Outcome {
    let l = PhaseLayout::new(2).unwrap();
    let mut r = rng(202);
    let (mut worst_cos, mut worst_c, mut worst_lambda): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let (al, be, ga, de) = (
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
        );
        let k1: f64 = r.gen_range(0.5..3.0);
        let k2: f64 = r.gen_range(0.5..3.0);
        let kp = r.gen_range(-0.9..0.9) * (k1 * k2).sqrt();
        let h = PolyObservable::from_terms(
            &l,
            [
                (vec![0, 0, 2, 0], 0.5),
                (vec![2, 0, 0, 0], 0.5 * k1),
                (vec![0, 0, 0, 2], 0.5),
                (vec![0, 2, 0, 0], 0.5 * k2),
                (vec![1, 1, 0, 0], -kp),
            ],
        )
        .unwrap();
        let phi1 = AffineConstraint::new(vec![al, ga, be, de], 0.0).unwrap();
        let cs = consistency_chain(&h, &[phi1]).map_err(|e| e.to_string())?;
        if cs.secondaries.len() != 1 {
            return Err(format!("{} secondaries", cs.secondaries.len()));
        }
        // Hand-derived secondary (x1, x2, p1, p2 order).
        let phi2 = AffineConstraint::new(vec![be * k1 - de * kp, de * k2 - be * kp, -al, -ga], 0.0)
            .unwrap();
        worst_cos = worst_cos.max((cs.secondaries[0].cosine(&phi2).abs() - 1.0).abs());
        let eta = al * al + ga * ga + k1 * be * be + k2 * de * de - 2.0 * kp * be * de;
        worst_c = worst_c.max((cs.c_matrix[(0, 1)].abs() - eta.abs()).abs());
        let Multiplier::Solved(lam) = &cs.multipliers[0] else {
            return Err("multiplier left undetermined".into());
        };
        let num = [kp * ga - k1 * al, kp * al - k2 * ga, kp * de - k1 * be, kp * be - k2 * de];
        let z: Vec<f64> = (0..4).map(|_| r.gen_range(-1.0..1.0)).collect();
        let expect: f64 = num.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / eta;
        worst_lambda = worst_lambda.max((lam.eval(&z) - expect).abs() / (1.0 + expect.abs()));
    }
    check(
        worst_cos < 1e-12 && worst_c < 1e-12 && worst_lambda < 1e-9,
        format!("max |cos|-1 {worst_cos:.1e}, max ||C|-|eta|| {worst_c:.1e}, lambda rel err {worst_lambda:.1e}"),
    )
}

// ---------- 3. Γ closed form vs quadrature ----------

fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64) -> Complex64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn gamma_quad(omega: f64, tau: f64) -> Complex64 {
    let f = |t: f64| Complex64::new(0.0, omega * t).exp();
    simpson(&f, 0.0, tau, 1e-14 * tau.max(1.0)) / tau
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let omegas = [0.0, 1e-12, 1e-7, 1e-3, 0.5, -1.7, 4.0, 20.0, -60.0, 150.0];
    let taus = [1e-3, 0.05, 0.3, 1.0, 4.0];
    let mut worst: f64 = 0.0;
    for &w in &omegas {
        for &t in &taus {
            worst = worst.max((gamma_sinc(w, t) - gamma_quad(w, t)).norm());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-10 && secs < 2.0,
        format!("{} points, max error {worst:.1e}, {secs:.2} s", omegas.len() * taus.len()),
    )
}

// ---------- 4. γ regime ----------

fn criterion_4() -> Outcome {
    let p = ModelParams::from_frequencies(1.0, 100.0, 5.0, 0.01, 1.0, (6, 4)).unwrap();
    let rep = dissipation_limit(&p).map_err(|e| e.to_string())?;
    let m = dissipation_matrix_model(&p).map_err(|e| e.to_string())?;
    let herm = linalg::hermiticity_residual(m.matrix.gamma());
    check(
        rep.mismatch < 1e-2 && rep.limit_vs_model < 1e-2 && herm < 1e-12,
        format!(
            "|g11-g22|/g11 {:.2e}, limit vs model {:.2e}, hermiticity {herm:.1e}",
            rep.mismatch, rep.limit_vs_model
        ),
    )
}

// ---------- 5. Kraus OSR ----------

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (ns, nb) = (12, 12);
    let p = ModelParams::from_frequencies(1.0, 3.0, 0.8, 0.5, 2.0, (ns, nb)).unwrap();
    let model = ExactModel::new(&p).map_err(|e| e.to_string())?;
    let mut r = rng(505);
    let (mut comp, mut gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let t = r.gen_range(0.0..5.0);
        let u = model.unitary(t);
        let k = kraus_from_unitary(&u, model.bath_state()).map_err(|e| e.to_string())?;
        comp = comp.max(k.completeness_residual());
        let rho = random_density(&mut r, ns);
        let osr = osr_apply(&k, &rho).map_err(|e| e.to_string())?;
        let joint = &u * rho.as_op().kronecker(model.bath_state().as_op()) * u.adjoint();
        let direct = partial_trace(&joint, &[ns, nb], &[0]).unwrap();
        gap = gap.max(linalg::max_abs(&(osr.as_op() - direct)));
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        comp < 1e-10 && gap < 1e-10 && secs < 60.0,
        format!("completeness {comp:.1e}, OSR vs partial trace {gap:.1e}, {secs:.1} s"),
    )
}

// ---------- 6. χ matrix ----------

fn criterion_6() -> Outcome {
    let ns = 6;
    let p = ModelParams::from_frequencies(1.0, 2.0, 0.6, 0.5, 2.0, (ns, 10)).unwrap();
    let model = ExactModel::new(&p).map_err(|e| e.to_string())?;
    let basis = hs_basis(ns);
    let mut r = rng(606);
    let (mut herm, mut min_eig, mut recon): (f64, f64, f64) = (0.0, f64::INFINITY, 0.0);
    for &t in &[0.4, 1.3, 3.1] {
        let k = kraus_from_unitary(&model.unitary(t), model.bath_state()).map_err(|e| e.to_string())?;
        let chi = chi_from_kraus(&k, &basis, t).map_err(|e| e.to_string())?;
        herm = herm.max(linalg::hermiticity_residual(&chi.chi));
        min_eig = min_eig.min(linalg::min_eigenvalue(&chi.chi));
        for _ in 0..5 {
            let rho = random_density(&mut r, ns);
            recon = recon.max(linalg::max_abs(&(chi.apply(rho.as_op(), &basis) - k.apply(rho.as_op()))));
        }
    }
    check(
        herm < 1e-12 && min_eig >= -1e-8 && recon < 1e-9,
        format!("hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}, reconstruction {recon:.1e}"),
    )
}

// ---------- 7. Lamb shift ----------

fn criterion_7() -> Outcome {
    let mut worst: f64 = 0.0;
    let temps = [0.5, 1.0, 2.0, 5.0, 20.0];
    for &b in &temps {
        let p = ModelParams::from_frequencies(1.0, 3.0, 0.8, 0.5, b, (6, 40)).unwrap();
        let bath = thermal_state(&p.joint_spec(), 1, p.inv_temp()).map_err(|e| e.to_string())?;
        let h = model_lamb_shift(&p, &bath).map_err(|e| e.to_string())?;
        worst = worst.max(linalg::operator_norm(&h));
    }
    check(worst < 1e-12, format!("max ||H_LS|| {worst:.1e} over {} temperatures", temps.len()))
}

// ---------- 8. Lindblad diagonalization ----------

fn criterion_8() -> Outcome {
    let p = ModelParams::from_frequencies(1.0, 100.0, 5.0, 0.01, 1.0, (8, 4)).unwrap();
    let g = limit_entries(&p);
    let g11 = g.g11.re;
    let dm = limit_dissipation_matrix(&p).map_err(|e| e.to_string())?;
    let form = to_lindblad_form(&dm).map_err(|e| e.to_string())?;
    let target = DMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0 * g11), c(0.0)]));
    let diag = linalg::max_abs(&(form.u.adjoint() * dm.gamma() * &form.u - target)) / g11;

    // Displayed forms: L₁ = (e^{iω₀τ}a + a†)/√2, L₂ = (−e^{iω₀τ}a + a†)/√2.
    let ph = Complex64::from_polar(1.0, p.omega0() * p.tau);
    let a = annihilation(8);
    let ad = a.adjoint();
    let s = c(std::f64::consts::FRAC_1_SQRT_2);
    let l1 = (&a * ph + &ad) * s;
    let l2 = (&ad - &a * ph) * s;
    let displayed = LindbladForm {
        rates: vec![2.0 * g11, 0.0],
        jump_ops: vec![l1, l2],
        u: Operator::identity(2, 2),
    };
    let h = number(8);
    let extracted = LindbladGenerator::new(&h, form).map_err(|e| e.to_string())?;
    let shown = LindbladGenerator::new(&h, displayed).map_err(|e| e.to_string())?;
    let gks = build_generator(&h, None, dm).map_err(|e| e.to_string())?;
    let mut r = rng(808);
    let mut gap: f64 = 0.0;
    for _ in 0..5 {
        let rho = random_density(&mut r, 8);
        let x = gks.apply(rho.as_op());
        let scale = linalg::max_abs(&x).max(1.0);
        gap = gap.max(linalg::max_abs(&(shown.apply(rho.as_op()) - &x)) / scale);
        gap = gap.max(linalg::max_abs(&(extracted.apply(rho.as_op()) - &x)) / scale);
    }
    check(
        diag < 1e-10 && gap < 1e-10,
        format!("u†γu vs diag(2g11, 0) {diag:.1e} (relative), generator gap {gap:.1e}"),
    )
}

// ---------- 9. Synthetic correspondence ----------

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let p = ModelParams::from_frequencies(1.0, 10.0, 2.0, 1.0, 1.0, (16, 4)).unwrap();
    let mut worst: f64 = 0.0;
    for alpha in [-1.2, 0.3, 0.7, 2.5] {
        let rep = verify_synthetic(&p, alpha, DEFAULT_INTERIOR_EXCLUDE).map_err(|e| e.to_string())?;
        let ops = rep.operators.ok_or("no operator comparison")?;
        worst = worst.max(ops.interior_gap);
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-9 && secs < 5.0,
        format!("N_S = 16, exclude {DEFAULT_INTERIOR_EXCLUDE}, max interior gap {worst:.1e}, {secs:.2} s"),
    )
}

// ---------- 10. c5·c6 = c7² ----------

fn criterion_10() -> Outcome {
    let mut r = rng(1010);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let w0 = r.gen_range(0.5..2.0);
        let wb = r.gen_range(5.0..100.0);
        let kp = r.gen_range(0.05..0.9) * w0 * wb;
        let tau = r.gen_range(0.01..2.0);
        let p = ModelParams::from_frequencies(w0, wb, kp, tau, r.gen_range(0.5..3.0), (4, 4)).unwrap();
        let sol = solve_coefficients(&p).map_err(|e| e.to_string())?;
        let alpha = sol.best().and_then(|i| sol.candidates[i].alpha);
        worst = worst.max(sol.identity_residual(alpha));
    }
    check(worst < 1e-10, format!("50 points, max residual {worst:.1e}"))
}

// ---------- 11. lind_dissi factor ----------

fn criterion_11() -> Outcome {
    let p = ModelParams::from_frequencies(1.0, 10.0, 2.0, 1.0, 1.0, (16, 4)).unwrap();
    let rep = verify_synthetic(&p, 0.7, DEFAULT_INTERIOR_EXCLUDE).map_err(|e| e.to_string())?;
    let ld = rep.lind_dissi.ok_or("no lind_dissi report")?;
    let two = ld.residual_two < 1e-8;
    let one = ld.residual_one < 1e-8;
    let named = match (two, one) {
        (true, false) => Some(FactorConvention::InverseTwoGamma11Eta),
        (false, true) => Some(FactorConvention::InverseGamma11Eta),
        _ => None,
    };
    check(
        named.is_some() && named == Some(ld.preferred),
        format!(
            "1/(2 g11 eta) residual {:.1e}, 1/(g11 eta) residual {:.1e}, report names {}",
            ld.residual_two,
            ld.residual_one,
            ld.preferred.name()
        ),
    )
}

// ---------- 12. Master-equation integrity ----------

fn criterion_12() -> Outcome {
    let p = ModelParams::from_frequencies(1.0, 10.0, 2.0, 1.0, 1.0, (8, 4)).unwrap();
    let gen = coarse_grained_generator(&p, GammaForm::Model).map_err(|e| e.to_string())?;
    let rho0 = random_density(&mut rng(1212), 8);
    let tr = evolve_master(&gen, &rho0, 10.0, 1e-3, &EvolveOptions::default())
        .map_err(|e| e.to_string())?;
    let steps = tr.times.len() - 1;
    let trace = tr.monitors.iter().map(|m| (m.trace - 1.0).abs()).fold(0.0, f64::max);
    let herm = tr.monitors.iter().map(|m| m.hermiticity).fold(0.0, f64::max);
    let min_eig = tr.monitors.iter().map(|m| m.min_eigenvalue).fold(f64::INFINITY, f64::min);

    let (dim, rate) = (6, 0.4);
    let dm = DissipationMatrix::new(Operator::from_element(1, 1, c(rate)), vec![annihilation(dim)])
        .unwrap();
    let damp = build_generator(&number(dim), None, dm).unwrap();
    let start = DensityMatrix::pure(&fock_state(dim, 3).unwrap()).unwrap();
    let dt = 1e-3;
    let t2 = evolve_master(&damp, &start, 10.0, dt, &EvolveOptions { sample_every: 100, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let n_op = number(dim);
    let decay = t2
        .times
        .iter()
        .zip(&t2.states)
        .map(|(t, rho)| ((rho * &n_op).trace().re - 3.0 * (-rate * t).exp()).abs())
        .fold(0.0, f64::max);
    check(
        steps >= 10_000 && trace < 1e-9 && herm < 1e-10 && min_eig >= -1e-8 && decay < 1e-6,
        format!(
            "{steps} steps: trace drift {trace:.1e}, hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}; damping error {decay:.1e}"
        ),
    )
}

// ---------- 13. Markov limit ----------

fn criterion_13() -> Outcome {
    let base = ModelParams::from_frequencies(1.0, 10.0, 2.0, 1.0, 1.0, (6, 6)).unwrap();
    let psi = DVector::from_fn(6, |i, _| if i < 2 { c(std::f64::consts::FRAC_1_SQRT_2) } else { c(0.0) });
    let rho0 = DensityMatrix::pure(&psi).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for (form, name) in [
        (GammaForm::Model, "model"),
        (GammaForm::Limit, "limit"),
        (GammaForm::FirstOrder, "first_order"),
    ] {
        let d: Vec<f64> = [1.0, 0.5, 0.25]
            .iter()
            .map(|&s| {
                markov_comparison(&base.with_kappa_scaled(s), &rho0, form, 10.0, 0.01, 10)
                    .map(|m| m.max_distance())
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        // The criterion is asserted on the model form; the others are reported.
        if form == GammaForm::Model {
            ok &= d[0] > d[1] && d[1] > d[2];
        }
        lines.push(format!("{name} [{:.2e}, {:.2e}, {:.2e}]", d[0], d[1], d[2]));
    }
    check(ok, format!("max trace distance at kappa, kappa/2, kappa/4: {}", lines.join("; ")))
}

// ---------- 14. CLI determinism and exit codes ----------

fn criterion_14() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut compared = 0;
    for name in common::EXAMPLES {
        for cmd in common::commands_for(name) {
            let a = tmp.path().join(format!("{name}-{cmd}-a"));
            let b = tmp.path().join(format!("{name}-{cmd}-b"));
            for out in [&a, &b] {
                let r = common::dlcorr(&[cmd, "--config", common::config(name).to_str().unwrap()], out);
                if r.code != 0 {
                    return Err(format!("{cmd} {name} exited {}: {}", r.code, r.stderr));
                }
            }
            for entry in std::fs::read_dir(&a).map_err(|e| e.to_string())? {
                let p = entry.map_err(|e| e.to_string())?.path();
                let q = b.join(p.file_name().unwrap());
                if std::fs::read(&p).ok() != std::fs::read(&q).ok() {
                    return Err(format!("{cmd} {name}: {} differs between runs", p.display()));
                }
                compared += 1;
            }
        }
    }
    let cases = [
        ("constraints", "failures/inconsistent.json", 3),
        ("gamma", "failures/unknown_field.json", 2),
        ("gamma", "failures/unstable_coupling.json", 2),
        ("evolve", "failures/truncation.json", 4),
        ("evolve", "failures/monitor.json", 4),
    ];
    let out = tmp.path().join("failures");
    for (cmd, cfg, code) in cases {
        let r = common::dlcorr(&[cmd, "--config", common::config(cfg).to_str().unwrap()], Path::new(&out));
        if r.code != code {
            return Err(format!("{cmd} {cfg}: exit {} (expected {code})", r.code));
        }
    }
    Ok(format!("{compared} output files byte-identical across runs; {} failure configs hit their exit codes", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("Dirac algebra suite", criterion_1),
        ("constraint-chain reproduction", criterion_2),
        ("Gamma-function oracle", criterion_3),
        ("gamma-matrix regime check", criterion_4),
        ("Kraus/OSR equivalence", criterion_5),
        ("chi-matrix properties", criterion_6),
        ("Lamb shift for thermal baths", criterion_7),
        ("Lindblad diagonalization", criterion_8),
        ("synthetic correspondence", criterion_9),
        ("product identity c5*c6 = c7^2", criterion_10),
        ("jump-operator factor convention", criterion_11),
        ("master-equation integrity", criterion_12),
        ("Markovian-limit trend", criterion_13),
        ("CLI determinism and exit codes", criterion_14),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
