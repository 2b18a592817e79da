mod common;

use common::{max_abs, random_density, rng};
use dirac_lindblad::coarse_grain::{
    chi_from_kraus, first_order_kraus, interaction_kraus, kraus_from_unitary, model_lamb_shift,
    orthogonal_from, osr_apply, rebased_basis, validate_fixed_basis_osr, ExactModel, ModelParams,
};
use dirac_lindblad::fock::{annihilation, coherent_state, hs_basis, partial_trace, DensityMatrix};
use dirac_lindblad::linalg::{self, c, I};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

#[test]
fn osr_matches_partial_trace() {
    let p = ModelParams::from_frequencies(1.0, 3.0, 0.8, 0.5, 1.5, (5, 8)).unwrap();
    let model = ExactModel::new(&p).unwrap();
    let mut r = rng(11);
    for _ in 0..5 {
        let t = r.gen_range(0.0..4.0);
        let rho = random_density(&mut r, 5);
        let k = kraus_from_unitary(&model.unitary(t), model.bath_state()).unwrap();
        assert!(k.completeness_residual() < 1e-10);
        let osr = osr_apply(&k, &rho).unwrap();
        // Independent path: explicit joint evolution and trace.
        let u = model.unitary(t);
        let joint = &u * rho.as_op().kronecker(model.bath_state().as_op()) * u.adjoint();
        let direct = partial_trace(&joint, &[5, 8], &[0]).unwrap();
        assert!(max_abs(&(osr.as_op() - direct)) < 1e-10);
    }
}

#[test]
fn chi_is_hermitian_psd_and_reconstructs() {
    let p = ModelParams::from_frequencies(1.0, 2.0, 0.5, 0.5, 2.0, (4, 8)).unwrap();
    let model = ExactModel::new(&p).unwrap();
    let basis = hs_basis(4);
    let mut r = rng(3);
    let k = kraus_from_unitary(&model.unitary(1.3), model.bath_state()).unwrap();
    let chi = chi_from_kraus(&k, &basis, 1.3).unwrap();
    assert!(linalg::hermiticity_residual(&chi.chi) < 1e-12);
    assert!(linalg::min_eigenvalue(&chi.chi) > -1e-8);
    assert!((chi.chi.trace() - c(4.0)).norm() < 1e-10);
    for _ in 0..5 {
        let rho = random_density(&mut r, 4);
        let a = chi.apply(rho.as_op(), &basis);
        let b = k.apply(rho.as_op());
        assert!(max_abs(&(a - b)) < 1e-9);
    }
}

#[test]
fn first_order_kraus_agrees_to_second_order() {
    // Difference between exact interaction-picture Kraus coefficients and the
    // first-order ones scales as κ².
    let base = ModelParams::from_frequencies(1.0, 4.0, 0.2, 0.5, 3.0, (4, 10)).unwrap();
    let t = 0.7;
    let err = |s: f64| {
        let p = base.with_kappa_scaled(s);
        let model = ExactModel::new(&p).unwrap();
        let exact = interaction_kraus(&model, t).unwrap();
        let basis = hs_basis(4);
        let fo = first_order_kraus(&p, t, 0.1).unwrap();
        let mut worst: f64 = 0.0;
        for (i, op) in exact.ops.iter().enumerate() {
            assert_eq!(exact.labels[i], fo.labels[i]);
            for (al, s_al) in basis.iter().enumerate() {
                let e = linalg::hs_inner(s_al, op);
                worst = worst.max((e - fo.b_full[(i, al)]).norm());
            }
        }
        (worst, fo.weak)
    };
    let (e1, weak1) = err(1.0);
    let (e2, _) = err(0.5);
    let (e4, weak4) = err(0.25);
    assert!(weak1 && weak4);
    let r1 = e1 / e2;
    let r2 = e2 / e4;
    assert!(r1 > 3.0 && r1 < 5.0, "ratio {r1}");
    assert!(r2 > 3.0 && r2 < 5.0, "ratio {r2}");
}

#[test]
fn lamb_shift_of_displaced_bath_matches_direct_formula() {
    let p = ModelParams::from_frequencies(1.0, 5.0, 0.6, 0.4, 1.0, (4, 12)).unwrap();
    let beta_b = Complex64::new(0.5, 0.3);
    let bath = DensityMatrix::pure(&coherent_state(12, beta_b)).unwrap();
    let h = model_lamb_shift(&p, &bath).unwrap();
    assert!(linalg::hermiticity_residual(&h) < 1e-14);
    assert!(max_abs(&h) > 1e-4);
    // χ̇₁₀ = −iκ[⟨b⟩Γ(−ω₀−ω_B) + ⟨b†⟩Γ(−ω₀+ω_B)], χ̇₂₀ its a† counterpart.
    let (w0, wb, tau, k) = (p.omega0(), p.omega_b(), p.tau, p.kappa());
    let b = annihilation(12);
    let mb = bath.expect(&b);
    let mbd = bath.expect(&b.adjoint());
    let g = |w: f64| common::gamma_quad(w, tau);
    let c1 = -I * k * (mb * g(-w0 - wb) + mbd * g(-w0 + wb));
    let c2 = -I * k * (mb * g(w0 - wb) + mbd * g(w0 + wb));
    let a = annihilation(4);
    let ad = a.adjoint();
    let expect = ((&a * c1 - &ad * c1.conj()) + (&ad * c2 - &a * c2.conj())) * (I * 0.5);
    assert!(max_abs(&(h - expect)) < 1e-10);
}

#[test]
fn fixed_basis_identity_holds_and_is_basis_independent() {
    let p = ModelParams::from_frequencies(1.0, 3.0, 0.5, 0.5, 2.0, (3, 8)).unwrap();
    let mut r = rng(5);
    let rho = random_density(&mut r, 3);
    let basis = hs_basis(3);
    let times = [0.4, 1.1, 2.5];
    let rep = validate_fixed_basis_osr(&p, &rho, &times, 1e-4, &basis).unwrap();
    assert!(rep.max_residual() < 1e-6, "{:?}", rep.residuals);
    assert!(rep.max_fd_residual() < 1e-6, "{:?}", rep.fd_residuals);
    let m = DMatrix::from_fn(8, 8, |_, _| r.gen_range(-1.0..1.0));
    let rb = rebased_basis(&basis, &orthogonal_from(&m)).unwrap();
    let rep2 = validate_fixed_basis_osr(&p, &rho, &times, 1e-4, &rb).unwrap();
    assert!(rep2.max_residual() < 1e-6, "{:?}", rep2.residuals);
}

#[test]
fn truncation_breach_suggests_doubling() {
    let p = ModelParams::from_frequencies(1.0, 2.0, 0.5, 0.5, 2.0, (3, 8)).unwrap();
    let rho = DensityMatrix::maximally_mixed(3);
    match dirac_lindblad::coarse_grain::exact_reduced_dynamics(&p, &rho, 1.0) {
        Err(dirac_lindblad::Error::TruncationBreach { suggested_dim, .. }) => assert_eq!(suggested_dim, 6),
        other => panic!("expected breach, got {other:?}"),
    }
}
