use std::path::PathBuf;

use dirac_lindblad::coarse_grain::{coarse_grained_generator, ExactModel, ModelParams};
use dirac_lindblad::fock::{coherent_state, fock_state, number, DensityMatrix};
use dirac_lindblad::lindblad::{evolve_master, monitor_invariants, EvolveOptions};
use dirac_lindblad::linalg::{self, Operator};
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, InitialState, TimeGrid};
use crate::error::{CliError, CliResult};
use crate::output::{write_text, Csv};

pub const COLUMNS: [&str; 7] = [
    "t",
    "trace",
    "purity",
    "mean_n",
    "min_eigenvalue",
    "trace_distance",
    "exact_mean_n",
];

pub fn initial_state(spec: &InitialState, dim: usize) -> CliResult<DensityMatrix> {
    let psi = match spec {
        InitialState::Fock { n } => fock_state(dim, *n).map_err(|e| CliError::config(e.to_string()))?,
        InitialState::Coherent { re, im } => coherent_state(dim, Complex64::new(*re, *im)),
        InitialState::Superposition { amplitudes } => {
            if amplitudes.is_empty() || amplitudes.len() > dim {
                return Err(CliError::config(format!(
                    "superposition needs 1..={dim} amplitudes, got {}",
                    amplitudes.len()
                )));
            }
            let mut v = DVector::zeros(dim);
            for (i, [re, im]) in amplitudes.iter().enumerate() {
                v[i] = Complex64::new(*re, *im);
            }
            let norm = v.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(CliError::config("superposition amplitudes have zero norm"));
            }
            v / Complex64::new(norm, 0.0)
        }
    };
    Ok(DensityMatrix::pure(&psi)?)
}

/// Sample times matching the master-equation integrator.
fn sample_times(tg: &TimeGrid) -> Vec<f64> {
    let steps = (tg.t_final / tg.dt).round() as usize;
    let every = tg.sample_every.max(1);
    std::iter::once(0.0)
        .chain((1..=steps).filter(|k| k % every == 0 || *k == steps).map(|k| k as f64 * tg.dt))
        .collect()
}

fn row_for(t: f64, rho: &Operator, exact: Option<&Operator>, num_op: &Operator, primary_is_exact: bool) -> Vec<f64> {
    let m = monitor_invariants(rho);
    let mean_n = (rho * num_op).trace().re;
    let (dist, exact_n) = match exact {
        Some(e) if !primary_is_exact => (
            linalg::trace_distance(&linalg::hermitian_part(rho), &linalg::hermitian_part(e)),
            (e * num_op).trace().re,
        ),
        Some(_) => (f64::NAN, mean_n),
        None => (f64::NAN, f64::NAN),
    };
    vec![t, m.trace, m.purity, mean_n, m.min_eigenvalue, dist, exact_n]
}

fn run_point(cfg: &ExperimentConfig, p: &ModelParams, tg: &TimeGrid) -> CliResult<Vec<Vec<f64>>> {
    let ev = &cfg.evolve;
    let rho0 = initial_state(&ev.initial_state, p.fock_dims.0)?;
    let num_op = number(p.fock_dims.0);
    let exact = if ev.exact {
        let model = ExactModel::new(p)?;
        model.check_truncation(&rho0, tg.t_final)?;
        Some(model)
    } else {
        None
    };
    let mut rows = Vec::new();
    if ev.lindblad {
        let gen = coarse_grained_generator(p, ev.gamma_form.form())?;
        let opts = EvolveOptions {
            sample_every: tg.sample_every,
            limits: cfg.tolerances.limits(),
        };
        let traj = evolve_master(&gen, &rho0, tg.t_final, tg.dt, &opts)?;
        for (t, rho) in traj.times.iter().zip(&traj.states) {
            let e = exact.as_ref().map(|m| m.reduced_state(&rho0, *t)).transpose()?;
            rows.push(row_for(*t, rho, e.as_ref(), &num_op, false));
        }
    } else {
        let model = exact.as_ref().expect("validated: one path enabled");
        for t in sample_times(tg) {
            let e = model.reduced_state(&rho0, t)?;
            rows.push(row_for(t, &e, Some(&e), &num_op, true));
        }
    }
    Ok(rows)
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let tg = cfg
        .time_grid
        .ok_or_else(|| CliError::config("evolve needs a time_grid section"))?;
    if !cfg.evolve.lindblad && !cfg.evolve.exact {
        return Err(CliError::config("evolve has both lindblad and exact disabled"));
    }
    let points = cfg.sweep_points()?;
    let results: Vec<CliResult<Vec<Vec<f64>>>> =
        points.par_iter().map(|(_, p)| run_point(cfg, p, &tg)).collect();
    let mut header: Vec<&str> = Vec::new();
    if let Some(s) = &cfg.sweep {
        header.push(s.name.name());
    }
    header.extend(COLUMNS);
    let mut csv = Csv::new(&header);
    for ((v, _), rows) in points.iter().zip(results) {
        for r in rows? {
            match v {
                Some(v) => {
                    let mut full = vec![*v];
                    full.extend(r);
                    csv.row(&full);
                }
                None => csv.row(&r),
            }
        }
    }
    Ok(vec![write_text(&cfg.out_dir(), "evolve.csv", &csv.render())?])
}
