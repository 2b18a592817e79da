use std::path::PathBuf;

use dirac_lindblad::coarse_grain::{GammaEntries, ModelParams};
use dirac_lindblad::correspondence::{
    verify, verify_synthetic, CandidateSelector, CorrespondenceReport, FactorConvention,
    LindDissiReport,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{CorrespondMode, ExperimentConfig, SCHEMA_VERSION};
use crate::error::CliResult;
use crate::output::{num, nums, opt_num, write_json, write_text, Csv};

fn cnum(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

fn gamma_json(g: &GammaEntries) -> Value {
    json!({ "g11": cnum(g.g11), "g22": cnum(g.g22), "g12": cnum(g.g12), "g21": cnum(g.g21) })
}

fn params_json(p: &ModelParams) -> Value {
    json!({
        "k1": num(p.k1),
        "k2": num(p.k2),
        "kprime": num(p.kprime),
        "tau": num(p.tau),
        "inv_temp": num(p.inv_temp),
        "fock_dims": [p.fock_dims.0, p.fock_dims.1],
    })
}

fn opt_nums(x: Option<&[f64]>) -> Value {
    x.map_or(Value::Null, nums)
}

pub fn report_json(r: &CorrespondenceReport) -> Value {
    let candidates: Vec<Value> = r
        .solution
        .as_ref()
        .map(|s| {
            s.candidates
                .iter()
                .map(|c| {
                    json!({
                        "source": c.source.name(),
                        "sign": num(c.sign),
                        "radicand": num(c.radicand),
                        "real": c.alpha.is_some(),
                        "alpha": opt_num(c.alpha),
                        "eta": opt_num(c.eta),
                        "residuals": opt_nums(c.residuals.as_ref().map(|x| &x[..])),
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    let solution = r.solution.as_ref().map_or(Value::Null, |s| {
        json!({
            "stiffness": num(s.stiffness),
            "gamma11": num(s.gamma11),
            "phase": num(s.phase),
            "c0": num(s.c0),
            "c1": num(s.c1),
            "beta": num(s.beta),
            "gamma_c": num(s.gamma_c),
            "delta": num(s.delta),
        })
    });
    let operators = r.operators.as_ref().map_or(Value::Null, |o| {
        json!({
            "interior_gap": num(o.interior_gap),
            "interior_gap_abs": num(o.interior_gap_abs),
            "lhs_hermiticity": num(o.lhs_hermiticity),
            "rhs_hermiticity": num(o.rhs_hermiticity),
            "weak_term_norm": num(o.weak_term_norm),
            "weak_term_interior_norm": num(o.weak_term_interior_norm),
            "chain_cosine": num(o.chain_cosine),
            "bracket": num(o.bracket),
        })
    });
    let lind = r.lind_dissi.as_ref().map_or(Value::Null, |l| {
        json!({
            "residual_inverse_two_gamma11_eta": num(l.residual_two),
            "residual_inverse_gamma11_eta": num(l.residual_one),
            "preferred": l.preferred.name(),
            "conventions_within_tolerance": within_tolerance(l),
            "leading_rate": num(l.leading_rate),
            "diagonalization_residual": num(l.diagonalization_residual),
        })
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "correspond",
        "mode": r.mode.name(),
        "params": params_json(&r.params),
        "interior_exclude": r.interior_exclude,
        "gamma": gamma_json(&r.gamma),
        "degenerate": r.degenerate,
        "solution": solution,
        "candidates": candidates,
        "selected": r.selected,
        "alpha": opt_num(r.alpha),
        "beta": num(r.beta),
        "eta": opt_num(r.eta),
        "residuals_c1_c4": opt_nums(r.residuals_c1_c4.as_ref().map(|x| &x[..])),
        "residuals_c5_c7": opt_nums(r.residuals_c5_c7.as_ref().map(|x| &x[..])),
        "reduction_gap": opt_num(r.reduction_gap),
        "c5c6_minus_c7sq": opt_num(r.identity_residual),
        "gamma_equality_gap": num(r.gamma_equality_gap),
        "operators": operators,
        "lind_dissi": lind,
    })
}

/// Interior residual below which a factor convention counts as matching.
pub const LIND_DISSI_TOL: f64 = 1e-8;

fn within_tolerance(l: &LindDissiReport) -> Vec<&'static str> {
    let mut v = Vec::new();
    if l.residual_two < LIND_DISSI_TOL {
        v.push(FactorConvention::InverseTwoGamma11Eta.name());
    }
    if l.residual_one < LIND_DISSI_TOL {
        v.push(FactorConvention::InverseGamma11Eta.name());
    }
    v
}

fn run_point(cfg: &ExperimentConfig, p: &ModelParams) -> CliResult<CorrespondenceReport> {
    let k = cfg.interior_exclude;
    Ok(match cfg.correspond.mode {
        CorrespondMode::Synthetic => {
            let alpha = cfg.correspond.alpha.expect("validated");
            verify_synthetic(p, alpha, k)?
        }
        CorrespondMode::Physical => {
            let sel = cfg
                .correspond
                .candidate
                .map_or(CandidateSelector::Best, CandidateSelector::Index);
            verify(p, sel, k)?
        }
    })
}

const SWEEP_COLUMNS: [&str; 13] = [
    "alpha",
    "eta",
    "res_c1",
    "res_c2",
    "res_c3",
    "res_c4",
    "reduction_gap",
    "c5c6_minus_c7sq",
    "gamma_equality_gap",
    "interior_gap",
    "weak_term_interior_norm",
    "lind_res_inverse_two_gamma11_eta",
    "lind_res_inverse_gamma11_eta",
];

fn sweep_row(r: &CorrespondenceReport) -> Vec<f64> {
    let nan = f64::NAN;
    let c4 = r.residuals_c1_c4.unwrap_or([nan; 4]);
    let ops = r.operators.as_ref();
    let ld = r.lind_dissi.as_ref();
    vec![
        r.alpha.unwrap_or(nan),
        r.eta.unwrap_or(nan),
        c4[0],
        c4[1],
        c4[2],
        c4[3],
        r.reduction_gap.unwrap_or(nan),
        r.identity_residual.unwrap_or(nan),
        r.gamma_equality_gap,
        ops.map_or(nan, |o| o.interior_gap),
        ops.map_or(nan, |o| o.weak_term_interior_norm),
        ld.map_or(nan, |l| l.residual_two),
        ld.map_or(nan, |l| l.residual_one),
    ]
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let dir = cfg.out_dir();
    let base = run_point(cfg, &cfg.params()?)?;
    let mut written = vec![write_json(&dir, "correspond.json", &report_json(&base))?];
    if let Some(sweep) = &cfg.sweep {
        let points = cfg.sweep_points()?;
        let reports: Vec<CliResult<CorrespondenceReport>> =
            points.par_iter().map(|(_, p)| run_point(cfg, p)).collect();
        let mut header = vec![sweep.name.name()];
        header.extend(SWEEP_COLUMNS);
        let mut csv = Csv::new(&header);
        for ((v, _), r) in points.iter().zip(reports) {
            let mut row = vec![v.expect("sweep value")];
            row.extend(sweep_row(&r?));
            csv.row(&row);
        }
        written.push(write_text(&dir, "correspond_sweep.csv", &csv.render())?);
    }
    Ok(written)
}
