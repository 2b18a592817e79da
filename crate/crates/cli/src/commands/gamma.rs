use std::path::PathBuf;

use dirac_lindblad::coarse_grain::{dissipation_limit, model_entries, ModelParams};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::{write_text, Csv};

pub const COLUMNS: [&str; 15] = [
    "re_g11",
    "im_g11",
    "re_g22",
    "im_g22",
    "re_g12",
    "im_g12",
    "re_g21",
    "im_g21",
    "gamma11_limit",
    "mismatch_g11_g22",
    "limit_vs_model",
    "tau_b",
    "tau_0",
    "bath_phase",
    "n_warnings",
];

pub fn row(params: &ModelParams) -> CliResult<Vec<f64>> {
    let g = model_entries(params);
    let lim = dissipation_limit(params)?;
    Ok(vec![
        g.g11.re,
        g.g11.im,
        g.g22.re,
        g.g22.im,
        g.g12.re,
        g.g12.im,
        g.g21.re,
        g.g21.im,
        lim.gamma11_limit,
        lim.mismatch,
        lim.limit_vs_model,
        lim.tau_b,
        lim.tau_0,
        lim.bath_phase,
        lim.warnings.len() as f64,
    ])
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let axis = cfg.sweep.as_ref().map_or("point", |s| s.name.name());
    let mut header = vec![axis];
    header.extend(COLUMNS);
    let points = cfg.sweep_points()?;
    // Ordered collect keeps rows in sweep order.
    let rows: Vec<CliResult<Vec<f64>>> = points
        .par_iter()
        .enumerate()
        .map(|(i, (v, p))| {
            let mut r = vec![v.unwrap_or(i as f64)];
            r.extend(row(p)?);
            Ok(r)
        })
        .collect();
    let mut csv = Csv::new(&header);
    for r in rows {
        csv.row(&r?);
    }
    Ok(vec![write_text(&cfg.out_dir(), "gamma.csv", &csv.render())?])
}
