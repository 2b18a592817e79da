use std::path::PathBuf;
use std::sync::Arc;

use dirac_lindblad::correspondence::{model_hamiltonian, model_layout};
use dirac_lindblad::poly_mech::{
    consistency_chain, AffineConstraint, ConstraintSystem, Multiplier, PhaseLayout,
    PolyObservable,
};
use serde_json::{json, Value};

use crate::config::{ConstraintSection, ExperimentConfig, PrimarySpec, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{matrix, num, nums, write_json};

fn build_layout(sec: &ConstraintSection) -> CliResult<Arc<PhaseLayout>> {
    let n = sec.n_dof.unwrap_or(2);
    let layout = match (&sec.names, sec.n_dof) {
        (Some(names), _) => PhaseLayout::with_names(n, names.clone()),
        (None, None) => return Ok(model_layout()),
        (None, Some(_)) => PhaseLayout::new(n),
    };
    layout.map_err(|e| CliError::config(e.to_string()))
}

fn build_primary(
    spec: &PrimarySpec,
    layout: &Arc<PhaseLayout>,
    cfg: &ExperimentConfig,
) -> CliResult<AffineConstraint> {
    let c = match (spec.model_alpha, &spec.coeffs) {
        (Some(alpha), None) => {
            if layout.n_dof() != 2 {
                return Err(CliError::config("model_alpha needs a two-degree-of-freedom layout"));
            }
            let m = cfg.model;
            // φ₁ = αx₁ + β(p₁ + (k′/k₂)p₂) with β = 1.
            AffineConstraint::new(vec![alpha, 0.0, 1.0, m.kprime / m.k2], spec.constant.unwrap_or(0.0))
        }
        (None, Some(coeffs)) => {
            if coeffs.len() != layout.dim() {
                return Err(CliError::config(format!(
                    "primary has {} coefficients for {} variables",
                    coeffs.len(),
                    layout.dim()
                )));
            }
            AffineConstraint::new(coeffs.clone(), spec.constant.unwrap_or(0.0))
        }
        _ => {
            return Err(CliError::config(
                "a primary needs exactly one of coeffs or model_alpha",
            ))
        }
    };
    c.map_err(|e| CliError::config(e.to_string()))
}

fn affine_json(c: &AffineConstraint) -> Value {
    json!({ "coeffs": nums(&c.coeffs), "constant": num(c.constant) })
}

fn poly_json(p: &PolyObservable) -> Value {
    Value::Array(
        p.terms()
            .map(|(e, c)| json!({ "exponents": e, "coeff": num(c) }))
            .collect(),
    )
}

pub fn report(cs: &ConstraintSystem) -> Value {
    let multipliers: Vec<Value> = cs
        .multipliers
        .iter()
        .enumerate()
        .map(|(i, m)| match m {
            Multiplier::Solved(p) => json!({ "index": i, "status": "solved", "terms": poly_json(p) }),
            Multiplier::Undetermined => json!({ "index": i, "status": "undetermined", "terms": [] }),
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "constraints",
        "variables": cs.layout.names(),
        "hamiltonian": poly_json(&cs.hamiltonian),
        "primaries": cs.primaries.iter().map(affine_json).collect::<Vec<_>>(),
        "secondaries": cs.secondaries.iter().map(affine_json).collect::<Vec<_>>(),
        "classification": {
            "first_class": cs.first_class_idx,
            "second_class": cs.second_class_idx,
        },
        "first_class_combinations": cs.first_class.iter().map(affine_json).collect::<Vec<_>>(),
        "c_matrix": matrix(&cs.c_matrix),
        "d_matrix": matrix(&cs.d_matrix),
        "inverse_residual": num(cs.inverse_residual()),
        "multipliers": multipliers,
    })
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let default = ConstraintSection {
        n_dof: None,
        names: None,
        hamiltonian: None,
        primaries: Vec::new(),
    };
    let sec = cfg.constraints.as_ref().unwrap_or(&default);
    let layout = build_layout(sec)?;
    let h = match &sec.hamiltonian {
        Some(terms) => PolyObservable::from_terms(
            &layout,
            terms.iter().map(|t| (t.exponents.clone(), t.coeff)),
        )
        .map_err(|e| CliError::config(e.to_string()))?,
        None => model_hamiltonian(&cfg.params()?, &layout)
            .map_err(|e| CliError::config(e.to_string()))?,
    };
    let primaries = sec
        .primaries
        .iter()
        .map(|p| build_primary(p, &layout, cfg))
        .collect::<CliResult<Vec<_>>>()?;
    let cs = consistency_chain(&h, &primaries)?;
    Ok(vec![write_json(&cfg.out_dir(), "constraints.json", &report(&cs))?])
}
