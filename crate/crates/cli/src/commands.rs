//! Command implementations. Each returns an exit code plus the JSON
//! report it prints, so integration tests can call them in-process and
//! the binary stays a thin shell.

use netloc::costs::CostReport;
use netloc::graph::{LocationProfile, Point};
use netloc::lowerbound::{build_tree, profile_chain};
use netloc::mechanisms::{Mechanism, MechanismId};
use netloc::rational::{format_rational, Rational};
use netloc::verify::{check_gsp, check_sp, gsp_circle_witness, CandidateSet};
use netloc::Error;
use serde_json::{json, Value};

use crate::exit_code_for;
use crate::instance::Instance;
use crate::sampler::sample;

pub struct CmdOutput {
    pub exit: i32,
    pub report: Value,
}

/// `run`: evaluate a mechanism on an instance, reporting the exact
/// distribution, the cost breakdown, and optionally one sampled outcome.
pub fn cmd_run(
    instance: &Instance,
    mechanism: &MechanismId,
    seed: Option<u64>,
    resolution: Option<&Rational>,
) -> Result<CmdOutput, Error> {
    let g = &instance.graph;
    let x = &instance.profile;
    let distribution = mechanism.run(g, x)?;
    let costs = CostReport::build(g, x, &distribution, resolution)?;
    let sample_json = seed.map(|s| {
        let outcome = sample(&distribution, s);
        json!({ "seed": s, "outcome": outcome.to_json(g) })
    });
    let report = json!({
        "mechanism": mechanism.to_string(),
        "topology": g.topology().to_string(),
        "distribution": distribution.to_json(g),
        "costs": costs.to_json(g),
        "sample": sample_json,
    });
    Ok(CmdOutput { exit: 0, report })
}

/// `verify-sp`: audit an instance for profitable deviations over the
/// structural-plus-grid candidate set. Exit 0 when none is found, 1
/// when one is, 4 when the coalition search budget runs out (with the
/// partial report attached).
pub fn cmd_verify_sp(
    instance: &Instance,
    mechanism: &MechanismId,
    resolution: &Rational,
    coalition: usize,
    budget: usize,
) -> Result<CmdOutput, Error> {
    let g = &instance.graph;
    let x = &instance.profile;
    let candidates = CandidateSet::structural_and_grid(g, x, resolution)?;
    let result = if coalition <= 1 {
        check_sp(mechanism, g, x, &candidates)
    } else {
        check_gsp(mechanism, g, x, coalition, &candidates, budget)
    };
    match result {
        Ok(report) => {
            let exit = if report.profitable { 1 } else { 0 };
            Ok(CmdOutput { exit, report: report.to_json(g) })
        }
        Err(Error::BudgetExceeded { partial }) => Ok(CmdOutput {
            exit: 4,
            report: json!({
                "error": "budget exceeded",
                "partial": partial.to_json(g),
            }),
        }),
        Err(e) => Err(e),
    }
}

/// `lowerbound`: build the recursive tree, run the profile chain for a
/// mechanism, and emit the per-level trace with the closed-form values
/// side by side.
pub fn cmd_lowerbound(
    m: usize,
    k: usize,
    n: usize,
    mechanism: &MechanismId,
    one_by_one: bool,
) -> Result<CmdOutput, Error> {
    let inst = build_tree(m, k)?.with_agents(n)?;
    let chain = profile_chain(&inst, mechanism, one_by_one)?;
    let g = &inst.graph;

    let profile_counts = |x: &LocationProfile| -> Value {
        let mut counts: std::collections::BTreeMap<String, usize> = Default::default();
        for p in x.points() {
            let label = match p {
                Point::Vertex(v) => g.label(*v).to_string(),
                other => format!("{other:?}"),
            };
            *counts.entry(label).or_default() += 1;
        }
        Value::Array(
            counts
                .into_iter()
                .map(|(label, count)| json!([label, count]))
                .collect(),
        )
    };

    let levels: Vec<Value> = (0..chain.profiles.len())
        .map(|d| {
            json!({
                "level": d,
                "profile": profile_counts(&chain.profiles[d]),
                "selected": g.label(chain.chosen_path[d]),
                "expected_distance": format_rational(&chain.expected_distances[d]),
                "closed_form": format_rational(&chain.bounds[d]),
                "carried_expected": if d == 0 {
                    Value::Null
                } else {
                    Value::String(format_rational(&chain.carried_expected[d - 1]))
                },
            })
        })
        .collect();
    let step_gains: Vec<Value> = chain
        .step_gains
        .iter()
        .map(|sg| {
            json!({
                "level": sg.level,
                "agent": sg.agent,
                "gain": format_rational(&sg.gain),
            })
        })
        .collect();
    let report = json!({
        "m": m,
        "k": k,
        "n": n,
        "mechanism": mechanism.to_string(),
        "formula_bound": format_rational(&chain.formula),
        "levels": levels,
        "final": {
            "mechanism_max_cost": format_rational(&chain.final_mc),
            "reference_max_cost": format_rational(&chain.reference_mc),
            "ratio": chain.final_ratio.to_json(),
        },
        "step_gains": if one_by_one { Value::Array(step_gains) } else { Value::Null },
    });
    Ok(CmdOutput { exit: 0, report })
}

/// `gsp-circle`: find a witness index for the circle inequality between
/// the instance profile and a deviation profile. Exit 1 if none exists
/// (which would falsify the underlying theorem).
pub fn cmd_gsp_circle(instance: &Instance, deviation: &Value) -> Result<CmdOutput, Error> {
    let g = &instance.graph;
    let y = LocationProfile::from_json(g, deviation)?;
    y.validate_on(g)?;
    match gsp_circle_witness(g, &instance.profile, &y) {
        Ok(witness) => Ok(CmdOutput {
            exit: 0,
            report: serde_json::to_value(&witness)
                .map_err(|e| Error::Parse(format!("serialize: {e}")))?,
        }),
        Err(Error::NoWitness) => Ok(CmdOutput {
            exit: 1,
            report: json!({ "error": "no witness found (theorem violation)" }),
        }),
        Err(e) => Err(e),
    }
}

/// Maps an error to (exit code, stderr line).
pub fn error_output(err: &Error) -> (i32, String) {
    (exit_code_for(err), format!("error: {err}"))
}
