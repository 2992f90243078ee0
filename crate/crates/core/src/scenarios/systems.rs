//! The deformation systems I1..I7 and Lefschetz over 𝔽49.

use std::collections::BTreeSet;

use serde_json::json;

use crate::arith::{FieldElem, RingDescriptor};
use crate::linalg::{LinearSystem, SolutionSet};
use crate::linser::{distinct_fibers, split_sections_vanishing};
use crate::poly::MPoly;

use super::data::{data, p_points, BoxError};
use super::Provenance::{Recomputed, Reference};
use super::{Recorder, ScenarioResult};

/// Ring variables of the deformation script that are not unknowns.
const AUXILIARY: [&str; 3] = ["t", "x", "y"];

pub(crate) fn unknowns() -> Result<Vec<String>, BoxError> {
    Ok(data()?
        .deformations
        .ring_vars()
        .iter()
        .filter(|v| !AUXILIARY.contains(&v.as_str()))
        .cloned()
        .collect())
}

fn listed_dimension(name: &str) -> usize {
    match name {
        "I1" | "I2" | "I3" | "I4" => 4,
        "Lefschetz" => 10,
        _ => 3,
    }
}

/// Generators of a system with the leftover auxiliary variables set to `aux`.
fn generators(name: &str, aux: &[(&str, FieldElem)]) -> Result<Vec<MPoly>, BoxError> {
    let gens = data()?.deformations.ideal(name)?;
    gens.iter()
        .map(|g| {
            let reg = g.registry().clone();
            let binds: Vec<(&str, MPoly)> = aux.iter().map(|(v, c)| (*v, MPoly::constant(&reg, c.clone()))).collect();
            Ok(g.substitute(&binds)?)
        })
        .collect()
}

/// The system over 𝔽49 in the 19 unknowns.  Generators still involving y (the
/// Lefschetz rows) are read at y = 0, the coordinate of Q1 and Q2 on their fibers.
pub(crate) fn assemble(name: &str) -> Result<LinearSystem, BoxError> {
    let zero = FieldElem::zero(RingDescriptor::f49());
    let gens = generators(name, &[("x", zero.clone()), ("y", zero)])?;
    Ok(LinearSystem::from_affine_forms(&gens, &unknowns()?)?)
}

fn aux_in_generators(name: &str) -> Result<Vec<&'static str>, BoxError> {
    let gens = data()?.deformations.ideal(name)?;
    Ok(["x", "y"]
        .into_iter()
        .filter(|v| gens.iter().any(|g| g.support().contains(v)))
        .collect())
}

pub fn verify_system(r: &mut Recorder, name: &str) -> ScenarioResult {
    let sys = assemble(name)?;
    r.value("generators", sys.num_rows());
    r.value("rank", sys.rank());
    let sol = sys.solve_affine();
    let consistent = sol.is_consistent();
    r.compare("consistent over F49", consistent, true, Reference);
    let Some(ess) = sol.dimension() else {
        return Ok(());
    };
    let listed = listed_dimension(name);
    let used = aux_in_generators(name)?;
    r.value("auxiliary variables occurring", &used);
    r.value(
        "dimension counting free auxiliaries",
        json!({ "x": ess + 1, "x and y": ess + 2 }),
    );
    let explanation = if listed == ess + 1 {
        "the listed value equals the solution dimension plus one free auxiliary variable (x)"
    } else if listed == ess + 2 {
        "the listed value equals the solution dimension plus the two auxiliary variables x and y"
    } else {
        "the listed value is not explained by the auxiliary variables"
    };
    r.advisory(
        "essential dimension",
        ess,
        listed,
        Reference,
        &format!(
            "solution space of the 19 unknowns has dimension {ess}; {explanation}; the script's \
             ring also carries x and y, and whether they are counted is ambiguous"
        ),
    );

    if used.contains(&"y") {
        // The rows dB1Q1-1, dB1Q2-1 depend on y; scan every y in 𝔽49.
        let f49 = RingDescriptor::f49();
        let mut dims = BTreeSet::new();
        let mut inconsistent = Vec::new();
        for y in f49.elements()? {
            let gens = generators(name, &[("x", FieldElem::zero(f49)), ("y", y.clone())])?;
            match LinearSystem::from_affine_forms(&gens, &unknowns()?)?.solve_affine() {
                SolutionSet::Inconsistent => inconsistent.push(y.to_grammar()),
                s => {
                    dims.insert(s.dimension().unwrap_or(0));
                }
            }
        }
        r.value("solution dimensions over y in F49", dims);
        r.value("y values with no solution", inconsistent);
    }
    Ok(())
}

pub fn verify_basis_count(r: &mut Recorder) -> ScenarioResult {
    let d = data()?;
    let names: Vec<String> = (1..=7).map(|k| format!("I{k}")).collect();
    let mut specs = Vec::new();
    for n in &names {
        let args = d
            .deformations
            .ideal_args(n)
            .ok_or_else(|| format!("{n} is not an ideal"))?;
        specs.push(args.iter().cloned().collect::<BTreeSet<String>>());
    }
    r.compare("systems present", specs.len(), 7, Reference);
    let distinct = (0..specs.len()).all(|a| (0..a).all(|b| specs[a] != specs[b]));
    r.compare("pairwise distinct generator sets", distinct, true, Reference);

    let normalized: Vec<Vec<String>> = specs
        .iter()
        .map(|s| s.iter().filter_map(|g| g.strip_suffix("-1").map(str::to_string)).collect())
        .collect();
    r.value("normalizing rows", &normalized);
    let single = |k: usize| -> Option<String> {
        match normalized[k].as_slice() {
            [one] => Some(one.clone()),
            _ => None,
        }
    };
    let moving: Vec<Option<String>> = (0..3).map(single).collect();
    let tangency: Vec<Option<String>> = (3..7).map(single).collect();
    let want = |v: &[&str]| v.iter().map(|s| Some(s.to_string())).collect::<Vec<_>>();
    r.compare(
        "I1..I3 normalize one point-moving row",
        moving.clone(),
        want(&["B1Q4", "B2Q5", "B2Q6"]),
        Reference,
    );
    r.compare(
        "I4..I7 normalize one tangency row",
        tangency.clone(),
        want(&["dB1Q3", "dB1Q4", "dB2Q5", "dB2Q6"]),
        Reference,
    );
    let kind = |s: &Option<String>| match s.as_deref() {
        Some(x) if x.starts_with("dB") => "tangency",
        Some(x) if x.starts_with('B') => "point-moving",
        _ => "other",
    };
    let pattern = (
        moving.iter().chain(&tangency).filter(|s| kind(s) == "point-moving").count(),
        moving.iter().chain(&tangency).filter(|s| kind(s) == "tangency").count(),
    );
    r.compare("pattern (point-moving, tangency)", pattern, (3, 4), Reference);

    // Each distinguished direction is realized by some first-order deformation.
    let mut consistent = 0;
    for n in &names {
        if assemble(n)?.solve_affine().is_consistent() {
            consistent += 1;
        }
    }
    r.compare("systems with a solution", consistent, 7, Recomputed);

    // Sections of O(0,2) + O(2,0) vanishing at Q2 and P1..P4.
    let f49 = RingDescriptor::f49();
    let mut points = vec![d.q_points()?[1].clone()];
    points.extend(p_points(f49));
    r.compare("distinct alpha- and beta-fibers through Q2, P1..P4", distinct_fibers(&points), (3, 3), Reference);
    r.compare(
        "sections of O(0,2) + O(2,0) vanishing at Q2, P1..P4",
        split_sections_vanishing(&points, f49)?,
        0,
        Reference,
    );
    Ok(())
}
