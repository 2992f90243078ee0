//! The embedded data files and small helpers shared by the scenarios.

use std::sync::OnceLock;

use crate::arith::{FieldElem, RingDescriptor};
use crate::curve::{root_order, univariate_coeffs, BiPoint, Chart, ALPHA, ALPHA1, BETA, BETA1};
use crate::poly::{MPoly, Monomial};

use super::script::Script;

pub const QUINTIC: &str = include_str!("../../data/quintic.txt");
pub const QUADRIC: &str = include_str!("../../data/quadric.txt");
pub const POINTS: &str = include_str!("../../data/points.txt");
pub const SYSTEM: &str = include_str!("../../data/system.txt");
pub const DEFORMATIONS: &str = include_str!("../../data/deformations.m2");

pub type BoxError = Box<dyn std::error::Error + Send + Sync>;

pub struct EmbeddedData {
    /// Over ℤ.
    pub quintic: Script,
    /// Over 𝔽7.
    pub quadric: Script,
    /// Over 𝔽49.
    pub points: Script,
    /// Over 𝔽49.
    pub system: Script,
    /// Over 𝔽49.
    pub deformations: Script,
}

fn load() -> Result<EmbeddedData, String> {
    let run = |name: &str, src: &str, ring: RingDescriptor| {
        Script::run(src, ring).map_err(|e| format!("{name}: {e}"))
    };
    Ok(EmbeddedData {
        quintic: run("quintic.txt", QUINTIC, RingDescriptor::integers())?,
        quadric: run("quadric.txt", QUADRIC, RingDescriptor::f7())?,
        points: run("points.txt", POINTS, RingDescriptor::f49())?,
        system: run("system.txt", SYSTEM, RingDescriptor::f49())?,
        deformations: run("deformations.m2", DEFORMATIONS, RingDescriptor::f49())?,
    })
}

/// The parsed data files (parsed once per process).
pub fn embedded_data() -> Result<&'static EmbeddedData, String> {
    static DATA: OnceLock<Result<EmbeddedData, String>> = OnceLock::new();
    DATA.get_or_init(load).as_ref().map_err(Clone::clone)
}

pub fn data() -> Result<&'static EmbeddedData, BoxError> {
    embedded_data().map_err(Into::into)
}

impl EmbeddedData {
    pub fn g(&self, k: usize) -> Result<MPoly, BoxError> {
        Ok(self.quadric.poly(&format!("g{k}"))?)
    }

    /// Q1..Q6 as points of the chart α' = β' = 1.
    pub fn q_points(&self) -> Result<Vec<BiPoint>, BoxError> {
        (1..=6)
            .map(|k| {
                let gens = self.points.ideal(&format!("Q{k}"))?;
                let [a, b] = gens.as_slice() else {
                    return Err(format!("Q{k} needs two coordinates").into());
                };
                if !a.support().is_empty() || !b.support().is_empty() {
                    return Err(format!("Q{k} coordinates must be constants").into());
                }
                Ok(BiPoint::affine(a.constant_term(), b.constant_term()))
            })
            .collect()
    }
}

/// P1..P4: the origins of the charts U1..U4.
pub fn p_points(field: RingDescriptor) -> Vec<BiPoint> {
    let (o, z) = (FieldElem::one(field), FieldElem::zero(field));
    let pt = |a: (&FieldElem, &FieldElem), b: (&FieldElem, &FieldElem)| BiPoint {
        alpha: (a.0.clone(), a.1.clone()),
        beta: (b.0.clone(), b.1.clone()),
    };
    vec![
        pt((&o, &z), (&o, &z)),
        pt((&z, &o), (&o, &z)),
        pt((&o, &z), (&z, &o)),
        pt((&z, &o), (&z, &o)),
    ]
}

pub fn chart_of(k: usize) -> Chart {
    Chart::ALL[k]
}

/// Restriction of a bihomogeneous form to the plane section α(1+β) + β − 1 = 0,
/// parametrized by β: (α : α') = (1 − β : 1 + β), β' = 1.
pub fn restrict_to_delta(g: &MPoly) -> Result<MPoly, BoxError> {
    let reg = g.registry().clone();
    let ring = g.ring();
    let b = MPoly::var(&reg, ring, BETA)?;
    let one = MPoly::from_i64(&reg, ring, 1);
    Ok(g.substitute(&[(ALPHA, &one - &b), (ALPHA1, &one + &b), (BETA1, one)])?)
}

/// The α-coordinate of the point of the plane section over β = b.
pub fn delta_alpha(b: &FieldElem) -> Result<FieldElem, BoxError> {
    let one = FieldElem::one(b.ring());
    Ok(&(&one - b) * &(&one + b).invert()?)
}

/// Result of matching `computed = unit · expected`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct UnitMatch {
    pub unit: String,
    pub monomial: String,
    pub holds: bool,
}

fn monomial_text(p: &MPoly, m: &Monomial) -> String {
    MPoly::monomial(p.registry(), FieldElem::one(p.ring()), m.clone()).print()
}

/// Fix the unit from the largest monomial of `expected` whose coefficient is a unit,
/// then demand equality everywhere.
pub fn match_up_to_unit(computed: &MPoly, expected: &MPoly) -> Result<(UnitMatch, FieldElem), BoxError> {
    let Some((m, c)) = expected.terms().filter(|(_, c)| c.is_unit()).max_by(|a, b| a.0.cmp(b.0)) else {
        return Err("no coefficient of the expected polynomial is a unit".into());
    };
    let num = computed.coefficient(m);
    let unit = num.try_mul(&c.invert()?)?;
    let holds = unit.is_unit() && *computed == expected.scale(&unit);
    Ok((
        UnitMatch {
            unit: unit.to_grammar(),
            monomial: monomial_text(expected, m),
            holds,
        },
        unit,
    ))
}

pub fn point_text(p: &BiPoint) -> String {
    match Chart::U4.local_coords(p) {
        Some((a, b)) => format!("({}, {})", a.to_grammar(), b.to_grammar()),
        None => p.normalized().to_string(),
    }
}

/// Roots of a univariate polynomial in `field`, with multiplicities, in element order.
pub fn roots_in(p: &MPoly, var: &str, field: RingDescriptor) -> Result<Vec<(FieldElem, u32)>, BoxError> {
    let p = if p.ring() == field { p.clone() } else { p.map_ring(field)? };
    let mut coeffs = univariate_coeffs(&p, var)?;
    let mut out = Vec::new();
    for a in field.elements()? {
        let (k, q) = root_order(&coeffs, &a);
        if k > 0 {
            out.push((a, k));
            coeffs = q;
        }
    }
    Ok(out)
}
