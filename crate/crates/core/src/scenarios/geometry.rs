//! The degeneration, the branch curve and its local geometry at ε = 0.

use serde_json::json;

use crate::arith::{hensel_lift, FieldElem, RingDescriptor};
use crate::curve::{
    classify, infinitely_near, kernel_direction, linear_coeffs, singular_points, univariate_coeffs, BiPoint,
    ChartGerm, Classification, BETA,
};
use crate::poly::MPoly;

use super::data::{
    chart_of, data, delta_alpha, match_up_to_unit, p_points, point_text, restrict_to_delta, roots_in, BoxError,
};
use super::Provenance::{Elementary, Recomputed, Reference};
use super::{Recorder, ScenarioResult};

/// Which branch curve is singular at P_k (B1 at P1 and P4, B2 at P2 and P3).
pub(crate) const SINGULAR_AT: [usize; 4] = [1, 2, 2, 1];

pub fn verify_expansion(r: &mut Recorder) -> ScenarioResult {
    let d = data()?;
    let q = &d.quintic;
    let root = hensel_lift(&[-1, 0, 1, 1], 7, 3, 3)?;
    r.compare("root of r^3+r^2-1 lifting 3, mod 343", root.residue(), Some(143), Reference);

    let z343 = root.ring();
    let reg = q.registry().clone();
    let at_root = |name: &str| -> Result<MPoly, BoxError> {
        let p = q.poly(name)?.map_ring(z343)?;
        Ok(p.substitute(&[("r", MPoly::constant(&reg, root.clone()))])?)
    };
    r.compare("minimal polynomial at the root", at_root("minpoly")?.print(), "0".to_string(), Elementary);
    let coeffs: Vec<(String, String)> = ["a", "b", "c", "e", "f", "m"]
        .iter()
        .map(|n| Ok((n.to_string(), at_root(n)?.print())))
        .collect::<Result<_, BoxError>>()?;
    r.value("coefficients at the root (mod 343)", coeffs);

    let quintic = at_root("quintic")?;
    let [f1, f2, f3, f5] = ["f1", "f2", "f3", "f5"].map(|n| at_root(n));
    let (f1, f2, f3, f5) = (f1?, f2?, f3?, f5?);
    let seven = MPoly::from_i64(&reg, z343, 7);
    let expansion = |f5: &MPoly| {
        let t1 = &f1 * &(&f2 * &f2);
        let t2 = &seven * &(&f2 * &f3);
        let t3 = &(&seven * &seven) * f5;
        &(&t1 + &t2) + &t3
    };
    let t = expansion(&f5);
    let (m, unit) = match_up_to_unit(&quintic, &t)?;
    r.value("unit", &m.unit);
    r.value("designated monomial", &m.monomial);
    let support: std::collections::BTreeSet<String> = quintic
        .terms()
        .chain(t.terms())
        .map(|(mono, _)| MPoly::monomial(&reg, FieldElem::one(z343), mono.clone()).print())
        .collect();
    r.value("monomials compared", support.len());
    if !m.holds {
        r.value("residual", (&quintic - &t.scale(&unit)).print());
    }
    r.check(
        "quintic = unit*(f1*f2^2+7*f2*f3+49*f5) mod 7^3",
        m.holds,
        true,
        Reference,
        m.holds,
    );

    let f7 = RingDescriptor::f7();
    let special = quintic.map_ring(f7)?;
    let lead = (&f1 * &(&f2 * &f2)).map_ring(f7)?;
    let (m7, _) = match_up_to_unit(&special, &lead)?;
    r.value("unit mod 7", &m7.unit);
    r.check("quintic = unit*f1*f2^2 mod 7", m7.holds, true, Reference, m7.holds);

    // Sensitivity: shift one coefficient of f5 by 1.
    let bump = MPoly::monomial(
        &reg,
        FieldElem::one(z343),
        crate::poly::Monomial::from_exponents(exponents(&reg, &[("x", 3), ("y", 2)])),
    );
    let perturbed = expansion(&(&f5 + &bump));
    let (pm, _) = match_up_to_unit(&quintic, &perturbed)?;
    r.control("perturbed f5 (x^3*y^2 coefficient + 1)", !pm.holds, pm);
    Ok(())
}

fn exponents(reg: &crate::poly::VarRegistry, powers: &[(&str, u32)]) -> Vec<u32> {
    let mut e = vec![0; reg.len()];
    for (v, k) in powers {
        e[reg.index_of(v).expect("registered")] = *k;
    }
    e
}

/// f restricted to the quadric through the parametrization px..pt of the data file.
fn on_quadric(f: &MPoly) -> Result<MPoly, BoxError> {
    let d = data()?;
    let qd = &d.quadric;
    let f = f.map_ring(RingDescriptor::f7())?.with_registry(qd.registry())?;
    Ok(f.substitute(&[
        ("x", qd.poly("px")?),
        ("y", qd.poly("py")?),
        ("z", qd.poly("pz")?),
        ("t", qd.poly("pt")?),
    ])?)
}

fn quintic_form(name: &str) -> Result<MPoly, BoxError> {
    on_quadric(&data()?.quintic.poly(name)?)
}

pub fn verify_branch_decomposition(r: &mut Recorder) -> ScenarioResult {
    let d = data()?;
    let (g1, g2) = (d.g(1)?, d.g(2)?);
    r.compare("f2 vanishes on the parametrization", quintic_form("f2")?.is_zero(), true, Elementary);

    let (f1, f3, f5) = (quintic_form("f1")?, quintic_form("f3")?, quintic_form("f5")?);
    let four = MPoly::from_i64(f1.registry(), f1.ring(), 4);
    let disc = &(&f3 * &f3) - &(&four * &(&f1 * &f5));
    let (m, unit) = match_up_to_unit(&disc, &(&g1 * &g2))?;
    r.value("designated monomial", &m.monomial);
    r.value("unit", &m.unit);
    if !m.holds {
        r.value("difference", (&disc - &(&g1 * &g2).scale(&unit)).print());
    }
    r.check("(f3^2-4*f1*f5)|Q = unit*g1*g2", m.holds, true, Reference, m.holds);

    let (swapped, _) = match_up_to_unit(&disc, &(&g2 * &g1))?;
    r.compare(
        "product identity with g1, g2 swapped",
        (swapped.holds, swapped.unit.clone()),
        (m.holds, m.unit.clone()),
        Elementary,
    );

    for (k, g) in [(1, &g1), (2, &g2)] {
        let cubic = on_quadric(&d.quadric.poly(&format!("B{k}"))?)?;
        let (mk, _) = match_up_to_unit(&cubic, g)?;
        r.check(
            &format!("cubic surface B{k} restricted to Q = unit*g{k}"),
            &mk,
            "holds for a unit",
            Reference,
            mk.holds,
        );
    }

    // Tangency points with the plane section: the double roots of g1|Δ and g2|Δ, against
    // the roots of f3|Δ other than those of Q1, Q2.
    let f49 = RingDescriptor::f49();
    let mut tangency = Vec::new();
    for g in [&g1, &g2] {
        for (b, k) in roots_in(&restrict_to_delta(g)?, BETA, f49)? {
            if k == 2 {
                tangency.push(b);
            }
        }
    }
    let q = d.q_points()?;
    let node_betas: Vec<FieldElem> = q[..2].iter().map(|p| p.beta.0.clone()).collect();
    let f3_roots = roots_in(&restrict_to_delta(&f3)?, BETA, f49)?;
    let simple = f3_roots.iter().all(|(_, k)| *k == 1);
    let mut rest: Vec<String> = f3_roots
        .iter()
        .filter(|(b, _)| !node_betas.contains(b))
        .map(|(b, _)| b.to_grammar())
        .collect();
    let mut tangency: Vec<String> = tangency.iter().map(FieldElem::to_grammar).collect();
    rest.sort();
    tangency.sort();
    r.value("beta of tangency points", &tangency);
    r.compare("f3|delta has only simple roots", simple, true, Recomputed);
    r.compare(
        "roots of f3|delta besides Q1, Q2 = tangency points with delta",
        rest,
        tangency,
        Reference,
    );
    Ok(())
}

pub fn verify_delta_intersections(r: &mut Recorder) -> ScenarioResult {
    let d = data()?;
    let f49 = RingDescriptor::f49();
    let mut simple: Vec<Vec<FieldElem>> = Vec::new();
    let mut double: Vec<Vec<FieldElem>> = Vec::new();
    for k in 1..=2 {
        let res = restrict_to_delta(&d.g(k)?)?;
        let expected = d.quadric.poly(&format!("g{k}delta"))?;
        let (m, _) = match_up_to_unit(&res, &expected)?;
        r.value(&format!("g{k}|delta"), res.print());
        r.check(
            &format!("g{k}|delta = unit*g{k}delta"),
            &m,
            expected.print(),
            Reference,
            m.holds,
        );
        let roots = roots_in(&res, BETA, f49)?;
        simple.push(roots.iter().filter(|(_, k)| *k == 1).map(|(b, _)| b.clone()).collect());
        double.push(roots.iter().filter(|(_, k)| *k == 2).map(|(b, _)| b.clone()).collect());
    }

    let point = |b: &FieldElem| -> Result<BiPoint, BoxError> { Ok(BiPoint::affine(delta_alpha(b)?, b.clone())) };
    let pts = |bs: &[FieldElem]| -> Result<Vec<BiPoint>, BoxError> { bs.iter().map(point).collect() };
    let common: Vec<FieldElem> = simple[0].iter().filter(|b| simple[1].contains(b)).cloned().collect();
    // Computed groups: {Q1, Q2}, {Q3, Q4}, {Q5, Q6}.
    let groups = [pts(&common)?, pts(&double[0])?, pts(&double[1])?];
    let listed = d.q_points()?;
    let listed_groups = [&listed[0..2], &listed[2..4], &listed[4..6]];
    let same = |a: &[BiPoint], b: &[BiPoint]| a.len() == b.len() && a.iter().all(|p| b.contains(p));
    let matches = |conj: bool| {
        groups.iter().zip(listed_groups).all(|(g, l)| {
            let l: Vec<BiPoint> = l.iter().map(|p| if conj { p.conjugate() } else { p.clone() }).collect();
            same(g, &l)
        })
    };
    let convention = if matches(false) {
        "identity"
    } else if matches(true) {
        "conjugation i -> -i"
    } else {
        "none"
    };
    let show = |g: &[BiPoint]| g.iter().map(point_text).collect::<Vec<_>>();
    r.value("intersection points (nodes, B1 tangency, B2 tangency)", groups.iter().map(|g| show(g)).collect::<Vec<_>>());
    r.check(
        "Q1..Q6 match the listed coordinates under one global convention",
        convention,
        "identity or conjugation i -> -i",
        Reference,
        convention != "none",
    );

    for text in ["beta^2+4*beta+6", "beta^2+6*beta+6"] {
        let p = d.quadric.eval(text)?;
        let over7 = roots_in(&p, BETA, RingDescriptor::f7())?.len();
        let over49 = roots_in(&p, BETA, f49)?.len();
        r.compare(
            &format!("{text}: roots over F7, over F49"),
            (over7, over49),
            (0, 2),
            Recomputed,
        );
    }
    Ok(())
}

/// Quotient of a binary form by a linear form in the variables (u, v), if exact.
pub(crate) fn binary_quotient(num: &MPoly, lin: &MPoly, u: &str, v: &str) -> Result<Option<MPoly>, BoxError> {
    let reg = num.registry().clone();
    let ring = num.ring();
    let one = MPoly::from_i64(&reg, ring, 1);
    let n = univariate_coeffs(&num.substitute(&[(v, one.clone())])?, u)?;
    let l = univariate_coeffs(&lin.substitute(&[(v, one)])?, u)?;
    let mut l = l;
    while l.last().is_some_and(FieldElem::is_zero) {
        l.pop();
    }
    let Some(lead) = l.last().cloned() else {
        return Err("division by zero form".into());
    };
    let inv = lead.invert()?;
    let mut rem = n.clone();
    let deg_q = rem.len().saturating_sub(l.len() - 1);
    let mut q = vec![FieldElem::zero(ring); deg_q.max(1)];
    for j in (0..deg_q).rev() {
        let c = &rem[j + l.len() - 1] * &inv;
        for (k, lk) in l.iter().enumerate() {
            rem[j + k] = &rem[j + k] - &(&c * lk);
        }
        q[j] = c;
    }
    let total = num.total_degree().unwrap_or(0);
    let qdeg = total.saturating_sub(1);
    if rem.iter().any(|c| !c.is_zero()) || q.len() > qdeg as usize + 1 {
        return Ok(None);
    }
    let uu = MPoly::var(&reg, ring, u)?;
    let vv = MPoly::var(&reg, ring, v)?;
    let mut out = MPoly::zero(&reg, ring);
    for (j, c) in q.iter().enumerate() {
        out = &out + &(&uu.pow(j as u32) * &vv.pow(qdeg - j as u32)).scale(c);
    }
    Ok((&out * lin == *num).then_some(out))
}

/// The conditions on the undeformed curves at P_k: (singular curve germ, other germ).
pub(crate) fn germs_at_p(k: usize) -> Result<(ChartGerm, ChartGerm), BoxError> {
    let d = data()?;
    let p = &p_points(RingDescriptor::f7())[k];
    let s = SINGULAR_AT[k];
    let sing = ChartGerm::at(&d.g(s)?, chart_of(k), p)?;
    let other = ChartGerm::at(&d.g(3 - s)?, chart_of(k), p)?;
    Ok((sing, other))
}

pub fn verify_singularity_profile(r: &mut Recorder) -> ScenarioResult {
    let d = data()?;
    for k in 0..4 {
        let (s, o) = germs_at_p(k)?;
        let (sn, on) = (SINGULAR_AT[k], 3 - SINGULAR_AT[k]);
        let chart = chart_of(k).name();
        let [u, v] = s.vars();
        let tag = |c: &str| format!("P{}: {c} on {chart}", k + 1);
        r.compare(
            &tag(&format!("g{sn}0 = g{on}0 = 0")),
            (s.graded(0).print(), o.graded(0).print()),
            ("0".to_string(), "0".to_string()),
            Reference,
        );
        r.compare(&tag(&format!("g{sn}1 = 0")), s.graded(1).print(), "0".to_string(), Reference);

        let l0 = o.graded(1);
        let sq = &l0 * &l0;
        let s2 = s.graded(2);
        let (mm, m) = if l0.is_zero() {
            (None, FieldElem::zero(s2.ring()))
        } else {
            let (mm, m) = match_up_to_unit(&s2, &sq)?;
            (Some(mm), m)
        };
        let holds = mm.as_ref().is_some_and(|x| x.holds) || (l0.is_zero() && s2.is_zero());
        r.check(
            &tag(&format!("g{sn}2 = m*g{on}1^2")),
            json!({ "m": m.to_grammar(), "g2_1": l0.print() }),
            "a unique constant m",
            Reference,
            holds && !l0.is_zero(),
        );
        let h = binary_quotient(&s.graded(3), &l0, u, v)?;
        r.check(
            &tag(&format!("g{sn}3 = g{on}1*h")),
            h.as_ref().map(MPoly::print),
            "a quadratic form h",
            Reference,
            h.is_some(),
        );

        let vs = classify(&s)?;
        let vo = classify(&o)?;
        r.compare(
            &tag(&format!("B{sn} tacnode, B{on} smooth")),
            (vs.classification, vo.classification),
            (Classification::TacnodeOrDegeneration, Classification::Smooth),
            Reference,
        );
        let (a, b) = linear_coeffs(&o, &l0);
        let dir = kernel_direction(&a, &b);
        let (m2, _) = infinitely_near(&s, (&dir.0, &dir.1))?;
        r.compare(
            &tag(&format!("multiplicity sequence of B{sn}")),
            vec![crate::curve::multiplicity_at(&s)?, m2],
            vec![2, 2],
            Recomputed,
        );
    }

    let f49 = RingDescriptor::f49();
    let branch = (&d.g(1)? * &d.g(2)?).map_ring(f49)?;
    let q = d.q_points()?;
    for (k, p) in q[..2].iter().enumerate() {
        let germ = ChartGerm::at(&branch, crate::curve::Chart::U4, p)?;
        r.compare(
            &format!("Q{}: node of B1+B2", k + 1),
            classify(&germ)?.classification,
            Classification::Node,
            Reference,
        );
    }

    let mut sing: Vec<String> = singular_points(&branch, f49)?.iter().map(|p| p.normalized().to_string()).collect();
    let mut expected: Vec<String> = p_points(f49)
        .iter()
        .chain(&q[..2])
        .map(|p| p.normalized().to_string())
        .collect();
    sing.sort();
    expected.sort();
    r.compare("singular points of B1+B2 over F49", sing, expected, Reference);
    r.note("smoothness away from P1..P4, Q1, Q2 is checked at the F49-points only");
    Ok(())
}
