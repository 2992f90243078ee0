use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use stablelimit_core::linalg::{LinearSystem, Matrix, SolutionSet};
use stablelimit_core::picard::Lattice;
use stablelimit_core::poly::Monomial;
use stablelimit_core::{FieldElem, MPoly, RingDescriptor, VarRegistry};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// Reference arithmetic on coordinate tuples, independent of FieldElem.

fn quad_mul((a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
    ((a * c - b * d).rem_euclid(7), (a * d + b * c).rem_euclid(7))
}

fn quad_add((a, b): (i64, i64), (c, d): (i64, i64)) -> (i64, i64) {
    ((a + c).rem_euclid(7), (b + d).rem_euclid(7))
}

fn f49(a: i64, b: i64) -> FieldElem {
    FieldElem::quad(RingDescriptor::f49(), a, b)
}

fn dual49(re: (i64, i64), eps: (i64, i64)) -> FieldElem {
    FieldElem::from_dual_parts(&f49(re.0, re.1), &f49(eps.0, eps.1)).unwrap()
}

fn parts(x: &FieldElem) -> (u64, u64) {
    x.quad_parts().unwrap()
}

fn coord() -> impl Strategy<Value = (i64, i64)> {
    (0i64..7, 0i64..7)
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn f49_matches_reference(x in coord(), y in coord(), z in coord()) {
        let (a, b, c) = (f49(x.0, x.1), f49(y.0, y.1), f49(z.0, z.1));
        let prod = quad_mul(x, y);
        prop_assert_eq!(parts(&(&a * &b)), (prod.0 as u64, prod.1 as u64));
        let sum = quad_add(x, y);
        prop_assert_eq!(parts(&(&a + &b)), (sum.0 as u64, sum.1 as u64));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.invert().unwrap()).is_one());
        }
    }

    #[test]
    fn dual_numbers_match_reference(x in (coord(), coord()), y in (coord(), coord())) {
        let (a, b) = (dual49(x.0, x.1), dual49(y.0, y.1));
        let p = &a * &b;
        let (re, eps) = p.dual_parts();
        // (u + vε)(s + tε) = us + (ut + vs)ε
        let want_eps = quad_add(quad_mul(x.0, y.1), quad_mul(x.1, y.0));
        let want_re = quad_mul(x.0, y.0);
        prop_assert_eq!(parts(&re), (want_re.0 as u64, want_re.1 as u64));
        prop_assert_eq!(parts(&eps), (want_eps.0 as u64, want_eps.1 as u64));
        prop_assert_eq!(a.is_unit(), x.0 != (0, 0));
        if a.is_unit() {
            prop_assert!((&a * &a.invert().unwrap()).is_one());
        }
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn z_mod_343_matches_reference(x in 0i64..343, y in 0i64..343, z in 0i64..343) {
        let ring = RingDescriptor::mod_prime_power(7, 3).unwrap();
        let e = |n: i64| FieldElem::from_i64(ring, n);
        prop_assert_eq!((&e(x) * &e(y)).residue(), Some(((x * y) % 343) as u64));
        prop_assert_eq!((&e(x) - &e(y)).residue(), Some((x - y).rem_euclid(343) as u64));
        prop_assert_eq!(&e(x) * &(&e(y) + &e(z)), &(&e(x) * &e(y)) + &(&e(x) * &e(z)));
        prop_assert_eq!(e(x).is_unit(), x % 7 != 0);
        if x % 7 != 0 {
            prop_assert!((&e(x) * &e(x).invert().unwrap()).is_one());
        }
    }
}

fn registry() -> Arc<VarRegistry> {
    VarRegistry::new(&["x", "y", "z"]).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Vec<([u32; 3], i64)>> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3], -3i64..4), 0..6)
}

fn build(reg: &Arc<VarRegistry>, terms: &[([u32; 3], i64)]) -> MPoly {
    let ring = RingDescriptor::f7();
    terms.iter().fold(MPoly::zero(reg, ring), |acc, (e, c)| {
        &acc + &MPoly::monomial(reg, FieldElem::from_i64(ring, *c), Monomial::from_exponents(e.to_vec()))
    })
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn substitution_is_a_ring_homomorphism(
        p in poly_strategy(), q in poly_strategy(), r in poly_strategy(),
        pt in [0i64..7, 0i64..7, 0i64..7],
    ) {
        let reg = registry();
        let (p, q, r) = (build(&reg, &p), build(&reg, &q), build(&reg, &r));
        let sub = |f: &MPoly| f.substitute(&[("x", r.clone())]).unwrap();
        prop_assert_eq!(sub(&(&p * &q)), &sub(&p) * &sub(&q));
        prop_assert_eq!(sub(&(&p + &q)), &sub(&p) + &sub(&q));
        // Evaluation agrees with substitution followed by evaluation.
        let point: Vec<FieldElem> = pt.iter().map(|&c| FieldElem::from_i64(RingDescriptor::f7(), c)).collect();
        let rx = r.evaluate(&point).unwrap();
        let shifted = vec![rx, point[1].clone(), point[2].clone()];
        prop_assert_eq!(sub(&p).evaluate(&point).unwrap(), p.evaluate(&shifted).unwrap());
    }

    #[test]
    fn derivative_obeys_leibniz(p in poly_strategy(), q in poly_strategy()) {
        let reg = registry();
        let (p, q) = (build(&reg, &p), build(&reg, &q));
        for v in ["x", "y", "z"] {
            let d = |f: &MPoly| f.partial_derivative(v).unwrap();
            prop_assert_eq!(d(&(&p * &q)), &(&d(&p) * &q) + &(&p * &d(&q)));
        }
    }
}

fn all_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..7usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = (k % 7) as i64;
                    k /= 7;
                    d
                })
                .collect()
        })
        .collect()
}

fn dot(row: &[i64], x: &[i64]) -> i64 {
    row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(7)
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn rank_plus_nullity(rows in prop::collection::vec(prop::collection::vec(0i64..7, 4), 1..5)) {
        let f7 = RingDescriptor::f7();
        let m = Matrix::from_i64(f7, &rows).unwrap();
        let kernel = all_vectors(4).into_iter().filter(|x| rows.iter().all(|r| dot(r, x) == 0)).count();
        let nullity = (kernel as f64).log(7.0).round() as usize;
        prop_assert_eq!(m.rank() + nullity, 4);
        prop_assert_eq!(m.rank(), m.transpose().rank());

        let mut sys = LinearSystem::new(f7, &["a", "b", "c", "d"]).unwrap();
        for r in &rows {
            sys.push_row(r.iter().map(|&c| FieldElem::from_i64(f7, c)).collect(), FieldElem::zero(f7)).unwrap();
        }
        prop_assert_eq!(sys.solve_affine().dimension(), Some(nullity));
    }

    #[test]
    fn elimination_is_projection(
        rows in prop::collection::vec((prop::collection::vec(0i64..7, 4), 0i64..7), 1..4),
    ) {
        // Unknowns (x1, x2, a1, a2); eliminate a1, a2 and compare with the brute-force
        // projection of the solution set onto (x1, x2).
        let f7 = RingDescriptor::f7();
        let mut sys = LinearSystem::new(f7, &["x1", "x2", "a1", "a2"]).unwrap();
        for (r, b) in &rows {
            sys.push_row(r.iter().map(|&c| FieldElem::from_i64(f7, c)).collect(), FieldElem::from_i64(f7, *b)).unwrap();
        }
        let elim = sys.eliminate(&["a1", "a2"]).unwrap();
        prop_assert_eq!(elim.vars(), &["x1".to_string(), "x2".to_string()][..]);
        let mut projected = std::collections::BTreeSet::new();
        for x in all_vectors(4) {
            if rows.iter().all(|(r, b)| dot(r, &x) == b.rem_euclid(7)) {
                projected.insert((x[0], x[1]));
            }
        }
        for x in all_vectors(2) {
            let v: Vec<FieldElem> = x.iter().map(|&c| FieldElem::from_i64(f7, c)).collect();
            prop_assert_eq!(elim.satisfied_by(&v), projected.contains(&(x[0], x[1])));
        }
        prop_assert_eq!(matches!(sys.solve_affine(), SolutionSet::Inconsistent), projected.is_empty());
    }

    #[test]
    fn blowup_is_an_isometry(
        a in prop::collection::vec(-5i64..6, 2),
        b in prop::collection::vec(-5i64..6, 2),
        blowups in 1usize..5,
    ) {
        let base = Lattice::p1xp1();
        let names: Vec<String> = (0..blowups).map(|k| format!("e{k}")).collect();
        let pts: Vec<(&str, &str)> = names.iter().map(|n| (n.as_str(), "a point")).collect();
        let (up, pull) = base.blowup_many(&pts).unwrap();
        let da = base.from_integers(&[("h1", a[0]), ("h2", a[1])]).unwrap();
        let db = base.from_integers(&[("h1", b[0]), ("h2", b[1])]).unwrap();
        let (pa, pb) = (pull.apply(&da).unwrap(), pull.apply(&db).unwrap());
        prop_assert_eq!(pa.intersect(&pb).unwrap(), da.intersect(&db).unwrap());
        // (a1 h1 + a2 h2)·(b1 h1 + b2 h2) = a1 b2 + a2 b1 on ℙ¹×ℙ¹.
        prop_assert_eq!(da.intersect(&db).unwrap(), BigRational::from_integer((a[0] * b[1] + a[1] * b[0]).into()));
        for n in &names {
            let e = up.basis(n).unwrap();
            prop_assert_eq!(e.square(), BigRational::from_integer((-1).into()));
            prop_assert_eq!(e.intersect(&pa).unwrap(), BigRational::from_integer(0.into()));
            prop_assert_eq!(e.intersect(&up.canonical()).unwrap(), BigRational::from_integer((-1).into()));
        }
        prop_assert_eq!(up.canonical().square(), BigRational::from_integer((8 - blowups as i64).into()));
        prop_assert!(up.is_unimodular());
    }
}

/// The suites above, for the acceptance report.
#[allow(dead_code)]
pub fn suites() -> Vec<(&'static str, fn())> {
    vec![
        ("ring axioms, F49", f49_matches_reference),
        ("ring axioms, F49[eps]", dual_numbers_match_reference),
        ("ring axioms, Z/343", z_mod_343_matches_reference),
        ("substitution homomorphism", substitution_is_a_ring_homomorphism),
        ("Leibniz rule", derivative_obeys_leibniz),
        ("rank + nullity", rank_plus_nullity),
        ("elimination vs enumeration over F7", elimination_is_projection),
        ("blowup isometry", blowup_is_an_isometry),
    ]
}
