//! One line per acceptance criterion.  All comparisons are exact (tolerance 0): every
//! quantity lives in ℤ/343, 𝔽7, 𝔽49 or ℚ.
//!
//! Criterion 9 contains the statement B_j·F = −4, which the lattice computation
//! contradicts (it gives +2); that line reports FAIL and is listed in `KNOWN_RED`.

#[path = "properties.rs"]
mod properties;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::{json, Value};
use stablelimit_core::arith::hensel_lift;
use stablelimit_core::scenarios::{self, Recorder, Status, VerificationReport};

const TOLERANCE: &str = "exact";
const KNOWN_RED: &[u32] = &[9];

type Criterion = fn() -> Result<(), String>;

fn report(id: &str) -> VerificationReport {
    scenarios::run_scenario(id).unwrap_or_else(|| panic!("no scenario {id}"))
}

/// Hard checks passed and the computed value is the one given.
fn value(r: &VerificationReport, name: &str, want: Value) -> Result<(), String> {
    if !r.passed(name) {
        return Err(format!("{}: check '{name}' did not pass", r.id));
    }
    match r.computed(name) {
        Some(v) if *v == want => Ok(()),
        other => Err(format!("{}: '{name}' = {other:?}, want {want}", r.id)),
    }
}

fn passed(r: &VerificationReport, name: &str) -> Result<(), String> {
    if r.passed(name) {
        Ok(())
    } else {
        Err(format!("{}: check '{name}' did not pass ({:?})", r.id, r.computed(name)))
    }
}

fn success(r: &VerificationReport) -> Result<(), String> {
    if r.status.is_success() {
        Ok(())
    } else {
        Err(format!("{} is {:?}: {}", r.id, r.status, r.notes.join("; ")))
    }
}

fn all(results: Vec<Result<(), String>>) -> Result<(), String> {
    let errs: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs.join(" | "))
    }
}

fn c1() -> Result<(), String> {
    let r = hensel_lift(&[-1, 0, 1, 1], 7, 3, 3).map_err(|e| e.to_string())?;
    let r = r.residue().ok_or("no residue")?;
    // Independent oracle: scan ℤ/343 for roots ≡ 3 mod 7.
    let roots: Vec<u64> = (0..343u64).filter(|x| x % 7 == 3 && (x * x * x + x * x + 342) % 343 == 0).collect();
    if r == 143 && roots == [143] {
        Ok(())
    } else {
        Err(format!("lift {r}, scan {roots:?}"))
    }
}

fn c2() -> Result<(), String> {
    let r = report("expansion");
    all(vec![
        value(&r, "root of r^3+r^2-1 lifting 3, mod 343", json!(143)),
        value(&r, "quintic = unit*(f1*f2^2+7*f2*f3+49*f5) mod 7^3", json!(true)),
        value(&r, "quintic = unit*f1*f2^2 mod 7", json!(true)),
    ])
}

fn c3() -> Result<(), String> {
    let r = report("branch");
    all(vec![value(&r, "(f3^2-4*f1*f5)|Q = unit*g1*g2", json!(true)), success(&r)])
}

fn c4() -> Result<(), String> {
    let r = report("delta");
    all(vec![
        passed(&r, "g1|delta = unit*g1delta"),
        passed(&r, "g2|delta = unit*g2delta"),
        passed(&r, "Q1..Q6 match the listed coordinates under one global convention"),
        success(&r),
    ])
}

fn c5() -> Result<(), String> {
    let r = report("singularities");
    let mut checks = vec![
        value(&r, "Q1: node of B1+B2", json!("Node")),
        value(&r, "Q2: node of B1+B2", json!("Node")),
        success(&r),
    ];
    let per_point = r.expected.keys().filter(|k| k.starts_with('P')).count();
    if per_point != 24 {
        checks.push(Err(format!("{per_point} per-point checks, want 6 at each of P1..P4")));
    }
    all(checks)
}

fn c6() -> Result<(), String> {
    let r = report("deform-derive");
    all(vec![
        value(&r, "rank of the derived system", json!(28)),
        value(&r, "derived system = printed system (row space over F49)", json!(true)),
        value(&r, "point rows disagreeing with the script modulo its own substitutions", json!([])),
        value(&r, "script substitutions with the printed a22 = derived system", json!(true)),
        success(&r),
    ])
}

fn c7() -> Result<(), String> {
    let listed = [4, 4, 4, 4, 3, 3, 3, 10];
    let ids = ["I1", "I2", "I3", "I4", "I5", "I6", "I7", "lefschetz"];
    let mut checks = Vec::new();
    for (id, want) in ids.iter().zip(listed) {
        let r = report(&format!("system-{id}"));
        checks.push(value(&r, "consistent over F49", json!(true)));
        checks.push(success(&r));
        let dim = r.computed("essential dimension").and_then(Value::as_u64);
        let visible = r.status == Status::Flagged && r.notes.iter().any(|n| n.contains("x and y"));
        if dim != Some(want) && !visible {
            checks.push(Err(format!("{}: dimension {dim:?} differs from {want} without a flag", r.id)));
        }
    }
    all(checks)
}

fn c8() -> Result<(), String> {
    let r = report("ramification");
    all(vec![
        value(&r, "beta-ruling: branch locus of g1", json!("beta^4+2*beta^2+1")),
        value(&r, "beta-ruling: branch locus of g2", json!("beta^4+4*beta^2+1")),
        value(&r, "alpha-ruling: branch locus of g1", json!("alpha^4+4*alpha^2+1")),
        value(&r, "alpha-ruling: branch locus of g2", json!("alpha^4+2*alpha^2+1")),
        value(&r, "fiber beta = beta(Q1) meets B1 at Q1", json!("Finite(3)")),
        value(&r, "fiber alpha = alpha(Q1) meets B2 at Q1", json!("Finite(3)")),
        success(&r),
    ])
}

fn c9() -> Result<(), String> {
    let r = report("lattice");
    all(vec![
        passed(&r, "B1 + B2 + 2N1 + 2N2 ~ 3(sum A + sum G)"),
        passed(&r, "B1 + B2 + sum G ~ 2(3H - N1 - N2 - 3 sum E - sum G)"),
        passed(&r, "K_P1 + L ~ H - sum E + sum C + sum F"),
        value(&r, "B1.F, B2.F", json!(["-4", "-4"])),
        value(&r, "Delta_1^2", json!("-4")),
        value(&r, "N_i^2 on Y", json!(["-2", "-2"])),
        value(&r, "E_i^2 on Y", json!(["-1", "-1", "-1", "-1"])),
        value(&r, "K_Y^2", json!("0")),
        value(&r, "chi(O_Y)", json!("1")),
        value(&r, "6 K_Y . C = F . C for every basis class C", json!(true)),
    ])
}

fn c10() -> Result<(), String> {
    let g = report("gamma");
    let b = report("basis-count");
    all(vec![
        value(&g, "h0(O(2,2))", json!(9)),
        value(&b, "sections of O(0,2) + O(2,0) vanishing at Q2, P1..P4", json!(0)),
        passed(&g, "dimension with the 8 conditions"),
        value(&g, "dimension with the 8 conditions (exact)", json!(1)),
    ])
}

fn c11() -> Result<(), String> {
    let r = report("diophantine");
    // Independent scan with a different loop order.
    let mut oracle = Vec::new();
    for m2 in 3u64..=100 {
        for m1 in 2..m2 {
            let coprime = (2..=m1).all(|d| m1 % d != 0 || m2 % d != 0);
            let v = m1 * m2 - m1 - m2;
            if coprime && 2 % v == 0 {
                oracle.push(json!([2 / v, m1, m2]));
            }
        }
    }
    all(vec![
        value(&r, "bound 100, target 2", json!([[2, 2, 3]])),
        if oracle == vec![json!([2, 2, 3])] { Ok(()) } else { Err(format!("oracle {oracle:?}")) },
    ])
}

fn c12() -> Result<(), String> {
    let mut failed = Vec::new();
    for (name, suite) in properties::suites() {
        if catch_unwind(AssertUnwindSafe(suite)).is_err() {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("failing suites: {failed:?}"))
    }
}

fn c13() -> Result<(), String> {
    let controls = [
        ("expansion", "perturbed f5 (x^3*y^2 coefficient + 1)"),
        ("deform-derive", "condition (4) dropped"),
    ];
    let mut checks = Vec::new();
    for (id, name) in controls {
        let r = report(id);
        match r.check(name) {
            Some(c) if c.control => checks.push(passed(&r, name)),
            _ => checks.push(Err(format!("{id}: control '{name}' missing"))),
        }
    }
    // An undetected control turns its scenario red.
    let mut rec = Recorder::default();
    rec.control("probe", false, ());
    let probe = rec.finish("probe", "", None, 0);
    if probe.status != Status::Fail {
        checks.push(Err(format!("undetected control gives {:?}", probe.status)));
    }
    all(checks)
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, Criterion); 13] = [
        (1, "Hensel lift of r^3+r^2-1 from 3 is 143 mod 343", c1),
        (2, "quintic expansion at r = 143 mod 7^3 and mod 7", c2),
        (3, "branch curve = unit*g1*g2 on the quadric", c3),
        (4, "restrictions to delta and the six Q points", c4),
        (5, "singularity conditions at P1..P4, nodes at Q1, Q2", c5),
        (6, "derived deformation system = printed system", c6),
        (7, "I1..I7 and Lefschetz consistent, dimensions reported", c7),
        (8, "branch loci of both rulings and flexes at Q1, Q2", c8),
        (9, "lattice identities on P, P1, W and Y", c9),
        (10, "linear series dimensions", c10),
        (11, "multiplicity scan to bound 100", c11),
        (12, "property suites", c12),
        (13, "negative controls are detected", c13),
    ];
    let mut unexpected = Vec::new();
    for (n, title, f) in criteria {
        let outcome = catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string()));
        // Written to the handle directly so the lines show without --nocapture.
        let line = match &outcome {
            Ok(()) => format!("criterion {n:>2} PASS  [tol={TOLERANCE}] {title}\n"),
            Err(e) => format!("criterion {n:>2} FAIL  [tol={TOLERANCE}] {title}: {e}\n"),
        };
        let _ = std::io::stdout().lock().write_all(line.as_bytes());
        if outcome.is_err() && !KNOWN_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
