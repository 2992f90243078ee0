//! Sparse multivariate polynomials over any [`RingDescriptor`], with a shared variable
//! registry and graded-reverse-lexicographic term order.

mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{ArithError, FieldElem, RingDescriptor};

pub use parse::parse_poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("`{text}` at line {line}, column {column} is not representable in {ring}")]
    NotRepresentable {
        text: String,
        ring: RingDescriptor,
        line: usize,
        column: usize,
    },
    #[error("variable registries differ")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    NoSuchVariable(String),
    #[error("invalid variable registry: {0}")]
    BadRegistry(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, PolyError>;

/// Ordered, duplicate-free variable names.  The order fixes the monomial order.
#[derive(Debug, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '\'')
}

impl VarRegistry {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarRegistry>> {
        let mut index = HashMap::new();
        let mut out = Vec::new();
        for (j, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(PolyError::BadRegistry(format!("`{n}` is not a variable name")));
            }
            if index.insert(n.to_string(), j).is_some() {
                return Err(PolyError::BadRegistry(format!("`{n}` appears twice")));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(VarRegistry { names: out, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| PolyError::NoSuchVariable(name.to_string()))
    }
}

/// Exponent vector ordered by grevlex: higher total degree is larger; ties are broken by
/// the last variable where the exponents differ, the smaller exponent being larger.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&o.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Clone)]
pub struct MPoly {
    reg: Arc<VarRegistry>,
    ring: RingDescriptor,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PartialEq for MPoly {
    fn eq(&self, o: &Self) -> bool {
        self.same_registry(o) && self.ring == o.ring && self.terms == o.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(reg: &Arc<VarRegistry>, ring: RingDescriptor) -> Self {
        MPoly {
            reg: reg.clone(),
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: FieldElem) -> Self {
        let mut p = Self::zero(reg, c.ring());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(reg.len()), c);
        }
        p
    }

    pub fn from_i64(reg: &Arc<VarRegistry>, ring: RingDescriptor, n: i64) -> Self {
        Self::constant(reg, FieldElem::from_i64(ring, n))
    }

    pub fn var(reg: &Arc<VarRegistry>, ring: RingDescriptor, name: &str) -> Result<Self> {
        let j = reg.require(name)?;
        let mut e = vec![0; reg.len()];
        e[j] = 1;
        Ok(Self::monomial(reg, FieldElem::one(ring), Monomial(e)))
    }

    pub fn monomial(reg: &Arc<VarRegistry>, c: FieldElem, m: Monomial) -> Self {
        assert_eq!(m.0.len(), reg.len(), "exponent vector length");
        let mut p = Self::zero(reg, c.ring());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(self.ring))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    /// The constant term.
    pub fn constant_term(&self) -> FieldElem {
        self.coefficient(&Monomial::one(self.reg.len()))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: &str) -> Result<u32> {
        let j = self.reg.require(var)?;
        Ok(self.terms.keys().map(|m| m.0[j]).max().unwrap_or(0))
    }

    /// Variables that occur in some term.
    pub fn support(&self) -> Vec<&str> {
        (0..self.reg.len())
            .filter(|&j| self.terms.keys().any(|m| m.0[j] > 0))
            .map(|j| self.reg.names[j].as_str())
            .collect()
    }

    fn same_registry(&self, o: &MPoly) -> bool {
        Arc::ptr_eq(&self.reg, &o.reg) || self.reg.names == o.reg.names
    }

    fn check(&self, o: &MPoly) -> Result<()> {
        if !self.same_registry(o) {
            return Err(PolyError::RegistryMismatch);
        }
        if self.ring != o.ring {
            return Err(ArithError::RingMismatch {
                left: self.ring,
                right: o.ring,
            }
            .into());
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, o: &MPoly) -> Result<MPoly> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &MPoly) -> Result<MPoly> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &MPoly) -> Result<MPoly> {
        self.check(o)?;
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> MPoly {
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(&self.reg, FieldElem::one(self.ring));
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Ring homomorphism fixing coefficients and sending each bound variable to its image.
    pub fn substitute(&self, bindings: &[(&str, MPoly)]) -> Result<MPoly> {
        let mut image: Vec<Option<&MPoly>> = vec![None; self.reg.len()];
        for (name, q) in bindings {
            self.check(q)?;
            image[self.reg.require(name)?] = Some(q);
        }
        let mut powers: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m, c) in &self.terms {
            let mut kept = m.0.clone();
            let mut t = MPoly::constant(&self.reg, c.clone());
            for (j, q) in image.iter().enumerate() {
                let (Some(q), e) = (q, m.0[j]) else { continue };
                kept[j] = 0;
                if e > 0 {
                    let qe = powers.entry((j, e)).or_insert_with(|| q.pow(e));
                    t = &t * qe;
                }
            }
            let kept = Monomial(kept);
            for (m2, c2) in t.terms {
                out.add_term(m2.mul(&kept), c2);
            }
        }
        Ok(out)
    }

    /// Value at a full point (one value per registry variable).
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.reg.len() {
            return Err(PolyError::RegistryMismatch);
        }
        let mut acc = FieldElem::zero(self.ring);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = t.try_mul(&x.pow(e as u64))?;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<MPoly> {
        let j = self.reg.require(var)?;
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut m2 = m.0.clone();
            m2[j] -= 1;
            out.add_term(Monomial(m2), c * &FieldElem::from_u64(self.ring, e as u64));
        }
        Ok(out)
    }

    fn indices(&self, vars: &[&str]) -> Result<Vec<usize>> {
        vars.iter().map(|v| self.reg.require(v)).collect()
    }

    /// Terms of total degree exactly `d` in `vars`.
    pub fn graded_part(&self, d: u32, vars: &[&str]) -> Result<MPoly> {
        let idx = self.indices(vars)?;
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m, c) in &self.terms {
            if idx.iter().map(|&j| m.0[j]).sum::<u32>() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Taylor shift x ↦ x + a for each offset.
    pub fn translate(&self, offsets: &[(&str, MPoly)]) -> Result<MPoly> {
        let shifted: Vec<(&str, MPoly)> = offsets
            .iter()
            .map(|(v, a)| Ok((*v, MPoly::var(&self.reg, self.ring, v)?.try_add(a)?)))
            .collect::<Result<_>>()?;
        self.substitute(&shifted)
    }

    /// Every term has degree `a` in the first pair and `b` in the second.
    pub fn is_bihomogeneous(&self, (a, b): (u32, u32), first: [&str; 2], second: [&str; 2]) -> Result<bool> {
        let i = self.indices(&first)?;
        let j = self.indices(&second)?;
        Ok(self.terms.keys().all(|m| {
            i.iter().map(|&k| m.0[k]).sum::<u32>() == a && j.iter().map(|&k| m.0[k]).sum::<u32>() == b
        }))
    }

    /// Group terms by their exponents in `vars`; each group's coefficient is a polynomial
    /// in the remaining variables.  Groups come in descending order of the `vars` part.
    pub fn collect_in(&self, vars: &[&str]) -> Result<Vec<(Vec<u32>, MPoly)>> {
        let idx = self.indices(vars)?;
        let mut groups: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = Monomial(idx.iter().map(|&j| m.0[j]).collect());
            let mut rest = m.0.clone();
            for &j in &idx {
                rest[j] = 0;
            }
            groups
                .entry(key)
                .or_insert_with(|| MPoly::zero(&self.reg, self.ring))
                .add_term(Monomial(rest), c.clone());
        }
        Ok(groups.into_iter().rev().map(|(k, v)| (k.0, v)).collect())
    }

    /// Coefficients mapped into another ring; terms that map to zero are dropped.
    pub fn map_ring(&self, target: RingDescriptor) -> Result<MPoly> {
        let mut out = MPoly::zero(&self.reg, target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.coerce(target)?);
        }
        Ok(out)
    }

    /// Coefficient-wise map within the same ring (e.g. conjugation).
    pub fn map_coefficients(&self, f: impl Fn(&FieldElem) -> FieldElem) -> MPoly {
        let mut out = MPoly::zero(&self.reg, self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// The same polynomial over another registry, matching variables by name.
    pub fn with_registry(&self, reg: &Arc<VarRegistry>) -> Result<MPoly> {
        let map: Vec<Option<usize>> = self.reg.names.iter().map(|n| reg.index_of(n)).collect();
        let mut out = MPoly::zero(reg, self.ring);
        for (m, c) in &self.terms {
            let mut e = vec![0; reg.len()];
            for (j, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let k = map[j].ok_or_else(|| PolyError::NoSuchVariable(self.reg.names[j].clone()))?;
                    e[k] = x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Standard part and ε coefficient of a polynomial over a dual ring.
    pub fn dual_parts(&self) -> (MPoly, MPoly) {
        let base = self.ring.undual();
        let mut re = MPoly::zero(&self.reg, base);
        let mut eps = MPoly::zero(&self.reg, base);
        for (m, c) in &self.terms {
            let (a, b) = c.dual_parts();
            re.add_term(m.clone(), a);
            eps.add_term(m.clone(), b);
        }
        (re, eps)
    }

    /// Canonical text in the polynomial grammar.
    pub fn print(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let mut cs = c.to_grammar();
            let negative = cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push('-'),
                (_, false) => out.push('+'),
            }
            let mono = self.format_monomial(m);
            if mono.is_empty() {
                out.push_str(&cs);
            } else if cs == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                let n = &self.reg.names[j];
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

// Operator forms panic on registry or ring mismatch; the `try_*` methods report it.
impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.map_coefficients(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(names: &[&str]) -> Arc<VarRegistry> {
        VarRegistry::new(names).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let r = reg(&["x", "y", "z"]);
        let f7 = RingDescriptor::f7();
        let p = parse_poly("z^2 + x*z + y^2 + x*y + x^2 + x + 1", &r, f7).unwrap();
        assert_eq!(p.print(), "x^2+x*y+y^2+x*z+z^2+x+1");
    }

    #[test]
    fn cancellation_leaves_no_terms() {
        let r = reg(&["x"]);
        let p = parse_poly("x - x", &r, RingDescriptor::f7()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn substitution_examples() {
        let f49 = RingDescriptor::f49();
        let r = reg(&["alpha", "beta"]);
        let p = parse_poly("beta^2+1", &r, f49).unwrap();
        let i = MPoly::constant(&r, FieldElem::i(f49).unwrap());
        assert!(p.substitute(&[("beta", i)]).unwrap().is_zero());

        // α(1+β)+β−1 with α = (1−β)/(1+β), denominators cleared: α ↦ 1−β, others × (1+β)
        let r = reg(&["alpha", "alpha'", "beta"]);
        let f7 = RingDescriptor::f7();
        let hom = parse_poly("alpha*(1+beta)+beta*alpha'-alpha'", &r, f7).unwrap();
        let cleared = hom
            .substitute(&[
                ("alpha", parse_poly("1-beta", &r, f7).unwrap()),
                ("alpha'", parse_poly("1+beta", &r, f7).unwrap()),
            ])
            .unwrap();
        assert!(cleared.is_zero());
    }

    #[test]
    fn derivative_in_characteristic_seven() {
        let r = reg(&["beta"]);
        let f7 = RingDescriptor::f7();
        let p = parse_poly("beta^2+1", &r, f7).unwrap();
        assert_eq!(p.partial_derivative("beta").unwrap(), parse_poly("2*beta", &r, f7).unwrap());
        let q = parse_poly("beta^7", &r, f7).unwrap();
        assert!(q.partial_derivative("beta").unwrap().is_zero());
    }

    #[test]
    fn graded_parts() {
        let r = reg(&["x", "y", "z", "t"]);
        let f7 = RingDescriptor::f7();
        let f2 = parse_poly("x*z+y*t", &r, f7).unwrap();
        assert_eq!(f2.graded_part(2, &["x", "y", "z", "t"]).unwrap(), f2);
        let p = parse_poly("1+x+x^2", &r, f7).unwrap();
        assert_eq!(p.graded_part(0, &["x"]).unwrap(), MPoly::from_i64(&r, f7, 1));
        assert!(!f2.is_bihomogeneous((1, 1), ["x", "z"], ["y", "t"]).unwrap());
    }

    #[test]
    fn translation_examples() {
        let r = reg(&["x", "c"]);
        let f7 = RingDescriptor::f7();
        let p = parse_poly("x^2", &r, f7).unwrap();
        let t = p.translate(&[("x", MPoly::from_i64(&r, f7, 1))]).unwrap();
        assert_eq!(t, parse_poly("x^2+2*x+1", &r, f7).unwrap());

        let d = RingDescriptor::f49_dual();
        let x = MPoly::var(&r, d, "x").unwrap();
        let ec = parse_poly("eps*c", &r, d).unwrap();
        assert_eq!(x.translate(&[("x", ec.clone())]).unwrap(), &x + &ec);
        let sq = (&x * &x).translate(&[("x", ec)]).unwrap();
        assert_eq!(sq, parse_poly("x^2+2*eps*x*c", &r, d).unwrap());
    }

    #[test]
    fn collect_and_dual_parts() {
        let r = reg(&["u", "v", "a", "b"]);
        let d = RingDescriptor::f49_dual();
        let p = parse_poly("u*v + eps*a*u*v + 3*eps*b + 2", &r, d).unwrap();
        let (re, ep) = p.dual_parts();
        let f49 = RingDescriptor::f49();
        assert_eq!(re, parse_poly("u*v+2", &r, f49).unwrap());
        assert_eq!(ep, parse_poly("a*u*v+3*b", &r, f49).unwrap());
        let groups = ep.collect_in(&["u", "v"]).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].0, vec![1, 1]);
        assert_eq!(groups[0].1, parse_poly("a", &r, f49).unwrap());
    }

    #[test]
    fn registry_rejects_duplicates() {
        assert!(VarRegistry::new(&["x", "x"]).is_err());
        assert!(VarRegistry::new(&["1x"]).is_err());
        assert!(VarRegistry::new(&["alpha'"]).is_ok());
    }
}
