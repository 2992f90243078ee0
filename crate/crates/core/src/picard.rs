//! Intersection lattices of ℙ¹×ℙ¹ and its iterated blowups (total-transform basis),
//! divisor classes with rational coefficients, pullbacks, double-cover invariants and
//! (−1)-curve contraction by orthogonal projection.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::RingDescriptor;
use crate::poly::{parse_poly, VarRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("classes live on different lattices")]
    LatticeMismatch,
    #[error("basis name `{0}` is already used")]
    DuplicateName(String),
    #[error("unknown basis class `{0}`")]
    UnknownBasis(String),
    #[error("branch class is not twice L: B - 2L = {0}")]
    BranchParity(String),
    #[error("malformed lattice: {0}")]
    Shape(String),
    #[error("cannot parse class `{text}`: {message}")]
    Parse { text: String, message: String },
    #[error("contracted classes must be pairwise orthogonal (-1)-classes")]
    NotContractible,
}

pub type Result<T> = std::result::Result<T, PicardError>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A free module with named basis, a symmetric rational bilinear form and a canonical
/// class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    names: Vec<String>,
    gram: Vec<Vec<BigRational>>,
    canonical: Vec<BigRational>,
    centers: Vec<(String, String)>,
}

impl Lattice {
    pub fn new(names: Vec<String>, gram: Vec<Vec<BigRational>>, canonical: Vec<BigRational>) -> Result<Arc<Lattice>> {
        let n = names.len();
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(PicardError::DuplicateName(name.clone()));
            }
        }
        if gram.len() != n || gram.iter().any(|r| r.len() != n) || canonical.len() != n {
            return Err(PicardError::Shape(format!("basis has {n} classes")));
        }
        for a in 0..n {
            for b in 0..a {
                if gram[a][b] != gram[b][a] {
                    return Err(PicardError::Shape(format!("form is not symmetric at ({a},{b})")));
                }
            }
        }
        Ok(Arc::new(Lattice {
            names,
            gram,
            canonical,
            centers: Vec::new(),
        }))
    }

    /// Pic(ℙ¹×ℙ¹) with rulings h1, h2 and K = −2h1 − 2h2.
    pub fn p1xp1() -> Arc<Lattice> {
        Lattice::new(
            vec!["h1".into(), "h2".into()],
            vec![vec![q(0), q(1)], vec![q(1), q(0)]],
            vec![q(-2), q(-2)],
        )
        .expect("well-formed")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// Centers recorded by `blowup`, as (exceptional name, center tag).
    pub fn centers(&self) -> &[(String, String)] {
        &self.centers
    }

    pub fn canonical(self: &Arc<Self>) -> DivisorClass {
        DivisorClass {
            lattice: self.clone(),
            coeffs: self.canonical.clone(),
        }
    }

    pub fn zero(self: &Arc<Self>) -> DivisorClass {
        DivisorClass {
            lattice: self.clone(),
            coeffs: vec![BigRational::zero(); self.rank()],
        }
    }

    pub fn basis(self: &Arc<Self>, name: &str) -> Result<DivisorClass> {
        let k = self.index_of(name).ok_or_else(|| PicardError::UnknownBasis(name.to_string()))?;
        let mut c = self.zero();
        c.coeffs[k] = BigRational::one();
        Ok(c)
    }

    pub fn from_integers(self: &Arc<Self>, terms: &[(&str, i64)]) -> Result<DivisorClass> {
        let mut c = self.zero();
        for (name, n) in terms {
            let k = self.index_of(name).ok_or_else(|| PicardError::UnknownBasis(name.to_string()))?;
            c.coeffs[k] += q(*n);
        }
        Ok(c)
    }

    /// Parse an integer linear combination such as `3*h1+3*h2-n1-2*g1`.
    pub fn parse_class(self: &Arc<Self>, text: &str) -> Result<DivisorClass> {
        let err = |message: String| PicardError::Parse {
            text: text.to_string(),
            message,
        };
        let reg = VarRegistry::new(&self.names).map_err(|e| err(e.to_string()))?;
        let p = parse_poly(text, &reg, RingDescriptor::integers()).map_err(|e| err(e.to_string()))?;
        let mut c = self.zero();
        for (m, coef) in p.terms() {
            let e = m.exponents();
            if m.degree() != 1 {
                return Err(err("not a linear combination of basis classes".into()));
            }
            let k = e.iter().position(|&x| x == 1).expect("degree one");
            c.coeffs[k] = BigRational::from_integer(coef.to_bigint().expect("integer ring"));
        }
        Ok(c)
    }

    /// Blow up a point: adds an orthogonal exceptional class of square −1 and updates
    /// K ↦ σ*K + E.  Returns the new lattice and the pullback from the old one.
    pub fn blowup(self: &Arc<Self>, name: &str, center: &str) -> Result<(Arc<Lattice>, Pullback)> {
        if self.index_of(name).is_some() {
            return Err(PicardError::DuplicateName(name.to_string()));
        }
        let n = self.rank();
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut gram: Vec<Vec<BigRational>> = self
            .gram
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(BigRational::zero());
                r
            })
            .collect();
        let mut last = vec![BigRational::zero(); n + 1];
        last[n] = q(-1);
        gram.push(last);
        let mut canonical = self.canonical.clone();
        canonical.push(q(1));
        let mut centers = self.centers.clone();
        centers.push((name.to_string(), center.to_string()));
        let target = Arc::new(Lattice {
            names,
            gram,
            canonical,
            centers,
        });
        Ok((
            target.clone(),
            Pullback {
                source: self.clone(),
                target,
            },
        ))
    }

    /// Blow up several points in order.
    pub fn blowup_many(self: &Arc<Self>, points: &[(&str, &str)]) -> Result<(Arc<Lattice>, Pullback)> {
        let mut cur = self.clone();
        for (name, center) in points {
            cur = cur.blowup(name, center)?.0;
        }
        Ok((
            cur.clone(),
            Pullback {
                source: self.clone(),
                target: cur,
            },
        ))
    }

    /// Same basis with the form multiplied by `factor` (the image of a degree-`factor`
    /// pullback) and the given canonical class.
    pub fn scaled(&self, factor: i64, canonical: Vec<BigRational>) -> Result<Arc<Lattice>> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x * q(factor)).collect())
            .collect();
        Lattice::new(self.names.clone(), gram, canonical)
    }

    pub fn determinant(&self) -> BigRational {
        let n = self.rank();
        let mut m = self.gram.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
        det
    }

    /// (positive, negative, zero) counts of a diagonalization by congruence.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.rank();
        let mut m = self.gram.clone();
        let mut diag = Vec::new();
        let mut alive: Vec<usize> = (0..n).collect();
        while !alive.is_empty() {
            // a vector with nonzero square: a basis vector, or a sum of two
            let pivot = alive.iter().copied().find(|&k| !m[k][k].is_zero());
            let k = match pivot {
                Some(k) => k,
                None => {
                    let pair = alive.iter().copied().find_map(|a| {
                        alive.iter().copied().find(|&b| b != a && !m[a][b].is_zero()).map(|b| (a, b))
                    });
                    let Some((a, b)) = pair else {
                        diag.extend(alive.iter().map(|_| BigRational::zero()));
                        break;
                    };
                    // replace a by a + b, which has square 2·(a·b) ≠ 0
                    for r in 0..n {
                        let t = m[b][r].clone();
                        m[a][r] += t;
                    }
                    for r in 0..n {
                        let t = m[r][b].clone();
                        m[r][a] += t;
                    }
                    a
                }
            };
            let d = m[k][k].clone();
            alive.retain(|&x| x != k);
            for &r in &alive {
                let f = &m[r][k] / &d;
                for c in 0..n {
                    let t = &f * &m[k][c];
                    m[r][c] -= t;
                }
                for c in 0..n {
                    let t = &f * &m[c][k];
                    m[c][r] -= t;
                }
            }
            diag.push(d);
        }
        let pos = diag.iter().filter(|x| x.is_positive()).count();
        let neg = diag.iter().filter(|x| x.is_negative()).count();
        (pos, neg, n - pos - neg)
    }

    pub fn is_unimodular(&self) -> bool {
        self.gram.iter().flatten().all(|x| x.is_integer()) && self.determinant().abs().is_one()
    }
}

/// σ*: classes of the source lattice as classes of the blown-up one.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub source: Arc<Lattice>,
    pub target: Arc<Lattice>,
}

impl Pullback {
    pub fn apply(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if *d.lattice != *self.source {
            return Err(PicardError::LatticeMismatch);
        }
        let mut c = self.target.zero();
        c.coeffs[..d.coeffs.len()].clone_from_slice(&d.coeffs);
        Ok(c)
    }
}

#[derive(Debug, Clone)]
pub struct DivisorClass {
    lattice: Arc<Lattice>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        *self.lattice == *other.lattice && self.coeffs == other.coeffs
    }
}

impl DivisorClass {
    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coefficient(&self, name: &str) -> Result<BigRational> {
        let k = self.lattice.index_of(name).ok_or_else(|| PicardError::UnknownBasis(name.to_string()))?;
        Ok(self.coeffs[k].clone())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integral(&self) -> bool {
        self.denominator().is_one()
    }

    fn check(&self, o: &DivisorClass) -> Result<()> {
        if *self.lattice == *o.lattice {
            Ok(())
        } else {
            Err(PicardError::LatticeMismatch)
        }
    }

    pub fn intersect(&self, o: &DivisorClass) -> Result<BigRational> {
        self.check(o)?;
        let g = &self.lattice.gram;
        let mut acc = BigRational::zero();
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() && !g[a][b].is_zero() {
                    acc += x * y * &g[a][b];
                }
            }
        }
        Ok(acc)
    }

    pub fn square(&self) -> BigRational {
        self.intersect(self).expect("same lattice")
    }

    pub fn try_add(&self, o: &DivisorClass) -> Result<DivisorClass> {
        self.check(o)?;
        Ok(DivisorClass {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, o: &DivisorClass) -> Result<DivisorClass> {
        self.try_add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, f: &BigRational) -> DivisorClass {
        DivisorClass {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|a| a * f).collect(),
        }
    }

    pub fn times(&self, n: i64) -> DivisorClass {
        self.scale(&q(n))
    }

    pub fn half(&self) -> DivisorClass {
        self.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Products with every basis class.
    pub fn products(&self) -> Vec<BigRational> {
        let n = self.lattice.rank();
        (0..n)
            .map(|b| {
                (0..n)
                    .map(|a| &self.coeffs[a] * &self.lattice.gram[a][b])
                    .fold(BigRational::zero(), |x, y| x + y)
            })
            .collect()
    }

    /// Same class on another lattice with the same basis names (for example a scaled copy).
    pub fn transport(&self, target: &Arc<Lattice>) -> Result<DivisorClass> {
        if self.lattice.names != target.names {
            return Err(PicardError::LatticeMismatch);
        }
        Ok(DivisorClass {
            lattice: target.clone(),
            coeffs: self.coeffs.clone(),
        })
    }
}

impl std::ops::Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        self.try_add(o).expect("lattice mismatch")
    }
}

impl std::ops::Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        self.try_sub(o).expect("lattice mismatch")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(&self.lattice.names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            if a.is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{a}*{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Equality of coefficient vectors (the basis is a basis of the Néron–Severi group).
pub fn verify_class_relation(lhs: &DivisorClass, rhs: &DivisorClass) -> Result<bool> {
    lhs.check(rhs)?;
    Ok(lhs.coeffs == rhs.coeffs)
}

/// Equality of intersection numbers with every basis class.
pub fn numerically_equal(lhs: &DivisorClass, rhs: &DivisorClass) -> Result<bool> {
    lhs.check(rhs)?;
    Ok(lhs.products() == rhs.products())
}

#[derive(Debug, Clone)]
pub struct CoverStats {
    pub k_squared: BigRational,
    pub chi: BigRational,
    pub k_plus_l: DivisorClass,
}

/// Invariants of the double cover branched along `branch` = 2L over a smooth base with
/// canonical class `k` and holomorphic Euler characteristic `chi_base`.
pub fn double_cover_stats(
    branch: &DivisorClass,
    l: &DivisorClass,
    k: &DivisorClass,
    chi_base: i64,
) -> Result<CoverStats> {
    let diff = branch.try_sub(&l.times(2))?;
    if !diff.is_zero() {
        return Err(PicardError::BranchParity(diff.to_string()));
    }
    let kl = k.try_add(l)?;
    let k_squared = q(2) * kl.square();
    let chi = q(2 * chi_base) + l.intersect(&kl)? / q(2);
    Ok(CoverStats {
        k_squared,
        chi,
        k_plus_l: kl,
    })
}

/// τ*τ_*D for the contraction of pairwise orthogonal (−1)-classes: D + Σ (D·G) G.
pub fn contract_projection(d: &DivisorClass, curves: &[DivisorClass]) -> Result<DivisorClass> {
    for (a, g) in curves.iter().enumerate() {
        if g.intersect(g)? != q(-1) {
            return Err(PicardError::NotContractible);
        }
        for h in &curves[..a] {
            if !g.intersect(h)?.is_zero() {
                return Err(PicardError::NotContractible);
            }
        }
    }
    let mut out = d.clone();
    for g in curves {
        out = out.try_add(&g.scale(&d.intersect(g)?))?;
    }
    Ok(out)
}

/// Render an exact rational compactly ("-4", "1/2").
pub fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.to_integer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer value of an exact rational, if it is one and fits.
pub fn as_i64(x: &BigRational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_and_blowups() {
        let p = Lattice::p1xp1();
        assert_eq!(p.signature(), (1, 1, 0));
        assert!(p.is_unimodular());
        let k = p.canonical();
        assert_eq!(k.square(), q(8));
        let (b, sigma) = p.blowup("e1", "pt").unwrap();
        let e = b.basis("e1").unwrap();
        assert_eq!(e.square(), q(-1));
        assert_eq!(b.canonical().square(), q(7));
        let h = sigma.apply(&p.basis("h1").unwrap()).unwrap();
        assert_eq!(h.intersect(&e).unwrap(), q(0));
        assert!(matches!(b.blowup("e1", "x"), Err(PicardError::DuplicateName(_))));
        assert_eq!(b.signature(), (1, 2, 0));
    }

    #[test]
    fn parse_and_display() {
        let (l, _) = Lattice::p1xp1().blowup_many(&[("e1", "a"), ("e2", "b")]).unwrap();
        let c = l.parse_class("3*h1+3*h2-e1-2*e2").unwrap();
        assert_eq!(c.to_string(), "3*h1 + 3*h2 - e1 - 2*e2");
        assert_eq!(c.half().denominator(), BigInt::from(2));
        assert!(l.parse_class("h1*h2").is_err());
        assert!(l.parse_class("x1").is_err());
    }

    #[test]
    fn cover_parity() {
        let p = Lattice::p1xp1();
        let l = p.parse_class("h1+h2").unwrap();
        let b = p.parse_class("2*h1+h2").unwrap();
        assert!(matches!(
            double_cover_stats(&b, &l, &p.canonical(), 1),
            Err(PicardError::BranchParity(_))
        ));
        let zero = p.zero();
        let s = double_cover_stats(&zero, &zero, &p.canonical(), 1).unwrap();
        assert_eq!((s.k_squared, s.chi), (q(16), q(2)));
    }

    #[test]
    fn cover_branched_on_a_2_2_curve() {
        // Degree-4 del Pezzo: K = π*(−1,−1), K² = 2·2.
        let p = Lattice::p1xp1();
        let b = p.parse_class("2*h1+2*h2").unwrap();
        let l = p.parse_class("h1+h2").unwrap();
        let s = double_cover_stats(&b, &l, &p.canonical(), 1).unwrap();
        assert_eq!((s.k_squared, s.chi), (q(4), q(1)));
    }

    #[test]
    fn contraction_of_exceptional() {
        let (l, _) = Lattice::p1xp1().blowup("e", "pt").unwrap();
        let e = l.basis("e").unwrap();
        let k = l.canonical();
        let down = contract_projection(&k, std::slice::from_ref(&e)).unwrap();
        assert_eq!(down, l.parse_class("-2*h1-2*h2").unwrap());
        assert_eq!(down.square(), q(8));
        let bad = l.parse_class("h1").unwrap();
        assert!(contract_projection(&k, &[bad]).is_err());
    }

    #[test]
    fn hyperbolic_plane_signature_without_diagonal() {
        let l = Lattice::new(
            vec!["a".into(), "b".into()],
            vec![vec![q(0), q(2)], vec![q(2), q(0)]],
            vec![q(0), q(0)],
        )
        .unwrap();
        assert_eq!(l.signature(), (1, 1, 0));
        assert_eq!(l.determinant(), q(-4));
        assert!(!l.is_unimodular());
    }
}
