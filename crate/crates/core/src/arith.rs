//! Exact coefficient rings: ℤ, ℤ/pᵏ, 𝔽p, 𝔽p[i]/(i²+1) and dual numbers R[ε]/(ε²).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },
    #[error("{0} is not a unit")]
    NonUnit(FieldElem),
    #[error("{root} is not a simple root modulo {p}")]
    NotSimpleRoot { p: u64, root: u64 },
    #[error("{root} is not a root modulo {p}")]
    NotARoot { p: u64, root: u64 },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("{elem} has no image in {target}")]
    NoImage { elem: FieldElem, target: RingDescriptor },
}

pub type Result<T> = std::result::Result<T, ArithError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    ModPrimePower { p: u64, k: u32 },
    PrimeField { p: u64 },
    /// 𝔽p[i]/(i²+1), only for p where −1 is a non-square.
    QuadraticExt { p: u64 },
}

impl BaseRing {
    fn modulus(self) -> Option<u64> {
        match self {
            BaseRing::Integers => None,
            BaseRing::ModPrimePower { p, k } => Some(p.pow(k)),
            BaseRing::PrimeField { p } | BaseRing::QuadraticExt { p } => Some(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    base: BaseRing,
    dual: bool,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor {
            base: BaseRing::Integers,
            dual: false,
        }
    }

    pub fn mod_prime_power(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) || k == 0 {
            return Err(ArithError::InvalidRing(format!("ZZ/{p}^{k}")));
        }
        match p.checked_pow(k) {
            Some(m) if m < (1 << 62) => Ok(RingDescriptor {
                base: BaseRing::ModPrimePower { p, k },
                dual: false,
            }),
            _ => Err(ArithError::InvalidRing(format!(
                "modulus {p}^{k} exceeds the supported range"
            ))),
        }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(ArithError::InvalidRing(format!("GF({p})")));
        }
        Ok(RingDescriptor {
            base: BaseRing::PrimeField { p },
            dual: false,
        })
    }

    pub fn quadratic_ext(p: u64) -> Result<Self> {
        if !is_prime(p) || p % 4 != 3 || p >= (1 << 31) {
            return Err(ArithError::InvalidRing(format!(
                "GF({p})[i]: -1 must be a non-square mod an odd prime"
            )));
        }
        Ok(RingDescriptor {
            base: BaseRing::QuadraticExt { p },
            dual: false,
        })
    }

    pub fn dual(self) -> Result<Self> {
        if self.dual {
            return Err(ArithError::InvalidRing(format!("{self}[eps] nests dual numbers")));
        }
        Ok(RingDescriptor {
            base: self.base,
            dual: true,
        })
    }

    /// 𝔽7, 𝔽49 and 𝔽49[ε], the rings the verifier works over most of the time.
    pub fn f7() -> Self {
        Self::prime_field(7).expect("7 is prime")
    }

    pub fn f49() -> Self {
        Self::quadratic_ext(7).expect("-1 is a non-square mod 7")
    }

    pub fn f49_dual() -> Self {
        Self::f49().dual().expect("F49 is not dual")
    }

    pub fn base(self) -> BaseRing {
        self.base
    }

    pub fn is_dual(self) -> bool {
        self.dual
    }

    /// The ring with the ε part dropped.
    pub fn undual(self) -> Self {
        RingDescriptor {
            base: self.base,
            dual: false,
        }
    }

    pub fn is_field(self) -> bool {
        !self.dual
            && matches!(
                self.base,
                BaseRing::PrimeField { .. } | BaseRing::QuadraticExt { .. }
            )
    }

    pub fn has_i(self) -> bool {
        matches!(self.base, BaseRing::QuadraticExt { .. })
    }

    pub fn characteristic(self) -> u64 {
        match self.base {
            BaseRing::Integers => 0,
            BaseRing::ModPrimePower { p, .. }
            | BaseRing::PrimeField { p }
            | BaseRing::QuadraticExt { p } => p,
        }
    }

    /// Every element of a finite field, in a fixed order (a + b·i with a fastest).
    pub fn elements(self) -> Result<Vec<FieldElem>> {
        match (self.base, self.dual) {
            (BaseRing::PrimeField { p }, false) => {
                Ok((0..p).map(|a| FieldElem::from_u64(self, a)).collect())
            }
            (BaseRing::QuadraticExt { p }, false) => Ok((0..p)
                .flat_map(|b| (0..p).map(move |a| (a, b)))
                .map(|(a, b)| FieldElem::quad(self, a as i64, b as i64))
                .collect()),
            _ => Err(ArithError::InvalidRing(format!(
                "{self} is not a finite field"
            ))),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseRing::Integers => write!(f, "ZZ")?,
            BaseRing::ModPrimePower { p, k } => write!(f, "ZZ/{p}^{k}")?,
            BaseRing::PrimeField { p } => write!(f, "GF({p})")?,
            BaseRing::QuadraticExt { p } => write!(f, "GF({p})[i]")?,
        }
        if self.dual {
            write!(f, "[eps]")?;
        }
        Ok(())
    }
}

/// Payload of an element of a base ring, always canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Coord {
    Int(BigInt),
    Res(u64),
    Quad(u64, u64),
}

fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| reduce_i128(s0, m))
}

impl Coord {
    fn zero(base: BaseRing) -> Coord {
        Coord::from_i128(base, 0)
    }

    fn from_i128(base: BaseRing, n: i128) -> Coord {
        match base {
            BaseRing::Integers => Coord::Int(BigInt::from(n)),
            BaseRing::ModPrimePower { .. } | BaseRing::PrimeField { .. } => {
                Coord::Res(reduce_i128(n, base.modulus().unwrap()))
            }
            BaseRing::QuadraticExt { p } => Coord::Quad(reduce_i128(n, p), 0),
        }
    }

    fn from_bigint(base: BaseRing, n: &BigInt) -> Coord {
        match base.modulus() {
            None => Coord::Int(n.clone()),
            Some(m) => {
                let r = n.mod_floor(&BigInt::from(m)).to_u64().unwrap();
                match base {
                    BaseRing::QuadraticExt { .. } => Coord::Quad(r, 0),
                    _ => Coord::Res(r),
                }
            }
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coord::Int(n) => n.is_zero(),
            Coord::Res(r) => *r == 0,
            Coord::Quad(a, b) => *a == 0 && *b == 0,
        }
    }

    fn add(&self, o: &Coord, base: BaseRing) -> Coord {
        match (self, o) {
            (Coord::Int(a), Coord::Int(b)) => Coord::Int(a + b),
            (Coord::Res(a), Coord::Res(b)) => {
                let m = base.modulus().unwrap();
                Coord::Res(((*a as u128 + *b as u128) % m as u128) as u64)
            }
            (Coord::Quad(a, b), Coord::Quad(c, d)) => {
                let p = base.modulus().unwrap();
                Coord::Quad((a + c) % p, (b + d) % p)
            }
            _ => unreachable!("coordinate kinds follow the descriptor"),
        }
    }

    fn neg(&self, base: BaseRing) -> Coord {
        match self {
            Coord::Int(a) => Coord::Int(-a),
            Coord::Res(a) => {
                let m = base.modulus().unwrap();
                Coord::Res((m - a) % m)
            }
            Coord::Quad(a, b) => {
                let p = base.modulus().unwrap();
                Coord::Quad((p - a) % p, (p - b) % p)
            }
        }
    }

    fn mul(&self, o: &Coord, base: BaseRing) -> Coord {
        match (self, o) {
            (Coord::Int(a), Coord::Int(b)) => Coord::Int(a * b),
            (Coord::Res(a), Coord::Res(b)) => Coord::Res(mulmod(*a, *b, base.modulus().unwrap())),
            (Coord::Quad(a, b), Coord::Quad(c, d)) => {
                let p = base.modulus().unwrap();
                let re = (mulmod(*a, *c, p) + p - mulmod(*b, *d, p)) % p;
                let im = (mulmod(*a, *d, p) + mulmod(*b, *c, p)) % p;
                Coord::Quad(re, im)
            }
            _ => unreachable!("coordinate kinds follow the descriptor"),
        }
    }

    fn inv(&self, base: BaseRing) -> Option<Coord> {
        match self {
            Coord::Int(a) => (a.abs().is_one()).then(|| Coord::Int(a.clone())),
            Coord::Res(a) => inv_mod(*a, base.modulus().unwrap()).map(Coord::Res),
            Coord::Quad(a, b) => {
                let p = base.modulus().unwrap();
                let norm = (mulmod(*a, *a, p) + mulmod(*b, *b, p)) % p;
                let ninv = inv_mod(norm, p)?;
                Some(Coord::Quad(mulmod(*a, ninv, p), mulmod((p - b) % p, ninv, p)))
            }
        }
    }
}

/// An exact ring element tagged with its ring.  Non-dual elements keep a zero ε part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    ring: RingDescriptor,
    re: Coord,
    eps: Coord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// The `arith` entry point: `y` is ignored for negation.
pub fn arith(op: ArithOp, x: &FieldElem, y: &FieldElem) -> Result<FieldElem> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Neg => Ok(-x),
    }
}

impl FieldElem {
    pub fn zero(ring: RingDescriptor) -> Self {
        FieldElem {
            ring,
            re: Coord::zero(ring.base),
            eps: Coord::zero(ring.base),
        }
    }

    pub fn one(ring: RingDescriptor) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn from_i64(ring: RingDescriptor, n: i64) -> Self {
        FieldElem {
            ring,
            re: Coord::from_i128(ring.base, n as i128),
            eps: Coord::zero(ring.base),
        }
    }

    pub fn from_u64(ring: RingDescriptor, n: u64) -> Self {
        FieldElem {
            ring,
            re: Coord::from_i128(ring.base, n as i128),
            eps: Coord::zero(ring.base),
        }
    }

    pub fn from_bigint(ring: RingDescriptor, n: &BigInt) -> Self {
        FieldElem {
            ring,
            re: Coord::from_bigint(ring.base, n),
            eps: Coord::zero(ring.base),
        }
    }

    /// a + b·i in a ring containing i.
    ///
    /// # Panics
    /// If the ring has no adjoined square root of −1.
    pub fn quad(ring: RingDescriptor, a: i64, b: i64) -> Self {
        let BaseRing::QuadraticExt { p } = ring.base else {
            panic!("{ring} has no i");
        };
        FieldElem {
            ring,
            re: Coord::Quad(reduce_i128(a as i128, p), reduce_i128(b as i128, p)),
            eps: Coord::zero(ring.base),
        }
    }

    pub fn i(ring: RingDescriptor) -> Result<Self> {
        if !ring.has_i() {
            return Err(ArithError::InvalidRing(format!("{ring} has no i")));
        }
        Ok(Self::quad(ring, 0, 1))
    }

    pub fn eps(ring: RingDescriptor) -> Result<Self> {
        if !ring.dual {
            return Err(ArithError::InvalidRing(format!("{ring} has no eps")));
        }
        Ok(FieldElem {
            ring,
            re: Coord::zero(ring.base),
            eps: Coord::from_i128(ring.base, 1),
        })
    }

    /// u + v·ε from two elements of the base ring.
    pub fn from_dual_parts(re: &FieldElem, eps: &FieldElem) -> Result<Self> {
        if re.ring != eps.ring {
            return Err(ArithError::RingMismatch {
                left: re.ring,
                right: eps.ring,
            });
        }
        let ring = re.ring.dual()?;
        Ok(FieldElem {
            ring,
            re: re.re.clone(),
            eps: eps.re.clone(),
        })
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    /// Standard part and ε coefficient, both in the non-dual ring.
    pub fn dual_parts(&self) -> (FieldElem, FieldElem) {
        let base = self.ring.undual();
        (
            FieldElem {
                ring: base,
                re: self.re.clone(),
                eps: Coord::zero(base.base),
            },
            FieldElem {
                ring: base,
                re: self.eps.clone(),
                eps: Coord::zero(base.base),
            },
        )
    }

    /// Canonical residue for ℤ/m and 𝔽p (or the rational part in 𝔽p[i]).
    pub fn residue(&self) -> Option<u64> {
        match self.re {
            Coord::Res(r) => Some(r),
            Coord::Quad(a, _) => Some(a),
            Coord::Int(_) => None,
        }
    }

    /// (a, b) for a + b·i.
    pub fn quad_parts(&self) -> Option<(u64, u64)> {
        match self.re {
            Coord::Quad(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.re {
            Coord::Int(n) => Some(n.clone()),
            Coord::Res(r) => Some(BigInt::from(*r)),
            Coord::Quad(..) => None,
        }
    }

    /// Value as a small signed integer, choosing the symmetric representative mod m.
    pub fn to_symmetric_i64(&self) -> Option<i64> {
        if !self.eps.is_zero() {
            return None;
        }
        match &self.re {
            Coord::Int(n) => n.to_i64(),
            Coord::Res(r) => {
                let m = self.ring.base.modulus().unwrap();
                Some(if *r > m / 2 { *r as i64 - m as i64 } else { *r as i64 })
            }
            Coord::Quad(a, 0) => {
                let p = self.ring.base.modulus().unwrap();
                Some(if *a > p / 2 { *a as i64 - p as i64 } else { *a as i64 })
            }
            Coord::Quad(..) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.ring)
    }

    pub fn is_unit(&self) -> bool {
        self.re.inv(self.ring.base).is_some()
    }

    fn check(&self, o: &FieldElem) -> Result<()> {
        if self.ring != o.ring {
            return Err(ArithError::RingMismatch {
                left: self.ring,
                right: o.ring,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        let b = self.ring.base;
        Ok(FieldElem {
            ring: self.ring,
            re: self.re.add(&o.re, b),
            eps: self.eps.add(&o.eps, b),
        })
    }

    pub fn try_sub(&self, o: &FieldElem) -> Result<FieldElem> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        let b = self.ring.base;
        let re = self.re.mul(&o.re, b);
        let eps = if self.ring.dual {
            self.re.mul(&o.eps, b).add(&self.eps.mul(&o.re, b), b)
        } else {
            Coord::zero(b)
        };
        Ok(FieldElem {
            ring: self.ring,
            re,
            eps,
        })
    }

    pub fn invert(&self) -> Result<FieldElem> {
        let b = self.ring.base;
        let Some(inv) = self.re.inv(b) else {
            return Err(ArithError::NonUnit(self.clone()));
        };
        // (u + vε)⁻¹ = u⁻¹ − v·u⁻²·ε
        let eps = if self.ring.dual {
            self.eps.mul(&inv, b).mul(&inv, b).neg(b)
        } else {
            Coord::zero(b)
        };
        Ok(FieldElem {
            ring: self.ring,
            re: inv,
            eps,
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = Self::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the natural map into `target`: ℤ → anything, ℤ/pᵏ → ℤ/pʲ (j ≤ k) or 𝔽p,
    /// 𝔽p → 𝔽p[i], R → R[ε].  Dropping a nonzero ε part is refused.
    pub fn coerce(&self, target: RingDescriptor) -> Result<FieldElem> {
        if self.ring == target {
            return Ok(self.clone());
        }
        let fail = || ArithError::NoImage {
            elem: self.clone(),
            target,
        };
        if self.ring.dual && !target.dual {
            return Err(fail());
        }
        let map = |c: &Coord| -> Result<Coord> {
            let tb = target.base;
            match (self.ring.base, c) {
                (BaseRing::Integers, Coord::Int(n)) => Ok(Coord::from_bigint(tb, n)),
                (BaseRing::ModPrimePower { p, .. } | BaseRing::PrimeField { p }, Coord::Res(r)) => {
                    let ok = match tb {
                        BaseRing::ModPrimePower { p: q, k } => {
                            q == p && self.ring.base.modulus().unwrap() % q.pow(k) == 0
                        }
                        BaseRing::PrimeField { p: q } | BaseRing::QuadraticExt { p: q } => q == p,
                        BaseRing::Integers => false,
                    };
                    if ok {
                        Ok(Coord::from_i128(tb, *r as i128))
                    } else {
                        Err(fail())
                    }
                }
                (BaseRing::QuadraticExt { p }, Coord::Quad(..)) if tb == (BaseRing::QuadraticExt { p }) => {
                    Ok(c.clone())
                }
                _ => Err(fail()),
            }
        };
        Ok(FieldElem {
            ring: target,
            re: map(&self.re)?,
            eps: map(&self.eps)?,
        })
    }

    /// Image under i ↦ −i (identity on rings without i).
    pub fn conjugate(&self) -> FieldElem {
        let conj = |c: &Coord| match c {
            Coord::Quad(a, b) => {
                let p = self.ring.base.modulus().unwrap();
                Coord::Quad(*a, (p - b) % p)
            }
            other => other.clone(),
        };
        FieldElem {
            ring: self.ring,
            re: conj(&self.re),
            eps: conj(&self.eps),
        }
    }

    /// Rendering in the polynomial grammar: an integer, or a parenthesised expression in
    /// `i` and `eps`.
    pub fn to_grammar(&self) -> String {
        let base_str = |c: &Coord| -> String {
            match c {
                Coord::Int(n) => n.to_string(),
                Coord::Res(r) => r.to_string(),
                Coord::Quad(a, 0) => a.to_string(),
                Coord::Quad(0, 1) => "i".to_string(),
                Coord::Quad(0, b) => format!("{b}*i"),
                Coord::Quad(a, 1) => format!("({a}+i)"),
                Coord::Quad(a, b) => format!("({a}+{b}*i)"),
            }
        };
        if self.eps.is_zero() {
            return base_str(&self.re);
        }
        let e = if matches!(self.eps, Coord::Res(1) | Coord::Quad(1, 0))
            || matches!(&self.eps, Coord::Int(n) if n.is_one())
        {
            "eps".to_string()
        } else {
            format!("{}*eps", base_str(&self.eps))
        };
        if self.re.is_zero() {
            e
        } else {
            format!("({}+{})", base_str(&self.re), e)
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_grammar();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(&s);
        f.write_str(s)
    }
}

// Operator forms panic on a ring mismatch; use the `try_*` methods when rings may differ.
impl std::ops::Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        self.try_add(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self.try_sub(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let b = self.ring.base;
        FieldElem {
            ring: self.ring,
            re: self.re.neg(b),
            eps: self.eps.neg(b),
        }
    }
}

fn eval_int_poly(f: &[i64], r: &FieldElem) -> FieldElem {
    let ring = r.ring();
    f.iter().rev().fold(FieldElem::zero(ring), |acc, &c| {
        &(&acc * r) + &FieldElem::from_i64(ring, c)
    })
}

fn derivative(f: &[i64]) -> Vec<i64> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c * j as i64)
        .collect()
}

/// Lift a simple root `r0` of `f` (coefficients low to high) from ℤ/p to ℤ/pᵏ, one
/// p-power at a time with the fixed slope f′(r0)⁻¹.
pub fn hensel_lift(f: &[i64], p: u64, r0: u64, k: u32) -> Result<FieldElem> {
    let fp = RingDescriptor::mod_prime_power(p, 1)?;
    let root = FieldElem::from_u64(fp, r0);
    if !eval_int_poly(f, &root).is_zero() {
        return Err(ArithError::NotARoot { p, root: r0 % p });
    }
    let slope = eval_int_poly(&derivative(f), &root);
    if !slope.is_unit() {
        return Err(ArithError::NotSimpleRoot { p, root: r0 % p });
    }
    let mut r = root;
    for j in 2..=k {
        let ring = RingDescriptor::mod_prime_power(p, j)?;
        let r_j = r.coerce_lift(ring);
        let slope_inv = eval_int_poly(&derivative(f), &FieldElem::from_u64(ring, r0)).invert()?;
        r = &r_j - &(&eval_int_poly(f, &r_j) * &slope_inv);
    }
    debug_assert!(eval_int_poly(f, &r).is_zero());
    Ok(r)
}

impl FieldElem {
    /// Least non-negative representative reinterpreted in a finer modulus.
    fn coerce_lift(&self, target: RingDescriptor) -> FieldElem {
        FieldElem::from_u64(target, self.residue().expect("residue ring"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z343() -> RingDescriptor {
        RingDescriptor::mod_prime_power(7, 3).unwrap()
    }

    #[test]
    fn defining_relations() {
        let f49 = RingDescriptor::f49();
        let i = FieldElem::i(f49).unwrap();
        assert_eq!(&i * &i, FieldElem::from_i64(f49, -1));
        let d = RingDescriptor::f49_dual();
        let e = FieldElem::eps(d).unwrap();
        assert!((&e * &e).is_zero());
    }

    #[test]
    fn square_of_143_mod_343() {
        // 143² = 20449 = 59·343 + 212
        assert_eq!(143 * 143, 20449);
        assert_eq!(20449 / 343, 59);
        assert_eq!(20449 - 59 * 343, 212);
        let r = FieldElem::from_i64(z343(), 143);
        assert_eq!((&r * &r).residue(), Some(212));
    }

    #[test]
    fn inverses() {
        let f49 = RingDescriptor::f49();
        let i = FieldElem::i(f49).unwrap();
        assert_eq!(i.invert().unwrap(), -&i);
        assert!(FieldElem::one(f49).invert().unwrap().is_one());
        let seven = FieldElem::from_i64(z343(), 7);
        assert_eq!(seven.invert(), Err(ArithError::NonUnit(seven.clone())));
        let x = FieldElem::from_dual_parts(
            &FieldElem::quad(f49, 3, 2),
            &FieldElem::quad(f49, 1, 5),
        )
        .unwrap();
        assert!((&x * &x.invert().unwrap()).is_one());
    }

    #[test]
    fn mismatch_is_typed() {
        let a = FieldElem::one(RingDescriptor::f7());
        let b = FieldElem::one(RingDescriptor::f49());
        assert!(matches!(
            arith(ArithOp::Add, &a, &b),
            Err(ArithError::RingMismatch { .. })
        ));
    }

    #[test]
    fn hensel_examples() {
        let f = [-1, 0, 1, 1];
        assert_eq!(hensel_lift(&f, 7, 3, 1).unwrap().residue(), Some(3));
        assert_eq!(hensel_lift(&f, 7, 3, 2).unwrap().residue(), Some(45));
        assert_eq!(hensel_lift(&f, 7, 3, 3).unwrap().residue(), Some(143));
        // brute force mod 49
        let roots: Vec<i64> = (0i64..49)
            .filter(|r| (r * r * r + r * r - 1).rem_euclid(49) == 0 && r % 7 == 3)
            .collect();
        assert_eq!(roots, vec![45]);
    }

    #[test]
    fn hensel_rejects_bad_roots() {
        // x² has a double root at 0
        assert_eq!(
            hensel_lift(&[0, 0, 1], 7, 0, 3),
            Err(ArithError::NotSimpleRoot { p: 7, root: 0 })
        );
        assert_eq!(
            hensel_lift(&[-1, 0, 1, 1], 7, 2, 3),
            Err(ArithError::NotARoot { p: 7, root: 2 })
        );
    }

    #[test]
    fn grammar_rendering() {
        let f49 = RingDescriptor::f49();
        assert_eq!(FieldElem::quad(f49, 3, 2).to_grammar(), "(3+2*i)");
        assert_eq!(FieldElem::quad(f49, 0, 6).to_grammar(), "6*i");
        let d = RingDescriptor::f49_dual();
        let x = FieldElem::from_dual_parts(&FieldElem::quad(f49, 1, 0), &FieldElem::quad(f49, 0, 1)).unwrap();
        assert_eq!(x.ring(), d);
        assert_eq!(x.to_grammar(), "(1+i*eps)");
    }

    #[test]
    fn coercions() {
        let z = FieldElem::from_i64(z343(), 143);
        assert_eq!(z.coerce(RingDescriptor::f7()).unwrap().residue(), Some(3));
        let f49 = RingDescriptor::f49();
        let i = FieldElem::i(f49).unwrap();
        assert!(i.coerce(RingDescriptor::f7()).is_err());
        assert!(FieldElem::eps(RingDescriptor::f49_dual()).unwrap().coerce(f49).is_err());
    }
}
