//! Local analysis of curves on ℙ¹×ℙ¹ with bihomogeneous coordinates
//! ((alpha : alpha'), (beta : beta')): affine charts, multiplicities, node/tacnode
//! classification, intersection multiplicity along parametrized curves, branch loci of
//! the two rulings, and the first-order tangency obstruction.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{FieldElem, RingDescriptor};
use crate::poly::{MPoly, Monomial, PolyError, VarRegistry};

pub const ALPHA: &str = "alpha";
pub const ALPHA1: &str = "alpha'";
pub const BETA: &str = "beta";
pub const BETA1: &str = "beta'";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("the germ is identically zero")]
    ZeroGerm,
    #[error("the germ does not pass through the base point")]
    NotOnCurve,
    #[error("the local equation involves variables other than {0} and {1}")]
    ExtraVariables(String, String),
    #[error("classification is not supported in characteristic 2")]
    CharacteristicTwo,
    #[error("the parametrization does not pass through the base point")]
    ParametrizationMissesBase,
    #[error("no fiber cubic: {0}")]
    DegenerateProjection(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0} is not a point of P1 x P1")]
    MalformedPoint(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, CurveError>;

/// A point ((a : a'), (b : b')) of ℙ¹×ℙ¹.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoint {
    pub alpha: (FieldElem, FieldElem),
    pub beta: (FieldElem, FieldElem),
}

impl BiPoint {
    /// The point with affine coordinates α = a, β = b in the chart α' = β' = 1.
    pub fn affine(a: FieldElem, b: FieldElem) -> Self {
        let one_a = FieldElem::one(a.ring());
        let one_b = FieldElem::one(b.ring());
        BiPoint {
            alpha: (a, one_a),
            beta: (b, one_b),
        }
    }

    pub fn new(alpha: (FieldElem, FieldElem), beta: (FieldElem, FieldElem)) -> Result<Self> {
        let p = BiPoint { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = (self.alpha.0.is_zero() && self.alpha.1.is_zero())
            || (self.beta.0.is_zero() && self.beta.1.is_zero());
        if bad {
            return Err(CurveError::MalformedPoint(self.to_string()));
        }
        Ok(())
    }

    pub fn ring(&self) -> RingDescriptor {
        self.alpha.0.ring()
    }

    /// Representative with the second nonzero-able coordinate scaled to 1 where possible.
    pub fn normalized(&self) -> BiPoint {
        let norm = |(x, y): &(FieldElem, FieldElem)| {
            if y.is_zero() {
                (FieldElem::one(x.ring()), y.clone())
            } else {
                let inv = y.invert().expect("field");
                (x * &inv, FieldElem::one(y.ring()))
            }
        };
        BiPoint {
            alpha: norm(&self.alpha),
            beta: norm(&self.beta),
        }
    }

    /// Coordinate assignment for evaluating bihomogeneous forms (by name).
    pub fn assignment(&self) -> [(&'static str, FieldElem); 4] {
        [
            (ALPHA, self.alpha.0.clone()),
            (ALPHA1, self.alpha.1.clone()),
            (BETA, self.beta.0.clone()),
            (BETA1, self.beta.1.clone()),
        ]
    }

    /// Swap the two ℙ¹ factors.
    pub fn swapped(&self) -> BiPoint {
        BiPoint {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn conjugate(&self) -> BiPoint {
        BiPoint {
            alpha: (self.alpha.0.conjugate(), self.alpha.1.conjugate()),
            beta: (self.beta.0.conjugate(), self.beta.1.conjugate()),
        }
    }
}

impl std::fmt::Display for BiPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(({}:{}),({}:{}))",
            self.alpha.0, self.alpha.1, self.beta.0, self.beta.1
        )
    }
}

/// Value of a polynomial over a registry containing the four coordinates, at a point.
/// Other registry variables are left symbolic.
pub fn eval_at_point(g: &MPoly, p: &BiPoint) -> Result<MPoly> {
    let g = lift_to(g, p.ring())?;
    let reg = g.registry().clone();
    let binds: Vec<(&str, MPoly)> = p
        .assignment()
        .into_iter()
        .map(|(v, c)| (v, MPoly::constant(&reg, c)))
        .collect();
    Ok(g.substitute(&binds)?)
}

fn lift_to(g: &MPoly, ring: RingDescriptor) -> Result<MPoly> {
    if g.ring() == ring {
        Ok(g.clone())
    } else {
        Ok(g.map_ring(ring)?)
    }
}

/// The four standard affine charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chart {
    /// α = β = 1
    U1,
    /// α' = β = 1
    U2,
    /// α = β' = 1
    U3,
    /// α' = β' = 1
    U4,
}

impl Chart {
    pub const ALL: [Chart; 4] = [Chart::U1, Chart::U2, Chart::U3, Chart::U4];

    pub fn name(self) -> &'static str {
        match self {
            Chart::U1 => "U1",
            Chart::U2 => "U2",
            Chart::U3 => "U3",
            Chart::U4 => "U4",
        }
    }

    /// Coordinates set to 1.
    pub fn fixed(self) -> [&'static str; 2] {
        match self {
            Chart::U1 => [ALPHA, BETA],
            Chart::U2 => [ALPHA1, BETA],
            Chart::U3 => [ALPHA, BETA1],
            Chart::U4 => [ALPHA1, BETA1],
        }
    }

    /// Local coordinates, α-side first.
    pub fn local(self) -> [&'static str; 2] {
        match self {
            Chart::U1 => [ALPHA1, BETA1],
            Chart::U2 => [ALPHA, BETA1],
            Chart::U3 => [ALPHA1, BETA],
            Chart::U4 => [ALPHA, BETA],
        }
    }

    /// Local coordinates of a point lying in the chart.
    pub fn local_coords(self, p: &BiPoint) -> Option<(FieldElem, FieldElem)> {
        let (a, a1) = &p.alpha;
        let (b, b1) = &p.beta;
        let ratio = |num: &FieldElem, den: &FieldElem| den.invert().ok().map(|d| num * &d);
        match self {
            Chart::U1 => Some((ratio(a1, a)?, ratio(b1, b)?)),
            Chart::U2 => Some((ratio(a, a1)?, ratio(b1, b)?)),
            Chart::U3 => Some((ratio(a1, a)?, ratio(b, b1)?)),
            Chart::U4 => Some((ratio(a, a1)?, ratio(b, b1)?)),
        }
    }

    /// Preferred chart for a point: U4 when possible, then U1, U2, U3.
    pub fn containing(p: &BiPoint) -> Chart {
        [Chart::U4, Chart::U1, Chart::U2, Chart::U3]
            .into_iter()
            .find(|c| c.local_coords(p).is_some())
            .expect("every point of P1 x P1 lies in some chart")
    }

    pub fn dehomogenize(self, g: &MPoly) -> Result<MPoly> {
        let reg = g.registry().clone();
        let one = MPoly::from_i64(&reg, g.ring(), 1);
        let [x, y] = self.fixed();
        Ok(g.substitute(&[(x, one.clone()), (y, one)])?)
    }
}

/// A plane-curve germ at the origin of two local variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartGerm {
    pub chart: Option<Chart>,
    vars: [String; 2],
    equation: MPoly,
}

impl ChartGerm {
    pub fn new(equation: MPoly, u: &str, v: &str, chart: Option<Chart>) -> Result<Self> {
        if equation.is_zero() {
            return Err(CurveError::ZeroGerm);
        }
        if equation.support().iter().any(|&w| w != u && w != v) {
            return Err(CurveError::ExtraVariables(u.to_string(), v.to_string()));
        }
        Ok(ChartGerm {
            chart,
            vars: [u.to_string(), v.to_string()],
            equation,
        })
    }

    /// Germ of a bihomogeneous form at a point, in the local coordinates of `chart`
    /// translated so that the point is the origin.
    pub fn at(g: &MPoly, chart: Chart, p: &BiPoint) -> Result<Self> {
        let (u0, v0) = chart
            .local_coords(p)
            .ok_or_else(|| CurveError::MalformedPoint(format!("{p} is not in {}", chart.name())))?;
        let g = lift_to(g, p.ring())?;
        let reg = g.registry().clone();
        let [u, v] = chart.local();
        let local = chart.dehomogenize(&g)?.translate(&[
            (u, MPoly::constant(&reg, u0)),
            (v, MPoly::constant(&reg, v0)),
        ])?;
        Self::new(local, u, v, Some(chart))
    }

    pub fn equation(&self) -> &MPoly {
        &self.equation
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn graded(&self, d: u32) -> MPoly {
        self.equation
            .graded_part(d, &self.vars())
            .expect("germ variables are registered")
    }

    /// The same germ after an invertible linear change of local coordinates
    /// u ↦ a·u + b·v, v ↦ c·u + d·v.
    pub fn linear_change(&self, m: [[FieldElem; 2]; 2]) -> Result<ChartGerm> {
        let reg = self.equation.registry().clone();
        let ring = self.equation.ring();
        let [u, v] = self.vars();
        let uu = MPoly::var(&reg, ring, u)?;
        let vv = MPoly::var(&reg, ring, v)?;
        let img = |a: &FieldElem, b: &FieldElem| &uu.scale(a) + &vv.scale(b);
        let eq = self
            .equation
            .substitute(&[(u, img(&m[0][0], &m[0][1])), (v, img(&m[1][0], &m[1][1]))])?;
        ChartGerm::new(eq, u, v, self.chart)
    }
}

/// Order of the first nonzero graded part.
pub fn multiplicity_at(g: &ChartGerm) -> Result<u32> {
    let [u, v] = g.vars();
    g.equation
        .terms()
        .map(|(m, _)| exps(g, m, u, v).0 + exps(g, m, u, v).1)
        .min()
        .ok_or(CurveError::ZeroGerm)
}

fn exps(g: &ChartGerm, m: &Monomial, u: &str, v: &str) -> (u32, u32) {
    let reg = g.equation.registry();
    let e = m.exponents();
    (e[reg.index_of(u).unwrap()], e[reg.index_of(v).unwrap()])
}

pub fn tangent_cone(g: &ChartGerm) -> Result<MPoly> {
    Ok(g.graded(multiplicity_at(g)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Classification {
    Smooth,
    Node,
    TacnodeOrDegeneration,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityVerdict {
    pub multiplicity: u32,
    pub tangent_cone: MPoly,
    pub classification: Classification,
}

/// Coefficients (A, B, C) of A·u² + B·uv + C·v².
fn quadratic_coeffs(g: &ChartGerm, q: &MPoly) -> [FieldElem; 3] {
    let [u, v] = g.vars();
    let ring = q.ring();
    let mut out = [FieldElem::zero(ring), FieldElem::zero(ring), FieldElem::zero(ring)];
    for (m, c) in q.terms() {
        let (a, _) = exps(g, m, u, v);
        out[2 - a as usize] = c.clone();
    }
    out
}

/// Direction (p, q) annihilated by the linear form a·u + b·v.
pub fn kernel_direction(a: &FieldElem, b: &FieldElem) -> (FieldElem, FieldElem) {
    (b.clone(), -a)
}

/// Linear-form coefficients (a, b) of a degree-1 polynomial in the germ variables.
pub fn linear_coeffs(g: &ChartGerm, l: &MPoly) -> (FieldElem, FieldElem) {
    let [u, v] = g.vars();
    let ring = l.ring();
    let (mut a, mut b) = (FieldElem::zero(ring), FieldElem::zero(ring));
    for (m, c) in l.terms() {
        match exps(g, m, u, v) {
            (1, 0) => a = c.clone(),
            (0, 1) => b = c.clone(),
            _ => {}
        }
    }
    (a, b)
}

fn eval_uv(g: &ChartGerm, p: &MPoly, x: &FieldElem, y: &FieldElem) -> FieldElem {
    let reg = p.registry().clone();
    let [u, v] = g.vars();
    p.substitute(&[(u, MPoly::constant(&reg, x.clone())), (v, MPoly::constant(&reg, y.clone()))])
        .expect("germ variables are registered")
        .constant_term()
}

/// Node / tacnode (or degeneration) / smooth / other, following the completing-the-square
/// normal form: a double point h₁² + h₁·h₂ + … (tangent cone a square whose line divides
/// the cubic part) is a tacnode or a degeneration of one.
pub fn classify(g: &ChartGerm) -> Result<SingularityVerdict> {
    let ring = g.equation.ring();
    if ring.characteristic() == 2 {
        return Err(CurveError::CharacteristicTwo);
    }
    let m = multiplicity_at(g)?;
    let cone = g.graded(m);
    let classification = match m {
        0 => return Err(CurveError::NotOnCurve),
        1 => Classification::Smooth,
        2 => {
            let [a, b, c] = quadratic_coeffs(g, &cone);
            let four = FieldElem::from_i64(ring, 4);
            let disc = &(&b * &b) - &(&four * &(&a * &c));
            if !disc.is_zero() {
                Classification::Node
            } else {
                // cone = const·l² with l ∝ 2a·u + b·v (or v alone when a = 0)
                let (la, lb) = if a.is_zero() {
                    (FieldElem::zero(ring), FieldElem::one(ring))
                } else {
                    (&a + &a, b.clone())
                };
                let (p, q) = kernel_direction(&la, &lb);
                if eval_uv(g, &g.graded(3), &p, &q).is_zero() {
                    Classification::TacnodeOrDegeneration
                } else {
                    Classification::Other
                }
            }
        }
        _ => Classification::Other,
    };
    Ok(SingularityVerdict {
        multiplicity: m,
        tangent_cone: cone,
        classification,
    })
}

/// Strict transform after blowing up the origin, at the infinitely near point in
/// direction (p : q), together with its multiplicity there.
pub fn infinitely_near(g: &ChartGerm, direction: (&FieldElem, &FieldElem)) -> Result<(u32, ChartGerm)> {
    let m = multiplicity_at(g)?;
    let reg = g.equation.registry().clone();
    let ring = g.equation.ring();
    let [u, v] = g.vars();
    let (p, q) = direction;
    // u = x, v = x·(y + q/p) when p ≠ 0; otherwise v = y, u = y·x.
    let (x, y, eq) = if !p.is_zero() {
        let slope = q * &p.invert().expect("field");
        let uu = MPoly::var(&reg, ring, u)?;
        let vv = MPoly::var(&reg, ring, v)?;
        let img = &uu * &(&vv + &MPoly::constant(&reg, slope));
        (u, v, g.equation.substitute(&[(v, img)])?)
    } else {
        let uu = MPoly::var(&reg, ring, u)?;
        let vv = MPoly::var(&reg, ring, v)?;
        (v, u, g.equation.substitute(&[(u, &vv * &uu)])?)
    };
    let strict = divide_by_power(&eq, x, m)?;
    let germ = ChartGerm::new(strict, u, v, g.chart)?;
    let _ = y;
    Ok((multiplicity_at(&germ)?, germ))
}

fn divide_by_power(p: &MPoly, var: &str, k: u32) -> Result<MPoly> {
    let reg = p.registry().clone();
    let j = reg.index_of(var).ok_or_else(|| PolyError::NoSuchVariable(var.to_string()))?;
    let mut out = MPoly::zero(&reg, p.ring());
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        if e[j] < k {
            return Err(CurveError::Precondition(format!("{var}^{k} does not divide the total transform")));
        }
        e[j] -= k;
        out = &out + &MPoly::monomial(&reg, c.clone(), Monomial::from_exponents(e));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMultiplicity {
    Finite(u32),
    Infinite,
}

/// Vanishing order at s = 0 of `poly` pulled back along `images` (variable ↦ polynomial
/// in `s`).  Variables without an image must not occur.
pub fn order_along(poly: &MPoly, images: &[(&str, MPoly)], s: &str) -> Result<IntersectionMultiplicity> {
    let pulled = poly.substitute(images)?;
    if pulled.support().iter().any(|&w| w != s) {
        return Err(CurveError::ExtraVariables(s.to_string(), s.to_string()));
    }
    let j = pulled.registry().index_of(s).ok_or_else(|| PolyError::NoSuchVariable(s.to_string()))?;
    Ok(pulled
        .terms()
        .map(|(m, _)| m.exponents()[j])
        .min()
        .map_or(IntersectionMultiplicity::Infinite, IntersectionMultiplicity::Finite))
}

/// A parametrized smooth germ s ↦ (u(s), v(s)) through the origin.
#[derive(Debug, Clone)]
pub struct Parametrization {
    pub param: String,
    pub u: MPoly,
    pub v: MPoly,
}

pub fn intersection_multiplicity(g: &ChartGerm, curve: &Parametrization) -> Result<IntersectionMultiplicity> {
    if !curve.u.constant_term().is_zero() || !curve.v.constant_term().is_zero() {
        return Err(CurveError::ParametrizationMissesBase);
    }
    let [u, v] = g.vars();
    order_along(
        &g.equation,
        &[(u, curve.u.clone()), (v, curve.v.clone())],
        &curve.param,
    )
}

/// Which coordinate is the base of the projection: `Beta` projects to (β : β') and the
/// fibers are the α-lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ruling {
    Alpha,
    Beta,
}

impl Ruling {
    fn roles(self) -> ([&'static str; 2], [&'static str; 2]) {
        match self {
            Ruling::Beta => ([ALPHA, ALPHA1], [BETA, BETA1]),
            Ruling::Alpha => ([BETA, BETA1], [ALPHA, ALPHA1]),
        }
    }

    pub fn base_var(self) -> &'static str {
        self.roles().1[0]
    }
}

/// A base value of ℙ¹: finite (affine coordinate) or ∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseValue {
    Finite(FieldElem),
    Infinity,
}

/// Discriminant data of a projection to one ruling.
#[derive(Debug, Clone)]
pub struct BranchLocus {
    /// Monic discriminant of the fiber cubic, dehomogenized in the base coordinate.
    pub discriminant: MPoly,
    /// Degree lost at the point ∞ of the base (12 minus the degree above).
    pub order_at_infinity: u32,
    /// Base values of singular points of the curve found among the scanned points, with
    /// the discriminant order removed for each.
    pub singular_fibers: Vec<(BaseValue, u32)>,
    /// The discriminant with the singular fibers removed, monic.
    pub branch: MPoly,
}

/// Dense univariate coefficients (low to high) of a polynomial in one variable.
pub fn univariate_coeffs(p: &MPoly, var: &str) -> Result<Vec<FieldElem>> {
    let reg = p.registry();
    let j = reg.index_of(var).ok_or_else(|| PolyError::NoSuchVariable(var.to_string()))?;
    if p.support().iter().any(|&w| w != var) {
        return Err(CurveError::ExtraVariables(var.to_string(), var.to_string()));
    }
    let deg = p.degree_in(var)? as usize;
    let mut out = vec![FieldElem::zero(p.ring()); deg + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[j] as usize] = c.clone();
    }
    if p.is_zero() {
        out.clear();
    }
    Ok(out)
}

pub fn from_univariate(reg: &Arc<VarRegistry>, ring: RingDescriptor, var: &str, coeffs: &[FieldElem]) -> Result<MPoly> {
    let x = MPoly::var(reg, ring, var)?;
    let mut out = MPoly::zero(reg, ring);
    for (k, c) in coeffs.iter().enumerate() {
        out = &out + &x.pow(k as u32).scale(c);
    }
    Ok(out)
}

/// Multiplicity of `root` as a root, and the quotient by (x − root)^mult.
pub fn root_order(coeffs: &[FieldElem], root: &FieldElem) -> (u32, Vec<FieldElem>) {
    let mut cur = coeffs.to_vec();
    let mut k = 0;
    while cur.len() > 1 {
        // synthetic division by (x − root)
        let n = cur.len() - 1;
        let mut q = vec![FieldElem::zero(root.ring()); n];
        let mut acc = FieldElem::zero(root.ring());
        for j in (0..=n).rev() {
            acc = &(&acc * root) + &cur[j];
            if j > 0 {
                q[j - 1] = acc.clone();
            }
        }
        if !acc.is_zero() {
            break;
        }
        cur = q;
        k += 1;
    }
    (k, cur)
}

pub fn monic(coeffs: &[FieldElem]) -> Vec<FieldElem> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(FieldElem::is_zero) {
        c.pop();
    }
    if let Some(lead) = c.last().cloned() {
        let inv = lead.invert().expect("field");
        for x in &mut c {
            *x = &*x * &inv;
        }
    }
    c
}

/// Binary-cubic discriminant B²C² − 4AC³ − 4B³D − 27A²D² + 18ABCD.
pub fn cubic_discriminant(a: &MPoly, b: &MPoly, c: &MPoly, d: &MPoly) -> MPoly {
    let ring = a.ring();
    let reg = a.registry().clone();
    let k = |n: i64| MPoly::from_i64(&reg, ring, n);
    let t1 = &(b * b) * &(c * c);
    let t2 = &k(4) * &(a * &(c * &(c * c)));
    let t3 = &k(4) * &(&(b * &(b * b)) * d);
    let t4 = &k(27) * &(&(a * a) * &(d * d));
    let t5 = &k(18) * &(&(a * b) * &(c * d));
    &(&(&(&t1 - &t2) - &t3) - &t4) + &t5
}

/// Singular points of a bihomogeneous form among the points of ℙ¹×ℙ¹ over `field`.
pub fn singular_points(g: &MPoly, field: RingDescriptor) -> Result<Vec<BiPoint>> {
    let g = lift_to(g, field)?;
    let partials: Vec<MPoly> = [ALPHA, ALPHA1, BETA, BETA1]
        .iter()
        .map(|v| g.partial_derivative(v))
        .collect::<std::result::Result<_, _>>()?;
    let line: Vec<(FieldElem, FieldElem)> = field
        .elements()
        .map_err(PolyError::from)?
        .into_iter()
        .map(|a| (a, FieldElem::one(field)))
        .chain([(FieldElem::one(field), FieldElem::zero(field))])
        .collect();
    let reg = g.registry();
    let idx: Vec<usize> = [ALPHA, ALPHA1, BETA, BETA1]
        .iter()
        .map(|v| reg.index_of(v).ok_or_else(|| PolyError::NoSuchVariable(v.to_string())))
        .collect::<std::result::Result<_, _>>()?;
    let mut out = Vec::new();
    let mut point = vec![FieldElem::zero(field); reg.len()];
    for a in &line {
        for b in &line {
            point[idx[0]] = a.0.clone();
            point[idx[1]] = a.1.clone();
            point[idx[2]] = b.0.clone();
            point[idx[3]] = b.1.clone();
            let all_zero = std::iter::once(&g)
                .chain(&partials)
                .all(|p| p.evaluate(&point).map(|x| x.is_zero()).unwrap_or(false));
            if all_zero {
                out.push(BiPoint {
                    alpha: a.clone(),
                    beta: b.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// The field over which singular fibers are searched: 𝔽p² when p ≡ 3 (mod 4), else 𝔽p.
fn scan_field(ring: RingDescriptor) -> RingDescriptor {
    RingDescriptor::quadratic_ext(ring.characteristic())
        .unwrap_or_else(|_| RingDescriptor::prime_field(ring.characteristic()).expect("prime"))
}

/// Discriminant of `g` as a cubic on the fibers of `ruling`, as a polynomial in the base
/// coordinate, plus the part left after removing fibers through singular points of the
/// curve (found by scanning the points over 𝔽p²; non-rational singular points would go
/// unnoticed).
pub fn branch_locus(g: &MPoly, ruling: Ruling) -> Result<BranchLocus> {
    let (fiber, base) = ruling.roles();
    let field = scan_field(g.ring());
    let g = lift_to(g, field)?;
    let reg = g.registry().clone();
    let groups = g.collect_in(&fiber)?;
    let mut coeff: BTreeMap<u32, MPoly> = BTreeMap::new();
    for (e, c) in groups {
        if e[0] + e[1] != 3 {
            return Err(CurveError::DegenerateProjection(format!(
                "degree {} in the fiber coordinates",
                e[0] + e[1]
            )));
        }
        coeff.insert(e[1], c);
    }
    let get = |k: u32| coeff.get(&k).cloned().unwrap_or_else(|| MPoly::zero(&reg, field));
    let disc = cubic_discriminant(&get(0), &get(1), &get(2), &get(3));
    if disc.is_zero() {
        return Err(CurveError::DegenerateProjection(
            "discriminant vanishes identically (repeated component)".into(),
        ));
    }
    let one = MPoly::from_i64(&reg, field, 1);
    let affine = disc.substitute(&[(base[1], one)])?;
    let coeffs = monic(&univariate_coeffs(&affine, base[0])?);
    let total = disc.total_degree().unwrap_or(0);
    let order_at_infinity = total - (coeffs.len() as u32 - 1);

    let mut rest = coeffs.clone();
    let mut singular_fibers: Vec<(BaseValue, u32)> = Vec::new();
    let mut inf_left = order_at_infinity;
    for p in singular_points(&g, field)? {
        let (b, b1) = match ruling {
            Ruling::Beta => &p.beta,
            Ruling::Alpha => &p.alpha,
        };
        let value = if b1.is_zero() {
            BaseValue::Infinity
        } else {
            BaseValue::Finite(b * &b1.invert().expect("field"))
        };
        if singular_fibers.iter().any(|(v, _)| *v == value) {
            continue;
        }
        let k = match &value {
            BaseValue::Infinity => std::mem::take(&mut inf_left),
            BaseValue::Finite(x) => {
                let (k, q) = root_order(&rest, x);
                rest = q;
                k
            }
        };
        singular_fibers.push((value, k));
    }
    Ok(BranchLocus {
        discriminant: from_univariate(&reg, field, base[0], &coeffs)?,
        order_at_infinity,
        singular_fibers,
        branch: from_univariate(&reg, field, base[0], &monic(&rest))?,
    })
}

/// ḡ(0,0) for a germ g that is smooth at the origin and simply tangent to the first axis;
/// the first-order deformation g + εḡ stays tangent to that axis iff this vanishes.
/// `gbar` may carry further (symbolic) variables besides the germ's.
pub fn tangency_obstruction(g: &ChartGerm, gbar: &MPoly) -> Result<MPoly> {
    let ring = g.equation.ring();
    let reg = g.equation.registry().clone();
    let [u, v] = g.vars();
    let zero = FieldElem::zero(ring);
    let at0 = |p: &MPoly| eval_uv(g, p, &zero, &zero);
    if !at0(&g.equation).is_zero() {
        return Err(CurveError::NotOnCurve);
    }
    let gu = g.equation.partial_derivative(u)?;
    let gv = g.equation.partial_derivative(v)?;
    if !at0(&gu).is_zero() || at0(&gv).is_zero() {
        return Err(CurveError::Precondition(format!(
            "germ is not smooth and tangent to the {u}-axis"
        )));
    }
    let on_axis = g.equation.substitute(&[(v, MPoly::zero(&reg, ring))])?;
    let order = on_axis
        .terms()
        .map(|(m, _)| m.exponents()[reg.index_of(u).unwrap()])
        .min();
    if order != Some(2) {
        return Err(CurveError::Precondition(format!(
            "contact with the {u}-axis is not simple"
        )));
    }
    let greg = gbar.registry().clone();
    Ok(gbar.substitute(&[(u, MPoly::zero(&greg, gbar.ring())), (v, MPoly::zero(&greg, gbar.ring()))])?)
}

pub fn first_order_tangency(g: &ChartGerm, gbar: &MPoly) -> Result<bool> {
    Ok(tangency_obstruction(g, gbar)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn germ(text: &str) -> ChartGerm {
        let reg = VarRegistry::new(&["x", "y", "s"]).unwrap();
        let p = parse_poly(text, &reg, RingDescriptor::f49()).unwrap();
        ChartGerm::new(p, "x", "y", None).unwrap()
    }

    fn poly_like(g: &ChartGerm, text: &str) -> MPoly {
        parse_poly(text, g.equation().registry(), g.equation().ring()).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_at(&germ("x^2+y^3")).unwrap(), 2);
        assert_eq!(multiplicity_at(&germ("y+x^5")).unwrap(), 1);
        let reg = VarRegistry::new(&["x", "y"]).unwrap();
        assert!(matches!(
            ChartGerm::new(MPoly::zero(&reg, RingDescriptor::f7()), "x", "y", None),
            Err(CurveError::ZeroGerm)
        ));
    }

    #[test]
    fn classification() {
        use Classification::*;
        let c = |t: &str| classify(&germ(t)).unwrap().classification;
        assert_eq!(c("x*y+x^3"), Node);
        assert_eq!(c("x^2-y^4"), TacnodeOrDegeneration);
        assert_eq!(c("y+x^2"), Smooth);
        assert_eq!(c("y^2-x^3"), Other);
        assert_eq!(c("x^3+y^3"), Other);
        // irreducible tangent cone over F7, split over F49: still two distinct lines
        assert_eq!(c("x^2+y^2"), Node);
        assert_eq!(classify(&germ("1+x")), Err(CurveError::NotOnCurve));
    }

    #[test]
    fn tacnode_has_multiplicity_sequence_two_two() {
        let g = germ("(y-x^2)*(y+x^2)");
        let ring = g.equation().ring();
        let (m, _) = infinitely_near(&g, (&FieldElem::one(ring), &FieldElem::zero(ring))).unwrap();
        assert_eq!(m, 2);
        let smooth = germ("y-x^2");
        let (m, _) = infinitely_near(&smooth, (&FieldElem::one(ring), &FieldElem::zero(ring))).unwrap();
        assert_eq!(m, 1);
        let (m, _) = infinitely_near(&smooth, (&FieldElem::zero(ring), &FieldElem::one(ring))).unwrap();
        assert_eq!(m, 0);
    }

    #[test]
    fn intersection_along_lines() {
        let g = germ("y-x^3");
        let axis = Parametrization {
            param: "s".into(),
            u: poly_like(&g, "s"),
            v: poly_like(&g, "0"),
        };
        assert_eq!(intersection_multiplicity(&g, &axis).unwrap(), IntersectionMultiplicity::Finite(3));
        let h = germ("y");
        assert_eq!(intersection_multiplicity(&h, &axis).unwrap(), IntersectionMultiplicity::Infinite);
        let off = Parametrization {
            param: "s".into(),
            u: poly_like(&g, "s+1"),
            v: poly_like(&g, "0"),
        };
        assert_eq!(intersection_multiplicity(&g, &off), Err(CurveError::ParametrizationMissesBase));
    }

    #[test]
    fn tangency_criterion() {
        let g = germ("y-x^2");
        assert!(!first_order_tangency(&g, &poly_like(&g, "1")).unwrap());
        assert!(first_order_tangency(&g, &poly_like(&g, "x")).unwrap());
        assert!(tangency_obstruction(&germ("x-y^2"), &poly_like(&g, "1")).is_err());
        assert!(tangency_obstruction(&germ("y-x^3"), &poly_like(&g, "1")).is_err());
    }

    #[test]
    fn product_form_has_constant_discriminant() {
        let reg = VarRegistry::new(&[ALPHA, ALPHA1, BETA, BETA1]).unwrap();
        let f7 = RingDescriptor::f7();
        let g = parse_poly("alpha*(alpha-alpha')*(alpha+alpha')", &reg, f7).unwrap();
        let bl = branch_locus(&g, Ruling::Beta).unwrap();
        assert_eq!(bl.discriminant.total_degree(), Some(0));
        assert!(branch_locus(&g, Ruling::Alpha).is_err());
    }

    #[test]
    fn chart_coordinates() {
        let f49 = RingDescriptor::f49();
        let one = FieldElem::one(f49);
        let zero = FieldElem::zero(f49);
        let p1 = BiPoint::new((one.clone(), zero.clone()), (one.clone(), zero.clone())).unwrap();
        assert_eq!(Chart::containing(&p1), Chart::U1);
        assert_eq!(Chart::U1.local_coords(&p1), Some((zero.clone(), zero.clone())));
        assert!(BiPoint::new((zero.clone(), zero.clone()), (one.clone(), zero)).is_err());
    }
}
