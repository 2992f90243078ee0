//! Dimensions of linear series of bihomogeneous forms on ℙ¹×ℙ¹ (or direct sums of such
//! line bundles) cut out by point, multiplicity and tangency conditions.

use thiserror::Error;

use crate::arith::{FieldElem, RingDescriptor};
use crate::curve::{BiPoint, Chart, CurveError, ALPHA, ALPHA1, BETA, BETA1};
use crate::linalg::Matrix;
use crate::poly::{MPoly, Monomial, PolyError, VarRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinserError {
    #[error("malformed point: {0}")]
    MalformedPoint(String),
    #[error("point {point} does not lie in chart {chart}")]
    PointOutsideChart { point: String, chart: &'static str },
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("summand index {0} out of range")]
    NoSuchSummand(usize),
    #[error("{0} is not a field")]
    NotAField(RingDescriptor),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, LinserError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// Every summand vanishes at the point.
    PassThrough(BiPoint),
    /// Every summand vanishes to order ≥ m at the point.
    MultiplicityAtLeast(BiPoint, u32),
    /// The derivative of every summand along `direction` (local coordinates of `chart`)
    /// vanishes at the point.
    TangentDirection {
        point: BiPoint,
        chart: Chart,
        direction: (FieldElem, FieldElem),
    },
    /// Summand `index` vanishes at the point.
    VanishOnSummand(usize, BiPoint),
}

#[derive(Debug, Clone)]
pub struct SeriesSpec {
    /// Bidegrees of the summands of a split bundle; one entry for an ordinary series.
    pub summands: Vec<(u32, u32)>,
    pub field: RingDescriptor,
    pub conditions: Vec<Condition>,
}

impl SeriesSpec {
    pub fn new(bidegree: (u32, u32), field: RingDescriptor) -> Self {
        SeriesSpec {
            summands: vec![bidegree],
            field,
            conditions: Vec::new(),
        }
    }

    pub fn with(mut self, c: Condition) -> Self {
        self.conditions.push(c);
        self
    }

    /// The same series after exchanging the two factors of ℙ¹×ℙ¹.
    pub fn swapped(&self) -> SeriesSpec {
        let conditions = self
            .conditions
            .iter()
            .map(|c| match c {
                Condition::PassThrough(p) => Condition::PassThrough(p.swapped()),
                Condition::MultiplicityAtLeast(p, m) => Condition::MultiplicityAtLeast(p.swapped(), *m),
                Condition::TangentDirection {
                    point,
                    chart,
                    direction,
                } => Condition::TangentDirection {
                    point: point.swapped(),
                    chart: swap_chart(*chart),
                    direction: (direction.1.clone(), direction.0.clone()),
                },
                Condition::VanishOnSummand(k, p) => Condition::VanishOnSummand(*k, p.swapped()),
            })
            .collect();
        SeriesSpec {
            summands: self.summands.iter().map(|&(a, b)| (b, a)).collect(),
            field: self.field,
            conditions,
        }
    }

    /// Number of free coefficients before conditions.
    pub fn ambient_dimension(&self) -> usize {
        self.summands
            .iter()
            .map(|&(a, b)| ((a + 1) * (b + 1)) as usize)
            .sum()
    }
}

fn swap_chart(c: Chart) -> Chart {
    match c {
        Chart::U1 => Chart::U1,
        Chart::U2 => Chart::U3,
        Chart::U3 => Chart::U2,
        Chart::U4 => Chart::U4,
    }
}

fn registry() -> std::sync::Arc<VarRegistry> {
    VarRegistry::new(&[ALPHA, ALPHA1, BETA, BETA1]).expect("valid names")
}

fn monomials(reg: &std::sync::Arc<VarRegistry>, field: RingDescriptor, (a, b): (u32, u32)) -> Vec<MPoly> {
    let mut out = Vec::new();
    for i in 0..=a {
        for j in 0..=b {
            let m = Monomial::from_exponents(vec![i, a - i, j, b - j]);
            out.push(MPoly::monomial(reg, FieldElem::one(field), m));
        }
    }
    out
}

fn check_point(p: &BiPoint, field: RingDescriptor) -> Result<BiPoint> {
    p.validate().map_err(|e| LinserError::MalformedPoint(e.to_string()))?;
    let coerce = |x: &FieldElem| {
        x.coerce(field)
            .map_err(|_| LinserError::MalformedPoint(format!("{p} is not defined over {field}")))
    };
    Ok(BiPoint {
        alpha: (coerce(&p.alpha.0)?, coerce(&p.alpha.1)?),
        beta: (coerce(&p.beta.0)?, coerce(&p.beta.1)?),
    })
}

fn local_expansion(m: &MPoly, chart: Chart, p: &BiPoint) -> Result<MPoly> {
    let (u0, v0) = chart.local_coords(p).ok_or(LinserError::PointOutsideChart {
        point: p.to_string(),
        chart: chart.name(),
    })?;
    let reg = m.registry().clone();
    let [u, v] = chart.local();
    let local = chart.dehomogenize(m).map_err(curve_err)?;
    Ok(local.translate(&[(u, MPoly::constant(&reg, u0)), (v, MPoly::constant(&reg, v0))])?)
}

fn curve_err(e: CurveError) -> LinserError {
    match e {
        CurveError::Poly(p) => LinserError::Poly(p),
        other => LinserError::MalformedPoint(other.to_string()),
    }
}

/// Linear functionals (one per row) imposed on the coefficients of one summand.
fn functionals(c: &Condition, monos: &[MPoly], field: RingDescriptor) -> Result<Vec<Vec<FieldElem>>> {
    match c {
        Condition::PassThrough(p) | Condition::VanishOnSummand(_, p) => {
            let p = check_point(p, field)?;
            let point: Vec<FieldElem> = p.assignment().into_iter().map(|(_, x)| x).collect();
            let row = monos
                .iter()
                .map(|m| m.evaluate(&point))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(vec![row])
        }
        Condition::MultiplicityAtLeast(p, m) => {
            if *m == 0 {
                return Err(LinserError::ZeroMultiplicity);
            }
            let p = check_point(p, field)?;
            let chart = Chart::containing(&p);
            let reg = monos[0].registry().clone();
            let [u, v] = chart.local();
            let (ku, kv) = (reg.index_of(u).unwrap(), reg.index_of(v).unwrap());
            let locals = monos
                .iter()
                .map(|mono| local_expansion(mono, chart, &p))
                .collect::<Result<Vec<_>>>()?;
            let mut rows = Vec::new();
            for d in 0..*m {
                for i in 0..=d {
                    let mut e = vec![0; reg.len()];
                    e[ku] = i;
                    e[kv] = d - i;
                    let target = Monomial::from_exponents(e);
                    rows.push(locals.iter().map(|l| l.coefficient(&target)).collect());
                }
            }
            Ok(rows)
        }
        Condition::TangentDirection {
            point,
            chart,
            direction,
        } => {
            let p = check_point(point, field)?;
            let reg = monos[0].registry().clone();
            let [u, v] = chart.local();
            let (du, dv) = (direction.0.coerce(field), direction.1.coerce(field));
            let (du, dv) = match (du, dv) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Err(LinserError::MalformedPoint(format!("direction not over {field}"))),
            };
            let row = monos
                .iter()
                .map(|mono| {
                    let local = local_expansion(mono, *chart, &p)?;
                    let lin = |var: &str| -> Result<FieldElem> {
                        Ok(local.partial_derivative(var)?.constant_term_at_origin(&reg, [u, v]))
                    };
                    Ok(&(&lin(u)? * &du) + &(&lin(v)? * &dv))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(vec![row])
        }
    }
}

trait AtOrigin {
    fn constant_term_at_origin(&self, reg: &std::sync::Arc<VarRegistry>, vars: [&str; 2]) -> FieldElem;
}

impl AtOrigin for MPoly {
    fn constant_term_at_origin(&self, reg: &std::sync::Arc<VarRegistry>, vars: [&str; 2]) -> FieldElem {
        let zero = MPoly::zero(reg, self.ring());
        self.substitute(&[(vars[0], zero.clone()), (vars[1], zero)])
            .expect("chart variables are registered")
            .constant_term()
    }
}

/// The constraint matrix on the concatenated summand coefficients.
pub fn constraint_matrix(spec: &SeriesSpec) -> Result<Matrix> {
    let field = spec.field;
    if !field.is_field() {
        return Err(LinserError::NotAField(field));
    }
    let reg = registry();
    let blocks: Vec<Vec<MPoly>> = spec
        .summands
        .iter()
        .map(|&bd| monomials(&reg, field, bd))
        .collect();
    let total = spec.ambient_dimension();
    let mut rows = Vec::new();
    for c in &spec.conditions {
        let targets: Vec<usize> = match c {
            Condition::VanishOnSummand(k, _) => {
                if *k >= blocks.len() {
                    return Err(LinserError::NoSuchSummand(*k));
                }
                vec![*k]
            }
            _ => (0..blocks.len()).collect(),
        };
        for k in targets {
            let offset: usize = blocks[..k].iter().map(Vec::len).sum();
            for f in functionals(c, &blocks[k], field)? {
                let mut row = vec![FieldElem::zero(field); total];
                row[offset..offset + f.len()].clone_from_slice(&f);
                rows.push(row);
            }
        }
    }
    Matrix::new(field, total, rows).map_err(|e| LinserError::MalformedPoint(e.to_string()))
}

pub fn series_dimension(spec: &SeriesSpec) -> Result<usize> {
    let m = constraint_matrix(spec)?;
    Ok(spec.ambient_dimension() - m.rank())
}

/// Pairs (s₀₂, s₂₀) of sections of 𝒪(0,2) ⊕ 𝒪(2,0) vanishing at every point.
pub fn split_sections_vanishing(points: &[BiPoint], field: RingDescriptor) -> Result<usize> {
    let spec = SeriesSpec {
        summands: vec![(0, 2), (2, 0)],
        field,
        conditions: points.iter().cloned().map(Condition::PassThrough).collect(),
    };
    series_dimension(&spec)
}

/// Number of distinct α-fibers and β-fibers met by the points.
pub fn distinct_fibers(points: &[BiPoint]) -> (usize, usize) {
    let norm: Vec<BiPoint> = points.iter().map(BiPoint::normalized).collect();
    let mut a: Vec<_> = norm.iter().map(|p| p.alpha.clone()).collect();
    let mut b: Vec<_> = norm.iter().map(|p| p.beta.clone()).collect();
    dedup(&mut a);
    dedup(&mut b);
    (a.len(), b.len())
}

fn dedup<T: PartialEq>(v: &mut Vec<T>) {
    let mut out: Vec<T> = Vec::new();
    for x in v.drain(..) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    *v = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f49() -> RingDescriptor {
        RingDescriptor::f49()
    }

    fn pt(a: i64, b: i64) -> BiPoint {
        BiPoint::affine(FieldElem::from_i64(f49(), a), FieldElem::from_i64(f49(), b))
    }

    #[test]
    fn free_series() {
        assert_eq!(series_dimension(&SeriesSpec::new((2, 2), f49())).unwrap(), 9);
        assert_eq!(series_dimension(&SeriesSpec::new((1, 1), f49())).unwrap(), 4);
    }

    #[test]
    fn point_conditions() {
        let mut s = SeriesSpec::new((1, 1), f49());
        for (a, b) in [(0, 0), (1, 2), (3, 5), (2, 6)] {
            s = s.with(Condition::PassThrough(pt(a, b)));
        }
        assert_eq!(series_dimension(&s).unwrap(), 0);
        let m = SeriesSpec::new((2, 2), f49()).with(Condition::MultiplicityAtLeast(pt(1, 1), 2));
        assert_eq!(series_dimension(&m).unwrap(), 6);
    }

    #[test]
    fn tangency_is_one_condition() {
        let one = FieldElem::one(f49());
        let s = SeriesSpec::new((2, 2), f49())
            .with(Condition::PassThrough(pt(1, 2)))
            .with(Condition::TangentDirection {
                point: pt(1, 2),
                chart: Chart::U4,
                direction: (one.clone(), one),
            });
        assert_eq!(series_dimension(&s).unwrap(), 7);
        assert_eq!(series_dimension(&s.swapped()).unwrap(), 7);
    }

    #[test]
    fn split_bundle() {
        assert_eq!(split_sections_vanishing(&[], f49()).unwrap(), 6);
        assert_eq!(split_sections_vanishing(&[pt(2, 3)], f49()).unwrap(), 4);
        let bad = SeriesSpec {
            summands: vec![(1, 1)],
            field: f49(),
            conditions: vec![Condition::VanishOnSummand(3, pt(0, 0))],
        };
        assert_eq!(series_dimension(&bad), Err(LinserError::NoSuchSummand(3)));
    }

    #[test]
    fn malformed_point_is_rejected() {
        let z = FieldElem::zero(f49());
        let p = BiPoint {
            alpha: (z.clone(), z.clone()),
            beta: (z.clone(), FieldElem::one(f49())),
        };
        let s = SeriesSpec::new((1, 1), f49()).with(Condition::PassThrough(p));
        assert!(matches!(series_dimension(&s), Err(LinserError::MalformedPoint(_))));
    }
}
