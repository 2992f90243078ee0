//! Dense exact linear algebra over 𝔽p and 𝔽p[i]: rank, affine solving, projection of
//! auxiliary unknowns, and row-space comparison of named-variable systems.

use std::fmt;

use thiserror::Error;

use crate::arith::{FieldElem, RingDescriptor};
use crate::poly::{MPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not a field")]
    NotAField(RingDescriptor),
    #[error("systems are over different variable sets")]
    VariableMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` is not affine-linear in the system variables")]
    NonLinear(String),
    #[error("row has {got} entries, expected {expected}")]
    RowLength { got: usize, expected: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// A dense matrix over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: RingDescriptor,
    cols: usize,
    rows: Vec<Vec<FieldElem>>,
}

impl Matrix {
    pub fn new(field: RingDescriptor, cols: usize, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        if !field.is_field() {
            return Err(LinalgError::NotAField(field));
        }
        for r in &rows {
            if r.len() != cols {
                return Err(LinalgError::RowLength {
                    got: r.len(),
                    expected: cols,
                });
            }
        }
        Ok(Matrix { field, cols, rows })
    }

    pub fn from_i64(field: RingDescriptor, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| FieldElem::from_i64(field, x)).collect())
            .collect();
        Self::new(field, cols, rows)
    }

    pub fn field(&self) -> RingDescriptor {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Matrix {
            field: self.field,
            cols: self.rows.len(),
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(&mut rows, self.cols).len()
    }
}

/// Reduced row echelon form in place.  Pivots are chosen as the first row (from the top)
/// with a nonzero entry in the leftmost remaining column.  Returns pivot columns; rows
/// beyond the rank become zero and are removed.
pub fn rref(rows: &mut Vec<Vec<FieldElem>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = rows[r][c].invert().expect("nonzero element of a field");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet {
    Inconsistent,
    Affine {
        particular: Vec<FieldElem>,
        kernel: Vec<Vec<FieldElem>>,
    },
}

impl SolutionSet {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SolutionSet::Inconsistent => None,
            SolutionSet::Affine { kernel, .. } => Some(kernel.len()),
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, SolutionSet::Affine { .. })
    }
}

/// Rows `Σ aⱼ·xⱼ = b` over a field, with named unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    field: RingDescriptor,
    vars: Vec<String>,
    rows: Vec<Vec<FieldElem>>,
    rhs: Vec<FieldElem>,
}

impl LinearSystem {
    pub fn new<S: AsRef<str>>(field: RingDescriptor, vars: &[S]) -> Result<Self> {
        if !field.is_field() {
            return Err(LinalgError::NotAField(field));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (k, v) in vars.iter().enumerate() {
            if vars[..k].contains(v) {
                return Err(LinalgError::DuplicateVariable(v.clone()));
            }
        }
        Ok(LinearSystem {
            field,
            vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        })
    }

    /// Each form is read as the equation `form = 0`.
    pub fn from_affine_forms<S: AsRef<str>>(forms: &[MPoly], vars: &[S]) -> Result<Self> {
        let field = forms
            .first()
            .map_or_else(RingDescriptor::f49, MPoly::ring);
        let mut sys = Self::new(field, vars)?;
        for f in forms {
            sys.push_form(f)?;
        }
        Ok(sys)
    }

    pub fn push_form(&mut self, form: &MPoly) -> Result<()> {
        let (row, c) = self.linear_coefficients(form)?;
        self.rows.push(row);
        self.rhs.push(-&c);
        Ok(())
    }

    /// Coefficient vector and constant term of an affine-linear form.
    pub fn linear_coefficients(&self, form: &MPoly) -> Result<(Vec<FieldElem>, FieldElem)> {
        let reg = form.registry();
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| reg.index_of(v).ok_or_else(|| LinalgError::UnknownVariable(v.clone())))
            .collect::<Result<_>>()?;
        let mut row = vec![FieldElem::zero(self.field); self.vars.len()];
        let mut constant = FieldElem::zero(self.field);
        for (m, c) in form.terms() {
            let c = c.coerce(self.field).map_err(PolyError::from)?;
            let e = m.exponents();
            let deg = m.degree();
            if deg == 0 {
                constant = c;
                continue;
            }
            let hit = idx.iter().position(|&j| e[j] == 1);
            match (deg, hit) {
                (1, Some(k)) => row[k] = c,
                _ => return Err(LinalgError::NonLinear(form.print())),
            }
        }
        Ok((row, constant))
    }

    pub fn push_row(&mut self, coeffs: Vec<FieldElem>, rhs: FieldElem) -> Result<()> {
        if coeffs.len() != self.vars.len() {
            return Err(LinalgError::RowLength {
                got: coeffs.len(),
                expected: self.vars.len(),
            });
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn field(&self) -> RingDescriptor {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn coefficient_matrix(&self) -> Matrix {
        Matrix {
            field: self.field,
            cols: self.vars.len(),
            rows: self.rows.clone(),
        }
    }

    fn augmented(&self) -> Vec<Vec<FieldElem>> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| {
                let mut a = r.clone();
                a.push(b.clone());
                a
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.coefficient_matrix().rank()
    }

    pub fn solve_affine(&self) -> SolutionSet {
        let n = self.vars.len();
        let mut aug = self.augmented();
        let pivots = rref(&mut aug, n + 1);
        if pivots.last() == Some(&n) {
            return SolutionSet::Inconsistent;
        }
        let zero = FieldElem::zero(self.field);
        let mut particular = vec![zero.clone(); n];
        for (row, &p) in aug.iter().zip(&pivots) {
            particular[p] = row[n].clone();
        }
        let kernel = (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![zero.clone(); n];
                v[f] = FieldElem::one(self.field);
                for (row, &p) in aug.iter().zip(&pivots) {
                    v[p] = -&row[f];
                }
                v
            })
            .collect();
        SolutionSet::Affine { particular, kernel }
    }

    /// Does the assignment satisfy every row?
    pub fn satisfied_by(&self, x: &[FieldElem]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(r, b)| {
            let lhs = r
                .iter()
                .zip(x)
                .fold(FieldElem::zero(self.field), |acc, (a, v)| &acc + &(a * v));
            lhs == *b
        })
    }

    /// Projection of the solution set onto the non-auxiliary unknowns.
    pub fn eliminate<S: AsRef<str>>(&self, aux: &[S]) -> Result<LinearSystem> {
        let aux_idx: Vec<usize> = aux
            .iter()
            .map(|a| {
                self.vars
                    .iter()
                    .position(|v| v == a.as_ref())
                    .ok_or_else(|| LinalgError::UnknownVariable(a.as_ref().to_string()))
            })
            .collect::<Result<_>>()?;
        let keep: Vec<usize> = (0..self.vars.len()).filter(|j| !aux_idx.contains(j)).collect();
        let order: Vec<usize> = aux_idx.iter().chain(&keep).copied().collect();
        let n = self.vars.len();
        let mut aug: Vec<Vec<FieldElem>> = self
            .augmented()
            .into_iter()
            .map(|r| order.iter().map(|&j| r[j].clone()).chain([r[n].clone()]).collect())
            .collect();
        rref(&mut aug, n + 1);
        let na = aux_idx.len();
        let mut out = LinearSystem {
            field: self.field,
            vars: keep.iter().map(|&j| self.vars[j].clone()).collect(),
            rows: Vec::new(),
            rhs: Vec::new(),
        };
        for r in aug {
            if r[..na].iter().all(FieldElem::is_zero) {
                out.rows.push(r[na..n].to_vec());
                out.rhs.push(r[n].clone());
            }
        }
        Ok(out)
    }

    /// Rows of `other`, re-indexed to this system's variable order.
    fn aligned_rows(&self, other: &LinearSystem) -> Result<Vec<Vec<FieldElem>>> {
        if self.vars.len() != other.vars.len() || self.field != other.field {
            return Err(LinalgError::VariableMismatch);
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| other.vars.iter().position(|w| w == v).ok_or(LinalgError::VariableMismatch))
            .collect::<Result<_>>()?;
        Ok(other
            .augmented()
            .into_iter()
            .map(|r| {
                let mut a: Vec<FieldElem> = map.iter().map(|&j| r[j].clone()).collect();
                a.push(r[self.vars.len()].clone());
                a
            })
            .collect())
    }

    fn augmented_rank(rows: &[Vec<FieldElem>], cols: usize) -> usize {
        let mut r = rows.to_vec();
        rref(&mut r, cols).len()
    }

    /// Indices of rows of `other` that are not in the augmented row space of `self`.
    pub fn not_implied(&self, other: &LinearSystem) -> Result<Vec<usize>> {
        let theirs = self.aligned_rows(other)?;
        let mine = self.augmented();
        let cols = self.vars.len() + 1;
        let base = Self::augmented_rank(&mine, cols);
        Ok(theirs
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                let mut m = mine.clone();
                m.push((*r).clone());
                Self::augmented_rank(&m, cols) > base
            })
            .map(|(k, _)| k)
            .collect())
    }

    /// Equality of augmented row spaces (variables matched by name).
    pub fn rowspace_equal(&self, other: &LinearSystem) -> Result<bool> {
        let theirs = self.aligned_rows(other)?;
        let mine = self.augmented();
        let cols = self.vars.len() + 1;
        let a = Self::augmented_rank(&mine, cols);
        let b = Self::augmented_rank(&theirs, cols);
        let mut both = mine;
        both.extend(theirs);
        Ok(a == b && Self::augmented_rank(&both, cols) == a)
    }

    /// The system with one row left out.
    pub fn without_row(&self, k: usize) -> LinearSystem {
        let mut s = self.clone();
        s.rows.remove(k);
        s.rhs.remove(k);
        s
    }

    /// Rows of both systems (same variables, in this system's order).
    pub fn union(&self, other: &LinearSystem) -> Result<LinearSystem> {
        let n = self.vars.len();
        let mut s = self.clone();
        for mut r in self.aligned_rows(other)? {
            let b = r.pop().expect("augmented row");
            debug_assert_eq!(r.len(), n);
            s.rows.push(r);
            s.rhs.push(b);
        }
        Ok(s)
    }

    pub fn row_string(&self, k: usize) -> String {
        let mut lhs = String::new();
        for (a, v) in self.rows[k].iter().zip(&self.vars) {
            if a.is_zero() {
                continue;
            }
            if !lhs.is_empty() {
                lhs.push('+');
            }
            if a.is_one() {
                lhs.push_str(v);
            } else {
                lhs.push_str(&format!("{}*{v}", a.to_grammar()));
            }
        }
        if lhs.is_empty() {
            lhs.push('0');
        }
        format!("{lhs}={}", self.rhs[k].to_grammar())
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.rows.len() {
            writeln!(f, "{}", self.row_string(k))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, VarRegistry};

    fn f7() -> RingDescriptor {
        RingDescriptor::f7()
    }

    fn system(vars: &[&str], eqs: &[&str]) -> LinearSystem {
        let reg = VarRegistry::new(vars).unwrap();
        let forms: Vec<MPoly> = eqs.iter().map(|e| parse_poly(e, &reg, f7()).unwrap()).collect();
        let mut s = LinearSystem::new(f7(), vars).unwrap();
        for f in &forms {
            s.push_form(f).unwrap();
        }
        s
    }

    #[test]
    fn ranks() {
        let id: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| (i == j) as i64).collect()).collect();
        assert_eq!(Matrix::from_i64(f7(), &id).unwrap().rank(), 5);
        assert_eq!(Matrix::from_i64(f7(), &vec![vec![0; 4]; 3]).unwrap().rank(), 0);
    }

    #[test]
    fn affine_solutions() {
        let s = system(&["x", "y"], &["x+y-1"]);
        assert_eq!(s.solve_affine().dimension(), Some(1));
        let s = system(&["x"], &["x", "x-1"]);
        assert_eq!(s.solve_affine(), SolutionSet::Inconsistent);
        let s = system(&["x", "y", "z"], &["x+2*y-3", "z-y"]);
        let SolutionSet::Affine { particular, kernel } = s.solve_affine() else { panic!() };
        assert!(s.satisfied_by(&particular));
        assert_eq!(kernel.len(), 1);
    }

    #[test]
    fn elimination() {
        let s = system(&["x", "y", "m"], &["x-m", "y-m"]);
        let e = s.eliminate(&["m"]).unwrap();
        assert!(e.rowspace_equal(&system(&["x", "y"], &["x-y"])).unwrap());
        let none: [&str; 0] = [];
        assert!(s.eliminate(&none).unwrap().rowspace_equal(&s).unwrap());
    }

    #[test]
    fn rowspace_comparison() {
        let s = system(&["x", "y", "z"], &["x+y", "y-z+1"]);
        let t = system(&["z", "y", "x"], &["3*y-3*z+3", "2*x+2*y"]);
        assert!(s.rowspace_equal(&t).unwrap());
        let u = system(&["x", "y", "z"], &["x+y", "y-z+1", "z"]);
        assert!(!s.rowspace_equal(&u).unwrap());
        assert_eq!(s.not_implied(&u).unwrap(), vec![2]);
        let v = system(&["x", "y", "w"], &["x"]);
        assert_eq!(s.rowspace_equal(&v), Err(LinalgError::VariableMismatch));
    }

    #[test]
    fn nonlinear_forms_are_rejected() {
        let reg = VarRegistry::new(&["x", "y"]).unwrap();
        let mut s = LinearSystem::new(f7(), &["x", "y"]).unwrap();
        let f = parse_poly("x*y+1", &reg, f7()).unwrap();
        assert!(matches!(s.push_form(&f), Err(LinalgError::NonLinear(_))));
    }

    #[test]
    fn rings_without_division_are_rejected() {
        let z = RingDescriptor::mod_prime_power(7, 3).unwrap();
        assert!(matches!(
            LinearSystem::new(z, &["x"]),
            Err(LinalgError::NotAField(_))
        ));
    }
}
