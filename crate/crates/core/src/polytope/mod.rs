//! Exact linear systems, two independent LP solvers and the combinatorial
//! bounds derived from them.

mod bounds;
mod simplex;
mod vertex;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{RatVector, Rational};

pub use bounds::{
    a13_objective, a16_margin, build_system_l, check_a13, d10_margin, f35_argmax, f35_value,
    lemma14_truncate, lemma15_gap, lemma48_min, lemma48_quadratic_check, linear_closed_form_35,
    maximize_f_35, A13Check, Lemma14Outcome,
};
pub use simplex::minimize_simplex;
pub use vertex::minimize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Ge => "GE",
            Relation::Eq => "EQ",
        })
    }
}

/// `coeffs · x (≥ | =) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Row {
    pub coeffs: RatVector,
    pub rhs: Rational,
    pub relation: Relation,
}

impl Row {
    pub fn ge(coeffs: RatVector, rhs: Rational) -> Self {
        Row {
            coeffs,
            rhs,
            relation: Relation::Ge,
        }
    }

    pub fn eq(coeffs: RatVector, rhs: Rational) -> Self {
        Row {
            coeffs,
            rhs,
            relation: Relation::Eq,
        }
    }

    /// `coeffs · x − rhs`.
    pub fn slack(&self, x: &RatVector) -> Rational {
        self.coeffs.dot(x).expect("row length") - &self.rhs
    }

    pub fn holds(&self, x: &RatVector) -> bool {
        let s = self.slack(x);
        match self.relation {
            Relation::Ge => !s.is_negative(),
            Relation::Eq => s.is_zero(),
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ROW {}", self.relation)?;
        for c in &self.coeffs {
            write!(f, " {c}")?;
        }
        write!(f, " | {}", self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LinearSystem {
    num_vars: usize,
    rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(num_vars: usize, rows: Vec<Row>) -> Result<Self> {
        let mut s = Self::new(num_vars);
        for r in rows {
            s.push(r)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, row: Row) -> Result<()> {
        if row.coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: row.coeffs.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_satisfied(&self, x: &RatVector) -> bool {
        self.rows.iter().all(|r| r.holds(x))
    }

    /// Rows that hold with equality at `x`.
    pub fn active_rows(&self, x: &RatVector) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].slack(x).is_zero())
            .collect()
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VARS {}", self.num_vars)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPResult {
    pub optimal_value: Rational,
    pub witness_vertex: RatVector,
    pub active_rows: Vec<usize>,
}

impl fmt::Display for LPResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "value={} vertex={}",
            self.optimal_value, self.witness_vertex
        )
    }
}

/// Runs vertex enumeration and the simplex method and insists that they
/// agree on feasibility, boundedness and the optimal value.
pub fn minimize_checked(system: &LinearSystem, objective: &RatVector) -> Result<LPResult> {
    let by_vertices = minimize(system, objective);
    let by_simplex = minimize_simplex(system, objective);
    match (by_vertices, by_simplex) {
        (Ok(r), Ok((v, x))) => {
            if r.optimal_value != v {
                return Err(Error::MethodDisagreement(format!(
                    "values {} and {v}",
                    r.optimal_value
                )));
            }
            if !system.is_satisfied(&x) || objective.dot(&x)? != v {
                return Err(Error::MethodDisagreement(
                    "simplex point is not an optimal feasible point".into(),
                ));
            }
            Ok(r)
        }
        (Err(a), Err(b)) if a == b => Err(a),
        (a, b) => Err(Error::MethodDisagreement(format!(
            "vertex enumeration gave {:?}, simplex gave {:?}",
            a.map(|r| r.optimal_value),
            b.map(|r| r.0)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn sys(num_vars: usize, rows: &[(&[i64], i64, Relation)]) -> LinearSystem {
        LinearSystem::from_rows(
            num_vars,
            rows.iter()
                .map(|(c, b, r)| Row {
                    coeffs: RatVector::from_ints(c),
                    rhs: int(*b),
                    relation: *r,
                })
                .collect(),
        )
        .unwrap()
    }

    use Relation::{Eq as E, Ge as G};

    #[test]
    fn two_variable_example() {
        let s = sys(2, &[(&[1, 1], 2, G), (&[2, -1], 0, G), (&[0, 1], 0, G)]);
        let obj = RatVector::from_ints(&[2, 1]);
        let r = minimize_checked(&s, &obj).unwrap();
        assert_eq!(r.optimal_value, rat(8, 3));
        assert_eq!(r.witness_vertex, RatVector::new(vec![rat(2, 3), rat(4, 3)]));
        assert_eq!(r.active_rows, vec![0, 1]);
        assert_eq!(r.to_string(), "value=8/3 vertex=(2/3,4/3)");
        let zero = minimize_checked(&s, &RatVector::zeros(2)).unwrap();
        assert_eq!(zero.optimal_value, int(0));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let s = sys(1, &[(&[1], 2, G), (&[-1], -1, G)]);
        assert_eq!(
            minimize_checked(&s, &RatVector::from_ints(&[1])),
            Err(Error::Infeasible)
        );
        let s = sys(2, &[(&[1, 0], 0, G)]);
        assert_eq!(
            minimize_checked(&s, &RatVector::from_ints(&[1, 0]))
                .unwrap()
                .optimal_value,
            int(0)
        );
        assert_eq!(
            minimize_checked(&s, &RatVector::from_ints(&[1, 1])),
            Err(Error::Unbounded)
        );
        let s = sys(2, &[(&[1, 0], 0, G), (&[0, 1], 0, G)]);
        assert_eq!(
            minimize_checked(&s, &RatVector::from_ints(&[1, -1])),
            Err(Error::Unbounded)
        );
    }

    #[test]
    fn equalities_and_lineality() {
        let s = sys(
            3,
            &[
                (&[1, 1, 1], 3, E),
                (&[1, 0, 0], 0, G),
                (&[0, 1, 0], 0, G),
                (&[0, 0, 1], 0, G),
            ],
        );
        let r = minimize_checked(&s, &RatVector::from_ints(&[1, 2, 3])).unwrap();
        assert_eq!(r.optimal_value, int(3));
        assert_eq!(r.witness_vertex, RatVector::from_ints(&[3, 0, 0]));
        // free third variable with zero cost: a line of optima
        let s = sys(3, &[(&[1, 0, 0], 1, G), (&[0, 1, 0], 2, G)]);
        let r = minimize_checked(&s, &RatVector::from_ints(&[1, 1, 0])).unwrap();
        assert_eq!(r.optimal_value, int(3));
        let s = sys(0, &[]);
        assert_eq!(
            minimize_checked(&s, &RatVector::zeros(0))
                .unwrap()
                .optimal_value,
            int(0)
        );
    }

    #[test]
    fn lexicographic_tie_break() {
        // every point of the segment x + y = 1 is optimal
        let s = sys(2, &[(&[1, 1], 1, G), (&[1, 0], 0, G), (&[0, 1], 0, G)]);
        let r = minimize(&s, &RatVector::from_ints(&[1, 1])).unwrap();
        assert_eq!(r.witness_vertex, RatVector::from_ints(&[0, 1]));
    }

    #[test]
    fn system_format() {
        let s = sys(2, &[(&[1, 1], 2, G), (&[1, -1], 0, E)]);
        assert_eq!(s.to_string(), "VARS 2\nROW GE 1 1 | 2\nROW EQ 1 -1 | 0\n");
    }
}
