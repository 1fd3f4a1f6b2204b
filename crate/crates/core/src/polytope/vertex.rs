//! Reference solver: exhaustive enumeration of basic feasible points.

use super::{LPResult, LinearSystem, Relation, Row};
use crate::error::{Error, Result};
use crate::exact::{solve_square, RatMatrix, RatVector, Rational};

/// Minimum of `objective · x` over the system by enumerating every
/// `num_vars`-subset of rows. Unboundedness is detected from the extreme rays
/// of the recession cone; a lineality space is removed first by adding
/// equations `d · x = 0` for a basis of it. Ties between optimal vertices
/// go to the lexicographically smallest one.
pub fn minimize(system: &LinearSystem, objective: &RatVector) -> Result<LPResult> {
    let n = system.num_vars();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    let coeffs: Vec<Vec<Rational>> = system
        .rows()
        .iter()
        .map(|r| r.coeffs.as_slice().to_vec())
        .collect();
    let lineality = if coeffs.is_empty() {
        (0..n).map(|i| RatVector::unit(n, i)).collect()
    } else {
        RatMatrix::from_rows(coeffs)?.nullspace()
    };
    let free_descent = lineality
        .iter()
        .any(|d| !objective.dot(d).expect("length").is_zero());

    let mut rows: Vec<Row> = system.rows().to_vec();
    rows.extend(lineality.into_iter().map(|d| Row::eq(d, Rational::zero())));
    let feasible = |x: &RatVector| rows.iter().all(|r| r.holds(x));

    let mut best: Option<(Rational, RatVector)> = None;
    for subset in Subsets::new(rows.len(), n) {
        let a: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| rows[i].coeffs.as_slice().to_vec())
            .collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rows[i].rhs.clone()).collect();
        let Some(x) = solve_square(a, b) else {
            continue;
        };
        if !feasible(&x) {
            continue;
        }
        let v = objective.dot(&x)?;
        let better = match &best {
            None => true,
            Some((bv, bx)) => v < *bv || (v == *bv && x < *bx),
        };
        if better {
            best = Some((v, x));
        }
    }
    let Some((value, witness)) = best else {
        return Err(Error::Infeasible);
    };
    if free_descent || has_descending_ray(&rows, n, objective) {
        return Err(Error::Unbounded);
    }
    Ok(LPResult {
        active_rows: system.active_rows(&witness),
        optimal_value: value,
        witness_vertex: witness,
    })
}

/// True if some extreme ray `d` of `{d : A_ge d ≥ 0, A_eq d = 0}` has
/// `objective · d < 0`. The cone must be pointed.
fn has_descending_ray(rows: &[Row], n: usize, objective: &RatVector) -> bool {
    if n == 0 {
        return false;
    }
    let in_cone = |d: &RatVector| {
        rows.iter().all(|r| {
            let s = r.coeffs.dot(d).expect("length");
            match r.relation {
                Relation::Ge => !s.is_negative(),
                Relation::Eq => s.is_zero(),
            }
        })
    };
    for subset in Subsets::new(rows.len(), n - 1) {
        let d = if subset.is_empty() {
            if n != 1 {
                continue;
            }
            RatVector::unit(1, 0)
        } else {
            let m = RatMatrix::from_rows(
                subset
                    .iter()
                    .map(|&i| rows[i].coeffs.as_slice().to_vec())
                    .collect(),
            )
            .expect("rectangular");
            let ns = m.nullspace();
            if ns.len() != 1 {
                continue;
            }
            ns.into_iter().next().expect("one vector")
        };
        for d in [d.clone(), d.scale(&-Rational::one())] {
            if objective.dot(&d).expect("length").is_negative() && in_cone(&d) {
                return true;
            }
        }
    }
    false
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) struct Subsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Subsets {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            cur: if k <= n { Some((0..k).collect()) } else { None },
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}
