//! Independent solver: two-phase tableau simplex with Bland's rule.

use super::{LinearSystem, Relation};
use crate::error::{Error, Result};
use crate::exact::{RatVector, Rational};

struct Tableau {
    // rows: constraint coefficients followed by the right-hand side
    t: Vec<Vec<Rational>>,
    // reduced costs followed by minus the objective value
    obj: Vec<Rational>,
    basis: Vec<usize>,
    cols: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip().expect("nonzero pivot");
        for v in &mut self.t[r] {
            *v *= &inv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut obj: Vec<Rational> = costs.to_vec();
        obj.push(Rational::zero());
        for (i, row) in self.t.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (v, a) in obj.iter_mut().zip(row) {
                *v -= cb * a;
            }
        }
        self.obj = obj;
    }

    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Outcome {
        loop {
            let Some(e) = (0..self.cols).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[e];
                let take = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if take {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Outcome::Unbounded,
            }
        }
    }
}

/// Minimum of `objective · x` and an optimal point.
///
/// Free variables are split as `x = u − w`; `≥` rows get a surplus column and
/// every row an artificial one for phase one.
pub fn minimize_simplex(
    system: &LinearSystem,
    objective: &RatVector,
) -> Result<(Rational, RatVector)> {
    let n = system.num_vars();
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: objective.len(),
        });
    }
    let rows = system.rows();
    let m = rows.len();
    let n_surplus = rows.iter().filter(|r| r.relation == Relation::Ge).count();
    let first_art = 2 * n + n_surplus;
    let cols = first_art + m;

    let mut t = Vec::with_capacity(m);
    let mut s_col = 2 * n;
    for (i, r) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, c) in r.coeffs.iter().enumerate() {
            row[j] = c.clone();
            row[n + j] = -c;
        }
        if r.relation == Relation::Ge {
            row[s_col] = -Rational::one();
            s_col += 1;
        }
        row[cols] = r.rhs.clone();
        if row[cols].is_negative() {
            for v in &mut row {
                *v = -&*v;
            }
        }
        row[first_art + i] = Rational::one();
        t.push(row);
    }
    let mut tab = Tableau {
        t,
        obj: Vec::new(),
        basis: (first_art..cols).collect(),
        cols,
    };

    let phase1: Vec<Rational> = (0..cols)
        .map(|j| {
            if j >= first_art {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect();
    tab.set_costs(&phase1);
    tab.run(|_| true);
    if !tab.obj[cols].is_zero() {
        return Err(Error::Infeasible);
    }
    // drive artificial columns out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= first_art {
            match (0..first_art).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = vec![Rational::zero(); cols];
    for (j, c) in objective.iter().enumerate() {
        phase2[j] = c.clone();
        phase2[n + j] = -c;
    }
    tab.set_costs(&phase2);
    if let Outcome::Unbounded = tab.run(|j| j < first_art) {
        return Err(Error::Unbounded);
    }
    let mut x = RatVector::zeros(n);
    for (i, &b) in tab.basis.iter().enumerate() {
        let v = &tab.t[i][cols];
        if b < n {
            x[b] += v;
        } else if b < 2 * n {
            x[b - n] -= v;
        }
    }
    Ok((-&tab.obj[cols], x))
}
