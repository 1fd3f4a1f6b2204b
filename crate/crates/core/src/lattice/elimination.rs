//! Fourier–Motzkin elimination with a record of how every row was formed.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::exact::{primitive_scale, RatVector, Rational};
use crate::polytope::{LinearSystem, Relation, Row};

/// A `≥` row produced during elimination. `raw` is the positive combination
/// of the parents as written; `row` is `raw` scaled to primitive integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TracedRow {
    pub raw: Row,
    pub row: Row,
    /// Indices into the previous stage with their multipliers.
    pub parents: Vec<(usize, Rational)>,
    /// Indices of the input rows this one descends from.
    pub origin: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub variable: usize,
    pub rows: Vec<TracedRow>,
}

fn normalize(r: &Row) -> Row {
    let mut all: Vec<Rational> = r.coeffs.iter().cloned().collect();
    all.push(r.rhs.clone());
    match primitive_scale(&all) {
        Some(s) => Row::ge(r.coeffs.scale(&s), &r.rhs * &s),
        None => r.clone(),
    }
}

fn is_tautology(r: &Row) -> bool {
    r.coeffs.is_zero() && !r.rhs.is_positive()
}

/// Input rows of a system with every equation split into two inequalities.
/// Origins index the rows of `system`.
pub fn initial_rows(system: &LinearSystem) -> Vec<TracedRow> {
    let mut out = Vec::new();
    for (i, r) in system.rows().iter().enumerate() {
        let mut push = |row: Row| {
            out.push(TracedRow {
                raw: row.clone(),
                row,
                parents: Vec::new(),
                origin: BTreeSet::from([i]),
            })
        };
        push(Row::ge(r.coeffs.clone(), r.rhs.clone()));
        if r.relation == Relation::Eq {
            push(Row::ge(r.coeffs.scale(&-Rational::one()), -&r.rhs));
        }
    }
    out
}

/// One elimination step. Rows free of `var` pass through; every pair of a
/// row with positive and one with negative coefficient is combined as
/// `|q|·pos + p·neg`. Results are reduced to primitive form, duplicates and
/// tautologies dropped.
pub fn eliminate(rows: &[TracedRow], var: usize) -> Vec<TracedRow> {
    let mut out: Vec<TracedRow> = Vec::new();
    let mut push = |t: TracedRow| {
        if !is_tautology(&t.row) && !out.iter().any(|o| o.row == t.row) {
            out.push(t);
        }
    };
    let coef = |i: usize| rows[i].row.coeffs[var].clone();
    for (i, r) in rows.iter().enumerate() {
        if coef(i).is_zero() {
            push(TracedRow {
                raw: r.row.clone(),
                row: r.row.clone(),
                parents: vec![(i, Rational::one())],
                origin: r.origin.clone(),
            });
        }
    }
    let pos: Vec<usize> = (0..rows.len()).filter(|&i| coef(i).is_positive()).collect();
    let neg: Vec<usize> = (0..rows.len()).filter(|&i| coef(i).is_negative()).collect();
    for &p in &pos {
        for &q in &neg {
            let (mp, mq) = (-coef(q), coef(p));
            let (a, b) = (&rows[p].row, &rows[q].row);
            let coeffs: RatVector = a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x * &mp + y * &mq)
                .collect();
            let mut coeffs = coeffs;
            coeffs[var] = Rational::zero();
            let raw = Row::ge(coeffs, &a.rhs * &mp + &b.rhs * &mq);
            let mut parents = vec![(p, mp), (q, mq)];
            parents.sort_by_key(|x| x.0);
            push(TracedRow {
                row: normalize(&raw),
                raw,
                parents,
                origin: rows[p].origin.union(&rows[q].origin).copied().collect(),
            });
        }
    }
    out
}

/// Projection of the feasible set along `var`. The variable keeps its
/// (now zero) column so indices stay put.
pub fn fourier_motzkin(system: &LinearSystem, var: usize) -> LinearSystem {
    let rows = eliminate(&initial_rows(system), var);
    LinearSystem::from_rows(system.num_vars(), rows.into_iter().map(|t| t.row).collect())
        .expect("rows keep the system width")
}

/// Eliminates `order` in turn, keeping every stage.
pub fn fourier_motzkin_traced(
    system: &LinearSystem,
    order: &[usize],
) -> (Vec<TracedRow>, Vec<EliminationStep>) {
    let initial = initial_rows(system);
    let mut steps: Vec<EliminationStep> = Vec::new();
    for &v in order {
        let prev = steps.last().map_or(&initial, |s| &s.rows);
        let rows = eliminate(prev, v);
        steps.push(EliminationStep { variable: v, rows });
    }
    (initial, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn sys(n: usize, rows: &[(&[i64], i64)]) -> LinearSystem {
        LinearSystem::from_rows(
            n,
            rows.iter()
                .map(|(c, b)| Row::ge(RatVector::from_ints(c), int(*b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn small_projection() {
        let p = fourier_motzkin(&sys(2, &[(&[1, 0], 1), (&[-1, 1], 0)]), 0);
        assert_eq!(p.to_string(), "VARS 2\nROW GE 0 1 | 1\n");
        assert!(fourier_motzkin(&LinearSystem::new(3), 1).is_empty());
    }

    #[test]
    fn infeasible_row_survives() {
        let p = fourier_motzkin(&sys(1, &[(&[1], 2), (&[-1], -1)]), 0);
        assert_eq!(p.to_string(), "VARS 1\nROW GE 0 | 1\n");
    }

    #[test]
    fn equations_split() {
        let s = LinearSystem::from_rows(
            2,
            vec![
                Row::eq(RatVector::from_ints(&[1, -1]), int(0)),
                Row::ge(RatVector::from_ints(&[1, 0]), int(3)),
            ],
        )
        .unwrap();
        let p = fourier_motzkin(&s, 0);
        assert_eq!(p.to_string(), "VARS 2\nROW GE 0 1 | 3\n");
    }
}
