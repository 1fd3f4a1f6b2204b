//! Slow, independent reimplementations used to cross-check the main
//! routines. None of these share code with what they check.

use crate::exact::{RatVector, Rational};
use crate::graph::BlowupGraph;
use crate::polytope::{LinearSystem, Relation};

/// Number of directed paths from `from` to `to` by depth-first search.
pub fn dfs_path_count(g: &BlowupGraph, from: usize, to: usize) -> u64 {
    if from == to {
        return 1;
    }
    g.arrows()
        .iter()
        .filter(|&&(i, j)| i == from && j >= to)
        .map(|&(_, j)| dfs_path_count(g, j, to))
        .sum()
}

/// Product of dense coefficient lists.
pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `c_0 + … + c_m t^m` with `(c_0 + …)² ≡ p mod t^{m+1}`, for `p_0 = 1`,
/// from the binomial series of `(1 + x)^{1/2}` with `x = p − 1`.
pub fn series_sqrt(p: &[Rational], m: usize) -> Vec<Rational> {
    let mut x: Vec<Rational> = p.iter().take(m + 1).cloned().collect();
    x.resize(m + 1, Rational::zero());
    x[0] = Rational::zero();
    let mut out = vec![Rational::zero(); m + 1];
    let mut power = vec![Rational::zero(); m + 1];
    power[0] = Rational::one();
    let mut binom = Rational::one();
    let half = Rational::new(1, 2);
    for j in 0..=m {
        for (o, c) in out.iter_mut().zip(&power) {
            *o += &binom * c;
        }
        // C(1/2, j+1) = C(1/2, j) * (1/2 - j) / (j + 1)
        binom = binom * (&half - Rational::from(j as u64)) / Rational::from(j as u64 + 1);
        let mut next = poly_mul(&power, &x);
        next.truncate(m + 1);
        power = next;
    }
    out
}

/// Feasibility of `system` with every coordinate but `var` fixed to `point`,
/// by intersecting the intervals each row allows for `var`.
pub fn feasible_in(system: &LinearSystem, var: usize, point: &RatVector) -> bool {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for r in system.rows() {
        let a = &r.coeffs[var];
        let rest: Rational = r
            .coeffs
            .iter()
            .zip(point.iter())
            .enumerate()
            .filter(|(j, _)| *j != var)
            .map(|(_, (c, x))| c * x)
            .sum();
        let need = &r.rhs - rest;
        if a.is_zero() {
            let ok = match r.relation {
                Relation::Ge => !need.is_positive(),
                Relation::Eq => need.is_zero(),
            };
            if !ok {
                return false;
            }
            continue;
        }
        let t = &need / a;
        let (lower, upper) = match r.relation {
            Relation::Eq => (true, true),
            Relation::Ge => (a.is_positive(), a.is_negative()),
        };
        if lower {
            lo = Some(lo.map_or(t.clone(), |v| v.max(t.clone())));
        }
        if upper {
            hi = Some(hi.map_or(t.clone(), |v| v.min(t.clone())));
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => l <= h,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn series_root_of_a_square() {
        // (1 + t)^2 = 1 + 2t + t^2
        let r = series_sqrt(&[int(1), int(2), int(1)], 1);
        assert_eq!(r, [int(1), int(1)]);
        let r = series_sqrt(&[int(1), int(1)], 2);
        assert_eq!(r, [int(1), Rational::new(1, 2), Rational::new(-1, 8)]);
    }

    #[test]
    fn dfs_counts() {
        let g = BlowupGraph::new(4, 4, [(2, 1), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1)]);
        assert_eq!(
            (1..=4)
                .map(|j| dfs_path_count(&g, 4, j))
                .collect::<Vec<_>>(),
            [4, 2, 1, 1]
        );
    }
}
