//! Two-variable systems in `(ν₊, ν₋)` from restricting to a conic, a cone or
//! a pencil of K3 sections, and the degree count that rules out the
//! remaining region.

use std::fmt;

use serde::Serialize;

use super::elimination::{eliminate, initial_rows, TracedRow};
use crate::error::{Error, Result};
use crate::exact::{int, rat, RatVector, Rational};
use crate::polytope::{LinearSystem, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RestrictionKind {
    Conic22,
    Cone23,
    K3Pencil32,
}

impl RestrictionKind {
    pub fn name(self) -> &'static str {
        match self {
            RestrictionKind::Conic22 => "conic_22",
            RestrictionKind::Cone23 => "cone_23",
            RestrictionKind::K3Pencil32 => "k3_pencil_32",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            RestrictionKind::Conic22,
            RestrictionKind::Cone23,
            RestrictionKind::K3Pencil32,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImpliedBound {
    /// 0 for `ν₊`, 1 for `ν₋`.
    pub variable: usize,
    pub upper: bool,
    pub strict: bool,
    /// Bound as a multiple of `n`.
    pub ratio: Rational,
    pub value: Rational,
    /// Derived under the extra hypothesis `ν₊ > n`.
    pub conditional: bool,
    /// Row in `(ν₊, ν₋, n)` that gives the bound, with its parents.
    pub derivation: TracedRow,
}

impl fmt::Display for ImpliedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.variable == 0 { "nu+" } else { "nu-" };
        let op = match (self.upper, self.strict) {
            (true, false) => "<=",
            (true, true) => "<",
            (false, false) => ">=",
            (false, true) => ">",
        };
        write!(f, "{var} {op} {}*n", self.ratio)?;
        if self.conditional {
            f.write_str(" given nu+ > n")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionSystem {
    pub kind: RestrictionKind,
    /// Rows in `(ν₊, ν₋)` with `n` substituted.
    pub system: LinearSystem,
    pub bounds: Vec<ImpliedBound>,
}

fn homogeneous(kind: RestrictionKind, m: i64) -> Vec<[i64; 3]> {
    // columns: nu+, nu-, n
    match kind {
        RestrictionKind::Conic22 => vec![
            [2 * (m - 3), -2 * (m - 1), 4],
            [-2 * (m - 1), 2 * (m - 3), 4],
        ],
        RestrictionKind::Cone23 => vec![[-(m - 1), m - 2, 2], [m - 2, -(m - 1), 2]],
        RestrictionKind::K3Pencil32 => vec![[2, -3, 2], [-3, 2, 2]],
    }
}

fn bounds_on(rows: &[TracedRow], var: usize, strict_origin: Option<usize>) -> Vec<ImpliedBound> {
    let other = 1 - var;
    let projected = eliminate(rows, other);
    let mut upper: Option<ImpliedBound> = None;
    let mut lower: Option<ImpliedBound> = None;
    for t in projected {
        let x = t.row.coeffs[var].clone();
        if x.is_zero() {
            continue;
        }
        let ratio = -&t.row.coeffs[2] / &x;
        let conditional = strict_origin.is_some_and(|s| t.origin.contains(&s));
        let b = ImpliedBound {
            variable: var,
            upper: x.is_negative(),
            strict: conditional,
            value: ratio.clone(),
            ratio,
            conditional,
            derivation: t,
        };
        let slot = if b.upper { &mut upper } else { &mut lower };
        let tighter = match slot {
            None => true,
            Some(cur) if b.upper => b.ratio < cur.ratio,
            Some(cur) => b.ratio > cur.ratio,
        };
        if tighter {
            *slot = Some(b);
        }
    }
    upper.into_iter().chain(lower).collect()
}

/// The named system and the tightest bound on each variable obtained by
/// eliminating the other. For `cone_23` the lower bound on `ν₋` is derived
/// with `ν₊ > n` added and is strict.
pub fn restriction_system(
    kind: RestrictionKind,
    m: i64,
    n: &Rational,
) -> Result<RestrictionSystem> {
    if kind != RestrictionKind::K3Pencil32 && m < 4 {
        return Err(Error::PreconditionViolated("M >= 4".into()));
    }
    let rows = homogeneous(kind, m);
    let hom = LinearSystem::from_rows(
        3,
        rows.iter()
            .map(|r| Row::ge(RatVector::from_ints(r), int(0)))
            .collect(),
    )?;
    let system = LinearSystem::from_rows(
        2,
        rows.iter()
            .map(|r| Row::ge(RatVector::from_ints(&r[..2]), -int(r[2]) * n))
            .collect(),
    )?;
    let base = initial_rows(&hom);
    let mut bounds: Vec<ImpliedBound> = bounds_on(&base, 0, None)
        .into_iter()
        .chain(bounds_on(&base, 1, None))
        .filter(|b| b.upper)
        .collect();
    if kind == RestrictionKind::Cone23 {
        let mut with_hyp = hom.clone();
        with_hyp.push(Row::ge(RatVector::from_ints(&[1, 0, -1]), int(0)))?;
        let strict = with_hyp.rows().len() - 1;
        bounds.extend(
            bounds_on(&initial_rows(&with_hyp), 1, Some(strict))
                .into_iter()
                .filter(|b| b.conditional),
        );
    }
    for b in &mut bounds {
        b.value = &b.ratio * n;
    }
    Ok(RestrictionSystem {
        kind,
        system,
        bounds,
    })
}

/// `deg·(b₊² + b₋²)` and whether it already reaches `budget`, so that the
/// open region `ν₊ > b₊, ν₋ > b₋` forces the left side above it.
pub fn degree_contradiction(
    deg: u32,
    b_plus: &Rational,
    b_minus: &Rational,
    budget: &Rational,
) -> (Rational, bool) {
    let min_lhs = Rational::from(deg) * (b_plus.square() + b_minus.square());
    let contradiction = &min_lhs >= budget;
    (min_lhs, contradiction)
}

/// With `ν₊ > n` and `ν₋ > n/2`: returns `3(n + n/2) = 9n/2` and whether it
/// exceeds `4n`.
pub fn prop24_check(n: &Rational) -> (Rational, bool) {
    let lower = int(3) * (n + n * rat(1, 2));
    let exceeds = lower > int(4) * n;
    (lower, exceeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_bounds() {
        for m in 4..9 {
            let r = restriction_system(RestrictionKind::Conic22, m, &int(1)).unwrap();
            let shown: Vec<String> = r.bounds.iter().map(ToString::to_string).collect();
            assert_eq!(shown, ["nu+ <= 1*n", "nu- <= 1*n"]);
        }
        assert!(restriction_system(RestrictionKind::Conic22, 3, &int(1)).is_err());
    }

    #[test]
    fn cone_bounds() {
        let r = restriction_system(RestrictionKind::Cone23, 4, &int(2)).unwrap();
        let b = r.bounds.iter().find(|b| b.conditional).unwrap();
        assert_eq!(b.to_string(), "nu- > 1/2*n given nu+ > n");
        assert_eq!(b.value, int(1));
        let r = restriction_system(RestrictionKind::Cone23, 7, &int(1)).unwrap();
        assert_eq!(
            r.bounds.iter().find(|b| b.conditional).unwrap().ratio,
            rat(4, 5)
        );
        assert_eq!(
            r.system.to_string(),
            "VARS 2\nROW GE -6 5 | -2\nROW GE 5 -6 | -2\n"
        );
    }

    #[test]
    fn k3_pencil() {
        let r = restriction_system(RestrictionKind::K3Pencil32, 4, &int(1)).unwrap();
        let b = &r.bounds[0];
        assert_eq!(b.to_string(), "nu+ <= 2*n");
        assert_eq!(b.derivation.raw.coeffs, RatVector::from_ints(&[-5, 0, 10]));
        let mults: Vec<Rational> = b.derivation.parents.iter().map(|p| p.1.clone()).collect();
        assert_eq!(mults, [int(2), int(3)]);
    }

    #[test]
    fn degree_counts() {
        let n = int(3);
        let (lhs, c) = degree_contradiction(7, &n, &(&n / int(2)), &(int(8) * n.square()));
        assert_eq!((lhs, c), (rat(315, 4), true));
        let (lhs, c) = degree_contradiction(6, &int(1), &rat(2, 3), &int(8));
        assert_eq!((lhs, c), (rat(26, 3), true));
        let (lhs, c) = degree_contradiction(1, &int(1), &int(0), &int(8));
        assert_eq!((lhs, c), (int(1), false));
        assert_eq!(prop24_check(&int(2)), (int(9), true));
    }
}
