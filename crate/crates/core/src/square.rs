//! Perfect-square certificates for polynomials `1 + b_1 t + … + b_{2m} t^{2m}`
//! and the enumerative counts attached to them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};

/// Polynomial in `s_1..s_m` with `wt(s_j) = j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl WeightedPoly {
    pub fn zero(vars: usize) -> Self {
        WeightedPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// `c · s_j` (1-based `j`).
    pub fn var(vars: usize, j: usize, c: Rational) -> Self {
        let mut e = vec![0; vars];
        e[j - 1] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &WeightedPoly) -> WeightedPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeightedPoly) -> WeightedPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> WeightedPoly {
        let mut out = Self::zero(self.vars);
        if !s.is_zero() {
            out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        }
        out
    }

    pub fn mul(&self, other: &WeightedPoly) -> WeightedPoly {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn eval(&self, s: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(s)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k))
            })
            .sum()
    }

    pub fn weighted_degree(e: &[u32]) -> u64 {
        e.iter()
            .enumerate()
            .map(|(j, &k)| (j as u64 + 1) * k as u64)
            .sum()
    }

    /// Whether every monomial has weighted degree `d`.
    pub fn is_quasi_homogeneous(&self, d: u64) -> bool {
        self.terms.keys().all(|e| Self::weighted_degree(e) == d)
    }

    /// Whether every coefficient has a power-of-two denominator.
    pub fn has_dyadic_coefficients(&self) -> bool {
        self.terms.values().all(Rational::has_dyadic_denominator)
    }

    /// `p(λs_1, λ²s_2, …, λ^m s_m)`.
    pub fn weighted_rescale(&self, lambda: &Rational) -> WeightedPoly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * lambda.pow(Self::weighted_degree(e) as u32));
        }
        out
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("s{}", j + 1)
                    } else {
                        format!("s{}^{k}", j + 1)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCertificate {
    pub coefficients: Vec<Rational>,
    /// `r_1..r_m` fixed by the coefficients of `t..t^m`.
    pub root: Vec<Rational>,
    pub is_square: bool,
    /// First `i > m` with `b_i ≠ A_{m,i}(b_1..b_m)`.
    pub failure_index: Option<usize>,
}

fn root_coefficients<T: Clone>(
    b: &[T],
    m: usize,
    half: impl Fn(&T) -> T,
    mul: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    // r_i = (b_i - Σ_{0<j<i} r_j r_{i-j}) / 2
    let mut r: Vec<T> = Vec::with_capacity(m);
    for i in 1..=m {
        let mut acc = b[i - 1].clone();
        for j in 1..i {
            acc = sub(&acc, &mul(&r[j - 1], &r[i - j - 1]));
        }
        r.push(half(&acc));
    }
    r
}

/// Coefficient of `t^i` in `(1 + Σ r_j t^j)²` for `i > m`.
fn square_tail<T: Clone>(
    r: &[T],
    i: usize,
    zero: T,
    mul: impl Fn(&T, &T) -> T,
    add: impl Fn(&T, &T) -> T,
) -> T {
    let m = r.len();
    let mut acc = zero;
    for j in i - m..=m {
        acc = add(&acc, &mul(&r[j - 1], &r[i - j - 1]));
    }
    acc
}

/// Decides whether `1 + Σ_{i≤2m} b_i t^i` is the square of a polynomial of
/// degree `m` with constant term 1.
pub fn truncated_sqrt(b: &[Rational]) -> Result<SquareCertificate> {
    if b.is_empty() || !b.len().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "expected 2m coefficients, got {}",
            b.len()
        )));
    }
    let m = b.len() / 2;
    let root = root_coefficients(b, m, |x| x * rat(1, 2), |x, y| x * y, |x, y| x - y);
    let failure_index = (m + 1..=2 * m)
        .find(|&i| square_tail(&root, i, Rational::zero(), |x, y| x * y, |x, y| x + y) != b[i - 1]);
    Ok(SquareCertificate {
        coefficients: b.to_vec(),
        root,
        is_square: failure_index.is_none(),
        failure_index,
    })
}

/// `A_{m,i}`: the value `b_i` must take, as a polynomial in `b_1..b_m`, for
/// the polynomial to be a square.
pub fn a_poly(m: usize, i: usize) -> Result<WeightedPoly> {
    if m == 0 || !(m + 1..=2 * m).contains(&i) {
        return Err(Error::InvalidInput(format!(
            "need m >= 1 and m < i <= 2m, got m={m}, i={i}"
        )));
    }
    let s: Vec<WeightedPoly> = (1..=m)
        .map(|j| WeightedPoly::var(m, j, Rational::one()))
        .collect();
    let zero = WeightedPoly::zero(m);
    let r = root_coefficients(
        &s,
        m,
        |x| x.scale(&rat(1, 2)),
        |x, y| x.mul(y),
        |x, y| x.sub(y),
    );
    let p = square_tail(&r, i, zero, |x, y| x.mul(y), |x, y| x.add(y));
    debug_assert!(p.has_dyadic_coefficients());
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCount {
    /// `2·(2M−2)!/(M−1)!`.
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
    /// Degrees `M, M+1, …, 2M−2` of the defining equations.
    pub degrees: Vec<u64>,
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn line_count(m: u64) -> Result<LineCount> {
    if m < 2 {
        return Err(Error::PreconditionViolated("M >= 2".into()));
    }
    let count = BigUint::from(2u32) * factorial(2 * m - 2) / factorial(m - 1);
    Ok(LineCount {
        count,
        degrees: (m..=2 * m - 2).collect(),
    })
}

/// `min{ C(2M−1, j) : M ≤ j ≤ 2M−2 }`, which is `2M − 1`.
pub fn y0_codim_bound(m: u64) -> Result<BigUint> {
    if m < 3 {
        return Err(Error::PreconditionViolated("M >= 3".into()));
    }
    let top = BigUint::from(2 * m - 1);
    let min = (m..=2 * m - 2)
        .map(|j| binomial(top.clone(), BigUint::from(j)))
        .min()
        .expect("nonempty range");
    if min != top {
        return Err(Error::HypothesisViolated(format!(
            "minimum {min} differs from 2M-1 = {top}"
        )));
    }
    Ok(min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankConditions {
    pub conditions: u64,
    pub threshold: u64,
    pub exceeds: bool,
}

/// Rank at most `target_rank` for a symmetric `(M+1)×(M+1)` matrix costs
/// `k(k+1)/2` conditions with `k = M + 1 − target_rank`; compared with
/// `2M − 3`.
pub fn rank_condition_count(m: u64, target_rank: u64) -> Result<RankConditions> {
    if !(3..=m + 1).contains(&target_rank) {
        return Err(Error::PreconditionViolated(
            "3 <= target rank <= M+1".into(),
        ));
    }
    let k = m + 1 - target_rank;
    let conditions = k * (k + 1) / 2;
    let threshold = 2 * m - 3;
    Ok(RankConditions {
        conditions,
        threshold,
        exceeds: conditions > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn small_squares() {
        let c = truncated_sqrt(&[int(2), int(1)]).unwrap();
        assert!(c.is_square);
        assert_eq!(c.root, [int(1)]);
        let c = truncated_sqrt(&[int(1), int(0)]).unwrap();
        assert_eq!(
            (c.is_square, c.failure_index, c.root.clone()),
            (false, Some(2), vec![rat(1, 2)])
        );
        assert!(truncated_sqrt(&[int(1)]).is_err());
    }

    #[test]
    fn a_polys() {
        assert_eq!(a_poly(1, 2).unwrap().to_string(), "1/4*s1^2");
        assert_eq!(a_poly(2, 3).unwrap().to_string(), "1/2*s1*s2 - 1/8*s1^3");
        for m in 1..=6 {
            for i in m + 1..=2 * m {
                let p = a_poly(m, i).unwrap();
                assert!(p.is_quasi_homogeneous(i as u64));
                assert!(p.has_dyadic_coefficients());
            }
        }
        assert!(a_poly(2, 2).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(line_count(4).unwrap().count, BigUint::from(240u32));
        assert_eq!(line_count(5).unwrap().count, BigUint::from(3360u32));
        assert_eq!(line_count(2).unwrap().count, BigUint::from(4u32));
        assert_eq!(line_count(4).unwrap().degrees, [4, 5, 6]);
        for (m, v) in [(3u64, 5u32), (4, 7), (5, 9)] {
            assert_eq!(y0_codim_bound(m).unwrap(), BigUint::from(v));
        }
        assert!(rank_condition_count(6, 3).unwrap().exceeds);
        assert_eq!(
            rank_condition_count(5, 3).unwrap(),
            RankConditions {
                conditions: 6,
                threshold: 7,
                exceeds: false
            }
        );
        assert_eq!(rank_condition_count(6, 7).unwrap().conditions, 0);
    }
}
