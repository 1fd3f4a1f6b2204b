//! The inequality system on multiplicities along a resolution graph and the
//! closed-form combinatorial bounds checked against it.

use serde::Serialize;

use super::{minimize, LinearSystem, Row};
use crate::error::{Error, Result};
use crate::exact::{int, rat, RatVector, Rational};
use crate::graph::{validate_graph, BlowupGraph};

fn require_valid(g: &BlowupGraph) -> Result<()> {
    match validate_graph(g).first() {
        Some(v) => Err(Error::InvalidGraph(v.to_string())),
        None => Ok(()),
    }
}

fn top_paths(g: &BlowupGraph) -> Result<Vec<Rational>> {
    Ok(g.paths_from(g.n())?
        .into_iter()
        .map(Rational::from)
        .collect())
}

/// Variables `ν_1..ν_N`. Rows, in order:
///
/// * `Σ p_i ν_i ≥ m(Σ_{i≥2} p_i + 1)` with `p_i = p_{N,i}`;
/// * `ν_i ≥ Σ_{j→i} ν_j` for `2 ≤ i < N`;
/// * `2ν_1 ≥ Σ_{j→1} ν_j`;
/// * `ν_N ≥ 0`.
pub fn build_system_l(g: &BlowupGraph, m: &Rational) -> Result<LinearSystem> {
    require_valid(g)?;
    let n = g.n();
    let p = top_paths(g)?;
    let mut sys = LinearSystem::new(n);
    let tail: Rational = p[1..].iter().sum();
    sys.push(Row::ge(
        RatVector::new(p.clone()),
        m * (tail + Rational::one()),
    ))?;
    let incoming = |i: usize, own: Rational| {
        let mut c = RatVector::zeros(n);
        c[i - 1] = own;
        for &j in g.sources(i) {
            c[j - 1] -= Rational::one();
        }
        c
    };
    for i in 2..n {
        sys.push(Row::ge(incoming(i, Rational::one()), Rational::zero()))?;
    }
    sys.push(Row::ge(incoming(1, int(2)), Rational::zero()))?;
    sys.push(Row::ge(RatVector::unit(n, n - 1), Rational::zero()))?;
    Ok(sys)
}

/// `2ν_1 + ν_2` (just `2ν_1` when `N = 1`).
pub fn a13_objective(n: usize) -> RatVector {
    let mut c = RatVector::zeros(n);
    c[0] = int(2);
    if n >= 2 {
        c[1] = Rational::one();
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A13Check {
    pub lp_value: Rational,
    pub witness: RatVector,
    pub theta: Rational,
    /// `(p_1 + p_2)θ`, the objective at `ν = (p_1θ/2, p_2θ, …, p_Nθ)`.
    pub closed_form: Rational,
    /// `lp_value ≥ 2m`.
    pub passes: bool,
}

/// Minimum of `2ν_1 + ν_2` over [`build_system_l`] by vertex enumeration,
/// with the closed form from the point where every structural row is tight.
pub fn check_a13(g: &BlowupGraph, m: &Rational) -> Result<A13Check> {
    let sys = build_system_l(g, m)?;
    let r = minimize(&sys, &a13_objective(g.n()))?;
    let p = top_paths(g)?;
    let tail: Rational = p[1..].iter().sum();
    let denom = p[0].square() * rat(1, 2) + p[1..].iter().map(Rational::square).sum::<Rational>();
    let theta = (tail + Rational::one()) * m / denom;
    let p2 = p.get(1).cloned().unwrap_or_default();
    let closed_form = (&p[0] + p2) * &theta;
    Ok(A13Check {
        passes: r.optimal_value >= int(2) * m,
        lp_value: r.optimal_value,
        witness: r.witness_vertex,
        theta,
        closed_form,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma14Outcome {
    /// The truncated inequality holds strictly at vertex `k`.
    Found { k: usize },
    /// `{2..N-1}` is empty.
    DegenerateRange,
}

/// For a feasible point with `θ_N = 0`, finds `K ∈ {2..N-1}` with
/// `Σ_{i≤K} p_{Ki}θ_i > m(Σ_{2≤i≤K} p_{Ki} + 1)`, trying `K = N - 1` first and
/// then the other targets of `N`.
pub fn lemma14_truncate(
    g: &BlowupGraph,
    m: &Rational,
    vertex: &RatVector,
) -> Result<Lemma14Outcome> {
    require_valid(g)?;
    let n = g.n();
    if vertex.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: vertex.len(),
        });
    }
    if !vertex[n - 1].is_zero() {
        return Err(Error::PreconditionViolated(
            "last coordinate must be zero".into(),
        ));
    }
    if n <= 2 {
        return Ok(Lemma14Outcome::DegenerateRange);
    }
    if !build_system_l(g, m)?.is_satisfied(vertex) {
        return Err(Error::PreconditionViolated("point is not feasible".into()));
    }
    let mut order = vec![n - 1];
    order.extend(
        g.targets(n)
            .iter()
            .copied()
            .filter(|&k| (2..n - 1).contains(&k)),
    );
    for k in order {
        let p = g.paths_from(k)?;
        let lhs: Rational = (1..=k)
            .map(|i| Rational::from(p[i - 1]) * &vertex[i - 1])
            .sum();
        let rhs =
            m * ((2..=k).map(|i| Rational::from(p[i - 1])).sum::<Rational>() + Rational::one());
        if lhs > rhs {
            return Ok(Lemma14Outcome::Found { k });
        }
    }
    Err(Error::NotFound(
        "no truncation index among N-1 and the targets of N".into(),
    ))
}

/// `(p_1+p_2)(Σ_{i≥2} p_i + 1) − p_1² − 2Σ_{i≥2} p_i²` with `p_i = p_{N,i}`.
pub fn lemma15_gap(g: &BlowupGraph) -> Result<Rational> {
    require_valid(g)?;
    let p = top_paths(g)?;
    let p2 = p.get(1).cloned().unwrap_or_default();
    let tail: Rational = p[1..].iter().sum();
    let tail_sq: Rational = p[1..].iter().map(Rational::square).sum();
    Ok((&p[0] + p2) * (tail + Rational::one()) - p[0].square() - int(2) * tail_sq)
}

/// `(p_1+p_2)p_2 + (p_1−p_3)p_1 − p_1² − p_2²` when `N ≥ 3` and `p_2 ≥ p_3`.
pub fn a16_margin(g: &BlowupGraph) -> Result<Option<Rational>> {
    require_valid(g)?;
    let p = top_paths(g)?;
    if p.len() < 3 || p[1] < p[2] {
        return Ok(None);
    }
    Ok(Some(
        (&p[0] + &p[1]) * &p[1] + (&p[0] - &p[2]) * &p[0] - p[0].square() - p[1].square(),
    ))
}

fn chain_prefix(g: &BlowupGraph, k: usize) -> Result<(Rational, Rational, Rational)> {
    require_valid(g)?;
    if k == 0 || k > g.n() {
        return Err(Error::InvalidVertex {
            vertex: k,
            n: g.n(),
        });
    }
    if let Some((from, to)) = g.chain_breaker(k) {
        return Err(Error::ChainViolated { k, from, to });
    }
    let p = top_paths(g)?;
    let head: Rational = p[..k].iter().sum();
    let rest: Rational = p[k..].iter().sum();
    let q: Rational = p.iter().map(Rational::square).sum();
    Ok((head, rest, q))
}

/// `(Σ_{i≤k} p_i)(Σ_{i>k} p_i + 1) − Σ p_i²`, for graphs whose vertices
/// `1..=k` form a chain.
pub fn lemma48_min(g: &BlowupGraph, k: usize) -> Result<Rational> {
    let (head, rest, q) = chain_prefix(g, k)?;
    Ok(head * (rest + Rational::one()) - q)
}

/// `Δ² − 4(1−a)q` with `Δ = 1 + (1−a)Σ_{i≤k} p_i + Σ_{i>k} p_i`,
/// `q = Σ p_i²`.
pub fn d10_margin(g: &BlowupGraph, k: usize, a: &Rational) -> Result<Rational> {
    let (head, rest, q) = chain_prefix(g, k)?;
    let one = Rational::one();
    let delta = &one + (&one - a) * head + rest;
    Ok(delta.square() - int(4) * (one - a) * q)
}

/// Whether `Δ² ≥ 4(1−a)q` for every rational `a ≤ 1`.
///
/// As a quadratic in `a` the margin has leading coefficient `S²`
/// (`S = Σ_{i≤k} p_i > 0`) and vertex `a* = (S·T − 2q)/S²` with `T = Σp_i + 1`.
/// Its minimum there is `4q/S²` times [`lemma48_min`]. If `a* > 1` the
/// minimum over `a ≤ 1` is at `a = 1`, where the margin is
/// `(Σ_{i>k} p_i + 1)² > 0`.
pub fn lemma48_quadratic_check(g: &BlowupGraph, k: usize) -> Result<bool> {
    let (head, rest, q) = chain_prefix(g, k)?;
    let t = &head + &rest + Rational::one();
    let vertex = (&head * &t - int(2) * &q) / head.square();
    if vertex > Rational::one() {
        return Ok(true);
    }
    Ok(!(head * (rest + Rational::one()) - q).is_negative())
}

/// `8n² − 4nν_1 − 4nν₋ − 2ν_1² − 2ν₋² + 6ν_1ν₋ − Σ_{i≥2} ν_i²`; `nu` holds
/// `ν_1, ν_2, …, ν_{k+1}`.
pub fn f35_value(n: &Rational, nu_minus: &Rational, nu: &[Rational]) -> Rational {
    let nu1 = &nu[0];
    int(8) * n.square()
        - int(4) * n * nu1
        - int(4) * n * nu_minus
        - int(2) * nu1.square()
        - int(2) * nu_minus.square()
        + int(6) * nu1 * nu_minus
        - nu[1..].iter().map(Rational::square).sum::<Rational>()
}

/// Maximiser of [`f35_value`] for fixed `ν_1` subject to
/// `ν_1 + … + ν_{k+1} = (k+2)n`: `ν₋ = (3ν_1 − 2n)/2` and
/// `ν_2 = … = ν_{k+1} = ((k+2)n − ν_1)/k`.
pub fn f35_argmax(n: &Rational, k: u32, nu1: &Rational) -> (Rational, Vec<Rational>) {
    let nu_minus = (int(3) * nu1 - int(2) * n) / int(2);
    let each = (Rational::from(k + 2) * n - nu1) / Rational::from(k);
    let mut nu = vec![nu1.clone()];
    nu.extend(std::iter::repeat_n(each, k as usize));
    (nu_minus, nu)
}

/// Maximum of [`f35_value`] over `ν₋` and `ν_2..ν_{k+1}` under
/// `Σ_{i≤k+1} ν_i = (k+2)n`, for fixed `ν_1 ∈ [0, 2n]`. Equals
/// `(5/2)(2n − ν_1)² − ((k+2)n − ν_1)²/k`.
pub fn maximize_f_35(n: &Rational, k: u32, nu1: &Rational) -> Result<Rational> {
    if k == 0 {
        return Err(Error::PreconditionViolated("k >= 1".into()));
    }
    if !n.is_positive() {
        return Err(Error::PreconditionViolated("n > 0".into()));
    }
    if nu1.is_negative() || nu1 > &(int(2) * n) {
        return Err(Error::PreconditionViolated("0 <= nu_1 <= 2n".into()));
    }
    let (nu_minus, nu) = f35_argmax(n, k, nu1);
    Ok(f35_value(n, &nu_minus, &nu))
}

/// `(1/k)[−(k²+4)n² + (4−2k)nν_1]`. Agrees with [`maximize_f_35`] only at
/// `ν_1 = 2n` for `k = 1`; elsewhere it understates the maximum.
pub fn linear_closed_form_35(n: &Rational, k: u32, nu1: &Rational) -> Rational {
    let k = Rational::from(k);
    (-(k.square() + int(4)) * n.square() + (int(4) - int(2) * &k) * n * nu1) / k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> BlowupGraph {
        BlowupGraph::new(3, 3, [(2, 1), (3, 2), (3, 1)])
    }

    fn rows(s: &LinearSystem) -> Vec<String> {
        s.rows().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn system_examples() {
        let s = build_system_l(&BlowupGraph::chain(2, 2), &int(1)).unwrap();
        assert_eq!(
            rows(&s),
            ["ROW GE 1 1 | 2", "ROW GE 2 -1 | 0", "ROW GE 0 1 | 0"]
        );
        let s = build_system_l(&BlowupGraph::chain(1, 1), &int(1)).unwrap();
        assert_eq!(rows(&s), ["ROW GE 1 | 1", "ROW GE 2 | 0", "ROW GE 1 | 0"]);
        let s = build_system_l(&triangle(), &int(1)).unwrap();
        assert_eq!(
            rows(&s),
            [
                "ROW GE 2 1 1 | 3",
                "ROW GE 0 1 -1 | 0",
                "ROW GE 2 -1 -1 | 0",
                "ROW GE 0 0 1 | 0"
            ]
        );
    }

    #[test]
    fn a13_examples() {
        let c = check_a13(&BlowupGraph::chain(2, 2), &int(1)).unwrap();
        assert_eq!(
            (c.theta.clone(), c.closed_form.clone(), c.lp_value.clone()),
            (rat(4, 3), rat(8, 3), rat(8, 3))
        );
        assert!(c.passes);
        let c = check_a13(&triangle(), &int(1)).unwrap();
        assert_eq!(
            (c.theta.clone(), c.closed_form.clone()),
            (rat(3, 4), rat(9, 4))
        );
        assert!(c.passes && c.lp_value <= c.closed_form);
        let c = check_a13(&triangle(), &int(0)).unwrap();
        assert_eq!((c.lp_value, c.closed_form), (int(0), int(0)));
        assert!(c.passes);
        let c = check_a13(&BlowupGraph::chain(1, 1), &int(1)).unwrap();
        assert_eq!(c.lp_value, int(2));
        assert_eq!(c.witness, RatVector::from_ints(&[1]));
    }

    #[test]
    fn lemma14_examples() {
        let chain2 = BlowupGraph::chain(2, 2);
        let out = lemma14_truncate(&chain2, &int(1), &RatVector::from_ints(&[1, 0])).unwrap();
        assert_eq!(out, Lemma14Outcome::DegenerateRange);
        let chain3 = BlowupGraph::chain(3, 3);
        let out = lemma14_truncate(&chain3, &int(1), &RatVector::from_ints(&[2, 1, 0])).unwrap();
        assert_eq!(out, Lemma14Outcome::Found { k: 2 });
        assert!(lemma14_truncate(&chain3, &int(1), &RatVector::from_ints(&[2, 1, 1])).is_err());
        assert!(lemma14_truncate(&chain3, &int(1), &RatVector::from_ints(&[0, 0, 0])).is_err());
    }

    #[test]
    fn lemma15_examples() {
        assert_eq!(lemma15_gap(&BlowupGraph::chain(2, 2)).unwrap(), int(1));
        assert_eq!(lemma15_gap(&BlowupGraph::chain(3, 3)).unwrap(), int(1));
        assert_eq!(lemma15_gap(&triangle()).unwrap(), int(1));
        assert_eq!(a16_margin(&triangle()).unwrap(), Some(int(0)));
    }

    #[test]
    fn lemma48_examples() {
        assert_eq!(lemma48_min(&BlowupGraph::chain(3, 3), 2).unwrap(), int(1));
        assert_eq!(lemma48_min(&BlowupGraph::chain(1, 1), 1).unwrap(), int(0));
        assert_eq!(lemma48_min(&BlowupGraph::chain(4, 4), 1).unwrap(), int(0));
        assert_eq!(
            lemma48_min(&triangle(), 3),
            Err(Error::ChainViolated {
                k: 3,
                from: 3,
                to: 1
            })
        );
        assert!(lemma48_quadratic_check(&BlowupGraph::chain(1, 1), 1).unwrap());
        assert_eq!(
            d10_margin(&BlowupGraph::chain(1, 1), 1, &int(0)).unwrap(),
            int(0)
        );
        assert_eq!(
            d10_margin(&BlowupGraph::chain(3, 3), 2, &int(1)).unwrap(),
            int(4)
        );
    }

    #[test]
    fn f35_examples() {
        let n = int(1);
        // the maximum and the closed form meet only at nu_1 = 2n, k = 1
        assert_eq!(maximize_f_35(&n, 1, &int(2)).unwrap(), int(-1));
        assert_eq!(linear_closed_form_35(&n, 1, &int(2)), int(-1));
        assert_eq!(linear_closed_form_35(&n, 2, &int(2)), int(-4));
        assert_eq!(maximize_f_35(&n, 2, &int(2)).unwrap(), int(-2));
        assert_eq!(maximize_f_35(&n, 1, &int(0)).unwrap(), int(1));
        for k in 1..=4u32 {
            for j in 0..=40 {
                let nu1 = rat(j, 20);
                let closed = rat(5, 2) * (int(2) - &nu1).square()
                    - (Rational::from(k + 2) - &nu1).square() / Rational::from(k);
                assert_eq!(maximize_f_35(&n, k, &nu1).unwrap(), closed);
            }
        }
        assert!(maximize_f_35(&n, 1, &int(3)).is_err());
        assert!(maximize_f_35(&n, 0, &int(1)).is_err());
    }
}
