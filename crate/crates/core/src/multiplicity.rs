//! Noether–Fano excesses, counting-of-multiplicities lower bounds and the
//! self-intersection bound for a non log canonical centre.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, RatVector, Rational};
use crate::graph::{simplify, validate_graph, BlowupGraph};

/// A resolution graph with multiplicity data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationData {
    graph: BlowupGraph,
    nu: RatVector,
    delta: Vec<u32>,
    beta: BTreeMap<usize, u64>,
    n: Rational,
}

impl ValuationData {
    pub fn new(
        graph: BlowupGraph,
        nu: RatVector,
        delta: Vec<u32>,
        beta: BTreeMap<usize, u64>,
        n: Rational,
    ) -> Result<Self> {
        let violations = validate_graph(&graph);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidGraph(v.to_string()));
        }
        let bad = |m: String| Err(Error::InvalidValuation(m));
        let count = graph.n();
        if nu.len() != count {
            return bad(format!("{} multiplicities for {count} vertices", nu.len()));
        }
        if delta.len() != count {
            return bad(format!(
                "{} discrepancy weights for {count} vertices",
                delta.len()
            ));
        }
        if let Some(i) = nu.iter().position(Rational::is_negative) {
            return bad(format!("multiplicity of vertex {} is negative", i + 1));
        }
        if !n.is_positive() {
            return bad(format!("threshold {n} is not positive"));
        }
        let curves: Vec<usize> = (graph.l() + 1..=count).collect();
        let keys: Vec<usize> = beta.keys().copied().collect();
        if keys != curves {
            return bad("curve degrees must be given exactly for the vertices above L".into());
        }
        if let Some((i, _)) = beta.iter().find(|(_, &b)| b == 0) {
            return bad(format!("curve degree of vertex {i} is zero"));
        }
        Ok(ValuationData {
            graph,
            nu,
            delta,
            beta,
            n,
        })
    }

    /// Three-fold defaults: `δ = 2` on points, `δ = 1` on curves, all curve
    /// degrees 1.
    pub fn with_threefold_defaults(graph: BlowupGraph, nu: RatVector, n: Rational) -> Result<Self> {
        let delta = threefold_delta(&graph);
        let beta = (graph.l() + 1..=graph.n()).map(|i| (i, 1)).collect();
        Self::new(graph, nu, delta, beta, n)
    }

    pub fn graph(&self) -> &BlowupGraph {
        &self.graph
    }

    pub fn nu(&self) -> &RatVector {
        &self.nu
    }

    pub fn delta(&self) -> &[u32] {
        &self.delta
    }

    pub fn beta(&self) -> &BTreeMap<usize, u64> {
        &self.beta
    }

    pub fn n(&self) -> &Rational {
        &self.n
    }

    /// `ν_i` for 1-based `i`.
    pub fn nu_at(&self, i: usize) -> &Rational {
        &self.nu[i - 1]
    }

    fn delta_at(&self, i: usize) -> Rational {
        Rational::from(self.delta[i - 1])
    }

    /// `Σ_{i≤e} p_{e,i}(ν_i − δ_i n)` on the full graph.
    pub fn prefix_excess(&self, e: usize) -> Result<Rational> {
        let p = self.graph.paths_from(e)?;
        Ok((1..=e)
            .map(|i| Rational::from(p[i - 1]) * (self.nu_at(i) - self.delta_at(i) * &self.n))
            .sum())
    }
}

pub fn threefold_delta(g: &BlowupGraph) -> Vec<u32> {
    (1..=g.n())
        .map(|i| if i <= g.l() { 2 } else { 1 })
        .collect()
}

/// Nonnegative weights on the point vertices `1..=L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction(RatVector);

impl WeightFunction {
    pub fn new(a: RatVector) -> Result<Self> {
        if let Some(i) = a.iter().position(Rational::is_negative) {
            return Err(Error::InvalidInput(format!(
                "weight of vertex {} is negative",
                i + 1
            )));
        }
        Ok(WeightFunction(a))
    }

    pub fn values(&self) -> &RatVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }
}

/// Which arrows compatibility is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphView {
    /// The graph itself, restricted to `1..=L`.
    Full,
    /// The simplified graph.
    Simplified,
}

/// True iff `a(i) ≥ Σ_{j→i} a(j)` for every point vertex `i`.
pub fn check_compatible(a: &WeightFunction, g: &BlowupGraph, view: GraphView) -> Result<bool> {
    Ok(first_incompatible(a, g, view)?.is_none())
}

fn first_incompatible(
    a: &WeightFunction,
    g: &BlowupGraph,
    view: GraphView,
) -> Result<Option<usize>> {
    let l = g.l();
    if a.len() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            found: a.len(),
        });
    }
    let h = match view {
        GraphView::Full => g.clone(),
        GraphView::Simplified => simplify(g),
    };
    Ok((1..=l).find(|&i| {
        let s: Rational = h
            .sources(i)
            .iter()
            .filter(|&&j| j <= l)
            .map(|&j| a.at(j))
            .sum();
        a.at(i) < &s
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NfMode {
    Canonical,
    Log,
}

/// `Σ p_{Ni}ν_i − n(Σ p_{Ni}δ_i + 1)` in log mode, without the `+ 1` in
/// canonical mode. Positive means the inequality holds strictly.
pub fn nf_excess(v: &ValuationData, mode: NfMode) -> Rational {
    let p = v.graph.paths_from(v.graph.n()).expect("valid graph");
    excess_with(v, &p, mode)
}

fn excess_with(v: &ValuationData, p: &[u64], mode: NfMode) -> Rational {
    let mut lhs = Rational::zero();
    let mut disc = Rational::zero();
    for (i, &pi) in p.iter().enumerate() {
        let pi = Rational::from(pi);
        lhs += &pi * &v.nu[i];
        disc += pi * Rational::from(v.delta[i]);
    }
    if mode == NfMode::Log {
        disc += Rational::one();
    }
    lhs - &v.n * disc
}

/// `Σ_{i≤L} a(i)ν_i² + a(L)·Σ_{i>L} β_i ν_i²`, a lower bound for `Σ a(i)m_i`
/// whenever `a` is compatible with the simplified graph.
pub fn counting_bound(v: &ValuationData, a: &WeightFunction) -> Result<Rational> {
    if let Some(vertex) = first_incompatible(a, &v.graph, GraphView::Simplified)? {
        return Err(Error::IncompatibleWeights { vertex });
    }
    let l = v.graph.l();
    let points: Rational = (1..=l).map(|i| a.at(i) * v.nu_at(i).square()).sum();
    let curves: Rational = v
        .beta
        .iter()
        .map(|(&i, &b)| Rational::from(b) * v.nu_at(i).square())
        .sum();
    Ok(points + a.at(l) * curves)
}

/// `Δ²n²/Σp_i²`, the minimum of `Σν_i²` on the hyperplane `Σ p_iν_i = Δn`.
pub fn quadratic_min_bound(p: &RatVector, delta: &Rational, n: &Rational) -> Result<Rational> {
    if p.is_empty() || p.iter().any(|x| !x.is_positive()) {
        return Err(Error::PreconditionViolated(
            "coefficients must be positive".into(),
        ));
    }
    let q: Rational = p.iter().map(Rational::square).sum();
    Ok((delta * n).square() / q)
}

/// Smallest `e` whose prefix `Σ_{i≤e} p_{ei}(ν_i − δ_i n)` is positive.
pub fn minimal_noncanonical_index(v: &ValuationData) -> Option<usize> {
    (1..=v.graph.n()).find(|&e| v.prefix_excess(e).expect("vertex in range").is_positive())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualA {
    pub a: Rational,
    pub in_unit_interval: bool,
    /// `a = 1`.
    pub saturated: bool,
    /// `ν_1 = … = ν_{N'} = 2n`.
    pub all_two_n: bool,
}

/// `a = (1/n)·Σ_{i<N'} p_{N'i}(δ_i n − ν_i)`.
pub fn residual_a(v: &ValuationData, nprime: usize) -> Result<ResidualA> {
    let p = v.graph.paths_from(nprime)?;
    let s: Rational = (1..nprime)
        .map(|i| Rational::from(p[i - 1]) * (v.delta_at(i) * &v.n - v.nu_at(i)))
        .sum();
    let a = s / &v.n;
    let two_n = int(2) * &v.n;
    Ok(ResidualA {
        in_unit_interval: !a.is_negative() && a <= Rational::one(),
        saturated: a.is_one(),
        all_two_n: (1..=nprime).all(|i| v.nu_at(i) == &two_n),
        a,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    LogNF,
    CanonicalNF,
    CountingBound,
    Prop53,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Prop53Branch {
    /// `a = 1`: the bound `4n²(Σ*₀+1)` follows without the surplus term.
    Saturated,
    /// The minimal non-canonical vertex is the last one.
    Terminal,
    /// The minimal non-canonical vertex lies strictly below the last one.
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub description: String,
    pub value: Rational,
    pub satisfied: bool,
}

impl SideCondition {
    fn new(description: &str, value: Rational, satisfied: bool) -> Self {
        SideCondition {
            description: description.to_string(),
            value,
            satisfied,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub kind: CertificateKind,
    pub value: Rational,
    /// The certified quantity strictly exceeds `value`.
    pub strict: bool,
    pub branch: Option<Prop53Branch>,
    pub side_conditions: Vec<SideCondition>,
}

impl BoundCertificate {
    pub fn all_satisfied(&self) -> bool {
        self.side_conditions.iter().all(|c| c.satisfied)
    }

    pub fn condition(&self, description: &str) -> Option<&SideCondition> {
        self.side_conditions
            .iter()
            .find(|c| c.description == description)
    }
}

pub const COND_NU_BOUND: &str = "nu_i <= 2n";
pub const COND_LOG_EXCESS: &str = "log excess > 0";
pub const COND_ABOVE_POINTS: &str = "N' > L";
pub const COND_CHAIN_TOP: &str = "vertices L+1..N' form a chain";
pub const COND_A_RANGE: &str = "0 <= a <= 1";
pub const COND_STAR_STRONGER: &str = "log excess with p* >= log excess with p";
pub const COND_SIGMA0: &str = "Sigma*_0";
pub const COND_SIGMA1: &str = "Sigma*_1";
pub const COND_NPRIME: &str = "N'";
pub const COND_A: &str = "a";
pub const COND_SURPLUS: &str = "bound - 4n^2(Sigma*_0 + 1) >= 0";

/// `(2Σ₀+Σ₁+1)²/(Σ₀+Σ₁)` and `4(Σ₀+1) + (Σ₁−1)²/(Σ₀+Σ₁)`.
pub fn terminal_identity(s0: &Rational, s1: &Rational) -> (Rational, Rational) {
    let d = s0 + s1;
    let lhs = (int(2) * s0 + s1 + Rational::one()).square() / &d;
    let rhs = int(4) * (s0 + Rational::one()) + (s1 - Rational::one()).square() / &d;
    (lhs, rhs)
}

/// `(2Σ₀+Σ₁−a)²/(Σ₀+Σ₁) + 4(1+a)` and `4(Σ₀+1) + (Σ₁+a)²/(Σ₀+Σ₁)`.
pub fn interior_identity(s0: &Rational, s1: &Rational, a: &Rational) -> (Rational, Rational) {
    let d = s0 + s1;
    let lhs = (int(2) * s0 + s1 - a).square() / &d + int(4) * (Rational::one() + a);
    let rhs = int(4) * (s0 + Rational::one()) + (s1 + a).square() / &d;
    (lhs, rhs)
}

fn sum_u64(p: &[u64]) -> Rational {
    p.iter().map(|&x| Rational::from(x)).sum()
}

/// Lower bound for `Σ_{i≤L} p*_{Li} m_i` at a non log canonical centre with
/// every side condition recorded. Structural impossibilities (no
/// non-canonical prefix) are errors; violated hypotheses are flagged.
pub fn prop53_evaluate(v: &ValuationData) -> Result<BoundCertificate> {
    let g = &v.graph;
    let (big_n, l) = (g.n(), g.l());
    let n = &v.n;
    let two_n = int(2) * n;
    let mut conds = Vec::new();

    let max_nu = v.nu.iter().cloned().fold(Rational::zero(), Rational::max);
    conds.push(SideCondition::new(
        COND_NU_BOUND,
        &max_nu - &two_n,
        max_nu <= two_n,
    ));
    let excess = nf_excess(v, NfMode::Log);
    conds.push(SideCondition::new(
        COND_LOG_EXCESS,
        excess.clone(),
        excess.is_positive(),
    ));

    let nprime = minimal_noncanonical_index(v).ok_or_else(|| {
        Error::HypothesisViolated("no prefix violates the canonical inequality".into())
    })?;
    conds.push(SideCondition::new(
        COND_NPRIME,
        Rational::from(nprime),
        true,
    ));
    conds.push(SideCondition::new(
        COND_ABOVE_POINTS,
        Rational::from(nprime),
        nprime > l,
    ));
    let offending = (l + 1..=nprime)
        .filter(|&i| g.targets(i) != [i - 1])
        .count();
    conds.push(SideCondition::new(
        COND_CHAIN_TOP,
        Rational::from(offending),
        offending == 0,
    ));

    let ra = residual_a(v, nprime)?;
    conds.push(SideCondition::new(COND_A, ra.a.clone(), true));
    conds.push(SideCondition::new(
        COND_A_RANGE,
        ra.a.clone(),
        ra.in_unit_interval,
    ));

    let pruned = g.prune_complex();
    let star_top = pruned.paths_from(big_n)?;
    let star_excess = excess_with(v, &star_top, NfMode::Log);
    let gain = &star_excess - &excess;
    conds.push(SideCondition::new(
        COND_STAR_STRONGER,
        gain.clone(),
        !gain.is_negative(),
    ));

    let star_l = simplify(g).paths_from(l)?;
    let s0 = sum_u64(&star_l);
    conds.push(SideCondition::new(COND_SIGMA0, s0.clone(), true));
    let base = int(4) * n.square() * (&s0 + Rational::one());

    let (branch, value) = if ra.saturated {
        (Prop53Branch::Saturated, base.clone())
    } else if nprime == big_n {
        let s1: Rational = (l + 1..=big_n)
            .map(|i| Rational::from(star_top[i - 1]))
            .sum();
        conds.push(SideCondition::new(COND_SIGMA1, s1.clone(), true));
        let surplus = (&s1 - Rational::one()).square() * n.square() / (&s0 + &s1);
        (Prop53Branch::Terminal, &base + surplus)
    } else {
        let star_np = pruned.paths_from(nprime)?;
        let s1: Rational = (l + 1..nprime)
            .map(|i| Rational::from(star_np[i - 1]))
            .sum();
        conds.push(SideCondition::new(COND_SIGMA1, s1.clone(), true));
        let surplus = (&s1 + &ra.a).square() * n.square() / (&s0 + &s1);
        (Prop53Branch::Interior, &base + surplus)
    };
    let surplus = &value - &base;
    conds.push(SideCondition::new(
        COND_SURPLUS,
        surplus.clone(),
        !surplus.is_negative(),
    ));

    Ok(BoundCertificate {
        kind: CertificateKind::Prop53,
        value,
        strict: true,
        branch: Some(branch),
        side_conditions: conds,
    })
}

/// As [`prop53_evaluate`], failing with the first violated hypothesis.
pub fn prop53_bound(v: &ValuationData) -> Result<BoundCertificate> {
    let cert = prop53_evaluate(v)?;
    if let Some(c) = cert.side_conditions.iter().find(|c| !c.satisfied) {
        return Err(Error::HypothesisViolated(format!(
            "{} (value {})",
            c.description, c.value
        )));
    }
    Ok(cert)
}

/// Under `m₂ ≤ m₁`, `Σ₀ ≥ 2p₁ ≥ 0` and `m₁ + m₂ ≤ 8n²`, returns whether
/// `p₁m₁ + (Σ₀−p₁)m₂ ≤ 4n²Σ₀`. It always does; a strict lower bound above
/// `4n²Σ₀` therefore refutes `m₁ + m₂ ≤ 8n²`.
pub fn eight_n2_combiner(
    p1: &Rational,
    sigma0: &Rational,
    m1: &Rational,
    m2: &Rational,
    n: &Rational,
) -> Result<bool> {
    let pre = |m: &str| Err(Error::PreconditionViolated(m.to_string()));
    if p1.is_negative() {
        return pre("p1 >= 0");
    }
    if m2 > m1 {
        return pre("m2 <= m1");
    }
    if sigma0 < &(int(2) * p1) {
        return pre("Sigma0 >= 2 p1");
    }
    let budget = int(8) * n.square();
    if m1 + m2 > budget {
        return pre("m1 + m2 <= 8n^2");
    }
    Ok(combiner_lhs(p1, sigma0, m1, m2) <= int(4) * n.square() * sigma0)
}

/// `p₁m₁ + (Σ₀−p₁)m₂`.
pub fn combiner_lhs(p1: &Rational, sigma0: &Rational, m1: &Rational, m2: &Rational) -> Rational {
    p1 * m1 + (sigma0 - p1) * m2
}
