//! End-to-end arithmetic of the two contradiction arguments, recorded step by
//! step so every number can be audited.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, rat, Rational};
use crate::graph::{simplify, validate_graph, BlowupGraph};
use crate::multiplicity::{combiner_lhs, eight_n2_combiner, prop53_evaluate, ValuationData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub claim: String,
    pub value: Rational,
    /// Named inputs the value was computed from.
    pub inputs: Vec<(String, Rational)>,
    /// Operation that produced the value, or `assumed` for caller-supplied
    /// hypotheses.
    pub source: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub text: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentTrace {
    pub name: String,
    pub steps: Vec<TraceStep>,
    pub conclusion: Conclusion,
}

impl ArgumentTrace {
    fn new(name: &str) -> Self {
        ArgumentTrace {
            name: name.to_string(),
            steps: Vec::new(),
            conclusion: Conclusion {
                text: String::new(),
                holds: false,
            },
        }
    }

    fn step(
        &mut self,
        claim: &str,
        value: Rational,
        inputs: &[(&str, &Rational)],
        source: &str,
        satisfied: bool,
    ) {
        self.steps.push(TraceStep {
            claim: claim.to_string(),
            value,
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), (*v).clone()))
                .collect(),
            source: source.to_string(),
            satisfied,
        });
    }

    pub fn step_value(&self, claim: &str) -> Option<&Rational> {
        self.steps
            .iter()
            .find(|s| s.claim == claim)
            .map(|s| &s.value)
    }

    pub fn all_satisfied(&self) -> bool {
        self.steps.iter().all(|s| s.satisfied)
    }
}

impl fmt::Display for ArgumentTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            let verdict = if s.satisfied { "OK" } else { "FAIL" };
            writeln!(f, "STEP {} {} value={} {verdict}", k + 1, s.claim, s.value)?;
        }
        let verdict = if self.conclusion.holds {
            "HOLDS"
        } else {
            "FAILS"
        };
        writeln!(f, "CONCLUSION {} {verdict}", self.conclusion.text)
    }
}

pub const S63_B: &str = "assumed b >= 1";
pub const S63_DEG: &str = "assumed deg Z1 >= 0";
pub const S63_EQUAL: &str = "p*_L1 = ... = p*_L,k-1";
pub const S63_HEAD: &str = "p*_L1 <= 1 + sum_{i>k} p*_Li";
pub const S63_R: &str = "sum p*_Li m_i <= b(sum_{i<=k} p*_Li + p*_L1) + deg Z1/2 * Sigma*_0";
pub const S63_U: &str = "previous <= b + 4n^2 Sigma*_0";
pub const S63_BOUND: &str = "sum p*_Li m_i > 4n^2(Sigma*_0 + 1)";
pub const S63_FORCED: &str = "b > 4n^2 forced";

/// The argument that a non log canonical centre on the ramification curve
/// forces `b > 4n²`, while `deg Z1 = 8n² − 2b ≥ 0` caps `b` at `4n²`.
///
/// Vertices `1..=k` must form a chain, every `ν_i ≤ 2n`, and `deg Z1`
/// (default `8n² − 2b`) must lie in `[0, 8n² − 2b]`. The conclusion holds
/// when every step, the lower bound's hypotheses included, is satisfied.
pub fn run_section63(
    v: &ValuationData,
    k: usize,
    b: &Rational,
    deg_z1: Option<&Rational>,
) -> Result<ArgumentTrace> {
    let g = v.graph();
    let n = v.n();
    let l = g.l();
    let pre = |m: String| Err(Error::PreconditionViolated(m));
    if k == 0 || k > l {
        return pre(format!("1 <= k <= L, got k={k}, L={l}"));
    }
    if let Some((i, j)) = g.chain_breaker(k) {
        return pre(format!("vertices 1..{k} are not a chain: arrow {i}->{j}"));
    }
    let two_n = int(2) * n;
    if let Some(i) = (1..=g.n()).find(|&i| v.nu_at(i) > &two_n) {
        return pre(format!("nu_{i} > 2n"));
    }
    if b.is_negative() {
        return pre("b >= 0".into());
    }
    let four_n2 = int(4) * n.square();
    let cap = int(8) * n.square() - int(2) * b;
    let deg = deg_z1.cloned().unwrap_or_else(|| cap.clone());
    if deg.is_negative() || deg > cap {
        return pre(format!("0 <= deg Z1 <= 8n^2 - 2b, got {deg}"));
    }

    let mut t = ArgumentTrace::new("s63");
    t.step(
        S63_B,
        b.clone(),
        &[("b", b)],
        "assumed",
        b >= &Rational::one(),
    );
    t.step(S63_DEG, deg.clone(), &[("b", b), ("n", n)], "assumed", true);

    let p: Vec<Rational> = simplify(g)
        .paths_from(l)?
        .into_iter()
        .map(Rational::from)
        .collect();
    let s0: Rational = p.iter().sum();
    let p1 = p[0].clone();
    let equal = p[..k - 1].iter().all(|x| *x == p1);
    t.step(
        S63_EQUAL,
        p1.clone(),
        &[("k", &Rational::from(k))],
        "simplify",
        equal,
    );
    let tail: Rational = p[k..].iter().sum();
    let margin = Rational::one() + &tail - &p1;
    t.step(
        S63_HEAD,
        margin.clone(),
        &[("p*_L1", &p1), ("tail", &tail)],
        "path_count",
        !margin.is_negative(),
    );

    let head: Rational = p[..k].iter().sum();
    let r = b * (&head + &p1) + &deg * rat(1, 2) * &s0;
    t.step(
        S63_R,
        r.clone(),
        &[
            ("b", b),
            ("head", &head),
            ("p*_L1", &p1),
            ("deg Z1", &deg),
            ("Sigma*_0", &s0),
        ],
        "counting",
        true,
    );
    let u = b + &four_n2 * &s0;
    t.step(
        S63_U,
        u.clone(),
        &[("b", b), ("n", n), ("Sigma*_0", &s0)],
        "combine",
        r <= u,
    );

    let mut strict = false;
    match prop53_evaluate(v) {
        Ok(cert) => {
            strict = cert.strict;
            for c in &cert.side_conditions {
                t.step(
                    &c.description,
                    c.value.clone(),
                    &[],
                    "prop53_bound",
                    c.satisfied,
                );
            }
        }
        Err(Error::HypothesisViolated(m)) => {
            t.step(&m, Rational::zero(), &[], "prop53_bound", false)
        }
        Err(e) => return Err(e),
    }
    let bound = &four_n2 * (&s0 + Rational::one());
    t.step(
        S63_BOUND,
        bound.clone(),
        &[("n", n), ("Sigma*_0", &s0)],
        "prop53_bound",
        strict,
    );
    let b_lower = &bound - &four_n2 * &s0;
    t.step(
        S63_FORCED,
        b_lower.clone(),
        &[("bound", &bound), ("n", n), ("Sigma*_0", &s0)],
        "combine",
        b_lower >= four_n2,
    );

    t.conclusion = Conclusion {
        text: "b > 4n^2 contradicts deg Z1 >= 0".into(),
        holds: t.all_satisfied(),
    };
    Ok(t)
}

pub const S4_STRUCT: &str = "no arrow L+1 -> L-1";
pub const S4_SIGMA: &str = "Sigma0 >= 2 p1";
pub const S4_GAP: &str = "(2 Sigma0 + Sigma1)^2 - 4 Sigma0 (Sigma0 + Sigma1) > 0";
pub const S4_LOWER: &str = "counting lower bound (2 Sigma0 + Sigma1)^2 n^2 / (Sigma0 + Sigma1)";
pub const S4_M_ORDER: &str = "assumed m2 <= m1";
pub const S4_COMBINED: &str = "p1 m1 + (Sigma0 - p1) m2 >= counting lower bound";
pub const S4_BUDGET: &str = "m1 + m2 <= 8n^2 would give p1 m1 + (Sigma0 - p1) m2 <= 4n^2 Sigma0";

/// The counting skeleton behind the `8n²`-inequality. With
/// `Σ₀ = Σ_{i≤L} p_{Ni}`, `Σ₁ = Σ_{i>L} p_{Ni}` and `p₁ = p_{N1}`, the
/// supplied `m₁, m₂` certify `m₁ + m₂ > 8n²` when the combination
/// `p₁m₁ + (Σ₀−p₁)m₂` reaches the counting lower bound, which lies strictly
/// above `4n²Σ₀`.
pub fn run_section4_skeleton(
    g: &BlowupGraph,
    n: &Rational,
    m1: &Rational,
    m2: &Rational,
) -> Result<ArgumentTrace> {
    if let Some(v) = validate_graph(g).first() {
        return Err(Error::PreconditionViolated(format!("invalid graph: {v}")));
    }
    let (big_n, l) = (g.n(), g.l());
    if l >= big_n {
        return Err(Error::PreconditionViolated("L < N".into()));
    }
    if !n.is_positive() {
        return Err(Error::PreconditionViolated("n > 0".into()));
    }
    let p: Vec<Rational> = g
        .paths_from(big_n)?
        .into_iter()
        .map(Rational::from)
        .collect();
    let s0: Rational = p[..l].iter().sum();
    let s1: Rational = p[l..].iter().sum();
    let p1 = p[0].clone();

    let mut t = ArgumentTrace::new("s4");
    let bad = l >= 2 && g.has_arrow(l + 1, l - 1);
    t.step(S4_STRUCT, Rational::from(u8::from(bad)), &[], "graph", !bad);
    let slack = &s0 - int(2) * &p1;
    t.step(
        S4_SIGMA,
        slack.clone(),
        &[("Sigma0", &s0), ("p1", &p1)],
        "path_count",
        !slack.is_negative(),
    );
    let gap = (int(2) * &s0 + &s1).square() - int(4) * &s0 * (&s0 + &s1);
    t.step(
        S4_GAP,
        gap.clone(),
        &[("Sigma0", &s0), ("Sigma1", &s1)],
        "path_count",
        gap.is_positive(),
    );
    let lower = (int(2) * &s0 + &s1).square() * n.square() / (&s0 + &s1);
    t.step(
        S4_LOWER,
        lower.clone(),
        &[("Sigma0", &s0), ("Sigma1", &s1), ("n", n)],
        "counting_bound",
        true,
    );
    t.step(
        S4_M_ORDER,
        m1 - m2,
        &[("m1", m1), ("m2", m2)],
        "assumed",
        m2 <= m1,
    );
    let lhs = combiner_lhs(&p1, &s0, m1, m2);
    t.step(
        S4_COMBINED,
        lhs.clone(),
        &[("p1", &p1), ("Sigma0", &s0), ("m1", m1), ("m2", m2)],
        "combiner",
        lhs >= lower,
    );
    // the combiner's own precondition is the hypothesis under refutation
    let budget = int(8) * n.square();
    let within = m1 + m2 <= budget;
    let capped = if within && m2 <= m1 && slack >= Rational::zero() && !p1.is_negative() {
        eight_n2_combiner(&p1, &s0, m1, m2, n)?
    } else {
        true
    };
    t.step(
        S4_BUDGET,
        int(4) * n.square() * &s0,
        &[("n", n), ("Sigma0", &s0)],
        "eight_n2_combiner",
        capped,
    );

    t.conclusion = Conclusion {
        text: "m1 + m2 > 8n^2".into(),
        holds: t.all_satisfied(),
    };
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatVector;
    use std::collections::BTreeMap;

    fn golden(n: i64, b: i64) -> ArgumentTrace {
        let g = BlowupGraph::chain(4, 3);
        let nu = RatVector::new(vec![int(2 * n); 4]);
        let v =
            ValuationData::new(g, nu, vec![2, 2, 2, 1], BTreeMap::from([(4, 1)]), int(n)).unwrap();
        run_section63(&v, 2, &int(b), None).unwrap()
    }

    #[test]
    fn section63_golden() {
        let t = golden(1, 1);
        assert_eq!(t.step_value(S63_EQUAL), Some(&int(1)));
        assert_eq!(t.step_value(S63_R), Some(&int(12)));
        assert_eq!(t.step_value(S63_U), Some(&int(13)));
        assert_eq!(t.step_value(S63_BOUND), Some(&int(16)));
        assert_eq!(t.step_value(S63_FORCED), Some(&int(4)));
        let failing: Vec<&str> = t
            .steps
            .iter()
            .filter(|s| !s.satisfied)
            .map(|s| s.claim.as_str())
            .collect();
        assert_eq!(failing, ["log excess > 0"]);
        assert!(!t.conclusion.holds);
        assert!(t
            .to_string()
            .ends_with("CONCLUSION b > 4n^2 contradicts deg Z1 >= 0 FAILS\n"));
    }

    #[test]
    fn section63_without_b() {
        let t = golden(1, 0);
        assert!(!t.steps[0].satisfied);
        assert!(!t.conclusion.holds);
    }

    #[test]
    fn section63_scaling() {
        let (a, b) = (golden(1, 1), golden(2, 4));
        for c in [S63_R, S63_U, S63_BOUND, S63_FORCED] {
            assert_eq!(
                b.step_value(c).unwrap(),
                &(a.step_value(c).unwrap() * int(4))
            );
        }
        assert_eq!(a.conclusion.holds, b.conclusion.holds);
    }

    #[test]
    fn section4_examples() {
        let g = BlowupGraph::chain(3, 2);
        let n = int(1);
        let t = run_section4_skeleton(&g, &n, &int(4), &int(4)).unwrap();
        assert_eq!(t.step_value(S4_GAP), Some(&int(1)));
        assert_eq!(t.step_value(S4_LOWER), Some(&rat(25, 3)));
        assert!(!t.conclusion.holds);
        let t = run_section4_skeleton(&g, &n, &int(5), &rat(10, 3)).unwrap();
        assert!(t.conclusion.holds);
        assert!(run_section4_skeleton(&BlowupGraph::chain(3, 3), &n, &int(4), &int(4)).is_err());
    }
}
