use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BlowupGraph;

/// How the point count `L` is chosen for a sampled graph with `N` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LRule {
    /// `min(L, N)`.
    Fixed(usize),
    /// Uniform in `1..=N`.
    Uniform,
    /// `L = N`.
    AllPoints,
}

/// Parameters for [`random_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphSampler {
    pub n_min: usize,
    pub n_max: usize,
    pub l_rule: LRule,
    /// Upper bound on the class of every vertex (2 or 3).
    pub max_class: usize,
}

impl GraphSampler {
    pub fn new(n_max: usize, l_rule: LRule) -> Self {
        GraphSampler {
            n_min: 2,
            n_max,
            l_rule,
            max_class: 3,
        }
    }

    pub fn with_max_class(mut self, c: usize) -> Self {
        self.max_class = c;
        self
    }

    pub fn with_n_min(mut self, n: usize) -> Self {
        self.n_min = n;
        self
    }
}

/// Samples a valid graph.
///
/// Vertices are added one at a time. Vertex `k` always points to `k - 1`; its
/// other targets are drawn from the targets of `k - 1`, which are exactly the
/// vertices whose incoming arrows still reach down to `k - 1`, so the closure
/// condition holds by construction. Every valid graph with the class bound
/// has positive probability.
pub fn random_graph<R: Rng>(rng: &mut R, s: &GraphSampler) -> BlowupGraph {
    assert!(s.n_min >= 1 && s.n_min <= s.n_max, "bad vertex range");
    let n = rng.gen_range(s.n_min..=s.n_max);
    let l = match s.l_rule {
        LRule::Fixed(l) => l.clamp(1, n),
        LRule::Uniform => rng.gen_range(1..=n),
        LRule::AllPoints => n,
    };
    let mut targets: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for k in 2..=n {
        let cap = if k <= l { 3 } else { 2 }.min(s.max_class.max(1));
        let cands = targets[k - 1].clone();
        let extra = rng.gen_range(0..=(cap - 1).min(cands.len()));
        let mut t: Vec<usize> = cands.choose_multiple(rng, extra).copied().collect();
        t.push(k - 1);
        t.sort_unstable();
        targets[k] = t;
    }
    let arrows = (2..=n).flat_map(|k| targets[k].iter().map(move |&j| (k, j)).collect::<Vec<_>>());
    BlowupGraph::new(n, l, arrows)
}

/// Deterministic sample with `N` uniform in `2..=n_max`.
pub fn random_valid_graph(seed: u64, n_max: usize, l_rule: LRule) -> BlowupGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph(&mut rng, &GraphSampler::new(n_max, l_rule))
}

/// Every arrow set on `1..=n` satisfying the consecutive-arrow and closure
/// conditions with all classes at most `max_class`.
pub fn enumerate_arrow_sets(n: usize, max_class: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        k: usize,
        n: usize,
        max_class: usize,
        prev: &[usize],
        acc: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if k > n {
            out.push(acc.clone());
            return;
        }
        let cands: Vec<usize> = prev.to_vec();
        let max_extra = (max_class.max(1) - 1).min(cands.len());
        for size in 0..=max_extra {
            for subset in combinations(&cands, size) {
                let mut t = subset;
                t.push(k - 1);
                let before = acc.len();
                acc.extend(t.iter().map(|&j| (k, j)));
                rec(k + 1, n, max_class, &t, acc, out);
                acc.truncate(before);
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(2, n, max_class, &[], &mut Vec::new(), &mut out);
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate_graph, vertex_class};

    #[test]
    fn smallest_case_is_the_chain() {
        for seed in 0..20 {
            assert_eq!(
                random_valid_graph(seed, 2, LRule::Uniform).arrows(),
                &[(2, 1)]
            );
        }
    }

    #[test]
    fn samples_are_valid_and_deterministic() {
        for seed in 0..500 {
            let g = random_valid_graph(seed, 10, LRule::Uniform);
            assert!(validate_graph(&g).is_empty(), "{g:?}");
            assert_eq!(g, random_valid_graph(seed, 10, LRule::Uniform));
        }
    }

    #[test]
    fn class_cap_is_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = GraphSampler::new(9, LRule::AllPoints).with_max_class(2);
        for _ in 0..300 {
            let g = random_graph(&mut rng, &s);
            assert!(vertex_class(&g).classes.iter().all(|&c| c <= 2));
        }
    }

    #[test]
    fn enumeration_counts() {
        // N = 3: chain and the triangle.
        assert_eq!(enumerate_arrow_sets(3, 3).len(), 2);
        for n in 1..=7 {
            for arrows in enumerate_arrow_sets(n, 3) {
                assert!(validate_graph(&BlowupGraph::new(n, n, arrows)).is_empty());
            }
        }
        let total: usize = (1..=8).map(|n| enumerate_arrow_sets(n, 3).len()).sum();
        let surface: usize = (1..=8).map(|n| enumerate_arrow_sets(n, 2).len()).sum();
        assert_eq!((total, surface), (2499, 378));
    }
}
