//! Oriented graphs of sequences of blow-ups.
//!
//! Vertices are `1..=N`; an arrow `(i, j)` with `i > j` records that the
//! `i`-th centre lies on the strict transform of the `j`-th exceptional
//! divisor. Vertices `1..=L` are point blow-ups, the rest are curves.

mod random;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use random::{enumerate_arrow_sets, random_graph, random_valid_graph, GraphSampler, LRule};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupGraph {
    n: usize,
    l: usize,
    // sorted, duplicates kept so that validation can report them
    arrows: Vec<(usize, usize)>,
    // targets[i-1]: distinct in-range targets of i, descending
    targets: Vec<Vec<usize>>,
    // sources[j-1]: distinct in-range sources of j, ascending
    sources: Vec<Vec<usize>>,
}

impl BlowupGraph {
    /// Builds a graph from arbitrary data; use [`validate_graph`] to check it.
    pub fn new(n: usize, l: usize, arrows: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut arrows: Vec<_> = arrows.into_iter().collect();
        arrows.sort_unstable();
        let mut targets = vec![Vec::new(); n];
        let mut sources = vec![Vec::new(); n];
        for &(i, j) in &arrows {
            if in_range(n, i, j) && !targets[i - 1].contains(&j) {
                targets[i - 1].push(j);
                sources[j - 1].push(i);
            }
        }
        for t in &mut targets {
            t.sort_unstable_by(|a, b| b.cmp(a));
        }
        for s in &mut sources {
            s.sort_unstable();
        }
        BlowupGraph {
            n,
            l,
            arrows,
            targets,
            sources,
        }
    }

    /// Chain `N → N-1 → … → 1`.
    pub fn chain(n: usize, l: usize) -> Self {
        Self::new(n, l, (2..=n).map(|i| (i, i - 1)))
    }

    /// Builds a valid graph or reports the violations.
    pub fn validated(
        n: usize,
        l: usize,
        arrows: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let g = Self::new(n, l, arrows);
        let v = validate_graph(&g);
        if v.is_empty() {
            Ok(g)
        } else {
            let msg: Vec<String> = v.iter().map(ToString::to_string).collect();
            Err(Error::InvalidGraph(msg.join("; ")))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Arrows as given, sorted by `(i, j)`.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        in_range(self.n, i, j) && self.targets[i - 1].contains(&j)
    }

    /// Distinct targets of `i`, highest first.
    pub fn targets(&self, i: usize) -> &[usize] {
        &self.targets[i - 1]
    }

    /// Distinct sources of arrows into `j`, lowest first.
    pub fn sources(&self, j: usize) -> &[usize] {
        &self.sources[j - 1]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.targets[i - 1].len()
    }

    /// Largest out-degree over all vertices.
    pub fn max_class(&self) -> usize {
        self.targets.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Path counts `p_{from,i}` for `i = 1..=from`, stored at index `i - 1`.
    pub fn paths_from(&self, from: usize) -> Result<Vec<u64>> {
        self.check_vertex(from)?;
        let mut p = vec![0u64; from];
        p[from - 1] = 1;
        for t in (1..from).rev() {
            let mut acc = 0u64;
            for &s in self.sources(t) {
                if s <= from {
                    acc = acc.checked_add(p[s - 1]).expect("path count overflows u64");
                }
            }
            p[t - 1] = acc;
        }
        Ok(p)
    }

    /// Number of oriented paths from `from` to `to`; `p_{i,i} = 1`.
    pub fn path_count(&self, from: usize, to: usize) -> Result<u64> {
        self.check_vertex(from)?;
        self.check_vertex(to)?;
        if to > from {
            return Ok(0);
        }
        Ok(self.paths_from(from)?[to - 1])
    }

    /// True when no arrow joins two non-consecutive vertices of `lo..=hi`.
    pub fn is_chain_segment(&self, lo: usize, hi: usize) -> bool {
        (lo..=hi.min(self.n)).all(|i| self.targets[i - 1].iter().all(|&j| j + 1 == i || j < lo))
    }

    /// First arrow `(i, j)` with `j + 2 <= i <= k`, i.e. the witness that
    /// vertices `1..=k` are not a chain.
    pub fn chain_breaker(&self, k: usize) -> Option<(usize, usize)> {
        (1..=k.min(self.n)).find_map(|i| {
            self.targets[i - 1]
                .iter()
                .find(|&&j| j + 2 <= i)
                .map(|&j| (i, j))
        })
    }

    /// The same arrows with the complex vertices' lowest arrows removed; all
    /// vertices kept. On `1..=L` this agrees with [`simplify`].
    pub fn prune_complex(&self) -> BlowupGraph {
        let arrows = (1..=self.n).flat_map(|i| {
            let t = &self.targets[i - 1];
            let keep = if t.len() == 3 { 2 } else { t.len() };
            t[..keep].iter().map(move |&j| (i, j)).collect::<Vec<_>>()
        });
        BlowupGraph::new(self.n, self.l, arrows)
    }
}

fn in_range(n: usize, i: usize, j: usize) -> bool {
    j >= 1 && i > j && i <= n
}

/// A violated structural condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    NoVertices,
    PointCountOutOfRange { l: usize, n: usize },
    ArrowOutOfRange { i: usize, j: usize },
    DuplicateArrow { i: usize, j: usize },
    MissingConsecutive { i: usize },
    Closure { k: usize, i: usize, j: usize },
    ClassTooHigh { vertex: usize, class: usize },
    ComplexCurveVertex { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::PointCountOutOfRange { l, n } => {
                write!(f, "point count L={l} outside 1..={n}")
            }
            Violation::ArrowOutOfRange { i, j } => {
                write!(f, "arrow ({i},{j}) is not of the form N >= i > j >= 1")
            }
            Violation::DuplicateArrow { i, j } => write!(f, "duplicate arrow ({i},{j})"),
            Violation::MissingConsecutive { i } => write!(f, "missing arrow ({},{i})", i + 1),
            Violation::Closure { k, i, j } => {
                write!(
                    f,
                    "ordering closure: ({k},{i}) present but ({j},{i}) absent"
                )
            }
            Violation::ClassTooHigh { vertex, class } => {
                write!(f, "vertex {vertex} has class {class} > 3")
            }
            Violation::ComplexCurveVertex { vertex } => {
                write!(f, "vertex {vertex} has class 3 but is a curve vertex (> L)")
            }
        }
    }
}

/// Every violated invariant; empty iff `g` is a valid resolution graph.
pub fn validate_graph(g: &BlowupGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    if g.n == 0 {
        out.push(Violation::NoVertices);
    }
    if g.l < 1 || g.l > g.n {
        out.push(Violation::PointCountOutOfRange { l: g.l, n: g.n });
    }
    for w in g.arrows.windows(2) {
        if w[0] == w[1] {
            let (i, j) = w[0];
            let v = Violation::DuplicateArrow { i, j };
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
    }
    for &(i, j) in &g.arrows {
        if !in_range(g.n, i, j) {
            out.push(Violation::ArrowOutOfRange { i, j });
        }
    }
    for i in 1..g.n {
        if !g.has_arrow(i + 1, i) {
            out.push(Violation::MissingConsecutive { i });
        }
    }
    for k in 1..=g.n {
        for &i in g.targets(k) {
            for j in i + 1..k {
                if !g.has_arrow(j, i) {
                    out.push(Violation::Closure { k, i, j });
                }
            }
        }
    }
    for v in 1..=g.n {
        let c = g.out_degree(v);
        if c > 3 {
            out.push(Violation::ClassTooHigh {
                vertex: v,
                class: c,
            });
        } else if c == 3 && v > g.l {
            out.push(Violation::ComplexCurveVertex { vertex: v });
        }
    }
    out
}

/// Out-degrees of all vertices and the vertices of class 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexClassReport {
    /// `classes[i - 1]` is the class of vertex `i`.
    pub classes: Vec<u8>,
    pub complex_vertices: Vec<usize>,
}

pub fn vertex_class(g: &BlowupGraph) -> VertexClassReport {
    let classes: Vec<u8> = (1..=g.n).map(|i| g.out_degree(i) as u8).collect();
    let complex_vertices = (1..=g.n).filter(|&i| classes[i - 1] == 3).collect();
    VertexClassReport {
        classes,
        complex_vertices,
    }
}

/// Restriction to `1..=L` with the lowest arrow of every complex vertex
/// deleted. The result has class at most 2.
pub fn simplify(g: &BlowupGraph) -> BlowupGraph {
    let l = g.l.min(g.n);
    let arrows = (1..=l).flat_map(|i| {
        let t = g.targets(i);
        let keep = if t.len() == 3 { 2 } else { t.len() };
        t[..keep].iter().map(move |&j| (i, j)).collect::<Vec<_>>()
    });
    BlowupGraph::new(l, l, arrows)
}

/// `p_{from,to}` on `g`.
pub fn path_count(g: &BlowupGraph, from: usize, to: usize) -> Result<u64> {
    g.path_count(from, to)
}
