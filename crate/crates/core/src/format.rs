//! Line-oriented text formats. `#` starts a comment; blank lines are
//! ignored; rationals are written `p/q` or `p`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::compose::ArgumentTrace;
use crate::error::{Error, Result};
use crate::exact::{RatMatrix, RatVector, Rational};
use crate::graph::BlowupGraph;
use crate::lattice::IntersectionLattice;
use crate::multiplicity::{threefold_delta, ValuationData, WeightFunction};
use crate::polytope::{LinearSystem, Relation, Row};

struct Line<'a> {
    number: usize,
    keyword: &'a str,
    args: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next()?;
        Some(Line {
            number: i + 1,
            keyword,
            args: tokens.collect(),
        })
    })
}

struct Ctx<'a> {
    file: &'a str,
}

impl Ctx<'_> {
    fn err<T>(&self, line: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            file: self.file.to_string(),
            line,
            message: message.into(),
        })
    }

    fn parse<T: FromStr>(&self, line: usize, token: &str, what: &str) -> Result<T> {
        token
            .parse()
            .or_else(|_| self.err(line, format!("bad {what} '{token}'")))
    }

    fn arity(&self, l: &Line, n: usize) -> Result<()> {
        if l.args.len() != n {
            return self.err(
                l.number,
                format!("{} takes {n} argument(s), got {}", l.keyword, l.args.len()),
            );
        }
        Ok(())
    }

    fn rationals(&self, l: &Line, tokens: &[&str]) -> Result<Vec<Rational>> {
        tokens
            .iter()
            .map(|t| self.parse(l.number, t, "rational"))
            .collect()
    }
}

#[derive(Default)]
struct GraphParts {
    n: Option<usize>,
    l: Option<usize>,
    arrows: Vec<(usize, usize)>,
    last_line: usize,
}

impl GraphParts {
    /// Consumes a graph line; `false` if the keyword is not a graph keyword.
    fn take(&mut self, c: &Ctx, l: &Line) -> Result<bool> {
        self.last_line = l.number;
        match l.keyword {
            "N" | "L" => {
                c.arity(l, 1)?;
                let v = c.parse(l.number, l.args[0], "integer")?;
                let slot = if l.keyword == "N" {
                    &mut self.n
                } else {
                    &mut self.l
                };
                if slot.replace(v).is_some() {
                    return c.err(l.number, format!("{} given twice", l.keyword));
                }
            }
            "A" => {
                c.arity(l, 2)?;
                let i = c.parse(l.number, l.args[0], "vertex")?;
                let j = c.parse(l.number, l.args[1], "vertex")?;
                self.arrows.push((i, j));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self, c: &Ctx) -> Result<BlowupGraph> {
        let Some(n) = self.n else {
            return c.err(self.last_line, "missing N line");
        };
        let Some(l) = self.l else {
            return c.err(self.last_line, "missing L line");
        };
        Ok(BlowupGraph::new(n, l, self.arrows))
    }
}

/// Reads a graph. Structural problems (duplicate arrows, closure) are left
/// for validation.
pub fn read_graph(text: &str, file: &str) -> Result<BlowupGraph> {
    let c = Ctx { file };
    let mut g = GraphParts::default();
    for l in lines(text) {
        if !g.take(&c, &l)? {
            return c.err(l.number, format!("unknown keyword '{}'", l.keyword));
        }
    }
    g.finish(&c)
}

pub fn write_graph(g: &BlowupGraph) -> String {
    let mut s = format!("N {}\nL {}\n", g.n(), g.l());
    for (i, j) in g.arrows() {
        writeln!(s, "A {i} {j}").expect("string write");
    }
    s
}

/// Reads a valuation: a graph followed by `NU`, `DELTA`, `BETA` and `THRESH`
/// lines. Missing `DELTA` lines take the three-fold values (2 on points, 1 on
/// curves) and missing `BETA` lines are 1.
pub fn read_valuation(text: &str, file: &str) -> Result<ValuationData> {
    let c = Ctx { file };
    let mut g = GraphParts::default();
    let mut nu: BTreeMap<usize, (usize, Rational)> = BTreeMap::new();
    let mut delta: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    let mut beta: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    let mut thresh: Option<Rational> = None;
    let mut last = 0;
    for l in lines(text) {
        last = l.number;
        if g.take(&c, &l)? {
            continue;
        }
        match l.keyword {
            "NU" => {
                c.arity(&l, 2)?;
                let i = c.parse(l.number, l.args[0], "vertex")?;
                nu.insert(i, (l.number, c.parse(l.number, l.args[1], "rational")?));
            }
            "DELTA" => {
                c.arity(&l, 2)?;
                let i = c.parse(l.number, l.args[0], "vertex")?;
                delta.insert(i, (l.number, c.parse(l.number, l.args[1], "integer")?));
            }
            "BETA" => {
                c.arity(&l, 2)?;
                let i = c.parse(l.number, l.args[0], "vertex")?;
                beta.insert(i, (l.number, c.parse(l.number, l.args[1], "integer")?));
            }
            "THRESH" => {
                c.arity(&l, 1)?;
                thresh = Some(c.parse(l.number, l.args[0], "rational")?);
            }
            k => return c.err(l.number, format!("unknown keyword '{k}'")),
        }
    }
    let graph = g.finish(&c)?;
    let count = graph.n();
    let keys = nu.iter().map(|(i, v)| (*i, v.0));
    let keys = keys
        .chain(delta.iter().map(|(i, v)| (*i, v.0)))
        .chain(beta.iter().map(|(i, v)| (*i, v.0)));
    for (i, line) in keys {
        if i == 0 || i > count {
            return c.err(line, format!("vertex {i} outside 1..={count}"));
        }
    }
    let mut nus = Vec::with_capacity(count);
    for i in 1..=count {
        match nu.get(&i) {
            Some((_, v)) => nus.push(v.clone()),
            None => return c.err(last, format!("missing NU line for vertex {i}")),
        }
    }
    let defaults = threefold_delta(&graph);
    let deltas = (1..=count)
        .map(|i| delta.get(&i).map_or(defaults[i - 1], |d| d.1))
        .collect();
    let betas = (graph.l() + 1..=count)
        .map(|i| (i, beta.get(&i).map_or(1, |b| b.1)))
        .collect();
    let Some(n) = thresh else {
        return c.err(last, "missing THRESH line");
    };
    ValuationData::new(graph, RatVector::new(nus), deltas, betas, n)
}

pub fn write_valuation(v: &ValuationData) -> String {
    let mut s = write_graph(v.graph());
    for (i, x) in v.nu().iter().enumerate() {
        writeln!(s, "NU {} {x}", i + 1).expect("string write");
    }
    for (i, d) in v.delta().iter().enumerate() {
        writeln!(s, "DELTA {} {d}", i + 1).expect("string write");
    }
    for (i, b) in v.beta() {
        writeln!(s, "BETA {i} {b}").expect("string write");
    }
    writeln!(s, "THRESH {}", v.n()).expect("string write");
    s
}

/// Reads `W <i> <p/q>` lines; every vertex `1..=max` must appear once.
pub fn read_weights(text: &str, file: &str) -> Result<WeightFunction> {
    let c = Ctx { file };
    let mut w: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut last = 0;
    for l in lines(text) {
        last = l.number;
        if l.keyword != "W" {
            return c.err(l.number, format!("unknown keyword '{}'", l.keyword));
        }
        c.arity(&l, 2)?;
        let i: usize = c.parse(l.number, l.args[0], "vertex")?;
        if i == 0 {
            return c.err(l.number, "vertices are numbered from 1");
        }
        if w.insert(i, c.parse(l.number, l.args[1], "rational")?)
            .is_some()
        {
            return c.err(l.number, format!("vertex {i} given twice"));
        }
    }
    let len = w.keys().last().copied().unwrap_or(0);
    if w.len() != len {
        return c.err(last, "weights must cover vertices 1..=max");
    }
    WeightFunction::new(w.into_values().collect())
}

pub fn write_weights(a: &WeightFunction) -> String {
    let mut s = String::new();
    for (i, x) in a.values().iter().enumerate() {
        writeln!(s, "W {} {x}", i + 1).expect("string write");
    }
    s
}

/// Reads `VARS <k>` followed by `ROW GE|EQ c_1 … c_k | rhs` lines.
pub fn read_system(text: &str, file: &str) -> Result<LinearSystem> {
    let c = Ctx { file };
    let mut sys: Option<LinearSystem> = None;
    for l in lines(text) {
        match (l.keyword, &mut sys) {
            ("VARS", None) => {
                c.arity(&l, 1)?;
                sys = Some(LinearSystem::new(c.parse(l.number, l.args[0], "integer")?));
            }
            ("VARS", Some(_)) => return c.err(l.number, "VARS given twice"),
            ("ROW", None) => return c.err(l.number, "ROW before VARS"),
            ("ROW", Some(s)) => {
                let k = s.num_vars();
                if l.args.len() != k + 3 || l.args[k + 1] != "|" {
                    return c.err(
                        l.number,
                        format!(
                            "expected ROW GE|EQ with {k} coefficients, '|' and a right-hand side"
                        ),
                    );
                }
                let relation = match l.args[0] {
                    "GE" => Relation::Ge,
                    "EQ" => Relation::Eq,
                    r => return c.err(l.number, format!("unknown relation '{r}'")),
                };
                let coeffs = c.rationals(&l, &l.args[1..=k])?;
                let rhs = c.parse(l.number, l.args[k + 2], "rational")?;
                s.push(Row {
                    coeffs: RatVector::new(coeffs),
                    rhs,
                    relation,
                })?;
            }
            (k, _) => return c.err(l.number, format!("unknown keyword '{k}'")),
        }
    }
    match sys {
        Some(s) => Ok(s),
        None => c.err(0, "missing VARS line"),
    }
}

pub fn write_system(s: &LinearSystem) -> String {
    s.to_string()
}

/// Reads `BASIS` labels, one `GRAM` line per basis element and one `H` line
/// with the pairings of `H` followed by `(H²)`.
pub fn read_lattice(text: &str, file: &str) -> Result<IntersectionLattice> {
    let c = Ctx { file };
    let mut labels: Option<Vec<String>> = None;
    let mut gram: Vec<Vec<Rational>> = Vec::new();
    let mut h: Option<Vec<Rational>> = None;
    let mut last = 0;
    for l in lines(text) {
        last = l.number;
        match l.keyword {
            "BASIS" => {
                if labels
                    .replace(l.args.iter().map(|s| s.to_string()).collect())
                    .is_some()
                {
                    return c.err(l.number, "BASIS given twice");
                }
            }
            "GRAM" => gram.push(c.rationals(&l, &l.args)?),
            "H" => {
                if h.replace(c.rationals(&l, &l.args)?).is_some() {
                    return c.err(l.number, "H given twice");
                }
            }
            k => return c.err(l.number, format!("unknown keyword '{k}'")),
        }
    }
    let Some(labels) = labels else {
        return c.err(last, "missing BASIS line");
    };
    let Some(h) = h else {
        return c.err(last, "missing H line");
    };
    let gram = RatMatrix::from_rows(gram).or_else(|_| c.err(last, "GRAM rows differ in length"))?;
    IntersectionLattice::new(labels, gram, RatVector::new(h))
        .or_else(|e| c.err(last, e.to_string()))
}

pub fn write_lattice(lat: &IntersectionLattice) -> String {
    let mut s = format!("BASIS {}\n", lat.labels().join(" "));
    let g = lat.form().gram();
    for i in 0..g.rows() {
        let row: Vec<String> = (0..g.cols()).map(|j| g.get(i, j).to_string()).collect();
        writeln!(s, "GRAM {}", row.join(" ")).expect("string write");
    }
    let h: Vec<String> = lat.h_class().iter().map(ToString::to_string).collect();
    writeln!(s, "H {}", h.join(" ")).expect("string write");
    s
}

/// What a trace file records: claims, values and verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub name: String,
    pub steps: Vec<(String, Rational, bool)>,
    pub conclusion: (String, bool),
}

impl From<&ArgumentTrace> for TraceRecord {
    fn from(t: &ArgumentTrace) -> Self {
        TraceRecord {
            name: t.name.clone(),
            steps: t
                .steps
                .iter()
                .map(|s| (s.claim.clone(), s.value.clone(), s.satisfied))
                .collect(),
            conclusion: (t.conclusion.text.clone(), t.conclusion.holds),
        }
    }
}

pub fn write_trace(t: &ArgumentTrace) -> String {
    format!("TRACE {}\n{t}", t.name)
}

pub fn read_trace(text: &str, file: &str) -> Result<TraceRecord> {
    let c = Ctx { file };
    let mut name = None;
    let mut steps = Vec::new();
    let mut conclusion = None;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("TRACE ") {
            name = Some(rest.to_string());
        } else if let Some(rest) = line.strip_prefix("STEP ") {
            let (rest, ok) = match rest.rsplit_once(' ') {
                Some((r, "OK")) => (r, true),
                Some((r, "FAIL")) => (r, false),
                _ => return c.err(number, "step must end in OK or FAIL"),
            };
            let Some((rest, value)) = rest.rsplit_once(" value=") else {
                return c.err(number, "missing value=");
            };
            let value: Rational = c.parse(number, value, "rational")?;
            let Some((k, claim)) = rest.split_once(' ') else {
                return c.err(number, "missing description");
            };
            let k: usize = c.parse(number, k, "step number")?;
            if k != steps.len() + 1 {
                return c.err(number, format!("step {k} out of order"));
            }
            steps.push((claim.to_string(), value, ok));
        } else if let Some(rest) = line.strip_prefix("CONCLUSION ") {
            conclusion = match rest.rsplit_once(' ') {
                Some((text, "HOLDS")) => Some((text.to_string(), true)),
                Some((text, "FAILS")) => Some((text.to_string(), false)),
                _ => return c.err(number, "conclusion must end in HOLDS or FAILS"),
            };
        } else {
            return c.err(number, "expected TRACE, STEP or CONCLUSION");
        }
    }
    let last = text.lines().count();
    let Some(name) = name else {
        return c.err(last, "missing TRACE line");
    };
    let Some(conclusion) = conclusion else {
        return c.err(last, "missing CONCLUSION line");
    };
    Ok(TraceRecord {
        name,
        steps,
        conclusion,
    })
}
