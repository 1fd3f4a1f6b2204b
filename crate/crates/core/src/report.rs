//! Check reports as text or JSON lines. Output depends only on the checks,
//! so identical inputs give byte-identical reports.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check does not apply to this input (an empty range, say).
    Degenerate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Degenerate => "DEGENERATE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub verdict: Verdict,
    pub value: Option<Rational>,
    pub note: Option<String>,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        CheckLine {
            name: name.into(),
            verdict,
            value: None,
            note: None,
        }
    }

    pub fn check(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, Verdict::from_bool(ok))
    }

    pub fn value(mut self, v: Rational) -> Self {
        self.value = Some(v);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: String,
    pub case: String,
    pub checks: Vec<CheckLine>,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    version: &'a str,
    case: &'a str,
    name: &'a str,
    verdict: Verdict,
    value: Option<&'a Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<f64>,
    note: Option<&'a str>,
}

impl Report {
    pub fn new(case: impl Into<String>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            case: case.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: CheckLine) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, c: impl IntoIterator<Item = CheckLine>) {
        self.checks.extend(c);
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    /// `REPORT rigidity <version> <case>` then
    /// `CHECK <name> <verdict> [value=<p/q> [~<decimal>]] [<note>]`.
    pub fn render_text(&self, decimal: bool) -> String {
        let mut s = format!("REPORT rigidity {} {}\n", self.version, self.case);
        for c in &self.checks {
            write!(s, "CHECK {} {}", c.name, c.verdict.as_str()).expect("string write");
            if let Some(v) = &c.value {
                write!(s, " value={v}").expect("string write");
                if decimal && !v.is_integer() {
                    write!(s, " ~{:.6}", v.to_f64()).expect("string write");
                }
            }
            if let Some(n) = c.note.as_ref().filter(|n| !n.is_empty()) {
                write!(s, " {n}").expect("string write");
            }
            s.push('\n');
        }
        s
    }

    pub fn render_json_lines(&self, decimal: bool) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let line = JsonCheck {
                version: &self.version,
                case: &self.case,
                name: &c.name,
                verdict: c.verdict,
                value: c.value.as_ref(),
                decimal: if decimal {
                    c.value.as_ref().map(Rational::to_f64)
                } else {
                    None
                },
                note: c.note.as_deref(),
            };
            s.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            s.push('\n');
        }
        s
    }

    pub fn render(&self, format: Format, decimal: bool) -> String {
        match format {
            Format::Text => self.render_text(decimal),
            Format::JsonLines => self.render_json_lines(decimal),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn text_and_json() {
        let mut r = Report::new("C");
        r.push(CheckLine::check("theta_inverse", true).note("[[-1/2]]"));
        r.push(CheckLine::new("ratio", Verdict::Fail).value(rat(1, 3)));
        let text = r.render_text(true);
        assert!(text.contains("CHECK theta_inverse PASS [[-1/2]]\n"));
        assert!(text.contains("CHECK ratio FAIL value=1/3 ~0.333333\n"));
        let json = r.render_json_lines(false);
        let first: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        assert_eq!(first["verdict"], "PASS");
        assert_eq!(first["case"], "C");
        let second: serde_json::Value = serde_json::from_str(json.lines().nth(1).unwrap()).unwrap();
        assert_eq!(second["value"], "1/3");
        assert!(r.any_fail());
    }
}
