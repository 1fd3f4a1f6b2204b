use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use rigidity_core::compose::{run_section4_skeleton, run_section63, ArgumentTrace};
use rigidity_core::format::{
    read_graph, read_lattice, read_valuation, read_weights, write_graph, write_system,
};
use rigidity_core::graph::{validate_graph, vertex_class, BlowupGraph};
use rigidity_core::lattice::{
    check_inverse_sign, derive_mult_bound_for, exceptional_gram, projection_bound, r_pairing,
    restriction_system, IntersectionLattice, RestrictionKind, SurfaceCase,
};
use rigidity_core::multiplicity::{check_compatible, counting_bound, nf_excess, GraphView, NfMode};
use rigidity_core::polytope::{a13_objective, build_system_l, check_a13, minimize_checked};
use rigidity_core::report::{CheckLine, Format, Report, Verdict};
use rigidity_core::square::{
    a_poly, line_count, rank_condition_count, truncated_sqrt, y0_codim_bound,
};
use rigidity_core::suite::{run_suite, suite_report, SuiteConfig, DEFAULT_SEED};
use rigidity_core::{Error, Rational};

#[derive(Parser)]
#[command(
    name = "rigidity",
    version,
    about = "Exact checks for multiplicity bounds on blow-up graphs and surface lattices"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Append approximate decimals to non-integer values.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Nf(NfCmd),
    #[command(subcommand)]
    Count(CountCmd),
    #[command(subcommand)]
    Lp(LpCmd),
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Square(SquareCmd),
    #[command(subcommand)]
    Argue(ArgueCmd),
    /// Run every acceptance criterion.
    Suite {
        #[arg(long, env = "RIGIDITY_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    Validate {
        file: PathBuf,
    },
    /// Path counts p_{from,i}, or one count with --to.
    Paths {
        file: PathBuf,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Prints the simplified graph.
    Simplify {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum NfCmd {
    Excess {
        file: PathBuf,
        #[arg(long, conflicts_with = "canonical")]
        log: bool,
        #[arg(long)]
        canonical: bool,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Lower bound for the weighted multiplicity sum.
    Bound {
        file: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
    Lines {
        #[arg(long = "M")]
        m: u64,
    },
    Rank {
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        rank: u64,
    },
    Codim {
        #[arg(long = "M")]
        m: u64,
    },
}

#[derive(Args)]
struct LpArgs {
    file: PathBuf,
    #[arg(long, default_value = "1")]
    m: Rational,
}

#[derive(Subcommand)]
enum LpCmd {
    /// Prints the system in the system file format.
    Build(LpArgs),
    Min(LpArgs),
    A13(LpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(alias = "conic_22")]
    Conic22,
    #[value(alias = "cone_23")]
    Cone23,
    #[value(alias = "k3_pencil_32")]
    K3,
}

impl From<KindArg> for RestrictionKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Conic22 => RestrictionKind::Conic22,
            KindArg::Cone23 => RestrictionKind::Cone23,
            KindArg::K3 => RestrictionKind::K3Pencil32,
        }
    }
}

#[derive(Subcommand)]
enum LatticeCmd {
    Verify {
        #[arg(long, required_unless_present = "file", conflicts_with = "file")]
        case: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        n: Rational,
    },
    Restrict {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long = "M", default_value_t = 4)]
        m: i64,
        #[arg(long, default_value = "1")]
        n: Rational,
    },
}

#[derive(Subcommand)]
enum SquareCmd {
    /// Is 1 + b_1 t + ... + b_2m t^2m a square?
    Sqrt {
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
        coeffs: Vec<Rational>,
    },
    Apoly {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        i: usize,
    },
}

#[derive(Subcommand)]
enum ArgueCmd {
    S63 {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        b: Rational,
        #[arg(long)]
        deg_z1: Option<Rational>,
    },
    S4 {
        file: PathBuf,
        #[arg(long)]
        n: Rational,
        #[arg(long)]
        m1: Rational,
        #[arg(long)]
        m2: Rational,
    },
}

enum Output {
    Report(Report),
    Raw(String),
}

fn read(path: &Path) -> anyhow::Result<(String, String)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok((text, path.display().to_string()))
}

fn load_graph(path: &Path) -> anyhow::Result<BlowupGraph> {
    let (text, name) = read(path)?;
    let g = read_graph(&text, &name)?;
    if let Some(v) = validate_graph(&g).first() {
        anyhow::bail!("{name}: invalid graph: {v}");
    }
    Ok(g)
}

fn verdict_value(name: &str, ok: bool, v: Rational) -> CheckLine {
    CheckLine::check(name, ok).value(v)
}

fn graph(cmd: GraphCmd) -> anyhow::Result<Output> {
    match cmd {
        GraphCmd::Validate { file } => {
            let (text, name) = read(&file)?;
            let g = read_graph(&text, &name)?;
            let violations = validate_graph(&g);
            let mut r = Report::new(name);
            r.push(
                CheckLine::check("valid", violations.is_empty()).note(format!(
                    "N={} L={}",
                    g.n(),
                    g.l()
                )),
            );
            r.extend(
                violations
                    .iter()
                    .map(|v| CheckLine::check("violation", false).note(v.to_string())),
            );
            if violations.is_empty() {
                let vc = vertex_class(&g);
                let classes: Vec<String> = vc.classes.iter().map(u8::to_string).collect();
                r.push(CheckLine::new("classes", Verdict::Pass).note(classes.join(",")));
                r.push(
                    CheckLine::new("complex_vertices", Verdict::Pass)
                        .value(Rational::from(vc.complex_vertices.len() as u64)),
                );
            }
            Ok(Output::Report(r))
        }
        GraphCmd::Paths { file, from, to } => {
            let g = load_graph(&file)?;
            let from = from.unwrap_or(g.n());
            let mut r = Report::new(file.display().to_string());
            match to {
                Some(to) => {
                    let p = g.path_count(from, to)?;
                    r.push(
                        CheckLine::new(format!("p_{from}_{to}"), Verdict::Pass)
                            .value(Rational::from(p)),
                    );
                }
                None => {
                    for (i, p) in g.paths_from(from)?.into_iter().enumerate() {
                        r.push(
                            CheckLine::new(format!("p_{from}_{}", i + 1), Verdict::Pass)
                                .value(Rational::from(p)),
                        );
                    }
                }
            }
            Ok(Output::Report(r))
        }
        GraphCmd::Simplify { file } => Ok(Output::Raw(write_graph(
            &rigidity_core::graph::simplify(&load_graph(&file)?),
        ))),
    }
}

fn count(cmd: CountCmd) -> anyhow::Result<Output> {
    let mut r;
    match cmd {
        CountCmd::Bound { file, weights } => {
            let (text, name) = read(&file)?;
            let v = read_valuation(&text, &name)?;
            let (wtext, wname) = read(&weights)?;
            let a = read_weights(&wtext, &wname)?;
            r = Report::new(name);
            let compatible = check_compatible(&a, v.graph(), GraphView::Simplified)?;
            r.push(CheckLine::check("weights_compatible", compatible));
            if compatible {
                r.push(
                    CheckLine::new("counting_bound", Verdict::Pass).value(counting_bound(&v, &a)?),
                );
            }
        }
        CountCmd::Lines { m } => {
            let c = line_count(m)?;
            r = Report::new(format!("M={m}"));
            let degrees: Vec<String> = c.degrees.iter().map(u64::to_string).collect();
            r.push(
                CheckLine::new("line_count", Verdict::Pass)
                    .value(Rational::from(c.count))
                    .note(format!("degrees {}", degrees.join(","))),
            );
        }
        CountCmd::Rank { m, rank } => {
            let c = rank_condition_count(m, rank)?;
            r = Report::new(format!("M={m} rank={rank}"));
            r.push(CheckLine::new("conditions", Verdict::Pass).value(Rational::from(c.conditions)));
            r.push(CheckLine::new("threshold", Verdict::Pass).value(Rational::from(c.threshold)));
            r.push(CheckLine::new("exceeds", Verdict::Pass).note(c.exceeds.to_string()));
        }
        CountCmd::Codim { m } => {
            let c = y0_codim_bound(m)?;
            r = Report::new(format!("M={m}"));
            r.push(CheckLine::new("codim_bound", Verdict::Pass).value(Rational::from(c)));
        }
    }
    Ok(Output::Report(r))
}

fn lp(cmd: LpCmd) -> anyhow::Result<Output> {
    match cmd {
        LpCmd::Build(a) => Ok(Output::Raw(write_system(&build_system_l(
            &load_graph(&a.file)?,
            &a.m,
        )?))),
        LpCmd::Min(a) => {
            let g = load_graph(&a.file)?;
            let res = minimize_checked(&build_system_l(&g, &a.m)?, &a13_objective(g.n()))?;
            let mut r = Report::new(a.file.display().to_string());
            r.push(
                CheckLine::new("minimum", Verdict::Pass)
                    .value(res.optimal_value)
                    .note(format!("vertex {}", res.witness_vertex)),
            );
            Ok(Output::Report(r))
        }
        LpCmd::A13(a) => {
            let g = load_graph(&a.file)?;
            let c = check_a13(&g, &a.m)?;
            let mut r = Report::new(a.file.display().to_string());
            r.push(
                verdict_value("a13", c.passes, c.lp_value).note(format!("vertex {}", c.witness)),
            );
            r.push(CheckLine::new("theta", Verdict::Pass).value(c.theta));
            r.push(CheckLine::new("closed_form", Verdict::Pass).value(c.closed_form));
            Ok(Output::Report(r))
        }
    }
}

fn lattice_checks(lat: &IntersectionLattice, n: &Rational, r: &mut Report) {
    if let Err(e) = exceptional_gram(lat) {
        r.push(CheckLine::check("negative_definite", false).note(e.to_string()));
        return;
    }
    r.push(CheckLine::check("negative_definite", true));
    match check_inverse_sign(lat) {
        Ok(inv) => {
            r.push(CheckLine::check("theta_inverse", inv.nonpositive).note(inv.matrix.to_string()));
            let strict = if inv.strictly_negative {
                Verdict::Pass
            } else {
                Verdict::Degenerate
            };
            r.push(CheckLine::new("strictly_negative", strict));
        }
        Err(e) => r.push(CheckLine::check("theta_inverse", false).note(e.to_string())),
    }
    match r_pairing(lat) {
        Ok(p) => r.push(CheckLine::check("r_pairing", true).value(p.a).note("a")),
        Err(e) => r.push(CheckLine::check("r_pairing", false).note(e.to_string())),
    }
    match derive_mult_bound_for(lat, n) {
        Ok(c) => {
            let two = Rational::from(2u64);
            let note = format!("{}n - {}nu+ >= 0", c.c, c.d);
            r.push(verdict_value("mult_bound", c.ratio() <= two, c.bound.clone()).note(note));
        }
        Err(e) => r.push(CheckLine::check("mult_bound", false).note(e.to_string())),
    }
    match projection_bound(lat) {
        Ok(p) => r.push(
            CheckLine::check("projection_bound", p.inverse_positive)
                .value(p.ratio)
                .note("ratio"),
        ),
        Err(e) => r.push(CheckLine::check("projection_bound", false).note(e.to_string())),
    }
}

fn lattice(cmd: LatticeCmd) -> anyhow::Result<Output> {
    match cmd {
        LatticeCmd::Verify { case, file, n } => {
            let (name, lat) = match (case, file) {
                (Some(c), _) => {
                    let case = SurfaceCase::from_name(&c)
                        .ok_or_else(|| Error::InvalidInput(format!("unknown case '{c}'")))?;
                    (format!("case {case}"), case.lattice())
                }
                (None, Some(f)) => {
                    let (text, name) = read(&f)?;
                    let lat = read_lattice(&text, &name)?;
                    (name, lat)
                }
                (None, None) => unreachable!("clap requires one of --case, --file"),
            };
            let mut r = Report::new(name);
            lattice_checks(&lat, &n, &mut r);
            Ok(Output::Report(r))
        }
        LatticeCmd::Restrict { kind, m, n } => {
            let s = restriction_system(kind.into(), m, &n)?;
            let mut r = Report::new(format!("{} M={m} n={n}", s.kind.name()));
            for b in &s.bounds {
                let var = if b.variable == 0 { "nu+" } else { "nu-" };
                let side = if b.upper { "upper" } else { "lower" };
                r.push(
                    CheckLine::new(format!("{var}_{side}"), Verdict::Pass)
                        .value(b.value.clone())
                        .note(b.to_string()),
                );
            }
            Ok(Output::Report(r))
        }
    }
}

fn square(cmd: SquareCmd) -> anyhow::Result<Output> {
    match cmd {
        SquareCmd::Sqrt { coeffs } => {
            let c = truncated_sqrt(&coeffs)?;
            let mut r = Report::new(format!("m={}", coeffs.len() / 2));
            let root: Vec<String> = c.root.iter().map(Rational::to_string).collect();
            let mut note = format!("root 1,{}", root.join(","));
            let mut line = CheckLine::check("is_square", c.is_square);
            if let Some(i) = c.failure_index {
                line = line.value(Rational::from(i as u64));
                note.push_str(&format!("; first mismatch at t^{i}"));
            }
            r.push(line.note(note));
            Ok(Output::Report(r))
        }
        SquareCmd::Apoly { m, i } => {
            let p = a_poly(m, i)?;
            let mut r = Report::new(format!("m={m} i={i}"));
            r.push(
                CheckLine::check("quasi_homogeneous", p.is_quasi_homogeneous(i as u64))
                    .note(p.to_string()),
            );
            Ok(Output::Report(r))
        }
    }
}

fn trace_report(case: String, t: &ArgumentTrace) -> Report {
    let mut r = Report::new(case);
    for s in &t.steps {
        r.push(
            CheckLine::check(s.claim.clone(), s.satisfied)
                .value(s.value.clone())
                .note(s.source.clone()),
        );
    }
    r.push(CheckLine::check("conclusion", t.conclusion.holds).note(t.conclusion.text.clone()));
    r
}

fn argue(cmd: ArgueCmd) -> anyhow::Result<Output> {
    match cmd {
        ArgueCmd::S63 { file, k, b, deg_z1 } => {
            let (text, name) = read(&file)?;
            let v = read_valuation(&text, &name)?;
            let t = run_section63(&v, k, &b, deg_z1.as_ref())?;
            Ok(Output::Report(trace_report(name, &t)))
        }
        ArgueCmd::S4 { file, n, m1, m2 } => {
            let g = load_graph(&file)?;
            let t = run_section4_skeleton(&g, &n, &m1, &m2)?;
            Ok(Output::Report(trace_report(file.display().to_string(), &t)))
        }
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<Output> {
    match cmd {
        Command::Graph(c) => graph(c),
        Command::Nf(NfCmd::Excess {
            file,
            log: _,
            canonical,
        }) => {
            let (text, name) = read(&file)?;
            let v = read_valuation(&text, &name)?;
            let mode = if canonical {
                NfMode::Canonical
            } else {
                NfMode::Log
            };
            let e = nf_excess(&v, mode);
            let label = if canonical {
                "canonical_excess"
            } else {
                "log_excess"
            };
            let mut r = Report::new(name);
            r.push(
                verdict_value(label, e.is_positive(), e)
                    .note("positive: the inequality holds strictly"),
            );
            Ok(Output::Report(r))
        }
        Command::Count(c) => count(c),
        Command::Lp(c) => lp(c),
        Command::Lattice(c) => lattice(c),
        Command::Square(c) => square(c),
        Command::Argue(c) => argue(c),
        Command::Suite { seed } => {
            let cfg = SuiteConfig::with_seed(seed);
            Ok(Output::Report(suite_report(&cfg, &run_suite(&cfg))))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::JsonLines => Format::JsonLines,
    };
    match dispatch(cli.command) {
        Ok(Output::Raw(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(r)) => {
            print!("{}", r.render(format, cli.decimal));
            if r.any_fail() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
