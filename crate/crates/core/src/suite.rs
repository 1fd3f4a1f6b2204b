//! The acceptance criteria, run as one deterministic batch.
//!
//! Each criterion draws from its own generator seeded from the suite seed, so
//! criteria can run in parallel and still print the same lines in the same
//! order.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{int, rat, RatMatrix, RatVector, Rational};
use crate::graph::{random_graph, simplify, BlowupGraph, GraphSampler, LRule};
use crate::lattice::{
    check_inverse_sign, degree_contradiction, derive_mult_bound, projection_bound,
    restriction_system, RestrictionKind, SurfaceCase,
};
use crate::multiplicity::{interior_identity, terminal_identity};
use crate::oracle::{poly_mul, series_sqrt};
use crate::polytope::{
    a13_objective, build_system_l, check_a13, lemma15_gap, lemma48_min, lemma48_quadratic_check,
};
use crate::polytope::{linear_closed_form_35, maximize_f_35, minimize_simplex};
use crate::report::{CheckLine, Report, Verdict};
use crate::square::{a_poly, line_count, rank_condition_count, truncated_sqrt, y0_codim_bound};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Sweep sizes. The defaults are the sizes the criteria call for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub graphs: usize,
    pub identity_triples: usize,
    pub square_round_trips: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            graphs: 10_000,
            identity_triples: 1_000,
            square_round_trips: 1_000,
        }
    }
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<CheckLine>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != Verdict::Fail)
    }
}

pub const TITLES: [&str; 12] = [
    "type C inverse matrix",
    "elimination chains",
    "restriction systems",
    "degree contradictions",
    "LP bound on random graphs",
    "combinatorial lemma sweeps",
    "lower-bound identities",
    "constrained maximum of f",
    "square certificates",
    "enumerative counts",
    "simplification",
    "suite self-contained and fast",
];

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id)).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(lo * q..=hi * q);
    rat(p, q)
}

/// Runs one criterion. Criterion 12 is decided by [`run_suite`].
pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionOutcome {
    let mut rng = rng_for(cfg.seed, id);
    let checks = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(&mut rng, cfg),
        6 => criterion_6(&mut rng, cfg),
        7 => criterion_7(&mut rng, cfg),
        8 => criterion_8(),
        9 => criterion_9(&mut rng, cfg),
        10 => criterion_10(),
        11 => criterion_11(&mut rng, cfg),
        _ => panic!("criterion {id} is decided by the whole suite"),
    };
    CriterionOutcome {
        id,
        title: TITLES[usize::from(id) - 1],
        checks,
    }
}

/// Runs criteria 1 to 11 in parallel, then decides criterion 12 from their
/// verdicts and the elapsed time.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    let start = Instant::now();
    let mut out: Vec<CriterionOutcome> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=11u8)
            .map(|id| s.spawn(move || run_criterion(id, cfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion panicked"))
            .collect()
    });
    let elapsed = start.elapsed();
    let failed: Vec<String> = out
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id.to_string())
        .collect();
    let mut checks = vec![
        CheckLine::check("criteria_1_to_11", failed.is_empty()).note(if failed.is_empty() {
            "all pass".to_string()
        } else {
            format!("failing: {}", failed.join(","))
        }),
    ];
    checks.push(
        CheckLine::check("runtime_under_5_min", elapsed < Duration::from_secs(300))
            .note("offline; wall time not printed so reports stay byte-identical"),
    );
    out.push(CriterionOutcome {
        id: 12,
        title: TITLES[11],
        checks,
    });
    out
}

/// One report with every check prefixed by its criterion, then one summary
/// line per criterion.
pub fn suite_report(cfg: &SuiteConfig, outcomes: &[CriterionOutcome]) -> Report {
    let mut r = Report::new(format!("suite seed={}", cfg.seed));
    for o in outcomes {
        for c in &o.checks {
            let mut c = c.clone();
            c.name = format!("c{}.{}", o.id, c.name);
            r.push(c);
        }
    }
    for o in outcomes {
        r.push(CheckLine::check(format!("criterion_{}", o.id), o.passed()).note(o.title));
    }
    r
}

fn criterion_1() -> Vec<CheckLine> {
    let expected = RatMatrix::from_rows(vec![
        vec![rat(-3, 4), rat(-1, 4), rat(-1, 2)],
        vec![rat(-1, 4), rat(-3, 4), rat(-1, 2)],
        vec![rat(-1, 2), rat(-1, 2), int(-1)],
    ])
    .expect("rectangular");
    match check_inverse_sign(&SurfaceCase::C.lattice()) {
        Ok(inv) => vec![
            CheckLine::check("theta_inverse", inv.matrix == expected).note(inv.matrix.to_string()),
            CheckLine::check("strictly_negative", inv.strictly_negative),
        ],
        Err(e) => vec![CheckLine::check("theta_inverse", false).note(e.to_string())],
    }
}

fn criterion_2() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for case in SurfaceCase::ALL {
        let chain = match derive_mult_bound(case, &int(1)) {
            Ok(c) => c,
            Err(e) => {
                out.push(CheckLine::check(format!("chain_{case}"), false).note(e.to_string()));
                continue;
            }
        };
        let printed = match case {
            SurfaceCase::A => Some((32, 16)),
            SurfaceCase::C => Some((112, 56)),
            _ => None,
        };
        let shown = format!("{}n - {}nu+ >= 0", chain.c, chain.d);
        if let Some((c, d)) = printed {
            // positive multiples of each other
            let same = &chain.c * int(d) == &chain.d * int(c);
            out.push(CheckLine::check(format!("chain_{case}_printed"), same).note(shown.clone()));
        }
        out.push(
            CheckLine::check(format!("chain_{case}_ratio"), chain.ratio() == int(2))
                .value(chain.ratio())
                .note(shown),
        );
        let proj = projection_bound(&case.lattice()).map(|p| p.ratio);
        let agree = proj.as_ref().is_ok_and(|r| *r == chain.ratio());
        out.push(
            CheckLine::check(format!("projection_{case}"), agree).note(match proj {
                Ok(r) => format!("ratio {r}"),
                Err(e) => e.to_string(),
            }),
        );
    }
    out
}

fn criterion_3() -> Vec<CheckLine> {
    let n = int(1);
    let mut conic_ok = true;
    let mut cone_ok = true;
    let mut notes = Vec::new();
    for m in 4..=12 {
        let conic = restriction_system(RestrictionKind::Conic22, m, &n);
        let upper = |var: usize| {
            conic.as_ref().is_ok_and(|r| {
                r.bounds
                    .iter()
                    .any(|b| b.variable == var && b.upper && b.ratio <= int(1))
            })
        };
        if !(upper(0) && upper(1)) {
            conic_ok = false;
            notes.push(format!("conic M={m}"));
        }
        let cone = restriction_system(RestrictionKind::Cone23, m, &n);
        let want = rat(m - 3, m - 2);
        let hit = cone.as_ref().is_ok_and(|r| {
            r.bounds.iter().any(|b| {
                b.conditional && b.variable == 1 && !b.upper && b.strict && b.ratio == want
            })
        });
        if !hit {
            cone_ok = false;
            notes.push(format!("cone M={m}"));
        }
    }
    let k3 = restriction_system(RestrictionKind::K3Pencil32, 4, &n);
    let k3_ok = k3.as_ref().is_ok_and(|r| {
        r.bounds.iter().any(|b| {
            b.variable == 0
                && b.upper
                && b.derivation.raw.coeffs == RatVector::from_ints(&[-5, 0, 10])
        })
    });
    vec![
        CheckLine::check("conic_nu_le_n_M4_to_12", conic_ok).note(notes.join(" ")),
        CheckLine::check("cone_nu_minus_lower_M4_to_12", cone_ok),
        CheckLine::check("k3_10n_minus_5nu", k3_ok).note("2*(first) + 3*(second)"),
    ]
}

fn criterion_4() -> Vec<CheckLine> {
    let mut out = Vec::new();
    for n in [int(1), int(3), rat(5, 2)] {
        let budget = int(8) * n.square();
        let (lhs7, c7) = degree_contradiction(7, &n, &(&n * rat(1, 2)), &budget);
        let (lhs6, c6) = degree_contradiction(6, &n, &(&n * rat(2, 3)), &budget);
        out.push(
            CheckLine::check(format!("deg7_n={n}"), c7 && lhs7 == rat(35, 4) * n.square())
                .value(lhs7),
        );
        out.push(
            CheckLine::check(format!("deg6_n={n}"), c6 && lhs6 == rat(26, 3) * n.square())
                .value(lhs6),
        );
    }
    out
}

fn sample_graphs<R: Rng>(rng: &mut R, count: usize, s: &GraphSampler) -> Vec<BlowupGraph> {
    (0..count).map(|_| random_graph(rng, s)).collect()
}

fn criterion_5<R: Rng>(rng: &mut R, cfg: &SuiteConfig) -> Vec<CheckLine> {
    let m = int(1);
    let sampler = GraphSampler::new(8, LRule::AllPoints)
        .with_n_min(1)
        .with_max_class(2);
    let mut below = 0usize;
    let mut disagree = 0usize;
    let mut errors = 0usize;
    for g in sample_graphs(rng, cfg.graphs, &sampler) {
        let Ok(c) = check_a13(&g, &m) else {
            errors += 1;
            continue;
        };
        if !c.passes {
            below += 1;
        }
        let sys = build_system_l(&g, &m).expect("valid graph");
        match minimize_simplex(&sys, &a13_objective(g.n())) {
            Ok((v, _)) if v == c.lp_value => {}
            _ => disagree += 1,
        }
    }
    // class-3 graphs are outside the bound's scope; count for information
    let wide = GraphSampler::new(8, LRule::AllPoints).with_n_min(1);
    let sample = cfg.graphs / 10;
    let class3_below = sample_graphs(rng, sample, &wide)
        .iter()
        .filter(|g| check_a13(g, &m).is_ok_and(|c| !c.passes))
        .count();
    vec![
        CheckLine::check("a13_min_ge_2m", below == 0 && errors == 0).note(format!(
            "{} class<=2 graphs, {below} below, {errors} errors",
            cfg.graphs
        )),
        CheckLine::check("vertex_enumeration_equals_simplex", disagree == 0)
            .note(format!("{disagree} disagreements")),
        CheckLine::new("class3_information", Verdict::Degenerate).note(format!(
            "{class3_below} of {sample} class-3 samples fall below 2m"
        )),
    ]
}

/// Nonnegative integers with `f(i) ≥ Σ_{j→i} f(j)`, filled from the top.
fn compatible_function<R: Rng>(rng: &mut R, g: &BlowupGraph) -> Vec<u64> {
    let mut f = vec![0u64; g.n() + 1];
    for i in (1..=g.n()).rev() {
        let inflow: u64 = g.sources(i).iter().map(|&j| f[j]).sum();
        f[i] = inflow + rng.gen_range(0..=3);
    }
    f
}

fn criterion_6<R: Rng>(rng: &mut R, cfg: &SuiteConfig) -> Vec<CheckLine> {
    let sampler = GraphSampler::new(10, LRule::AllPoints).with_max_class(2);
    let (mut c49, mut c15, mut c48, mut c58) = (0usize, 0usize, 0usize, 0usize);
    let mut prefixes = 0usize;
    for g in sample_graphs(rng, cfg.graphs, &sampler) {
        let n = g.n();
        let p = g.paths_from(n).expect("valid graph");
        let lemma49 =
            (1..=n).all(|i| p[i - 1] <= p.get(i + 1..).map_or(0, |t| t.iter().sum::<u64>()) + 1);
        c49 += usize::from(!lemma49);
        c15 += usize::from(lemma15_gap(&g).map_or(true, |x| x.is_negative()));
        for k in (1..=n).take_while(|&k| g.chain_breaker(k).is_none()) {
            prefixes += 1;
            let bad = lemma48_min(&g, k).map_or(true, |x| x.is_negative())
                || !lemma48_quadratic_check(&g, k).unwrap_or(false);
            c48 += usize::from(bad);
        }
        let mu = compatible_function(rng, &g);
        let a = compatible_function(rng, &g);
        let low: u64 = (1..=n)
            .filter(|&j| g.out_degree(j) <= 1)
            .map(|j| a[j])
            .sum();
        let lhs = u128::from(mu[1] + mu[2]) * u128::from(low);
        let rhs: u128 = (1..=n).map(|j| u128::from(mu[j]) * u128::from(a[j])).sum();
        c58 += usize::from(lhs < rhs);
    }
    let note = |c: usize| format!("{c} counterexamples in {} class<=2 graphs", cfg.graphs);
    vec![
        CheckLine::check("path_tail_bound", c49 == 0).note(note(c49)),
        CheckLine::check("quadratic_gap", c15 == 0).note(note(c15)),
        CheckLine::check("chain_prefix_gap", c48 == 0)
            .note(format!("{c48} counterexamples in {prefixes} prefixes")),
        CheckLine::check("compatible_pair_inequality", c58 == 0).note(note(c58)),
    ]
}

fn criterion_7<R: Rng>(rng: &mut R, cfg: &SuiteConfig) -> Vec<CheckLine> {
    let (mut bad_t, mut bad_i) = (0usize, 0usize);
    for _ in 0..cfg.identity_triples {
        let s0 = random_rational(rng, 0, 20, 12);
        let s1 = random_rational(rng, 0, 20, 12);
        if (&s0 + &s1).is_zero() {
            continue;
        }
        let a = random_rational(rng, 0, 1, 16);
        let (l, r) = terminal_identity(&s0, &s1);
        bad_t += usize::from(l != r);
        let (l, r) = interior_identity(&s0, &s1, &a);
        bad_i += usize::from(l != r);
    }
    let spot = interior_identity(&int(3), &int(2), &rat(1, 2));
    vec![
        CheckLine::check("terminal_identity", bad_t == 0).note(format!("{bad_t} failures")),
        CheckLine::check("interior_identity", bad_i == 0).note(format!("{bad_i} failures")),
        CheckLine::check(
            "interior_identity_spot",
            spot.0 == rat(69, 4) && spot.1 == rat(69, 4),
        )
        .value(spot.0),
    ]
}

/// Largest value of `f` on the grid of step `1/20` (with `n = 1`, all values
/// scaled by 20), for fixed `u1 = 20ν_1`. Separable: the `ν₋` part and the
/// `Σν_i²` part are optimised independently, the latter by an exact DP over
/// compositions of `20(k+2) − u1` into `k` parts.
fn grid_max_scaled(k: usize, u1: i64) -> i64 {
    let h = (0..=60i64)
        .map(|um| -80 * um - 2 * um * um + 6 * u1 * um)
        .max()
        .expect("nonempty");
    let total = 20 * (k as i64 + 2) - u1;
    let cap = 20 * (k as i64 + 2);
    let inf = i64::MAX / 4;
    let mut best = vec![inf; total as usize + 1];
    best[0] = 0;
    for _ in 0..k {
        let mut next = vec![inf; total as usize + 1];
        for (s, &b) in best.iter().enumerate() {
            if b == inf {
                continue;
            }
            for x in 0..=cap.min(total - s as i64) {
                let t = s + x as usize;
                next[t] = next[t].min(b + x * x);
            }
        }
        best = next;
    }
    3200 - 80 * u1 - 2 * u1 * u1 + h - best[total as usize]
}

fn criterion_8() -> Vec<CheckLine> {
    let n = int(1);
    let mut dominated = true;
    let mut worst_gap: Option<Rational> = None;
    for k in 1..=4u32 {
        for j in 0..=40i64 {
            let nu1 = rat(j, 20);
            let Ok(max) = maximize_f_35(&n, k, &nu1) else {
                dominated = false;
                continue;
            };
            let grid = Rational::from(grid_max_scaled(k as usize, j)) / int(400);
            if grid > max {
                dominated = false;
            }
            let gap = &max - &grid;
            if worst_gap.as_ref().is_none_or(|w| gap < *w) {
                worst_gap = Some(gap);
            }
        }
    }
    let mut mismatches = 0usize;
    let mut transcription = true;
    for j in 0..=40i64 {
        let nu1 = rat(j, 20);
        let printed = int(-5) + int(2) * &nu1;
        transcription &= linear_closed_form_35(&n, 1, &nu1) == printed;
        if maximize_f_35(&n, 1, &nu1).ok() != Some(printed) {
            mismatches += 1;
        }
    }
    vec![
        CheckLine::check("maximum_dominates_grid_k1_to_4", dominated)
            .value(worst_gap.unwrap_or_default())
            .note("smallest max - grid max"),
        CheckLine::check("printed_form_k1", transcription),
        CheckLine::check("maximum_equals_minus5n2_plus_2n_nu1", mismatches == 0).note(format!(
            "{mismatches} of 41 grid values differ; the maximum exceeds -5n^2+2n*nu1 by 3/2(2n-nu1)^2"
        )),
    ]
}

fn criterion_9<R: Rng>(rng: &mut R, cfg: &SuiteConfig) -> Vec<CheckLine> {
    let mut trips_bad = 0usize;
    for t in 0..cfg.square_round_trips {
        let m = 1 + t % 8;
        let r: Vec<Rational> = (0..m).map(|_| random_rational(rng, -5, 5, 8)).collect();
        let mut root = vec![Rational::one()];
        root.extend(r.iter().cloned());
        let b = poly_mul(&root, &root);
        match truncated_sqrt(&b[1..]) {
            Ok(c) if c.is_square && c.root == r => {}
            _ => trips_bad += 1,
        }
    }
    let a12 = a_poly(1, 2).map(|p| p.to_string());
    let a23 = a_poly(2, 3).map(|p| p.to_string());
    let mut oracle_bad = 0usize;
    for m in 1..=8 {
        let s: Vec<Rational> = (0..m).map(|_| random_rational(rng, -4, 4, 6)).collect();
        let mut full = vec![Rational::one()];
        full.extend(s.iter().cloned());
        for i in m + 1..=2 * m {
            full.push(a_poly(m, i).expect("in range").eval(&s));
        }
        let root = series_sqrt(&full, m);
        if poly_mul(&root, &root) != full {
            oracle_bad += 1;
        }
    }
    let mut qh_bad = 0usize;
    for m in 1..=6 {
        let lambda = random_rational(rng, 1, 5, 7);
        for i in m + 1..=2 * m {
            let p = a_poly(m, i).expect("in range");
            if p.weighted_rescale(&lambda) != p.scale(&lambda.pow(i as u32))
                || !p.has_dyadic_coefficients()
            {
                qh_bad += 1;
            }
        }
    }
    vec![
        CheckLine::check("round_trips", trips_bad == 0).note(format!(
            "{trips_bad} failures in {}",
            cfg.square_round_trips
        )),
        CheckLine::check("A_1_2", a12.as_deref() == Ok("1/4*s1^2")).note(a12.unwrap_or_default()),
        CheckLine::check("A_2_3", a23.as_deref() == Ok("1/2*s1*s2 - 1/8*s1^3"))
            .note(a23.unwrap_or_default()),
        CheckLine::check("substitution_squares", oracle_bad == 0)
            .note(format!("{oracle_bad} failures for m<=8")),
        CheckLine::check("quasi_homogeneity", qh_bad == 0)
            .note(format!("{qh_bad} failures for m<=6")),
    ]
}

fn criterion_10() -> Vec<CheckLine> {
    let lc = |m: u64| {
        line_count(m)
            .map(|c| c.count.to_string())
            .unwrap_or_default()
    };
    let y0_ok = (3..=10).all(|m| y0_codim_bound(m).is_ok_and(|v| v == (2 * m - 1).into()));
    let bezout_ok = (2..=12u64).all(|m| {
        line_count(m).is_ok_and(|c| {
            c.count
                == c.degrees
                    .iter()
                    .fold(num_bigint::BigUint::from(2u32), |acc, &d| acc * d)
        })
    });
    let rank = rank_condition_count(6, 3);
    vec![
        CheckLine::check("line_count_4", lc(4) == "240").note(lc(4)),
        CheckLine::check("line_count_5", lc(5) == "3360").note(lc(5)),
        CheckLine::check("line_count_bezout_M2_to_12", bezout_ok),
        CheckLine::check("y0_codim_M3_to_10", y0_ok),
        CheckLine::check(
            "rank_6_3",
            rank.is_ok_and(|r| (r.conditions, r.threshold, r.exceeds) == (10, 9, true)),
        ),
    ]
}

fn criterion_11<R: Rng>(rng: &mut R, cfg: &SuiteConfig) -> Vec<CheckLine> {
    let sampler = GraphSampler::new(10, LRule::Uniform);
    let (mut class_bad, mut retain_bad, mut chains) = (0usize, 0usize, 0usize);
    for g in sample_graphs(rng, cfg.graphs, &sampler) {
        let s = simplify(&g);
        class_bad += usize::from(s.max_class() > 2);
        let l = g.l();
        for i in 1..l {
            // longest run i+1..i+k that is a chain among itself with every
            // member pointing to i
            let mut k = 0;
            while i + k < l {
                let v = i + k + 1;
                let inner_ok = g.targets(v).iter().all(|&j| j <= i || j + 1 == v);
                if !(g.has_arrow(v, i) && inner_ok) {
                    break;
                }
                k += 1;
            }
            if k > 0 {
                chains += 1;
                retain_bad += usize::from(!(1..=k).all(|a| s.has_arrow(i + a, i)));
            }
        }
    }
    vec![
        CheckLine::check("simplified_class_le_2", class_bad == 0)
            .note(format!("{class_bad} failures in {} graphs", cfg.graphs)),
        CheckLine::check("chain_arrows_retained", retain_bad == 0)
            .note(format!("{retain_bad} failures in {chains} chains")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_exact_maximum_at_the_corner() {
        // nu_1 = 2n: maximum -k n^2, attained on the grid
        for k in 1..=4 {
            let g = Rational::from(grid_max_scaled(k, 40)) / int(400);
            assert_eq!(g, -Rational::from(k as u64));
        }
    }

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 7,
            graphs: 50,
            identity_triples: 20,
            square_round_trips: 16,
        };
        let a = suite_report(&cfg, &run_suite(&cfg)).render_text(false);
        let b = suite_report(&cfg, &run_suite(&cfg)).render_text(false);
        assert_eq!(a, b);
    }
}
