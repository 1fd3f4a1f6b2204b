//! Worked examples with hand-checked values, through the public API only.

use std::collections::BTreeMap;

use rigidity_core::exact::{int, rat};
use rigidity_core::graph::{random_valid_graph, simplify, validate_graph, LRule};
use rigidity_core::lattice::{
    check_inverse_sign, degree_contradiction, derive_mult_bound, orthogonal_shift, r_pairing,
    restriction_system, RestrictionKind, Sign, SurfaceCase,
};
use rigidity_core::multiplicity::{
    check_compatible, counting_bound, eight_n2_combiner, minimal_noncanonical_index, nf_excess,
    quadratic_min_bound, GraphView, NfMode,
};
use rigidity_core::polytope::{
    a13_objective, build_system_l, lemma14_truncate, minimize_checked, Lemma14Outcome,
};
use rigidity_core::square::{line_count, rank_condition_count, truncated_sqrt};
use rigidity_core::{BlowupGraph, RatMatrix, RatVector, Rational, ValuationData, WeightFunction};

fn v(x: &[i64]) -> RatVector {
    RatVector::from_ints(x)
}

#[test]
fn closure_violation_is_named() {
    let g = BlowupGraph::new(4, 4, [(2, 1), (3, 2), (4, 3), (4, 1)]);
    let msgs: Vec<String> = validate_graph(&g).iter().map(ToString::to_string).collect();
    assert_eq!(msgs, ["ordering closure: (4,1) present but (3,1) absent"]);
    assert!(validate_graph(&BlowupGraph::new(3, 3, [(2, 1), (3, 2), (3, 1)])).is_empty());
}

#[test]
fn simplify_drops_lowest_arrow_of_complex_vertices() {
    let full = [(2, 1), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1)];
    let want = BlowupGraph::new(4, 4, [(2, 1), (3, 2), (3, 1), (4, 3), (4, 2)]);
    assert_eq!(simplify(&BlowupGraph::new(4, 4, full)), want);
    let mut more = full.to_vec();
    more.push((5, 4));
    assert_eq!(simplify(&BlowupGraph::new(5, 4, more)), want);
}

#[test]
fn sampler_is_deterministic() {
    assert_eq!(
        random_valid_graph(0, 2, LRule::AllPoints),
        BlowupGraph::chain(2, 2)
    );
    assert_eq!(
        random_valid_graph(99, 9, LRule::Uniform),
        random_valid_graph(99, 9, LRule::Uniform)
    );
}

#[test]
fn excesses_and_bounds() {
    let one = ValuationData::new(
        BlowupGraph::chain(1, 1),
        v(&[4]),
        vec![2],
        BTreeMap::new(),
        int(1),
    )
    .unwrap();
    assert_eq!(nf_excess(&one, NfMode::Log), int(1));
    assert_eq!(nf_excess(&one, NfMode::Canonical), int(2));

    let chain = ValuationData::new(
        BlowupGraph::chain(3, 2),
        v(&[3, 2, 1]),
        vec![2, 2, 1],
        [(3, 1)].into(),
        int(1),
    )
    .unwrap();
    assert_eq!(nf_excess(&chain, NfMode::Log), int(0));

    let c = ValuationData::new(
        BlowupGraph::chain(3, 2),
        v(&[2, 2, 1]),
        vec![2, 2, 1],
        [(3, 1)].into(),
        int(1),
    )
    .unwrap();
    assert_eq!(
        counting_bound(&c, &WeightFunction::new(v(&[1, 1])).unwrap()).unwrap(),
        int(9)
    );

    let twos = ValuationData::new(
        BlowupGraph::chain(3, 3),
        v(&[2, 2, 2]),
        vec![2, 2, 1],
        BTreeMap::new(),
        int(1),
    )
    .unwrap();
    assert_eq!(minimal_noncanonical_index(&twos), Some(3));

    assert_eq!(
        quadratic_min_bound(&v(&[1, 1]), &int(3), &int(1)).unwrap(),
        rat(9, 2)
    );
}

#[test]
fn compatibility_on_a_chain() {
    let g = BlowupGraph::chain(3, 3);
    let ok = WeightFunction::new(v(&[1, 1, 1])).unwrap();
    let bad = WeightFunction::new(v(&[0, 1, 1])).unwrap();
    assert!(check_compatible(&ok, &g, GraphView::Simplified).unwrap());
    assert!(!check_compatible(&bad, &g, GraphView::Simplified).unwrap());
}

#[test]
fn combiner_boundaries() {
    assert!(eight_n2_combiner(&int(1), &int(3), &int(5), &int(3), &int(1)).unwrap());
    assert!(eight_n2_combiner(&int(2), &int(4), &int(4), &int(4), &int(1)).unwrap());
}

#[test]
fn small_lps() {
    let g = BlowupGraph::chain(2, 2);
    let r = minimize_checked(&build_system_l(&g, &int(1)).unwrap(), &a13_objective(2)).unwrap();
    assert_eq!(
        (r.optimal_value, r.witness_vertex),
        (rat(8, 3), RatVector::new(vec![rat(2, 3), rat(4, 3)]))
    );

    let chain3 = BlowupGraph::chain(3, 3);
    let out = lemma14_truncate(&chain3, &int(1), &v(&[2, 1, 0])).unwrap();
    assert_eq!(out, Lemma14Outcome::Found { k: 2 });
    let out = lemma14_truncate(&g, &int(1), &v(&[1, 0])).unwrap();
    assert_eq!(out, Lemma14Outcome::DegenerateRange);
}

#[test]
fn lattice_examples() {
    let inv = check_inverse_sign(&SurfaceCase::D.lattice()).unwrap();
    assert_eq!(
        inv.matrix,
        RatMatrix::from_rows(vec![vec![rat(-1, 2), int(0)], vec![int(0), rat(-1, 2)]]).unwrap()
    );
    assert!(!inv.strictly_negative && inv.nonpositive);

    assert_eq!(
        orthogonal_shift(&SurfaceCase::A.lattice(), Sign::Plus).unwrap(),
        RatVector::new(vec![rat(1, 2)])
    );
    assert_eq!(
        orthogonal_shift(&SurfaceCase::D.lattice(), Sign::Plus).unwrap(),
        RatVector::new(vec![rat(1, 2); 2])
    );
    assert_eq!(r_pairing(&SurfaceCase::A.lattice()).unwrap().a, rat(3, 2));
    assert_eq!(r_pairing(&SurfaceCase::D.lattice()).unwrap().a, int(1));

    let a = derive_mult_bound(SurfaceCase::A, &int(1)).unwrap();
    assert_eq!((a.c, a.d), (int(32), int(16)));
    let c = derive_mult_bound(SurfaceCase::C, &int(1)).unwrap();
    assert_eq!((c.c, c.d), (int(112), int(56)));
}

#[test]
fn restriction_examples() {
    let cone = restriction_system(RestrictionKind::Cone23, 4, &int(1)).unwrap();
    let lower = cone.bounds.iter().find(|b| b.conditional).unwrap();
    assert_eq!(lower.to_string(), "nu- > 1/2*n given nu+ > n");

    let (lhs, hit) = degree_contradiction(7, &int(1), &rat(1, 2), &int(8));
    assert_eq!((lhs, hit), (rat(35, 4), true));
    let (lhs, hit) = degree_contradiction(1, &int(1), &int(0), &int(8));
    assert_eq!((lhs, hit), (int(1), false));
}

#[test]
fn square_and_count_examples() {
    let c = truncated_sqrt(&[int(1), int(0)]).unwrap();
    assert_eq!(
        (c.is_square, c.failure_index, c.root),
        (false, Some(2), vec![rat(1, 2)])
    );
    let counts: Vec<String> = [2, 4, 5]
        .iter()
        .map(|&m| line_count(m).unwrap().count.to_string())
        .collect();
    assert_eq!(counts, ["4", "240", "3360"]);
    let r = rank_condition_count(6, 3).unwrap();
    assert_eq!((r.conditions, r.threshold, r.exceeds), (10, 9, true));
    assert_eq!(Rational::from(line_count(4).unwrap().count), int(240));
}
