//! Intersection lattices on the resolution of a double-plane section: the
//! exceptional block, the orthogonal shifts `R± = C̃± + e±`, and the
//! multiplicity bound `ν₊ ≤ 2n` by elimination and by projection.

mod elimination;
mod restriction;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, RatMatrix, RatVector, Rational, SymmetricForm};
use crate::polytope::{LinearSystem, Row};

pub use elimination::{
    eliminate, fourier_motzkin, fourier_motzkin_traced, initial_rows, EliminationStep, TracedRow,
};
pub use restriction::{
    degree_contradiction, prop24_check, restriction_system, ImpliedBound, RestrictionKind,
    RestrictionSystem,
};

/// Basis `C̃₊, C̃₋, T_1..T_k` with its Gram matrix and the pairings of the
/// hyperplane class: `(H·C̃₊), (H·C̃₋), (H·T_1)..(H·T_k), (H²)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionLattice {
    labels: Vec<String>,
    form: SymmetricForm,
    h_class: RatVector,
}

impl IntersectionLattice {
    pub fn new(labels: Vec<String>, gram: RatMatrix, h_class: RatVector) -> Result<Self> {
        let form = SymmetricForm::new(gram)?;
        let dim = form.dim();
        if dim < 3 {
            return Err(Error::InvalidInput(
                "need C+, C- and at least one exceptional curve".into(),
            ));
        }
        if labels.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: labels.len(),
            });
        }
        if h_class.len() != dim + 1 {
            return Err(Error::LengthMismatch {
                expected: dim + 1,
                found: h_class.len(),
            });
        }
        if (2..dim).any(|i| !h_class[i].is_zero()) {
            return Err(Error::InvalidInput(
                "H must be orthogonal to the exceptional curves".into(),
            ));
        }
        Ok(IntersectionLattice {
            labels,
            form,
            h_class,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form(&self) -> &SymmetricForm {
        &self.form
    }

    pub fn h_class(&self) -> &RatVector {
        &self.h_class
    }

    /// Number of exceptional curves.
    pub fn k(&self) -> usize {
        self.form.dim() - 2
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// `(H²)`.
    pub fn h_square(&self) -> &Rational {
        &self.h_class[self.dim()]
    }

    fn g(&self, i: usize, j: usize) -> &Rational {
        self.form.gram().get(i, j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SurfaceCase {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl SurfaceCase {
    pub const ALL: [SurfaceCase; 6] = [
        SurfaceCase::A,
        SurfaceCase::B,
        SurfaceCase::C,
        SurfaceCase::D,
        SurfaceCase::E,
        SurfaceCase::F,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SurfaceCase::A => "A",
            SurfaceCase::B => "B",
            SurfaceCase::C => "C",
            SurfaceCase::D => "D",
            SurfaceCase::E => "E",
            SurfaceCase::F => "F",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
    }

    fn table(self) -> (&'static [&'static str], &'static [&'static [i64]]) {
        match self {
            // one ordinary double point
            SurfaceCase::A => (&["C+", "C-", "E"], &[&[-2, 2, 1], &[2, -2, 1], &[1, 1, -2]]),
            // degenerate double point, one blow-up
            SurfaceCase::B => (
                &["C+", "C-", "E+", "E-"],
                &[
                    &[-2, 2, 1, 0],
                    &[2, -2, 0, 1],
                    &[1, 0, -2, 1],
                    &[0, 1, 1, -2],
                ],
            ),
            // degenerate point whose exceptional pair meets in a node
            SurfaceCase::C => (
                &["C+", "C-", "E+", "E-", "E"],
                &[
                    &[-2, 2, 1, 0, 0],
                    &[2, -2, 0, 1, 0],
                    &[1, 0, -2, 0, 1],
                    &[0, 1, 0, -2, 1],
                    &[0, 0, 1, 1, -2],
                ],
            ),
            // two ordinary double points
            SurfaceCase::D => (
                &["C+", "C-", "E1", "E2"],
                &[
                    &[-2, 1, 1, 1],
                    &[1, -2, 1, 1],
                    &[1, 1, -2, 0],
                    &[1, 1, 0, -2],
                ],
            ),
            // one ordinary and one degenerate point
            SurfaceCase::E => (
                &["C+", "C-", "E+", "E-", "E"],
                &[
                    &[-2, 1, 1, 0, 1],
                    &[1, -2, 0, 1, 1],
                    &[1, 0, -2, 1, 0],
                    &[0, 1, 1, -2, 0],
                    &[1, 1, 0, 0, -2],
                ],
            ),
            // three ordinary double points
            SurfaceCase::F => (
                &["C+", "C-", "E1", "E2", "E3"],
                &[
                    &[-2, 0, 1, 1, 1],
                    &[0, -2, 1, 1, 1],
                    &[1, 1, -2, 0, 0],
                    &[1, 1, 0, -2, 0],
                    &[1, 1, 0, 0, -2],
                ],
            ),
        }
    }

    /// The built-in lattice. Both `C̃±` are lines, so `(H·C̃±) = 1`, and
    /// `(H²) = 2`.
    pub fn lattice(self) -> IntersectionLattice {
        let (labels, rows) = self.table();
        let dim = labels.len();
        let mut h = vec![int(0); dim + 1];
        h[0] = int(1);
        h[1] = int(1);
        h[dim] = int(2);
        IntersectionLattice::new(
            labels.iter().map(|s| s.to_string()).collect(),
            RatMatrix::from_int_rows(rows).expect("rectangular table"),
            RatVector::new(h),
        )
        .expect("built-in table")
    }
}

impl fmt::Display for SurfaceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Θ = (T_i·T_j)`, checked negative definite through the signs of its
/// leading minors.
pub fn exceptional_gram(lat: &IntersectionLattice) -> Result<RatMatrix> {
    let idx: Vec<usize> = (2..lat.dim()).collect();
    let theta = lat.form.gram().select(&idx, &idx);
    for (i, m) in theta.leading_minors()?.iter().enumerate() {
        let want = if i % 2 == 0 {
            m.is_negative()
        } else {
            m.is_positive()
        };
        if !want {
            return Err(Error::NotNegativeDefinite { index: i + 1 });
        }
    }
    Ok(theta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseSign {
    pub matrix: RatMatrix,
    /// Every entry `< 0`.
    pub strictly_negative: bool,
    /// Every entry `≤ 0` and the diagonal `< 0`. This is what the shift
    /// argument needs.
    pub nonpositive: bool,
}

pub fn check_inverse_sign(lat: &IntersectionLattice) -> Result<InverseSign> {
    let idx: Vec<usize> = (2..lat.dim()).collect();
    let matrix = lat.form.gram().select(&idx, &idx).inverse()?;
    let k = matrix.rows();
    let mut strictly_negative = true;
    let mut nonpositive = true;
    for i in 0..k {
        for j in 0..k {
            let v = matrix.get(i, j);
            strictly_negative &= v.is_negative();
            nonpositive &= if i == j {
                v.is_negative()
            } else {
                !v.is_positive()
            };
        }
    }
    Ok(InverseSign {
        matrix,
        strictly_negative,
        nonpositive,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// The `e` in the span of the `T_i` with `C̃± + e` orthogonal to every
/// `T_i`: `e = −Θ⁻¹ c` where `c_i = (C̃±·T_i)`. Its coordinates must be
/// nonnegative.
pub fn orthogonal_shift(lat: &IntersectionLattice, sign: Sign) -> Result<RatVector> {
    let idx: Vec<usize> = (2..lat.dim()).collect();
    let theta = lat.form.gram().select(&idx, &idx);
    let c: RatVector = idx
        .iter()
        .map(|&j| lat.g(sign.index(), j).clone())
        .collect();
    let e = theta.solve(&c)?.scale(&-Rational::one());
    if let Some(i) = e.iter().position(Rational::is_negative) {
        return Err(Error::NonpositiveCone {
            sign: sign.as_char(),
            index: i + 1,
        });
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RPairing {
    /// `(R₊²) = (R₋²) = −a`.
    pub a: Rational,
    /// Coordinates of `R₊`, `R₋` in the lattice basis.
    pub r_plus: RatVector,
    pub r_minus: RatVector,
    /// `[[−a, 1+a], [1+a, −a]]`.
    pub gram2: RatMatrix,
    /// `(1/(1+2a))·[[a, 1+a], [1+a, a]]`.
    pub inverse2: RatMatrix,
}

fn embed(lat: &IntersectionLattice, sign: Sign, e: &RatVector) -> RatVector {
    let mut v = RatVector::unit(lat.dim(), sign.index());
    for (i, x) in e.iter().enumerate() {
        v[i + 2] = x.clone();
    }
    v
}

/// Builds `R± = C̃± + e±` and checks `(R₊²) = (R₋²) = −a < 0`,
/// `(R₊·R₋) = 1 + a`, and that `R₊ + R₋` pairs with every basis vector as
/// `H` does and squares to `(H²)`.
pub fn r_pairing(lat: &IntersectionLattice) -> Result<RPairing> {
    let r_plus = embed(lat, Sign::Plus, &orthogonal_shift(lat, Sign::Plus)?);
    let r_minus = embed(lat, Sign::Minus, &orthogonal_shift(lat, Sign::Minus)?);
    let pair = |u: &RatVector, v: &RatVector| lat.form.pair(u, v);
    let sq_plus = pair(&r_plus, &r_plus)?;
    let sq_minus = pair(&r_minus, &r_minus)?;
    if sq_plus != sq_minus {
        return Err(Error::AsymmetricLattice);
    }
    if !sq_plus.is_negative() {
        return Err(Error::NonNegativeSquare(sq_plus));
    }
    let a = -sq_plus;
    let one = Rational::one();
    let cross = pair(&r_plus, &r_minus)?;
    if cross != &one + &a {
        return Err(Error::HypothesisViolated(format!(
            "(R+.R-) = {cross}, expected {}",
            &one + &a
        )));
    }
    let sum = r_plus.add(&r_minus)?;
    for i in 0..lat.dim() {
        let got = pair(&sum, &RatVector::unit(lat.dim(), i))?;
        if got != lat.h_class[i] {
            return Err(Error::HypothesisViolated(format!(
                "R+ + R- pairs with {} as {got}, H pairs as {}",
                lat.labels[i], lat.h_class[i]
            )));
        }
    }
    let sq = pair(&sum, &sum)?;
    if &sq != lat.h_square() {
        return Err(Error::HypothesisViolated(format!(
            "(R+ + R-)^2 = {sq}, (H^2) = {}",
            lat.h_square()
        )));
    }
    let gram2 = RatMatrix::from_rows(vec![vec![-&a, &one + &a], vec![&one + &a, -&a]])?;
    let s = (&one + int(2) * &a).recip().expect("a > 0");
    let inverse2 =
        RatMatrix::from_rows(vec![vec![a.clone(), &one + &a], vec![&one + &a, a.clone()]])?
            .scale(&s);
    debug_assert_eq!(gram2.inverse().as_ref(), Ok(&inverse2));
    Ok(RPairing {
        a,
        r_plus,
        r_minus,
        gram2,
        inverse2,
    })
}

/// `Σ_X coeff_X · X ≥ 0` pairing rows of `2nH − ν₊C̃₊ − ν₋C̃₋ − Σ b_i T_i`
/// against every basis vector. Variables: `n, ν₊, ν₋, b_1..b_k`.
pub fn pairing_system(lat: &IntersectionLattice) -> LinearSystem {
    let dim = lat.dim();
    let mut sys = LinearSystem::new(dim + 1);
    for x in 0..dim {
        let mut c = RatVector::zeros(dim + 1);
        c[0] = int(2) * &lat.h_class[x];
        for y in 0..dim {
            c[y + 1] = -lat.g(y, x);
        }
        sys.push(Row::ge(c, Rational::zero())).expect("width");
    }
    sys
}

/// Variable names of [`pairing_system`].
pub fn pairing_variables(lat: &IntersectionLattice) -> Vec<String> {
    let mut v = vec!["n".to_string(), "nu+".to_string(), "nu-".to_string()];
    v.extend((1..=lat.k()).map(|i| format!("b{i}")));
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationChain {
    pub initial: Vec<TracedRow>,
    pub steps: Vec<EliminationStep>,
    /// `c·n − d·ν₊ ≥ 0` as combined from its parents, before reduction.
    pub final_row: TracedRow,
    pub c: Rational,
    pub d: Rational,
    /// `(c/d)·n`.
    pub bound: Rational,
}

impl EliminationChain {
    pub fn ratio(&self) -> Rational {
        &self.c / &self.d
    }
}

/// Eliminates `b_k, …, b_1`, then `ν₋`, from [`pairing_system`] and keeps
/// the tightest remaining row of the form `c·n − d·ν₊ ≥ 0` (`c, d > 0`);
/// ties go to the earliest row.
pub fn derive_mult_bound(case: SurfaceCase, n: &Rational) -> Result<EliminationChain> {
    derive_mult_bound_for(&case.lattice(), n)
}

pub fn derive_mult_bound_for(lat: &IntersectionLattice, n: &Rational) -> Result<EliminationChain> {
    let sys = pairing_system(lat);
    let mut order: Vec<usize> = (3..sys.num_vars()).rev().collect();
    order.push(2);
    let (initial, steps) = fourier_motzkin_traced(&sys, &order);
    let last = &steps.last().expect("at least one step").rows;
    let mut best: Option<(Rational, usize)> = None;
    for (i, t) in last.iter().enumerate() {
        let (c, d) = (&t.row.coeffs[0], -&t.row.coeffs[1]);
        if !c.is_positive() || !d.is_positive() || !t.row.rhs.is_zero() {
            continue;
        }
        let r = c / &d;
        if best.as_ref().is_none_or(|(b, _)| r < *b) {
            best = Some((r, i));
        }
    }
    let Some((ratio, i)) = best else {
        return Err(Error::EliminationFailed(
            "no row of the form c*n - d*nu+ >= 0".into(),
        ));
    };
    let final_row = last[i].clone();
    let c = final_row.raw.coeffs[0].clone();
    let d = -&final_row.raw.coeffs[1];
    Ok(EliminationChain {
        initial,
        steps,
        final_row,
        c,
        d,
        bound: ratio * n,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionBound {
    /// Coordinates of `H` in the basis `R₊, R₋`, from the inverse 2×2 form.
    pub h_coords: (Rational, Rational),
    /// `β₊ = 2n·h₊ − ν₊ ≥ 0`, i.e. `ν₊ ≤ ratio·n`.
    pub ratio: Rational,
    pub inverse_positive: bool,
}

/// The bound by projecting onto the span of `R₊, R₋`: nonnegative pairings
/// against `C̃±, T_i` give nonnegative pairings of `2nH − ν₊R₊ − ν₋R₋`
/// against `R±`, and the entrywise positive inverse of the 2×2 form turns
/// these into `β± ≥ 0`.
pub fn projection_bound(lat: &IntersectionLattice) -> Result<ProjectionBound> {
    let inv = check_inverse_sign(lat)?;
    if !inv.nonpositive {
        return Err(Error::HypothesisViolated(
            "inverse of the exceptional block has a positive entry".into(),
        ));
    }
    let rp = r_pairing(lat)?;
    let h_pairs: RatVector = [&rp.r_plus, &rp.r_minus]
        .iter()
        .map(|r| r.iter().zip(lat.h_class.iter()).map(|(x, y)| x * y).sum())
        .collect();
    let coords = rp.inverse2.mul_vec(&h_pairs)?;
    let inverse_positive = (0..2).all(|i| (0..2).all(|j| rp.inverse2.get(i, j).is_positive()));
    Ok(ProjectionBound {
        ratio: int(2) * &coords[0],
        h_coords: (coords[0].clone(), coords[1].clone()),
        inverse_positive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn grams() {
        use SurfaceCase::*;
        assert_eq!(
            exceptional_gram(&A.lattice()).unwrap().to_string(),
            "[[-2]]"
        );
        assert_eq!(
            exceptional_gram(&C.lattice()).unwrap().to_string(),
            "[[-2,0,1],[0,-2,1],[1,1,-2]]"
        );
        assert_eq!(
            exceptional_gram(&D.lattice()).unwrap().to_string(),
            "[[-2,0],[0,-2]]"
        );
        let bad = IntersectionLattice::new(
            vec!["C+".into(), "C-".into(), "T".into()],
            RatMatrix::from_int_rows(&[&[-2, 1, 1], &[1, -2, 1], &[1, 1, 2]]).unwrap(),
            RatVector::from_ints(&[1, 1, 0, 2]),
        )
        .unwrap();
        assert_eq!(
            exceptional_gram(&bad),
            Err(Error::NotNegativeDefinite { index: 1 })
        );
    }

    #[test]
    fn inverse_signs() {
        let c = check_inverse_sign(&SurfaceCase::C.lattice()).unwrap();
        assert_eq!(
            c.matrix.to_string(),
            "[[-3/4,-1/4,-1/2],[-1/4,-3/4,-1/2],[-1/2,-1/2,-1]]"
        );
        assert!(c.strictly_negative);
        let a = check_inverse_sign(&SurfaceCase::A.lattice()).unwrap();
        assert_eq!(a.matrix.to_string(), "[[-1/2]]");
        assert!(a.strictly_negative);
        let d = check_inverse_sign(&SurfaceCase::D.lattice()).unwrap();
        assert_eq!(d.matrix.to_string(), "[[-1/2,0],[0,-1/2]]");
        assert!(!d.strictly_negative && d.nonpositive);
    }

    #[test]
    fn shifts_and_r_pairing() {
        let a = SurfaceCase::A.lattice();
        assert_eq!(
            orthogonal_shift(&a, Sign::Plus).unwrap(),
            RatVector::new(vec![rat(1, 2)])
        );
        let d = SurfaceCase::D.lattice();
        assert_eq!(
            orthogonal_shift(&d, Sign::Plus).unwrap(),
            RatVector::new(vec![rat(1, 2), rat(1, 2)])
        );
        assert_eq!(r_pairing(&a).unwrap().a, rat(3, 2));
        let rd = r_pairing(&d).unwrap();
        assert_eq!(rd.a, int(1));
        assert_eq!(rd.gram2.get(0, 1), &int(2));
        let detached = IntersectionLattice::new(
            vec!["C+".into(), "C-".into(), "T".into()],
            RatMatrix::from_int_rows(&[&[-1, 2, 0], &[2, -1, 0], &[0, 0, -2]]).unwrap(),
            RatVector::from_ints(&[1, 1, 0, 2]),
        )
        .unwrap();
        assert!(orthogonal_shift(&detached, Sign::Plus).unwrap().is_zero());
    }

    #[test]
    fn every_case_satisfies_the_invariants() {
        for case in SurfaceCase::ALL {
            let lat = case.lattice();
            exceptional_gram(&lat).unwrap();
            let inv = check_inverse_sign(&lat).unwrap();
            assert!(inv.nonpositive, "{case}");
            let rp = r_pairing(&lat).unwrap();
            assert!(rp.a.is_positive());
            let pb = projection_bound(&lat).unwrap();
            assert!(pb.inverse_positive);
            assert_eq!(pb.ratio, int(2), "{case}");
            let chain = derive_mult_bound(case, &int(1)).unwrap();
            assert_eq!(chain.ratio(), int(2), "{case}");
        }
    }

    #[test]
    fn printed_eliminations() {
        let a = derive_mult_bound(SurfaceCase::A, &int(1)).unwrap();
        assert_eq!((a.c.clone(), a.d.clone()), (int(32), int(16)));
        let c = derive_mult_bound(SurfaceCase::C, &int(1)).unwrap();
        assert_eq!((c.c.clone(), c.d.clone()), (int(112), int(56)));
        let golden = [
            (SurfaceCase::B, 66, 33),
            (SurfaceCase::D, 6, 3),
            (SurfaceCase::E, 192, 96),
            (SurfaceCase::F, 16, 8),
        ];
        for (case, cc, dd) in golden {
            let ch = derive_mult_bound(case, &int(1)).unwrap();
            assert_eq!((ch.c, ch.d), (int(cc), int(dd)), "{case}");
        }
        let first = fourier_motzkin(&pairing_system(&SurfaceCase::A.lattice()), 3);
        assert_eq!(
            first.to_string(),
            "VARS 4\nROW GE 4 3 -5 0 | 0\nROW GE 4 -5 3 0 | 0\n"
        );
    }
}
