use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// Fixed-length vector of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatVector(Vec<Rational>);

impl RatVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        RatVector(vec![Rational::zero(); len])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RatVector(values.iter().map(|&v| Rational::from(v)).collect())
    }

    /// The `i`-th standard basis vector of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &RatVector) -> Result<Rational> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn add(&self, other: &RatVector) -> Result<RatVector> {
        check_len(self.len(), other.len())?;
        Ok(RatVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &RatVector) -> Result<RatVector> {
        check_len(self.len(), other.len())?;
        Ok(RatVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, s: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: &Rational, other: &RatVector) -> Result<RatVector> {
        check_len(self.len(), other.len())?;
        Ok(RatVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        ))
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl FromIterator<Rational> for RatVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a RatVector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_len(c, row.len())?;
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> RatVector {
        RatVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> RatVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).into_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v: Rational = (0..self.cols)
                    .map(|k| self.get(i, k) * other.get(k, j))
                    .sum();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &RatVector) -> Result<RatVector> {
        check_len(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|k| self.get(i, k) * &v[k]).sum())
            .collect())
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.row_vectors();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                sub_row_multiple(&mut a, r, c, &f, c..n);
            }
        }
        Ok(det)
    }

    /// Determinants of the leading principal submatrices of orders 1..=n.
    pub fn leading_minors(&self) -> Result<Vec<Rational>> {
        self.require_square()?;
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.select(&idx, &idx).determinant()
            })
            .collect()
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.row_vectors();
        let mut inv = Self::identity(n).row_vectors();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(p, c);
            inv.swap(p, c);
            let pivot = a[c][c].recip().expect("nonzero pivot");
            for k in 0..n {
                a[c][k] *= &pivot;
                inv[c][k] *= &pivot;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let d = &f * &a[c][k];
                    a[r][k] -= d;
                    let d = &f * &inv[c][k];
                    inv[r][k] -= d;
                }
            }
        }
        RatMatrix::from_rows(inv)
    }

    /// Unique solution of `self * x = rhs`.
    pub fn solve(&self, rhs: &RatVector) -> Result<RatVector> {
        self.require_square()?;
        check_len(self.rows, rhs.len())?;
        solve_square(self.row_vectors(), rhs.as_slice().to_vec()).ok_or(Error::SingularMatrix)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut a = self.row_vectors();
        let pivots = rref_in_place(&mut a, self.cols);
        let m = if a.is_empty() {
            RatMatrix::zeros(0, self.cols)
        } else {
            RatMatrix::from_rows(a).expect("rectangular")
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<RatVector> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = RatVector::zeros(self.cols);
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }
}

/// `a[dst][cols] -= f * a[src][cols]`.
fn sub_row_multiple(
    a: &mut [Vec<Rational>],
    dst: usize,
    src: usize,
    f: &Rational,
    cols: std::ops::Range<usize>,
) {
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d[cols.clone()].iter_mut().zip(&s[cols]) {
        *x -= f * y;
    }
}

/// Gaussian elimination on an owned square system; `None` if singular.
pub(crate) fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<RatVector> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        b.swap(p, c);
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            sub_row_multiple(&mut a, r, c, &f, c..n);
            let d = &f * &b[c];
            b[r] -= d;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for k in r + 1..n {
            acc -= &a[r][k] * &x[k];
        }
        x[r] = acc / &a[r][r];
    }
    Some(RatVector::new(x))
}

pub(crate) fn rref_in_place(a: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][c].recip().expect("nonzero pivot");
        for x in &mut a[row][c..cols] {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r == row || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            sub_row_multiple(a, r, row, &f, c..cols);
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricForm {
    gram: RatMatrix,
}

impl SymmetricForm {
    pub fn new(gram: RatMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidInput("Gram matrix is not symmetric".into()));
        }
        Ok(SymmetricForm { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// `uᵀ G v`.
    pub fn pair(&self, u: &RatVector, v: &RatVector) -> Result<Rational> {
        check_len(self.dim(), u.len())?;
        check_len(self.dim(), v.len())?;
        let gv = self.gram.mul_vec(v)?;
        u.dot(&gv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn theta_c() -> RatMatrix {
        RatMatrix::from_int_rows(&[&[-2, 0, 1], &[0, -2, 1], &[1, 1, -2]]).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let m = RatMatrix::from_int_rows(&[&[-2]]).unwrap();
        assert_eq!(m.inverse().unwrap().get(0, 0), &rat(-1, 2));
        assert_eq!(
            RatMatrix::identity(3).inverse().unwrap(),
            RatMatrix::identity(3)
        );
        let expect = RatMatrix::from_rows(vec![
            vec![rat(-3, 4), rat(-1, 4), rat(-1, 2)],
            vec![rat(-1, 4), rat(-3, 4), rat(-1, 2)],
            vec![rat(-1, 2), rat(-1, 2), int(-1)],
        ])
        .unwrap();
        assert_eq!(theta_c().inverse().unwrap(), expect);
        let singular = RatMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(singular.inverse(), Err(Error::SingularMatrix));
        assert_eq!(singular.determinant().unwrap(), int(0));
        assert!(matches!(
            RatMatrix::zeros(2, 3).inverse(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn solve_examples() {
        let x = RatMatrix::identity(2)
            .solve(&RatVector::from_ints(&[3, 5]))
            .unwrap();
        assert_eq!(x, RatVector::from_ints(&[3, 5]));
        let m = RatMatrix::from_int_rows(&[&[-2]]).unwrap();
        assert_eq!(m.solve(&RatVector::from_ints(&[-1])).unwrap()[0], rat(1, 2));
        let rhs = RatVector::from_ints(&[-1, 0, 0]);
        let x = theta_c().solve(&rhs).unwrap();
        assert_eq!(x, theta_c().inverse().unwrap().mul_vec(&rhs).unwrap());
    }

    #[test]
    fn determinant_and_minors() {
        assert_eq!(theta_c().determinant().unwrap(), int(-4));
        assert_eq!(
            theta_c().leading_minors().unwrap(),
            vec![int(-2), int(4), int(-4)]
        );
    }

    #[test]
    fn nullspace_basis() {
        let m = RatMatrix::from_int_rows(&[&[1, 1, 0], &[0, 0, 1]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns, vec![RatVector::from_ints(&[-1, 1, 0])]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn pairing() {
        let g = RatMatrix::from_int_rows(&[&[-2, 2, 1], &[2, -2, 1], &[1, 1, -2]]).unwrap();
        let f = SymmetricForm::new(g).unwrap();
        let e = RatVector::unit(3, 2);
        assert_eq!(f.pair(&e, &e).unwrap(), int(-2));
        assert_eq!(
            f.pair(&RatVector::unit(3, 0), &RatVector::unit(3, 1))
                .unwrap(),
            int(2)
        );
        assert_eq!(f.pair(&RatVector::zeros(3), &e).unwrap(), int(0));
        assert!(matches!(
            f.pair(&RatVector::zeros(2), &e),
            Err(Error::DimensionMismatch { .. })
        ));
        let asym = RatMatrix::from_int_rows(&[&[1, 2], &[3, 4]]).unwrap();
        assert!(SymmetricForm::new(asym).is_err());
    }
}
