//! Exact linear algebra over the rationals.
//!
//! Everything here works on [`QMatrix`], a dense row-major matrix of
//! arbitrary-precision fractions. Subspaces are represented by the nonzero
//! rows of their reduced row echelon form, which makes equality of row spaces
//! a plain matrix comparison.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction; always stored reduced with a positive denominator.
pub type Rational = num::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn q(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Integer vector as rationals.
pub fn qvec(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| q(v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    pub rref: QMatrix,
    pub pivot_columns: Vec<usize>,
    pub rank: usize,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
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

    /// Builds a matrix from row vectors; `cols` fixes the width even when there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(QMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Integer literal constructor. Panics on ragged input.
    pub fn from_i64(cols: usize, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns over {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(QMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for i in 0..self.cols {
                    let a = self.get(r, i);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * other.get(i, c);
                }
                out.data[r * other.cols + c] = acc;
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    /// Submatrix with the given rows and columns, in the order supplied.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<QMatrix> {
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::Dimension(format!("row index {r} out of range")));
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::Dimension(format!("column index {c} out of range")));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Ok(QMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<QMatrix> {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Gauss-Jordan elimination to reduced row echelon form.
///
/// The output depends only on the row space of `m`, so two matrices with the
/// same row space produce identical `rref` matrices.
pub fn rref(m: &QMatrix) -> RrefResult {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivot_columns = Vec::new();
    let mut pivot_row = 0;

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if found != pivot_row {
            for c in 0..cols {
                a.data.swap(found * cols + c, pivot_row * cols + c);
            }
        }
        let pivot = a.get(pivot_row, col).clone();
        if !pivot.is_one() {
            for c in col..cols {
                let idx = pivot_row * cols + c;
                a.data[idx] = &a.data[idx] / &pivot;
            }
        }
        for r in 0..rows {
            if r == pivot_row || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..cols {
                let sub = &factor * a.get(pivot_row, c);
                let idx = r * cols + c;
                a.data[idx] -= sub;
            }
        }
        pivot_columns.push(col);
        pivot_row += 1;
    }

    let rank = pivot_columns.len();
    RrefResult {
        rref: a,
        pivot_columns,
        rank,
    }
}

pub fn rank_of(m: &QMatrix) -> usize {
    rref(m).rank
}

/// Canonical basis of the row space: the nonzero rows of the RREF.
pub fn row_space_basis(m: &QMatrix) -> QMatrix {
    let r = rref(m);
    let keep: Vec<usize> = (0..r.rank).collect();
    r.rref.select_rows(&keep).expect("rank rows are in range")
}

/// Basis of `{x : m·xᵀ = 0}`, one row per free column of the RREF.
pub fn kernel_basis(m: &QMatrix) -> QMatrix {
    let r = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivot_columns {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = QMatrix::zeros(free.len(), cols);
    for (i, &fc) in free.iter().enumerate() {
        out.set(i, fc, Rational::one());
        for (row, &pc) in r.pivot_columns.iter().enumerate() {
            let v = r.rref.get(row, fc);
            if !v.is_zero() {
                out.set(i, pc, -v.clone());
            }
        }
    }
    out
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is scaled to integers first; the scale factors are divided out at
/// the end.
pub fn det(m: &QMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }

    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let row = m.row(r);
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }

    let d = bareiss(&mut a);
    Ok(Rational::new(d, scale))
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinant of the submatrix on `row_set` × `col_set`, indices taken in increasing order.
pub fn minor(m: &QMatrix, row_set: &[usize], col_set: &[usize]) -> Result<Rational> {
    if row_set.len() != col_set.len() {
        return Err(Error::Dimension(format!(
            "minor with {} rows and {} columns",
            row_set.len(),
            col_set.len()
        )));
    }
    let rows = sorted_unique(row_set, "row")?;
    let cols = sorted_unique(col_set, "column")?;
    det(&m.select(&rows, &cols)?)
}

fn sorted_unique(set: &[usize], what: &str) -> Result<Vec<usize>> {
    let mut v = set.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Dimension(format!("repeated {what} index in minor")));
    }
    Ok(v)
}

/// Projective normal form of a vector: integer entries with gcd 1 and a
/// positive first nonzero entry. `None` for the zero vector.
pub fn projective_normalize(v: &[Rational]) -> Option<Vec<Rational>> {
    let first = v.iter().find(|x| !x.is_zero())?;
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if first.is_negative() {
        g = -g;
    }
    Some(
        ints.into_iter()
            .map(|x| Rational::from_integer(x / &g))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &QMatrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for c in 0..n {
            if m.get(0, c).is_zero() {
                continue;
            }
            let rest_rows: Vec<usize> = (1..n).collect();
            let rest_cols: Vec<usize> = (0..n).filter(|&j| j != c).collect();
            let sub = cofactor_det(&m.select(&rest_rows, &rest_cols).unwrap());
            let term = m.get(0, c) * sub;
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn rref_examples() {
        let id = QMatrix::identity(2);
        let r = rref(&id);
        assert_eq!(r.rref, id);
        assert_eq!(r.pivot_columns, vec![0, 1]);
        assert_eq!(r.rank, 2);

        let m = QMatrix::from_i64(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let r = rref(&m);
        assert_eq!(r.rref, m);
        assert_eq!(r.rank, 2);

        let z = QMatrix::zeros(2, 3);
        let r = rref(&z);
        assert_eq!(r.rref, z);
        assert!(r.pivot_columns.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_is_canonical_for_row_space() {
        let a = QMatrix::from_i64(3, &[&[1, 2, 3], &[4, 5, 6]]);
        let b = QMatrix::from_i64(3, &[&[5, 7, 9], &[3, 3, 3]]);
        assert_eq!(rref(&a).rref, rref(&b).rref);
        assert_eq!(rref(&rref(&a).rref), rref(&a));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&QMatrix::identity(4)).unwrap(), q(1));
        assert_eq!(
            det(&QMatrix::from_i64(2, &[&[1, 0], &[0, 1]])).unwrap(),
            q(1)
        );
        assert_eq!(
            det(&QMatrix::from_i64(2, &[&[1, 2], &[3, 4]])).unwrap(),
            q(-2)
        );
        assert!(matches!(
            det(&QMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn det_with_fractions_and_row_swaps() {
        let half = Rational::new(1.into(), 2.into());
        let third = Rational::new(1.into(), 3.into());
        let m = QMatrix::from_rows(
            3,
            vec![
                vec![q(0), half.clone(), q(1)],
                vec![third.clone(), q(0), q(2)],
                vec![q(1), q(1), q(0)],
            ],
        )
        .unwrap();
        assert_eq!(det(&m).unwrap(), cofactor_det(&m));
    }

    #[test]
    fn minor_examples() {
        let m = QMatrix::from_i64(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        assert_eq!(minor(&m, &[0, 1], &[2, 3]).unwrap(), q(1));
        assert_eq!(minor(&m, &[0, 1], &[0, 2]).unwrap(), q(0));
        let sq = QMatrix::from_i64(2, &[&[1, 2], &[3, 4]]);
        assert_eq!(minor(&sq, &[0, 1], &[0, 1]).unwrap(), det(&sq).unwrap());
        assert!(minor(&m, &[0], &[0, 1]).is_err());
        assert!(minor(&m, &[0, 1], &[0, 9]).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&QMatrix::zeros(3, 3)), 0);
        assert_eq!(rank_of(&QMatrix::from_i64(3, &[&[1, 1, 1]])), 1);
        assert_eq!(
            rank_of(&QMatrix::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]])),
            2
        );
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&QMatrix::identity(3));
        assert_eq!((k.rows(), k.cols()), (0, 3));

        let row = QMatrix::from_i64(3, &[&[1, 1, 1]]);
        let k = kernel_basis(&row);
        assert_eq!(k.rows(), 2);
        assert!(row.mul(&k.transpose()).unwrap().is_zero());
        assert_eq!(rank_of(&k), 2);

        assert_eq!(kernel_basis(&QMatrix::zeros(1, 2)), QMatrix::identity(2));
    }

    #[test]
    fn normalize_projective() {
        let v = vec![q(0), q(-2), Rational::new(4.into(), 3.into())];
        assert_eq!(projective_normalize(&v).unwrap(), vec![q(0), q(3), q(-2)]);
        assert!(projective_normalize(&[q(0), q(0)]).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = QMatrix> {
            (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-4i64..=4, r * c)
                    .prop_map(move |v| QMatrix::new(r, c, v.into_iter().map(q).collect()).unwrap())
            })
        }

        fn square(max: usize) -> impl Strategy<Value = QMatrix> {
            (1..=max).prop_flat_map(|n| {
                proptest::collection::vec(-5i64..=5, n * n)
                    .prop_map(move |v| QMatrix::new(n, n, v.into_iter().map(q).collect()).unwrap())
            })
        }

        proptest! {
            #[test]
            fn bareiss_matches_cofactor(m in square(5)) {
                prop_assert_eq!(det(&m).unwrap(), cofactor_det(&m));
            }

            #[test]
            fn det_nonzero_iff_full_rank(m in square(4)) {
                prop_assert_eq!(!det(&m).unwrap().is_zero(), rank_of(&m) == m.rows());
            }

            #[test]
            fn kernel_is_annihilated_and_complementary(m in matrix(4, 5)) {
                let k = kernel_basis(&m);
                prop_assert_eq!(k.rows(), m.cols() - rank_of(&m));
                prop_assert_eq!(rank_of(&k), k.rows());
                prop_assert!(m.mul(&k.transpose()).unwrap().is_zero());
            }

            #[test]
            fn rref_idempotent_and_row_space_preserving(m in matrix(4, 5)) {
                let r = rref(&m);
                prop_assert_eq!(&rref(&r.rref), &r);
                prop_assert_eq!(rank_of(&m.vstack(&r.rref).unwrap()), r.rank);
                for (i, &p) in r.pivot_columns.iter().enumerate() {
                    prop_assert!(r.rref.get(i, p).is_one());
                    for j in 0..m.rows() {
                        if j != i {
                            prop_assert!(r.rref.get(j, p).is_zero());
                        }
                    }
                }
            }
        }
    }
}
