//! Dense matrices over exact rationals, with fraction-free rank computation.
//!
//! Ranks are computed by Bareiss elimination over arbitrary-precision
//! integers after clearing denominators row by row, so no intermediate
//! rational arithmetic occurs on the hot path. Reduced echelon form (used
//! for kernel bases) runs over `BigRational` directly; the involved sizes
//! here are tiny.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{rational_from_json, rational_to_json};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        RatMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| BigRational::from_integer(BigInt::from(x)))
            })
            .collect();
        RatMat::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigRational::zero();
                for t in 0..self.cols {
                    acc += self.at(r, t) * other.at(t, c);
                }
                *out.at_mut(r, c) = acc;
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.at(r, c) == &(-self.at(c, r).clone())))
    }

    /// Exact rank: clears denominators per row, then runs fraction-free
    /// Bareiss elimination over `BigInt`.
    pub fn rank(&self) -> usize {
        let cleared: Vec<Vec<BigInt>> = (0..self.rows).map(|r| clear_row(self.row(r))).collect();
        bareiss_rank(cleared, self.cols)
    }

    /// Rank of the submatrix consisting of the given columns (in order,
    /// repetitions allowed).
    pub fn rank_of_columns(&self, cols: &[usize]) -> usize {
        let cleared: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| {
                let picked: Vec<BigRational> =
                    cols.iter().map(|&c| self.at(r, c).clone()).collect();
                clear_row(&picked)
            })
            .collect();
        bareiss_rank(cleared, cols.len())
    }

    /// Reduced row echelon form; returns the reduced matrix and the pivot
    /// column indices.
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.at(row, col).clone();
            for c in col..m.cols {
                let v = m.at(row, c).clone() / inv.clone();
                *m.at_mut(row, c) = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c).clone() - factor.clone() * m.at(row, c);
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Canonical basis of the right kernel `{x : M x = 0}`: the basis
    /// vectors obtained from the free columns are themselves put into
    /// reduced echelon form (as rows) and ordered by pivot, so the result
    /// does not depend on the elimination path.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut raw = Vec::with_capacity(free.len());
        for &q in &free {
            let mut v = vec![BigRational::zero(); self.cols];
            v[q] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.at(i, q).clone();
            }
            raw.push(v);
        }
        if raw.is_empty() {
            return raw;
        }
        let k = RatMat::new(raw.len(), self.cols, raw.concat());
        let (kr, kp) = k.rref();
        (0..kp.len()).map(|i| kr.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let i = a * self.cols + c;
            let j = b * self.cols + c;
            self.data.swap(i, j);
        }
    }

    /// Parses a matrix from a JSON array of arrays whose entries are
    /// integers or `"p/q"` strings.
    pub fn from_json(v: &serde_json::Value) -> Result<RatMat> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON array of rows".into()))?;
        if rows.is_empty() {
            return Err(Error::Parse("matrix has no rows".into()));
        }
        let mut data = Vec::new();
        let mut cols = None;
        for row in rows {
            let entries = row
                .as_array()
                .ok_or_else(|| Error::Parse("expected each row to be a JSON array".into()))?;
            match cols {
                None => cols = Some(entries.len()),
                Some(c) if c != entries.len() => {
                    return Err(Error::Parse("ragged matrix rows".into()))
                }
                _ => {}
            }
            for e in entries {
                data.push(rational_from_json(e)?);
            }
        }
        let cols = cols.unwrap();
        if cols == 0 {
            return Err(Error::Parse("matrix has no columns".into()));
        }
        Ok(RatMat::new(rows.len(), cols, data))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| {
                    serde_json::Value::Array(self.row(r).iter().map(rational_to_json).collect())
                })
                .collect(),
        )
    }
}

/// Multiplies a row through by the lcm of its denominators.
fn clear_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for e in row {
        l = num::integer::lcm(l, e.denom().clone());
    }
    row.iter()
        .map(|e| e.numer() * (&l / e.denom()))
        .collect()
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let t = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                debug_assert!((&t % &prev).is_zero(), "Bareiss division not exact");
                m[r][c] = t / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::big;
    use proptest::prelude::*;

    /// Independent rank oracle: plain rational Gaussian elimination.
    fn rank_oracle(m: &RatMat) -> usize {
        let (_, pivots) = m.rref();
        pivots.len()
    }

    #[test]
    fn rank_of_simple_matrices() {
        let m = RatMat::from_int_rows(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_of_columns(&[1, 2, 3]), 1);
        assert_eq!(m.rank_of_columns(&[0, 1]), 2);
        assert_eq!(RatMat::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let m = RatMat::from_int_rows(&[vec![1, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![big(1), big(0), big(-1)]);
        assert_eq!(k[1], vec![big(0), big(1), big(-1)]);
    }

    #[test]
    fn kernel_matches_spec_example() {
        let m = RatMat::from_int_rows(&[vec![1, 0, 0, 0], vec![0, 1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![big(0), big(1), big(-1), big(0)]);
        assert_eq!(k[1], vec![big(0), big(0), big(0), big(1)]);
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let m = RatMat::from_int_rows(&[vec![2, -3, 5, 7], vec![0, 4, -1, 2], vec![1, 1, 1, 1]]);
        for v in m.kernel_basis() {
            for r in 0..m.rows() {
                let dot: BigRational = (0..m.cols()).map(|c| m.at(r, c) * &v[c]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let v: serde_json::Value = serde_json::json!([[1, "1/2"], ["-3/4", 0]]);
        let m = RatMat::from_json(&v).unwrap();
        let back = RatMat::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
        assert!(RatMat::from_json(&serde_json::json!([[1, "1/0"]])).is_err());
    }

    proptest! {
        #[test]
        fn bareiss_rank_agrees_with_gauss(rows in 1usize..5, cols in 1usize..6,
                                          seed in proptest::collection::vec(-9i64..=9, 30)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|r| (0..cols).map(|c| seed[(r * cols + c) % seed.len()]).collect())
                .collect();
            let m = RatMat::from_int_rows(&data);
            prop_assert_eq!(m.rank(), rank_oracle(&m));
        }
    }
}
