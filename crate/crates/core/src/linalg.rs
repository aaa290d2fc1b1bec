//! Dense exact matrices over the rationals.
//!
//! Rank decisions use fraction-free (Bareiss) elimination on an integer
//! rescaling of the matrix, so no tolerance ever enters a null-space test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .filter(|&k| !self.get(i, k).is_zero())
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Principal submatrix on `indices` (rows and columns).
    pub fn principal(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), indices.len(), |i, j| {
            self.get(indices[i], indices[j]).clone()
        })
    }

    /// Integer matrix obtained by clearing denominators row by row; same
    /// rank and the same row space.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }

    /// Rank and pivot columns by Bareiss elimination with row pivoting.
    pub fn rank_profile(&self) -> RankProfile {
        let mut m = self.integer_rows();
        let mut pivot_cols = Vec::new();
        let mut pivot_rows = Vec::new();
        let mut row_of: Vec<usize> = (0..self.rows).collect();
        let mut prev = BigInt::one();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            row_of.swap(r, p);
            for i in r + 1..self.rows {
                for j in col + 1..self.cols {
                    let v = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                    // Bareiss: the division is exact.
                    m[i][j] = v / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[r][col].clone();
            pivot_cols.push(col);
            pivot_rows.push(row_of[r]);
            r += 1;
        }
        pivot_rows.sort_unstable();
        RankProfile {
            rank: r,
            pivot_cols,
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank_profile().rank
    }

    /// Reduced row echelon form over ℚ, with its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                m.data.swap(r * self.cols + j, p * self.cols + j);
            }
            let inv = m.get(r, col).recip().expect("nonzero pivot");
            for j in 0..self.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in 0..self.cols {
                    let v = m.get(i, j) - &factor * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -reduced.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Leading principal minors `det A[..k, ..k]` for `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        (1..=self.rows)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.principal(&idx).determinant()
            })
            .collect()
    }

    /// Exact determinant by Gaussian elimination over ℚ.
    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.get(i, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(col * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            for i in col + 1..n {
                if m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col) / &pivot;
                for j in col..n {
                    let v = m.get(i, j) - &factor * m.get(col, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// `A = L D Lᵀ` for a symmetric positive-definite `A`, with `L` unit
    /// lower triangular. Returns `None` if a non-positive pivot appears.
    pub fn ldl(&self) -> Option<(Self, Vec<Scalar>)> {
        assert!(self.is_symmetric(), "LDLᵀ needs a symmetric matrix");
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        let mut d: Vec<Scalar> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.get(j, j).clone();
            for (k, dk) in d.iter().enumerate() {
                dj -= &(l.get(j, k) * l.get(j, k) * dk);
            }
            if !dj.is_positive() {
                return None;
            }
            l.set(j, j, Scalar::one());
            for i in j + 1..n {
                let mut v = self.get(i, j).clone();
                for (k, dk) in d.iter().enumerate() {
                    v -= &(l.get(i, k) * l.get(j, k) * dk);
                }
                l.set(i, j, v / &dj);
            }
            d.push(dj);
        }
        Some((l, d))
    }

    /// Solves `L X = B` for unit lower triangular `L`.
    pub fn forward_substitute(&self, b: &Self) -> Self {
        let n = self.rows;
        assert_eq!(b.rows, n, "dimension mismatch");
        let mut x = b.clone();
        for j in 0..b.cols {
            for i in 0..n {
                let mut v = x.get(i, j).clone();
                for k in 0..i {
                    if !self.get(i, k).is_zero() {
                        v -= &(self.get(i, k) * x.get(k, j));
                    }
                }
                x.set(i, j, v);
            }
        }
        x
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(deserializer)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(RatMatrix::from_rows(rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Original indices of the rows that carried pivots, ascending.
    pub pivot_rows: Vec<usize>,
}
