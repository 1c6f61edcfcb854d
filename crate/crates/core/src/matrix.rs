//! Dense exact-rational matrices with fraction-free Gaussian elimination.
//! No floating point; dimensions and nullspaces are exact.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use thiserror::Error;

pub type Scalar = BigRational;

pub fn scalar_from_int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses an integer or `p/q` literal.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else {
        let n: BigInt = text.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Renders a scalar as `p` or `p/q`.
pub fn scalar_to_string(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is not invertible")]
    NotInvertible,
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| scalar_to_string(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &QMatrix) -> Result<QMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = QMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a square matrix by Gauss-Jordan.
    pub fn inverse(&self) -> Result<QMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::ShapeMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: self.cols,
                right_cols: self.rows,
            });
        }
        let n = self.rows;
        let mut aug = QMatrix::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one());
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Err(MatrixError::NotInvertible);
            };
            aug.swap_rows(col, p);
            let inv = aug.get(col, col).recip();
            for c in col..2 * n {
                let v = aug.get(col, c) * &inv;
                aug.set(col, c, v);
            }
            for r in 0..n {
                if r != col && !aug.get(r, col).is_zero() {
                    let factor = aug.get(r, col).clone();
                    for c in col..2 * n {
                        let v = aug.get(r, c) - &factor * aug.get(col, c);
                        aug.set(r, c, v);
                    }
                }
            }
        }
        let mut out = QMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c).clone());
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(&self.to_integer_rows()).pivot_cols.len()
    }

    /// Basis of the right nullspace `{x : Mx = 0}`, one vector per free
    /// column (free column entry = 1, other free entries = 0), columns in
    /// ascending order. Deterministic.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let ech = bareiss_echelon(&self.to_integer_rows());
        let pivot_cols = &ech.pivot_cols;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            // back-substitute pivot rows bottom-up
            for (ri, &pc) in ech.pivot_cols.iter().enumerate().rev() {
                let row = &ech.rows[ri];
                let mut acc = Scalar::zero();
                for c in pc + 1..self.cols {
                    if !row[c].is_zero() && !x[c].is_zero() {
                        acc += BigRational::from_integer(row[c].clone()) * &x[c];
                    }
                }
                x[pc] = -acc / BigRational::from_integer(row[pc].clone());
            }
            basis.push(x);
        }
        basis
    }

    /// Rows scaled to integers (least common denominator per row).
    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                let d = self.get(r, c).denom();
                lcm = lcm_bigint(&lcm, d);
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|c| self.get(r, c).numer() * (&lcm / self.get(r, c).denom()))
                .collect();
            out.push(row);
        }
        out
    }
}

fn lcm_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / gcd_bigint(a, b) * b).abs()
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = std::mem::replace(&mut b, r);
    }
    a
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
}

/// Fraction-free (Bareiss) row echelon over the integers. Pivoting is
/// deterministic: first nonzero column, smallest row index.
fn bareiss_echelon(input: &[Vec<BigInt>]) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = input.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for r in row + 1..nrows {
            for c in col + 1..ncols {
                let v = (&pivot * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        pivot_cols.push(col);
        row += 1;
    }
    m.truncate(pivot_cols.len());
    Echelon {
        rows: m,
        pivot_cols,
    }
}
