//! Dense matrices of `Scalar` with the exact linear algebra the certificates
//! rely on: fraction-free (Bareiss) determinants and ranks for exact kinds,
//! a PSD-oriented LDL^T factorization, and a guarded float LU route.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::{check_compatible, Scalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({i},{j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("rows have unequal lengths")]
    RaggedRows,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("float determinant {det} is below the inconclusive threshold {threshold}")]
    NumericInconclusive { det: f64, threshold: f64 },
}

/// Row-major dense matrix of scalars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::RaggedRows);
        }
        Ok(ScalarMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn check_symmetric(&self) -> Result<(), MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Err(MatrixError::NotSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn has_float(&self) -> bool {
        self.data.iter().any(|s| !s.is_exact())
    }

    /// Validates that all entries are mutually compatible scalars.
    pub fn check_kinds(&self) -> Result<(), MatrixError> {
        check_compatible(self.data.iter())?;
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ScalarMatrix {
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> ScalarMatrix {
        let k = indices.len();
        let mut m = ScalarMatrix::zero(k, k);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination. Requires exact
/// entries; every division in the update is exact by the Sylvester identity.
pub fn determinant_exact(m: &ScalarMatrix) -> Result<Scalar, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    m.check_kinds()?;
    debug_assert!(!m.has_float(), "exact elimination needs exact entries");
    let n = m.rows;
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = Scalar::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let swap = (k + 1..n).find(|&i| !a.get(i, k).is_zero());
            match swap {
                Some(i) => {
                    swap_rows(&mut a, k, i);
                    sign = -sign;
                }
                None => return Ok(Scalar::zero()),
            }
        }
        let pivot = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(a.get(k, k) * a.get(i, j)) - &(a.get(i, k) * a.get(k, j));
                a.set(i, j, num.try_div(&prev)?);
            }
            a.set(i, k, Scalar::zero());
        }
        prev = pivot;
    }
    let det = a.get(n - 1, n - 1).clone();
    Ok(if sign < 0 { det.neg() } else { det })
}

/// Exact rank by fraction-free elimination with row swaps and column skips.
pub fn rank_exact(m: &ScalarMatrix) -> Result<usize, MatrixError> {
    m.check_kinds()?;
    debug_assert!(!m.has_float(), "exact elimination needs exact entries");
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0usize;
    let mut prev = Scalar::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot_row = (rank..rows).find(|&i| !a.get(i, col).is_zero());
        let Some(pr) = pivot_row else { continue };
        if pr != rank {
            swap_rows(&mut a, rank, pr);
        }
        let pivot = a.get(rank, col).clone();
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &(a.get(rank, col) * a.get(i, j)) - &(a.get(i, col) * a.get(rank, j));
                a.set(i, j, num.try_div(&prev)?);
            }
            a.set(i, col, Scalar::zero());
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Outcome of the PSD-oriented LDL^T pass over a symmetric matrix.
///
/// `lower` is unit lower triangular and `pivots` the diagonal factors, so the
/// input equals L * diag(pivots) * L^T when `psd` holds. No pivoting is
/// needed: a PSD matrix whose Schur-complement diagonal vanishes must have a
/// vanishing row there, which is checked and reported otherwise.
#[derive(Clone, Debug)]
pub struct LdlFactorization {
    pub lower: ScalarMatrix,
    pub pivots: Vec<Scalar>,
    pub rank: usize,
    pub psd: bool,
    pub failure: Option<String>,
}

pub fn ldl_symmetric(g: &ScalarMatrix, zero_tol: f64) -> Result<LdlFactorization, MatrixError> {
    g.check_symmetric()?;
    g.check_kinds()?;
    let n = g.rows;
    let mut a = g.clone();
    let mut lower = ScalarMatrix::identity(n);
    let mut pivots = Vec::with_capacity(n);
    let mut rank = 0usize;
    let float_mode = g.has_float();
    let is_zero = |s: &Scalar| -> bool {
        if float_mode {
            s.to_f64().abs() <= zero_tol
        } else {
            s.is_zero()
        }
    };
    for k in 0..n {
        let pivot = a.get(k, k).clone();
        if is_zero(&pivot) {
            for j in k + 1..n {
                if !is_zero(a.get(k, j)) {
                    return Ok(LdlFactorization {
                        lower,
                        pivots,
                        rank,
                        psd: false,
                        failure: Some(format!(
                            "zero diagonal pivot at index {k} with nonzero off-diagonal {} at column {j}",
                            a.get(k, j)
                        )),
                    });
                }
            }
            pivots.push(Scalar::zero());
            continue;
        }
        if pivot.sign() == std::cmp::Ordering::Less {
            return Ok(LdlFactorization {
                lower,
                pivots,
                rank,
                psd: false,
                failure: Some(format!("negative pivot {pivot} at index {k}")),
            });
        }
        rank += 1;
        for i in k + 1..n {
            let l = a.get(i, k).try_div(&pivot)?;
            lower.set(i, k, l.clone());
            for j in k + 1..=i {
                let updated = a.get(i, j).try_sub(&l.try_mul(a.get(k, j))?)?;
                a.set(i, j, updated.clone());
                a.set(j, i, updated);
            }
        }
        pivots.push(pivot);
    }
    Ok(LdlFactorization {
        lower,
        pivots,
        rank,
        psd: true,
        failure: None,
    })
}

/// Rank of a float matrix by row-reduction with a relative pivot threshold.
pub fn rank_float(m: &ScalarMatrix) -> usize {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<f64>> = (0..rows)
        .map(|i| (0..cols).map(|j| m.get(i, j).to_f64()).collect())
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let tol = 1e-9 * scale;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (pi, pv) = (rank..rows)
            .map(|i| (i, a[i][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv <= tol {
            continue;
        }
        a.swap(rank, pi);
        for i in rank + 1..rows {
            let f = a[i][col] / a[rank][col];
            for j in col..cols {
                a[i][j] -= f * a[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// Float determinant by LU with partial pivoting, guarded: a result whose
/// magnitude falls below `1e-9 * scale` (scale from the Hadamard-style row
/// product) is reported as inconclusive rather than as a verdict.
pub fn determinant_float_guarded(m: &ScalarMatrix) -> Result<(bool, f64), MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).to_f64()).collect())
        .collect();
    let mut scale = 1.0f64;
    for row in &a {
        let mx = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        scale *= mx;
    }
    if scale == 0.0 {
        return Ok((false, 0.0));
    }
    let mut det = 1.0f64;
    for k in 0..n {
        let (pi, pv) = (k..n)
            .map(|i| (i, a[i][k].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pv == 0.0 {
            return Ok((false, 0.0));
        }
        if pi != k {
            a.swap(pi, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let threshold = 1e-9 * scale;
    if det.abs() < threshold {
        return Err(MatrixError::NumericInconclusive { det, threshold });
    }
    Ok((true, det))
}

fn swap_rows(m: &mut ScalarMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..m.cols {
        let a = m.get(i, c).clone();
        let b = m.get(j, c).clone();
        m.set(i, c, b);
        m.set(j, c, a);
    }
}
