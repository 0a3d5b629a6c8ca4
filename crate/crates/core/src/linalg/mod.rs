//! Dense complex linear algebra at desk scale.
//!
//! Storage is row-major and 0-based. Documentation elsewhere in the crate
//! talks about steps `k = 1..n`; step `k` always maps to the leading `k`
//! rows/columns here.

mod eigen;
mod lu;
mod qr;
mod triangular;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::Float;

pub use eigen::{balance, eigenvalues};
pub use lu::{condition_inf, determinant, solve_linear};
pub use qr::qr_hessenberg;
pub use triangular::upper_tri_inverse;

use crate::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data. Panics if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    /// Build from real rows; all rows must have equal length.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Diagonal matrix.
    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True for square matrices.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Overwrite column `j`.
    pub fn set_column(&mut self, j: usize, values: &[C64]) {
        assert_eq!(values.len(), self.rows);
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    /// Leading `k × k` principal submatrix.
    pub fn principal(&self, k: usize) -> Matrix {
        self.submatrix(k, k)
    }

    /// Leading `rows × cols` block.
    pub fn submatrix(&self, rows: usize, cols: usize) -> Matrix {
        assert!(rows <= self.rows && cols <= self.cols);
        Matrix::from_fn(rows, cols, |i, j| self[(i, j)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Matrix product. Panics on a dimension mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(l, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(
            self.cols,
            x.len(),
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Entrywise difference.
    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Entrywise sum.
    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Multiply every entry by `c`.
    pub fn scale(&self, c: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `‖M*M − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .sub(&Matrix::identity(self.cols))
            .frobenius_norm()
    }

    /// Largest entry magnitude strictly below the diagonal.
    pub fn below_diagonal_max(&self) -> f64 {
        self.below_band_max(0)
    }

    /// Largest entry magnitude below the first subdiagonal.
    pub fn below_subdiagonal_max(&self) -> f64 {
        self.below_band_max(1)
    }

    fn below_band_max(&self, band: usize) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i > j + band {
                    m = m.max(self[(i, j)].norm());
                }
            }
        }
        m
    }

    /// Upper triangular up to `tol` (absolute).
    pub fn is_upper_triangular(&self, tol: f64) -> bool {
        self.below_diagonal_max() <= tol
    }

    /// Upper Hessenberg up to `tol` (absolute).
    pub fn is_upper_hessenberg(&self, tol: f64) -> bool {
        self.is_square() && self.below_subdiagonal_max() <= tol
    }

    /// Upper Hessenberg with every subdiagonal magnitude above `sub_tol`.
    pub fn is_irreducible_hessenberg(&self, tol: f64, sub_tol: f64) -> bool {
        self.is_upper_hessenberg(tol) && (1..self.rows).all(|i| self[(i, i - 1)].norm() > sub_tol)
    }

    /// All entries have finite components.
    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean norm of a vector.
pub fn norm2(x: &[C64]) -> f64 {
    Float::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// `x* y`.
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `k`-th unit vector of length `n` (0-based `k`).
pub fn unit_vector(n: usize, k: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[k] = C64::new(1.0, 0.0);
    e
}

pub(crate) fn require_square(a: &Matrix, what: &str) -> Result<usize> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Structural(format!(
            "{what}: expected a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

/// Givens rotation `G = [[c, s], [−s̄, c]]` with `G·(a, b)ᵀ = (ρ, 0)ᵀ`, `c` real.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Givens {
    pub c: f64,
    pub s: C64,
}

impl Givens {
    pub fn new(a: C64, b: C64) -> (Self, C64) {
        let zero = C64::new(0.0, 0.0);
        if b == zero {
            return (Self { c: 1.0, s: zero }, a);
        }
        let abs_b = b.norm();
        if a == zero {
            return (
                Self {
                    c: 0.0,
                    s: b.conj() / abs_b,
                },
                C64::new(abs_b, 0.0),
            );
        }
        let abs_a = a.norm();
        let rho = Float::hypot(abs_a, abs_b);
        let phase = a / abs_a;
        (
            Self {
                c: abs_a / rho,
                s: phase * b.conj() / rho,
            },
            phase * rho,
        )
    }

    /// Apply `G` to the pair `(x, y)`.
    #[inline]
    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (x * self.c + self.s * y, -self.s.conj() * x + y * self.c)
    }

    /// Apply `G*` from the right to the row pair `(x, y)` (columns of a product).
    #[inline]
    pub fn apply_adjoint_right(&self, x: C64, y: C64) -> (C64, C64) {
        (x * self.c + y * self.s.conj(), -x * self.s + y * self.c)
    }
}
