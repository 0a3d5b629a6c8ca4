use alloc::format;

use super::{require_square, Matrix, C64};
use crate::{Error, Result};

/// Inverse of an upper triangular matrix by back substitution.
///
/// A diagonal entry with `|r_ii| ≤ 1e-14·max_j |r_jj|` is reported as
/// [`Error::SingularTriangular`] with its 1-based index.
pub fn upper_tri_inverse(r: &Matrix) -> Result<Matrix> {
    let n = require_square(r, "upper_tri_inverse")?;
    if r.below_diagonal_max() > 1e-14 * r.frobenius_norm() {
        return Err(Error::Structural(format!(
            "upper_tri_inverse: entry of size {:e} below the diagonal",
            r.below_diagonal_max()
        )));
    }
    let max_diag = (0..n).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    if let Some(i) = (0..n).find(|&i| r[(i, i)].norm() <= 1e-14 * max_diag) {
        return Err(Error::SingularTriangular { index: i + 1 });
    }

    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = C64::new(1.0, 0.0) / r[(j, j)];
        for i in (0..j).rev() {
            let s: C64 = (i + 1..=j).map(|l| r[(i, l)] * inv[(l, j)]).sum();
            inv[(i, j)] = -s / r[(i, i)];
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let inv = upper_tri_inverse(&Matrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert_eq!(inv, Matrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.25]]));
    }

    #[test]
    fn worked_r() {
        let r = Matrix::from_real_rows(&[&[1.6, -1.3], &[0.0, -9.375]]);
        let inv = upper_tri_inverse(&r).unwrap();
        let expected = Matrix::from_real_rows(&[&[0.625, 1.3 / -15.0], &[0.0, -1.0 / 9.375]]);
        assert!(inv.sub(&expected).frobenius_norm() < 1e-15);
        assert!(r.mul(&inv).sub(&Matrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_diagonal_reports_index() {
        let r = Matrix::from_real_rows(&[&[1.0, 5.0], &[0.0, 0.0]]);
        assert_eq!(
            upper_tri_inverse(&r),
            Err(Error::SingularTriangular { index: 2 })
        );
    }

    #[test]
    fn rejects_lower_entries() {
        let r = Matrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 1.0]]);
        assert!(matches!(upper_tri_inverse(&r), Err(Error::Structural(_))));
    }
}
