use alloc::format;
use alloc::vec::Vec;

use super::{require_square, Matrix, C64};
use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-14;

struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    odd_swaps: bool,
}

/// Partial-pivoting LU. Stops at the first column whose best pivot is at most
/// `threshold` and returns its 0-based index as the error.
fn factor(a: &Matrix, threshold: f64) -> core::result::Result<Lu, usize> {
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd_swaps = false;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= threshold {
            return Err(k);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            odd_swaps = !odd_swaps;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            if m == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= m * u;
            }
        }
    }
    Ok(Lu {
        lu,
        perm,
        odd_swaps,
    })
}

impl Lu {
    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

/// Solve `A x = b` by LU with partial pivoting.
///
/// Fails with [`Error::SingularSystem`] (1-based pivot index) when a pivot
/// magnitude drops below `1e-14·‖A‖_F`.
pub fn solve_linear(a: &Matrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = require_square(a, "solve_linear")?;
    if b.len() != n {
        return Err(Error::Structural(format!(
            "solve_linear: right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    let threshold = PIVOT_TOL * a.frobenius_norm();
    let lu = factor(a, threshold).map_err(|k| Error::SingularSystem { pivot: k + 1 })?;
    Ok(lu.solve(b))
}

/// Determinant via LU with partial pivoting. Singular input yields zero.
pub fn determinant(a: &Matrix) -> Result<C64> {
    require_square(a, "determinant")?;
    match factor(a, 0.0) {
        Err(_) => Ok(C64::new(0.0, 0.0)),
        Ok(lu) => {
            let mut det: C64 = (0..a.rows()).map(|i| lu.lu[(i, i)]).product();
            if lu.odd_swaps {
                det = -det;
            }
            Ok(det)
        }
    }
}

/// Condition number `‖A‖_∞·‖A⁻¹‖_∞`, with the inverse formed column by column.
pub fn condition_inf(a: &Matrix) -> Result<f64> {
    let n = require_square(a, "condition_inf")?;
    let threshold = PIVOT_TOL * a.frobenius_norm();
    let lu = factor(a, threshold).map_err(|k| Error::SingularSystem { pivot: k + 1 })?;
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        inv.set_column(j, &lu.solve(&super::unit_vector(n, j)));
    }
    Ok(inf_norm(a) * inf_norm(&inv))
}

fn inf_norm(a: &Matrix) -> f64 {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_solve() {
        let x = solve_linear(&Matrix::identity(2), &[c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(x, alloc::vec![c(3.0, 0.0), c(0.0, 4.0)]);
    }

    #[test]
    fn worked_forge_system() {
        let a = Matrix::from_real_rows(&[&[1.8, -0.8], &[3.0, -2.4]]);
        let x = solve_linear(&a, &[c(5.16, 0.0), c(18.6, 0.0)]).unwrap();
        assert!((x[0] - c(-1.3, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(-9.375, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let a = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(
            solve_linear(&a, &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::SingularSystem { pivot: 2 })
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&Matrix::identity(3)).unwrap(), c(1.0, 0.0));
        let q2 = Matrix::from_real_rows(&[&[0.8, 0.0], &[0.6, 0.0]]);
        assert_eq!(determinant(&q2).unwrap(), c(0.0, 0.0));
        let h = Matrix::from_real_rows(&[&[1.28, -6.665], &[0.96, 6.72]]);
        assert!((determinant(&h).unwrap() - c(15.0, 0.0)).norm() < 1e-12);
        // a single row swap flips the sign
        let p = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(determinant(&p).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn condition_of_scaled_identity() {
        let a = Matrix::identity(3).scale(c(0.0, 5.0));
        assert!((condition_inf(&a).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_linear(&Matrix::identity(2), &[c(1.0, 0.0)]),
            Err(Error::Structural(_))
        ));
    }
}
