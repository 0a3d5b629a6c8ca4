use alloc::format;

use super::{require_square, Givens, Matrix, C64};
use crate::{Error, Result};

/// QR factorization of a square upper Hessenberg matrix by Givens rotations.
///
/// Returns `(Q, R)` with `Q` unitary upper Hessenberg and `R` upper
/// triangular. The factors are normalized so that every nonzero diagonal
/// entry of `R` is real and positive; a column whose diagonal is exactly zero
/// keeps the rotation-produced phase. Entries below the first subdiagonal
/// must be negligible (`≤ 1e-14·‖H‖_F`) and are treated as zero.
pub fn qr_hessenberg(h: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = require_square(h, "qr_hessenberg")?;
    let fro = h.frobenius_norm();
    if h.below_subdiagonal_max() > 1e-14 * fro {
        return Err(Error::Structural(format!(
            "qr_hessenberg: input is not upper Hessenberg (entry of size {:e} below the subdiagonal)",
            h.below_subdiagonal_max()
        )));
    }

    let mut r = Matrix::from_fn(n, n, |i, j| {
        if i > j + 1 {
            C64::new(0.0, 0.0)
        } else {
            h[(i, j)]
        }
    });
    let mut q = Matrix::identity(n);

    for j in 0..n.saturating_sub(1) {
        let (g, rho) = Givens::new(r[(j, j)], r[(j + 1, j)]);
        r[(j, j)] = rho;
        r[(j + 1, j)] = C64::new(0.0, 0.0);
        for col in j + 1..n {
            let (x, y) = g.apply(r[(j, col)], r[(j + 1, col)]);
            r[(j, col)] = x;
            r[(j + 1, col)] = y;
        }
        // Q ← Q·G*; only rows 0..=j+1 can be nonzero in these two columns.
        for row in 0..=j + 1 {
            let (x, y) = g.apply_adjoint_right(q[(row, j)], q[(row, j + 1)]);
            q[(row, j)] = x;
            q[(row, j + 1)] = y;
        }
    }

    for j in 0..n {
        let d = r[(j, j)];
        let mag = d.norm();
        if mag == 0.0 {
            continue;
        }
        let phase = d / mag;
        for col in j..n {
            r[(j, col)] *= phase.conj();
        }
        r[(j, j)] = C64::new(mag, 0.0);
        for row in 0..n {
            q[(row, j)] *= phase;
        }
    }

    Ok((q, r))
}
