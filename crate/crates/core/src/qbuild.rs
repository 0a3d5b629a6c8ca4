//! The unitary factor `Q` of `H = QR`, determined by the residual norms.
//!
//! GMRES on `{H, e₁}` has `‖r_k‖² = Σ_{l>k} |q_{1l}|²`, so the first row of
//! `Q` is fixed in modulus by the schedule; the remaining rows of a unitary
//! irreducible Hessenberg matrix follow from the first row up to a unimodular
//! factor `ρ_i` per row.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::{Matrix, C64};
use crate::prescription::{ResidualSchedule, PLATEAU_TOL, UNIT_TOL};
use crate::{Error, Result};

/// Row-one entries at or below this magnitude count as zero.
pub const ROW_ONE_ZERO_TOL: f64 = 1e-13;

/// A unitary irreducible upper Hessenberg matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryHessenberg(Matrix);

impl UnitaryHessenberg {
    /// Check and wrap: `‖Q*Q − I‖_F ≤ 1e-12·n`, upper Hessenberg and every
    /// subdiagonal magnitude above `1e-13`.
    pub fn new(q: Matrix) -> Result<Self> {
        if !q.is_square() || q.rows() == 0 {
            return Err(Error::NotUnitaryHessenberg(format!(
                "shape {}x{}",
                q.rows(),
                q.cols()
            )));
        }
        let n = q.rows() as f64;
        let defect = q.unitarity_defect();
        if !(defect <= 1e-12 * n) {
            return Err(Error::NotUnitaryHessenberg(format!(
                "unitarity defect {defect:e}"
            )));
        }
        if !q.is_upper_hessenberg(1e-13) {
            return Err(Error::NotUnitaryHessenberg("not upper Hessenberg".into()));
        }
        if let Some(i) = (1..q.rows()).find(|&i| q[(i, i - 1)].norm() <= ROW_ONE_ZERO_TOL) {
            return Err(Error::NotUnitaryHessenberg(format!(
                "subdiagonal entry {} vanishes",
                i
            )));
        }
        Ok(Self(q))
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Unwrap.
    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Order `n`.
    pub fn n(&self) -> usize {
        self.0.rows()
    }
}

/// First row of `Q` from the residual norms: `|q_{1l}|² = ‖r_{l−1}‖² − ‖r_l‖²`
/// with `‖r_n‖ = 0`, phases from `signs` (default `1`). Plateau steps give
/// exact zeros.
pub fn first_row_from_residuals(s: &ResidualSchedule, signs: Option<&[C64]>) -> Result<Vec<C64>> {
    let violations = s.violations();
    if !violations.is_empty() {
        return Err(Error::Admissibility(violations));
    }
    let n = s.len();
    if let Some(sg) = signs {
        if sg.len() != n || sg.iter().any(|z| (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::Argument(
                "first-row signs must be n unimodular values".into(),
            ));
        }
    }
    let norms = s.norms();
    Ok((0..n)
        .map(|l| {
            let next = if l + 1 < n { norms[l + 1] } else { 0.0 };
            let gap = norms[l] * norms[l] - next * next;
            let mag = if gap <= PLATEAU_TOL {
                0.0
            } else {
                Float::sqrt(gap)
            };
            let sigma = signs.map_or(C64::new(1.0, 0.0), |sg| sg[l]);
            sigma * mag
        })
        .collect())
}

/// Fill rows `2…n` of `Q` from its first row.
///
/// With `t_i = (Σ_{l>i} |q_{1l}|²)^{1/2}` (so `t_0 = 1`):
/// `q_{i+1,i} = ρ_i t_i / t_{i−1}` and
/// `q_{i+1,j} = −ρ_i q̄_{1i} q_{1j} / (t_{i−1} t_i)` for `j > i`.
pub fn complete_q(first_row: &[C64], rhos: Option<&[C64]>) -> Result<UnitaryHessenberg> {
    let n = first_row.len();
    if n == 0 {
        return Err(Error::Argument("first row is empty".into()));
    }
    if let Some(r) = rhos {
        if r.len() != n - 1 || r.iter().any(|z| (z.norm() - 1.0).abs() > UNIT_TOL) {
            return Err(Error::Argument(
                "rho signs must be n-1 unimodular values".into(),
            ));
        }
    }
    let total: f64 = first_row.iter().map(|z| z.norm_sqr()).sum();
    if (total - 1.0).abs() > UNIT_TOL {
        return Err(Error::Argument(format!(
            "first row has squared norm {total}, expected 1"
        )));
    }

    // Tail sums accumulated from the end; tails[i] = Σ_{l>i} |q_{1l}|² (0-based l).
    let mut tails = alloc::vec![0.0_f64; n + 1];
    for i in (0..n).rev() {
        tails[i] = tails[i + 1] + first_row[i].norm_sqr();
    }
    // t[i] for i = 0..n−1 in 1-based step terms is sqrt(tails[i]); t[0] is the full norm.
    let t: Vec<f64> = tails.iter().map(|&x| Float::sqrt(x)).collect();
    if let Some(i) = (1..n).find(|&i| tails[i] <= PLATEAU_TOL) {
        return Err(Error::PrematureTermination { step: i });
    }

    let mut q = Matrix::zeros(n, n);
    for (j, z) in first_row.iter().enumerate() {
        q[(0, j)] = *z;
    }
    for i in 1..n {
        // Row i+1 in 1-based terms; uses t_{i−1} = t[i−1], t_i = t[i].
        let rho = rhos.map_or(C64::new(1.0, 0.0), |r| r[i - 1]);
        q[(i, i - 1)] = rho * (t[i] / t[i - 1]);
        let denom = t[i - 1] * t[i];
        let lead = first_row[i - 1].conj();
        for j in i..n {
            q[(i, j)] = -rho * lead * first_row[j] / denom;
        }
    }
    UnitaryHessenberg::new(q)
}

/// Residual norms `‖r_k‖ = (Σ_{l>k} |q_{1l}|²)^{1/2}`, `k = 0…n−1`.
pub fn residuals_from_q(q: &UnitaryHessenberg) -> ResidualSchedule {
    let n = q.n();
    let m = q.matrix();
    let mut tail = 0.0_f64;
    let mut norms = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        tail += m[(0, k)].norm_sqr();
        norms[k] = Float::sqrt(tail);
    }
    ResidualSchedule::new(norms)
}

/// Steps `k` at which GMRES stagnates, i.e. `|q_{1k}| ≤ 1e-13`.
///
/// Computed twice: from row one, and as the columns supported only on row
/// `k+1`. The two sets must coincide.
pub fn stagnation_steps(q: &UnitaryHessenberg) -> Result<Vec<usize>> {
    let n = q.n();
    let m = q.matrix();
    let by_row: Vec<usize> = (1..=n)
        .filter(|&k| m[(0, k - 1)].norm() <= ROW_ONE_ZERO_TOL)
        .collect();
    let by_column: Vec<usize> = (1..n)
        .filter(|&k| {
            (0..n)
                .filter(|&i| i != k)
                .all(|i| m[(i, k - 1)].norm() <= ROW_ONE_ZERO_TOL)
        })
        .collect();
    if by_row != by_column {
        return Err(Error::Internal(format!(
            "stagnation from row one {by_row:?} disagrees with column structure {by_column:?}"
        )));
    }
    Ok(by_row)
}
