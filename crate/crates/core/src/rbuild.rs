//! The triangular factor `R` of `H = QR`, built one column at a time.
//!
//! At a step `k` where `Q_k` is nonsingular, the harmonic Ritz values of step
//! `k` are the roots of `θ ↦ det(R_k − θ Q_k*)`. Only the last column of
//! `R_k` is unknown, and the determinant is affine in it, so requiring a root
//! at each prescribed `θ_i` gives a `k × k` linear system. At a stagnation
//! step `Q_k` is singular, the harmonic Ritz values are forced, and the new
//! column is simply `e_k`.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{condition_inf, determinant, solve_linear, unit_vector, Matrix, C64};
use crate::prescription::{validate, HarmonicRitzValue, Prescription};
use crate::qbuild::{
    complete_q, first_row_from_residuals, stagnation_steps, UnitaryHessenberg, ROW_ONE_ZERO_TOL,
};
use crate::{Error, Result};

/// `det(R_k − θ Q_k*) = Σ_j c_j r_{jk} + d` as a function of the last column
/// `(r_{1k}, …, r_{kk})` of `R_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineDetCoeffs {
    /// Cofactors of the last column.
    pub c: Vec<C64>,
    /// Constant term.
    pub d: C64,
}

impl AffineDetCoeffs {
    /// Evaluate at a trial last column.
    pub fn eval(&self, column: &[C64]) -> C64 {
        self.c.iter().zip(column).map(|(c, v)| c * v).sum::<C64>() + self.d
    }
}

/// Coefficients of the determinant as an affine function of the unknown last
/// column of `R_k`.
///
/// `qk_star` is `Q_k*` (`k × k`), `r_partial` holds the `k − 1` known columns
/// of `R_k` (`k × (k−1)`). `c_j` is the determinant with the unknown column
/// replaced by `e_j`; `d` is the determinant with it replaced by
/// `−θ·Q_k* e_k`.
pub fn det_affine_coeffs(
    qk_star: &Matrix,
    r_partial: &Matrix,
    theta: C64,
) -> Result<AffineDetCoeffs> {
    let k = qk_star.rows();
    if !qk_star.is_square() || k == 0 || r_partial.rows() != k || r_partial.cols() + 1 != k {
        return Err(Error::Structural(format!(
            "det_affine_coeffs: Q_k* is {}x{}, known part of R is {}x{}",
            qk_star.rows(),
            qk_star.cols(),
            r_partial.rows(),
            r_partial.cols()
        )));
    }
    let mut m = Matrix::from_fn(k, k, |i, j| {
        if j + 1 < k {
            r_partial[(i, j)] - theta * qk_star[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let mut c = Vec::with_capacity(k);
    for j in 0..k {
        m.set_column(k - 1, &unit_vector(k, j));
        c.push(determinant(&m)?);
    }
    let last: Vec<C64> = (0..k).map(|i| -theta * qk_star[(i, k - 1)]).collect();
    m.set_column(k - 1, &last);
    let d = determinant(&m)?;
    Ok(AffineDetCoeffs { c, d })
}

/// A new column of `R` and the condition number of the system that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PrescribedColumn {
    /// Entries `r_{1k}, …, r_{kk}`.
    pub entries: Vec<C64>,
    /// `∞`-norm condition number of the row-equilibrated system; `None` at stagnation steps.
    pub condition: Option<f64>,
}

/// Column `k` (1-based) of `R` realizing the harmonic Ritz values `thetas` at
/// step `k`, given the first `k − 1` columns in `r_partial` (`k × (k−1)`).
///
/// At a plateau step the column is `e_k`, which makes column `k` of `R⁻¹`
/// equal to `e_k` as well.
pub fn prescribe_column(
    k: usize,
    q: &UnitaryHessenberg,
    r_partial: &Matrix,
    thetas: &[HarmonicRitzValue],
    plateau: bool,
) -> Result<PrescribedColumn> {
    let qm = q.matrix();
    if k == 0 || k > q.n() || thetas.len() != k {
        return Err(Error::Argument(format!(
            "step {k} with {} harmonic Ritz values for n = {}",
            thetas.len(),
            q.n()
        )));
    }
    if plateau != (qm[(0, k - 1)].norm() <= ROW_ONE_ZERO_TOL) {
        return Err(Error::Argument(format!(
            "step {k}: plateau flag disagrees with q_1k = {}",
            qm[(0, k - 1)]
        )));
    }
    if plateau {
        return Ok(PrescribedColumn {
            entries: unit_vector(k, k - 1),
            condition: None,
        });
    }

    let qk_star = qm.principal(k).adjoint();
    let mut system = Matrix::zeros(k, k);
    let mut rhs = Vec::with_capacity(k);
    for (i, theta) in thetas.iter().enumerate() {
        let theta = theta.finite().ok_or_else(|| {
            Error::Argument(format!("step {k}: infinite value at a non-stagnant step"))
        })?;
        let coeffs = det_affine_coeffs(&qk_star, r_partial, theta)?;
        // Rows can differ by powers of |θ|; equilibrate before solving.
        let scale = coeffs.c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DegeneratePrescription { step: k });
        }
        for (j, cj) in coeffs.c.iter().enumerate() {
            system[(i, j)] = cj / scale;
        }
        rhs.push(-coeffs.d / scale);
    }

    let entries = solve_linear(&system, &rhs).map_err(|e| match e {
        Error::SingularSystem { .. } => Error::DegeneratePrescription { step: k },
        other => other,
    })?;
    let condition =
        condition_inf(&system).map_err(|_| Error::DegeneratePrescription { step: k })?;

    let diag = entries[k - 1].norm();
    let prior = (0..k - 1)
        .map(|j| r_partial[(j, j)].norm())
        .fold(0.0, f64::max);
    if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
        || diag <= 1e-10 * prior.max(diag)
        || diag == 0.0
    {
        return Err(Error::SingularR { step: k });
    }
    Ok(PrescribedColumn {
        entries,
        condition: Some(condition),
    })
}

/// The constructed pair and its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ForgeResult {
    /// `H = QR`, irreducible upper Hessenberg.
    pub h: Matrix,
    /// Unitary factor fixed by the residual norms.
    pub q: UnitaryHessenberg,
    /// Nonsingular upper triangular factor.
    pub r: Matrix,
    /// The prescription that was realized.
    pub prescription: Prescription,
    /// Per-step condition numbers of the solved systems (`None` at stagnation steps).
    pub conditions: Vec<Option<f64>>,
}

/// Build `H` such that GMRES on `{H, e₁}` has the prescribed residual norms
/// and harmonic Ritz values at every step.
///
/// Degenerate data is reported as [`Error::DegeneratePrescription`] or
/// [`Error::SingularR`] with the step; nothing is perturbed. Different sign
/// overrides give a different `Q` and may avoid the degeneracy.
pub fn forge(p: &Prescription) -> Result<ForgeResult> {
    validate(p).into_result()?;
    let n = p.n();
    let row = first_row_from_residuals(&p.schedule, p.first_row_signs.as_deref())?;
    let q = complete_q(&row, p.rho_signs.as_deref())?;

    let plateaus = p.schedule.plateau_steps();
    let stagnant = stagnation_steps(&q)?;
    if plateaus != stagnant {
        return Err(Error::Internal(format!(
            "schedule plateaus {plateaus:?} differ from stagnation steps of Q {stagnant:?}"
        )));
    }

    let mut r = Matrix::zeros(n, n);
    let mut conditions = Vec::with_capacity(n);
    for k in 1..=n {
        let partial = r.submatrix(k, k - 1);
        let col = prescribe_column(k, &q, &partial, p.ritz.step(k), plateaus.contains(&k))?;
        for (i, v) in col.entries.iter().enumerate() {
            r[(i, k - 1)] = *v;
        }
        conditions.push(col.condition);
    }

    let h = q.matrix().mul(&r);
    let fro = h.frobenius_norm();
    if let Some(i) = (1..n).find(|&i| !(h[(i, i - 1)].norm() > 1e-14 * fro)) {
        return Err(Error::Internal(format!(
            "constructed H is reducible at subdiagonal {i}"
        )));
    }
    Ok(ForgeResult {
        h,
        q,
        r,
        prescription: p.clone(),
        conditions,
    })
}
