//! Independent measurement of GMRES behaviour on arbitrary `{A, b}`.
//!
//! Nothing here looks at how a matrix was built: Arnoldi produces the
//! Hessenberg matrix, GMRES residuals come from progressive Givens
//! rotations, and harmonic Ritz values from the spectrum of `Q_k* R_k⁻¹`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::{
    balance, dot, eigenvalues, norm2, qr_hessenberg, upper_tri_inverse, Givens, Matrix, C64,
};
use crate::prescription::{canonicalize, HarmonicRitzValue, Prescription};
use crate::qbuild::{stagnation_steps, UnitaryHessenberg, ROW_ONE_ZERO_TOL};
use crate::{Error, Result};

/// `μ` values of `M = Q_k* R_k⁻¹` at or below this multiple of the Frobenius
/// norm of the balanced `M` are `θ = ∞`.
pub const INFINITE_MU_TOL: f64 = 1e-8;

/// Output of [`arnoldi`]: `A V = V H` on the Krylov space reached.
#[derive(Clone, Debug, PartialEq)]
pub struct ArnoldiDecomposition {
    /// Orthonormal basis, `n × m`.
    pub v: Matrix,
    /// Upper Hessenberg projection, `m × m`.
    pub h: Matrix,
    /// Step `m < n` at which the Krylov space became invariant, if it did.
    pub breakdown_step: Option<usize>,
}

/// Arnoldi process with modified Gram–Schmidt and one full
/// reorthogonalization pass. `b` must have unit norm.
///
/// Subdiagonal entries of `H` carry the phase of the largest entry of each
/// new direction, so they are complex in general.
///
/// Stops with `breakdown_step = j` when the new direction at step `j < n`
/// has norm below `1e-12·‖A‖_F`.
pub fn arnoldi(a: &Matrix, b: &[C64]) -> Result<ArnoldiDecomposition> {
    let n = crate::linalg::require_square(a, "arnoldi")?;
    if b.len() != n {
        return Err(Error::Structural(format!(
            "arnoldi: b has length {}, expected {n}",
            b.len()
        )));
    }
    let bn = norm2(b);
    if (bn - 1.0).abs() > 1e-12 {
        return Err(Error::Argument(format!("arnoldi: ‖b‖ = {bn}, expected 1")));
    }
    let threshold = 1e-12 * a.frobenius_norm();

    let mut basis: Vec<Vec<C64>> = alloc::vec![b.to_vec()];
    let mut h = Matrix::zeros(n, n);
    let mut breakdown_step = None;
    for j in 0..n {
        let mut w = a.mul_vec(&basis[j]);
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let coef = dot(v, &w);
                h[(i, j)] += coef;
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= coef * vi;
                }
            }
        }
        if j + 1 == n {
            break;
        }
        let beta = norm2(&w);
        if beta < threshold {
            breakdown_step = Some(j + 1);
            break;
        }
        // Phase chosen so the largest entry of the new vector is real positive:
        // a Hessenberg `A` with `b = e₁` then gives `V = I` and `H = A` exactly.
        let pivot = w.iter().fold(
            w[0],
            |best, z| if z.norm() > best.norm() { *z } else { best },
        );
        let hsub = pivot / pivot.norm() * beta;
        h[(j + 1, j)] = hsub;
        basis.push(w.into_iter().map(|z| z / hsub).collect());
    }

    let m = basis.len();
    let v = Matrix::from_fn(n, m, |i, j| basis[j][i]);
    Ok(ArnoldiDecomposition {
        v,
        h: h.submatrix(m, m),
        breakdown_step,
    })
}

/// GMRES residual norms from the Arnoldi Hessenberg matrix (`x₀ = 0`, unit `b`).
fn residuals_from_arnoldi(h: &Matrix) -> Vec<f64> {
    let m = h.rows();
    let mut hist = Vec::with_capacity(m + 1);
    hist.push(1.0);
    let mut cols = h.clone();
    let mut rotations: Vec<Givens> = Vec::with_capacity(m);
    let mut g = C64::new(1.0, 0.0);
    for k in 0..m {
        for (j, rot) in rotations.iter().enumerate() {
            let (x, y) = rot.apply(cols[(j, k)], cols[(j + 1, k)]);
            cols[(j, k)] = x;
            cols[(j + 1, k)] = y;
        }
        let sub = if k + 1 < m {
            cols[(k + 1, k)]
        } else {
            C64::new(0.0, 0.0)
        };
        let diag = cols[(k, k)];
        if k + 1 == m {
            // Square system: exact unless the projected matrix is singular.
            hist.push(if diag.norm() == 0.0 { g.norm() } else { 0.0 });
            break;
        }
        let (rot, rho) = Givens::new(diag, sub);
        cols[(k, k)] = rho;
        cols[(k + 1, k)] = C64::new(0.0, 0.0);
        let (_, next) = rot.apply(g, C64::new(0.0, 0.0));
        g = next;
        hist.push(g.norm());
        rotations.push(rot);
    }
    hist
}

/// GMRES residual history `‖r₀‖, …, ‖r_m‖` for `A x = b` with `x₀ = 0`.
///
/// Length `n + 1` without breakdown; truncated at the breakdown step
/// otherwise (the exact solution is reached there).
pub fn gmres_history(a: &Matrix, b: &[C64]) -> Result<Vec<f64>> {
    let dec = arnoldi(a, b)?;
    Ok(residuals_from_arnoldi(&dec.h))
}

/// Harmonic Ritz values at step `k` of Arnoldi on `{H, e₁}`, in canonical order.
///
/// Solves `R_k z = θ Q_k* z` through the ordinary eigenproblem of
/// `M = Q_k* R_k⁻¹`: each eigenvalue `μ` gives `θ = 1/μ`, and `μ` with
/// `|μ| ≤ 1e-8·‖D⁻¹MD‖_F` gives `θ = ∞`, where `D⁻¹MD` is the balanced form
/// of `M`. For badly scaled `M` the raw `‖M‖_F` can exceed `1e8·|μ|` for
/// perfectly ordinary finite values.
///
/// Columns of `Q` with `|q_{1k}| ≤ 1e-13` are set to exact unit vectors
/// first. Inside a stagnation run `μ = 0` is defective, and rounding noise
/// would otherwise move it to roughly `ε^{1/m}` for a run of length `m`.
pub fn harmonic_ritz(h: &Matrix, k: usize) -> Result<Vec<HarmonicRitzValue>> {
    let n = crate::linalg::require_square(h, "harmonic_ritz")?;
    if k == 0 || k > n {
        return Err(Error::Argument(format!(
            "harmonic_ritz: step {k} outside 1..={n}"
        )));
    }
    let (mut q, r) = qr_hessenberg(h)?;
    // stagnant step: column k of Q is a multiple of e_{k+1}
    for j in 0..n.saturating_sub(1) {
        if q[(0, j)].norm() <= ROW_ONE_ZERO_TOL {
            let phase = q[(j + 1, j)] / q[(j + 1, j)].norm();
            for i in 0..n {
                q[(i, j)] = if i == j + 1 {
                    phase
                } else {
                    C64::new(0.0, 0.0)
                };
            }
        }
    }
    let rk_inv = upper_tri_inverse(&r.principal(k))
        .map_err(|e| Error::Internal(format!("harmonic_ritz: R_{k} is singular ({e})")))?;
    let m = q.principal(k).adjoint().mul(&rk_inv);
    let cutoff = INFINITE_MU_TOL * balance(&m).frobenius_norm();
    let mut out: Vec<HarmonicRitzValue> = eigenvalues(&m)?
        .into_iter()
        .map(|mu| {
            if mu.norm() <= cutoff {
                HarmonicRitzValue::Infinite
            } else {
                HarmonicRitzValue::Finite(mu.inv())
            }
        })
        .collect();
    canonicalize(&mut out);
    Ok(out)
}

/// Everything measured about GMRES on one `{A, b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    /// `‖r₀‖, …, ‖r_m‖` (`m = n` without breakdown).
    pub residual_history: Vec<f64>,
    /// Harmonic Ritz values per step `1..=m`, canonical order.
    pub harmonic_ritz_per_step: Vec<Vec<HarmonicRitzValue>>,
    /// Steps at which GMRES stagnates.
    pub stagnation_steps: Vec<usize>,
    /// Arnoldi breakdown step, if any.
    pub breakdown_step: Option<usize>,
}

/// Run Arnoldi, GMRES and harmonic Ritz extraction on `{A, b}`.
///
/// The GMRES history is cross-checked against the tail sums of row one of
/// the unitary QR factor of the Arnoldi Hessenberg matrix (to `1e-10`).
pub fn analyze(a: &Matrix, b: &[C64]) -> Result<AnalysisReport> {
    let dec = arnoldi(a, b)?;
    let history = residuals_from_arnoldi(&dec.h);
    let m = dec.h.rows();

    let (q, _) = qr_hessenberg(&dec.h)?;
    let mut tail = 0.0_f64;
    for k in (0..m).rev() {
        tail += q[(0, k)].norm_sqr();
        let formula = Float::sqrt(tail);
        if (formula - history[k]).abs() > 1e-10 {
            return Err(Error::Internal(format!(
                "GMRES residual {} at step {k} disagrees with row one of Q ({formula})",
                history[k]
            )));
        }
    }
    let q = UnitaryHessenberg::new(q).map_err(|e| Error::Internal(format!("analyze: {e}")))?;
    let stagnation = stagnation_steps(&q)?;

    let harmonic = (1..=m)
        .map(|k| harmonic_ritz(&dec.h, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalysisReport {
        residual_history: history,
        harmonic_ritz_per_step: harmonic,
        stagnation_steps: stagnation,
        breakdown_step: dec.breakdown_step,
    })
}

/// Comparison at one step (`step = 0` covers `‖r₀‖` only).
#[derive(Clone, Debug, PartialEq)]
pub struct StepDetail {
    /// Step index.
    pub step: usize,
    /// Prescribed residual norm.
    pub residual_expected: f64,
    /// Measured residual norm (`NaN` if the run ended earlier).
    pub residual_measured: f64,
    /// Absolute residual error.
    pub residual_err: f64,
    /// Max relative error over paired finite harmonic Ritz values (`0` at step 0).
    pub ritz_rel_err: f64,
    /// Prescribed number of `∞` values.
    pub infinite_expected: usize,
    /// Measured number of `∞` values.
    pub infinite_measured: usize,
    /// Both comparisons within tolerance.
    pub ok: bool,
}

/// Overall outcome of [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every step agrees.
    Pass,
    /// First step that disagrees.
    Fail {
        /// Step index.
        step: usize,
    },
}

/// Result of comparing a prescription against measured GMRES behaviour.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// Largest absolute residual-norm error.
    pub residual_max_abs_err: f64,
    /// Largest relative harmonic Ritz error under the pairing.
    pub ritz_max_rel_err: f64,
    /// Per-step comparisons `0..=n`.
    pub steps: Vec<StepDetail>,
    /// Pass, or the first failing step.
    pub verdict: Verdict,
}

/// Compare GMRES on `{H, e₁}` with a prescription.
///
/// Residuals are compared entrywise (absolute error, terminal `‖r_n‖ = 0`
/// included); harmonic Ritz values per step by nearest pairing of the finite
/// values (relative error) and an exact count of `∞`.
pub fn verify(p: &Prescription, h: &Matrix, tol_res: f64, tol_ritz: f64) -> Result<VerifyReport> {
    let n = p.n();
    if h.rows() != n || h.cols() != n || p.ritz.len() != n {
        return Err(Error::Structural(format!(
            "verify: prescription has n = {n}, matrix is {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let report = analyze(h, &crate::linalg::unit_vector(n, 0))?;

    let mut steps = Vec::with_capacity(n + 1);
    let mut res_max = 0.0_f64;
    let mut ritz_max = 0.0_f64;
    let mut verdict = Verdict::Pass;
    for k in 0..=n {
        let expected = if k < n { p.schedule.norms()[k] } else { 0.0 };
        let measured = report.residual_history.get(k).copied().unwrap_or(f64::NAN);
        let residual_err = if measured.is_nan() {
            f64::INFINITY
        } else {
            (measured - expected).abs()
        };

        let (ritz_rel_err, inf_expected, inf_measured) = if k == 0 {
            (0.0, 0, 0)
        } else {
            let prescribed = p.ritz.step(k);
            let inf_expected = prescribed.iter().filter(|v| v.is_infinite()).count();
            match report.harmonic_ritz_per_step.get(k - 1) {
                None => (f64::INFINITY, inf_expected, 0),
                Some(got) => {
                    let inf_measured = got.iter().filter(|v| v.is_infinite()).count();
                    (pairing_error(prescribed, got), inf_expected, inf_measured)
                }
            }
        };

        let ok =
            residual_err <= tol_res && ritz_rel_err <= tol_ritz && inf_expected == inf_measured;
        res_max = res_max.max(residual_err);
        ritz_max = ritz_max.max(ritz_rel_err);
        if !ok && verdict == Verdict::Pass {
            verdict = Verdict::Fail { step: k };
        }
        steps.push(StepDetail {
            step: k,
            residual_expected: expected,
            residual_measured: measured,
            residual_err,
            ritz_rel_err,
            infinite_expected: inf_expected,
            infinite_measured: inf_measured,
            ok,
        });
    }

    Ok(VerifyReport {
        residual_max_abs_err: res_max,
        ritz_max_rel_err: ritz_max,
        steps,
        verdict,
    })
}

/// Max relative error between the finite parts of two tuples: canonical
/// order pairing followed by one pairwise-swap repair sweep.
fn pairing_error(prescribed: &[HarmonicRitzValue], measured: &[HarmonicRitzValue]) -> f64 {
    let mut want: Vec<HarmonicRitzValue> = prescribed
        .iter()
        .filter(|v| !v.is_infinite())
        .copied()
        .collect();
    let mut got: Vec<HarmonicRitzValue> = measured
        .iter()
        .filter(|v| !v.is_infinite())
        .copied()
        .collect();
    if want.len() != got.len() {
        return f64::INFINITY;
    }
    canonicalize(&mut want);
    canonicalize(&mut got);
    let want: Vec<C64> = want.iter().filter_map(HarmonicRitzValue::finite).collect();
    let mut got: Vec<C64> = got.iter().filter_map(HarmonicRitzValue::finite).collect();
    let rel = |w: C64, g: C64| (g - w).norm() / w.norm();
    for i in 0..want.len() {
        for j in i + 1..want.len() {
            let current = rel(want[i], got[i]).max(rel(want[j], got[j]));
            let swapped = rel(want[i], got[j]).max(rel(want[j], got[i]));
            if swapped < current {
                got.swap(i, j);
            }
        }
    }
    want.iter()
        .zip(&got)
        .map(|(w, g)| rel(*w, *g))
        .fold(0.0, f64::max)
}
