use alloc::vec::Vec;

use num_traits::Float;

use super::{require_square, Givens, Matrix, C64};
use crate::{Error, Result};

const DEFLATION_TOL: f64 = 1e-14;

/// All eigenvalues of a square complex matrix, with multiplicity.
///
/// Eigenvalues isolated by exact zeros are split off first. The rest is
/// balanced (see [`balance`]), reduced to upper Hessenberg form by
/// Householder reflections and finished by single-shift complex QR
/// iteration with a Wilkinson shift. A subdiagonal entry is
/// deflated once it falls below `1e-14·(|h_ii| + |h_{i+1,i+1}|)`; trailing
/// 2×2 blocks are solved in closed form. The order of the result is
/// unspecified.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<C64>> {
    require_square(a, "eigenvalues")?;
    let (mut eigs, active) = isolate(a);
    match active.len() {
        0 => {}
        1 => eigs.push(a[(active[0], active[0])]),
        m => {
            let mut h = balance(&Matrix::from_fn(m, m, |i, j| a[(active[i], active[j])]));
            reduce_to_hessenberg(&mut h);
            eigs.extend(hessenberg_qr(&mut h)?);
        }
    }
    Ok(eigs)
}

/// Split off eigenvalues exposed by exact zeros: a row or column whose
/// off-diagonal entries within the remaining index set all vanish can be
/// permuted to the bottom or top of a block triangular form. Returns those
/// eigenvalues and the indices left over.
fn isolate(a: &Matrix) -> (Vec<C64>, Vec<usize>) {
    let zero = C64::new(0.0, 0.0);
    let mut active: Vec<usize> = (0..a.rows()).collect();
    let mut eigs = Vec::new();
    loop {
        let row = active
            .iter()
            .position(|&i| active.iter().all(|&j| j == i || a[(i, j)] == zero));
        let found = row.or_else(|| {
            active
                .iter()
                .position(|&j| active.iter().all(|&i| i == j || a[(i, j)] == zero))
        });
        match found {
            Some(p) if active.len() > 1 => {
                let i = active.remove(p);
                eigs.push(a[(i, i)]);
            }
            _ => return (eigs, active),
        }
    }
}

/// Diagonal similarity `D⁻¹AD` with power-of-two entries that roughly
/// equalizes row and column norms (Parlett–Reinsch). Exact in floating point,
/// so the spectrum is unchanged.
pub fn balance(a: &Matrix) -> Matrix {
    let n = a.rows();
    let mut b = a.clone();
    let radix = 2.0_f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let (mut col, mut row) = (0.0_f64, 0.0_f64);
            for j in 0..n {
                if j != i {
                    col += b[(j, i)].l1_norm();
                    row += b[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0_f64;
            let (mut c, mut r) = (col, row);
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if (c + r) < 0.95 * total {
                converged = false;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
        if converged {
            return b;
        }
    }
}

/// In-place unitary similarity to upper Hessenberg form.
fn reduce_to_hessenberg(h: &mut Matrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = Float::sqrt(x[0].norm_sqr() + tail);
        let phase = if x[0].norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = super::norm2(&v);
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // Left: rows k+1.., H ← (I − 2vv*)H
        for col in k..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * h[(k + 1 + t, col)])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, col)] -= *vi * s * 2.0;
            }
        }
        // Right: columns k+1.., H ← H(I − 2vv*)
        for row in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| h[(row, k + 1 + t)] * vi)
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(row, k + 1 + t)] -= s * vi.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

fn hessenberg_qr(h: &mut Matrix) -> Result<Vec<C64>> {
    let n = h.rows();
    let fro = h.frobenius_norm();
    let max_sweeps = 100 * n;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let mut eigs = Vec::with_capacity(n);
    // Active block is rows/columns lo..hi (exclusive).
    let mut hi = n;

    while hi > 0 {
        let mut lo = hi - 1;
        while lo > 0 {
            let mut s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if s == 0.0 {
                s = fro;
            }
            if h[(lo, lo - 1)].norm() < DEFLATION_TOL * s {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        match hi - lo {
            1 => {
                eigs.push(h[(lo, lo)]);
                hi -= 1;
                since_deflation = 0;
                continue;
            }
            2 => {
                let (l1, l2) = eig2x2(
                    h[(lo, lo)],
                    h[(lo, lo + 1)],
                    h[(lo + 1, lo)],
                    h[(lo + 1, lo + 1)],
                );
                eigs.push(l1);
                eigs.push(l2);
                hi -= 2;
                since_deflation = 0;
                continue;
            }
            _ => {}
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > max_sweeps {
            return Err(Error::Convergence {
                iterations: sweeps - 1,
            });
        }

        let last = hi - 1;
        let shift = if since_deflation % 11 == 0 {
            // exceptional shift to break cycles
            let t = h[(last, last - 1)].re.abs() + h[(last - 1, last - 2)].re.abs();
            h[(last, last)] + C64::new(t, 0.0)
        } else {
            wilkinson_shift(
                h[(last - 1, last - 1)],
                h[(last - 1, last)],
                h[(last, last - 1)],
                h[(last, last)],
            )
        };
        qr_sweep(h, lo, hi, shift);
    }

    Ok(eigs)
}

/// One explicit shifted QR step `H − σI = QR`, `H ← RQ + σI` on the block `lo..hi`.
fn qr_sweep(h: &mut Matrix, lo: usize, hi: usize, shift: C64) {
    for i in lo..hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo - 1);
    for j in lo..hi - 1 {
        let (g, rho) = Givens::new(h[(j, j)], h[(j + 1, j)]);
        h[(j, j)] = rho;
        h[(j + 1, j)] = C64::new(0.0, 0.0);
        for col in j + 1..hi {
            let (x, y) = g.apply(h[(j, col)], h[(j + 1, col)]);
            h[(j, col)] = x;
            h[(j + 1, col)] = y;
        }
        rotations.push(g);
    }
    for (t, g) in rotations.iter().enumerate() {
        let j = lo + t;
        for row in lo..=(j + 1).min(hi - 1) {
            let (x, y) = g.apply_adjoint_right(h[(row, j)], h[(row, j + 1)]);
            h[(row, j)] = x;
            h[(row, j + 1)] = y;
        }
    }
    for i in lo..hi {
        h[(i, i)] += shift;
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let (l1, l2) = eig2x2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Both eigenvalues of `[[a, b], [c, d]]`, avoiding cancellation in the smaller root.
pub(crate) fn eig2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let big = if (mean.conj() * disc).re >= 0.0 {
        mean + disc
    } else {
        mean - disc
    };
    let zero = C64::new(0.0, 0.0);
    if big == zero {
        return (zero, zero);
    }
    let det = a * d - b * c;
    (big, det / big)
}
