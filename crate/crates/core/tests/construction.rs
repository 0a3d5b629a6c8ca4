mod common;

use common::*;
use hritz_core::linalg::{determinant, eigenvalues, upper_tri_inverse};
use hritz_core::prescription::canonicalize;
use hritz_core::qbuild::ROW_ONE_ZERO_TOL;
use hritz_core::*;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::Rng;

fn fin(re: f64, im: f64) -> HarmonicRitzValue {
    HarmonicRitzValue::Finite(c(re, im))
}

fn worked() -> Prescription {
    Prescription::new(
        ResidualSchedule::new(vec![1.0, 0.6]),
        RitzPrescription::new(vec![
            vec![fin(2.0, 0.0)],
            vec![fin(3.0, 0.0), fin(5.0, 0.0)],
        ]),
    )
}

fn plateau_example() -> Prescription {
    Prescription::new(
        ResidualSchedule::new(vec![1.0, 0.6, 0.6]),
        RitzPrescription::new(vec![
            vec![fin(2.0, 0.0)],
            vec![fin(2.0, 0.0), HarmonicRitzValue::Infinite],
            vec![fin(1.0, 0.0), fin(4.0, 0.0), fin(7.0, 0.0)],
        ]),
    )
}

/// Legal plateau set for `n` drawn from `mask` bits.
fn plateaus(n: usize, mask: u32) -> Vec<usize> {
    (1..n).filter(|k| mask & (1 << k) != 0).collect()
}

fn unimodular(seed: u64, len: usize) -> Vec<C64> {
    let mut r = rng(seed);
    (0..len)
        .map(|_| C64::from_polar(1.0, r.gen_range(-3.1..3.1)))
        .collect()
}

#[test]
fn worked_instance_end_to_end() {
    let f = forge(&worked()).unwrap();
    let expected = Matrix::from_real_rows(&[&[1.28, -6.665], &[0.96, 6.72]]);
    assert!(f.h.sub(&expected).frobenius_norm() < 1e-12);
    assert!((f.h.trace() - c(8.0, 0.0)).norm() < 1e-12);
    assert!((determinant(&f.h).unwrap() - c(15.0, 0.0)).norm() < 1e-12);
    let hist = gmres_history(&f.h, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!((hist[1] - 0.6).abs() < 1e-14 && hist[2].abs() < 1e-14);
}

#[test]
fn plateau_instance_end_to_end() {
    let f = forge(&plateau_example()).unwrap();
    for i in 0..3 {
        assert_eq!(f.r[(i, 1)], if i == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
    }
    let step2 = harmonic_ritz(&f.h, 2).unwrap();
    assert!((step2[0].finite().unwrap() - c(2.0, 0.0)).norm() < 1e-12);
    assert!(step2[1].is_infinite());
    let v = verify(&f.prescription, &f.h, 1e-8, 1e-6).unwrap();
    assert_eq!(v.verdict, Verdict::Pass);
}

#[test]
fn validate_examples() {
    assert!(validate(&worked()).is_ok());
    assert!(validate(&plateau_example()).is_ok());
    let mut bad = plateau_example();
    bad.ritz = RitzPrescription::new(vec![
        vec![fin(2.0, 0.0)],
        vec![fin(7.0, 0.0), HarmonicRitzValue::Infinite],
        vec![fin(1.0, 0.0), fin(4.0, 0.0), fin(7.0, 0.0)],
    ]);
    let report = validate(&bad);
    assert!(!report.is_ok());
    assert!(report.violations.iter().any(|v| v.step == Some(2)));
}

#[test]
fn random_prescription_examples() {
    let p = random_prescription(1, &[], 7).unwrap();
    assert_eq!(p.schedule.norms(), &[1.0]);
    assert!(p.ritz.step(1)[0].finite().is_some());
    let p = random_prescription(5, &[3], 1).unwrap();
    assert!(validate(&p).is_ok());
    assert_eq!(infinite_count(p.ritz.step(3)), 1);
    assert!(matches!(
        random_prescription(5, &[5], 1),
        Err(Error::Argument(_))
    ));
}

#[test]
fn total_stagnation_at_step_one() {
    let q = complete_q(&[c(0.0, 0.0), c(1.0, 0.0)], None).unwrap();
    assert_eq!(stagnation_steps(&q).unwrap(), vec![1]);
}

#[test]
fn forge_degeneracy_is_reported_not_repaired() {
    // θ with q̄₁₁·θ = 0 has no solution; a zero value is caught earlier.
    let mut p = worked();
    p.ritz = RitzPrescription::new(vec![
        vec![fin(0.0, 0.0)],
        vec![fin(3.0, 0.0), fin(5.0, 0.0)],
    ]);
    assert!(matches!(forge(&p), Err(Error::Admissibility(_))));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    #[test]
    fn generator_output_is_admissible(n in 1usize..14, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        prop_assert!(validate(&p).is_ok());
        prop_assert_eq!(p.schedule.plateau_steps(), plateaus(n, mask));
    }

    #[test]
    fn validate_ignores_stored_order(n in 1usize..9, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let mut shuffled: Vec<Vec<HarmonicRitzValue>> = p.ritz.steps().to_vec();
        for t in shuffled.iter_mut() {
            t.reverse();
        }
        let mut q = p.clone();
        q.ritz = RitzPrescription::new(shuffled);
        prop_assert_eq!(validate(&p).is_ok(), validate(&q).is_ok());
    }

    #[test]
    fn perturbing_a_plateau_value_breaks_admissibility(n in 3usize..10, seed in any::<u64>(), pick in any::<usize>()) {
        // first plateau at step 2 so that a finite value repeats there
        let p = random_prescription(n, &[2], seed).unwrap();
        let mut steps = p.ritz.steps().to_vec();
        let finite: Vec<usize> = (0..steps[1].len()).filter(|&i| !steps[1][i].is_infinite()).collect();
        let i = finite[pick % finite.len()];
        let z = steps[1][i].finite().unwrap();
        steps[1][i] = HarmonicRitzValue::Finite(z * (1.0 + 1e-6));
        let mut q = p.clone();
        q.ritz = RitzPrescription::new(steps);
        prop_assert!(!validate(&q).is_ok());
    }

    #[test]
    fn schedule_round_trips_through_q(n in 1usize..21, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let row = first_row_from_residuals(&p.schedule, None).unwrap();
        let q = complete_q(&row, None).unwrap();
        let back = residuals_from_q(&q);
        for (a, b) in back.norms().iter().zip(p.schedule.norms()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert!(q.matrix().unitarity_defect() <= 1e-12 * n as f64);
        prop_assert!(q.matrix().is_irreducible_hessenberg(0.0, ROW_ONE_ZERO_TOL));
    }

    #[test]
    fn signs_do_not_change_residuals_or_stagnation(n in 1usize..13, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let plain = complete_q(&first_row_from_residuals(&p.schedule, None).unwrap(), None).unwrap();
        let sigma = unimodular(seed, n);
        let rho = unimodular(seed ^ 0xabc, n - 1);
        let signed = complete_q(&first_row_from_residuals(&p.schedule, Some(&sigma)).unwrap(), Some(&rho)).unwrap();
        for (a, b) in residuals_from_q(&plain).norms().iter().zip(residuals_from_q(&signed).norms()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        prop_assert_eq!(stagnation_steps(&plain).unwrap(), stagnation_steps(&signed).unwrap());
    }

    #[test]
    fn zero_in_row_one_iff_column_is_a_unit_vector(n in 2usize..13, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let q = complete_q(&first_row_from_residuals(&p.schedule, None).unwrap(), None).unwrap();
        let m = q.matrix();
        for k in 1..n {
            let row_zero = m[(0, k - 1)].norm() <= ROW_ONE_ZERO_TOL;
            let unit_column = (0..n).filter(|&i| i != k).all(|i| m[(i, k - 1)].norm() <= ROW_ONE_ZERO_TOL);
            prop_assert_eq!(row_zero, unit_column);
        }
        prop_assert_eq!(stagnation_steps(&q).unwrap(), p.schedule.plateau_steps());
    }

    #[test]
    fn leading_block_of_q_is_singular_exactly_at_plateaus(n in 2usize..13, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let q = complete_q(&first_row_from_residuals(&p.schedule, None).unwrap(), None).unwrap();
        let plateau = p.schedule.plateau_steps();
        for k in 1..=n {
            let d = determinant(&q.matrix().principal(k)).unwrap().norm();
            prop_assert_eq!(d <= 1e-12, plateau.contains(&k), "k = {}, |det Q_k| = {:e}", k, d);
        }
    }

    #[test]
    fn determinant_is_affine_in_the_last_column(k in 1usize..9, seed in any::<u64>()) {
        let q = random_hessenberg(k, seed).adjoint();
        let fixed = random_matrix(k, seed ^ 5).submatrix(k, k - 1);
        let mut r = rng(seed ^ 9);
        let theta = C64::from_polar(r.gen_range(0.5..5.0), r.gen_range(-3.1..3.1));
        let coeffs = det_affine_coeffs(&q, &fixed, theta).unwrap();
        for trial in 0..3u64 {
            let v = random_matrix(k, seed.wrapping_add(trial + 100)).column(0);
            let full = Matrix::from_fn(k, k, |i, j| {
                let rij = if j + 1 < k { fixed[(i, j)] } else { v[i] };
                rij - theta * q[(i, j)]
            });
            let scale = full.frobenius_norm().powi(k as i32).max(1.0);
            prop_assert!((determinant(&full).unwrap() - coeffs.eval(&v)).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn prescribed_values_are_determinant_roots(n in 1usize..9, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let f = forge(&p).unwrap();
        let qs = f.q.matrix().adjoint();
        for k in 1..=n {
            if p.schedule.is_plateau(k) {
                continue;
            }
            let rk = f.r.principal(k);
            let qk = qs.principal(k);
            let scale = rk.frobenius_norm().powi(k as i32).max(1.0);
            for theta in finite_values(p.ritz.step(k)) {
                let d = determinant(&rk.sub(&qk.scale(theta))).unwrap();
                prop_assert!(d.norm() <= 1e-9 * scale, "k = {}, |det| = {:e}", k, d.norm());
            }
        }
    }

    #[test]
    fn plateau_columns_are_unit_vectors(n in 2usize..11, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let f = forge(&p).unwrap();
        let rinv = upper_tri_inverse(&f.r).unwrap();
        for k in p.schedule.plateau_steps() {
            for i in 0..n {
                let want = if i + 1 == k { c(1.0, 0.0) } else { c(0.0, 0.0) };
                prop_assert_eq!(f.r[(i, k - 1)], want);
                prop_assert_eq!(rinv[(i, k - 1)], want);
            }
        }
    }

    #[test]
    fn forge_output_invariants(n in 1usize..13, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let f = forge(&p).unwrap();
        prop_assert!(f.q.matrix().mul(&f.r).sub(&f.h).frobenius_norm() <= 1e-12 * n as f64 * f.h.frobenius_norm());
        let dmax = (0..n).map(|i| f.r[(i, i)].norm()).fold(0.0, f64::max);
        prop_assert!((0..n).all(|i| f.r[(i, i)].norm() > 1e-10 * dmax));
        prop_assert!(f.h.is_upper_hessenberg(0.0));
        prop_assert!((1..n).all(|i| f.h[(i, i - 1)].norm() > 0.0));
        prop_assert_eq!(f.conditions.len(), n);
    }

    #[test]
    fn spectrum_of_forged_matrix_is_the_last_tuple(n in 1usize..9, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let f = forge(&p).unwrap();
        let want = finite_values(p.ritz.step(n));
        prop_assert!(matched_rel_err(&want, &eigenvalues(&f.h).unwrap()) <= 1e-8);
    }

    #[test]
    fn forged_matrix_verifies(n in 1usize..10, mask in any::<u32>(), seed in any::<u64>()) {
        let p = random_prescription(n, &plateaus(n, mask), seed).unwrap();
        let f = forge(&p).unwrap();
        let v = verify(&p, &f.h, 1e-8, 1e-6).unwrap();
        prop_assert_eq!(v.verdict, Verdict::Pass, "residual {:e}, ritz {:e}", v.residual_max_abs_err, v.ritz_max_rel_err);
    }

    #[test]
    fn canonical_order_is_idempotent(seed in any::<u64>(), k in 1usize..8) {
        let p = random_prescription(k, &[], seed).unwrap();
        let mut t = p.ritz.step(k).to_vec();
        t.reverse();
        canonicalize(&mut t);
        prop_assert_eq!(&t[..], p.ritz.step(k));
    }
}
