#![allow(dead_code)]

use hritz_core::{HarmonicRitzValue, Matrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussianish(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(n: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_fn(n, n, |_, _| gaussianish(&mut r))
}

/// Irreducible upper Hessenberg with subdiagonal magnitudes in [0.5, 1.5].
pub fn random_hessenberg(n: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    Matrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            C64::from_polar(r.gen_range(0.5..1.5), r.gen_range(-3.1..3.1))
        } else if i <= j {
            gaussianish(&mut r)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Max relative distance from each `want` to its nearest unused `got`.
pub fn matched_rel_err(want: &[C64], got: &[C64]) -> f64 {
    assert_eq!(want.len(), got.len(), "multiset sizes differ");
    let mut used = vec![false; got.len()];
    let mut worst = 0.0_f64;
    let mut order: Vec<usize> = (0..want.len()).collect();
    order.sort_by(|&a, &b| want[b].norm().partial_cmp(&want[a].norm()).unwrap());
    for i in order {
        let (j, d) = got
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, g)| (j, (g - want[i]).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d / want[i].norm().max(f64::MIN_POSITIVE));
    }
    worst
}

pub fn finite_values(t: &[HarmonicRitzValue]) -> Vec<C64> {
    t.iter().filter_map(HarmonicRitzValue::finite).collect()
}

pub fn infinite_count(t: &[HarmonicRitzValue]) -> usize {
    t.iter().filter(|v| v.is_infinite()).count()
}
