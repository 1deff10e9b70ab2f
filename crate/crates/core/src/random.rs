//! Seeded generators for randomized campaigns.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with the campaign seed and switched to stream number `index`, so trial
//! `i` sees the same numbers whether trials run in order, out of order or in
//! parallel. Integer draws use `random_range` over inclusive ranges.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circulant::CirculantCombination;
use crate::exact::{frac, int, Mat, Rational};
use crate::operator::OperatorRep;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Square matrix with integer entries uniform in `lo..=hi`.
pub fn int_matrix(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> Mat {
    Mat::from_fn(n, n, |_, _| int(rng.random_range(lo..=hi)))
}

/// Random convex weights: integers in `0..=4`, normalized (a random label
/// gets weight one if all draws are zero).
pub fn combination(rng: &mut impl Rng, n: usize) -> CirculantCombination {
    let mut raw: Vec<i64> = (0..n).map(|_| rng.random_range(0..=4)).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[rng.random_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    let coeffs: Vec<Rational> = raw.iter().map(|&w| frac(w, total)).collect();
    CirculantCombination::new(coeffs).expect("normalized weights")
}

/// Random permutation of `1..=n`.
pub fn permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

/// Dense operator with integer representation entries in `lo..=hi`.
pub fn dense_operator(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> OperatorRep {
    let d = n * n;
    let rep = Mat::from_fn(d, d, |_, _| int(rng.random_range(lo..=hi)));
    OperatorRep::new(n, rep).expect("n^2 x n^2")
}

/// `rows x cols` integer block; one time in three it is a product of thin
/// factors so that it is rank deficient (possibly zero).
pub fn coefficient_block(rng: &mut impl Rng, rows: usize, cols: usize) -> Mat {
    if rng.random_range(0..3) == 0 {
        let r = rng.random_range(0..rows.min(cols).max(1));
        let a = Mat::from_fn(rows, r, |_, _| int(rng.random_range(-2..=2)));
        let b = Mat::from_fn(r, cols, |_, _| int(rng.random_range(-2..=2)));
        a.mul(&b).expect("conformable")
    } else {
        Mat::from_fn(rows, cols, |_, _| int(rng.random_range(-3..=3)))
    }
}
