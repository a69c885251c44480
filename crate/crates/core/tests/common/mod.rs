#![allow(dead_code)]

use latglue::lattice::Lattice;
use latglue::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x1a77_1ce5;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

/// Random nonsingular symmetric Gram with entries in `[-bound, bound]`.
pub fn random_lattice(rng: &mut impl Rng, dim: usize, bound: i64) -> Lattice {
    loop {
        let mut rows = vec![vec![BigInt::zero(); dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let x = BigInt::from(rng.gen_range(-bound..=bound));
                rows[i][j] = x.clone();
                rows[j][i] = x;
            }
        }
        if let Ok(l) = Lattice::new(IntMatrix::from_rows(&rows).unwrap()) {
            return l;
        }
    }
}

/// `count` lattices cycling through dimensions 2 to 6.
pub fn random_corpus(salt: u64, count: usize) -> Vec<Lattice> {
    let mut r = rng(salt);
    (0..count).map(|i| random_lattice(&mut r, 2 + i % 5, 10)).collect()
}

/// Random integer matrix with nonzero determinant.
pub fn random_nonsingular(rng: &mut impl Rng, dim: usize, bound: i64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<BigInt>> = (0..dim)
            .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let m = IntMatrix::from_rows(&rows).unwrap();
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn squarefree(k: u64) -> bool {
    (2..=k).take_while(|p| p * p <= k).all(|p| k % (p * p) != 0)
}

/// `diag(-k, 1, ..., 1)` for square-free `2 <= k <= 30`, dimensions 4 and 5.
pub fn sweep() -> Vec<Lattice> {
    let mut out = Vec::new();
    for dim in [4, 5] {
        for k in (2..=30).filter(|&k| squarefree(k)) {
            let mut diag = vec![1i64; dim];
            diag[0] = -(k as i64);
            out.push(Lattice::diagonal(&diag));
        }
    }
    out
}
