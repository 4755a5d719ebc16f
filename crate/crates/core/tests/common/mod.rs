#![allow(dead_code)]

use hnfkit::oracle::naive_hnf;
use hnfkit::{BigInt, DiagonalModulus, IntMat, SmithForm};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn mat(rows: &[&[i64]]) -> IntMat {
    IntMat::from_rows(rows)
}

pub fn random_mat(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> IntMat {
    IntMat::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(lo..=hi)))
}

/// A random matrix of full column rank, redrawn until the oracle accepts it.
pub fn random_full_rank(rng: &mut ChaCha8Rng, r: usize, c: usize, bound: i64) -> IntMat {
    loop {
        let a = random_mat(rng, r, c, -bound, bound);
        if naive_hnf(&a).is_ok() {
            return a;
        }
    }
}

pub fn random_smith(rng: &mut ChaCha8Rng, m: usize, max_step: i64) -> SmithForm {
    let mut d = Vec::with_capacity(m);
    let mut cur = BigInt::from(1);
    for _ in 0..m {
        cur *= rng.gen_range(1..=max_step);
        d.push(cur.clone());
    }
    SmithForm::new(d).unwrap()
}

pub fn random_diag(rng: &mut ChaCha8Rng, m: usize, max: i64) -> DiagonalModulus {
    DiagonalModulus::new((0..m).map(|_| BigInt::from(rng.gen_range(1..=max))).collect()).unwrap()
}

/// Random matrix reduced column-modulo `s`.
pub fn random_reduced(rng: &mut ChaCha8Rng, r: usize, s: &DiagonalModulus) -> IntMat {
    IntMat::from_fn(r, s.dim(), |_, j| {
        let d = &s.diag()[j];
        let limbs = d.bits() / 64 + 2;
        let mut x = BigInt::from(0);
        for _ in 0..limbs {
            x = (x << 64) + rng.gen::<u64>();
        }
        x % d
    })
}

/// Diagonal modulus whose entries have random bit lengths below `max_bits`.
pub fn random_diag_bits(rng: &mut ChaCha8Rng, m: usize, max_bits: u32) -> DiagonalModulus {
    let bits = rng.gen_range(1..max_bits);
    random_diag(rng, m, 1i64 << bits)
}
