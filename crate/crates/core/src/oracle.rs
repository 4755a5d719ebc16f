//! Slow reference implementations. Nothing here calls into the fast
//! algorithms; only the matrix type is shared.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{HermiteBasis, IntMat, SmithForm};

/// Hermite basis of a full column rank matrix by column-wise euclidean
/// triangularization with reduction above each new pivot.
pub fn naive_hnf(a: &IntMat) -> Result<HermiteBasis> {
    let (n, m) = a.shape();
    let mut w: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for j in 0..m {
        // euclidean steps: the smallest entry reduces all others until one is left
        loop {
            let p = (j..n)
                .filter(|&i| !w[i][j].is_zero())
                .min_by(|&x, &y| w[x][j].magnitude().cmp(w[y][j].magnitude()))
                .ok_or(Error::RankDeficient)?;
            w.swap(p, j);
            let mut done = true;
            for i in j + 1..n {
                if w[i][j].is_zero() {
                    continue;
                }
                let q = w[i][j].div_floor(&w[j][j]);
                for k in j..m {
                    let t = &q * &w[j][k];
                    w[i][k] -= t;
                }
                done &= w[i][j].is_zero();
            }
            if done {
                break;
            }
        }
        if w[j][j].is_negative() {
            for x in w[j].iter_mut() {
                *x = -&*x;
            }
        }
        let d = w[j][j].clone();
        for i in 0..j {
            let q = w[i][j].div_floor(&d);
            if !q.is_zero() {
                for k in j..m {
                    let t = &q * &w[j][k];
                    w[i][k] -= t;
                }
            }
        }
    }
    let h = IntMat::from_fn(m, m, |i, j| w[i][j].clone());
    HermiteBasis::new(h)
}

/// Smith form of a square nonsingular matrix.
pub fn naive_smith(a: &IntMat) -> Result<SmithForm> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("naive_smith needs a square matrix".into()));
    }
    let n = a.rows();
    let mut w: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for k in 0..n {
        loop {
            // smallest nonzero entry of the trailing block moves to (k, k)
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if !w[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| w[i][j].abs() < w[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or(Error::Singular)?;
            w.swap(k, bi);
            for row in w.iter_mut() {
                row.swap(k, bj);
            }
            let d = w[k][k].clone();
            let mut clean = true;
            for i in k + 1..n {
                let q = w[i][k].div_floor(&d);
                for j in k..n {
                    let t = &q * &w[k][j];
                    w[i][j] -= t;
                }
                clean &= w[i][k].is_zero();
            }
            for j in k + 1..n {
                let q = w[k][j].div_floor(&d);
                for row in w.iter_mut().skip(k) {
                    let t = &q * &row[k];
                    row[j] -= t;
                }
                clean &= w[k][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w[i][j].is_multiple_of(&d));
            match bad {
                Some((i, _)) => {
                    for j in k..n {
                        let t = w[i][j].clone();
                        w[k][j] += t;
                    }
                }
                None => break,
            }
        }
    }
    SmithForm::new((0..n).map(|i| w[i][i].abs()).collect())
}

/// Every Z/(n)-combination of the rows of `a`, entries in `[0, n)`.
/// Meant for tiny inputs only.
pub fn brute_span(a: &IntMat, n: u64) -> BTreeSet<Vec<u64>> {
    let c = a.cols();
    let nb = BigInt::from(n);
    let gens: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| u64::try_from(x.mod_floor(&nb)).unwrap())
                .collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut stack = vec![vec![0u64; c]];
    seen.insert(vec![0u64; c]);
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w: Vec<u64> = v.iter().zip(g).map(|(x, y)| (x + y) % n).collect();
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Canonical Howell form computed from the full span: for each column the
/// pivot is the gcd (with `n`) of that column over span elements vanishing
/// to its left, and the row is the lexicographically least such element
/// carrying that pivot.
pub fn brute_howell(a: &IntMat, n: u64) -> IntMat {
    let span = brute_span(a, n);
    let c = a.cols();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for j in 0..c {
        let vj: Vec<&Vec<u64>> = span.iter().filter(|v| v[..j].iter().all(|&x| x == 0)).collect();
        let d = vj.iter().fold(n, |g, v| gcd_u64(g, v[j]));
        if d == n {
            continue;
        }
        let r = vj
            .into_iter()
            .filter(|v| v[j] == d)
            .min()
            .expect("pivot value is attained");
        rows.push(r.clone());
    }
    IntMat::from_fn(rows.len(), c, |i, j| BigInt::from(rows[i][j]))
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Whether the rows of `h` have the Howell property over Z/(n): every span
/// element vanishing in the first `j` columns is a combination of the rows
/// whose leading entry is at column `j` or later.
pub fn has_howell_property(h: &IntMat, n: u64) -> bool {
    let span = brute_span(h, n);
    let lead = |i: usize| (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
    for j in 0..=h.cols() {
        let tail: Vec<usize> = (0..h.rows()).filter(|&i| lead(i).map_or(false, |l| l >= j)).collect();
        let sub = brute_span(&h.select_rows(&tail), n);
        let vj = span.iter().filter(|v| v[..j].iter().all(|&x| x == 0));
        if vj.into_iter().any(|v| !sub.contains(v)) {
            return false;
        }
    }
    true
}

/// Hermite basis of `R(M, F)`: the trailing block of the Hermite basis of
/// `[M 0; F I]`.
pub fn relations_basis_oracle(modulus: &IntMat, f: &IntMat) -> Result<HermiteBasis> {
    if modulus.cols() != f.cols() {
        return Err(Error::DimensionMismatch("modulus and F column counts differ".into()));
    }
    let (l, m) = modulus.shape();
    let n = f.rows();
    let mut big = IntMat::zeros(l + n, m + n);
    big.set_block(0, 0, modulus);
    big.set_block(l, 0, f);
    big.set_block(l, m, &IntMat::identity(n));
    let h = naive_hnf(&big)?;
    HermiteBasis::new(h.mat().submatrix(m..m + n, m..m + n))
}

/// Whether `v` is an integer combination of the rows of the square upper
/// triangular `h`, by exact back substitution.
pub fn in_row_lattice(h: &IntMat, v: &[BigInt]) -> bool {
    let n = h.cols();
    let mut w = v.to_vec();
    for j in 0..n {
        if w[j].is_zero() {
            continue;
        }
        let d = &h[(j, j)];
        if d.is_zero() || !w[j].is_multiple_of(d) {
            return false;
        }
        let q = &w[j] / d;
        for (k, wk) in w.iter_mut().enumerate().skip(j) {
            *wk -= &q * &h[(j, k)];
        }
    }
    true
}
