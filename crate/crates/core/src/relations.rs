//! Rewrites of a relations lattice `R(M, F)` that keep the lattice fixed
//! while normalizing the inputs, and the chain that turns arbitrary
//! `(M, G)` into a coprime pair with a Smith modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim_err, Error, Result};
use crate::howell::hermite_via_howell;
use crate::intmat::{colmod, determinant, hermite_remainder, IntMat, SmithForm};
use crate::linmul::{colmod_mul_signed, mul_tall};
use crate::massager::smith_massager;
use crate::options::Options;
use crate::structured_hermite::{coprime_parts, hermite_of_stack};

pub use crate::oracle::relations_basis_oracle;

/// A relations lattice `R(modulus, f)` together with what is known about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationsInput {
    pub modulus: IntMat,
    pub f: IntMat,
    pub modulus_is_smith: bool,
    pub inputs_coprime: bool,
    pub reduced: bool,
}

impl RelationsInput {
    /// Wraps `(modulus, f)`; the Smith and reduced flags are detected.
    pub fn new(modulus: IntMat, f: IntMat) -> Result<Self> {
        if modulus.cols() != f.cols() {
            return dim_err(format!(
                "modulus has {} columns but F has {}",
                modulus.cols(),
                f.cols()
            ));
        }
        let smith = SmithForm::from_matrix(&modulus).ok();
        let reduced = smith.as_ref().is_some_and(|s| crate::intmat::is_colmod_reduced(&f, s.modulus()));
        Ok(RelationsInput {
            modulus,
            f,
            modulus_is_smith: smith.is_some(),
            inputs_coprime: false,
            reduced,
        })
    }

    fn with_smith(s: &SmithForm, f: IntMat, coprime: bool) -> Self {
        RelationsInput {
            modulus: s.to_matrix(),
            f,
            modulus_is_smith: true,
            inputs_coprime: coprime,
            reduced: true,
        }
    }

    /// The modulus as a Smith form, if it is one.
    pub fn smith(&self) -> Result<SmithForm> {
        if !self.modulus_is_smith {
            return Err(Error::Precondition("modulus is not in Smith form".into()));
        }
        SmithForm::from_matrix(&self.modulus)
    }
}

/// `|det|` of the leading square block after selecting `rows`.
fn selected_det(m: &IntMat, rows: &[usize]) -> Result<BigInt> {
    determinant(&m.select_rows(rows))
}

/// Replaces the modulus by its Hermite basis `T` and `F` by its remainder
/// with respect to `T`.
pub fn compress_modulus(ri: &RelationsInput) -> Result<RelationsInput> {
    let m = &ri.modulus;
    let p = pivot_permutation(m, None)?;
    let d = selected_det(m, &p[..m.cols()])?.abs();
    let t = hermite_via_howell(m, &d)?.into_mat();
    let f = hermite_remainder(&ri.f, &t)?;
    let mut out = RelationsInput::new(t, f)?;
    out.inputs_coprime = ri.inputs_coprime;
    Ok(out)
}

/// Replaces a nonsingular modulus `M` by its Smith form `S` and `F` by
/// `colmod(F W, S)` for a Smith massager `(S, W)` of `M`. A tall modulus is
/// first permuted so its leading block `M1` is nonsingular; the trailing
/// rows become `colmod(M2 W, S)` below `S`.
pub fn smithify_modulus(ri: &RelationsInput, opts: &Options) -> Result<RelationsInput> {
    let m = &ri.modulus;
    let c = m.cols();
    let p = pivot_permutation(m, opts.seed)?;
    let pm = m.select_rows(&p);
    let m1 = pm.submatrix(0..c, 0..c);
    let m2 = pm.submatrix(c..pm.rows(), 0..c);
    let mas = smith_massager(&m1, opts)?;
    let s = mas.s;
    let f = colmod_mul_signed(&ri.f, &mas.f, s.modulus())?;
    if m2.rows() == 0 {
        return Ok(RelationsInput::with_smith(&s, f, false));
    }
    let m3 = colmod_mul_signed(&m2, &mas.f, s.modulus())?;
    let modulus = IntMat::vstack(&[&s.to_matrix(), &m3])?;
    Ok(RelationsInput {
        modulus,
        f,
        modulus_is_smith: false,
        inputs_coprime: false,
        reduced: true,
    })
}

/// Drops the leading unit invariant factors of a Smith modulus together
/// with the matching columns of `F`.
pub fn strip_trivial(ri: &RelationsInput) -> Result<RelationsInput> {
    let s = ri.smith()?;
    let t = s.trivial_count();
    let k = s.dim();
    let f = ri.f.submatrix(0..ri.f.rows(), t..k);
    let f = colmod(&f, s.slice(t..k).modulus())?;
    Ok(RelationsInput::with_smith(&s.slice(t..k), f, ri.inputs_coprime))
}

/// Replaces `R(S, F)` by the coprime `R(K, C)` where `[I C; 0 K]` is the
/// Hermite form of `[I, -F T^-1; 0, S T^-1]` and `T` the Hermite basis of
/// `L(F) + L(S)`.
pub fn remove_common_divisor(ri: &RelationsInput) -> Result<RelationsInput> {
    let s = ri.smith()?;
    let f = colmod(&ri.f, s.modulus())?;
    let t = hermite_of_stack(&f, &s)?;
    let (c, k) = coprime_parts(&t, &f, &s)?;
    Ok(RelationsInput {
        modulus: k.into_mat(),
        f: c,
        modulus_is_smith: false,
        inputs_coprime: true,
        reduced: false,
    })
}

/// A row permutation (as a list of source rows) whose first `m` rows form
/// a nonsingular block of the full column rank `m`.
///
/// With a seed, elimination modulo random word-size primes is tried first;
/// fraction-free elimination over Z is the fallback and the default.
pub fn pivot_permutation(m: &IntMat, seed: Option<u64>) -> Result<Vec<usize>> {
    let (l, c) = m.shape();
    if l < c {
        return Err(Error::RankDeficient);
    }
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = prime_bits(m);
        for _ in 0..4 {
            let p = random_prime(&mut rng, bits);
            if let Some(sel) = select_rows_mod_p(m, p) {
                return Ok(complete_permutation(sel, l));
            }
        }
    }
    let sel = select_rows_exact(m).ok_or(Error::RankDeficient)?;
    Ok(complete_permutation(sel, l))
}

fn complete_permutation(mut sel: Vec<usize>, l: usize) -> Vec<usize> {
    let chosen: std::collections::BTreeSet<usize> = sel.iter().copied().collect();
    sel.extend((0..l).filter(|i| !chosen.contains(i)));
    sel
}

fn prime_bits(m: &IntMat) -> u32 {
    let c = m.cols().max(1) as f64;
    let d: u64 = m.col_bitlens().iter().sum();
    let dbar = d as f64 + c / 2.0 * c.log2();
    let b = dbar.max(2.0).log2().ceil() as u32 + 20;
    b.min(63)
}

fn random_prime(rng: &mut ChaCha8Rng, bits: u32) -> u64 {
    loop {
        let x: u64 = rng.gen_range(1u64 << (bits - 1)..1u64 << bits) | 1;
        if primal_check::miller_rabin(x) {
            return x;
        }
    }
}

fn select_rows_mod_p(m: &IntMat, p: u64) -> Option<Vec<usize>> {
    let (l, c) = m.shape();
    let pb = BigInt::from(p);
    let mut w: Vec<Vec<u128>> = (0..l)
        .map(|i| {
            (0..c)
                .map(|j| m[(i, j)].mod_floor(&pb).to_u128().unwrap())
                .collect()
        })
        .collect();
    let p = p as u128;
    let mut used = vec![false; l];
    let mut sel = Vec::with_capacity(c);
    for j in 0..c {
        let r = (0..l).find(|&i| !used[i] && w[i][j] != 0)?;
        used[r] = true;
        sel.push(r);
        let inv = mod_inverse(w[r][j], p);
        for i in 0..l {
            if used[i] || w[i][j] == 0 {
                continue;
            }
            let f = w[i][j] * inv % p;
            for k in j..c {
                w[i][k] = (w[i][k] + p * p - f * w[r][k] % p) % p;
            }
        }
    }
    Some(sel)
}

fn mod_inverse(a: u128, p: u128) -> u128 {
    let (mut r0, mut r1) = (a as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i128) as u128
}

fn select_rows_exact(m: &IntMat) -> Option<Vec<usize>> {
    let (l, c) = m.shape();
    let mut w = m.clone();
    let mut used = vec![false; l];
    let mut sel = Vec::with_capacity(c);
    let mut prev = BigInt::one();
    for j in 0..c {
        let r = (0..l).find(|&i| !used[i] && !w[(i, j)].is_zero())?;
        used[r] = true;
        sel.push(r);
        let piv = w[(r, j)].clone();
        for i in 0..l {
            if used[i] {
                continue;
            }
            let a = w[(i, j)].clone();
            for k in j..c {
                let v = (&piv * &w[(i, k)] - &a * &w[(r, k)]) / &prev;
                w[(i, k)] = v;
            }
        }
        prev = piv;
    }
    Some(sel)
}

/// Every intermediate pair of the chain from `(M, G)` to a coprime pair
/// with Smith modulus. All entries generate the same relations lattice;
/// the last one has its trivial invariant factors stripped.
pub fn smith_coprime_chain(m: &IntMat, g: &IntMat, opts: &Options) -> Result<Vec<RelationsInput>> {
    let c = m.cols();
    if g.cols() != c {
        return dim_err(format!("M has {c} columns but G has {}", g.cols()));
    }
    let n = g.rows();
    let mut chain = Vec::with_capacity(7);
    if c == 0 {
        chain.push(RelationsInput::with_smith(&SmithForm::identity(0), IntMat::zeros(n, 0), true));
        return Ok(chain);
    }
    let sub = opts.quarter();

    // 1: permute so the leading block is nonsingular
    let p = pivot_permutation(m, opts.seed)?;
    let pm = m.select_rows(&p);
    chain.push(RelationsInput::new(pm.clone(), g.clone())?);

    // 2: Smith form of the leading block
    let m1 = pm.submatrix(0..c, 0..c);
    let m2 = pm.submatrix(c..pm.rows(), 0..c);
    let mas1 = smith_massager(&m1, &sub)?;
    let s1 = mas1.s;
    let m3 = colmod_mul_signed(&m2, &mas1.f, s1.modulus())?;
    let g1 = colmod_mul_signed(g, &mas1.f, s1.modulus())?;
    chain.push(RelationsInput {
        modulus: IntMat::vstack(&[&s1.to_matrix(), &m3])?,
        f: g1.clone(),
        modulus_is_smith: m3.rows() == 0,
        inputs_coprime: false,
        reduced: true,
    });

    // 3: Hermite basis of the stacked modulus
    let t1 = hermite_of_stack(&m3, &s1)?;
    chain.push(RelationsInput::new(t1.mat().clone(), g1.clone())?);

    // 4: Smith form of that basis
    let (s2, g2) = if m3.rows() == 0 {
        (s1.clone(), g1)
    } else {
        let mas2 = smith_massager(t1.mat(), &sub)?;
        let g2 = mul_tall(&g1, s1.modulus(), &mas2.f, mas2.s.modulus())?;
        (mas2.s, g2)
    };
    chain.push(RelationsInput::with_smith(&s2, g2.clone(), false));

    // 5: coprime inputs
    let t2 = hermite_of_stack(&g2, &s2)?;
    let (cc, k) = coprime_parts(&t2, &g2, &s2)?;
    chain.push(RelationsInput {
        modulus: k.mat().clone(),
        f: cc.clone(),
        modulus_is_smith: false,
        inputs_coprime: true,
        reduced: false,
    });

    // 6: Smith form of K
    let mas3 = smith_massager(k.mat(), &sub)?;
    let kdiag = crate::intmat::DiagonalModulus::new(k.mat().diagonal())?;
    let f = mul_tall(&cc, &kdiag, &mas3.f, mas3.s.modulus())?;
    chain.push(RelationsInput::with_smith(&mas3.s, f, true));

    let last = strip_trivial(chain.last().expect("chain is nonempty"))?;
    chain.push(last);
    Ok(chain)
}

/// `(S, F)` with `S` a nonsingular Smith form without unit invariant
/// factors, `F` reduced column-modulo `S`, the pair coprime, and
/// `R(S, F) = R(M, G)`.
pub fn to_smith_coprime(m: &IntMat, g: &IntMat, opts: &Options) -> Result<(SmithForm, IntMat)> {
    let last = smith_coprime_chain(m, g, opts)?.pop().expect("chain is nonempty");
    let s = last.smith()?;
    if opts.checking() && s.dim() > 0 {
        let stack = IntMat::vstack(&[&s.to_matrix(), &last.f])?;
        let h = hermite_via_howell(&stack, &s.largest())?;
        if h.mat() != &IntMat::identity(s.dim()) {
            return Err(Error::Precondition("chain produced non-coprime inputs".into()));
        }
    }
    Ok((s, last.f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows)
    }

    fn sample() -> IntMat {
        m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 1]])
    }

    fn sample_hnf() -> IntMat {
        m(&[&[1, 2, 3], &[0, 3, 6], &[0, 0, 8]])
    }

    fn oracle(ri: &RelationsInput) -> IntMat {
        relations_basis_oracle(&ri.modulus, &ri.f).unwrap().into_mat()
    }

    #[test]
    fn compress_example() {
        let ri = RelationsInput::new(IntMat::column(&[24, 3]), IntMat::column(&[19, 10, 3])).unwrap();
        let out = compress_modulus(&ri).unwrap();
        assert_eq!(out.modulus, IntMat::column(&[3]));
        assert_eq!(out.f, IntMat::column(&[1, 1, 0]));
        assert_eq!(oracle(&ri), oracle(&out));
    }

    #[test]
    fn compress_keeps_reduced_hermite_input() {
        let ri = RelationsInput::new(m(&[&[2, 1], &[0, 3]]), m(&[&[1, 2]])).unwrap();
        let out = compress_modulus(&ri).unwrap();
        assert_eq!((out.modulus.clone(), out.f.clone()), (ri.modulus.clone(), ri.f.clone()));
    }

    #[test]
    fn smithify_square_and_tall() {
        let opts = Options::checked();
        let ri = RelationsInput::new(sample(), IntMat::identity(3)).unwrap();
        let out = smithify_modulus(&ri, &opts).unwrap();
        assert_eq!(out.smith().unwrap(), SmithForm::from_i64(&[1, 1, 24]).unwrap());
        assert_eq!(oracle(&out), sample_hnf());

        let tall = m(&[&[2, 1], &[0, 3], &[4, 5], &[1, 7]]);
        let ri = RelationsInput::new(tall, m(&[&[1, 2], &[3, -4], &[0, 5]])).unwrap();
        let out = smithify_modulus(&ri, &opts).unwrap();
        assert_eq!(oracle(&ri), oracle(&out));
    }

    #[test]
    fn strip_cases() {
        let ri = RelationsInput::new(
            SmithForm::from_i64(&[1, 1, 24]).unwrap().to_matrix(),
            m(&[&[0, 0, 19], &[0, 0, 10], &[0, 0, 3]]),
        )
        .unwrap();
        let out = strip_trivial(&ri).unwrap();
        assert_eq!(out.modulus, m(&[&[24]]));
        assert_eq!(out.f, IntMat::column(&[19, 10, 3]));

        let id = RelationsInput::new(IntMat::identity(2), IntMat::zeros(3, 2)).unwrap();
        assert_eq!(strip_trivial(&id).unwrap().modulus.shape(), (0, 0));

        let keep = RelationsInput::new(m(&[&[2, 0], &[0, 4]]), m(&[&[1, 3]])).unwrap();
        assert_eq!(strip_trivial(&keep).unwrap().f, keep.f);
    }

    #[test]
    fn common_divisor_example() {
        let ri = RelationsInput::new(m(&[&[24]]), IntMat::column(&[15, 6, 3])).unwrap();
        let out = remove_common_divisor(&ri).unwrap();
        assert_eq!(out.modulus, m(&[&[8]]));
        // the same lattice as R(8, [5; 2; 1]); the sign of F is immaterial
        let neg = IntMat::column(&[-5, -2, -1]);
        assert_eq!(colmod(&neg, &crate::DiagonalModulus::from_i64(&[8]).unwrap()).unwrap(), out.f);
        let printed = RelationsInput::new(m(&[&[8]]), IntMat::column(&[5, 2, 1])).unwrap();
        assert_eq!(oracle(&out), oracle(&printed));
        assert_eq!(oracle(&out), oracle(&ri));
    }

    #[test]
    fn common_divisor_when_coprime() {
        let ri = RelationsInput::new(m(&[&[24]]), IntMat::column(&[19, 10, 3])).unwrap();
        let out = remove_common_divisor(&ri).unwrap();
        assert_eq!(out.modulus, m(&[&[24]]));
        assert_eq!(oracle(&out), oracle(&ri));
    }

    #[test]
    fn pivots() {
        let a = m(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(&pivot_permutation(&a, None).unwrap()[..2], &[1, 2]);
        assert_eq!(&pivot_permutation(&a, Some(7)).unwrap()[..2], &[1, 2]);
        assert_eq!(pivot_permutation(&sample(), None).unwrap(), vec![0, 1, 2]);
        let deficient = m(&[&[1, 2], &[2, 4], &[3, 6]]);
        assert_eq!(pivot_permutation(&deficient, None), Err(Error::RankDeficient));
        assert_eq!(pivot_permutation(&deficient, Some(1)), Err(Error::RankDeficient));
    }

    #[test]
    fn chain_preserves_basis_3x3() {
        let opts = Options::checked();
        let chain = smith_coprime_chain(&sample(), &IntMat::identity(3), &opts).unwrap();
        for ri in &chain {
            assert_eq!(oracle(ri), sample_hnf());
        }
        let (s, f) = to_smith_coprime(&sample(), &IntMat::identity(3), &opts).unwrap();
        assert_eq!(s.det(), BigInt::from(24));
        assert_eq!(f.rows(), 3);
    }

    #[test]
    fn chain_identity_modulus() {
        let (s, f) = to_smith_coprime(&IntMat::identity(2), &m(&[&[5, 7], &[1, 1]]), &Options::default()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(f.shape(), (2, 0));
    }
}
