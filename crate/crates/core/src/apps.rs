//! Classical lattice problems phrased as relations lattices.

use num_bigint::BigInt;

use crate::error::{dim_err, Result};
use crate::hermite_basis::{relations_hermite_basis, relations_hermite_basis_with_index};
use crate::intmat::{colmod, DiagonalModulus, HermiteBasis, IntMat};
use crate::options::Options;

/// Hermite basis of the row lattice of a full column rank `a`.
pub fn hnf(a: &IntMat, opts: &Options) -> Result<HermiteBasis> {
    relations_hermite_basis(a, &IntMat::identity(a.cols()), opts)
}

/// The remainder of `f` with respect to the Hermite basis `t`: `f + Q t`
/// reduced column-modulo the diagonal of `t`.
pub fn remainder_mod_hermite(f: &IntMat, t: &HermiteBasis, opts: &Options) -> Result<IntMat> {
    let (n, m) = (f.rows(), t.dim());
    if f.cols() != m {
        return dim_err(format!("F has {} columns but T has dimension {m}", f.cols()));
    }
    let g = IntMat::vstack(&[&f.neg(), &IntMat::identity(m)])?;
    let h = relations_hermite_basis_with_index(t.mat(), &g, Some((n, m)), opts)?;
    Ok(h.mat().submatrix(0..n, n..n + m))
}

/// Hermite basis of `L(A B)` without forming the product.
pub fn product_hnf(a: &IntMat, b: &IntMat, opts: &Options) -> Result<HermiteBasis> {
    let (n, m) = a.shape();
    if b.rows() != m {
        return dim_err(format!("A is {n}x{m} but B has {} rows", b.rows()));
    }
    let p = b.cols();
    let id = IntMat::identity(m);
    let modulus = IntMat::blocks(&[vec![Some(a), None], vec![Some(&id), Some(b)]])?;
    let g = IntMat::hstack(&[&IntMat::zeros(p, m), &IntMat::identity(p)])?;
    relations_hermite_basis(&modulus, &g, opts)
}

/// Hermite basis of `L(A) ∩ L(B)`.
pub fn lattice_intersection(a: &IntMat, b: &IntMat, opts: &Options) -> Result<HermiteBasis> {
    if a.cols() != b.cols() {
        return dim_err("intersection: A and B must have the same column count");
    }
    let m = a.cols();
    let modulus = IntMat::blocks(&[vec![Some(a), None], vec![None, Some(b)]])?;
    let g = IntMat::hstack(&[&IntMat::identity(m), &IntMat::identity(m)])?;
    relations_hermite_basis(&modulus, &g, opts)
}

/// Solution of `x A = h b` column-modulo `M` with the least positive `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSolution {
    pub h: BigInt,
    pub x_p: Vec<BigInt>,
    /// Every solution for this `h` is `x_p + v hbar` for an integer row `v`.
    pub hbar: HermiteBasis,
}

/// Solves `x A ≡ h b` column-modulo the nonsingular diagonal `M` for the
/// minimal positive `h`.
pub fn multivariable_crt(
    modulus: &DiagonalModulus,
    a: &IntMat,
    b: &[BigInt],
    opts: &Options,
) -> Result<CrtSolution> {
    let n = modulus.dim();
    if a.cols() != n || b.len() != n {
        return dim_err(format!("A and b must have {n} columns"));
    }
    modulus.check_nonsingular()?;
    let r = a.rows();
    let a = colmod(a, modulus)?;
    let b = colmod(&IntMat::from_vec(1, n, b.to_vec())?, modulus)?;
    let g = IntMat::vstack(&[&b.neg(), &a])?;
    let h = relations_hermite_basis(&modulus.to_matrix(), &g, opts)?;
    let hm = h.mat();
    Ok(CrtSolution {
        h: hm[(0, 0)].clone(),
        x_p: hm.row(0)[1..].to_vec(),
        hbar: HermiteBasis::new(hm.submatrix(1..r + 1, 1..r + 1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::matmul;
    use crate::oracle::naive_hnf;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows)
    }

    fn opts() -> Options {
        Options::checked()
    }

    #[test]
    fn hnf_examples() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 1]]);
        assert_eq!(hnf(&a, &opts()).unwrap().mat(), &m(&[&[1, 2, 3], &[0, 3, 6], &[0, 0, 8]]));
        assert_eq!(hnf(&IntMat::identity(3), &opts()).unwrap().mat(), &IntMat::identity(3));
        let tall = m(&[&[4, 6], &[6, 9], &[2, 0]]);
        assert_eq!(hnf(&tall, &opts()).unwrap(), naive_hnf(&tall).unwrap());
    }

    #[test]
    fn remainder_examples() {
        let t = HermiteBasis::new(m(&[&[2, 1], &[0, 3]])).unwrap();
        let f = m(&[&[5, 7], &[-1, -1], &[4, 5]]);
        let r = remainder_mod_hermite(&f, &t, &opts()).unwrap();
        assert_eq!(r, m(&[&[1, 2], &[1, 0], &[0, 0]]));
        let id = HermiteBasis::identity(2);
        assert!(remainder_mod_hermite(&f, &id, &opts()).unwrap().is_zero());
    }

    #[test]
    fn product_examples() {
        let a = m(&[&[2, 1], &[1, 3], &[0, 5]]);
        let b = m(&[&[1, 4], &[2, -1]]);
        let want = naive_hnf(&matmul(&a, &b).unwrap()).unwrap();
        assert_eq!(product_hnf(&a, &b, &opts()).unwrap(), want);
        assert_eq!(product_hnf(&a, &IntMat::identity(2), &opts()).unwrap(), naive_hnf(&a).unwrap());
        assert_eq!(product_hnf(&IntMat::identity(2), &b, &opts()).unwrap(), naive_hnf(&b).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let two = m(&[&[2, 0], &[0, 2]]);
        let three = m(&[&[3, 0], &[0, 3]]);
        assert_eq!(lattice_intersection(&two, &three, &opts()).unwrap().mat(), &m(&[&[6, 0], &[0, 6]]));
        let a = m(&[&[1, 2], &[0, 4]]);
        assert_eq!(lattice_intersection(&a, &a, &opts()).unwrap(), naive_hnf(&a).unwrap());
    }

    #[test]
    fn crt_examples() {
        let md = DiagonalModulus::from_i64(&[3, 5]).unwrap();
        let b: Vec<BigInt> = [2, 3].iter().map(|&x| BigInt::from(x)).collect();
        let sol = multivariable_crt(&md, &IntMat::identity(2), &b, &opts()).unwrap();
        assert_eq!(sol.h, BigInt::from(1));
        assert_eq!(sol.x_p, vec![BigInt::from(2), BigInt::from(3)]);
        assert_eq!(sol.hbar.mat(), &m(&[&[3, 0], &[0, 5]]));

        // single unknown: x = 2 mod 3, x = 3 mod 5
        let a = m(&[&[1, 1]]);
        let sol = multivariable_crt(&md, &a, &b, &opts()).unwrap();
        assert_eq!(sol.h, BigInt::from(1));
        assert_eq!(sol.x_p, vec![BigInt::from(8)]);
        assert_eq!(sol.hbar.mat(), &m(&[&[15]]));

        let zero = vec![BigInt::from(0); 2];
        let sol = multivariable_crt(&md, &a, &zero, &opts()).unwrap();
        assert_eq!(sol.h, BigInt::from(1));
        assert_eq!(sol.x_p, vec![BigInt::from(0)]);
    }

    #[test]
    fn crt_needs_scaling() {
        // 2x = 1 mod 4 has no solution; the least h is 2 with x = 1
        let md = DiagonalModulus::from_i64(&[4]).unwrap();
        let sol = multivariable_crt(&md, &m(&[&[2]]), &[BigInt::from(1)], &opts()).unwrap();
        assert_eq!(sol.h, BigInt::from(2));
        assert_eq!(sol.x_p, vec![BigInt::from(1)]);
        assert_eq!(sol.hbar.mat(), &m(&[&[2]]));
    }
}
