//! Products reduced column-modulo a diagonal matrix, computed by partial
//! linearization: big entries are split into radix-`X` digits so the core
//! of each product is one plain multiplication of small-entry matrices.
//!
//! Every function here returns exactly `colmod(A B, F)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, Error, Result};
use crate::intmat::{
    colmod, is_colmod_reduced, is_rowmod_reduced, matmul, residue, DiagonalModulus, HermiteBasis,
    IntMat,
};

/// Radix-`X` expansion lengths for a diagonal modulus.
///
/// `X = 2^x_bits` is the smallest power of two with `log2 X >= d / m`, and
/// `lengths[i]` is the least `e` with `X^e >= diag[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XadicPlan {
    pub x_bits: u64,
    pub lengths: Vec<usize>,
    pub total: usize,
}

impl XadicPlan {
    /// `d` is the bit budget (at least `log2 det` of the modulus) and `m`
    /// the dimension it is spread over.
    pub fn new(modulus: &DiagonalModulus, d: u64, m: usize) -> XadicPlan {
        let x_bits = if m == 0 { 1 } else { d.div_ceil(m as u64).max(1) };
        Self::with_radix(modulus, x_bits)
    }

    pub fn with_radix(modulus: &DiagonalModulus, x_bits: u64) -> XadicPlan {
        let lengths: Vec<usize> = modulus
            .diag()
            .iter()
            .map(|e| {
                if e <= &BigInt::one() {
                    0
                } else {
                    // X^k >= e  iff  k * x_bits >= bits(e - 1)
                    let b = (e - 1u32).bits();
                    b.div_ceil(x_bits) as usize
                }
            })
            .collect();
        let total = lengths.iter().sum();
        XadicPlan {
            x_bits,
            lengths,
            total,
        }
    }

    fn mask(&self) -> BigInt {
        (BigInt::one() << self.x_bits) - 1
    }

    /// Splits each column `i` of a nonnegative `a` into `lengths[i]` digit
    /// columns, least significant first.
    pub fn expand_cols(&self, a: &IntMat) -> IntMat {
        debug_assert_eq!(a.cols(), self.lengths.len());
        let mask = self.mask();
        let mut out = IntMat::zeros(a.rows(), self.total);
        let mut c0 = 0;
        for (j, &e) in self.lengths.iter().enumerate() {
            for i in 0..a.rows() {
                let mut v = a[(i, j)].clone();
                debug_assert!(!v.is_negative());
                for k in 0..e {
                    if v.is_zero() {
                        break;
                    }
                    out[(i, c0 + k)] = &v & &mask;
                    v >>= self.x_bits;
                }
                debug_assert!(v.is_zero(), "entry does not fit its expansion");
            }
            c0 += e;
        }
        out
    }

    /// Inverse of [`expand_cols`](Self::expand_cols): column `i` of the
    /// result is `sum_k X^k` times digit column `k` of block `i`.
    pub fn compress_cols(&self, a: &IntMat) -> IntMat {
        debug_assert_eq!(a.cols(), self.total);
        let mut out = IntMat::zeros(a.rows(), self.lengths.len());
        let mut c0 = 0;
        for (j, &e) in self.lengths.iter().enumerate() {
            for i in 0..a.rows() {
                let mut acc = BigInt::zero();
                for k in (0..e).rev() {
                    acc <<= self.x_bits;
                    acc += &a[(i, c0 + k)];
                }
                out[(i, j)] = acc;
            }
            c0 += e;
        }
        out
    }

    pub fn expand_rows(&self, a: &IntMat) -> IntMat {
        self.expand_cols(&a.transpose()).transpose()
    }

    pub fn compress_rows(&self, a: &IntMat) -> IntMat {
        self.compress_cols(&a.transpose()).transpose()
    }
}

fn bits_of_det(m: &DiagonalModulus) -> u64 {
    m.det().bits()
}

fn check_reduced_cols(a: &IntMat, e: &DiagonalModulus, what: &str) -> Result<()> {
    if a.cols() != e.dim() {
        return dim_err(format!("{what}: {} columns vs modulus of dimension {}", a.cols(), e.dim()));
    }
    e.check_nonsingular()?;
    if !is_colmod_reduced(a, e) {
        return Err(Error::NotReduced(format!("{what} is not reduced column-modulo its modulus")));
    }
    Ok(())
}

fn check_reduced_rows(a: &IntMat, e: &DiagonalModulus, what: &str) -> Result<()> {
    if a.rows() != e.dim() {
        return dim_err(format!("{what}: {} rows vs modulus of dimension {}", a.rows(), e.dim()));
    }
    e.check_nonsingular()?;
    if !is_rowmod_reduced(a, e) {
        return Err(Error::NotReduced(format!("{what} is not reduced row-modulo its modulus")));
    }
    Ok(())
}

fn cross_check(a: &IntMat, b: &IntMat, f: &DiagonalModulus, got: &IntMat) {
    if cfg!(debug_assertions) {
        let want = colmod(&matmul(a, b).unwrap(), f).unwrap();
        assert_eq!(&want, got, "partial linearization disagrees with plain product");
    }
}

/// Rows `X^k b_i mod F` for every digit position `k` of every row `i`.
fn expand_rows_mod(plan: &XadicPlan, b: &IntMat, f: &DiagonalModulus) -> IntMat {
    let mut out = IntMat::zeros(plan.total, b.cols());
    let mut r0 = 0;
    for (i, &e) in plan.lengths.iter().enumerate() {
        let mut cur: Vec<BigInt> = b.row(i).to_vec();
        for k in 0..e {
            if k > 0 {
                for (j, x) in cur.iter_mut().enumerate() {
                    *x = residue(&(&*x << plan.x_bits), &f.diag()[j]);
                }
            }
            out.row_mut(r0 + k).clone_from_slice(&cur);
        }
        r0 += e;
    }
    out
}

/// `colmod(A B, F)` for `A` reduced column-modulo `E` and `B` reduced
/// column-modulo `F`. `B` may be rectangular.
pub(crate) fn mul_tall(
    a: &IntMat,
    e: &DiagonalModulus,
    b: &IntMat,
    f: &DiagonalModulus,
) -> Result<IntMat> {
    check_reduced_cols(a, e, "A")?;
    check_reduced_cols(b, f, "B")?;
    if a.cols() != b.rows() {
        return dim_err("inner dimensions differ");
    }
    let m = a.cols().max(b.cols());
    let d = bits_of_det(e).max(bits_of_det(f));
    let pe = XadicPlan::new(e, d, m);
    let pf = XadicPlan::new(f, d, m);
    // digits of A, then B's rows scaled by the matching powers of X mod F
    let a_lin = pe.expand_cols(a);
    let b_rows = expand_rows_mod(&pe, b, f);
    let b_lin = pf.expand_cols(&b_rows);
    let prod = matmul(&a_lin, &b_lin)?;
    let out = colmod(&pf.compress_cols(&prod), f)?;
    cross_check(a, b, f, &out);
    Ok(out)
}

/// `colmod(A B, F)` where `A` (n x m) is reduced column-modulo `E` and the
/// square `B` is reduced column-modulo `F`.
pub fn colmod_mul_tall_square(
    a: &IntMat,
    e: &DiagonalModulus,
    b: &IntMat,
    f: &DiagonalModulus,
) -> Result<IntMat> {
    if !b.is_square() {
        return dim_err("B must be square");
    }
    mul_tall(a, e, b, f)
}

fn positive_part(a: &IntMat) -> IntMat {
    IntMat::from_fn(a.rows(), a.cols(), |i, j| {
        let x = &a[(i, j)];
        if x.is_positive() {
            x.clone()
        } else {
            BigInt::zero()
        }
    })
}

fn power_modulus(a: &IntMat) -> DiagonalModulus {
    let diag = a
        .col_bitlens()
        .into_iter()
        .map(|b| BigInt::one() << b)
        .collect();
    DiagonalModulus::new(diag).expect("powers of two are positive")
}

pub(crate) fn mul_signed(a: &IntMat, b: &IntMat, f: &DiagonalModulus) -> Result<IntMat> {
    if a.cols() != b.rows() {
        return dim_err("inner dimensions differ");
    }
    let e = power_modulus(a);
    let pos = positive_part(a);
    let neg = positive_part(&a.neg());
    let c1 = mul_tall(&pos, &e, b, f)?;
    let c2 = mul_tall(&neg, &e, b, f)?;
    let out = colmod(&c1.sub(&c2)?, f)?;
    cross_check(a, b, f, &out);
    Ok(out)
}

/// `colmod(A B, F)` for an arbitrary-sign `A`: the positive and negative
/// parts are multiplied separately.
pub fn colmod_mul_signed(a: &IntMat, b: &IntMat, f: &DiagonalModulus) -> Result<IntMat> {
    if !b.is_square() {
        return dim_err("B must be square");
    }
    mul_signed(a, b, f)
}

/// `colmod(H M, S)` for a Hermite basis with at most `m` columns that
/// differ from the identity, using `H M = (H - I) M + M`.
pub fn colmod_mul_hermite(h: &HermiteBasis, mm: &IntMat, s: &DiagonalModulus) -> Result<IntMat> {
    let n = h.dim();
    let m = mm.cols();
    if mm.rows() != n {
        return dim_err(format!("H is {n}x{n} but M has {} rows", mm.rows()));
    }
    check_reduced_cols(mm, s, "M")?;
    let cols = h.nontrivial_columns();
    if cols.len() > m {
        return Err(Error::Precondition(format!(
            "Hermite factor has {} nontrivial columns, more than {m}",
            cols.len()
        )));
    }
    let mut sel = cols.clone();
    let mut pad = 0..n;
    while sel.len() < m {
        // pad with zero columns; any index works since the block is zero
        sel.push(pad.next().unwrap_or(0));
    }
    let hm = h.mat();
    let hm_i = IntMat::from_fn(n, m, |i, k| {
        if k >= cols.len() {
            return BigInt::zero();
        }
        let j = sel[k];
        if i == j {
            &hm[(j, j)] - 1u32
        } else {
            hm[(i, j)].clone()
        }
    });
    let e = DiagonalModulus::new(
        (0..m)
            .map(|k| if k < cols.len() { hm[(sel[k], sel[k])].clone() } else { BigInt::one() })
            .collect(),
    )?;
    let rows = mm.select_rows(&sel);
    let prod = mul_tall(&hm_i, &e, &rows, s)?;
    let out = colmod(&prod.add(mm)?, s)?;
    cross_check(hm, mm, s, &out);
    Ok(out)
}

/// `colmod(A B, F)` for a wide `A` (m x n) reduced row-modulo `E` times a
/// tall `B` reduced column-modulo `F`. `B` may have any column count.
pub(crate) fn mul_wide(
    a: &IntMat,
    e: &DiagonalModulus,
    b: &IntMat,
    f: &DiagonalModulus,
) -> Result<IntMat> {
    check_reduced_rows(a, e, "A")?;
    check_reduced_cols(b, f, "B")?;
    if a.cols() != b.rows() {
        return dim_err("inner dimensions differ");
    }
    let m = a.rows().max(b.cols()).max(1);
    let n = a.cols();
    let d = bits_of_det(e).max(bits_of_det(f));
    let pe = XadicPlan::new(e, d, m);
    let pf = XadicPlan::new(f, d, m);
    let a_lin = pe.expand_rows(a);
    let b_lin = pf.expand_cols(b);
    let mut acc = IntMat::zeros(pe.total, b.cols());
    let mut start = 0;
    while start < n {
        let end = (start + m).min(n);
        let ak = a_lin.submatrix(0..pe.total, start..end);
        let bk = b_lin.submatrix(start..end, 0..pf.total);
        let ck = colmod(&pf.compress_cols(&matmul(&ak, &bk)?), f)?;
        acc = colmod(&acc.add(&ck)?, f)?;
        start = end;
    }
    let out = colmod(&pe.compress_rows(&acc), f)?;
    cross_check(a, b, f, &out);
    Ok(out)
}

/// `colmod(A B, F)` for `A` (m x n, n >= m) reduced row-modulo `E` and `B`
/// (n x m) reduced column-modulo `F`.
pub fn colmod_mul_wide_tall(
    a: &IntMat,
    e: &DiagonalModulus,
    b: &IntMat,
    f: &DiagonalModulus,
) -> Result<IntMat> {
    if b.cols() != a.rows() {
        return dim_err("result must be square");
    }
    mul_wide(a, e, b, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows)
    }

    fn diag(d: &[i64]) -> DiagonalModulus {
        DiagonalModulus::from_i64(d).unwrap()
    }

    #[test]
    fn tall_square_examples() {
        let a = IntMat::column(&[19, 10, 3]);
        let r = colmod_mul_tall_square(&a, &diag(&[24]), &m(&[&[1]]), &diag(&[24])).unwrap();
        assert_eq!(r, a);
        let a = m(&[&[3, 1], &[2, 0], &[1, 1]]);
        let b = m(&[&[1, 1], &[0, 1]]);
        let r = colmod_mul_tall_square(&a, &diag(&[4, 2]), &b, &diag(&[4, 4])).unwrap();
        assert_eq!(r, m(&[&[3, 0], &[2, 2], &[1, 2]]));
        let r = colmod_mul_tall_square(&a, &diag(&[4, 2]), &IntMat::zeros(2, 2), &diag(&[4, 4])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn tall_square_rejects_unreduced() {
        let a = m(&[&[5]]);
        assert!(matches!(
            colmod_mul_tall_square(&a, &diag(&[4]), &m(&[&[1]]), &diag(&[4])),
            Err(Error::NotReduced(_))
        ));
        assert!(matches!(
            colmod_mul_tall_square(&a, &diag(&[8, 1]), &m(&[&[1]]), &diag(&[4])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn signed_examples() {
        let r = colmod_mul_signed(&IntMat::column(&[-1, 2]), &m(&[&[3]]), &diag(&[5])).unwrap();
        assert_eq!(r, IntMat::column(&[2, 1]));
        let r = colmod_mul_signed(&IntMat::zeros(3, 1), &m(&[&[3]]), &diag(&[5])).unwrap();
        assert!(r.is_zero());
        let a = m(&[&[-1, 0], &[0, -1], &[1, 1]]);
        let r = colmod_mul_signed(&a, &IntMat::identity(2), &diag(&[7, 7])).unwrap();
        assert_eq!(r, m(&[&[6, 0], &[0, 6], &[1, 1]]));
    }

    #[test]
    fn hermite_examples() {
        let h = HermiteBasis::new(m(&[&[1, 2, 0], &[0, 3, 0], &[0, 0, 1]])).unwrap();
        let mm = IntMat::column(&[19, 10, 3]);
        assert_eq!(colmod_mul_hermite(&h, &mm, &diag(&[24])).unwrap(), IntMat::column(&[15, 6, 3]));
        let id = HermiteBasis::identity(3);
        assert_eq!(colmod_mul_hermite(&id, &mm, &diag(&[24])).unwrap(), mm);
        let wide = HermiteBasis::new(m(&[&[2, 1], &[0, 3]])).unwrap();
        assert!(matches!(
            colmod_mul_hermite(&wide, &IntMat::column(&[1, 1]), &diag(&[4])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn wide_tall_examples() {
        let a = m(&[&[1, 0, 1]]);
        let b = IntMat::column(&[1, 1, 1]);
        assert_eq!(colmod_mul_wide_tall(&a, &diag(&[2]), &b, &diag(&[4])).unwrap(), m(&[&[2]]));
        let z = IntMat::zeros(1, 3);
        assert!(colmod_mul_wide_tall(&z, &diag(&[2]), &b, &diag(&[4])).unwrap().is_zero());
    }

    #[test]
    fn plan_bounds_and_round_trip() {
        let e = diag(&[1, 3, 255, 256, 1 << 20]);
        let d = e.det().bits();
        let p = XadicPlan::new(&e, d, 5);
        assert!(p.total < 10);
        assert_eq!(p.lengths[0], 0);
        let a = m(&[&[0, 2, 254, 255, 999_999], &[0, 0, 7, 1, 3]]);
        assert_eq!(p.compress_cols(&p.expand_cols(&a)), a);
        assert_eq!(p.compress_rows(&p.expand_rows(&a.transpose())), a.transpose());
    }

    #[test]
    fn radix_is_least_power_of_two() {
        let e = diag(&[1000, 1000]);
        let p = XadicPlan::new(&e, 20, 2);
        assert_eq!(p.x_bits, 10);
        assert_eq!(p.lengths, vec![1, 1]);
    }
}
