//! Howell form over Z/(N) with a transform, and the Hermite forms obtained
//! from it by lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{dim_err, Error, Result};
use crate::intmat::{check_hermite, matmul, HermiteBasis, IntMat, SmithForm};
use crate::modn::{ext_gcd, ResidueCtx};

/// Howell form `h` of the input over Z/(N) together with `u` such that
/// `u * a == h (mod N)`. `u` has one row per row of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellResult {
    pub h: IntMat,
    pub u: IntMat,
}

struct Row {
    v: Vec<BigInt>,
    coeff: Vec<BigInt>,
}

impl Row {
    fn is_zero(&self) -> bool {
        self.v.iter().all(Zero::is_zero)
    }

    fn scale(&mut self, c: &BigInt, ctx: &ResidueCtx) {
        for x in self.v.iter_mut().chain(self.coeff.iter_mut()) {
            *x = ctx.mul(x, c);
        }
    }

    fn scaled(&self, c: &BigInt, ctx: &ResidueCtx) -> Row {
        let mut r = Row {
            v: self.v.clone(),
            coeff: self.coeff.clone(),
        };
        r.scale(c, ctx);
        r
    }

    /// self -= c * other
    fn sub_mul(&mut self, c: &BigInt, other: &Row, ctx: &ResidueCtx) {
        for (x, y) in self.v.iter_mut().zip(&other.v) {
            *x = ctx.reduce(&(&*x - c * y));
        }
        for (x, y) in self.coeff.iter_mut().zip(&other.coeff) {
            *x = ctx.reduce(&(&*x - c * y));
        }
    }
}

/// (p, q) <- (s p + t q, (b/g) p - (a/g) q) where a, b are the entries in
/// column `j`; the new q has a zero there. Determinant of the 2x2 is -1.
fn combine(p: &mut Row, q: &mut Row, j: usize, ctx: &ResidueCtx) {
    let (a, b) = (p.v[j].clone(), q.v[j].clone());
    let (g, s, t) = ext_gcd(&a, &b);
    let (ag, bg) = (&a / &g, &b / &g);
    let lin = |x: &BigInt, y: &BigInt, c1: &BigInt, c2: &BigInt| ctx.reduce(&(c1 * x + c2 * y));
    let nb = -&ag;
    for (x, y) in p.v.iter_mut().zip(q.v.iter_mut()) {
        let nx = lin(x, y, &s, &t);
        let ny = lin(x, y, &bg, &nb);
        *x = nx;
        *y = ny;
    }
    for (x, y) in p.coeff.iter_mut().zip(q.coeff.iter_mut()) {
        let nx = lin(x, y, &s, &t);
        let ny = lin(x, y, &bg, &nb);
        *x = nx;
        *y = ny;
    }
}

/// Canonical Howell form of `a` over Z/(n), with transform.
///
/// Columns are processed left to right. The rows still free of pivots are
/// gcd-combined into one row, which is normalized by a unit so its entry
/// divides `n`. Rows already holding pivots are reduced against it, and its
/// `n/d` multiple, which vanishes in this column, rejoins the free rows.
pub fn howell_form(a: &IntMat, n: &BigInt) -> Result<HowellResult> {
    if n <= &BigInt::zero() {
        return Err(Error::Precondition("Howell modulus must be positive".into()));
    }
    let ctx = ResidueCtx::new(n.clone());
    let r = a.rows();
    let c = a.cols();
    let mut free: Vec<Row> = (0..r)
        .map(|i| Row {
            v: a.row(i).iter().map(|x| ctx.reduce(x)).collect(),
            coeff: (0..r)
                .map(|k| if k == i { ctx.reduce(&BigInt::one()) } else { BigInt::zero() })
                .collect(),
        })
        .collect();
    let mut pivots: Vec<Row> = Vec::new();

    for j in 0..c {
        free.retain(|row| !row.is_zero());
        let Some(first) = free.iter().position(|row| !row.v[j].is_zero()) else {
            continue;
        };
        let mut p = free.swap_remove(first);
        for q in free.iter_mut() {
            if !q.v[j].is_zero() {
                combine(&mut p, q, j, &ctx);
            }
        }
        let u = ctx.unit_normalizer(&p.v[j]);
        p.scale(&u, &ctx);
        let d = p.v[j].clone();
        if d.is_zero() {
            // only possible when n == 1, where everything is zero anyway
            continue;
        }
        for h in pivots.iter_mut() {
            let q = h.v[j].div_floor(&d);
            if !q.is_zero() {
                h.sub_mul(&q, &p, &ctx);
            }
        }
        let extra = p.scaled(&(n / &d), &ctx);
        if !extra.is_zero() {
            free.push(extra);
        }
        pivots.push(p);
    }

    let h = IntMat::from_fn(pivots.len(), c, |i, j| pivots[i].v[j].clone());
    let u = IntMat::from_fn(pivots.len(), r, |i, j| pivots[i].coeff[j].clone());
    debug_assert!({
        let ua = matmul(&u, a).unwrap();
        (0..h.rows()).all(|i| (0..c).all(|j| ctx.reduce(&ua[(i, j)]) == h[(i, j)]))
    });
    Ok(HowellResult { h, u })
}

/// Hermite basis of `a`, assuming `s I` lies in its row lattice, read off
/// from the Howell form over Z/(s^2).
pub fn hermite_via_howell(a: &IntMat, s: &BigInt) -> Result<HermiteBasis> {
    if s <= &BigInt::zero() {
        return Err(Error::Precondition("s must be positive".into()));
    }
    let m = a.cols();
    if s.is_one() {
        return Ok(HermiteBasis::identity(m));
    }
    let hw = howell_form(a, &(s * s))?;
    lift(hw.h, m)
}

fn lift(h: IntMat, m: usize) -> Result<HermiteBasis> {
    if h.rows() != m {
        return Err(Error::Precondition(format!(
            "lattice does not contain sI: Howell form has {} rows for {} columns",
            h.rows(),
            m
        )));
    }
    check_hermite(&h).map_err(|e| Error::Precondition(format!("lifted Howell form: {e}")))?;
    Ok(HermiteBasis::new_unchecked(h))
}

/// Hermite basis `t` of `L(a) + L(s)` and `e` in `[0, s)^{m x n}` with
/// `e a = t` modulo the row lattice of `s`.
pub fn hermite_with_eliminator(s: &SmithForm, a: &IntMat) -> Result<(HermiteBasis, IntMat)> {
    let m = s.dim();
    if a.cols() != m {
        return dim_err(format!("eliminator: A has {} columns, S has dimension {m}", a.cols()));
    }
    let big = s.largest();
    let n = a.rows();
    if big.is_one() {
        return Ok((HermiteBasis::identity(m), IntMat::zeros(m, n)));
    }
    let a = IntMat::from_fn(n, m, |i, j| a[(i, j)].mod_floor(&big));
    let stack = IntMat::vstack(&[&s.to_matrix(), &a])?;
    let hw = howell_form(&stack, &(&big * &big))?;
    let u = hw.u;
    let t = lift(hw.h, m)?;
    let e = IntMat::from_fn(m, n, |i, j| u[(i, m + j)].mod_floor(&big));
    if cfg!(debug_assertions) {
        let ea = matmul(&e, &a)?;
        for i in 0..m {
            for j in 0..m {
                let diff = &t.mat()[(i, j)] - &ea[(i, j)];
                debug_assert!(diff.is_multiple_of(&s.diag()[j]), "eliminator identity fails");
            }
        }
    }
    Ok((t, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows)
    }

    #[test]
    fn howell_examples() {
        let r = howell_form(&m(&[&[2, 1]]), &BigInt::from(4)).unwrap();
        assert_eq!(r.h, m(&[&[2, 1], &[0, 2]]));
        let r = howell_form(&IntMat::identity(3), &BigInt::from(9)).unwrap();
        assert_eq!(r.h, IntMat::identity(3));
        let r = howell_form(&IntMat::zeros(1, 2), &BigInt::from(6)).unwrap();
        assert_eq!(r.h.rows(), 0);
    }

    #[test]
    fn transform_identity() {
        let a = m(&[&[3, 5, 1], &[6, 2, 4], &[0, 3, 3]]);
        let n = BigInt::from(12);
        let r = howell_form(&a, &n).unwrap();
        let ua = matmul(&r.u, &a).unwrap();
        for i in 0..r.h.rows() {
            for j in 0..3 {
                assert_eq!(ua[(i, j)].mod_floor(&n), r.h[(i, j)]);
            }
        }
    }

    #[test]
    fn stack_example() {
        let a = m(&[&[1, 5, 19], &[2, 0, 0], &[0, 6, 0], &[0, 0, 72]]);
        let h = hermite_via_howell(&a, &BigInt::from(72)).unwrap();
        assert_eq!(h.mat(), &m(&[&[1, 1, 5], &[0, 2, 4], &[0, 0, 6]]));
    }

    #[test]
    fn diagonal_chain_is_fixed() {
        let a = m(&[&[2, 0, 0], &[0, 6, 0], &[0, 0, 12]]);
        let h = hermite_via_howell(&a, &BigInt::from(12)).unwrap();
        assert_eq!(h.mat(), &a);
    }

    #[test]
    fn missing_si_is_detected() {
        let a = m(&[&[2, 0], &[0, 2]]);
        assert!(hermite_via_howell(&a, &BigInt::from(4)).is_ok());
        let a = m(&[&[4, 0]]);
        assert!(matches!(hermite_via_howell(&a, &BigInt::from(2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn eliminator_examples() {
        let s = SmithForm::from_i64(&[4]).unwrap();
        let (t, e) = hermite_with_eliminator(&s, &m(&[&[2]])).unwrap();
        assert_eq!(t.mat(), &m(&[&[2]]));
        assert_eq!(e, m(&[&[1]]));

        let s = SmithForm::from_i64(&[2, 6, 72]).unwrap();
        let a = m(&[&[1, 5, 19]]);
        let (t, e) = hermite_with_eliminator(&s, &a).unwrap();
        assert_eq!(t.mat(), &m(&[&[1, 1, 5], &[0, 2, 4], &[0, 0, 6]]));
        assert_eq!(e.shape(), (3, 1));
        let ea = matmul(&e, &a).unwrap();
        for i in 0..3 {
            assert!(e[(i, 0)] >= BigInt::zero() && e[(i, 0)] < BigInt::from(72));
            for j in 0..3 {
                assert!((&t.mat()[(i, j)] - &ea[(i, j)]).is_multiple_of(&s.diag()[j]));
            }
        }

        let (t, e) = hermite_with_eliminator(&s, &IntMat::zeros(0, 3)).unwrap();
        assert_eq!(t.mat(), &s.to_matrix());
        assert_eq!(e.shape(), (3, 0));
    }
}
