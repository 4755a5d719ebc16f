//! Smith massagers: a Smith form `S` of a nonsingular `M` together with a
//! reduced `F` such that `M F = 0` column-modulo `S` and `[S; F]` generates
//! the whole lattice.
//!
//! The massager here comes from Smith elimination modulo `|det M|`. Column
//! operations are integer unimodular, so the tracked column transform is the
//! reduction of a unimodular `V`, and `F = colmod(V, S)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, Error, Result};
use crate::howell::hermite_via_howell;
use crate::intmat::{colmod, determinant, matmul, IntMat, SmithForm};
use crate::modn::{ext_gcd, ResidueCtx};
use crate::options::Options;

/// A Smith form together with a reduced massaging matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithMassager {
    pub s: SmithForm,
    pub f: IntMat,
}

/// Smith elimination either over Z (exact) or over Z/(d).
struct Elim {
    w: IntMat,
    u: Option<IntMat>,
    v: IntMat,
    ctx: Option<ResidueCtx>,
}

impl Elim {
    fn red(&self, x: BigInt) -> BigInt {
        match &self.ctx {
            Some(c) => c.reduce(&x),
            None => x,
        }
    }

    /// Size used to pick pivots; smaller is better.
    fn weight(&self, x: &BigInt) -> BigInt {
        match &self.ctx {
            Some(c) => c.gcd_n(x),
            None => x.abs(),
        }
    }

    fn row_lin(&mut self, r1: usize, r2: usize, c: [&BigInt; 4]) {
        let n = self.w.cols();
        for k in 0..n {
            let (x, y) = (self.w[(r1, k)].clone(), self.w[(r2, k)].clone());
            self.w[(r1, k)] = self.red(c[0] * &x + c[1] * &y);
            self.w[(r2, k)] = self.red(c[2] * &x + c[3] * &y);
        }
        if let Some(u) = self.u.as_mut() {
            for k in 0..u.cols() {
                let (x, y) = (u[(r1, k)].clone(), u[(r2, k)].clone());
                u[(r1, k)] = c[0] * &x + c[1] * &y;
                u[(r2, k)] = c[2] * &x + c[3] * &y;
            }
        }
    }

    fn col_lin(&mut self, c1: usize, c2: usize, c: [&BigInt; 4]) {
        for k in 0..self.w.rows() {
            let (x, y) = (self.w[(k, c1)].clone(), self.w[(k, c2)].clone());
            self.w[(k, c1)] = self.red(c[0] * &x + c[1] * &y);
            self.w[(k, c2)] = self.red(c[2] * &x + c[3] * &y);
        }
        for k in 0..self.v.rows() {
            let (x, y) = (self.v[(k, c1)].clone(), self.v[(k, c2)].clone());
            self.v[(k, c1)] = self.red(c[0] * &x + c[1] * &y);
            self.v[(k, c2)] = self.red(c[2] * &x + c[3] * &y);
        }
    }

    /// Zeroes `w[i][k]` against the pivot row `k`.
    fn clear_below(&mut self, k: usize, i: usize) {
        let a = self.w[(k, k)].clone();
        let b = self.w[(i, k)].clone();
        let (one, zero) = (BigInt::one(), BigInt::zero());
        if !a.is_zero() && b.is_multiple_of(&a) {
            let q = -(&b / &a);
            self.row_lin(k, i, [&one, &zero, &q, &one]);
            return;
        }
        let (g, s, t) = ext_gcd(&a, &b);
        let (ag, bg) = (&a / &g, &b / &g);
        let nag = -ag;
        self.row_lin(k, i, [&s, &t, &bg, &nag]);
    }

    /// Zeroes `w[k][j]` against the pivot column `k`.
    fn clear_right(&mut self, k: usize, j: usize) {
        let a = self.w[(k, k)].clone();
        let b = self.w[(k, j)].clone();
        let (one, zero) = (BigInt::one(), BigInt::zero());
        if !a.is_zero() && b.is_multiple_of(&a) {
            let q = -(&b / &a);
            self.col_lin(k, j, [&one, &zero, &q, &one]);
            return;
        }
        let (g, s, t) = ext_gcd(&a, &b);
        let (ag, bg) = (&a / &g, &b / &g);
        let nag = -ag;
        self.col_lin(k, j, [&s, &t, &bg, &nag]);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.w.swap_rows(a, b);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (one, zero) = (BigInt::one(), BigInt::zero());
        // a plain swap, written as a column operation of determinant -1
        self.col_lin(a, b, [&zero, &one, &one, &zero]);
    }

    fn scale_row(&mut self, k: usize, c: &BigInt) {
        for j in 0..self.w.cols() {
            let x = &self.w[(k, j)] * c;
            self.w[(k, j)] = self.red(x);
        }
        if let Some(u) = self.u.as_mut() {
            for j in 0..u.cols() {
                u[(k, j)] = &u[(k, j)] * c;
            }
        }
    }

    /// Runs the elimination; returns the diagonal, with `None` for positions
    /// where the trailing block vanished.
    fn run(&mut self) -> Vec<Option<BigInt>> {
        let n = self.w.rows();
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            let mut best: Option<(usize, usize, BigInt)> = None;
            'scan: for i in k..n {
                for j in k..n {
                    let x = &self.w[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    let wt = self.weight(x);
                    if best.as_ref().map_or(true, |b| wt < b.2) {
                        let unit = wt.is_one();
                        best = Some((i, j, wt));
                        if unit {
                            break 'scan;
                        }
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                diag.extend((k..n).map(|_| None));
                break;
            };
            self.swap_rows(k, bi);
            self.swap_cols(k, bj);
            loop {
                for i in k + 1..n {
                    if !self.w[(i, k)].is_zero() {
                        self.clear_below(k, i);
                    }
                }
                for j in k + 1..n {
                    if !self.w[(k, j)].is_zero() {
                        self.clear_right(k, j);
                    }
                }
                if (k + 1..n).any(|i| !self.w[(i, k)].is_zero()) {
                    continue;
                }
                let p = self.w[(k, k)].clone();
                let bad = (k + 1..n).find(|&i| (k + 1..n).any(|j| !self.w[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        self.row_lin(k, i, [&one, &one, &BigInt::zero(), &one]);
                    }
                    None => break,
                }
            }
            let unit = match &self.ctx {
                Some(c) => c.unit_normalizer(&self.w[(k, k)]),
                None if self.w[(k, k)].is_negative() => -BigInt::one(),
                None => BigInt::one(),
            };
            if !unit.is_one() {
                self.scale_row(k, &unit);
            }
            diag.push(Some(self.w[(k, k)].clone()));
        }
        diag
    }
}

/// Exact Smith decomposition `U M V = S` with `U`, `V` unimodular.
pub fn smith_decomposition(m: &IntMat) -> Result<(IntMat, SmithForm, IntMat)> {
    if !m.is_square() {
        return dim_err("Smith decomposition needs a square matrix");
    }
    let n = m.rows();
    let mut el = Elim {
        w: m.clone(),
        u: Some(IntMat::identity(n)),
        v: IntMat::identity(n),
        ctx: None,
    };
    let diag = el.run();
    let diag: Vec<BigInt> = diag.into_iter().map(|d| d.ok_or(Error::Singular)).collect::<Result<_>>()?;
    let s = SmithForm::new(diag)?;
    Ok((el.u.unwrap(), s, el.v))
}

fn abs_det(m: &IntMat) -> Result<BigInt> {
    if m.is_upper_triangular() {
        Ok(m.diagonal().iter().product::<BigInt>().abs())
    } else {
        Ok(determinant(m)?.abs())
    }
}

/// Smith form and column transform modulo `|det m|`.
fn modular_smith(m: &IntMat) -> Result<(SmithForm, IntMat)> {
    if !m.is_square() {
        return dim_err("Smith massager needs a square matrix");
    }
    let n = m.rows();
    let d = abs_det(m)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    if d.is_one() {
        return Ok((SmithForm::identity(n), IntMat::identity(n)));
    }
    let ctx = ResidueCtx::new(d.clone());
    let mut el = Elim {
        w: IntMat::from_fn(n, n, |i, j| ctx.reduce(&m[(i, j)])),
        u: None,
        v: IntMat::identity(n),
        ctx: Some(ctx),
    };
    let diag: Vec<BigInt> = el
        .run()
        .into_iter()
        .map(|p| match p {
            Some(x) if !x.is_zero() => x,
            _ => d.clone(),
        })
        .collect();
    debug_assert_eq!(diag.iter().product::<BigInt>(), d);
    Ok((SmithForm::new(diag)?, el.v))
}

/// Smith form of a nonsingular matrix.
pub fn smith_form(m: &IntMat) -> Result<SmithForm> {
    Ok(modular_smith(m)?.0)
}

/// A reduced Smith massager of a nonsingular `m`.
///
/// The failure budget in `opts` is accepted for interface compatibility;
/// this construction is deterministic and never reports failure.
pub fn smith_massager(m: &IntMat, opts: &Options) -> Result<SmithMassager> {
    let _ = opts.epsilon;
    let (s, v) = modular_smith(m)?;
    let f = colmod(&v, s.modulus())?;
    let mas = SmithMassager { s, f };
    if opts.check_invariants {
        debug_assert!(verify_massager(m, &mas)?);
        if !verify_massager(m, &mas)? {
            return Err(Error::Precondition("computed massager failed verification".into()));
        }
    }
    Ok(mas)
}

/// Checks that `mas` massages `m`: its nontrivial invariant factors are
/// those of `m`, `m F = 0` column-modulo `S`, and `[S; F]` generates Z^k.
pub fn verify_massager(m: &IntMat, mas: &SmithMassager) -> Result<bool> {
    let k = mas.s.dim();
    if mas.f.cols() != k || m.cols() != mas.f.rows() {
        return dim_err("massager shape does not match the matrix");
    }
    let sm = smith_form(m)?;
    let nontrivial = |s: &SmithForm| s.diag().iter().filter(|d| !d.is_one()).cloned().collect::<Vec<_>>();
    if nontrivial(&sm) != nontrivial(&mas.s) {
        return Ok(false);
    }
    let mf = matmul(m, &mas.f)?;
    if !colmod(&mf, mas.s.modulus())?.is_zero() {
        return Ok(false);
    }
    let stack = IntMat::vstack(&[&mas.s.to_matrix(), &mas.f])?;
    let h = hermite_via_howell(&stack, &mas.s.largest())?;
    Ok(h.mat() == &IntMat::identity(k))
}

/// Drops the leading unit invariant factors and their columns of `F`.
pub fn trim_trivial(mas: &SmithMassager) -> SmithMassager {
    let t = mas.s.trivial_count();
    let k = mas.s.dim();
    SmithMassager {
        s: mas.s.slice(t..k),
        f: mas.f.submatrix(0..mas.f.rows(), t..k),
    }
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

    #[test]
    fn decomposition_examples() {
        for a in [sample(), IntMat::identity(3), m(&[&[4, 0], &[0, 6]]), m(&[&[0, 3], &[-2, 5]])] {
            let (u, s, v) = smith_decomposition(&a).unwrap();
            let usv = matmul(&matmul(&u, &a).unwrap(), &v).unwrap();
            assert_eq!(usv, s.to_matrix());
            assert_eq!(determinant(&u).unwrap().abs(), BigInt::one());
            assert_eq!(determinant(&v).unwrap().abs(), BigInt::one());
        }
        assert_eq!(smith_decomposition(&sample()).unwrap().1, SmithForm::from_i64(&[1, 1, 24]).unwrap());
        assert_eq!(smith_decomposition(&IntMat::identity(2)).unwrap().1, SmithForm::identity(2));
        assert_eq!(
            smith_decomposition(&m(&[&[4, 0], &[0, 6]])).unwrap().1,
            SmithForm::from_i64(&[2, 12]).unwrap()
        );
        assert_eq!(smith_decomposition(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn massager_examples() {
        let opts = Options::checked();
        let mas = smith_massager(&sample(), &opts).unwrap();
        assert_eq!(mas.s, SmithForm::from_i64(&[1, 1, 24]).unwrap());
        assert!(verify_massager(&sample(), &mas).unwrap());

        let mas = smith_massager(&IntMat::identity(3), &opts).unwrap();
        assert_eq!(mas.s, SmithForm::identity(3));
        assert!(mas.f.is_zero());

        let d = m(&[&[2, 0], &[0, 3]]);
        let mas = smith_massager(&d, &opts).unwrap();
        assert_eq!(mas.s, SmithForm::from_i64(&[1, 6]).unwrap());
        assert!(verify_massager(&d, &mas).unwrap());

        assert_eq!(smith_massager(&m(&[&[1, 2], &[2, 4]]), &opts), Err(Error::Singular));
    }

    #[test]
    fn known_massager_verifies() {
        let s = SmithForm::from_i64(&[1, 1, 24]).unwrap();
        let f = m(&[&[0, 0, 19], &[0, 0, 10], &[0, 0, 3]]);
        let full = SmithMassager { s, f };
        assert!(verify_massager(&sample(), &full).unwrap());
        let trimmed = trim_trivial(&full);
        assert_eq!(trimmed.s, SmithForm::from_i64(&[24]).unwrap());
        assert_eq!(trimmed.f, IntMat::column(&[19, 10, 3]));
        assert!(verify_massager(&sample(), &trimmed).unwrap());

        let bad = SmithMassager {
            s: SmithForm::from_i64(&[24]).unwrap(),
            f: IntMat::column(&[20, 10, 3]),
        };
        assert!(!verify_massager(&sample(), &bad).unwrap());
    }

    #[test]
    fn trim_cases() {
        let id = SmithMassager {
            s: SmithForm::identity(2),
            f: IntMat::zeros(2, 2),
        };
        assert_eq!(trim_trivial(&id).s.dim(), 0);
        let keep = SmithMassager {
            s: SmithForm::from_i64(&[2, 4]).unwrap(),
            f: m(&[&[1, 3], &[0, 1]]),
        };
        assert_eq!(trim_trivial(&keep), keep);
    }
}
