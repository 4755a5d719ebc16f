//! Hermite bases of stacks `[A; S]` with `S` a Smith form, computed in
//! stages that each fix the leading half of the remaining columns while
//! working modulo the largest invariant factor of the current block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, Error, Result};
use crate::howell::{hermite_via_howell, hermite_with_eliminator};
use crate::intmat::{
    bitlen, check_hermite, colmod, is_colmod_reduced, triangular_contains, DiagonalModulus,
    HermiteBasis, IntMat, SmithForm,
};
use crate::linmul::{mul_tall, mul_wide};

/// Blocks of the unimodular transform used in one stage, computed modulo `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTransform {
    pub e: IntMat,
    pub q: IntMat,
    pub c: IntMat,
    pub k: IntMat,
    pub s: BigInt,
}

fn hnf(mat: &IntMat, s: &BigInt) -> Result<IntMat> {
    Ok(hermite_via_howell(mat, s)?.into_mat())
}

fn reduce_mod(a: &IntMat, s: &BigInt) -> IntMat {
    IntMat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].mod_floor(s))
}

fn check_block(h: &IntMat, r0: usize, t: &IntMat) -> Result<()> {
    let m = t.rows();
    if h.submatrix(r0..r0 + m, r0..r0 + m) != *t {
        return Err(Error::Precondition(
            "T is not the Hermite basis of the lattice spanned by A and S".into(),
        ));
    }
    Ok(())
}

/// Blocks `G`, `Q`, `C`, `K` of the Hermite form of
/// `[[I, F, 0, 0], [0, T, 0, I], [0, A, I, 0], [0, S, 0, 0]]`.
///
/// `F` and `A` are processed in row chunks of height `m`, one Howell form
/// over Z/(s^2) per chunk.
pub fn structured_hermite_blocks(
    f: &IntMat,
    t: &HermiteBasis,
    a: &IntMat,
    s: &SmithForm,
) -> Result<(IntMat, IntMat, IntMat, IntMat)> {
    let m = s.dim();
    if t.dim() != m || f.cols() != m || a.cols() != m {
        return dim_err("structured blocks: F, T, A and S must share the column dimension");
    }
    let tm = t.mat();
    for i in 0..m {
        let row_s: Vec<BigInt> = (0..m)
            .map(|j| if i == j { s.diag()[i].clone() } else { BigInt::zero() })
            .collect();
        if !triangular_contains(tm, &row_s)? {
            return Err(Error::Precondition("L(S) is not contained in L(T)".into()));
        }
    }
    for i in 0..a.rows() {
        if !triangular_contains(tm, a.row(i))? {
            return Err(Error::Precondition("L(A) is not contained in L(T)".into()));
        }
    }
    chunked_blocks(f, tm, a, s, m.max(1))
}

fn chunked_blocks(
    f: &IntMat,
    t: &IntMat,
    a: &IntMat,
    s: &SmithForm,
    chunk: usize,
) -> Result<(IntMat, IntMat, IntMat, IntMat)> {
    let m = s.dim();
    let big = s.largest();
    let f = reduce_mod(f, &big);
    let a = reduce_mod(a, &big);
    let sm = s.to_matrix();
    let id = IntMat::identity(m);
    let mut k: Option<IntMat> = None;

    let mut g = IntMat::zeros(f.rows(), m);
    let mut q = IntMat::zeros(f.rows(), m);
    let mut r = 0;
    while r < f.rows() {
        let h = chunk.min(f.rows() - r);
        let fi = f.submatrix(r..r + h, 0..m);
        let ih = IntMat::identity(h);
        let mat = IntMat::blocks(&[
            vec![Some(&ih), Some(&fi), None],
            vec![None, Some(t), Some(&id)],
            vec![None, Some(&sm), None],
        ])?;
        let hf = hnf(&mat, &big)?;
        check_block(&hf, h, t)?;
        g.set_block(r, 0, &hf.submatrix(0..h, h..h + m));
        q.set_block(r, 0, &hf.submatrix(0..h, h + m..h + 2 * m));
        k.get_or_insert_with(|| hf.submatrix(h + m..h + 2 * m, h + m..h + 2 * m));
        r += h;
    }

    let mut c = IntMat::zeros(a.rows(), m);
    let mut r = 0;
    while r < a.rows() {
        let h = chunk.min(a.rows() - r);
        let ai = a.submatrix(r..r + h, 0..m);
        let ih = IntMat::identity(h);
        let mat = IntMat::blocks(&[
            vec![Some(t), None, Some(&id)],
            vec![Some(&ai), Some(&ih), None],
            vec![Some(&sm), None, None],
        ])?;
        let hc = hnf(&mat, &big)?;
        check_block(&hc, 0, t)?;
        c.set_block(r, 0, &hc.submatrix(m..m + h, m + h..m + h + m));
        k.get_or_insert_with(|| hc.submatrix(m + h..2 * m + h, m + h..2 * m + h));
        r += h;
    }

    let k = match k {
        Some(k) => k,
        None => {
            let mat = IntMat::blocks(&[vec![Some(t), Some(&id)], vec![Some(&sm), None]])?;
            let hk = hnf(&mat, &big)?;
            check_block(&hk, 0, t)?;
            hk.submatrix(m..2 * m, m..2 * m)
        }
    };
    Ok((g, q, c, k))
}

/// Computes the stage transform for the leading block of columns, along
/// with the new rows `G1` above and the Hermite basis `T1`.
pub fn stage_transform(
    f1: &IntMat,
    a1: &IntMat,
    s1: &SmithForm,
) -> Result<(StageTransform, IntMat, HermiteBasis)> {
    let m1 = s1.dim();
    if f1.cols() != m1 || a1.cols() != m1 {
        return dim_err("stage transform: column dimension differs from S1");
    }
    let s = s1.largest();
    let (t1, e) = hermite_with_eliminator(s1, a1)?;
    let (g1, q, c, k) = chunked_blocks(f1, t1.mat(), a1, s1, m1.max(1))?;
    let tr = StageTransform { e, q, c, k, s };
    if cfg!(debug_assertions) {
        let s = &tr.s;
        let bounded = |x: &IntMat| x.entries().iter().all(|v| !v.is_negative() && v <= s);
        debug_assert!(bounded(&tr.e) && bounded(&tr.q) && bounded(&tr.c) && bounded(&tr.k));
    }
    Ok((tr, g1, t1))
}

/// `colmod(X B, S2)` for the stacked blocks `X = [Q; I; C; K]`, whose
/// entries lie in `[0, s]`.
fn apply_stacked(
    q: &IntMat,
    c: &IntMat,
    k: &IntMat,
    s: &BigInt,
    b: &IntMat,
    s2: &SmithForm,
) -> Result<IntMat> {
    let m1 = b.rows();
    let id = IntMat::identity(m1);
    let stacked = IntMat::vstack(&[q, &id, c, k])?;
    let bound = DiagonalModulus::new(vec![s + 1u32; m1])?;
    mul_tall(&stacked, &bound, b, s2.modulus())
}

/// Applies a stage transform to the trailing columns: returns
/// `[F2 + Q E A2; E A2]` and `[A2 + C E A2; K E A2]` column-modulo `S2`.
pub fn stage_apply(
    tr: &StageTransform,
    f2: &IntMat,
    a2: &IntMat,
    s2: &SmithForm,
) -> Result<(IntMat, IntMat)> {
    let m1 = tr.e.rows();
    let m2 = s2.dim();
    if f2.cols() != m2 || a2.cols() != m2 || tr.e.cols() != a2.rows() {
        return dim_err("stage apply: blocks do not conform");
    }
    if tr.q.rows() != f2.rows() || tr.c.rows() != a2.rows() {
        return dim_err("stage apply: transform does not match the work matrix");
    }
    let rowmod_s = DiagonalModulus::new(vec![tr.s.clone(); m1])?;
    let b = mul_wide(&tr.e, &rowmod_s, a2, s2.modulus())?;
    finish_apply(&tr.q, &tr.c, &tr.k, &tr.s, &b, f2, a2, s2)
}

#[allow(clippy::too_many_arguments)]
fn finish_apply(
    q: &IntMat,
    c: &IntMat,
    k: &IntMat,
    s: &BigInt,
    b: &IntMat,
    f2: &IntMat,
    a2: &IntMat,
    s2: &SmithForm,
) -> Result<(IntMat, IntMat)> {
    let (nf, na, m1) = (f2.rows(), a2.rows(), b.rows());
    let m2 = s2.dim();
    let prod = if m2 == 0 {
        IntMat::zeros(nf + m1 + na + m1, 0)
    } else {
        apply_stacked(q, c, k, s, b, s2)?
    };
    let base = IntMat::vstack(&[f2, &IntMat::zeros(m1, m2), a2, &IntMat::zeros(m1, m2)])?;
    let sum = colmod(&base.add(&prod)?, s2.modulus())?;
    let new_f = sum.submatrix(0..nf + m1, 0..m2);
    let new_a = sum.submatrix(nf + m1..nf + m1 + na + m1, 0..m2);
    Ok((new_f, new_a))
}

fn check_stage_bound(s: &BigInt, det_s: &BigInt, mbar: usize) {
    if cfg!(debug_assertions) && mbar > 0 {
        let lhs = bitlen(s) as f64;
        let rhs = 2.0 * bitlen(det_s) as f64 / mbar as f64 + 1.0;
        debug_assert!(lhs <= rhs, "largest invariant factor of the stage block is too large");
    }
}

/// Dimension of the remaining block and the modulus used at one stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageInfo {
    pub mbar: usize,
    pub s: BigInt,
}

/// Hermite basis of `L(A) + L(S)` for `A` reduced column-modulo `S`.
pub fn hermite_of_stack(a: &IntMat, s: &SmithForm) -> Result<HermiteBasis> {
    Ok(hermite_of_stack_traced(a, s)?.0)
}

/// As [`hermite_of_stack`], also listing every stage.
pub fn hermite_of_stack_traced(a: &IntMat, s: &SmithForm) -> Result<(HermiteBasis, Vec<StageInfo>)> {
    let m = s.dim();
    if a.cols() != m {
        return dim_err(format!("A has {} columns but S has dimension {m}", a.cols()));
    }
    if !is_colmod_reduced(a, s.modulus()) {
        return Err(Error::NotReduced("A is not reduced column-modulo S".into()));
    }
    let det_s = s.det();
    let mut out = IntMat::zeros(m, m);
    let mut fbar = IntMat::zeros(0, m);
    let mut abar = a.clone();
    let mut stages = Vec::new();
    let mut c0 = 0;
    while c0 < m {
        let mbar = m - c0;
        let m1 = mbar.div_ceil(2);
        let s1 = s.slice(c0..c0 + m1);
        let s2 = s.slice(c0 + m1..m);
        let (nf, na) = (fbar.rows(), abar.rows());
        let f1 = fbar.submatrix(0..nf, 0..m1);
        let f2 = fbar.submatrix(0..nf, m1..mbar);
        let a1 = abar.submatrix(0..na, 0..m1);
        let a2 = abar.submatrix(0..na, m1..mbar);
        let big = s1.largest();
        check_stage_bound(&big, &det_s, mbar);
        stages.push(StageInfo { mbar, s: big.clone() });

        let (g1, t1, new_f, new_a) = if big.is_one() {
            // a block of unit invariant factors: everything reduces to zero
            let z = |r: usize| IntMat::zeros(r, mbar - m1);
            (
                IntMat::zeros(nf, m1),
                HermiteBasis::identity(m1),
                IntMat::vstack(&[&f2, &z(m1)])?,
                IntMat::vstack(&[&a2, &z(m1)])?,
            )
        } else {
            let (tr, g1, t1) = stage_transform(&f1, &a1, &s1)?;
            let (new_f, new_a) = stage_apply(&tr, &f2, &a2, &s2)?;
            (g1, t1, new_f, new_a)
        };
        out.set_block(0, c0, &g1);
        out.set_block(c0, c0, t1.mat());
        fbar = new_f;
        abar = new_a;
        c0 += m1;
    }
    debug_assert!(check_hermite(&out).is_ok());
    Ok((HermiteBasis::new(out)?, stages))
}

/// Blocks `C` (n x m) and `K` (m x m) such that `[I C; 0 K]` is the Hermite
/// form of `[I, -A T^-1; 0, S T^-1]`, where `T` is the Hermite basis of
/// `L(A) + L(S)`.
pub fn coprime_parts(
    t: &HermiteBasis,
    a: &IntMat,
    s: &SmithForm,
) -> Result<(IntMat, HermiteBasis)> {
    let m = s.dim();
    let n = a.rows();
    if a.cols() != m || t.dim() != m {
        return dim_err("coprime parts: T, A and S must share the column dimension");
    }
    if !is_colmod_reduced(a, s.modulus()) {
        return Err(Error::NotReduced("A is not reduced column-modulo S".into()));
    }
    let tm = t.mat();
    let det_s = s.det();
    let mut abar = a.clone();
    let mut right = IntMat::zeros(n, m);
    let mut c0 = 0;
    while c0 < m {
        let mbar = m - c0;
        let m1 = mbar.div_ceil(2);
        let s1 = s.slice(c0..c0 + m1);
        let s2 = s.slice(c0 + m1..m);
        let na = abar.rows();
        let a1 = abar.submatrix(0..na, 0..m1);
        let a2 = abar.submatrix(0..na, m1..mbar);
        let t1 = tm.submatrix(c0..c0 + m1, c0..c0 + m1);
        let t12 = tm.submatrix(c0..c0 + m1, c0 + m1..m);
        let big = s1.largest();
        check_stage_bound(&big, &det_s, mbar);

        let (c, k) = if big.is_one() {
            if t1 != IntMat::identity(m1) {
                return Err(Error::Precondition(
                    "T is not the Hermite basis of the lattice spanned by A and S".into(),
                ));
            }
            (IntMat::zeros(na, m1), IntMat::identity(m1))
        } else {
            let empty = IntMat::zeros(0, m1);
            let (_, _, c, k) = chunked_blocks(&empty, &t1, &a1, &s1, m1)?;
            (c, k)
        };
        let new_a = if big.is_one() {
            IntMat::vstack(&[&a2, &IntMat::zeros(m1, mbar - m1)])?
        } else {
            let b = colmod(&t12, s2.modulus())?;
            let empty = IntMat::zeros(0, mbar - m1);
            finish_apply(&IntMat::zeros(0, m1), &c, &k, &big, &b, &empty, &a2, &s2)?.1
        };
        right.set_block(0, c0, &c);
        let mut krows = IntMat::zeros(m1, m);
        krows.set_block(0, c0, &k);
        right = IntMat::vstack(&[&right, &krows])?;
        abar = new_a;
        c0 += m1;
    }
    debug_assert!(abar.is_zero());
    let c = right.submatrix(0..n, 0..m);
    let k = HermiteBasis::new(right.submatrix(n..n + m, 0..m))
        .map_err(|e| Error::Precondition(format!("K block: {e}")))?;
    if t.det() * k.det() != det_s {
        return Err(Error::Precondition(
            "T is not the Hermite basis of the lattice spanned by A and S".into(),
        ));
    }
    Ok((c, k))
}
