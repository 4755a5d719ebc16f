//! Divide-and-conquer Hermite basis of a coprime `R(S, F)` whose basis is
//! known to be index `(k, m)`, plus the entry point for arbitrary inputs.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{dim_err, Error, Result};
use crate::howell::hermite_via_howell;
use crate::intmat::{colmod, is_colmod_reduced, matmul, DiagonalModulus, HermiteBasis, IntMat, SmithForm};
use crate::linmul::{colmod_mul_hermite, mul_tall};
use crate::massager::smith_massager;
use crate::modn::ResidueCtx;
use crate::options::Options;
use crate::relations::to_smith_coprime;
use crate::structured_hermite::{coprime_parts, hermite_of_stack};

/// Basis of `R(sI_1, f)` when it is index `(k, 1)`: column `k` holds `s`
/// on the diagonal and `C` above it with `C f_k = -f_{0..k} mod s`.
pub fn base_case(s: &BigInt, f: &IntMat, k: usize) -> Result<HermiteBasis> {
    let n = f.rows();
    if f.cols() != 1 || k >= n {
        return dim_err("base case needs a single column and k < n");
    }
    if s.is_one() {
        return Ok(HermiteBasis::identity(n));
    }
    if (k + 1..n).any(|j| !f[(j, 0)].is_zero()) {
        return Err(Error::Precondition("rows below the pivot must vanish mod s".into()));
    }
    let ctx = ResidueCtx::new(s.clone());
    let inv = ctx
        .inverse(&f[(k, 0)])
        .ok_or_else(|| Error::Precondition("pivot entry is not a unit mod s".into()))?;
    let mut h = IntMat::identity(n);
    h[(k, k)] = s.clone();
    for i in 0..k {
        h[(i, k)] = ctx.reduce(&-(&f[(i, 0)] * &inv));
    }
    Ok(HermiteBasis::new_unchecked(h))
}

/// Hermite basis of the coprime `R(S, F)` known to be index `(k, m)`, with
/// `m = dim S`.
pub fn hermite_basis(s: &SmithForm, f: &IntMat, k: usize, opts: &Options) -> Result<HermiteBasis> {
    let m = s.dim();
    hermite_basis_split(s, f, k, m / 2, opts)
}

/// As [`hermite_basis`], with the top-level split `m1` chosen by the caller
/// (`0 < m1 < m`); recursive calls use the even split.
pub fn hermite_basis_split(
    s: &SmithForm,
    f: &IntMat,
    k: usize,
    m1: usize,
    opts: &Options,
) -> Result<HermiteBasis> {
    let m = s.dim();
    let n = f.rows();
    if f.cols() != m {
        return dim_err(format!("F has {} columns but S has dimension {m}", f.cols()));
    }
    if k + m > n {
        return dim_err(format!("index ({k}, {m}) does not fit {n} rows"));
    }
    if !is_colmod_reduced(f, s.modulus()) {
        return Err(Error::NotReduced("F is not reduced column-modulo S".into()));
    }
    if opts.checking() && m > 0 {
        let stack = IntMat::vstack(&[&s.to_matrix(), f])?;
        if hermite_via_howell(&stack, &s.largest())?.mat() != &IntMat::identity(m) {
            return Err(Error::Precondition("inputs are not coprime".into()));
        }
    }
    let h = recurse(s, f, k, m1, opts)?;
    if h.det() != s.det() {
        return Err(Error::Precondition(
            "basis determinant differs from det S; the index guess is wrong".into(),
        ));
    }
    if opts.checking() && !colmod(&matmul(h.mat(), f)?, s.modulus())?.is_zero() {
        return Err(Error::Precondition("H F is not zero modulo S".into()));
    }
    h.with_index(k, m)
}

/// Intermediate values of the top-level split of one recursive call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTrace {
    /// Hermite basis of `L(A) + L(S)` for the trailing rows `A` of `F`.
    pub t: HermiteBasis,
    pub h1: HermiteBasis,
    /// `colmod(H1 F, S)`.
    pub b: IntMat,
    /// The coprime pair `R(K, C)` replacing `R(S, B)`.
    pub k: HermiteBasis,
    pub c: IntMat,
    pub h2: HermiteBasis,
}

/// Runs [`hermite_basis_split`] and also reports the top-level split.
pub fn hermite_basis_traced(
    s: &SmithForm,
    f: &IntMat,
    k: usize,
    m1: usize,
    opts: &Options,
) -> Result<(HermiteBasis, SplitTrace)> {
    let mut trace = None;
    let h = recurse_inner(s, f, k, m1, opts, Some(&mut trace))?;
    let trace = trace.ok_or_else(|| Error::Precondition("no split happens for m < 2".into()))?;
    Ok((h, trace))
}

fn recurse(s: &SmithForm, f: &IntMat, k: usize, m1: usize, opts: &Options) -> Result<HermiteBasis> {
    recurse_inner(s, f, k, m1, opts, None)
}

fn recurse_inner(
    s: &SmithForm,
    f: &IntMat,
    k: usize,
    m1: usize,
    opts: &Options,
    trace: Option<&mut Option<SplitTrace>>,
) -> Result<HermiteBasis> {
    let m = s.dim();
    let n = f.rows();
    if m == 0 {
        return Ok(HermiteBasis::identity(n));
    }
    if m == 1 {
        return base_case(&s.diag()[0], f, k);
    }
    if m1 == 0 || m1 >= m {
        return dim_err("split must satisfy 0 < m1 < m");
    }
    let m2 = m - m1;
    let sub = opts.quarter();

    // part 1
    let a = f.submatrix(k + m1..n, 0..m);
    let t = hermite_of_stack(&a, s)?;
    let mas1 = smith_massager(t.mat(), &sub)?;
    let f1 = mul_tall(f, s.modulus(), &mas1.f, mas1.s.modulus())?;
    let (s1, f1) = strip(&mas1.s, &f1, m - m1)?;
    let h1 = recurse(&s1, &f1, k, m1 / 2, &sub)?;

    // part 2
    let b = colmod_mul_hermite(&h1, f, s.modulus())?;
    let (c, kk) = coprime_parts(&t, &b, s)?;
    let mas2 = smith_massager(kk.mat(), &sub)?;
    let kdiag = DiagonalModulus::new(kk.mat().diagonal())?;
    let f2 = mul_tall(&c, &kdiag, &mas2.f, mas2.s.modulus())?;
    let (s2, f2) = strip(&mas2.s, &f2, m - m2)?;
    let h2 = recurse(&s2, &f2, k + m1, m2 / 2, &sub)?;

    if opts.checking() && s1.det() * s2.det() != s.det() {
        return Err(Error::Precondition("determinant does not split across subproblems".into()));
    }
    // H2 H1: H1's rows from k + m1 on are identity rows, so the product
    // just takes columns k + m1.. k + m from H2
    let mut h = h1.mat().clone();
    for i in 0..k + m {
        for j in k + m1..k + m {
            h[(i, j)] = h2.mat()[(i, j)].clone();
        }
    }
    if let Some(slot) = trace {
        *slot = Some(SplitTrace { t, h1, b, k: kk, c, h2 });
    }
    Ok(HermiteBasis::new_unchecked(h))
}

/// Removes `count` leading invariant factors, which must all be one.
fn strip(s: &SmithForm, f: &IntMat, count: usize) -> Result<(SmithForm, IntMat)> {
    if s.trivial_count() < count {
        return Err(Error::Precondition(format!(
            "subproblem has more nontrivial invariant factors than its index allows ({} trivial, {count} needed)",
            s.trivial_count()
        )));
    }
    let m = s.dim();
    Ok((s.slice(count..m), f.submatrix(0..f.rows(), count..m)))
}

/// Hermite basis of `R(M, G)` for a full column rank `M`.
pub fn relations_hermite_basis(m: &IntMat, g: &IntMat, opts: &Options) -> Result<HermiteBasis> {
    relations_hermite_basis_with_index(m, g, None, opts)
}

/// As [`relations_hermite_basis`], optionally with a known index `(k, mbar)`
/// of the answer.
pub fn relations_hermite_basis_with_index(
    m: &IntMat,
    g: &IntMat,
    index: Option<(usize, usize)>,
    opts: &Options,
) -> Result<HermiteBasis> {
    let n = g.rows();
    let (k, mbar) = index.unwrap_or((0, n));
    if k + mbar > n {
        return dim_err(format!("index ({k}, {mbar}) does not fit {n} rows"));
    }
    let (s, f) = to_smith_coprime(m, g, &opts.quarter())?;
    let r = s.dim();
    if r == 0 {
        return Ok(HermiteBasis::identity(n));
    }
    if r > mbar {
        return Err(Error::Precondition(format!(
            "{r} nontrivial invariant factors cannot fit an index with {mbar} columns"
        )));
    }
    let s = s.with_leading_ones(mbar);
    let f = IntMat::hstack(&[&IntMat::zeros(n, mbar - r), &f])?;
    let h = hermite_basis(&s, &f, k, &opts.quarter())?;
    Ok(h)
}
