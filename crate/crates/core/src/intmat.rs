//! Dense matrices of arbitrary-precision integers, diagonal moduli, and the
//! column/row reduction and lattice-membership primitives built on them.
//!
//! Residues are always taken in `[0, d)`.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{dim_err, Error, Result};

/// Mathematical residue of `a` modulo `m > 0`, in `[0, m)`.
#[inline]
pub fn residue(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Bit length of `|a|`; zero has bit length 0.
pub fn bitlen(a: &BigInt) -> u64 {
    a.bits()
}

/// Dense row-major integer matrix. Either dimension may be zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            ));
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Builds a matrix from nested rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// Column vector with the given entries.
    pub fn column(entries: &[i64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| BigInt::from(entries[i]))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &IntMat) -> Result<IntMat> {
        if self.shape() != other.shape() {
            return dim_err("add: shapes differ");
        }
        Ok(IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &IntMat) -> Result<IntMat> {
        if self.shape() != other.shape() {
            return dim_err("sub: shapes differ");
        }
        Ok(IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> IntMat {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)].clone()
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMat {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    /// Stacks matrices on top of each other. All must share a column count.
    pub fn vstack(parts: &[&IntMat]) -> Result<IntMat> {
        let cols = match parts.first() {
            Some(p) => p.cols,
            None => return Ok(IntMat::zeros(0, 0)),
        };
        if parts.iter().any(|p| p.cols != cols) {
            return dim_err("vstack: column counts differ");
        }
        let mut data = Vec::with_capacity(parts.iter().map(|p| p.data.len()).sum());
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        Ok(IntMat {
            rows: parts.iter().map(|p| p.rows).sum(),
            cols,
            data,
        })
    }

    /// Places matrices side by side. All must share a row count.
    pub fn hstack(parts: &[&IntMat]) -> Result<IntMat> {
        let rows = match parts.first() {
            Some(p) => p.rows,
            None => return Ok(IntMat::zeros(0, 0)),
        };
        if parts.iter().any(|p| p.rows != rows) {
            return dim_err("hstack: row counts differ");
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = IntMat::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        Ok(out)
    }

    /// Assembles a block matrix from a grid. `None` entries are zero blocks
    /// whose size is taken from the other blocks in the same row/column.
    pub fn blocks(grid: &[Vec<Option<&IntMat>>]) -> Result<IntMat> {
        let nbr = grid.len();
        let nbc = grid.first().map_or(0, Vec::len);
        let mut heights: Vec<Option<usize>> = vec![None; nbr];
        let mut widths: Vec<Option<usize>> = vec![None; nbc];
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != nbc {
                return dim_err("blocks: ragged block grid");
            }
            for (bj, blk) in row.iter().enumerate() {
                if let Some(b) = blk {
                    for (slot, v) in [(&mut heights[bi], b.rows), (&mut widths[bj], b.cols)] {
                        match *slot {
                            Some(x) if x != v => return dim_err("blocks: inconsistent block sizes"),
                            _ => *slot = Some(v),
                        }
                    }
                }
            }
        }
        let heights: Vec<usize> = heights.into_iter().map(|h| h.unwrap_or(0)).collect();
        let widths: Vec<usize> = widths.into_iter().map(|w| w.unwrap_or(0)).collect();
        let mut out = IntMat::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, blk) in row.iter().enumerate() {
                if let Some(b) = blk {
                    out.set_block(r0, c0, b);
                }
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Largest bit length of an entry in each column.
    pub fn col_bitlens(&self) -> Vec<u64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| bitlen(&self[(i, j)])).max().unwrap_or(0))
            .collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn max_abs_bits(&self) -> u64 {
        self.data.iter().map(bitlen).max().unwrap_or(0)
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_matrix(self))
    }
}

/// Nonnegative diagonal matrix stored as its diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiagonalModulus {
    diag: Vec<BigInt>,
}

impl DiagonalModulus {
    pub fn new(diag: Vec<BigInt>) -> Result<Self> {
        if let Some(i) = diag.iter().position(Signed::is_negative) {
            return Err(Error::Precondition(format!("negative modulus entry at {i}")));
        }
        Ok(DiagonalModulus { diag })
    }

    pub fn from_i64(diag: &[i64]) -> Result<Self> {
        Self::new(diag.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Reads the diagonal of a square diagonal matrix.
    pub fn from_matrix(m: &IntMat) -> Result<Self> {
        if !m.is_square() {
            return dim_err("diagonal modulus must be square");
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j && !m[(i, j)].is_zero() {
                    return Err(Error::Precondition("modulus is not diagonal".into()));
                }
            }
        }
        Self::new(m.diagonal())
    }

    pub fn ones(m: usize) -> Self {
        DiagonalModulus {
            diag: vec![BigInt::one(); m],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[BigInt] {
        &self.diag
    }

    pub fn is_nonsingular(&self) -> bool {
        self.diag.iter().all(|d| !d.is_zero())
    }

    pub fn check_nonsingular(&self) -> Result<()> {
        match self.diag.iter().position(Zero::is_zero) {
            Some(i) => Err(Error::ZeroModulus(i)),
            None => Ok(()),
        }
    }

    pub fn det(&self) -> BigInt {
        self.diag.iter().product()
    }

    pub fn to_matrix(&self) -> IntMat {
        let n = self.diag.len();
        IntMat::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn slice(&self, r: Range<usize>) -> DiagonalModulus {
        DiagonalModulus {
            diag: self.diag[r].to_vec(),
        }
    }

    /// Appends trailing unit entries up to dimension `m`.
    pub fn padded(&self, m: usize) -> DiagonalModulus {
        let mut diag = self.diag.clone();
        diag.resize(m.max(diag.len()), BigInt::one());
        DiagonalModulus { diag }
    }
}

/// Nonsingular diagonal modulus whose entries form a divisibility chain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SmithForm(DiagonalModulus);

impl SmithForm {
    pub fn new(diag: Vec<BigInt>) -> Result<Self> {
        for (i, d) in diag.iter().enumerate() {
            if !d.is_positive() {
                return Err(Error::NotSmith(format!("entry {i} is {d}, expected >= 1")));
            }
        }
        for i in 1..diag.len() {
            if !diag[i].is_multiple_of(&diag[i - 1]) {
                return Err(Error::NotSmith(format!(
                    "{} does not divide {}",
                    diag[i - 1],
                    diag[i]
                )));
            }
        }
        Ok(SmithForm(DiagonalModulus { diag }))
    }

    pub fn from_i64(diag: &[i64]) -> Result<Self> {
        Self::new(diag.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn from_matrix(m: &IntMat) -> Result<Self> {
        Self::new(DiagonalModulus::from_matrix(m)?.diag)
    }

    pub fn identity(m: usize) -> Self {
        SmithForm(DiagonalModulus::ones(m))
    }

    pub fn modulus(&self) -> &DiagonalModulus {
        &self.0
    }

    pub fn diag(&self) -> &[BigInt] {
        &self.0.diag
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn det(&self) -> BigInt {
        self.0.det()
    }

    /// The last (largest) invariant factor; 1 for the empty form.
    pub fn largest(&self) -> BigInt {
        self.0.diag.last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Number of leading unit entries.
    pub fn trivial_count(&self) -> usize {
        self.0.diag.iter().take_while(|d| d.is_one()).count()
    }

    pub fn to_matrix(&self) -> IntMat {
        self.0.to_matrix()
    }

    pub fn slice(&self, r: Range<usize>) -> SmithForm {
        SmithForm(self.0.slice(r))
    }

    /// Prepends unit entries so the form has dimension `m`.
    pub fn with_leading_ones(&self, m: usize) -> SmithForm {
        let k = m.saturating_sub(self.dim());
        let mut diag = vec![BigInt::one(); k];
        diag.extend_from_slice(&self.0.diag);
        SmithForm(DiagonalModulus { diag })
    }
}

impl AsRef<DiagonalModulus> for SmithForm {
    fn as_ref(&self) -> &DiagonalModulus {
        &self.0
    }
}

impl AsRef<DiagonalModulus> for DiagonalModulus {
    fn as_ref(&self) -> &DiagonalModulus {
        self
    }
}

/// Square nonsingular upper-triangular matrix in Hermite form, optionally
/// tagged with a known index `(k, m)`. Equality ignores the tag.
#[derive(Clone, Debug)]
pub struct HermiteBasis {
    mat: IntMat,
    index: Option<(usize, usize)>,
}

impl PartialEq for HermiteBasis {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for HermiteBasis {}

impl std::hash::Hash for HermiteBasis {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl HermiteBasis {
    pub fn new(mat: IntMat) -> Result<Self> {
        check_hermite(&mat)?;
        Ok(HermiteBasis { mat, index: None })
    }

    pub(crate) fn new_unchecked(mat: IntMat) -> Self {
        debug_assert!(check_hermite(&mat).is_ok(), "not Hermite: {mat:?}");
        HermiteBasis { mat, index: None }
    }

    pub fn identity(n: usize) -> Self {
        HermiteBasis {
            mat: IntMat::identity(n),
            index: None,
        }
    }

    /// Attaches index metadata after checking the block shape.
    pub fn with_index(mut self, k: usize, m: usize) -> Result<Self> {
        if !has_index_shape(&self.mat, k, m) {
            return Err(Error::NotHermite(format!("basis is not index ({k},{m})")));
        }
        self.index = Some((k, m));
        Ok(self)
    }

    pub fn mat(&self) -> &IntMat {
        &self.mat
    }

    pub fn into_mat(self) -> IntMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn index(&self) -> Option<(usize, usize)> {
        self.index
    }

    pub fn det(&self) -> BigInt {
        self.mat.diagonal().iter().product()
    }

    /// Column indices whose column differs from the identity column.
    pub fn nontrivial_columns(&self) -> Vec<usize> {
        let n = self.dim();
        (0..n)
            .filter(|&j| (0..n).any(|i| self.mat[(i, j)] != if i == j { BigInt::one() } else { BigInt::zero() }))
            .collect()
    }
}

/// Checks the Hermite-basis invariants: square, upper triangular, positive
/// diagonal, entries above each diagonal reduced modulo it.
pub fn check_hermite(h: &IntMat) -> Result<()> {
    if !h.is_square() {
        return Err(Error::NotHermite("not square".into()));
    }
    let n = h.rows();
    for j in 0..n {
        let d = &h[(j, j)];
        if !d.is_positive() {
            return Err(Error::NotHermite(format!("diagonal {j} is {d}")));
        }
        for i in 0..j {
            let x = &h[(i, j)];
            if x.is_negative() || x >= d {
                return Err(Error::NotHermite(format!("entry ({i},{j}) = {x} not reduced by {d}")));
            }
        }
        for i in j + 1..n {
            if !h[(i, j)].is_zero() {
                return Err(Error::NotHermite(format!("entry ({i},{j}) below diagonal")));
            }
        }
    }
    Ok(())
}

/// Index-(k, m) shape: leading k×k identity and trailing (n−k−m) identity.
pub fn has_index_shape(h: &IntMat, k: usize, m: usize) -> bool {
    let n = h.rows();
    if k + m > n {
        return false;
    }
    let unit_col = |j: usize| (0..n).all(|i| h[(i, j)] == if i == j { BigInt::one() } else { BigInt::zero() });
    (0..k).all(unit_col) && (k + m..n).all(unit_col)
}

/// Reduces every entry of column `j` of `a` into `[0, s_j)`.
pub fn colmod(a: &IntMat, s: &DiagonalModulus) -> Result<IntMat> {
    if a.cols() != s.dim() {
        return dim_err(format!("colmod: {} columns vs modulus of dimension {}", a.cols(), s.dim()));
    }
    s.check_nonsingular()?;
    Ok(IntMat::from_fn(a.rows(), a.cols(), |i, j| residue(&a[(i, j)], &s.diag()[j])))
}

/// Reduces every entry of row `i` of `a` into `[0, s_i)`.
pub fn rowmod(a: &IntMat, s: &DiagonalModulus) -> Result<IntMat> {
    if a.rows() != s.dim() {
        return dim_err(format!("rowmod: {} rows vs modulus of dimension {}", a.rows(), s.dim()));
    }
    s.check_nonsingular()?;
    Ok(IntMat::from_fn(a.rows(), a.cols(), |i, j| residue(&a[(i, j)], &s.diag()[i])))
}

pub fn is_colmod_reduced(a: &IntMat, s: &DiagonalModulus) -> bool {
    a.cols() == s.dim()
        && (0..a.rows()).all(|i| {
            (0..a.cols()).all(|j| !a[(i, j)].is_negative() && a[(i, j)] < s.diag()[j])
        })
}

pub fn is_rowmod_reduced(a: &IntMat, s: &DiagonalModulus) -> bool {
    a.rows() == s.dim()
        && (0..a.rows()).all(|i| {
            (0..a.cols()).all(|j| !a[(i, j)].is_negative() && a[(i, j)] < s.diag()[i])
        })
}

/// Exact product. Empty inner dimension yields the zero matrix.
pub fn matmul(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    if a.cols() != b.rows() {
        return dim_err(format!(
            "matmul: {}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ));
    }
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    let mut out = IntMat::zeros(n, m);
    for i in 0..n {
        let orow = &mut out.data[i * m..(i + 1) * m];
        for l in 0..k {
            let x = &a.data[i * k + l];
            if x.is_zero() {
                continue;
            }
            let brow = &b.data[l * m..(l + 1) * m];
            for (o, y) in orow.iter_mut().zip(brow) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(a: &IntMat) -> Result<BigInt> {
    if !a.is_square() {
        return dim_err("determinant of a non-square matrix");
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(p) => {
                    m.swap_rows(k, p);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Whether `v` is an integer combination of the rows of the upper-triangular
/// basis `h`; decided by exact elimination column by column.
pub fn lattice_contains(h: &HermiteBasis, v: &[BigInt]) -> Result<bool> {
    Ok(triangular_contains(h.mat(), v)?)
}

pub(crate) fn triangular_contains(h: &IntMat, v: &[BigInt]) -> Result<bool> {
    let n = h.rows();
    if !h.is_square() || v.len() != n {
        return dim_err("lattice_contains: dimension mismatch");
    }
    let mut w = v.to_vec();
    for j in 0..n {
        if w[j].is_zero() {
            continue;
        }
        let d = &h[(j, j)];
        if d.is_zero() {
            return Ok(false);
        }
        let (q, r) = w[j].div_rem(d);
        if !r.is_zero() {
            return Ok(false);
        }
        for (l, wl) in w.iter_mut().enumerate().skip(j) {
            *wl -= &q * &h[(j, l)];
        }
    }
    Ok(w.iter().all(Zero::is_zero))
}

/// Hermite forms are canonical, so lattice equality is matrix equality.
pub fn lattice_equal(a: &HermiteBasis, b: &HermiteBasis) -> bool {
    a.mat() == b.mat()
}

/// Remainder of `f` with respect to a Hermite basis `t`: the unique
/// `f + q t` reduced column-modulo the diagonal of `t`.
pub fn hermite_remainder(f: &IntMat, t: &IntMat) -> Result<IntMat> {
    if !t.is_square() || f.cols() != t.rows() {
        return dim_err("remainder: dimension mismatch");
    }
    let mut out = f.clone();
    let m = t.rows();
    for i in 0..out.rows() {
        for j in 0..m {
            let d = &t[(j, j)];
            let q = out[(i, j)].div_floor(d);
            if q.is_zero() {
                continue;
            }
            for l in j..m {
                let delta = &q * &t[(j, l)];
                out[(i, l)] -= delta;
            }
        }
    }
    Ok(out)
}
