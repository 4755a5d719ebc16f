//! Scalar arithmetic in Z/(N): extended gcd, annihilators, stabilizers and
//! unit normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Returns `(g, u, v)` with `u a + v b = g = gcd(a, b) >= 0`, using the
/// classical extended Euclidean recurrence.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else if r0.is_zero() {
        (r0, BigInt::zero(), BigInt::zero())
    } else {
        (r0, s0, t0)
    }
}

/// Nonnegative gcd by division steps; faster than the binary method when the
/// operands differ a lot in size, which is the usual case against a modulus.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.magnitude().clone(), b.magnitude().clone());
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let r = &x % &y;
        x = std::mem::replace(&mut y, r);
    }
    BigInt::from(x)
}

/// Arithmetic context for Z/(N), N >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueCtx {
    n: BigInt,
}

impl ResidueCtx {
    pub fn new(n: BigInt) -> Self {
        assert!(n.is_positive(), "modulus must be positive");
        ResidueCtx { n }
    }

    pub fn from_u64(n: u64) -> Self {
        Self::new(BigInt::from(n))
    }

    pub fn modulus(&self) -> &BigInt {
        &self.n
    }

    #[inline]
    pub fn reduce(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.n)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }

    pub fn gcd_n(&self, a: &BigInt) -> BigInt {
        gcd(a, &self.n)
    }

    /// Generator of the annihilator ideal of `a`: `N / gcd(a, N)` mod N.
    pub fn ann(&self, a: &BigInt) -> BigInt {
        self.reduce(&(&self.n / self.gcd_n(a)))
    }

    /// Some `c` with `gcd(a + c b, N) = gcd(a, b, N)`.
    ///
    /// After dividing out `g = gcd(a, b, N)`, the part of `N/g` coprime to
    /// `a/g` works: it vanishes mod every prime of `N/g` not dividing `a/g`,
    /// and is a unit mod the primes that do divide `a/g` (which then cannot
    /// divide `b/g`).
    pub fn stab(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let a = self.reduce(a);
        let b = self.reduce(b);
        let g = gcd(&gcd(&a, &b), &self.n);
        let a1 = &a / &g;
        let n1 = &self.n / &g;
        let mut c = n1.clone();
        loop {
            let d = gcd(&c, &a1);
            if d.is_one() {
                break;
            }
            c /= d;
        }
        c.mod_floor(&n1)
    }

    /// A unit `u` with `u a = gcd(a, N)` mod N.
    pub fn unit_normalizer(&self, a: &BigInt) -> BigInt {
        let a = self.reduce(a);
        let (d, x, _) = ext_gcd(&a, &self.n);
        if a.is_zero() {
            return self.reduce(&BigInt::one());
        }
        if d.is_one() {
            return self.reduce(&x);
        }
        let step = &self.n / &d;
        let c = self.stab(&x, &step);
        self.reduce(&(x + c * step))
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        self.gcd_n(a).is_one()
    }

    /// Inverse of a unit.
    pub fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        let (g, x, _) = ext_gcd(&self.reduce(a), &self.n);
        if g.is_one() || self.n.is_one() {
            Some(self.reduce(&x))
        } else {
            None
        }
    }
}

/// Free-function form of [`ResidueCtx::ann`].
pub fn ann(a: &BigInt, ctx: &ResidueCtx) -> BigInt {
    ctx.ann(a)
}

/// Free-function form of [`ResidueCtx::stab`].
pub fn stab(a: &BigInt, b: &BigInt, ctx: &ResidueCtx) -> BigInt {
    ctx.stab(a, b)
}
