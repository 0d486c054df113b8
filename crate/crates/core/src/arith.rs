//! Exact scalars: arbitrary-precision rationals and residues modulo `n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact fraction in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns the integer value of `q` if it has denominator one.
pub fn to_integer(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

/// Deterministic trial division; intended for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `n` as `p^e * rest` with `p` not dividing `rest`. `n` must be nonzero.
pub fn split_prime_power(n: u64, p: u64) -> (u32, u64) {
    debug_assert!(n != 0 && p >= 2);
    let mut e = 0;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (e, rest)
}

fn reduce(value: i128, modulus: u64) -> u64 {
    value.rem_euclid(modulus as i128) as u64
}

/// An element of `Z/n`. Arithmetic between residues requires equal moduli
/// and panics otherwise; the `try_*` methods report the mismatch instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`. Negative inputs are allowed.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModulus { modulus, min: 1 });
        }
        Ok(Self { value: reduce(value as i128, modulus), modulus })
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidModulus { modulus, min: 1 });
        }
        let m = BigInt::from(modulus);
        let r = value.mod_floor(&m);
        Ok(Self { value: r.to_u64().expect("reduced value fits"), modulus })
    }

    pub(crate) fn raw(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus.max(1));
        Self { value, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Representative in `(-n/2, n/2]`.
    pub fn symmetric(self) -> i64 {
        let v = self.value as i64;
        let n = self.modulus as i64;
        if 2 * v > n {
            v - n
        } else {
            v
        }
    }

    pub fn inv(self) -> Result<Self> {
        mod_inverse(self.value as i64, self.modulus)
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self { value: 1 % self.modulus, modulus: self.modulus };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn check(self, other: Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn scale(self, k: i64) -> Self {
        Self { value: reduce(self.value as i128 * k as i128, self.modulus), modulus: self.modulus }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "residue modulus mismatch");
        Residue { value: reduce(self.value as i128 + rhs.value as i128, self.modulus), modulus: self.modulus }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "residue modulus mismatch");
        Residue { value: reduce(self.value as i128 - rhs.value as i128, self.modulus), modulus: self.modulus }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.modulus, rhs.modulus, "residue modulus mismatch");
        Residue { value: reduce(self.value as i128 * rhs.value as i128, self.modulus), modulus: self.modulus }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue { value: reduce(-(self.value as i128), self.modulus), modulus: self.modulus }
    }
}

/// Extended Euclid on `(a, n)`; returns `(g, x)` with `a*x = g (mod n)`.
fn ext_gcd(a: i128, n: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, n);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// Inverse of `a` modulo `n`.
pub fn mod_inverse(a: i64, n: u64) -> Result<Residue> {
    if n < 2 {
        return Err(Error::InvalidModulus { modulus: n, min: 2 });
    }
    let a_red = reduce(a as i128, n);
    let (g, x) = ext_gcd(a_red as i128, n as i128);
    if g != 1 {
        return Err(Error::NotInvertible { value: a, modulus: n });
    }
    Ok(Residue::raw(reduce(x, n), n))
}

/// `numerator * denominator^{-1} mod p`.
pub fn rational_mod(q: &Rational, p: u64) -> Result<Residue> {
    let num = Residue::from_bigint(q.numer(), p)?;
    let den = Residue::from_bigint(q.denom(), p)?;
    if p < 2 {
        return Err(Error::InvalidModulus { modulus: p, min: 2 });
    }
    match mod_inverse(den.value() as i64, p) {
        Ok(inv) => Ok(num * inv),
        Err(_) => Err(Error::DenominatorDivisible { value: q.clone(), modulus: p }),
    }
}

/// The unique `x mod m1*m2` with `x = r1 (mod m1)` and `x = r2 (mod m2)`.
/// Either modulus may be 1, which makes its congruence vacuous.
pub fn crt_solve(r1: i64, m1: u64, r2: i64, m2: u64) -> Result<Residue> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidModulus { modulus: 0, min: 1 });
    }
    if m1.gcd(&m2) != 1 {
        return Err(Error::NotCoprime(m1, m2));
    }
    let (_, inv_m1) = ext_gcd(m1 as i128 % m2 as i128, m2 as i128);
    let m = m1 as i128 * m2 as i128;
    let r1 = reduce(r1 as i128, m1) as i128;
    let r2 = reduce(r2 as i128, m2) as i128;
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    let t = ((r2 - r1) * inv_m1).rem_euclid(m2 as i128);
    let x = (r1 + m1 as i128 * t).rem_euclid(m);
    Ok(Residue::raw(x as u64, m as u64))
}

/// Fractional part of `q`, in `[0, 1)`.
pub fn frac(q: &Rational) -> Rational {
    q - q.floor()
}
