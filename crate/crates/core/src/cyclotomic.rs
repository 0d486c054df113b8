//! Exact arithmetic in `Q(ζ_p) = Q[t]/Φ_p(t)` for a prime `p`.
//!
//! Elements are dense coefficient vectors over the power basis
//! `1, ζ, …, ζ^{p-2}`. The complex embedding `ζ ↦ e^{2πi/p}` is only used to
//! cross-check exact results.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{int, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    p: u64,
    coeffs: Vec<Rational>,
}

fn check_prime(p: u64) -> Result<()> {
    if crate::arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime { value: p })
    }
}

fn exponent(e: i64, p: u64) -> usize {
    e.rem_euclid(p as i64) as usize
}

impl CycloNum {
    /// Builds `Σ coeffs[i] ζ^i` from a polynomial of any length, reducing by
    /// `ζ^p = 1` and then by `Φ_p`.
    pub fn from_poly(p: u64, poly: &[Rational]) -> Result<Self> {
        check_prime(p)?;
        let mut wrapped = vec![Rational::zero(); p as usize];
        for (i, c) in poly.iter().enumerate() {
            wrapped[i % p as usize] += c;
        }
        Ok(Self::from_wrapped(p, wrapped))
    }

    /// `wrapped` has length `p` and represents a polynomial modulo `t^p - 1`.
    fn from_wrapped(p: u64, mut wrapped: Vec<Rational>) -> Self {
        let top = wrapped.pop().expect("p >= 2");
        for c in wrapped.iter_mut() {
            *c -= &top;
        }
        Self { p, coeffs: wrapped }
    }

    pub fn zero(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Self { p, coeffs: vec![Rational::zero(); p as usize - 1] })
    }

    pub fn one(p: u64) -> Result<Self> {
        Self::from_rational(p, int(1))
    }

    pub fn from_rational(p: u64, q: Rational) -> Result<Self> {
        let mut z = Self::zero(p)?;
        z.coeffs[0] = q;
        Ok(z)
    }

    /// `ζ^e` for any integer `e`.
    pub fn zeta_pow(p: u64, e: i64) -> Result<Self> {
        check_prime(p)?;
        let mut wrapped = vec![Rational::zero(); p as usize];
        wrapped[exponent(e, p)] = int(1);
        Ok(Self::from_wrapped(p, wrapped))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self { p: self.p, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_p`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as usize;
        let phi: Poly = vec![int(1); p];
        let x: Poly = trim(self.coeffs.clone());
        // Invariant: s_i * x = r_i (mod Φ_p).
        let (mut r0, mut r1) = (phi, x);
        let (mut s0, mut s1): (Poly, Poly) = (vec![], vec![int(1)]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
        }
        // r1 is a nonzero constant because Φ_p is irreducible.
        let c = r1[0].recip();
        let mut poly = s1;
        for v in poly.iter_mut() {
            *v *= &c;
        }
        Self::from_poly(self.p, &poly)
    }

    /// The automorphism `σ_k: ζ ↦ ζ^k`, `k` prime to `p`.
    pub fn galois(&self, k: u64) -> Self {
        let p = self.p as usize;
        debug_assert!(!k.is_multiple_of(self.p));
        let mut wrapped = vec![Rational::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            wrapped[(i * k as usize) % p] += c;
        }
        Self::from_wrapped(self.p, wrapped)
    }

    /// Field trace `Σ_{k=1}^{p-1} σ_k(x)`.
    pub fn trace(&self) -> Rational {
        let sum: Rational = self.coeffs[1..].iter().sum();
        &self.coeffs[0] * int(self.p as i64 - 1) - sum
    }

    /// Image under `ζ ↦ e^{2πi/p}`.
    pub fn embed(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * PI * i as f64 / self.p as f64;
            z += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ")?,
                _ => write!(f, "({c})ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        assert_eq!(self.p, rhs.p, "cyclotomic field mismatch");
        CycloNum { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        assert_eq!(self.p, rhs.p, "cyclotomic field mismatch");
        CycloNum { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        assert_eq!(self.p, rhs.p, "cyclotomic field mismatch");
        let p = self.p as usize;
        let mut wrapped = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                wrapped[(i + j) % p] += a * b;
            }
        }
        CycloNum::from_wrapped(self.p, wrapped)
    }
}

type Poly = Vec<Rational>;

fn trim(mut v: Poly) -> Poly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

/// Division with remainder; `b` must be nonzero (trimmed).
fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut rem = trim(a.clone());
    let lead = b.last().expect("nonzero divisor").recip();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() * &lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

/// `(ζ^e - 1)^{-1} = (1/p) Σ_{j=0}^{p-1} j ζ^{ej}` for `e ≢ 0 (mod p)`.
fn inv_zeta_pow_minus_one(p: u64, e: i64) -> Result<CycloNum> {
    if exponent(e, p) == 0 {
        return Err(Error::ZeroRotation { value: e, p });
    }
    let mut wrapped = vec![Rational::zero(); p as usize];
    let pp = BigInt::from(p);
    for j in 0..p as i64 {
        wrapped[exponent(e * j, p)] = Rational::new(BigInt::from(j), pp.clone());
    }
    Ok(CycloNum::from_wrapped(p, wrapped))
}

/// `(ζ^e + 1)/(ζ^e - 1)`, which embeds to `-i·cot(πe/p)`.
pub fn cot_unit(p: u64, e: i64) -> Result<CycloNum> {
    let plus = &CycloNum::zeta_pow(p, e)? + &CycloNum::one(p)?;
    Ok(&plus * &inv_zeta_pow_minus_one(p, e)?)
}

/// `-4ζ^e/(ζ^e - 1)^2`, which embeds to `csc²(πe/p)`.
pub fn csc2_unit(p: u64, e: i64) -> Result<CycloNum> {
    let inv = inv_zeta_pow_minus_one(p, e)?;
    let num = CycloNum::zeta_pow(p, e)?.scale(&int(-4));
    Ok(&num * &(&inv * &inv))
}

/// `(2 - ζ^e - ζ^{-e})/4`, which embeds to `sin²(πe/p)`.
pub fn sin2_unit(p: u64, e: i64) -> Result<CycloNum> {
    let two = CycloNum::from_rational(p, int(2))?;
    let s = &(&two - &CycloNum::zeta_pow(p, e)?) - &CycloNum::zeta_pow(p, -e)?;
    Ok(s.scale(&Rational::new(BigInt::one(), BigInt::from(4))))
}

/// Isolated fixed point contribution to `Sign(t^k, X)`:
/// `(ζ^{ka}+1)(ζ^{kb}+1) / ((ζ^{ka}-1)(ζ^{kb}-1))`.
pub fn eval_point_term(p: u64, k: u64, a: i64, b: i64) -> Result<CycloNum> {
    for v in [a, b] {
        if exponent(v, p) == 0 {
            return Err(Error::ZeroRotation { value: v, p });
        }
    }
    let k = k as i64;
    Ok(&cot_unit(p, k * a)? * &cot_unit(p, k * b)?)
}

/// Fixed sphere contribution `-4α ζ^{kc}/(ζ^{kc}-1)^2`.
pub fn eval_sphere_term(p: u64, k: u64, c: i64, alpha: i64) -> Result<CycloNum> {
    if exponent(c, p) == 0 {
        return Err(Error::ZeroRotation { value: c, p });
    }
    Ok(csc2_unit(p, k as i64 * c)?.scale(&int(alpha)))
}

/// `Σ_{k=1}^{p-1} f(k)`, which must be rational.
pub fn galois_sum<F>(p: u64, f: F) -> Result<Rational>
where
    F: Fn(u64) -> Result<CycloNum>,
{
    let mut acc = CycloNum::zero(p)?;
    for k in 1..p {
        let term = f(k)?;
        acc = acc.checked_add(&term)?;
    }
    acc.as_rational().ok_or(Error::NotRational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

    fn cot(x: f64) -> f64 {
        x.cos() / x.sin()
    }

    #[test]
    fn reduction_identity() {
        for p in PRIMES {
            let z = CycloNum::zeta_pow(p, 1).unwrap();
            let zp2 = CycloNum::zeta_pow(p, p as i64 - 2).unwrap();
            let prod = &z * &zp2;
            assert!(prod.coeffs().iter().all(|c| *c == int(-1)));
            assert_eq!(prod, CycloNum::zeta_pow(p, -1).unwrap());
            let zero = CycloNum::zero(p).unwrap();
            assert_eq!(&z + &zero, z);
        }
    }

    #[test]
    fn small_product_p5() {
        let p = 5;
        let one = CycloNum::one(p).unwrap();
        let x = &one + &CycloNum::zeta_pow(p, 1).unwrap();
        let y = &one + &CycloNum::zeta_pow(p, 2).unwrap();
        let expect = CycloNum::from_poly(p, &[int(1), int(1), int(1), int(1)]).unwrap();
        assert_eq!(&x * &y, expect);
    }

    #[test]
    fn mismatched_fields() {
        let a = CycloNum::one(3).unwrap();
        let b = CycloNum::one(5).unwrap();
        assert_eq!(a.checked_mul(&b), Err(Error::ModulusMismatch(3, 5)));
    }

    #[test]
    fn inverse_examples() {
        for p in PRIMES {
            let one = CycloNum::one(p).unwrap();
            assert_eq!(one.inv().unwrap(), one);
            let z = CycloNum::zeta_pow(p, 1).unwrap();
            assert_eq!(z.inv().unwrap(), CycloNum::zeta_pow(p, p as i64 - 1).unwrap());
            assert_eq!(CycloNum::zero(p).unwrap().inv(), Err(Error::DivisionByZero));
        }
        // (ζ-1)^{-1} in Q(ζ_3) is (-2-ζ)/3
        let x = &CycloNum::zeta_pow(3, 1).unwrap() - &CycloNum::one(3).unwrap();
        let expect = CycloNum::from_poly(3, &[rat(-2, 3), rat(-1, 3)]).unwrap();
        assert_eq!(x.inv().unwrap(), expect);
        assert_eq!(&x * &expect, CycloNum::one(3).unwrap());
    }

    #[test]
    fn inverse_roundtrip_random() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let p = PRIMES[rng.gen_range(0..PRIMES.len())];
            let coeffs: Vec<Rational> = (0..p - 1).map(|_| rat(rng.gen_range(-9..10), rng.gen_range(1..5))).collect();
            let x = CycloNum::from_poly(p, &coeffs).unwrap();
            if x.is_zero() {
                continue;
            }
            assert_eq!(&x * &x.inv().unwrap(), CycloNum::one(p).unwrap());
        }
    }

    #[test]
    fn closed_form_inverse_matches_euclid() {
        for p in [2, 3, 5, 7, 11] {
            for e in 1..p as i64 {
                let x = &CycloNum::zeta_pow(p, e).unwrap() - &CycloNum::one(p).unwrap();
                assert_eq!(inv_zeta_pow_minus_one(p, e).unwrap(), x.inv().unwrap());
            }
        }
    }

    #[test]
    fn point_term_p3() {
        let v = eval_point_term(3, 1, 1, 2).unwrap();
        assert_eq!(v.as_rational(), Some(rat(1, 3)));
        let expect = -cot(PI / 3.0) * cot(2.0 * PI / 3.0);
        assert!((v.embed().re - expect).abs() < 1e-12);
    }

    #[test]
    fn point_term_symmetries() {
        for p in PRIMES {
            for k in 1..p {
                for a in 1..p as i64 {
                    let v = eval_point_term(p, k, a, -a).unwrap();
                    let z = v.embed();
                    assert!(z.re >= -1e-12 && z.im.abs() < 1e-9);
                    for b in 1..p as i64 {
                        assert_eq!(eval_point_term(p, k, a, b).unwrap(), eval_point_term(p, k, b, a).unwrap());
                    }
                }
            }
        }
        assert!(matches!(eval_point_term(5, 1, 5, 1), Err(Error::ZeroRotation { .. })));
    }

    #[test]
    fn sphere_term_examples() {
        let v = eval_sphere_term(5, 1, 1, 1).unwrap();
        let expect = 1.0 / (PI / 5.0).sin().powi(2);
        assert!((v.embed().re - expect).abs() < 1e-10);
        assert!((expect - 2.894).abs() < 1e-3);
        assert!(eval_sphere_term(7, 3, 2, 0).unwrap().is_zero());
        for p in PRIMES {
            for k in 1..p {
                for c in 1..p as i64 {
                    let a = eval_sphere_term(p, k, c, 3).unwrap();
                    let b = eval_sphere_term(p, p - k, c, 3).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
        assert!(matches!(eval_sphere_term(3, 1, 3, 1), Err(Error::ZeroRotation { .. })));
    }

    #[test]
    fn encodings_against_trigonometry() {
        let mut rng = StdRng::seed_from_u64(11);
        let primes = [3u64, 5, 7, 11, 13, 17, 19, 23];
        for _ in 0..50 {
            let p = primes[rng.gen_range(0..primes.len())];
            let k = rng.gen_range(1..p) as i64;
            let a = rng.gen_range(1..p) as i64;
            let c = rng.gen_range(1..p) as i64;
            let l = rng.gen_range(0..p) as i64;
            let pf = p as f64;
            let u = cot_unit(p, k * a).unwrap().embed();
            assert!(u.re.abs() < 1e-10);
            assert!((u.im + cot(PI * (a * k) as f64 / pf)).abs() < 1e-10);
            let s = csc2_unit(p, k * c).unwrap().embed();
            assert!((s.re - 1.0 / (PI * (c * k) as f64 / pf).sin().powi(2)).abs() < 1e-10);
            let q = sin2_unit(p, k * l).unwrap().embed();
            assert!((q.re - (PI * (k * l) as f64 / pf).sin().powi(2)).abs() < 1e-10);
        }
    }

    #[test]
    fn galois_action_matches_substitution() {
        for p in PRIMES {
            let x = eval_point_term(p, 1, 1, 2).unwrap();
            for k in 1..p {
                assert_eq!(x.galois(k), eval_point_term(p, k, 1, 2).unwrap());
            }
        }
    }

    #[test]
    fn galois_sums() {
        for p in PRIMES {
            assert_eq!(galois_sum(p, |_| CycloNum::one(p)).unwrap(), int(p as i64 - 1));
            assert_eq!(galois_sum(p, |k| CycloNum::zeta_pow(p, k as i64)).unwrap(), int(-1));
            let x = CycloNum::from_poly(p, &[int(3), rat(1, 2), int(-7)]).unwrap();
            assert_eq!(galois_sum(p, |k| Ok(x.galois(k))).unwrap(), x.trace());
        }
        // (1, 4) = (1, -1): Σ_k cot²(πk/5) = (p-1)(p-2)/3 = 4
        let s = galois_sum(5, |k| eval_point_term(5, k, 1, 4)).unwrap();
        let float: f64 = (1..5).map(|k| cot(PI * k as f64 / 5.0).powi(2)).sum();
        assert!((s.to_f64().unwrap() - float).abs() < 1e-10);
        assert_eq!(s, int(4));
        // a non-stable family
        assert_eq!(galois_sum(5, |_| CycloNum::zeta_pow(5, 1)), Err(Error::NotRational));
    }

    #[test]
    fn involution_field() {
        // p = 2: ζ = -1
        let z = CycloNum::zeta_pow(2, 1).unwrap();
        assert_eq!(z.as_rational(), Some(int(-1)));
        assert_eq!(csc2_unit(2, 1).unwrap().as_rational(), Some(int(1)));
        assert_eq!(cot_unit(2, 1).unwrap().as_rational(), Some(int(0)));
    }
}
