//! Truncated power series in `s = t - 1`.
//!
//! Every G-signature integrand is multiplied by `(t-1)^2` so it becomes a power
//! series. `t^a - 1` is written as `s·U_a` with `U_a = ((1+s)^a - 1)/s` a unit
//! whenever `a` is, and the unit is inverted term by term. No coefficient ever
//! divides by a factorial, so the same code runs over `Q` and over `F_p`.

use std::fmt::Debug;

use num_traits::Zero;

use crate::arith::{int, rational_mod, Rational};
use crate::error::{Error, Result};

/// The coefficient arithmetic a series needs.
pub trait CoefficientRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `None` when `x` is not invertible.
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn one(&self) -> Self::Elem {
        self.from_i64(1)
    }
}

/// Exact rational coefficients.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoefficientRing for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn from_i64(&self, n: i64) -> Rational {
        int(n)
    }
    fn add(&self, x: &Rational, y: &Rational) -> Rational {
        x + y
    }
    fn sub(&self, x: &Rational, y: &Rational) -> Rational {
        x - y
    }
    fn mul(&self, x: &Rational, y: &Rational) -> Rational {
        x * y
    }
    fn inv(&self, x: &Rational) -> Option<Rational> {
        (!x.is_zero()).then(|| x.recip())
    }
    fn is_zero(&self, x: &Rational) -> bool {
        x.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Coefficients in `Z/p`, `p` prime. Values are kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if crate::arith::is_prime(p) {
            Ok(Self { p })
        } else {
            Err(Error::NotPrime { value: p })
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn reduce(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    pub fn from_rational(&self, q: &Rational) -> Result<u64> {
        Ok(rational_mod(q, self.p)?.value())
    }
}

impl CoefficientRing for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce(n as i128)
    }
    fn add(&self, x: &u64, y: &u64) -> u64 {
        self.reduce(*x as i128 + *y as i128)
    }
    fn sub(&self, x: &u64, y: &u64) -> u64 {
        self.reduce(*x as i128 - *y as i128)
    }
    fn mul(&self, x: &u64, y: &u64) -> u64 {
        self.reduce(*x as i128 * *y as i128)
    }
    fn inv(&self, x: &u64) -> Option<u64> {
        crate::arith::mod_inverse(*x as i64, self.p).ok().map(|r| r.value())
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// `Σ_{i=0}^{order} c_i s^i + O(s^{order+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<R: CoefficientRing = Rationals> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl PowerSeries<Rationals> {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        Self { ring: Rationals, coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_rationals(coeffs.iter().map(|&n| int(n)).collect())
    }

    /// Reduces every coefficient mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<PowerSeries<PrimeField>> {
        let field = PrimeField::new(p)?;
        let coeffs = self.coeffs.iter().map(|c| field.from_rational(c)).collect::<Result<_>>()?;
        Ok(PowerSeries { ring: field, coeffs })
    }
}

impl<R: CoefficientRing> PowerSeries<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least a constant term");
        Self { ring, coeffs }
    }

    pub fn constant(ring: R, c: R::Elem, order: usize) -> Self {
        let mut coeffs = vec![ring.zero(); order + 1];
        coeffs[0] = c;
        Self { ring, coeffs }
    }

    pub fn zero(ring: R, order: usize) -> Self {
        let z = ring.zero();
        Self::constant(ring, z, order)
    }

    pub fn one(ring: R, order: usize) -> Self {
        let o = ring.one();
        Self::constant(ring, o, order)
    }

    /// The series `s`.
    pub fn variable(ring: R, order: usize) -> Self {
        let mut x = Self::zero(ring, order);
        if order >= 1 {
            x.coeffs[1] = x.ring.one();
        }
        x
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of `s^i`; `None` past the truncation order.
    pub fn coeff(&self, i: usize) -> Option<&R::Elem> {
        self.coeffs.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        Self { ring: self.ring.clone(), coeffs: self.coeffs[..n].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i])).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.ring.sub(&self.coeffs[i], &other.coeffs[i])).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let r = &self.ring;
        let mut coeffs = vec![r.zero(); n];
        for (i, x) in self.coeffs[..n].iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in other.coeffs[..n - i].iter().enumerate() {
                coeffs[i + j] = r.add(&coeffs[i + j], &r.mul(x, y));
            }
        }
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.mul(c, k)).collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&self.ring.from_i64(k))
    }

    /// Multiplies by `s` without changing the truncation order.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(self.ring.zero());
        coeffs.extend_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        Self { ring: self.ring.clone(), coeffs }
    }

    /// Divides by `s`, dropping the constant term; the order drops by one.
    fn shift_down(&self) -> Self {
        debug_assert!(self.coeffs.len() >= 2);
        Self { ring: self.ring.clone(), coeffs: self.coeffs[1..].to_vec() }
    }

    /// Inverse of a series with invertible constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let r = &self.ring;
        let c0 = r.inv(&self.coeffs[0]).ok_or(Error::NotAUnit)?;
        let n = self.coeffs.len();
        let mut out: Vec<R::Elem> = Vec::with_capacity(n);
        out.push(c0.clone());
        for k in 1..n {
            let mut acc = r.zero();
            for j in 1..=k {
                acc = r.add(&acc, &r.mul(&self.coeffs[j], &out[k - j]));
            }
            out.push(r.sub(&r.zero(), &r.mul(&acc, &c0)));
        }
        Ok(Self { ring: self.ring.clone(), coeffs: out })
    }
}

/// `(1+s)^exponent` by binary powering; negative exponents invert.
pub fn binomial_power<R: CoefficientRing>(ring: &R, exponent: i64, order: usize) -> PowerSeries<R> {
    let mut acc = PowerSeries::one(ring.clone(), order);
    let mut base = PowerSeries::one(ring.clone(), order).add(&PowerSeries::variable(ring.clone(), order));
    let mut e = exponent.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    if exponent < 0 {
        acc.invert_unit().expect("(1+s)^n has constant term 1")
    } else {
        acc
    }
}

/// `(1+s)^exponent` over the rationals.
pub fn expand_binomial_power(exponent: i64, order: usize) -> PowerSeries {
    binomial_power(&Rationals, exponent, order)
}

/// `U_a = (t^a - 1)/(t - 1)` to the given order.
fn unit_part<R: CoefficientRing>(ring: &R, a: i64, order: usize) -> PowerSeries<R> {
    binomial_power(ring, a, order + 1).shift_down()
}

/// Building blocks shared by all integrands.
pub struct Expander<R: CoefficientRing> {
    ring: R,
    order: usize,
}

impl<R: CoefficientRing> Expander<R> {
    pub fn new(ring: R, order: usize) -> Self {
        Self { ring, order }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn check_rotation(&self, a: i64) -> Result<()> {
        if self.ring.is_zero(&self.ring.from_i64(a)) {
            // Over F_p this is also the condition for U_a to be a unit.
            return Err(Error::ZeroRotation { value: a, p: self.ring.characteristic() });
        }
        Ok(())
    }

    pub fn t_pow(&self, a: i64) -> PowerSeries<R> {
        binomial_power(&self.ring, a, self.order)
    }

    /// `(t^a + 1)/U_a = (t^a + 1)(t - 1)/(t^a - 1)`.
    pub fn cot_factor(&self, a: i64) -> Result<PowerSeries<R>> {
        self.check_rotation(a)?;
        let u = unit_part(&self.ring, a, self.order)
            .invert_unit()
            .map_err(|_| Error::ZeroRotation { value: a, p: self.ring.characteristic() })?;
        let plus = self.t_pow(a).add(&PowerSeries::one(self.ring.clone(), self.order));
        Ok(plus.mul(&u))
    }

    /// `-4 t^c / U_c^2 = -4 t^c (t-1)^2/(t^c - 1)^2`.
    pub fn csc2_factor(&self, c: i64) -> Result<PowerSeries<R>> {
        self.check_rotation(c)?;
        let u = unit_part(&self.ring, c, self.order)
            .invert_unit()
            .map_err(|_| Error::ZeroRotation { value: c, p: self.ring.characteristic() })?;
        Ok(self.t_pow(c).mul(&u).mul(&u).scale_int(-4))
    }

    pub fn point(&self, a: i64, b: i64, lambda: i64) -> Result<PowerSeries<R>> {
        Ok(self.cot_factor(a)?.mul(&self.cot_factor(b)?).mul(&self.t_pow(lambda)))
    }

    pub fn sphere(&self, c: i64, alpha: i64, lambda: i64) -> Result<PowerSeries<R>> {
        Ok(self.csc2_factor(c)?.scale_int(alpha).mul(&self.t_pow(lambda)))
    }

    pub fn boundary(&self, c: i64, m: i64, lambda: i64) -> Result<PowerSeries<R>> {
        Ok(self.cot_factor(c)?.shift_up().scale_int(2 * m).mul(&self.t_pow(lambda)))
    }

    /// `t^l + t^{-l}`.
    pub fn character_sum(&self, l: i64) -> PowerSeries<R> {
        self.t_pow(l).add(&self.t_pow(-l))
    }

    /// `t^l - t^{-l}`.
    pub fn character_diff(&self, l: i64) -> PowerSeries<R> {
        self.t_pow(l).sub(&self.t_pow(-l))
    }

    pub fn su2_point(&self, a: i64, b: i64, l: i64) -> Result<PowerSeries<R>> {
        Ok(self.point(a, b, 0)?.mul(&self.character_sum(l)))
    }

    pub fn su2_sphere(&self, c: i64, alpha: i64, m: i64, l: i64) -> Result<PowerSeries<R>> {
        let s = self.sphere(c, alpha, 0)?.mul(&self.character_sum(l));
        let b = self.boundary(c, m, 0)?.mul(&self.character_diff(l));
        Ok(s.add(&b))
    }
}

fn rational(order: usize) -> Expander<Rationals> {
    Expander::new(Rationals, order)
}

/// `(t^a+1)(t^b+1)/((t^a-1)(t^b-1)) · (t-1)^2 · t^λ`.
pub fn expand_point_term(a: i64, b: i64, lambda: i64, order: usize) -> Result<PowerSeries> {
    rational(order).point(a, b, lambda)
}

/// `-4α t^c/(t^c-1)^2 · (t-1)^2 · t^λ`.
pub fn expand_sphere_term(c: i64, alpha: i64, lambda: i64, order: usize) -> Result<PowerSeries> {
    rational(order).sphere(c, alpha, lambda)
}

/// `2m (t^c+1)/(t^c-1) · (t-1)^2 · t^λ`.
pub fn expand_boundary_term(c: i64, m: i64, lambda: i64, order: usize) -> Result<PowerSeries> {
    rational(order).boundary(c, m, lambda)
}

/// Point term times `(t^l + t^{-l})`.
pub fn expand_su2_point_term(a: i64, b: i64, l: i64, order: usize) -> Result<PowerSeries> {
    rational(order).su2_point(a, b, l)
}

/// `[-4α t^c/(t^c-1)^2 (t^l + t^{-l}) + 2m (t^c+1)/(t^c-1) (t^l - t^{-l})] · (t-1)^2`.
pub fn expand_su2_sphere_term(c: i64, alpha: i64, m: i64, l: i64, order: usize) -> Result<PowerSeries> {
    rational(order).su2_sphere(c, alpha, m, l)
}

/// Evaluates a rational series as a polynomial in `s = ζ - 1` inside `Q(ζ_p)`.
pub fn to_cyclotomic(x: &PowerSeries, p: u64) -> Result<crate::cyclotomic::CycloNum> {
    use crate::cyclotomic::CycloNum;
    let s = &CycloNum::zeta_pow(p, 1)? - &CycloNum::one(p)?;
    let mut acc = CycloNum::zero(p)?;
    // Horner
    for c in x.coeffs().iter().rev() {
        acc = &(&acc * &s) + &CycloNum::from_rational(p, c.clone())?;
    }
    Ok(acc)
}

impl std::fmt::Display for PowerSeries<Rationals> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
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
                1 => write!(f, "({c})s")?,
                _ => write!(f, "({c})s^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(s^{})", self.order() + 1)
    }
}
