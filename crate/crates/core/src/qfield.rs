//! Exact arithmetic in Q and in quadratic fields Q(sqrt(u)), together with
//! the local symbols that classify quaternion algebras: the Legendre symbol,
//! the Hilbert symbol (a,b)_v at every place including v = 2 and v = infinity,
//! and ramification sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;

use crate::bigfloat::{BigComplex, BigFloat};

pub type Rat = BigRational;

/// Convenience constructors for exact rationals.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QFieldError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("hilbert symbol arguments must be nonzero")]
    ZeroArgument,
    #[error("division by zero in Q(sqrt(u))")]
    DivisionByZero,
    #[error("elements lie in different quadratic fields (u = {0} vs u = {1})")]
    FieldMismatch(i64, i64),
    #[error("u = {0} must be a nonsquare integer")]
    SquareU(i64),
}

/// A place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

/// An element a + b*sqrt(u) of the quadratic field Q(sqrt(u)).
///
/// u is a fixed nonsquare integer (u = -7 throughout the flagship example,
/// but the splitting computations also use other u). Coordinates are exact
/// rationals, so half-integral elements like (1+sqrt(-7))/2 are fine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub a: Rat,
    pub b: Rat,
    pub u: i64,
}

fn is_square_i64(u: i64) -> bool {
    if u < 0 {
        return false;
    }
    let r = (u as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s * s == u)
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat, u: i64) -> Result<Self, QFieldError> {
        if is_square_i64(u) {
            return Err(QFieldError::SquareU(u));
        }
        Ok(QuadElem { a, b, u })
    }

    pub fn from_parts(a: Rat, b: Rat, u: i64) -> Self {
        Self::new(a, b, u).expect("nonsquare u")
    }

    pub fn from_rat(a: Rat, u: i64) -> Self {
        Self::from_parts(a, Rat::zero(), u)
    }

    pub fn from_i64(a: i64, u: i64) -> Self {
        Self::from_rat(rat_i(a), u)
    }

    pub fn zero(u: i64) -> Self {
        Self::from_i64(0, u)
    }

    pub fn one(u: i64) -> Self {
        Self::from_i64(1, u)
    }

    /// The trace-free generator sqrt(u).
    pub fn gen(u: i64) -> Self {
        Self::from_parts(Rat::zero(), Rat::one(), u)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, rhs: &Self) -> Result<(), QFieldError> {
        if self.u != rhs.u {
            return Err(QFieldError::FieldMismatch(self.u, rhs.u));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check(rhs).unwrap();
        Self::from_parts(&self.a + &rhs.a, &self.b + &rhs.b, self.u)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs).unwrap();
        Self::from_parts(&self.a - &rhs.a, &self.b - &rhs.b, self.u)
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(-&self.a, -&self.b, self.u)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs).unwrap();
        let u = rat_i(self.u);
        Self::from_parts(
            &self.a * &rhs.a + &u * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
            self.u,
        )
    }

    pub fn mul_rat(&self, s: &Rat) -> Self {
        Self::from_parts(&self.a * s, &self.b * s, self.u)
    }

    /// Galois conjugate a - b*sqrt(u).
    pub fn conj(&self) -> Self {
        Self::from_parts(self.a.clone(), -&self.b, self.u)
    }

    /// Nm(x) = a^2 - u b^2.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_i(self.u) * &self.b * &self.b
    }

    /// Tr(x) = 2a.
    pub fn trace(&self) -> Rat {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<Self, QFieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        Ok(Self::from_parts(&self.a / &n, -&self.b / &n, self.u))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, QFieldError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.u);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Embed into C for u < 0 (sends sqrt(u) to +i*sqrt(|u|)).
    pub fn embed(&self, prec: u32) -> BigComplex {
        assert!(self.u < 0, "complex embedding requires u < 0");
        let root = BigFloat::from_i64(-self.u, prec).sqrt();
        BigComplex::new(
            BigFloat::from_rational(&self.a, prec),
            BigFloat::from_rational(&self.b, prec).mul(&root),
        )
    }

    pub fn embed_f64(&self) -> num_complex::Complex64 {
        assert!(self.u < 0);
        let root = ((-self.u) as f64).sqrt();
        num_complex::Complex64::new(
            self.a.to_f64().unwrap(),
            self.b.to_f64().unwrap() * root,
        )
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.u)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.u)
        }
    }
}

/// A nonzero ideal of the ring of integers of a class-number-1 field,
/// stored by a generator. Two ideals are equal iff the generators differ
/// by a unit (for u < -3 the units are just +-1).
#[derive(Debug, Clone)]
pub struct IdealE {
    gen: QuadElem,
}

impl IdealE {
    pub fn new(gen: QuadElem) -> Self {
        assert!(!gen.is_zero(), "zero ideal");
        IdealE { gen: Self::normalize(gen) }
    }

    /// Unit-normalize the generator: pick the representative among {x, -x}
    /// with (b > 0) or (b = 0 and a > 0).
    fn normalize(x: QuadElem) -> QuadElem {
        let flip = if x.b.is_zero() { x.a.is_negative() } else { x.b.is_negative() };
        if flip {
            x.neg()
        } else {
            x
        }
    }

    pub fn generator(&self) -> &QuadElem {
        &self.gen
    }

    pub fn norm(&self) -> Rat {
        self.gen.norm().abs()
    }

    pub fn conj(&self) -> Self {
        IdealE::new(self.gen.conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        IdealE::new(self.gen.mul(&rhs.gen))
    }
}

impl PartialEq for IdealE {
    fn eq(&self, other: &Self) -> bool {
        self.gen == other.gen
    }
}
impl Eq for IdealE {}

fn modpow(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut b = (base % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        e >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modpow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol (a/p) for an odd prime p via Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8, QFieldError> {
    if p == 2 || !is_prime(p) {
        return Err(QFieldError::NotOddPrime(p));
    }
    let pm = BigInt::from(p);
    let r = a.mod_floor(&pm).to_u64().unwrap();
    if r == 0 {
        return Ok(0);
    }
    let e = modpow(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

pub fn legendre_i64(a: i64, p: u64) -> Result<i8, QFieldError> {
    legendre(&BigInt::from(a), p)
}

/// p-adic valuation and unit part of a nonzero rational.
pub fn val_unit(x: &Rat, p: u64) -> (i64, Rat) {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let mut v: i64 = 0;
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    (v, Rat::new(num, den))
}

/// Residue of a p-integral rational mod p (odd p).
fn residue_mod_p(x: &Rat, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let den_inv = modpow(den.to_u64().unwrap(), p - 2, p);
    (num.to_u64().unwrap() as u128 * den_inv as u128 % p as u128) as u64
}

/// Hilbert symbol (a,b)_v over Q, via the standard closed forms.
///
/// At v = infinity: -1 iff both arguments are negative. At odd p and at
/// p = 2 the formulas in terms of valuations and unit residues are used.
/// Validated against a brute-force solvability oracle in the tests.
pub fn hilbert_symbol(a: &Rat, b: &Rat, v: &Place) -> Result<i8, QFieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(QFieldError::ZeroArgument);
    }
    match v {
        Place::Infinite => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(2) => {
            let (alpha, au) = val_unit(a, 2);
            let (beta, bu) = val_unit(b, 2);
            // eps(x) = (x-1)/2 mod 2, omega(x) = (x^2-1)/8 mod 2 on 2-adic units
            let unit_mod8 = |x: &Rat| -> u64 {
                let m = BigInt::from(8);
                let num = x.numer().mod_floor(&m).to_u64().unwrap();
                let den = x.denom().mod_floor(&m).to_u64().unwrap();
                // inverse of odd den mod 8 is den itself (d^2 = 1 mod 8)
                num * den % 8
            };
            let eps = |x: &Rat| (unit_mod8(x) % 4 == 3) as u32;
            let omega = |x: &Rat| {
                let m = unit_mod8(x);
                (m == 3 || m == 5) as u32
            };
            let e = eps(&au) * eps(&bu)
                + (alpha.rem_euclid(2) as u32) * omega(&bu)
                + (beta.rem_euclid(2) as u32) * omega(&au);
            Ok(if e % 2 == 0 { 1 } else { -1 })
        }
        Place::Finite(p) => {
            if !is_prime(*p) {
                return Err(QFieldError::NotOddPrime(*p));
            }
            let (alpha, au) = val_unit(a, *p);
            let (beta, bu) = val_unit(b, *p);
            let leg = |x: &Rat| legendre(&BigInt::from(residue_mod_p(x, *p)), *p).unwrap();
            let mut s = 1i8;
            if (alpha * beta).rem_euclid(2) == 1 {
                s *= legendre_i64(-1, *p).unwrap();
            }
            if beta.rem_euclid(2) == 1 {
                s *= leg(&au);
            }
            if alpha.rem_euclid(2) == 1 {
                s *= leg(&bu);
            }
            Ok(s)
        }
    }
}

/// Primes dividing the numerator or denominator of x.
fn support(x: &Rat) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for part in [x.numer().clone(), x.denom().clone()] {
        let mut n = part.abs().to_u64().expect("support: rational too large");
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                out.insert(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.insert(n);
        }
    }
    out
}

/// The set of places where the quaternion algebra (a,b) ramifies.
pub fn ramification_set(a: &Rat, b: &Rat) -> Result<BTreeSet<Place>, QFieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(QFieldError::ZeroArgument);
    }
    let mut places: BTreeSet<Place> = BTreeSet::new();
    places.insert(Place::Infinite);
    places.insert(Place::Finite(2));
    for p in support(a).union(&support(b)) {
        places.insert(Place::Finite(*p));
    }
    let mut out = BTreeSet::new();
    for v in places {
        if hilbert_symbol(a, b, &v)? == -1 {
            out.insert(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_examples() {
        // x = 1 -> 1
        assert_eq!(QuadElem::from_i64(1, -7).norm(), rat_i(1));
        // x = (1+sqrt(-7))/2 -> 2 by direct arithmetic (1+7)/4
        let x = QuadElem::from_parts(rat(1, 2), rat(1, 2), -7);
        assert_eq!(x.norm(), rat_i(2));
        // x = 3 -> 9
        assert_eq!(QuadElem::from_i64(3, -7).norm(), rat_i(9));
    }

    #[test]
    fn conjugation_involution_fixes_rationals() {
        let x = QuadElem::from_parts(rat(3, 4), rat(-2, 5), -7);
        assert_eq!(x.conj().conj(), x);
        assert_ne!(x.conj(), x);
        let r = QuadElem::from_i64(5, -7);
        assert_eq!(r.conj(), r);
    }

    #[test]
    fn legendre_examples_against_enumeration() {
        // oracle: squares mod 7 = {1, 2, 4}
        let squares: BTreeSet<u64> = (1..7u64).map(|x| x * x % 7).collect();
        assert!(squares.contains(&2) && !squares.contains(&3));
        assert_eq!(legendre_i64(2, 7).unwrap(), 1);
        assert_eq!(legendre_i64(3, 7).unwrap(), -1);
        assert_eq!(legendre_i64(7, 7).unwrap(), 0);
        assert!(legendre_i64(1, 4).is_err());
        assert!(legendre_i64(1, 2).is_err());
    }

    #[test]
    fn legendre_matches_enumeration_all_small_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 0..p {
                let expect = if a == 0 {
                    0
                } else if squares.contains(&a) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_i64(a as i64, p).unwrap(), expect, "({a}/{p})");
            }
        }
    }

    /// Brute-force oracle: does z^2 = a x^2 + b y^2 have a primitive
    /// solution mod p^k (k = 3 for odd p, k = 8 for p = 2)? For integer a, b
    /// a primitive solution must have x or y a p-unit, so it suffices to
    /// scan those pairs against the set of squares mod p^k.
    fn hilbert_bruteforce(a: i64, b: i64, p: u64) -> i8 {
        let k: u32 = if p == 2 { 8 } else { 3 };
        let m = (p as i64).pow(k);
        let squares: std::collections::HashSet<i64> =
            (0..m).map(|z| (z * z).rem_euclid(m)).collect();
        for x in 0..m {
            for y in 0..m {
                if x % p as i64 == 0 && y % p as i64 == 0 {
                    continue;
                }
                if squares.contains(&(a * x * x + b * y * y).rem_euclid(m)) {
                    return 1;
                }
            }
        }
        -1
    }

    #[test]
    fn hilbert_closed_form_matches_bruteforce_at_7() {
        assert_eq!(hilbert_symbol(&rat_i(-7), &rat_i(-1), &Place::Finite(7)).unwrap(), -1);
        assert_eq!(hilbert_bruteforce(-7, -1, 7), -1);
        assert_eq!(hilbert_symbol(&rat_i(-7), &rat_i(2), &Place::Finite(7)).unwrap(), 1);
        assert_eq!(hilbert_bruteforce(-7, 2, 7), 1);
    }

    #[test]
    fn hilbert_closed_form_matches_bruteforce_at_2() {
        for (a, b) in [(-1i64, -1i64), (-1, 3), (2, 3), (-2, -5), (2, -1), (3, 5)] {
            let cf = hilbert_symbol(&rat_i(a), &rat_i(b), &Place::Finite(2)).unwrap();
            let bf = hilbert_bruteforce(a, b, 2);
            assert_eq!(cf, bf, "({a},{b})_2");
        }
    }

    #[test]
    fn hilbert_standard_identities() {
        // (a, -a)_v = 1
        for a in [-7i64, 3, -1, 10] {
            for v in [Place::Infinite, Place::Finite(2), Place::Finite(7), Place::Finite(3)] {
                assert_eq!(hilbert_symbol(&rat_i(a), &rat_i(-a), &v).unwrap(), 1);
            }
        }
        assert_eq!(hilbert_symbol(&rat_i(-7), &rat_i(-1), &Place::Infinite).unwrap(), -1);
        assert!(hilbert_symbol(&rat_i(0), &rat_i(1), &Place::Infinite).is_err());
    }

    #[test]
    fn ramification_examples() {
        let s = ramification_set(&rat_i(-7), &rat_i(-1)).unwrap();
        let expect: BTreeSet<Place> = [Place::Finite(7), Place::Infinite].into();
        assert_eq!(s, expect);
        assert!(ramification_set(&rat_i(-7), &rat_i(1)).unwrap().is_empty());
        let s = ramification_set(&rat_i(-1), &rat_i(-1)).unwrap();
        let expect: BTreeSet<Place> = [Place::Finite(2), Place::Infinite].into();
        assert_eq!(s, expect);
    }

    proptest! {
        #[test]
        fn product_formula(an in -60i64..60, ad in 1i64..20, bn in -60i64..60, bd in 1i64..20) {
            prop_assume!(an != 0 && bn != 0);
            let a = rat(an, ad);
            let b = rat(bn, bd);
            let sigma = ramification_set(&a, &b).unwrap();
            prop_assert_eq!(sigma.len() % 2, 0, "odd ramification set for ({},{})", a, b);
        }

        #[test]
        fn bimultiplicative(an in -30i64..30, b1 in -30i64..30, b2 in -30i64..30) {
            prop_assume!(an != 0 && b1 != 0 && b2 != 0);
            let a = rat_i(an);
            for v in [Place::Infinite, Place::Finite(2), Place::Finite(3), Place::Finite(5), Place::Finite(7)] {
                let lhs = hilbert_symbol(&a, &(rat_i(b1) * rat_i(b2)), &v).unwrap();
                let rhs = hilbert_symbol(&a, &rat_i(b1), &v).unwrap()
                    * hilbert_symbol(&a, &rat_i(b2), &v).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn norm_multiplicative(a1 in -9i64..9, b1 in -9i64..9, a2 in -9i64..9, b2 in -9i64..9) {
            let x = QuadElem::from_parts(rat(a1, 2), rat(b1, 2), -7);
            let y = QuadElem::from_parts(rat(a2, 2), rat(b2, 2), -7);
            prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
        }
    }

    #[test]
    fn ideal_equality_up_to_units() {
        let x = QuadElem::from_parts(rat(1, 2), rat(1, 2), -7);
        assert_eq!(IdealE::new(x.clone()), IdealE::new(x.neg()));
        assert_eq!(IdealE::new(x.clone()).norm(), rat_i(2));
    }

    #[test]
    fn field_inverse() {
        let x = QuadElem::from_parts(rat(3, 2), rat(-1, 2), -7);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert!(QuadElem::zero(-7).inv().is_err());
    }
}
