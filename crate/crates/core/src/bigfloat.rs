//! Arbitrary-precision binary floating point.
//!
//! A [`BigFloat`] is `mant * 2^exp` with `|mant|` normalized to the working
//! precision. This is a deliberately small kernel: the engine only needs
//! +, -, *, /, sqrt, exp, sin/cos, and pi at a few hundred bits for lattice
//! sums and circle quadrature. Precision is carried per value; binary
//! operations work at the larger of the two operand precisions.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use once_cell::sync::Lazy;

#[derive(Debug, Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigFloat { mant: BigInt::from(v), exp: 0, prec }.normalized()
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "BigFloat::from_f64: non-finite input");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        BigFloat { mant: BigInt::from(sign * mant as i64), exp, prec }.normalized()
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.numer().is_zero() {
            return Self::zero(prec);
        }
        let shift = prec as i64 + 2;
        let scaled = (r.numer() << shift) / r.denom();
        BigFloat { mant: scaled, exp: -shift, prec }.normalized()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat { mant: self.mant.clone(), exp: self.exp, prec }.normalized()
    }

    /// Round the mantissa to `prec` significant bits (round to nearest,
    /// ties away from zero).
    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let nbits = self.mant.bits() as i64;
        let excess = nbits - self.prec as i64;
        if excess > 0 {
            let sign = self.mant.sign();
            let mut abs = self.mant.magnitude().clone();
            let half = num_bigint::BigUint::from(1u8) << (excess - 1) as u64;
            abs += &half;
            abs >>= excess as u64;
            self.mant = BigInt::from_biguint(sign, abs);
            self.exp += excess;
            // carry out of rounding can add one bit
            if self.mant.bits() as i64 > self.prec as i64 {
                self.mant >>= 1;
                self.exp += 1;
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        // Align exponents; drop bits of the smaller operand that lie far
        // below the result's precision window.
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = hi.exp - lo.exp;
        let window = prec as i64 + 8;
        let hi_top = hi.exp + hi.mant.bits() as i64;
        let lo_top = lo.exp + lo.mant.bits() as i64;
        if hi_top - lo_top > window + 4 {
            // |lo| is negligible at this precision
            return hi.with_prec(prec);
        }
        let mant = (&hi.mant << shift as u64) + &lo.mant;
        BigFloat { mant, exp: lo.exp, prec }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        BigFloat { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp, prec }.normalized()
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        BigFloat { mant: &self.mant * v, exp: self.exp, prec: self.prec }.normalized()
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let shift = prec as i64 + rhs.mant.bits() as i64 + 4;
        let mant = (&self.mant << shift as u64) / &rhs.mant;
        BigFloat { mant, exp: self.exp - rhs.exp - shift, prec }.normalized()
    }

    pub fn recip(&self) -> Self {
        Self::from_i64(1, self.prec).div(self)
    }

    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        let d = self.sub(rhs);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        // keep 64 top bits and scale
        let drop = (bits - 64).max(0);
        let top = (&self.mant >> drop as u64).to_i128().unwrap() as f64;
        top * 2f64.powi((self.exp + drop) as i32)
    }

    /// log2 of the absolute value, approximately (for truncation estimates).
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 53).max(0);
        let top = (self.mant.magnitude() >> (drop as u64)).to_f64().unwrap();
        top.log2() + (self.exp + drop) as f64
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_i64(1, self.prec);
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

    /// Square root by integer Newton iteration. Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat::sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        // scale mantissa so that its bit length is ~ 2*(prec+8) with even exponent
        let target_bits = 2 * (prec as i64 + 8);
        let mut exp = self.exp;
        let mut m = self.mant.clone();
        let cur = m.bits() as i64;
        let mut shift = target_bits - cur;
        if (exp - shift) % 2 != 0 {
            shift += 1;
        }
        if shift >= 0 {
            m <<= shift as u64;
        } else {
            m >>= (-shift) as u64;
        }
        exp -= shift;
        let root = m.sqrt();
        BigFloat { mant: root, exp: exp / 2, prec }.normalized()
    }

    /// exp(x) with argument halving and Taylor series.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.is_zero() {
            return Self::from_i64(1, prec);
        }
        // halve until |y| <= 1/2; m squarings cost ~m bits, add guard
        let log2x = self.log2_abs();
        let m = if log2x > -1.0 { (log2x + 1.0).ceil() as i64 } else { 0 };
        let work = prec + m as u32 + 32;
        let mut y = self.with_prec(work).mul_pow2(-m);
        // Taylor around 0
        let one = Self::from_i64(1, work);
        let mut term = one.clone();
        let mut sum = one.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&y).div(&Self::from_i64(k, work));
            sum = sum.add(&term);
            if term.log2_abs() < -(work as f64) - 4.0 {
                break;
            }
            k += 1;
        }
        for _ in 0..m {
            sum = sum.mul(&sum);
        }
        y = sum.with_prec(prec);
        y
    }

    /// Simultaneous sin and cos with range reduction mod 2*pi.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec;
        let mag_bits = self.log2_abs().max(0.0) as u32;
        let work = prec + mag_bits + 32;
        let pi = pi(work);
        let two_pi = pi.mul_pow2(1);
        // x mod 2pi
        let q = self.with_prec(work).div(&two_pi);
        let qf = q.to_f64().round() as i64;
        let mut x = self.with_prec(work).sub(&two_pi.mul_i64(qf));
        // now |x| <= ~pi; reduce to |x| <= pi/4 with quadrant bookkeeping
        let half_pi = pi.mul_pow2(-1);
        let quarter_pi = pi.mul_pow2(-2);
        let mut quadrant = 0i32; // multiples of pi/2 subtracted
        while x.cmp_value(&quarter_pi) == Ordering::Greater {
            x = x.sub(&half_pi);
            quadrant += 1;
        }
        while x.cmp_value(&quarter_pi.neg()) == Ordering::Less {
            x = x.add(&half_pi);
            quadrant -= 1;
        }
        let (s0, c0) = sin_cos_taylor(&x, work);
        let (s, c) = match quadrant.rem_euclid(4) {
            0 => (s0, c0),
            1 => (c0, s0.neg()),
            2 => (s0.neg(), c0.neg()),
            _ => (c0.neg(), s0),
        };
        (s.with_prec(prec), c.with_prec(prec))
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        for _ in 0..4 {
            let k = digits as i64 - 1 - e10;
            let mut num = BigInt::from_biguint(Sign::Plus, self.mant.magnitude().clone());
            let mut den = BigInt::from(1u8);
            if k >= 0 {
                num *= BigInt::from(10u8).pow(k as u32);
            } else {
                den *= BigInt::from(10u8).pow((-k) as u32);
            }
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            let q: BigInt = ((&num << 1u32) + &den) / (&den << 1u32);
            let s = q.to_string();
            if s.len() > digits {
                e10 += 1;
                continue;
            }
            if s.len() < digits {
                e10 -= 1;
                continue;
            }
            let mantissa =
                if digits > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
            return format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, e10);
        }
        // fall back to f64 formatting if digit estimation failed to settle
        format!("{:e}", self.to_f64())
    }
}

fn sin_cos_taylor(x: &BigFloat, work: u32) -> (BigFloat, BigFloat) {
    let x = x.with_prec(work);
    let x2 = x.mul(&x);
    let mut sin = x.clone();
    let mut term = x.clone();
    let mut k = 1i64;
    loop {
        term = term.mul(&x2).div(&BigFloat::from_i64((2 * k) * (2 * k + 1), work)).neg();
        sin = sin.add(&term);
        if term.log2_abs() < -(work as f64) - 4.0 {
            break;
        }
        k += 1;
    }
    let mut cos = BigFloat::from_i64(1, work);
    term = BigFloat::from_i64(1, work);
    k = 1;
    loop {
        term = term.mul(&x2).div(&BigFloat::from_i64((2 * k - 1) * (2 * k), work)).neg();
        cos = cos.add(&term);
        if term.log2_abs() < -(work as f64) - 4.0 {
            break;
        }
        k += 1;
    }
    (sin, cos)
}

static PI_CACHE: Lazy<Mutex<HashMap<u32, BigFloat>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// pi at the given precision (Machin's formula), cached.
pub fn pi(prec: u32) -> BigFloat {
    if let Some(v) = PI_CACHE.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let work = (prec + 32) as u64;
    // atan(1/n) * 2^work as integers
    let atan_inv = |n: i64| -> BigInt {
        let mut sum = BigInt::zero();
        let mut term = (BigInt::from(1u8) << work) / n;
        let n2 = BigInt::from(n) * n;
        let mut k = 0u32;
        while !term.is_zero() {
            if k % 2 == 0 {
                sum += &term / (2 * k + 1);
            } else {
                sum -= &term / (2 * k + 1);
            }
            term /= &n2;
            k += 1;
        }
        sum
    };
    let scaled = (atan_inv(5) << 2) - atan_inv(239);
    let v = BigFloat { mant: scaled << 2, exp: -(work as i64), prec }.normalized();
    PI_CACHE.lock().unwrap().insert(prec, v.clone());
    v
}

/// Complex number over [`BigFloat`].
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec) }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BigComplex { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        BigComplex { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        BigComplex { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let d = rhs.norm_sqr();
        let n = self.mul(&rhs.conj());
        BigComplex { re: n.re.div(&d), im: n.im.div(&d) }
    }

    pub fn powi(&self, n: u32) -> Self {
        let prec = self.re.prec();
        let mut acc = BigComplex::from_f64(1.0, 0.0, prec);
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

    /// e^{i theta}
    pub fn cis(theta: &BigFloat) -> Self {
        let (s, c) = theta.sin_cos();
        BigComplex { re: c, im: s }
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
