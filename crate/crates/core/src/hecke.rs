//! Hecke characters of Q(sqrt(-7)).
//!
//! The field has class number 1, so a Hecke character is pinned down by its
//! infinity type together with its values on generators: the canonical
//! character sends a principal ideal (alpha) coprime to sqrt(-7) to
//! eps(alpha) * alpha, where eps is the quadratic residue character of the
//! residue field O_E/(sqrt(-7)) = Z/7. Everything here is exact until a
//! final complex embedding at caller-chosen precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::bigfloat::{BigComplex, BigFloat};
use crate::qfield::{legendre, rat_i, val_unit, IdealE, QuadElem, Rat};

pub const FIELD_U: i64 = -7;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("ideal is not coprime to the conductor")]
    NotCoprime,
    #[error("power must be >= 1")]
    BadPower,
    #[error("only the field Q(sqrt(-7)) is supported")]
    UnsupportedField,
}

/// How a rational prime behaves in Q(sqrt(-7)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn prime_splitting(p: u64) -> Splitting {
    if p == 7 {
        return Splitting::Ramified;
    }
    if p == 2 {
        // -7 = 1 mod 8
        return Splitting::Split;
    }
    match legendre(&BigInt::from(FIELD_U), p).unwrap() {
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a nonzero mod p
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mod7(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(7u8)).to_u64().unwrap()
}

/// The residue character eps: (O_E/(sqrt(-7)))^* = (Z/7)^* -> {+-1}.
///
/// For alpha = a + b*sqrt(-7) coprime to sqrt(-7), the residue is a mod 7
/// (with the denominator of a inverted mod 7).
pub fn eps_residue(alpha: &QuadElem) -> Result<i8, HeckeError> {
    assert_eq!(alpha.u, FIELD_U);
    let n = alpha.norm();
    if n.is_zero() || val_unit(&n, 7).0 != 0 {
        return Err(HeckeError::NotCoprime);
    }
    let num7 = mod7(alpha.a.numer());
    let den7 = mod7(alpha.a.denom());
    let residue = num7 * mod_inverse(den7, 7) % 7;
    Ok(legendre(&BigInt::from(residue), 7).unwrap())
}

/// A power of the canonical Hecke character of Q(sqrt(-7)).
///
/// `power = n` means chi_can^n, of infinity type (n, 0). With
/// `normalized = true` values carry the unitary twist by Nm^(-n/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeCharSpec {
    pub field_u: i64,
    pub power: u32,
    pub infinity_type: (i64, i64),
    pub normalized: bool,
}

impl HeckeCharSpec {
    pub fn unitary(&self) -> Self {
        HeckeCharSpec { normalized: true, ..self.clone() }
    }

    pub fn is_odd(&self) -> bool {
        self.power % 2 == 1
    }

    /// Conductor ideal: (sqrt(-7)) for odd powers, (1) for even powers.
    pub fn conductor(&self) -> IdealE {
        if self.is_odd() {
            IdealE::new(QuadElem::gen(FIELD_U))
        } else {
            IdealE::new(QuadElem::one(FIELD_U))
        }
    }

    /// Local conductor exponent c(chi_v) at the place above p.
    pub fn local_conductor_exponent(&self, p: u64) -> u32 {
        if p == 7 && self.is_odd() {
            1
        } else {
            0
        }
    }

    /// Exact (unnormalized) value on an ideal: eps(alpha)^n * alpha^n.
    ///
    /// For even powers the character has conductor (1); its unique extension
    /// to all ideals is alpha^n, which is what the formula gives since
    /// eps^n = 1. For odd powers the ideal must be coprime to sqrt(-7).
    pub fn eval_ideal_exact(&self, a: &IdealE) -> Result<QuadElem, HeckeError> {
        let alpha = a.generator();
        if self.is_odd() {
            let e = eps_residue(alpha)?;
            let v = alpha.pow(self.power);
            Ok(if e == -1 { v.neg() } else { v })
        } else {
            Ok(alpha.pow(self.power))
        }
    }

    /// Value on an ideal as a complex number at `prec` bits; divides by
    /// Nm^(n/2) when the spec is normalized.
    pub fn eval_ideal(&self, a: &IdealE, prec: u32) -> Result<BigComplex, HeckeError> {
        let exact = self.eval_ideal_exact(a)?;
        let v = exact.embed(prec);
        if self.normalized {
            let nm = BigFloat::from_rational(&a.norm(), prec);
            let scale = nm.sqrt().powi(self.power).recip();
            Ok(v.scale(&scale))
        } else {
            Ok(v)
        }
    }
}

/// chi_can^n.
pub fn canonical_char(n: u32) -> Result<HeckeCharSpec, HeckeError> {
    if n == 0 {
        return Err(HeckeError::BadPower);
    }
    Ok(HeckeCharSpec {
        field_u: FIELD_U,
        power: n,
        infinity_type: (n as i64, 0),
        normalized: false,
    })
}

/// The twist chi~(x) = chi(x / xbar): on an ideal (alpha) its value is
/// (alpha/alphabar)^n, a norm-1 element of E, trivial on ideals with a
/// rational generator.
#[derive(Debug, Clone)]
pub struct TwistedCharSpec {
    pub base: HeckeCharSpec,
}

impl TwistedCharSpec {
    pub fn new(base: HeckeCharSpec) -> Self {
        TwistedCharSpec { base }
    }

    pub fn eval_ideal_exact(&self, a: &IdealE) -> Result<QuadElem, HeckeError> {
        let alpha = a.generator();
        let ratio = alpha.div(&alpha.conj()).map_err(|_| HeckeError::NotCoprime)?;
        Ok(ratio.pow(self.base.power))
    }
}

/// Local behaviour of a quadratic extension at a place, for the conductor
/// formula of the automorphic induction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalExt {
    /// L = k + k, chi = chi_1 (x) chi_2
    Split { c_chi1: u32, c_chi2: u32 },
    /// L/k unramified field extension
    Unramified { c_chi: u32, val_4: u32 },
    /// L/k ramified field extension
    Ramified { c_chi: u32, val_4: u32 },
}

/// Conductor exponent of the automorphic induction pi_chi at one place.
pub fn conductor_pi_exponent(ext: LocalExt) -> u32 {
    match ext {
        LocalExt::Split { c_chi1, c_chi2 } => c_chi1 + c_chi2,
        LocalExt::Unramified { c_chi, val_4 } => val_4 + 2 * c_chi,
        LocalExt::Ramified { c_chi, val_4 } => 1 + val_4 + c_chi,
    }
}

/// Conductor exponent of pi_{chi_can^n} at a rational prime p.
pub fn conductor_pi_at(chi: &HeckeCharSpec, p: u64) -> u32 {
    let val_4 = if p == 2 { 2 } else { 0 };
    match prime_splitting(p) {
        Splitting::Split => conductor_pi_exponent(LocalExt::Split { c_chi1: 0, c_chi2: 0 }),
        Splitting::Inert => conductor_pi_exponent(LocalExt::Unramified { c_chi: 0, val_4 }),
        Splitting::Ramified => conductor_pi_exponent(LocalExt::Ramified {
            c_chi: chi.local_conductor_exponent(p),
            val_4,
        }),
    }
}

/// Level of the newform attached to chi_can^n: 49 for odd n, 7 for even n.
pub fn global_level(chi: &HeckeCharSpec) -> u64 {
    7u64.pow(conductor_pi_at(chi, 7))
}

/// Lattice points of O_E with norm exactly n (no unit identification).
/// Points are (p + q*sqrt(-7))/2 with p = q mod 2 and p^2 + 7 q^2 = 4n.
pub fn lattice_points_of_norm(n: u64) -> Vec<QuadElem> {
    let mut out = Vec::new();
    let four_n = 4 * n as i64;
    let mut q = 0i64;
    while 7 * q * q <= four_n {
        let rem = four_n - 7 * q * q;
        let p0 = (rem as f64).sqrt().round() as i64;
        for pp in [p0 - 1, p0, p0 + 1] {
            if pp >= 0 && pp * pp == rem && (pp - q).rem_euclid(2) == 0 {
                for (sp, sq) in [(pp, q), (-pp, q), (pp, -q), (-pp, -q)] {
                    let x = QuadElem::from_parts(
                        Rat::new(BigInt::from(sp), BigInt::from(2)),
                        Rat::new(BigInt::from(sq), BigInt::from(2)),
                        FIELD_U,
                    );
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
        q += 1;
    }
    out
}

/// Ideals of O_E of norm exactly n.
pub fn ideals_of_norm(n: u64) -> Vec<IdealE> {
    let mut out: Vec<IdealE> = Vec::new();
    for x in lattice_points_of_norm(n) {
        let i = IdealE::new(x);
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

/// A prime ideal above a split prime p.
pub fn prime_above(p: u64) -> Option<IdealE> {
    ideals_of_norm(p).into_iter().next()
}

/// The quadratic Dirichlet character attached to Q(sqrt(-7))/Q (mod 7).
pub fn eps_dirichlet(m: i64) -> i8 {
    if m.rem_euclid(7) == 0 {
        0
    } else {
        legendre(&BigInt::from(m), 7).unwrap()
    }
}
