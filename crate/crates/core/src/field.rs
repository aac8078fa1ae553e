//! Exact coefficient fields.
//!
//! One scalar type serves three fields so that the linear-algebra and
//! Gröbner kernels stay monomorphic:
//!
//! * arbitrary-precision rationals,
//! * prime fields GF(p) with p < 2^31,
//! * rational function fields Q(y1, …, ym), kept in reduced canonical form
//!   (coprime numerator/denominator, monic denominator).
//!
//! Rationals promote implicitly into the other two variants when mixed, so
//! templates with integer coefficients evaluate in any of the fields.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{self, Polynomial};
use crate::ring::Ring;

/// Which field a ring's coefficients live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    /// Arbitrary-precision rationals.
    Rationals,
    /// Prime field of the given characteristic (p < 2^31, p prime).
    Prime(u64),
    /// Fractions of polynomials over the given (rational-coefficient) ring.
    Fractions(Arc<Ring>),
}

impl FieldKind {
    /// A validated prime field: `p` must be prime and below 2^31.
    pub fn prime(p: u64) -> crate::error::Result<FieldKind> {
        let ok = p >= 2
            && p < (1 << 31)
            && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if ok {
            Ok(FieldKind::Prime(p))
        } else {
            Err(crate::error::Error::Invalid(format!(
                "{p} is not a prime below 2^31"
            )))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldKind::Rationals => Scalar::Rat(BigRational::zero()),
            FieldKind::Prime(p) => Scalar::Mod { val: 0, p: *p },
            FieldKind::Fractions(ring) => Scalar::from_fraction(
                Polynomial::zero(ring.clone()),
                Polynomial::one(ring.clone()),
            ),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldKind::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Prime(p) => Scalar::Mod { val: n.rem_euclid(*p as i64) as u64, p: *p },
            FieldKind::Fractions(ring) => {
                let num = Polynomial::constant(
                    ring.clone(),
                    Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
                );
                Scalar::from_fraction(num, Polynomial::one(ring.clone()))
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Prime(p) => *p,
            _ => 0,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "QQ"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
            FieldKind::Fractions(ring) => {
                let names: Vec<&str> =
                    (0..ring.num_vars() as u32).map(|v| ring.var_name(v)).collect();
                write!(f, "QQ({})", names.join(", "))
            }
        }
    }
}

/// A reduced fraction of polynomials with rational coefficients.
///
/// Invariants: `den` is nonzero and monic with respect to its ring's order,
/// `gcd(num, den) = 1`, and a zero numerator forces `den = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RatFn {
    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is 1 (the fraction is a polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

/// An element of one of the supported coefficient fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod { val: u64, p: u64 },
    Fn(Arc<RatFn>),
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p; p < 2^31 keeps the products in range.
    mod_pow(a, p - 2, p)
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds the reduced canonical fraction `num/den`.
    ///
    /// Panics if `den` is the zero polynomial (callers validate first).
    pub fn from_fraction(num: Polynomial, den: Polynomial) -> Scalar {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            let one = Polynomial::one(den.ring().clone());
            return Scalar::Fn(Arc::new(RatFn { num, den: one }));
        }
        let g = poly::gcd(&num, &den);
        let mut n = poly::exact_div(&num, &g).expect("gcd divides numerator");
        let mut d = poly::exact_div(&den, &g).expect("gcd divides denominator");
        // normalize: monic denominator
        let lc = d.leading_coeff().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Scalar::Fn(Arc::new(RatFn { num: n, den: d }))
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rat(_) => FieldKind::Rationals,
            Scalar::Mod { p, .. } => FieldKind::Prime(*p),
            Scalar::Fn(f) => FieldKind::Fractions(f.ring().clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
            Scalar::Fn(f) => f.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod { val, .. } => *val == 1,
            Scalar::Fn(f) => f.num.is_one() && f.den.is_one(),
        }
    }

    /// Promotes a rational into the field of `other` when the variants
    /// differ; used so integer templates evaluate in any field.
    fn unify(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Rat(q), Scalar::Mod { p, .. }) => (rat_to_mod(q, *p), b.clone()),
            (Scalar::Mod { p, .. }, Scalar::Rat(q)) => (a.clone(), rat_to_mod(q, *p)),
            (Scalar::Rat(_), Scalar::Fn(f)) => (rat_to_fn(a, f.ring()), b.clone()),
            (Scalar::Fn(f), Scalar::Rat(_)) => {
                let rhs = rat_to_fn(b, f.ring());
                (a.clone(), rhs)
            }
            _ => (a.clone(), b.clone()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let (a, b) = Scalar::unify(self, other);
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod { val: x, p }, Scalar::Mod { val: y, p: q }) => {
                assert_eq!(p, q, "characteristic mismatch");
                Scalar::Mod { val: (x + y) % p, p }
            }
            (Scalar::Fn(x), Scalar::Fn(y)) => {
                let num = x.num.mul(&y.den).add(&y.num.mul(&x.den));
                let den = x.den.mul(&y.den);
                Scalar::from_fraction(num, den)
            }
            _ => panic!("scalar field mismatch in add"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q.clone()),
            Scalar::Mod { val, p } => Scalar::Mod { val: (*p - *val) % *p, p: *p },
            Scalar::Fn(f) => Scalar::Fn(Arc::new(RatFn { num: f.num.neg(), den: f.den.clone() })),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let (a, b) = Scalar::unify(self, other);
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod { val: x, p }, Scalar::Mod { val: y, p: q }) => {
                assert_eq!(p, q, "characteristic mismatch");
                Scalar::Mod { val: x * y % p, p }
            }
            (Scalar::Fn(x), Scalar::Fn(y)) => {
                Scalar::from_fraction(x.num.mul(&y.num), x.den.mul(&y.den))
            }
            _ => panic!("scalar field mismatch in mul"),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rat(q) => Scalar::Rat(q.recip()),
            Scalar::Mod { val, p } => Scalar::Mod { val: mod_inv(*val, *p), p: *p },
            Scalar::Fn(f) => Scalar::from_fraction(f.den.clone(), f.num.clone()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = match self {
            Scalar::Rat(_) => Scalar::Rat(BigRational::one()),
            Scalar::Mod { p, .. } => Scalar::Mod { val: 1 % *p, p: *p },
            Scalar::Fn(f) => FieldKind::Fractions(f.ring().clone()).one(),
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The rational value, if this scalar is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(q) => Some(q),
            _ => None,
        }
    }

    /// The rational-function value, if this scalar is one.
    pub fn as_fraction(&self) -> Option<&RatFn> {
        match self {
            Scalar::Fn(f) => Some(f),
            _ => None,
        }
    }
}

fn rat_to_mod(q: &BigRational, p: u64) -> Scalar {
    let pb = BigInt::from(p);
    let red = |x: &BigInt| -> u64 {
        let r = ((x % &pb) + &pb) % &pb;
        u64::try_from(&r).expect("residue fits in u64")
    };
    let n = red(q.numer());
    let d = red(q.denom());
    assert!(d != 0, "denominator divisible by the characteristic");
    Scalar::Mod { val: n * mod_inv(d, p) % p, p }
}

fn rat_to_fn(q: &Scalar, ring: &Arc<Ring>) -> Scalar {
    Scalar::from_fraction(
        Polynomial::constant(ring.clone(), q.clone()),
        Polynomial::one(ring.clone()),
    )
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{}", format_rational(q)),
            Scalar::Mod { val, .. } => write!(f, "{val}"),
            Scalar::Fn(r) => {
                if r.is_polynomial() {
                    if r.num.num_terms() > 1 {
                        write!(f, "({})", r.num)
                    } else {
                        write!(f, "{}", r.num)
                    }
                } else {
                    write!(f, "({})/({})", r.num, r.den)
                }
            }
        }
    }
}

/// True when the rational is a (positive or negative) integer.
pub fn rational_is_integer(q: &BigRational) -> bool {
    q.denom().is_one()
}

/// Sign of a rational: -1, 0, or 1.
pub fn rational_sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.numer().is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let k = FieldKind::Prime(101);
        let a = k.from_i64(57);
        let b = k.from_i64(88);
        assert_eq!(a.add(&b), k.from_i64(44)); // 145 mod 101
        assert_eq!(a.mul(&b), k.from_i64(5016 % 101));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        assert_eq!(k.from_i64(-1), k.from_i64(100));
    }

    #[test]
    fn rational_promotion_into_prime() {
        let half = Scalar::from_ratio(1, 2);
        let one = FieldKind::Prime(7).one();
        // 1/2 = 4 in GF(7); 4 + 1 = 5
        assert_eq!(half.add(&one), FieldKind::Prime(7).from_i64(5));
    }
}
