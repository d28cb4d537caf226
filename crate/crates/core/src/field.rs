//! Exact scalars: the rationals and prime fields GF(p).
//!
//! Every [`Scalar`] carries its field with it, so mixing scalars from two
//! different fields is an invariant violation and panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest accepted prime modulus. Products of two residues must fit in u64.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    /// GF(p), validated by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidInput(format!(
                "prime modulus {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn size(self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Modular {
                value: (v.rem_euclid(p as i64)) as u64,
                modulus: p,
            },
        }
    }

    /// The element `num / den`; fails when `den` vanishes in the field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            FieldSpec::Prime(p) => {
                let n = reduce_bigint(num, p);
                let d = reduce_bigint(den, p);
                let d = self.element(d).inv().ok_or_else(|| {
                    Error::InvalidInput(format!("denominator {den} is zero modulo {p}"))
                })?;
                Ok(&self.element(n) * &d)
            }
        }
    }

    /// Residue `value` of GF(p). Panics on the rationals.
    pub fn element(self, value: u64) -> Scalar {
        match self {
            FieldSpec::Prime(p) => Scalar::Modular {
                value: value % p,
                modulus: p,
            },
            FieldSpec::Rationals => panic!("element() requires a prime field"),
        }
    }

    /// All field elements in ascending residue order (prime fields only).
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..p).map(|v| self.element(v)).collect()),
        }
    }

    /// 1/2, when 2 is invertible.
    pub fn half(self) -> Option<Scalar> {
        self.from_i64(2).inv()
    }

    /// Parses `a`, `a/b`, or `a mod p` (the latter must name this field's modulus).
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let body = match text.split_once(" mod ") {
            Some((value, modulus)) => {
                let modulus: u64 = modulus
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad modulus in scalar `{text}`")))?;
                if self != FieldSpec::Prime(modulus) {
                    return Err(Error::WrongField(format!(
                        "scalar `{text}` does not belong to {self}"
                    )));
                }
                value.trim()
            }
            None => text,
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (body, "1"),
        };
        let parse = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse scalar `{text}`")))
        };
        self.from_ratio(&parse(num)?, &parse(den)?)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    r.to_u64().expect("residue fits in u64")
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with positive
/// denominator; residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Modular { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// `self * 2^k`-style integer scaling.
    pub fn scale_int(&self, k: i64) -> Scalar {
        self * &self.field().from_i64(k)
    }

    /// Sign-flips when `negate` is set.
    pub fn signed(&self, negate: bool) -> Scalar {
        if negate {
            -self
        } else {
            self.clone()
        }
    }

    /// Text used inside manifests: the field is implied by the header.
    pub fn to_plain_string(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { value, .. } => value.to_string(),
        }
    }

    /// Integer part of a rational with denominator 1 (used by test oracles).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => Some(r.numer().clone()),
            Scalar::Modular { value, .. } => Some(BigInt::from(*value)),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Modular { .. } => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{}", self.to_plain_string()),
            Scalar::Modular { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

fn field_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (
                Scalar::Modular {
                    value: a,
                    modulus: p,
                },
                Scalar::Modular {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Modular {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (
                Scalar::Modular {
                    value: a,
                    modulus: p,
                },
                Scalar::Modular {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Modular {
                value: (a + p - b) % p,
                modulus: *p,
            },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (
                Scalar::Modular {
                    value: a,
                    modulus: p,
                },
                Scalar::Modular {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Scalar::Modular {
                value: a * b % p,
                modulus: *p,
            },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            (
                Scalar::Modular {
                    value: a,
                    modulus: p,
                },
                Scalar::Modular {
                    value: b,
                    modulus: q,
                },
            ) if *p == *q => *a = (*a + b) % *p,
            _ => panic!("field mismatch in +="),
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a -= b,
            (
                Scalar::Modular {
                    value: a,
                    modulus: p,
                },
                Scalar::Modular {
                    value: b,
                    modulus: q,
                },
            ) if *p == *q => *a = (*a + *p - b) % *p,
            _ => panic!("field mismatch in -="),
        }
    }
}

/// Dense vectors over a field are plain `Vec<Scalar>`; these helpers keep the
/// arithmetic in one place.
pub mod vector {
    use super::{FieldSpec, Scalar};

    pub fn zeros(field: FieldSpec, n: usize) -> Vec<Scalar> {
        vec![field.zero(); n]
    }

    pub fn basis(field: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = zeros(field, n);
        v[i] = field.one();
        v
    }

    pub fn add_assign(acc: &mut [Scalar], x: &[Scalar]) {
        assert_eq!(acc.len(), x.len(), "vector length mismatch");
        for (a, b) in acc.iter_mut().zip(x) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn sub_assign(acc: &mut [Scalar], x: &[Scalar]) {
        assert_eq!(acc.len(), x.len(), "vector length mismatch");
        for (a, b) in acc.iter_mut().zip(x) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }

    /// `acc += c * x`
    pub fn axpy(acc: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
        assert_eq!(acc.len(), x.len(), "vector length mismatch");
        if c.is_zero() {
            return;
        }
        for (a, b) in acc.iter_mut().zip(x) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    pub fn add(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = x.to_vec();
        add_assign(&mut out, y);
        out
    }

    pub fn sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = x.to_vec();
        sub_assign(&mut out, y);
        out
    }

    pub fn scale(c: &Scalar, x: &[Scalar]) -> Vec<Scalar> {
        x.iter().map(|b| c * b).collect()
    }

    pub fn is_zero(x: &[Scalar]) -> bool {
        x.iter().all(Scalar::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let q = FieldSpec::Rationals;
        let a = q.parse_scalar("4/-6").unwrap();
        assert_eq!(a.to_plain_string(), "-2/3");
        assert_eq!(q.parse_scalar("0/7").unwrap(), q.zero());
        assert_eq!(q.parse_scalar("10/5").unwrap().to_plain_string(), "2");
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = FieldSpec::prime(5).unwrap();
        let two = f.from_i64(2);
        assert_eq!(two.inv().unwrap(), f.from_i64(3));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(3));
        assert_eq!(f.parse_scalar("3 mod 5").unwrap(), f.from_i64(3));
        assert!(f.parse_scalar("3 mod 7").is_err());
        assert!(f.parse_scalar("1/5").is_err());
        assert_eq!(format!("{}", f.from_i64(7)), "2 mod 5");
    }

    #[test]
    fn primality() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(7).is_ok());
        assert!(matches!(FieldSpec::prime(9), Err(Error::NotPrime(9))));
        assert!(matches!(FieldSpec::prime(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn half_undefined_in_characteristic_two() {
        assert!(FieldSpec::Prime(2).half().is_none());
        assert_eq!(
            FieldSpec::Prime(7).half().unwrap(),
            FieldSpec::Prime(7).from_i64(4)
        );
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &FieldSpec::Rationals.one() + &FieldSpec::Prime(3).one();
    }
}
