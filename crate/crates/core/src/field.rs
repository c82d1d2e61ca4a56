//! Exact scalars over the rationals or a prime field GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator is divisible by the characteristic {0}")]
    DenominatorDivisibleByP(u64),
    #[error("scalars belong to different fields ({0} vs {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("malformed scalar literal `{0}`")]
    Malformed(String),
}

/// The ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    /// GF(p); construct through [`FieldSpec::prime`] so that `p` is checked.
    PrimeField(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NonPrimeModulus(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_int(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_int(*self, 1)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF:{p}"),
        }
    }
}

/// Accepts `Q` or `GF:<p>` (also `GF<p>` and `GF <p>`).
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let rest = s
            .strip_prefix("GF")
            .ok_or_else(|| FieldError::Malformed(s.to_string()))?;
        let rest = rest.trim_start_matches([':', ' ']);
        let p: u64 = rest
            .parse()
            .map_err(|_| FieldError::Malformed(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn reduce_big(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.sign() == Sign::Minus {
        r + BigInt::from(p)
    } else {
        r
    };
    r.to_u64().expect("residue fits in u64")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue(u64),
}

/// An exact field element. The representation is canonical, so derived
/// equality is field equality.
///
/// The `std::ops` impls panic on mixed fields; use the `checked_*` methods
/// when operands come from unvalidated input.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    repr: Repr,
}

impl Scalar {
    pub fn from_int(field: FieldSpec, n: i64) -> Scalar {
        Scalar::from_bigint(field, &BigInt::from(n))
    }

    pub fn from_bigint(field: FieldSpec, n: &BigInt) -> Scalar {
        let repr = match field {
            FieldSpec::Rationals => Repr::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => Repr::Residue(reduce_big(n, p)),
        };
        Scalar { field, repr }
    }

    /// Canonical representative of `num/den`.
    pub fn from_frac(
        field: FieldSpec,
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Result<Scalar, FieldError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        match field {
            FieldSpec::Rationals => Ok(Scalar {
                field,
                repr: Repr::Rational(BigRational::new(num, den)),
            }),
            FieldSpec::PrimeField(p) => {
                let d = reduce_big(&den, p);
                if d == 0 {
                    return Err(FieldError::DenominatorDivisibleByP(p));
                }
                let n = reduce_big(&num, p);
                let inv = pow_mod(d, p - 2, p);
                Ok(Scalar {
                    field,
                    repr: Repr::Residue(mul_mod(n, inv, p)),
                })
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue(r) => *r == 1,
        }
    }

    /// `(numerator, denominator)` of the canonical representative; residues
    /// report denominator 1.
    pub fn as_fraction(&self) -> (BigInt, BigInt) {
        match &self.repr {
            Repr::Rational(q) => (q.numer().clone(), q.denom().clone()),
            Repr::Residue(r) => (BigInt::from(*r), BigInt::one()),
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field, other.field))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Residue(a), Repr::Residue(b)) => {
                let p = self.field.characteristic();
                Repr::Residue(((*a as u128 + *b as u128) % p as u128) as u64)
            }
            _ => unreachable!("field tag and representation disagree"),
        };
        Ok(Scalar {
            field: self.field,
            repr,
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Residue(a), Repr::Residue(b)) => {
                Repr::Residue(mul_mod(*a, *b, self.field.characteristic()))
            }
            _ => unreachable!("field tag and representation disagree"),
        };
        Ok(Scalar {
            field: self.field,
            repr,
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Residue(0) => Repr::Residue(0),
            Repr::Residue(a) => Repr::Residue(self.field.characteristic() - a),
        };
        Scalar {
            field: self.field,
            repr,
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a.recip()),
            Repr::Residue(a) => {
                let p = self.field.characteristic();
                Repr::Residue(pow_mod(*a, p - 2, p))
            }
        };
        Ok(Scalar {
            field: self.field,
            repr,
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.checked_mul(&other.inv()?)
    }

    /// True for rationals with a negative value; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(&self.repr, Repr::Rational(q) if q.is_negative())
    }

    /// Sign and magnitude used for display. Residues above p/2 are shown as
    /// negatives, so `p - 1` renders as a leading minus exactly like `-1` in Q.
    pub fn sign_split(&self) -> (bool, Scalar) {
        match &self.repr {
            Repr::Rational(q) if q.is_negative() => (true, self.neg_ref()),
            Repr::Residue(r) if *r > self.field.characteristic() / 2 => (true, self.neg_ref()),
            _ => (false, self.clone()),
        }
    }

    /// Parses `a`, `-a`, `a/b` or `-a/b`. In GF(p) the literal is reduced mod p.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Scalar, FieldError> {
        let malformed = || FieldError::Malformed(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let digits = |t: &str| -> Result<BigInt, FieldError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            t.parse::<BigInt>().map_err(|_| malformed())
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (digits(n)?, digits(d)?),
            None => (digits(body)?, BigInt::one()),
        };
        let num = if neg { -num } else { num };
        Scalar::from_frac(field, num, den)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Repr::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}
