use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::LinalgError;

/// A prime modulus. Restricted to `p < 2^32` so that residue products fit in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub const MAX: u64 = u32::MAX as u64;

    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p > Self::MAX {
            return Err(LinalgError::InvalidField(format!(
                "modulus {p} exceeds the supported maximum {}",
                Self::MAX
            )));
        }
        if !is_prime(p) {
            return Err(LinalgError::InvalidField(format!("{p} is not prime")));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The field a scalar or matrix lives in: the rationals, or the prime field of order `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Prime),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        Prime::new(p).map(FieldSpec::PrimeField)
    }

    /// The characteristic, `None` for the rationals.
    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(p.get()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(value))),
            FieldSpec::PrimeField(p) => {
                let m = p.get() as i128;
                let v = (value as i128).rem_euclid(m) as u64;
                Scalar::Residue { value: v, modulus: p }
            }
        }
    }

    /// Embeds an integer given in arbitrary precision.
    pub fn from_bigint(&self, value: &BigInt) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(value.clone())),
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(p.get());
                let r = ((value % &m) + &m) % &m;
                Scalar::Residue {
                    value: r.to_u64().expect("residue below modulus"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps `num / den` into the field. Fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, LinalgError> {
        let d = self.from_bigint(den);
        let inv = d
            .inv()
            .ok_or_else(|| LinalgError::Parse(format!("denominator {den} is zero in {self}")))?;
        Ok(&self.from_bigint(num) * &inv)
    }

    /// Parses `"a"` or `"a/b"` (decimal integers) into the field.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, LinalgError> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| LinalgError::Parse(format!("invalid integer {num:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| LinalgError::Parse(format!("invalid integer {den:?}")))?;
        if den.is_zero() {
            return Err(LinalgError::Parse(format!("zero denominator in {text:?}")));
        }
        self.from_fraction(&num, &den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "Fp:{}", p.get()),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        let digits = s
            .strip_prefix("Fp:")
            .ok_or_else(|| LinalgError::InvalidField(format!("expected \"Q\" or \"Fp:<prime>\", got {s:?}")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| LinalgError::InvalidField(format!("invalid modulus {digits:?}")))?;
        FieldSpec::prime(p)
    }
}

/// An exact field element. Rationals are kept in lowest terms with positive denominator;
/// residues are canonical in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: Prime },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => {
                let p = modulus.get();
                Scalar::Residue {
                    value: pow_mod(*value, p - 2, p),
                    modulus: *modulus,
                }
            }
        })
    }

    /// Numerator and denominator of a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    /// The canonical residue of a prime-field scalar.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) if a.is_zero() => Scalar::Rational(b.clone()),
            (Scalar::Rational(a), Scalar::Rational(b)) if b.is_zero() => Scalar::Rational(a.clone()),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: (a + b) % modulus.get(),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) if b.is_zero() => Scalar::Rational(a.clone()),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                let p = modulus.get();
                Scalar::Residue {
                    value: (a + p - b) % p,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        match (self, rhs) {
            // Shortcuts skip the gcd normalization; matrices here are mostly 0 and 1.
            (Scalar::Rational(a), Scalar::Rational(b)) if a.is_one() => Scalar::Rational(b.clone()),
            (Scalar::Rational(a), Scalar::Rational(b)) if b.is_one() => Scalar::Rational(a.clone()),
            (Scalar::Rational(a), Scalar::Rational(b)) if a.is_zero() || b.is_zero() => {
                Scalar::Rational(BigRational::zero())
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: a * b % modulus.get(),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus.get() - value) % modulus.get(),
                modulus: *modulus,
            },
        }
    }
}
