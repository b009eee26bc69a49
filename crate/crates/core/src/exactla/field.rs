use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LaError;

/// Coefficient field selector: ℚ or 𝔽ℓ for a prime ℓ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    pub fn prime(p: u64) -> Result<Self, LaError> {
        if is_prime(p) && p < (1 << 31) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(LaError::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldKind::Rational => 0,
            FieldKind::Prime(p) => p,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = LaError;

    fn from_str(s: &str) -> Result<Self, LaError> {
        let t = s.trim();
        if t == "Q" || t == "q" || t == "QQ" {
            return Ok(FieldKind::Rational);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .or_else(|| t.strip_prefix("GF"))
            .ok_or_else(|| LaError::Parse(format!("unknown field `{t}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| LaError::Parse(format!("unknown field `{t}`")))?;
        FieldKind::prime(p)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A tagged exact scalar. Rationals are kept in lowest terms by `BigRational`,
/// residues are kept in `[0, modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Residue { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn from_int(kind: FieldKind, n: i64) -> Scalar {
        match kind {
            FieldKind::Rational => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldKind::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Arithmetic of a concrete field. Elimination kernels are generic over this
/// trait so that ℚ and 𝔽ℓ share one implementation.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, LaError>;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem, LaError>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, LaError> {
        Ok(q.clone())
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational, LaError> {
        match s {
            Scalar::Rational(q) => Ok(q.clone()),
            other => Err(LaError::MixedDomain {
                expected: FieldKind::Rational,
                found: other.kind(),
            }),
        }
    }
}

/// 𝔽ℓ with ℓ < 2³¹ so that products fit in a u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LaError> {
        FieldKind::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        n.mod_floor(&m).to_u64().unwrap_or(0)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in F{}", self.p);
        self.pow(*a, self.p - 2)
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, LaError> {
        let den = self.reduce_bigint(q.denom());
        if den == 0 {
            return Err(LaError::DenominatorVanishes {
                value: q.to_string(),
                prime: self.p,
            });
        }
        let num = self.reduce_bigint(q.numer());
        Ok(self.mul(&num, &self.inv(&den)))
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Residue {
            value: *a,
            modulus: self.p,
        }
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64, LaError> {
        match s {
            Scalar::Residue { value, modulus } if *modulus == self.p => Ok(*value % self.p),
            other => Err(LaError::MixedDomain {
                expected: self.kind(),
                found: other.kind(),
            }),
        }
    }
}

/// Reduce an exact rational into a scalar of the requested field.
pub fn scalar_from_rational(kind: FieldKind, q: &BigRational) -> Result<Scalar, LaError> {
    match kind {
        FieldKind::Rational => Ok(Scalar::Rational(q.clone())),
        FieldKind::Prime(p) => {
            let f = PrimeField::new(p)?;
            Ok(f.to_scalar(&f.from_rational(q)?))
        }
    }
}

/// Render a rational without a trailing `/1`, with sign.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `n` or `p/q` (optionally signed) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, LaError> {
    let t = s.trim();
    let bad = || LaError::Parse(format!("not a rational number: `{t}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(LaError::Parse(format!("zero denominator in `{t}`")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}
