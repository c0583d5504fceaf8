//! Exact field arithmetic for the two coefficient fields the tool supports:
//! the rationals (arbitrary precision) and prime fields F_p with p < 2^31.
//!
//! All linear algebra in this crate is generic over the [`Field`] trait, so
//! the elimination code is written once and monomorphised for both fields.
//! Floating point never appears anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::FigError;

/// Serializable description of a coefficient field.
///
/// In JSON this is either the string `"Q"` or an object `{"Fp": p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    #[serde(rename = "Q")]
    Q,
    Fp(u64),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => write!(f, "Q"),
            FieldSpec::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

impl FieldSpec {
    /// Validate the described field: `Fp(p)` requires 2 <= p < 2^31, p prime.
    pub fn validate(&self) -> Result<(), FigError> {
        match self {
            FieldSpec::Q => Ok(()),
            FieldSpec::Fp(p) => {
                if *p < 2 || *p >= (1 << 31) {
                    return Err(FigError::BadField(format!(
                        "prime field modulus {p} out of range [2, 2^31)"
                    )));
                }
                if !is_prime(*p) {
                    return Err(FigError::BadField(format!("{p} is not prime")));
                }
                Ok(())
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A coefficient field. Implementations carry whatever context the element
/// representation needs (the modulus for F_p); elements themselves stay as
/// small as possible so large matrices are cheap to store.
pub trait Field: Copy + fmt::Debug + PartialEq + Send + Sync + 'static {
    type El: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// Multiplicative inverse. Panics on zero (callers guard).
    fn inv(&self, a: &Self::El) -> Self::El;
    fn from_i64(&self, n: i64) -> Self::El;
    /// Parse the decimal-string form used in data files ("a" or "a/b").
    fn parse(&self, s: &str) -> Result<Self::El, FigError>;
    /// Canonical decimal-string form ("a/b" in lowest terms with b > 0, or "a").
    fn format(&self, a: &Self::El) -> String;
    fn spec(&self) -> FieldSpec;
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type El = BigRational;

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
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn parse(&self, s: &str) -> Result<BigRational, FigError> {
        let s = s.trim();
        let bad = |_| FigError::Parse(format!("bad rational literal `{s}`"));
        match s.split_once('/') {
            Some((num, den)) => {
                let n: BigInt = num.trim().parse().map_err(bad)?;
                let d: BigInt = den.trim().parse().map_err(bad)?;
                if d.is_zero() {
                    return Err(FigError::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(bad)?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    fn format(&self, a: &BigRational) -> String {
        // BigRational is kept reduced with positive denominator.
        debug_assert!(a.denom().is_positive());
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Q
    }
}

/// A prime field F_p with 2 <= p < 2^31. Elements are residues in [0, p)
/// stored as `u64`, so products never overflow before reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FigError> {
        FieldSpec::Fp(p).validate()?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type El = u64;

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
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        // Extended Euclid on (a, p); p prime so gcd is 1.
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let p = self.p as i128;
        (((s0 % p) + p) % p) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i64;
        (((n % p) + p) % p) as u64
    }

    fn parse(&self, s: &str) -> Result<u64, FigError> {
        let s = s.trim();
        // Accept an optional sign and reduce mod p; files normally store [0, p).
        let n: i64 = s
            .parse()
            .map_err(|_| FigError::Parse(format!("bad F_{} literal `{s}`", self.p)))?;
        Ok(self.from_i64(n))
    }

    fn format(&self, a: &u64) -> String {
        debug_assert!(*a < self.p);
        a.to_string()
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Fp(self.p)
    }
}
