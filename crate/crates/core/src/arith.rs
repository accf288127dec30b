//! Prime-power moduli, big indices, base-p digits and CRT.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Largest admissible `p^a`. Residue products must fit in a `u64`.
pub const MAX_PRIME_POWER: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("{p}^{a} exceeds the supported modulus bound {MAX_PRIME_POWER}")]
    ModulusTooLarge { p: u64, a: u32 },
    #[error("invalid base {0}: digits need a base of at least 2")]
    InvalidBase(u64),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("residue {residue} is out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("product of moduli overflows 64 bits")]
    Overflow,
    #[error("invalid index '{0}': expected a decimal integer or B^E / B**E")]
    InvalidIndex(String),
}

/// Deterministic trial-division primality check.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The modulus `p^a` for a prime `p` and exponent `a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    a: u32,
    pa: u64,
}

impl Modulus {
    pub fn new(p: u64, a: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if a == 0 {
            return Err(ArithError::ZeroExponent);
        }
        let pa = p
            .checked_pow(a)
            .filter(|&pa| pa <= MAX_PRIME_POWER)
            .ok_or(ArithError::ModulusTooLarge { p, a })?;
        Ok(Modulus { p, a, pa })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn a(&self) -> u32 {
        self.a
    }

    /// The modulus value `p^a`.
    #[inline]
    pub fn value(&self) -> u64 {
        self.pa
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.pa
    }

    /// Reduces a signed integer into `[0, p^a)`.
    #[inline]
    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.pa as i64) as u64
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.pa {
            s - self.pa
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.pa - y
        }
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.pa - x
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.pa
    }

    /// p-adic valuation of a residue, with `valuation(0) = a`.
    pub fn valuation(&self, mut x: u64) -> u32 {
        if x == 0 {
            return self.a;
        }
        let mut v = 0;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Splits a nonzero residue as `p^v * u` with `u` a unit; returns `(v, u)`.
    pub fn split_unit(&self, x: u64) -> (u32, u64) {
        debug_assert!(x != 0);
        let mut u = x;
        let mut v = 0;
        while u.is_multiple_of(self.p) {
            u /= self.p;
            v += 1;
        }
        (v, u)
    }

    /// Inverse of a unit residue.
    pub fn inverse(&self, x: u64) -> Option<u64> {
        mod_inverse(x % self.pa, self.pa)
    }

    pub fn pow_p(&self, v: u32) -> u64 {
        self.p.pow(v)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.a)
    }
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (x as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Arbitrary-precision nonnegative index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BigIndex(BigUint);

impl BigIndex {
    pub fn new(value: BigUint) -> Self {
        BigIndex(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// `base^exp` as an index.
    pub fn power(base: u64, exp: u32) -> Self {
        BigIndex(num_traits::pow(BigUint::from(base), exp as usize))
    }
}

impl From<u64> for BigIndex {
    fn from(n: u64) -> Self {
        BigIndex(BigUint::from(n))
    }
}

impl From<BigUint> for BigIndex {
    fn from(n: BigUint) -> Self {
        BigIndex(n)
    }
}

impl fmt::Display for BigIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for BigIndex {
    type Err = ArithError;

    /// Accepts plain decimal, `B^E` and `B**E`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ArithError::InvalidIndex(s.to_string());
        let decimal = |x: &str| -> Result<BigUint, ArithError> {
            let x = x.trim();
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            BigUint::parse_bytes(x.as_bytes(), 10).ok_or_else(bad)
        };
        let split = t.split_once("**").or_else(|| t.split_once('^'));
        match split {
            Some((base, exp)) => {
                let base = decimal(base)?;
                let exp = decimal(exp)?.to_usize().ok_or_else(bad)?;
                Ok(BigIndex(num_traits::pow(base, exp)))
            }
            None => Ok(BigIndex(decimal(t)?)),
        }
    }
}

/// Base-`p` digits of `n`, least significant first; empty for `n = 0`.
pub fn digits_lsb_first(n: &BigIndex, p: u64) -> Result<Vec<u64>, ArithError> {
    if p < 2 {
        return Err(ArithError::InvalidBase(p));
    }
    if n.is_zero() {
        return Ok(Vec::new());
    }
    if p <= 256 {
        return Ok(n
            .0
            .to_radix_le(p as u32)
            .into_iter()
            .map(u64::from)
            .collect());
    }
    let base = BigUint::from(p);
    let mut digits = Vec::new();
    let mut rest = n.0.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&base);
        digits.push(r.to_u64().expect("digit below base"));
        rest = q;
    }
    Ok(digits)
}

/// Combines `(residue, modulus)` pairs with pairwise coprime moduli into the
/// unique residue modulo their product.
pub fn crt_combine(pairs: &[(u64, u64)]) -> Result<(u64, u64), ArithError> {
    for (i, &(r, m)) in pairs.iter().enumerate() {
        if m == 0 {
            return Err(ArithError::ZeroModulus);
        }
        if r >= m {
            return Err(ArithError::ResidueOutOfRange { residue: r, modulus: m });
        }
        for &(_, m2) in &pairs[..i] {
            if m.gcd(&m2) != 1 {
                return Err(ArithError::NotCoprime(m2, m));
            }
        }
    }
    let mut acc_r: u64 = 0;
    let mut acc_m: u64 = 1;
    for &(r, m) in pairs {
        let next_m = acc_m.checked_mul(m).ok_or(ArithError::Overflow)?;
        // acc_r + acc_m * t ≡ r (mod m)
        let inv = mod_inverse(acc_m % m, m).expect("coprime moduli");
        let diff = (r as i128 - (acc_r % m) as i128).rem_euclid(m as i128) as u128;
        let t = diff * inv as u128 % m as u128;
        acc_r = (acc_r as u128 + acc_m as u128 * t) as u64;
        acc_m = next_m;
    }
    Ok((acc_r, acc_m))
}
