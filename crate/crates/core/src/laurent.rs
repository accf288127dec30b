//! Sparse multivariate Laurent polynomials over `Z` and over `Z/p^aZ`.
//!
//! Both polynomial types store their terms as a vector sorted by exponent
//! vector (lexicographic order) with no zero coefficients, so derived
//! equality and hashing are canonical.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::arith::Modulus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("polynomial is not supported on p-th powers (p = {0})")]
    NotPSupported(u64),
}

/// Multi-exponent of a monomial `x_1^e_1 ... x_m^e_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(SmallVec<[i32; 4]>);

impl ExponentVector {
    pub fn zeros(arity: usize) -> Self {
        ExponentVector(SmallVec::from_elem(0, arity))
    }

    pub fn from_slice(exps: &[i32]) -> Self {
        ExponentVector(SmallVec::from_slice(exps))
    }

    /// The unit vector `x_i`.
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut e = Self::zeros(arity);
        e.0[i] = 1;
        e
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        ExponentVector(self.0.iter().map(|e| -e).collect())
    }

    pub fn scale(&self, k: i32) -> Self {
        ExponentVector(self.0.iter().map(|e| e * k).collect())
    }

    pub fn divisible_by(&self, p: i32) -> bool {
        self.0.iter().all(|e| e % p == 0)
    }

    fn div_exact(&self, p: i32) -> Self {
        ExponentVector(self.0.iter().map(|e| e / p).collect())
    }
}

/// Componentwise exponent bounds `(min, max)` over a set of terms.
fn exponent_bounds<'a, C: 'a>(
    arity: usize,
    terms: impl IntoIterator<Item = &'a (ExponentVector, C)>,
) -> Option<(Vec<i32>, Vec<i32>)> {
    let mut it = terms.into_iter();
    let (first, _) = it.next()?;
    let mut lo = first.as_slice().to_vec();
    let mut hi = lo.clone();
    for (e, _) in it {
        for i in 0..arity {
            lo[i] = lo[i].min(e.0[i]);
            hi[i] = hi[i].max(e.0[i]);
        }
    }
    Some((lo, hi))
}

// ---------------------------------------------------------------------------
// Integer coefficients

/// Laurent polynomial with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLaurentPoly {
    arity: usize,
    terms: Vec<(ExponentVector, BigInt)>,
}

impl IntLaurentPoly {
    pub fn zero(arity: usize) -> Self {
        IntLaurentPoly { arity, terms: Vec::new() }
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(ExponentVector::zeros(arity), c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, 1)
    }

    pub fn monomial(exps: ExponentVector, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let arity = exps.arity();
        let terms = if c.is_zero() { Vec::new() } else { vec![(exps, c)] };
        IntLaurentPoly { arity, terms }
    }

    /// The variable `x_i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(arity, i), 1)
    }

    /// Builds a canonical polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, BigInt)>,
    {
        let mut terms: Vec<_> = terms.into_iter().collect();
        assert!(
            terms.iter().all(|(e, _)| e.arity() == arity),
            "exponent arity mismatch"
        );
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ExponentVector, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        IntLaurentPoly { arity, terms: merged }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(ExponentVector, BigInt)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &ExponentVector) -> BigInt {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exps))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&ExponentVector::zeros(self.arity))
    }

    /// `Some((exps, ±1))` when the polynomial is a single monomial with a
    /// unit coefficient, i.e. an invertible element of the Laurent ring.
    pub fn as_unit_monomial(&self) -> Option<(&ExponentVector, i32)> {
        match self.terms.as_slice() {
            [(e, c)] if c.abs().is_one() => Some((e, if c.is_positive() { 1 } else { -1 })),
            _ => None,
        }
    }

    /// Componentwise `(min, max)` exponents; `None` for the zero polynomial.
    pub fn bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        exponent_bounds(self.arity, &self.terms)
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if self.arity != other.arity {
            return Err(LaurentError::Incompatible(format!(
                "arity {} vs {}",
                self.arity, other.arity
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        Ok(Self::from_terms(
            self.arity,
            self.terms.iter().chain(&other.terms).cloned(),
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut acc: FxHashMap<ExponentVector, BigInt> = FxHashMap::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                *acc.entry(ea.add(eb)).or_default() += ca * cb;
            }
        }
        Ok(Self::from_terms(self.arity, acc))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.arity, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        IntLaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(shift), c.clone()))
                .collect(),
        }
    }

    /// Reduces coefficients into `[0, p^a)`, dropping vanishing terms.
    pub fn reduce_mod(&self, modulus: Modulus) -> ModLaurentPoly {
        let m = BigInt::from(modulus.value());
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = ((c % &m) + &m) % &m;
                let r = r.to_u64().expect("residue fits in u64");
                (r != 0).then(|| (e.clone(), r))
            })
            .collect();
        ModLaurentPoly { modulus, arity: self.arity, terms }
    }
}

impl Add for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn add(self, rhs: Self) -> IntLaurentPoly {
        self.try_add(rhs).expect("arity mismatch in addition")
    }
}

impl Sub for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn sub(self, rhs: Self) -> IntLaurentPoly {
        self.try_add(&-rhs).expect("arity mismatch in subtraction")
    }
}

impl Mul for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn mul(self, rhs: Self) -> IntLaurentPoly {
        self.try_mul(rhs).expect("arity mismatch in multiplication")
    }
}

impl Neg for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(self) -> IntLaurentPoly {
        IntLaurentPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Residue coefficients

/// Laurent polynomial with coefficients in `Z/p^aZ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModLaurentPoly {
    modulus: Modulus,
    arity: usize,
    terms: Vec<(ExponentVector, u64)>,
}

impl ModLaurentPoly {
    pub fn zero(modulus: Modulus, arity: usize) -> Self {
        ModLaurentPoly { modulus, arity, terms: Vec::new() }
    }

    pub fn constant(modulus: Modulus, arity: usize, c: u64) -> Self {
        Self::monomial(modulus, ExponentVector::zeros(arity), c)
    }

    pub fn one(modulus: Modulus, arity: usize) -> Self {
        Self::constant(modulus, arity, 1)
    }

    pub fn monomial(modulus: Modulus, exps: ExponentVector, c: u64) -> Self {
        let c = modulus.reduce(c);
        let arity = exps.arity();
        let terms = if c == 0 { Vec::new() } else { vec![(exps, c)] };
        ModLaurentPoly { modulus, arity, terms }
    }

    /// Builds a canonical polynomial from arbitrary terms, merging duplicates
    /// and reducing coefficients.
    pub fn from_terms<I>(modulus: Modulus, arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, u64)>,
    {
        let mut terms: Vec<_> = terms.into_iter().collect();
        assert!(
            terms.iter().all(|(e, _)| e.arity() == arity),
            "exponent arity mismatch"
        );
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ExponentVector, u64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            let c = modulus.reduce(c);
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = modulus.add(*lc, c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        ModLaurentPoly { modulus, arity, terms: merged }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(ExponentVector, u64)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &ExponentVector) -> u64 {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exps))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// Coefficient of `x_1^0 ... x_m^0`.
    pub fn constant_term(&self) -> u64 {
        self.coeff(&ExponentVector::zeros(self.arity))
    }

    /// True when only the zero exponent vector occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        exponent_bounds(self.arity, &self.terms)
    }

    /// Lifts the residues back to an integer polynomial with coefficients in
    /// `[0, p^a)`.
    pub fn to_int(&self) -> IntLaurentPoly {
        IntLaurentPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), BigInt::from(*c)))
                .collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if self.modulus != other.modulus {
            return Err(LaurentError::Incompatible(format!(
                "modulus {} vs {}",
                self.modulus, other.modulus
            )));
        }
        if self.arity != other.arity {
            return Err(LaurentError::Incompatible(format!(
                "arity {} vs {}",
                self.arity, other.arity
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let m = self.modulus;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = m.add(a[i].1, b[j].1);
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(ModLaurentPoly { modulus: m, arity: self.arity, terms: out })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.modulus, self.arity));
        }
        let (lo_a, hi_a) = self.bounds().unwrap();
        let (lo_b, hi_b) = other.bounds().unwrap();
        let work = self.terms.len() as u128 * other.terms.len() as u128;
        // Mixed-radix layout with the first coordinate most significant, so a
        // linear scan of the accumulator visits exponents in canonical order.
        let mut strides = vec![0u128; self.arity];
        let mut volume: u128 = 1;
        for i in (0..self.arity).rev() {
            strides[i] = volume;
            volume *= (hi_a[i] + hi_b[i] - lo_a[i] - lo_b[i] + 1) as u128;
        }
        if volume <= 8 * work + 4096 && volume <= (1 << 26) {
            Ok(self.mul_dense(other, &lo_a, &lo_b, &strides, volume as usize))
        } else {
            Ok(self.mul_sparse(other))
        }
    }

    fn mul_dense(
        &self,
        other: &Self,
        lo_a: &[i32],
        lo_b: &[i32],
        strides: &[u128],
        volume: usize,
    ) -> Self {
        let m = self.modulus;
        let offset = |e: &ExponentVector, lo: &[i32]| -> usize {
            e.0.iter()
                .zip(lo)
                .zip(strides)
                .map(|((&x, &l), &s)| (x - l) as usize * s as usize)
                .sum()
        };
        let off_b: Vec<(usize, u64)> =
            other.terms.iter().map(|(e, c)| (offset(e, lo_b), *c)).collect();
        let mut acc = vec![0u64; volume];
        for (ea, ca) in &self.terms {
            let ia = offset(ea, lo_a);
            for &(ib, cb) in &off_b {
                let slot = &mut acc[ia + ib];
                *slot = (*slot + ca * cb) % m.value();
            }
        }
        let lo: Vec<i32> = lo_a.iter().zip(lo_b).map(|(a, b)| a + b).collect();
        let terms = acc
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| {
                let mut rest = idx;
                let e: SmallVec<[i32; 4]> = strides
                    .iter()
                    .zip(&lo)
                    .map(|(&s, &l)| {
                        let s = s as usize;
                        let d = rest / s;
                        rest %= s;
                        d as i32 + l
                    })
                    .collect();
                (ExponentVector(e), c)
            })
            .collect();
        ModLaurentPoly { modulus: m, arity: self.arity, terms }
    }

    fn mul_sparse(&self, other: &Self) -> Self {
        let m = self.modulus;
        let mut acc: FxHashMap<ExponentVector, u64> = FxHashMap::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(ea.add(eb)).or_insert(0);
                *slot = (*slot + ca * cb) % m.value();
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        ModLaurentPoly { modulus: m, arity: self.arity, terms }
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = m.reduce(c);
        ModLaurentPoly {
            modulus: m,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter_map(|(e, x)| {
                    let y = m.mul(*x, c);
                    (y != 0).then(|| (e.clone(), y))
                })
                .collect(),
        }
    }

    /// `self^e` by binary exponentiation, reducing after every product.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.modulus, self.arity);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// True iff every exponent of every term is divisible by `p`.
    pub fn is_p_power_supported(&self) -> bool {
        let p = self.modulus.p() as i32;
        self.terms.iter().all(|(e, _)| e.divisible_by(p))
    }

    /// Substitutes `x_j^p -> x_j`; requires p-th-power support.
    pub fn lambda_divide(&self) -> Result<Self, LaurentError> {
        if !self.is_p_power_supported() {
            return Err(LaurentError::NotPSupported(self.modulus.p()));
        }
        let p = self.modulus.p() as i32;
        // Exact division by p preserves the lexicographic order.
        Ok(ModLaurentPoly {
            modulus: self.modulus,
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.div_exact(p), *c)).collect(),
        })
    }

    /// Keeps only the terms whose exponents are all divisible by `p`.
    pub fn filter_p_divisible(&self) -> Self {
        let p = self.modulus.p() as i32;
        ModLaurentPoly {
            modulus: self.modulus,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.divisible_by(p))
                .cloned()
                .collect(),
        }
    }
}

impl Add for &ModLaurentPoly {
    type Output = ModLaurentPoly;
    fn add(self, rhs: Self) -> ModLaurentPoly {
        self.try_add(rhs).expect("incompatible operands in addition")
    }
}

impl Sub for &ModLaurentPoly {
    type Output = ModLaurentPoly;
    fn sub(self, rhs: Self) -> ModLaurentPoly {
        self.try_add(&-rhs).expect("incompatible operands in subtraction")
    }
}

impl Mul for &ModLaurentPoly {
    type Output = ModLaurentPoly;
    fn mul(self, rhs: Self) -> ModLaurentPoly {
        self.try_mul(rhs).expect("incompatible operands in multiplication")
    }
}

impl Neg for &ModLaurentPoly {
    type Output = ModLaurentPoly;
    fn neg(self) -> ModLaurentPoly {
        let m = self.modulus;
        ModLaurentPoly {
            modulus: m,
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), m.neg(*c))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64, a: u32) -> Modulus {
        Modulus::new(p, a).unwrap()
    }

    /// Univariate integer polynomial from `(exponent, coefficient)` pairs.
    fn int1(terms: &[(i32, i64)]) -> IntLaurentPoly {
        IntLaurentPoly::from_terms(
            1,
            terms
                .iter()
                .map(|&(e, c)| (ExponentVector::from_slice(&[e]), BigInt::from(c))),
        )
    }

    fn mod1(modulus: Modulus, terms: &[(i32, u64)]) -> ModLaurentPoly {
        ModLaurentPoly::from_terms(
            modulus,
            1,
            terms.iter().map(|&(e, c)| (ExponentVector::from_slice(&[e]), c)),
        )
    }

    #[test]
    fn reduce_mod_examples() {
        let m2 = m(2, 1);
        assert_eq!(int1(&[(0, 1), (1, -1)]).reduce_mod(m2), mod1(m2, &[(0, 1), (1, 1)]));
        assert!(int1(&[(0, 4), (1, 4)]).reduce_mod(m(2, 2)).is_zero());
        let sq = int1(&[(-2, 1), (-1, 4), (0, 6), (1, 4), (2, 1)]);
        assert_eq!(
            sq.reduce_mod(m(2, 2)),
            mod1(m(2, 2), &[(-2, 1), (0, 2), (2, 1)])
        );
    }

    #[test]
    fn arithmetic_examples() {
        let m2 = m(2, 1);
        let a = mod1(m2, &[(-1, 1), (1, 1)]);
        assert_eq!(&a * &a, mod1(m2, &[(-2, 1), (2, 1)]));
        assert_eq!(&a + &ModLaurentPoly::zero(m2, 1), a);
        let b = mod1(m2, &[(0, 1), (1, 1)]);
        assert_eq!(&b * &b, mod1(m2, &[(0, 1), (2, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(a.scale(3), a);
        assert!(a.scale(2).is_zero());
    }

    #[test]
    fn incompatible_operands() {
        let a = ModLaurentPoly::one(m(2, 1), 1);
        let b = ModLaurentPoly::one(m(3, 1), 1);
        let c = ModLaurentPoly::one(m(2, 1), 2);
        assert!(matches!(a.try_add(&b), Err(LaurentError::Incompatible(_))));
        assert!(matches!(a.try_mul(&c), Err(LaurentError::Incompatible(_))));
        let d = IntLaurentPoly::one(1);
        assert!(d.try_mul(&IntLaurentPoly::one(3)).is_err());
    }

    #[test]
    fn pow_examples() {
        let m4 = m(2, 2);
        let any = mod1(m4, &[(-3, 2), (5, 1)]);
        assert_eq!(any.pow(0), ModLaurentPoly::one(m4, 1));
        let a = mod1(m(2, 1), &[(-1, 1), (1, 1)]);
        assert_eq!(a.pow(2), mod1(m(2, 1), &[(-2, 1), (2, 1)]));
        let b = mod1(m4, &[(-1, 1), (0, 2), (1, 1)]);
        assert_eq!(b.pow(4), mod1(m4, &[(-4, 1), (0, 2), (4, 1)]));
    }

    #[test]
    fn constant_term_examples() {
        let m8 = m(2, 3);
        // (1/x + 2 + x)(1 - x) = 1/x + 1 - x - x^2
        let p = int1(&[(-1, 1), (0, 2), (1, 1)]);
        let q = int1(&[(0, 1), (1, -1)]);
        let prod = (&p * &q).reduce_mod(m8);
        assert_eq!(prod, mod1(m8, &[(-1, 1), (0, 1), (1, 7), (2, 7)]));
        assert_eq!(prod.constant_term(), 1);
        assert_eq!(mod1(m(2, 1), &[(1, 1)]).constant_term(), 0);
        assert_eq!(ModLaurentPoly::zero(m8, 1).constant_term(), 0);
    }

    #[test]
    fn p_power_support_and_lambda() {
        let m2 = m(2, 1);
        let even = mod1(m2, &[(-2, 1), (2, 1)]);
        let odd = mod1(m2, &[(-1, 1), (1, 1)]);
        assert!(even.is_p_power_supported());
        assert!(!odd.is_p_power_supported());
        assert!(ModLaurentPoly::zero(m2, 1).is_p_power_supported());
        assert_eq!(even.lambda_divide().unwrap(), odd);
        assert_eq!(odd.lambda_divide(), Err(LaurentError::NotPSupported(2)));
        let c = ModLaurentPoly::constant(m(2, 2), 1, 3);
        assert_eq!(c.lambda_divide().unwrap(), c);
        let m4 = m(2, 2);
        assert_eq!(
            mod1(m4, &[(-4, 1), (0, 2), (4, 1)]).lambda_divide().unwrap(),
            mod1(m4, &[(-2, 1), (0, 2), (2, 1)])
        );
    }

    #[test]
    fn filter_examples() {
        let m2 = m(2, 1);
        assert_eq!(
            mod1(m2, &[(-1, 1), (1, 1), (0, 1), (2, 1)]).filter_p_divisible(),
            mod1(m2, &[(0, 1), (2, 1)])
        );
        assert!(mod1(m2, &[(-1, 1), (1, 1)]).filter_p_divisible().is_zero());
        let c = ModLaurentPoly::constant(m2, 1, 1);
        assert_eq!(c.filter_p_divisible(), c);
    }

    #[test]
    fn dense_and_sparse_products_agree() {
        let md = m(3, 2);
        let spread = ModLaurentPoly::from_terms(
            md,
            2,
            [
                (ExponentVector::from_slice(&[0, 0]), 1),
                (ExponentVector::from_slice(&[-4000, 3000]), 5),
                (ExponentVector::from_slice(&[4000, -3000]), 7),
            ],
        );
        let other = ModLaurentPoly::from_terms(
            md,
            2,
            [
                (ExponentVector::from_slice(&[1, 0]), 2),
                (ExponentVector::from_slice(&[0, 1]), 4),
            ],
        );
        assert_eq!(spread.mul_sparse(&other), {
            let (la, ha) = spread.bounds().unwrap();
            let (lb, hb) = other.bounds().unwrap();
            let mut strides = vec![0u128; 2];
            let mut vol = 1u128;
            for i in (0..2).rev() {
                strides[i] = vol;
                vol *= (ha[i] + hb[i] - la[i] - lb[i] + 1) as u128;
            }
            spread.mul_dense(&other, &la, &lb, &strides, vol as usize)
        });
    }

    fn arb_poly(modulus: Modulus, arity: usize) -> impl Strategy<Value = ModLaurentPoly> {
        prop::collection::vec(
            (prop::collection::vec(-2i32..=2, arity), 0..modulus.value()),
            0..5,
        )
        .prop_map(move |terms| {
            ModLaurentPoly::from_terms(
                modulus,
                arity,
                terms.into_iter().map(|(e, c)| (ExponentVector::from_slice(&e), c)),
            )
        })
    }

    fn arb_case() -> impl Strategy<Value = (ModLaurentPoly, ModLaurentPoly, ModLaurentPoly)> {
        (prop::sample::select(vec![(2u64, 1u32), (2, 3), (3, 2), (5, 1)]), 1usize..=2)
            .prop_flat_map(|((p, a), arity)| {
                let md = Modulus::new(p, a).unwrap();
                (arb_poly(md, arity), arb_poly(md, arity), arb_poly(md, arity))
            })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in arb_case()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn filter_and_lambda_keep_constant_term((a, _, _) in arb_case()) {
            let f = a.filter_p_divisible();
            prop_assert_eq!(f.constant_term(), a.constant_term());
            let l = f.lambda_divide().unwrap();
            prop_assert_eq!(l.constant_term(), a.constant_term());
        }

        #[test]
        fn int_and_mod_products_agree((a, b, _) in arb_case()) {
            let md = a.modulus();
            prop_assert_eq!((&a.to_int() * &b.to_int()).reduce_mod(md), &a * &b);
        }
    }
}
