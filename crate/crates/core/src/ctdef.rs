//! Sequences defined as constant terms `a(n) = CT[P^n Q]`, the builtin
//! catalog, the binomial-sum compiler and brute-force oracles.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::Modulus;
use crate::expr::{default_vars, parse_with_vars, ExprError};
use crate::laurent::{ExponentVector, IntLaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtDefError {
    #[error("unknown sequence '{0}'; valid names are: catalan, motzkin, delannoy, apery")]
    UnknownSequence(String),
    #[error("unsupported binomial sum: {0}")]
    UnsupportedSpec(String),
    #[error("malformed binomial sum spec: {0}")]
    MalformedSpec(String),
    #[error("P and Q have different arities ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

pub const CATALOG_NAMES: [&str; 4] = ["catalan", "motzkin", "delannoy", "apery"];

/// A sequence `a(n) = CT[P(x)^n Q(x)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtPair {
    p: IntLaurentPoly,
    q: IntLaurentPoly,
}

impl CtPair {
    pub fn new(p: IntLaurentPoly, q: IntLaurentPoly) -> Result<Self, CtDefError> {
        if p.arity() != q.arity() {
            return Err(CtDefError::ArityMismatch(p.arity(), q.arity()));
        }
        Ok(CtPair { p, q })
    }

    /// Parses `P` and `Q` over the given variables.
    pub fn parse(p: &str, q: &str, vars: &[String]) -> Result<Self, CtDefError> {
        Self::new(parse_with_vars(p, vars)?, parse_with_vars(q, vars)?)
    }

    pub fn p(&self) -> &IntLaurentPoly {
        &self.p
    }

    pub fn q(&self) -> &IntLaurentPoly {
        &self.q
    }

    pub fn arity(&self) -> usize {
        self.p.arity()
    }
}

/// Expression strings `(P, Q, vars)` for a catalog entry.
pub fn catalog_source(name: &str) -> Result<(&'static str, &'static str, Vec<String>), CtDefError> {
    let one = || default_vars(1);
    Ok(match name.to_ascii_lowercase().as_str() {
        "catalan" => ("1/x+2+x", "1-x", one()),
        "motzkin" => ("1/x+1+x", "1-x^2", one()),
        "delannoy" => ("1/x+3+2*x", "1", one()),
        "apery" => (
            "(1+x1)*(1+x2)*(1+x3)*(1+x2+x3+x2*x3+x1*x2*x3)/(x1*x2*x3)",
            "1",
            default_vars(3),
        ),
        _ => return Err(CtDefError::UnknownSequence(name.to_string())),
    })
}

/// Builtin sequence definitions.
pub fn catalog(name: &str) -> Result<CtPair, CtDefError> {
    let (p, q, vars) = catalog_source(name)?;
    CtPair::parse(p, q, &vars)
}

/// One binomial factor `C(a n + b k + c, d n + e k + f)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinomialFactor {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
    pub f: i64,
}

impl BinomialFactor {
    pub fn new(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        BinomialFactor { a, b, c, d, e, f }
    }
}

/// `A(n) = Σ_k C(n,k) g^k ∏_i C(a_i n + b_i k + c_i, d_i n + e_i k + f_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialSumSpec {
    pub g: i64,
    pub factors: Vec<BinomialFactor>,
}

impl BinomialSumSpec {
    pub fn new(g: i64, factors: Vec<BinomialFactor>) -> Self {
        BinomialSumSpec { g, factors }
    }

    /// `Σ C(n,k)^2 C(n+k,k)^2`.
    pub fn apery() -> Self {
        BinomialSumSpec::new(
            1,
            vec![
                BinomialFactor::new(1, 0, 0, 0, 1, 0),
                BinomialFactor::new(1, 1, 0, 0, 1, 0),
                BinomialFactor::new(1, 1, 0, 0, 1, 0),
            ],
        )
    }

    fn validate(&self) -> Result<(), CtDefError> {
        for (i, fac) in self.factors.iter().enumerate() {
            if fac.a < 0 || fac.b < 0 || fac.c < 0 {
                return Err(CtDefError::UnsupportedSpec(format!(
                    "factor {}: a, b, c must be nonnegative",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl FromStr for BinomialSumSpec {
    type Err = CtDefError;

    /// `"g; a,b,c,d,e,f; a,b,c,d,e,f; ..."`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(';');
        let g_text = parts.next().unwrap_or("").trim();
        let g = g_text
            .parse::<i64>()
            .map_err(|_| CtDefError::MalformedSpec(format!("bad weight '{g_text}'")))?;
        let mut factors = Vec::new();
        for part in parts {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let nums: Vec<i64> = part
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CtDefError::MalformedSpec(format!("bad sextuple '{part}'")))?;
            let [a, b, c, d, e, f] = nums[..] else {
                return Err(CtDefError::MalformedSpec(format!(
                    "sextuple '{part}' has {} entries",
                    nums.len()
                )));
            };
            factors.push(BinomialFactor::new(a, b, c, d, e, f));
        }
        Ok(BinomialSumSpec { g, factors })
    }
}

impl fmt::Display for BinomialSumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.g)?;
        for x in &self.factors {
            write!(f, "; {},{},{},{},{},{}", x.a, x.b, x.c, x.d, x.e, x.f)?;
        }
        Ok(())
    }
}

/// `(1 + x_i)^power / x_i^shift` in `arity` variables.
fn binomial_kernel(arity: usize, i: usize, power: i64, shift: i64) -> IntLaurentPoly {
    let one_plus = &IntLaurentPoly::one(arity) + &IntLaurentPoly::var(arity, i);
    let mut exps = vec![0; arity];
    exps[i] = -(shift as i32);
    one_plus.pow(power as u64).shift(&ExponentVector::from_slice(&exps))
}

/// Compiles a binomial sum into a constant-term pair.
pub fn bin_to_ct(spec: &BinomialSumSpec) -> Result<CtPair, CtDefError> {
    spec.validate()?;
    let m = spec.factors.len();
    if m == 0 {
        return CtPair::new(IntLaurentPoly::constant(1, 2), IntLaurentPoly::one(1));
    }
    let mut q = IntLaurentPoly::one(m);
    let mut outer = IntLaurentPoly::one(m);
    let mut inner = IntLaurentPoly::one(m);
    for (i, fac) in spec.factors.iter().enumerate() {
        q = &q * &binomial_kernel(m, i, fac.c, fac.f);
        outer = &outer * &binomial_kernel(m, i, fac.a, fac.d);
        inner = &inner * &binomial_kernel(m, i, fac.b, fac.e);
    }
    let weighted = &IntLaurentPoly::one(m) + &inner.scale(&BigInt::from(spec.g));
    CtPair::new(&outer * &weighted, q)
}

/// `C(top, bottom)` with the zero convention outside `0 <= bottom <= top`.
pub fn binomial(top: i64, bottom: i64) -> BigInt {
    if top < 0 || bottom < 0 || bottom > top {
        return BigInt::zero();
    }
    let k = bottom.min(top - bottom);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(top - j) / BigInt::from(j + 1);
    }
    acc
}

/// Exact value of the binomial sum at `n`.
pub fn binsum_direct(spec: &BinomialSumSpec, n: u64) -> BigInt {
    let n = n as i64;
    let g = BigInt::from(spec.g);
    let mut total = BigInt::zero();
    let mut gk = BigInt::one();
    for k in 0..=n {
        let mut term = binomial(n, k) * &gk;
        for fac in &spec.factors {
            if term.is_zero() {
                break;
            }
            term *= binomial(fac.a * n + fac.b * k + fac.c, fac.d * n + fac.e * k + fac.f);
        }
        total += term;
        gk *= &g;
    }
    total
}

/// Constant term of `P^n Q` over the integers.
pub fn ct_exact(pair: &CtPair, n: u64) -> BigInt {
    let pn = pair.p.pow(n);
    pair.q
        .terms()
        .iter()
        .map(|(e, c)| c * pn.coeff(&e.neg()))
        .sum()
}

/// Constant term of `P^n Q`, optionally reduced into `[0, m)`.
pub fn ct_direct(pair: &CtPair, n: u64, m: Option<u64>) -> BigInt {
    let v = ct_exact(pair, n);
    match m {
        Some(m) => {
            let m = BigInt::from(m);
            ((v % &m) + &m) % &m
        }
        None => v,
    }
}

/// `CT[P^n Q] mod p^a` for `n = 0..count`, expanding powers of `P`
/// incrementally with all arithmetic modulo `p^a`.
///
/// Terms of `P^k` whose exponents can no longer be cancelled by
/// `P^j Q` for any remaining `j` are dropped, which keeps multivariate
/// prefixes affordable.
pub fn ct_prefix(pair: &CtPair, count: usize, modulus: Modulus) -> Vec<u64> {
    let p = pair.p.reduce_mod(modulus);
    let q = pair.q.reduce_mod(modulus);
    let arity = pair.arity();
    let mut out = Vec::with_capacity(count);
    let (Some((p_lo, p_hi)), Some((q_lo, q_hi))) = (p.bounds(), q.bounds()) else {
        // P = 0 gives CT[Q] at n = 0 and zero afterwards; Q = 0 gives zeros.
        for n in 0..count {
            out.push(if n == 0 { q.constant_term() } else { 0 });
        }
        return out;
    };
    let mut power = crate::laurent::ModLaurentPoly::one(modulus, arity);
    for k in 0..count {
        out.push(
            q.terms()
                .iter()
                .fold(0, |acc, (e, c)| modulus.add(acc, modulus.mul(*c, power.coeff(&e.neg())))),
        );
        if k + 1 == count {
            break;
        }
        power = &power * &p;
        let left = (count - 2 - k) as i64;
        // Exponents reachable by P^j Q for 0 <= j <= left.
        let reach: Vec<(i64, i64)> = (0..arity)
            .map(|i| {
                let lo = q_lo[i] as i64 + (p_lo[i] as i64 * left).min(0);
                let hi = q_hi[i] as i64 + (p_hi[i] as i64 * left).max(0);
                (lo, hi)
            })
            .collect();
        let kept: Vec<_> = power
            .terms()
            .iter()
            .filter(|(e, _)| {
                e.as_slice()
                    .iter()
                    .zip(&reach)
                    .all(|(&x, &(lo, hi))| (-(x as i64)) >= lo && (-(x as i64)) <= hi)
            })
            .cloned()
            .collect();
        if kept.len() != power.term_count() {
            power = crate::laurent::ModLaurentPoly::from_terms(modulus, arity, kept);
        }
    }
    out
}

/// Small exact values for quick checks.
pub fn ct_values(pair: &CtPair, count: u64) -> Vec<i64> {
    (0..count)
        .map(|n| ct_exact(pair, n).to_i64().expect("value fits in i64"))
        .collect()
}
