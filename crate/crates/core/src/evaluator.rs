//! Digit-driven evaluation of schemes, CRT composition, and fast evaluation
//! of C-finite sequences.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::arith::{crt_combine, digits_lsb_first, ArithError, BigIndex};
use crate::scheme_auto::{AutoScheme, Target};
use crate::scheme_file::Scheme;
use crate::scheme_linear::LinearScheme;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no schemes given")]
    NoSchemes,
    #[error("scheme moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("target modulus {m} does not divide the product {product} of the scheme moduli")]
    NotDivisor { m: u64, product: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("invalid recurrence: {0}")]
    InvalidRecurrence(String),
    #[error("index {n} precedes the first initial value at {offset}")]
    IndexBeforeStart { n: BigIndex, offset: u64 },
    #[error(transparent)]
    Arith(ArithError),
}

impl From<ArithError> for EvalError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::NotCoprime(a, b) => EvalError::NotCoprime(a, b),
            other => EvalError::Arith(other),
        }
    }
}

fn digits(n: &BigIndex, p: u64) -> Vec<u64> {
    digits_lsb_first(n, p).expect("scheme prime is at least 2")
}

fn walk_auto(scheme: &AutoScheme, digits: impl Iterator<Item = u64>) -> u64 {
    let transitions = scheme.transitions();
    let mut state = 0;
    for d in digits {
        match transitions[state][d as usize] {
            Target::Zero => return 0,
            Target::State(j) => state = j,
        }
    }
    scheme.initial()[state]
}

/// `a(n) mod p^a`, consuming the base-p digits of `n` least significant first.
pub fn eval_auto(scheme: &AutoScheme, n: &BigIndex) -> u64 {
    walk_auto(scheme, digits(n, scheme.modulus().p()).into_iter())
}

/// `a(0), …, a(count-1)` by a digit walk per index.
pub fn seq_auto(scheme: &AutoScheme, count: usize) -> Vec<u64> {
    let p = scheme.modulus().p();
    (0..count as u64)
        .map(|n| {
            let mut rest = n;
            walk_auto(
                scheme,
                std::iter::from_fn(move || {
                    (rest > 0).then(|| {
                        let d = rest % p;
                        rest /= p;
                        d
                    })
                }),
            )
        })
        .collect()
}

/// `a(n) mod p^a` as the first entry of `C^(d_0) ⋯ C^(d_{k-1}) · initial`.
pub fn eval_linear(scheme: &LinearScheme, n: &BigIndex) -> u64 {
    let ds = digits(n, scheme.modulus().p());
    let mut v = scheme.initial().to_vec();
    for &d in ds.iter().rev() {
        v = scheme.apply(d as usize, &v);
    }
    v[0]
}

fn first_entry(scheme: &LinearScheme, alpha: usize, v: &[u64]) -> u64 {
    let m = scheme.modulus();
    scheme.matrix(alpha)[0]
        .iter()
        .zip(v)
        .filter(|(&c, _)| c != 0)
        .fold(0, |acc, (&c, &x)| m.add(acc, m.mul(c, x)))
}

/// `a(0), …, a(count-1)`, memoizing the state vectors `A(n)` for `n < count/p`.
pub fn seq_linear(scheme: &LinearScheme, count: usize) -> Vec<u64> {
    let p = scheme.modulus().p() as usize;
    let stored = count.div_ceil(p).max(1);
    let mut vectors: Vec<Vec<u64>> = Vec::with_capacity(stored);
    vectors.push(scheme.initial().to_vec());
    for n in 1..stored {
        let v = scheme.apply(n % p, &vectors[n / p]);
        vectors.push(v);
    }
    (0..count).map(|n| first_entry(scheme, n % p, &vectors[n / p])).collect()
}

/// Evaluates each prime-power scheme at `n` and recombines modulo `m`.
pub fn eval_crt(schemes: &[Scheme], m: u64, n: &BigIndex) -> Result<u64, EvalError> {
    if schemes.is_empty() {
        return Err(EvalError::NoSchemes);
    }
    if m == 0 {
        return Err(EvalError::ZeroModulus);
    }
    let residues: Vec<(u64, u64)> = schemes.iter().map(|s| (s.eval(n), s.modulus().value())).collect();
    let (x, product) = crt_combine(&residues)?;
    if product % m != 0 {
        return Err(EvalError::NotDivisor { m, product });
    }
    Ok(x % m)
}

/// `x_n = c_1 x_{n-1} + … + c_d x_{n-d}` with `x_offset, …, x_{offset+d-1}` given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFiniteSpec {
    coeffs: Vec<i64>,
    initial: Vec<i64>,
    offset: u64,
}

impl CFiniteSpec {
    pub fn new(coeffs: Vec<i64>, initial: Vec<i64>) -> Result<Self, EvalError> {
        Self::with_offset(coeffs, initial, 0)
    }

    pub fn with_offset(coeffs: Vec<i64>, initial: Vec<i64>, offset: u64) -> Result<Self, EvalError> {
        if coeffs.is_empty() {
            return Err(EvalError::InvalidRecurrence("order must be at least 1".into()));
        }
        if coeffs.len() != initial.len() {
            return Err(EvalError::InvalidRecurrence(format!(
                "{} coefficients but {} initial values",
                coeffs.len(),
                initial.len()
            )));
        }
        Ok(CFiniteSpec { coeffs, initial, offset })
    }

    /// `F_1 = F_2 = 1`.
    pub fn fibonacci() -> Self {
        CFiniteSpec { coeffs: vec![1, 1], initial: vec![1, 1], offset: 1 }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[i64] {
        &self.initial
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }
}

type Matrix = Vec<Vec<u64>>;

fn mat_mul(a: &Matrix, b: &Matrix, m: u64) -> Matrix {
    let d = a.len();
    let mut out = vec![vec![0u64; d]; d];
    for i in 0..d {
        for k in 0..d {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] = ((out[i][j] as u128 + x as u128 * b[k][j] as u128) % m as u128) as u64;
            }
        }
    }
    out
}

fn reduce_signed(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// `x_n mod m` by binary powering of the companion matrix.
pub fn cfinite_eval(spec: &CFiniteSpec, m: u64, n: &BigIndex) -> Result<u64, EvalError> {
    if m == 0 {
        return Err(EvalError::ZeroModulus);
    }
    let offset = BigUint::from(spec.offset);
    if n.value() < &offset {
        return Err(EvalError::IndexBeforeStart { n: n.clone(), offset: spec.offset });
    }
    let steps = n.value() - offset;
    let d = spec.order();
    // Row i of the state vector holds x_{k+i}; the companion matrix shifts k by one.
    let mut step: Matrix = vec![vec![0u64; d]; d];
    for i in 0..d - 1 {
        step[i][i + 1] = 1 % m;
    }
    for (j, &c) in spec.coeffs.iter().enumerate() {
        step[d - 1][d - 1 - j] = reduce_signed(c, m);
    }
    let mut power: Matrix = (0..d).map(|i| (0..d).map(|j| u64::from(i == j) % m).collect()).collect();
    for bit in (0..steps.bits()).rev() {
        power = mat_mul(&power, &power, m);
        if steps.bit(bit) {
            power = mat_mul(&power, &step, m);
        }
    }
    let x: Vec<u64> = spec.initial.iter().map(|&v| reduce_signed(v, m)).collect();
    Ok(power[0]
        .iter()
        .zip(&x)
        .fold(0u128, |acc, (&c, &v)| (acc + c as u128 * v as u128) % m as u128) as u64)
}

/// `F_n mod m` through `F_2k = F_k (F_{k-1} + F_{k+1})` and
/// `F_{2k+1} = F_k^2 + F_{k+1}^2`, memoizing every index visited.
pub fn fib_doubling(n: &BigIndex, m: u64) -> Result<u64, EvalError> {
    if m == 0 {
        return Err(EvalError::ZeroModulus);
    }
    let mut memo: FxHashMap<BigUint, u64> = FxHashMap::default();
    Ok(fib_memo(n.value(), m, &mut memo))
}

fn fib_memo(n: &BigUint, m: u64, memo: &mut FxHashMap<BigUint, u64>) -> u64 {
    if let Some(small) = n.to_u64().filter(|&k| k <= 2) {
        return u64::from(small > 0) % m;
    }
    if let Some(&v) = memo.get(n) {
        return v;
    }
    let (k, odd) = n.div_rem(&BigUint::from(2u32));
    let mm = m as u128;
    let fk = fib_memo(&k, m, memo) as u128;
    let fk1 = fib_memo(&(&k + 1u32), m, memo) as u128;
    let value = if odd.is_zero() {
        let fkm1 = fib_memo(&(&k - BigUint::one()), m, memo) as u128;
        fk * ((fkm1 + fk1) % mm) % mm
    } else {
        (fk * fk + fk1 * fk1) % mm
    } as u64;
    memo.insert(n.clone(), value);
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Modulus;
    use crate::ctdef::{catalog, ct_prefix};
    use crate::scheme_auto::generate_auto;
    use crate::scheme_linear::generate_linear;
    use proptest::prelude::*;

    fn md(p: u64, a: u32) -> Modulus {
        Modulus::new(p, a).unwrap()
    }

    fn big(n: u64) -> BigIndex {
        BigIndex::from(n)
    }

    #[test]
    fn catalan_parity_examples() {
        let s = generate_auto(&catalog("catalan").unwrap(), md(2, 1), 10).unwrap();
        assert_eq!(eval_auto(&s, &big(30)), 0);
        for k in 0..=16 {
            assert_eq!(eval_auto(&s, &big((1 << k) - 1)), 1);
        }
        assert_eq!(seq_auto(&s, 8), vec![1, 1, 0, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn motzkin_sequences() {
        let pair = catalog("motzkin").unwrap();
        let auto = generate_auto(&pair, md(2, 1), 30).unwrap();
        assert_eq!(seq_auto(&auto, 6), vec![1, 1, 0, 0, 1, 1]);
        let lin4 = generate_linear(&pair, md(2, 2), 30).unwrap();
        let auto4 = generate_auto(&pair, md(2, 2), 100).unwrap();
        let expected = ct_prefix(&pair, 41, md(2, 2));
        for n in 0..=40u64 {
            assert_eq!(eval_linear(&lin4, &big(n)), expected[n as usize]);
        }
        assert_eq!(seq_linear(&lin4, 8), seq_auto(&auto4, 8));
    }

    #[test]
    fn seq_matches_eval() {
        for (name, m) in [("delannoy", md(3, 2)), ("motzkin", md(5, 1)), ("catalan", md(2, 3))] {
            let pair = catalog(name).unwrap();
            let auto = generate_auto(&pair, m, 10_000).unwrap();
            let lin = generate_linear(&pair, m, 10_000).unwrap();
            let sa = seq_auto(&auto, 200);
            let sl = seq_linear(&lin, 200);
            assert_eq!(sa, sl);
            assert_eq!(sa, ct_prefix(&pair, 200, m));
            for n in 0..200u64 {
                assert_eq!(eval_auto(&auto, &big(n)), sa[n as usize]);
                assert_eq!(eval_linear(&lin, &big(n)), sl[n as usize]);
            }
        }
    }

    #[test]
    fn short_sequences() {
        let pair = crate::ctdef::CtPair::new(
            crate::laurent::IntLaurentPoly::one(1),
            crate::laurent::IntLaurentPoly::one(1),
        )
        .unwrap();
        let auto = generate_auto(&pair, md(2, 1), 1).unwrap();
        assert_eq!(seq_auto(&auto, 5), vec![1; 5]);
        let lin = generate_linear(&pair, md(3, 1), 1).unwrap();
        assert_eq!(seq_linear(&lin, 3), vec![1; 3]);
        assert_eq!(seq_linear(&lin, 1), vec![1]);
        assert_eq!(eval_linear(&lin, &big(0)), 1);
    }

    #[test]
    fn crt_composition() {
        let pair = catalog("motzkin").unwrap();
        let s8 = Scheme::Linear(generate_linear(&pair, md(2, 3), 10_000).unwrap());
        let s9 = Scheme::Auto(generate_auto(&pair, md(3, 2), 10_000).unwrap());
        let both = [s8.clone(), s9.clone()];
        let m72 = ct_prefix(&pair, 60, md(2, 3))
            .into_iter()
            .zip(ct_prefix(&pair, 60, md(3, 2)))
            .map(|(r8, r9)| crate::arith::crt_combine(&[(r8, 8), (r9, 9)]).unwrap().0);
        for (n, v) in (0..60u64).zip(m72) {
            assert_eq!(eval_crt(&both, 72, &big(n)).unwrap(), v);
            assert_eq!(eval_crt(&both, 12, &big(n)).unwrap(), v % 12);
            assert_eq!(eval_crt(std::slice::from_ref(&s8), 8, &big(n)).unwrap(), s8.eval(&big(n)));
        }
        assert!(matches!(eval_crt(&both, 5, &big(3)), Err(EvalError::NotDivisor { m: 5, product: 72 })));
        assert!(matches!(eval_crt(&[s8.clone(), s8], 8, &big(3)), Err(EvalError::NotCoprime(8, 8))));
        assert_eq!(eval_crt(&[], 8, &big(3)), Err(EvalError::NoSchemes));
    }

    #[test]
    fn fibonacci_values() {
        let googol = BigIndex::power(10, 100);
        let fib = CFiniteSpec::fibonacci();
        assert_eq!(cfinite_eval(&fib, 1000, &googol).unwrap(), 875);
        assert_eq!(fib_doubling(&googol, 1000).unwrap(), 875);
        assert_eq!(cfinite_eval(&fib, 1000, &big(10)).unwrap(), 55);
        assert_eq!(fib_doubling(&big(1), 1000).unwrap(), 1);
        assert_eq!(fib_doubling(&big(100), 1000).unwrap(), 75);
        assert_eq!(cfinite_eval(&fib, 1000, &big(1)).unwrap(), 1);
        assert!(cfinite_eval(&fib, 1000, &big(0)).is_err());
    }

    #[test]
    fn cfinite_general() {
        // x_n = 2 x_{n-1} - x_{n-2} + 3 x_{n-3} with x_0..x_2 = 1, -2, 5.
        let spec = CFiniteSpec::new(vec![2, -1, 3], vec![1, -2, 5]).unwrap();
        let mut xs: Vec<i128> = vec![1, -2, 5];
        for n in 3..60 {
            xs.push(2 * xs[n - 1] - xs[n - 2] + 3 * xs[n - 3]);
        }
        for (n, &x) in xs.iter().enumerate() {
            assert_eq!(cfinite_eval(&spec, 997, &big(n as u64)).unwrap(), x.rem_euclid(997) as u64);
        }
        assert_eq!(cfinite_eval(&spec, 1, &big(40)).unwrap(), 0);
        assert!(CFiniteSpec::new(vec![], vec![]).is_err());
        assert!(CFiniteSpec::new(vec![1], vec![1, 2]).is_err());
    }

    proptest! {
        #[test]
        fn doubling_agrees_with_companion(n in 1u64..1_000_000_000, m in prop::sample::select(vec![2u64, 997, 1000])) {
            let fib = CFiniteSpec::fibonacci();
            prop_assert_eq!(fib_doubling(&big(n), m).unwrap(), cfinite_eval(&fib, m, &big(n)).unwrap());
        }
    }
}
