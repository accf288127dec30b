//! Submodule membership over `Z/p^aZ`.
//!
//! [`SpanBasis`] keeps its generators in Howell-style echelon form: at most
//! one row per pivot column, every pivot normalized to a power `p^v`, and for
//! every row the annihilated multiple `p^(a-v) * row` lies in the span of the
//! rows with later pivots. Under that invariant greedy reduction decides
//! membership exactly, despite the zero divisors of the ring.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::arith::Modulus;
use crate::laurent::{ExponentVector, ModLaurentPoly};

#[derive(Debug, Clone)]
struct EchelonRow {
    /// Entries over the column index; missing trailing entries are zero.
    entries: Vec<u64>,
    /// Expression of this row in terms of the generators.
    combo: Vec<u64>,
    /// Pivot value is `p^valuation`.
    valuation: u32,
}

/// Incrementally maintained generating set of a submodule of `(Z/p^aZ)^n`,
/// with coordinates indexed by monomials.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    modulus: Modulus,
    columns: FxHashMap<ExponentVector, usize>,
    generators: usize,
    rows: BTreeMap<usize, EchelonRow>,
}

fn axpy(m: Modulus, dst: &mut Vec<u64>, q: u64, src: &[u64], subtract: bool) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            let t = m.mul(q, s);
            *d = if subtract { m.sub(*d, t) } else { m.add(*d, t) };
        }
    }
}

fn scaled(m: Modulus, v: &[u64], k: u64) -> Vec<u64> {
    v.iter().map(|&x| m.mul(x, k)).collect()
}

impl SpanBasis {
    pub fn new(modulus: Modulus) -> Self {
        SpanBasis {
            modulus,
            columns: FxHashMap::default(),
            generators: 0,
            rows: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators == 0
    }

    /// Coordinates of `q` over the current columns; `None` if `q` uses a
    /// monomial no generator has touched.
    fn coordinates(&self, q: &ModLaurentPoly) -> Option<Vec<u64>> {
        let mut v = vec![0u64; self.columns.len()];
        for (e, c) in q.terms() {
            v[*self.columns.get(e)?] = *c;
        }
        Some(v)
    }

    fn coordinates_extending(&mut self, q: &ModLaurentPoly) -> Vec<u64> {
        for (e, _) in q.terms() {
            let next = self.columns.len();
            self.columns.entry(e.clone()).or_insert(next);
        }
        self.coordinates(q).expect("columns registered")
    }

    /// Reduces `v` by the echelon rows, accumulating the generator
    /// combination into `combo`. Returns the first column that could not be
    /// cleared, or `None` when `v` reduced to zero.
    fn reduce(&self, v: &mut Vec<u64>, combo: &mut Vec<u64>, subtract: bool) -> Option<usize> {
        let m = self.modulus;
        let mut j = 0;
        while j < v.len() {
            let x = v[j];
            j += 1;
            if x == 0 {
                continue;
            }
            let col = j - 1;
            let Some(row) = self.rows.get(&col) else {
                return Some(col);
            };
            let (w, u) = m.split_unit(x);
            if w < row.valuation {
                return Some(col);
            }
            let q = m.mul(m.pow_p(w - row.valuation), u);
            axpy(m, v, q, &row.entries, true);
            axpy(m, combo, q, &row.combo, subtract);
            debug_assert_eq!(v[col], 0);
        }
        None
    }

    /// Coefficients `c` with `Σ c_k g_k = q` over the generators, or `None`
    /// if `q` is not in their span.
    pub fn solve(&self, q: &ModLaurentPoly) -> Option<Vec<u64>> {
        let mut v = self.coordinates(q)?;
        let mut combo = vec![0u64; self.generators];
        if self.reduce(&mut v, &mut combo, false).is_some() {
            return None;
        }
        combo.resize(self.generators, 0);
        Some(combo)
    }

    /// Appends `q` as a new generator; returns its generator index.
    pub fn push(&mut self, q: &ModLaurentPoly) -> usize {
        let index = self.generators;
        self.generators += 1;
        let v = self.coordinates_extending(q);
        let mut combo = vec![0u64; self.generators];
        combo[index] = 1;
        self.insert(v, combo);
        index
    }

    fn insert(&mut self, v: Vec<u64>, combo: Vec<u64>) {
        let m = self.modulus;
        let a = m.a();
        let mut pending = vec![(v, combo)];
        while let Some((mut v, mut combo)) = pending.pop() {
            // `combo` tracks v as a combination of generators: v = Σ combo_k g_k.
            let Some(j) = self.reduce(&mut v, &mut combo, true) else {
                continue;
            };
            let (w, u) = m.split_unit(v[j]);
            let inv = m.inverse(u).expect("unit");
            let v = scaled(m, &v, inv);
            let combo = scaled(m, &combo, inv);
            let killer = m.pow_p(a - w);
            if w > 0 {
                let ann = scaled(m, &v, killer);
                if ann.iter().any(|&x| x != 0) {
                    pending.push((ann, scaled(m, &combo, killer)));
                }
            }
            let row = EchelonRow { entries: v, combo, valuation: w };
            if let Some(old) = self.rows.insert(j, row) {
                debug_assert!(old.valuation > w);
                let new = &self.rows[&j];
                let k = m.pow_p(old.valuation - w);
                let mut rest = old.entries;
                let mut rest_combo = old.combo;
                axpy(m, &mut rest, k, &new.entries, true);
                axpy(m, &mut rest_combo, k, &new.combo, true);
                pending.push((rest, rest_combo));
            }
        }
    }
}

/// Expresses `target` as a combination of `basis` over `Z/p^aZ`.
pub fn span_solve(basis: &[ModLaurentPoly], target: &ModLaurentPoly) -> Option<Vec<u64>> {
    let modulus = target.modulus();
    let mut span = SpanBasis::new(modulus);
    for b in basis {
        span.push(b);
    }
    span.solve(target)
}
