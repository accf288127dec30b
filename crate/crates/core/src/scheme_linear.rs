//! Linear p-schemes: per-digit matrices over `Z/p^aZ`.
//!
//! Generation follows the same breadth-first exploration as the automatic
//! schemes, but a normalized child whose second component is a
//! `Z/p^aZ`-combination of earlier second components with the same first
//! component contributes a matrix row instead of a new state.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::arith::Modulus;
use crate::ctdef::CtPair;
use crate::laurent::ModLaurentPoly;
use crate::scheme_auto::{root_state, FirstComponents, GenerateError, Normalized, SchemeError};
use crate::span::SpanBasis;

/// Which earlier states a child may be expressed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpanPolicy {
    /// States already expanded, including the one being expanded.
    #[default]
    Expanded,
    /// Every state created so far.
    Created,
}

/// `A_i(pn + α) = Σ_j C^(α)_{i,j} A_j(n)` with initial values `A_i(0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    modulus: Modulus,
    /// `matrices[α][i][j]`
    matrices: Vec<Vec<Vec<u64>>>,
    initial: Vec<u64>,
    defs: Option<Vec<(ModLaurentPoly, ModLaurentPoly)>>,
}

impl LinearScheme {
    /// Builds a scheme, checking dimensions, ranges and `initial = C^(0) initial`.
    pub fn new(
        modulus: Modulus,
        matrices: Vec<Vec<Vec<u64>>>,
        initial: Vec<u64>,
        defs: Option<Vec<(ModLaurentPoly, ModLaurentPoly)>>,
    ) -> Result<Self, SchemeError> {
        let r = initial.len();
        let p = modulus.p() as usize;
        let pa = modulus.value();
        if r == 0 {
            return Err(SchemeError("a scheme needs at least one state".into()));
        }
        if matrices.len() != p {
            return Err(SchemeError(format!("{} matrices, expected {p}", matrices.len())));
        }
        for (alpha, mat) in matrices.iter().enumerate() {
            if mat.len() != r || mat.iter().any(|row| row.len() != r) {
                return Err(SchemeError(format!("matrix {alpha} is not {r}x{r}")));
            }
            if mat.iter().flatten().any(|&c| c >= pa) {
                return Err(SchemeError(format!("matrix {alpha} has an entry out of range")));
            }
        }
        if initial.iter().any(|&v| v >= pa) {
            return Err(SchemeError("initial value out of range".into()));
        }
        if let Some(d) = &defs {
            if d.len() != r {
                return Err(SchemeError(format!("{} definitions for {r} states", d.len())));
            }
        }
        let scheme = LinearScheme { modulus, matrices, initial, defs };
        if scheme.apply(0, &scheme.initial) != scheme.initial {
            return Err(SchemeError("initial values are not fixed by the digit-0 matrix".into()));
        }
        Ok(scheme)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn state_count(&self) -> usize {
        self.initial.len()
    }

    pub fn matrices(&self) -> &[Vec<Vec<u64>>] {
        &self.matrices
    }

    pub fn matrix(&self, alpha: usize) -> &[Vec<u64>] {
        &self.matrices[alpha]
    }

    pub fn initial(&self) -> &[u64] {
        &self.initial
    }

    pub fn defs(&self) -> Option<&[(ModLaurentPoly, ModLaurentPoly)]> {
        self.defs.as_deref()
    }

    pub fn without_defs(mut self) -> Self {
        self.defs = None;
        self
    }

    /// `C^(alpha) · v`.
    pub fn apply(&self, alpha: usize, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        self.matrices[alpha]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(&c, _)| c != 0)
                    .fold(0, |acc, (&c, &x)| m.add(acc, m.mul(c, x)))
            })
            .collect()
    }

    /// Row `i` of `C^(alpha)` rendered as `2*A[3]+A[5]`, `0` when empty.
    pub fn row_expression(&self, alpha: usize, i: usize) -> String {
        let terms: Vec<String> = self.matrices[alpha][i]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| {
                if c == 1 {
                    format!("A[{}]", j + 1)
                } else {
                    format!("{c}*A[{}]", j + 1)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Generates a linear p-scheme with at most `cap` states.
pub fn generate_linear(pair: &CtPair, modulus: Modulus, cap: usize) -> Result<LinearScheme, GenerateError> {
    generate_linear_with(pair, modulus, cap, SpanPolicy::default())
}

/// [`generate_linear`] with an explicit choice of which states may appear in
/// a linear relation.
pub fn generate_linear_with(
    pair: &CtPair,
    modulus: Modulus,
    cap: usize,
    policy: SpanPolicy,
) -> Result<LinearScheme, GenerateError> {
    if cap == 0 {
        return Err(GenerateError::ZeroCap);
    }
    let p = modulus.p() as usize;
    let (root_p, root_q) = match root_state(pair, modulus) {
        Normalized::Zero => {
            let zero = vec![vec![vec![0u64]]; p];
            let arity = pair.arity();
            let defs = vec![(ModLaurentPoly::zero(modulus, arity), ModLaurentPoly::zero(modulus, arity))];
            return Ok(LinearScheme::new(modulus, zero, vec![0], Some(defs)).expect("trivial scheme"));
        }
        Normalized::Pair(p, q) => (p, q),
    };

    struct Group {
        span: SpanBasis,
        members: Vec<usize>,
    }

    let mut firsts = FirstComponents::new();
    let root_id = firsts.intern(root_p);
    let mut states: Vec<(usize, ModLaurentPoly)> = vec![(root_id, root_q.clone())];
    let mut index: FxHashMap<(usize, ModLaurentPoly), usize> = FxHashMap::default();
    index.insert((root_id, root_q), 0);
    let mut groups: FxHashMap<usize, Group> = FxHashMap::default();
    let join = |groups: &mut FxHashMap<usize, Group>, pid: usize, q: &ModLaurentPoly, state: usize| {
        let g = groups
            .entry(pid)
            .or_insert_with(|| Group { span: SpanBasis::new(modulus), members: Vec::new() });
        g.span.push(q);
        g.members.push(state);
    };
    if policy == SpanPolicy::Created {
        let (pid, q) = states[0].clone();
        join(&mut groups, pid, &q, 0);
    }
    // rows[i][α] is a sparse row (state, coefficient).
    let mut rows: Vec<Vec<Vec<(usize, u64)>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if policy == SpanPolicy::Expanded {
            let (pid, q) = states[i].clone();
            join(&mut groups, pid, &q, i);
        }
        let mut state_rows = Vec::with_capacity(p);
        for alpha in 0..p {
            let (pid, q) = states[i].clone();
            let row = match firsts.child(pid, &q, alpha) {
                None => Vec::new(),
                Some(key) => {
                    if let Some(&j) = index.get(&key) {
                        vec![(j, 1)]
                    } else if let Some(combo) = groups.get(&key.0).and_then(|g| {
                        g.span.solve(&key.1).map(|c| {
                            g.members
                                .iter()
                                .zip(c)
                                .filter(|(_, c)| *c != 0)
                                .map(|(&s, c)| (s, c))
                                .collect::<Vec<_>>()
                        })
                    }) {
                        combo
                    } else {
                        let j = states.len();
                        if j + 1 > cap {
                            return Err(GenerateError::CapExceeded { cap, reached: j + 1 });
                        }
                        index.insert(key.clone(), j);
                        if policy == SpanPolicy::Created {
                            join(&mut groups, key.0, &key.1, j);
                        }
                        states.push(key);
                        queue.push_back(j);
                        vec![(j, 1)]
                    }
                }
            };
            state_rows.push(row);
        }
        rows.push(state_rows);
    }

    let r = states.len();
    let mut matrices = vec![vec![vec![0u64; r]; r]; p];
    for (i, state_rows) in rows.iter().enumerate() {
        for (alpha, row) in state_rows.iter().enumerate() {
            for &(j, c) in row {
                matrices[alpha][i][j] = c;
            }
        }
    }
    let initial = states.iter().map(|(_, q)| q.constant_term()).collect();
    let defs = states
        .into_iter()
        .map(|(pid, q)| (firsts.polys[pid].clone(), q))
        .collect();
    Ok(LinearScheme::new(modulus, matrices, initial, Some(defs)).expect("generated scheme is consistent"))
}
