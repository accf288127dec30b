//! Automatic p-schemes: finite automata with output generated from a
//! constant-term pair by child-pair recursion.
//!
//! A state is a normalized pair `(P, Q)` standing for `A(n) = CT[P^n Q] mod p^a`.
//! For each digit `α`, `A(pn + α) = CT[(P^p)^n (P^α Q)]`; normalizing that
//! child either yields the ZERO sink or another state. Exploration is
//! breadth-first with digits ascending, and terminates because the first
//! components stabilize after `a` levels and the second components then have
//! bounded support.

use std::collections::VecDeque;
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::arith::Modulus;
use crate::ctdef::CtPair;
use crate::laurent::ModLaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("state count exceeded the cap of {cap} (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("cap must be at least 1")]
    ZeroCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scheme: {0}")]
pub struct SchemeError(pub String);

/// Transition target of an automatic scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// The absorbing sink with output 0.
    Zero,
    /// 0-based state index.
    State(usize),
}

impl Target {
    /// External encoding: 1-based state index, 0 for the sink.
    pub fn encode(self) -> usize {
        match self {
            Target::Zero => 0,
            Target::State(i) => i + 1,
        }
    }

    pub fn decode(code: usize) -> Self {
        match code {
            0 => Target::Zero,
            i => Target::State(i - 1),
        }
    }
}

/// Result of normalizing a pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Normalized {
    Zero,
    Pair(ModLaurentPoly, ModLaurentPoly),
}

/// `(P^p, P^α Q)`, encoding `A(pn + α) = CT[P'^n Q']`.
pub fn child_pair(p: &ModLaurentPoly, q: &ModLaurentPoly, alpha: u64) -> (ModLaurentPoly, ModLaurentPoly) {
    let prime = p.modulus().p();
    debug_assert!(alpha < prime);
    (p.pow(prime), &p.pow(alpha) * q)
}

/// Applies `Λ` to both components while `P` is supported on p-th powers,
/// dropping the terms of `Q` that cannot contribute to the constant term.
pub fn normalize_pair(p: ModLaurentPoly, q: ModLaurentPoly) -> Normalized {
    let (mut p, mut q) = (p, q);
    loop {
        if q.is_zero() {
            return Normalized::Zero;
        }
        if !p.is_p_power_supported() {
            return Normalized::Pair(p, q);
        }
        q = q.filter_p_divisible();
        if q.is_zero() {
            return Normalized::Zero;
        }
        // Λ fixes polynomials made of constants only.
        if p.is_constant() && q.is_constant() {
            return Normalized::Pair(p, q);
        }
        p = p.lambda_divide().expect("p-power supported");
        q = q.lambda_divide().expect("filtered");
    }
}

/// Finite automaton with output computing `a(n) mod p^a` from the base-p
/// digits of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoScheme {
    modulus: Modulus,
    transitions: Vec<Vec<Target>>,
    initial: Vec<u64>,
    defs: Option<Vec<(ModLaurentPoly, ModLaurentPoly)>>,
}

impl AutoScheme {
    /// Builds a scheme, checking dimensions, ranges and n = 0 consistency.
    pub fn new(
        modulus: Modulus,
        transitions: Vec<Vec<Target>>,
        initial: Vec<u64>,
        defs: Option<Vec<(ModLaurentPoly, ModLaurentPoly)>>,
    ) -> Result<Self, SchemeError> {
        let r = transitions.len();
        let p = modulus.p() as usize;
        if r == 0 {
            return Err(SchemeError("a scheme needs at least one state".into()));
        }
        if initial.len() != r {
            return Err(SchemeError(format!("{} initial values for {r} states", initial.len())));
        }
        if let Some(&bad) = initial.iter().find(|&&v| v >= modulus.value()) {
            return Err(SchemeError(format!("initial value {bad} out of range")));
        }
        for (i, row) in transitions.iter().enumerate() {
            if row.len() != p {
                return Err(SchemeError(format!(
                    "state {} has {} transitions, expected {p}",
                    i + 1,
                    row.len()
                )));
            }
            for t in row {
                if let Target::State(j) = t {
                    if *j >= r {
                        return Err(SchemeError(format!(
                            "state {} points to missing state {}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
            let consistent = match row[0] {
                Target::Zero => initial[i] == 0,
                Target::State(j) => initial[j] == initial[i],
            };
            if !consistent {
                return Err(SchemeError(format!(
                    "state {} violates A(0) = A(p*0 + 0)",
                    i + 1
                )));
            }
        }
        if let Some(d) = &defs {
            if d.len() != r {
                return Err(SchemeError(format!("{} definitions for {r} states", d.len())));
            }
        }
        Ok(AutoScheme { modulus, transitions, initial, defs })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// `transitions()[i][α]` is the target of state `i` on digit `α`.
    pub fn transitions(&self) -> &[Vec<Target>] {
        &self.transitions
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

    /// Transition table in the external encoding (1-based, 0 = ZERO).
    pub fn encoded_transitions(&self) -> Vec<Vec<usize>> {
        self.transitions
            .iter()
            .map(|row| row.iter().map(|t| t.encode()).collect())
            .collect()
    }
}

impl fmt::Display for AutoScheme {
    /// `[[[2, 1], [2, 0]], [1, 1]]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .encoded_transitions()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let init: Vec<String> = self.initial.iter().map(|v| v.to_string()).collect();
        write!(f, "[[{}], [{}]]", rows.join(", "), init.join(", "))
    }
}

/// Cached powers of an interned first component.
pub(crate) struct PowerTable {
    pub(crate) powers: Vec<ModLaurentPoly>,
    pub(crate) child: ModLaurentPoly,
}

/// Interns first components so children share `P^α` and `P^p`.
pub(crate) struct FirstComponents {
    ids: FxHashMap<ModLaurentPoly, usize>,
    pub(crate) polys: Vec<ModLaurentPoly>,
    tables: Vec<Option<PowerTable>>,
}

impl FirstComponents {
    pub(crate) fn new() -> Self {
        FirstComponents { ids: FxHashMap::default(), polys: Vec::new(), tables: Vec::new() }
    }

    pub(crate) fn intern(&mut self, p: ModLaurentPoly) -> usize {
        if let Some(&id) = self.ids.get(&p) {
            return id;
        }
        let id = self.polys.len();
        self.ids.insert(p.clone(), id);
        self.polys.push(p);
        self.tables.push(None);
        id
    }

    pub(crate) fn table(&mut self, id: usize) -> &PowerTable {
        if self.tables[id].is_none() {
            let p = &self.polys[id];
            let prime = p.modulus().p() as usize;
            let mut powers = Vec::with_capacity(prime);
            powers.push(ModLaurentPoly::one(p.modulus(), p.arity()));
            for k in 1..prime {
                let next = &powers[k - 1] * p;
                powers.push(next);
            }
            let child = &powers[prime - 1] * p;
            self.tables[id] = Some(PowerTable { powers, child });
        }
        self.tables[id].as_ref().unwrap()
    }

    /// Normalized child of state `(P_id, Q)` on digit `alpha`.
    pub(crate) fn child(&mut self, id: usize, q: &ModLaurentPoly, alpha: usize) -> Option<(usize, ModLaurentPoly)> {
        let table = self.table(id);
        let q_child = &table.powers[alpha] * q;
        match normalize_pair(table.child.clone(), q_child) {
            Normalized::Zero => None,
            Normalized::Pair(p, q) => Some((self.intern(p), q)),
        }
    }
}

/// Reduces and normalizes the root pair.
pub(crate) fn root_state(pair: &CtPair, modulus: Modulus) -> Normalized {
    normalize_pair(pair.p().reduce_mod(modulus), pair.q().reduce_mod(modulus))
}

/// Trivial scheme for a sequence that vanishes mod `p^a`.
pub(crate) fn zero_scheme(modulus: Modulus, arity: usize) -> AutoScheme {
    let p = modulus.p() as usize;
    AutoScheme {
        modulus,
        transitions: vec![vec![Target::Zero; p]],
        initial: vec![0],
        defs: Some(vec![(
            ModLaurentPoly::zero(modulus, arity),
            ModLaurentPoly::zero(modulus, arity),
        )]),
    }
}

/// Generates an automatic p-scheme with at most `cap` states.
pub fn generate_auto(pair: &CtPair, modulus: Modulus, cap: usize) -> Result<AutoScheme, GenerateError> {
    if cap == 0 {
        return Err(GenerateError::ZeroCap);
    }
    let p = modulus.p() as usize;
    let (root_p, root_q) = match root_state(pair, modulus) {
        Normalized::Zero => return Ok(zero_scheme(modulus, pair.arity())),
        Normalized::Pair(p, q) => (p, q),
    };
    let mut firsts = FirstComponents::new();
    let root_id = firsts.intern(root_p);
    let mut states: Vec<(usize, ModLaurentPoly)> = vec![(root_id, root_q.clone())];
    let mut index: FxHashMap<(usize, ModLaurentPoly), usize> = FxHashMap::default();
    index.insert((root_id, root_q), 0);
    let mut transitions: Vec<Vec<Target>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(p);
        for alpha in 0..p {
            let (pid, q) = states[i].clone();
            let target = match firsts.child(pid, &q, alpha) {
                None => Target::Zero,
                Some(key) => match index.get(&key) {
                    Some(&j) => Target::State(j),
                    None => {
                        let j = states.len();
                        if j + 1 > cap {
                            return Err(GenerateError::CapExceeded { cap, reached: j + 1 });
                        }
                        index.insert(key.clone(), j);
                        states.push(key);
                        queue.push_back(j);
                        Target::State(j)
                    }
                },
            };
            row.push(target);
        }
        debug_assert_eq!(transitions.len(), i);
        transitions.push(row);
    }
    let initial = states.iter().map(|(_, q)| q.constant_term()).collect();
    let defs = states
        .into_iter()
        .map(|(pid, q)| (firsts.polys[pid].clone(), q))
        .collect();
    Ok(AutoScheme::new(modulus, transitions, initial, Some(defs)).expect("generated scheme is consistent"))
}
