//! Regular operations as alphabet-preserving DFA operations.
//!
//! All multi-input operations require a common alphabet and return a DFA
//! over that alphabet. NFA-based constructions are determinized under
//! [`Limits::max_subsets`].

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::automata::{reverse_nfa, Dfa, Nfa};
use crate::error::{Error, Result};
use crate::limits::Limits;

fn common_alphabet(inputs: &[&Dfa]) -> Result<usize> {
    let first = inputs
        .first()
        .ok_or(Error::Arity { needed: 1, given: 0 })?
        .alphabet_size();
    for d in inputs {
        if d.alphabet_size() != first {
            return Err(Error::AlphabetMismatch { expected: first, found: d.alphabet_size() });
        }
    }
    Ok(first)
}

/// Reversal `L^R`.
pub fn reverse(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    reverse_nfa(d).determinize(limits.max_subsets)
}

/// Kleene star: a fresh accepting start state `s` plus restart edges
/// `f -a-> i·a` from every final state, then determinize.
pub fn star(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    let n = d.state_count();
    let k = d.alphabet_size();
    let s = n;
    let mut nfa = Nfa::new(n + 1, k);
    for q in 0..n {
        for a in 0..k {
            nfa.add_transition(q, a, d.next(q, a));
        }
    }
    for a in 0..k {
        let restart = d.next(d.initial(), a);
        nfa.add_transition(s, a, restart);
        for f in d.finals().ones() {
            nfa.add_transition(f, a, restart);
        }
    }
    nfa.set_initial(s);
    nfa.set_final(s);
    for f in d.finals().ones() {
        nfa.set_final(f);
    }
    nfa.determinize(limits.max_subsets)
}

/// An `m`-ary boolean function stored as a truth table. Entry `i` is the
/// value at the tuple whose binary expansion is `i`, first argument most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BooleanFn {
    arity: usize,
    table: Vec<bool>,
}

impl BooleanFn {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity >= usize::BITS as usize || table.len() != 1usize << arity {
            return Err(Error::InvalidConfig(format!(
                "truth table of length {} does not fit arity {arity}",
                table.len()
            )));
        }
        Ok(BooleanFn { arity, table })
    }

    /// Parses a string of `0`/`1` whose length is a power of two.
    pub fn parse(bits: &str) -> Result<Self> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidConfig(format!("bad truth table digit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if !table.len().is_power_of_two() || table.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "truth table length {} is not 2^m with m >= 1",
                table.len()
            )));
        }
        let arity = table.len().trailing_zeros() as usize;
        Self::new(arity, table)
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1usize << arity)
            .map(|i| {
                let bits: Vec<bool> = (0..arity).map(|j| (i >> (arity - 1 - j)) & 1 == 1).collect();
                f(&bits)
            })
            .collect();
        BooleanFn { arity, table }
    }

    pub fn not() -> Self {
        Self::from_fn(1, |b| !b[0])
    }

    pub fn or(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().any(|&x| x))
    }

    pub fn and(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().all(|&x| x))
    }

    pub fn xor(arity: usize) -> Self {
        Self::from_fn(arity, |b| b.iter().filter(|&&x| x).count() % 2 == 1)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.table[idx]
    }

    /// Bit `j` is set iff flipping argument `j` changes the value somewhere.
    pub fn dependence(&self) -> Vec<bool> {
        (0..self.arity)
            .map(|j| {
                let mask = 1usize << (self.arity - 1 - j);
                (0..self.table.len()).any(|i| self.table[i] != self.table[i ^ mask])
            })
            .collect()
    }

    /// `∏ n_j β_j`: the product of sizes over arguments that matter.
    pub fn bound(&self, sizes: &[usize]) -> usize {
        self.dependence()
            .iter()
            .zip(sizes)
            .map(|(&dep, &n)| if dep { n } else { 1 })
            .product()
    }
}

impl fmt::Display for BooleanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.table {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Reachable part of the direct product, finals chosen by `func`.
pub fn boolean(func: &BooleanFn, inputs: &[&Dfa], limits: &Limits) -> Result<Dfa> {
    if func.arity() != inputs.len() {
        return Err(Error::Arity { needed: func.arity(), given: inputs.len() });
    }
    let k = common_alphabet(inputs)?;
    let start: Vec<u32> = inputs.iter().map(|d| d.initial() as u32).collect();
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut tuples = vec![start.clone()];
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut head = 0;
    while head < tuples.len() {
        let cur = tuples[head].clone();
        head += 1;
        for a in 0..k {
            let next: Vec<u32> = cur
                .iter()
                .zip(inputs)
                .map(|(&q, d)| d.next(q as usize, a) as u32)
                .collect();
            let id = match index.entry(next) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    if tuples.len() >= limits.max_subsets {
                        return Err(Error::SubsetLimit { limit: limits.max_subsets });
                    }
                    let id = tuples.len() as u32;
                    tuples.push(e.key().clone());
                    e.insert(id);
                    id
                }
            };
            delta.push(id);
        }
    }
    let finals: Vec<usize> = tuples
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            let bits: Vec<bool> = t.iter().zip(inputs).map(|(&q, d)| d.is_final(q as usize)).collect();
            func.eval(&bits)
        })
        .map(|(i, _)| i)
        .collect();
    Dfa::new(tuples.len(), k, delta, 0, &finals)
}

/// `L_1 ⋯ L_m` via an ε-free chain of the input DFAs.
pub fn concat(inputs: &[&Dfa], limits: &Limits) -> Result<Dfa> {
    let k = common_alphabet(inputs)?;
    let offsets: Vec<usize> = inputs
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.state_count();
            Some(o)
        })
        .collect();
    let total: usize = inputs.iter().map(|d| d.state_count()).sum();
    let m = inputs.len();

    // entry_closure[j]: initial state of input j plus the initial states of
    // later inputs reachable through final initial states
    let mut entry_closure: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(total); m + 1];
    for j in (0..m).rev() {
        let d = inputs[j];
        let mut c = FixedBitSet::with_capacity(total);
        c.insert(offsets[j] + d.initial());
        if d.is_final(d.initial()) {
            c.union_with(&entry_closure[j + 1]);
        }
        entry_closure[j] = c;
    }
    let closure = |j: usize, q: usize| -> FixedBitSet {
        let d = inputs[j];
        let mut c = FixedBitSet::with_capacity(total);
        c.insert(offsets[j] + q);
        if d.is_final(q) {
            c.union_with(&entry_closure[j + 1]);
        }
        c
    };

    let mut nfa = Nfa::new(total, k);
    for (j, d) in inputs.iter().enumerate() {
        for q in 0..d.state_count() {
            for a in 0..k {
                nfa.add_transitions(offsets[j] + q, a, &closure(j, d.next(q, a)));
            }
        }
        if j + 1 == m {
            for f in d.finals().ones() {
                nfa.set_final(offsets[j] + f);
            }
        }
    }
    for q in entry_closure[0].ones() {
        nfa.set_initial(q);
    }
    nfa.determinize(limits.max_subsets)
}

/// `L^p`, with `L^0 = {ε}`.
pub fn power(d: &Dfa, p: usize, limits: &Limits) -> Result<Dfa> {
    match p {
        0 => alphabet_lang(&LengthSpec::exactly(0), d.alphabet_size()),
        1 => Ok(d.clone()),
        _ => {
            let copies: Vec<&Dfa> = std::iter::repeat_n(d, p).collect();
            concat(&copies, limits)
        }
    }
}

/// Cyclic shift `{uv : vu ∈ L}`.
///
/// NFA states are `(current, guess, phase)`: a run on `u` starts at the
/// guessed state and must be in a final state at the split; the run on `v`
/// then restarts at the initial state and must end at the guess.
pub fn cyclic_shift(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    let n = d.state_count();
    let k = d.alphabet_size();
    let id = |cur: usize, guess: usize, phase: usize| (phase * n + guess) * n + cur;
    let mut nfa = Nfa::new(2 * n * n, k);
    let i = d.initial();
    for guess in 0..n {
        for cur in 0..n {
            for a in 0..k {
                let next = d.next(cur, a);
                nfa.add_transition(id(cur, guess, 0), a, id(next, guess, 0));
                nfa.add_transition(id(cur, guess, 1), a, id(next, guess, 1));
                if d.is_final(next) {
                    // split right after this letter
                    nfa.add_transition(id(cur, guess, 0), a, id(i, guess, 1));
                }
            }
            if cur == guess {
                nfa.set_final(id(cur, guess, 1));
            }
        }
        nfa.set_initial(id(guess, guess, 0));
        if d.is_final(guess) {
            nfa.set_initial(id(i, guess, 1));
        }
        if guess == i {
            // v = ε: accept in phase 0 whenever the run is final
            for f in d.finals().ones() {
                nfa.set_final(id(f, guess, 0));
            }
        }
    }
    nfa.determinize(limits.max_subsets)
}

/// A trajectory language over `{0, 1}`: 0 takes a letter from the left
/// operand, 1 from the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trajectory {
    /// `(0+1)*`, ordinary shuffle.
    Shuffle,
    /// `0*1*`, concatenation.
    Concat,
    /// `1*0*`, anti-concatenation.
    AntiConcat,
    /// `0*1*0*`, insertion of the right operand into the left.
    Insertion,
    Custom(Dfa),
}

impl Trajectory {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "shuffle" => Some(Trajectory::Shuffle),
            "concat" => Some(Trajectory::Concat),
            "anticoncat" => Some(Trajectory::AntiConcat),
            "insertion" => Some(Trajectory::Insertion),
            _ => None,
        }
    }

    pub fn name(&self) -> Option<&'static str> {
        match self {
            Trajectory::Shuffle => Some("shuffle"),
            Trajectory::Concat => Some("concat"),
            Trajectory::AntiConcat => Some("anticoncat"),
            Trajectory::Insertion => Some("insertion"),
            Trajectory::Custom(_) => None,
        }
    }

    pub fn dfa(&self) -> Dfa {
        let built = match self {
            Trajectory::Shuffle => Dfa::new(1, 2, vec![0, 0], 0, &[0]),
            Trajectory::Concat => Dfa::new(3, 2, vec![0, 1, 2, 1, 2, 2], 0, &[0, 1]),
            Trajectory::AntiConcat => Dfa::new(3, 2, vec![1, 0, 1, 2, 2, 2], 0, &[0, 1]),
            Trajectory::Insertion => {
                Dfa::new(4, 2, vec![0, 1, 2, 1, 2, 3, 3, 3], 0, &[0, 1, 2])
            }
            Trajectory::Custom(d) => return d.clone(),
        };
        built.expect("preset trajectory tables are valid")
    }
}

/// Shuffle of `left` and `right` along the trajectories of `traj`, an
/// automaton over `{0, 1}`.
pub fn shuffle_traj(traj: &Dfa, left: &Dfa, right: &Dfa, limits: &Limits) -> Result<Dfa> {
    if traj.alphabet_size() != 2 {
        return Err(Error::AlphabetMismatch { expected: 2, found: traj.alphabet_size() });
    }
    let k = common_alphabet(&[left, right])?;
    let (n1, nx, n2) = (left.state_count(), traj.state_count(), right.state_count());
    let id = |q1: usize, qx: usize, q2: usize| (q1 * nx + qx) * n2 + q2;
    let mut nfa = Nfa::new(n1 * nx * n2, k);
    for q1 in 0..n1 {
        for qx in 0..nx {
            for q2 in 0..n2 {
                let from = id(q1, qx, q2);
                for a in 0..k {
                    nfa.add_transition(from, a, id(left.next(q1, a), traj.next(qx, 0), q2));
                    nfa.add_transition(from, a, id(q1, traj.next(qx, 1), right.next(q2, a)));
                }
                if left.is_final(q1) && traj.is_final(qx) && right.is_final(q2) {
                    nfa.set_final(from);
                }
            }
        }
    }
    nfa.set_initial(id(left.initial(), traj.initial(), right.initial()));
    nfa.determinize(limits.max_subsets)
}

/// For each state-pair of the synchronous product started at `(p, q)`,
/// whether it is reachable.
fn product_reach(a: &Dfa, b: &Dfa, p: usize, q: usize) -> FixedBitSet {
    let nb = b.state_count();
    let mut seen = FixedBitSet::with_capacity(a.state_count() * nb);
    let mut queue = VecDeque::new();
    seen.insert(p * nb + q);
    queue.push_back((p, q));
    while let Some((x, y)) = queue.pop_front() {
        for l in 0..a.alphabet_size() {
            let (x2, y2) = (a.next(x, l), b.next(y, l));
            if !seen.contains(x2 * nb + y2) {
                seen.insert(x2 * nb + y2);
                queue.push_back((x2, y2));
            }
        }
    }
    seen
}

/// States `p` of `a` such that some word of `L(b)` leads from `from` to `p`.
fn reached_by_language(a: &Dfa, from: usize, b: &Dfa) -> FixedBitSet {
    let nb = b.state_count();
    let reach = product_reach(a, b, from, b.initial());
    let mut out = FixedBitSet::with_capacity(a.state_count());
    for x in 0..a.state_count() {
        if b.finals().ones().any(|f| reach.contains(x * nb + f)) {
            out.insert(x);
        }
    }
    out
}

/// Left quotient `L'\L = {x : wx ∈ L for some w ∈ L'}`.
pub fn left_quotient(divisor: &Dfa, dividend: &Dfa, limits: &Limits) -> Result<Dfa> {
    let k = common_alphabet(&[divisor, dividend])?;
    let starts = reached_by_language(dividend, dividend.initial(), divisor);
    let mut nfa = Nfa::new(dividend.state_count(), k);
    for q in 0..dividend.state_count() {
        for a in 0..k {
            nfa.add_transition(q, a, dividend.next(q, a));
        }
    }
    for f in dividend.finals().ones() {
        nfa.set_final(f);
    }
    for s in starts.ones() {
        nfa.set_initial(s);
    }
    nfa.determinize(limits.max_subsets)
}

/// Deletion `L ⊖ L' = {xz : xyz ∈ L for some y ∈ L'}`.
///
/// One-jump NFA over `Q × {before, after}`; the jump `q → p` is allowed when
/// some `y ∈ L'` leads from `q` to `p`.
pub fn delete(d: &Dfa, removed: &Dfa, limits: &Limits) -> Result<Dfa> {
    let k = common_alphabet(&[d, removed])?;
    let n = d.state_count();
    let jumps: Vec<FixedBitSet> = (0..n).map(|q| reached_by_language(d, q, removed)).collect();
    let after = |q: usize| n + q;
    let mut shifted = vec![FixedBitSet::with_capacity(2 * n); n];
    for q in 0..n {
        for p in jumps[q].ones() {
            shifted[q].insert(after(p));
        }
    }
    let mut nfa = Nfa::new(2 * n, k);
    for q in 0..n {
        for a in 0..k {
            let next = d.next(q, a);
            nfa.add_transition(q, a, next);
            nfa.add_transitions(q, a, &shifted[next]);
            nfa.add_transition(after(q), a, after(next));
        }
    }
    nfa.set_initial(d.initial());
    for p in jumps[d.initial()].ones() {
        nfa.set_initial(after(p));
    }
    for f in d.finals().ones() {
        nfa.set_final(after(f));
    }
    nfa.determinize(limits.max_subsets)
}

/// `½L = {x : xy ∈ L, |x| = |y|}`.
///
/// Tracks `(q, S_t)` where `S_t` is the set of states with a length-`t`
/// path into the final states; the sequence `S_t` does not depend on the
/// input and is eventually periodic.
pub fn half(d: &Dfa, limits: &Limits) -> Result<Dfa> {
    let n = d.state_count();
    let k = d.alphabet_size();
    let mut orbit: Vec<FixedBitSet> = vec![d.finals().clone()];
    let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
    seen.insert(d.finals().clone(), 0);
    let loop_to = loop {
        let cur = orbit.last().expect("non-empty");
        let mut pre = FixedBitSet::with_capacity(n);
        for p in 0..n {
            if d.row(p).iter().any(|&x| cur.contains(x as usize)) {
                pre.insert(p);
            }
        }
        if let Some(&t) = seen.get(&pre) {
            break t;
        }
        if orbit.len() >= limits.max_subsets {
            return Err(Error::SubsetLimit { limit: limits.max_subsets });
        }
        seen.insert(pre.clone(), orbit.len());
        orbit.push(pre);
    };
    let succ_t = |t: usize| if t + 1 < orbit.len() { t + 1 } else { loop_to };

    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut states = vec![(d.initial() as u32, 0u32)];
    index.insert(states[0], 0);
    let mut delta = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (q, t) = states[head];
        head += 1;
        let t2 = succ_t(t as usize) as u32;
        for a in 0..k {
            let key = (d.next(q as usize, a) as u32, t2);
            let id = match index.entry(key) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    if states.len() >= limits.max_subsets {
                        return Err(Error::SubsetLimit { limit: limits.max_subsets });
                    }
                    let id = states.len() as u32;
                    states.push(key);
                    e.insert(id);
                    id
                }
            };
            delta.push(id);
        }
    }
    let finals: Vec<usize> = states
        .iter()
        .enumerate()
        .filter(|(_, &(q, t))| orbit[t as usize].contains(q as usize))
        .map(|(i, _)| i)
        .collect();
    Dfa::new(states.len(), k, delta, 0, &finals)
}

/// A set of word lengths: finitely many values plus an optional `≥ t` tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LengthSpec {
    pub lengths: Vec<usize>,
    pub at_least: Option<usize>,
}

impl LengthSpec {
    pub fn exactly(n: usize) -> Self {
        LengthSpec { lengths: vec![n], at_least: None }
    }

    pub fn at_least(t: usize) -> Self {
        LengthSpec { lengths: vec![], at_least: Some(t) }
    }

    pub fn all() -> Self {
        Self::at_least(0)
    }

    pub fn none() -> Self {
        LengthSpec::default()
    }

    pub fn contains(&self, len: usize) -> bool {
        self.lengths.contains(&len) || self.at_least.is_some_and(|t| len >= t)
    }
}

/// `⋃_{n ∈ S} Σ^n` over an alphabet of the given size.
pub fn alphabet_lang(spec: &LengthSpec, alphabet_size: usize) -> Result<Dfa> {
    let cap = spec
        .lengths
        .iter()
        .map(|&l| l + 1)
        .chain(spec.at_least)
        .max()
        .unwrap_or(0);
    let finals: Vec<usize> = (0..=cap).filter(|&l| spec.contains(l)).collect();
    Dfa::from_fn(cap + 1, alphabet_size, 0, &finals, |q, _| (q + 1).min(cap))
}
