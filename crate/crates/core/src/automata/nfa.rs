use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use super::Dfa;
use crate::error::{Error, Result};

/// A nondeterministic automaton with a set of initial states and no
/// ε-transitions. An empty initial set is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    state_count: usize,
    alphabet_size: usize,
    delta: Vec<FixedBitSet>,
    initials: FixedBitSet,
    finals: FixedBitSet,
}

impl Nfa {
    /// An NFA with no transitions, initials or finals.
    pub fn new(state_count: usize, alphabet_size: usize) -> Self {
        Nfa {
            state_count,
            alphabet_size,
            delta: vec![FixedBitSet::with_capacity(state_count); state_count * alphabet_size],
            initials: FixedBitSet::with_capacity(state_count),
            finals: FixedBitSet::with_capacity(state_count),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initials(&self) -> &FixedBitSet {
        &self.initials
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn successors(&self, q: usize, a: usize) -> &FixedBitSet {
        &self.delta[q * self.alphabet_size + a]
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, to: usize) {
        self.delta[from * self.alphabet_size + letter].insert(to);
    }

    /// Adds every state of `to` as a successor of `(from, letter)`.
    pub fn add_transitions(&mut self, from: usize, letter: usize, to: &FixedBitSet) {
        self.delta[from * self.alphabet_size + letter].union_with(to);
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initials.insert(q);
    }

    pub fn set_final(&mut self, q: usize) {
        self.finals.insert(q);
    }

    /// Image of a state set under one letter.
    pub fn step(&self, from: &FixedBitSet, a: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.state_count);
        for q in from.ones() {
            out.union_with(self.successors(q, a));
        }
        out
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let end = word.iter().fold(self.initials.clone(), |s, &a| self.step(&s, a));
        !end.is_disjoint(&self.finals)
    }

    /// Subset construction over the subsets reachable from the initial set.
    ///
    /// Subset states are numbered in BFS order with letters visited by index;
    /// the empty set appears as an ordinary (sink) state when reachable.
    pub fn determinize(&self, max_states: usize) -> Result<Dfa> {
        if self.alphabet_size == 0 {
            return Err(Error::InvalidAutomaton("alphabet must be non-empty".into()));
        }
        let mut index: HashMap<FixedBitSet, u32> = HashMap::new();
        let mut subsets: Vec<FixedBitSet> = Vec::new();
        let mut queue = VecDeque::new();
        let mut delta: Vec<u32> = Vec::new();

        index.insert(self.initials.clone(), 0);
        subsets.push(self.initials.clone());
        queue.push_back(0usize);

        while let Some(s) = queue.pop_front() {
            let current = subsets[s].clone();
            for a in 0..self.alphabet_size {
                let image = self.step(&current, a);
                let next = match index.entry(image) {
                    Entry::Occupied(e) => *e.get(),
                    Entry::Vacant(e) => {
                        if subsets.len() >= max_states {
                            return Err(Error::SubsetLimit { limit: max_states });
                        }
                        let id = subsets.len() as u32;
                        subsets.push(e.key().clone());
                        e.insert(id);
                        queue.push_back(id as usize);
                        id
                    }
                };
                delta.push(next);
            }
        }

        let finals: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_disjoint(&self.finals))
            .map(|(i, _)| i)
            .collect();
        Dfa::new(subsets.len(), self.alphabet_size, delta, 0, &finals)
    }
}

impl From<&Dfa> for Nfa {
    fn from(d: &Dfa) -> Self {
        let mut nfa = Nfa::new(d.state_count(), d.alphabet_size());
        for q in 0..d.state_count() {
            for a in 0..d.alphabet_size() {
                nfa.add_transition(q, a, d.next(q, a));
            }
        }
        nfa.set_initial(d.initial());
        for f in d.finals().ones() {
            nfa.set_final(f);
        }
        nfa
    }
}

/// NFA for the reversal of `L(dfa)`: edges flipped, initial and final swapped.
pub fn reverse_nfa(dfa: &Dfa) -> Nfa {
    let mut nfa = Nfa::new(dfa.state_count(), dfa.alphabet_size());
    for p in 0..dfa.state_count() {
        for a in 0..dfa.alphabet_size() {
            nfa.add_transition(dfa.next(p, a), a, p);
        }
    }
    for f in dfa.finals().ones() {
        nfa.set_initial(f);
    }
    nfa.set_final(dfa.initial());
    nfa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_initials_give_reject_dfa() {
        let nfa = Nfa::new(3, 2);
        let d = nfa.determinize(16).unwrap();
        assert_eq!(d.state_count(), 1);
        assert!(d.final_states().is_empty());
    }

    #[test]
    fn deterministic_nfa_is_isomorphic() {
        // 3 states, state 2 unreachable
        let d = Dfa::from_fn(3, 2, 0, &[1], |q, a| match (q, a) {
            (0, 0) | (1, 1) => 1,
            (2, _) => 2,
            _ => 0,
        })
        .unwrap();
        let back = Nfa::from(&d).determinize(16).unwrap();
        assert_eq!(back.state_count(), 2);
        assert_eq!(back.delta(), &[1, 0, 0, 1]);
        assert_eq!(back.final_states(), vec![1]);
    }

    #[test]
    fn subset_cap_is_enforced() {
        let d = Dfa::from_fn(4, 2, 0, &[3], |q, a| if a == 0 { (q + 1) % 4 } else { 0 }).unwrap();
        let rev = reverse_nfa(&d);
        assert!(matches!(rev.determinize(2), Err(Error::SubsetLimit { limit: 2 })));
    }

    #[test]
    fn reverse_of_empty_language() {
        let d = Dfa::trivial(2, false).unwrap();
        let r = reverse_nfa(&d);
        assert_eq!(r.initials().count_ones(..), 0);
        assert!(!r.accepts(&[]));
        assert!(!r.accepts(&[0, 1]));
    }

    #[test]
    fn nfa_simulation() {
        // (a|b)*a
        let mut n = Nfa::new(2, 2);
        n.add_transition(0, 0, 0);
        n.add_transition(0, 1, 0);
        n.add_transition(0, 0, 1);
        n.set_initial(0);
        n.set_final(1);
        assert!(n.accepts(&[1, 0]));
        assert!(!n.accepts(&[0, 1]));
        let d = n.determinize(8).unwrap();
        assert_eq!(d.state_count(), 2);
        assert!(d.accepts(&[1, 1, 0]));
    }
}
