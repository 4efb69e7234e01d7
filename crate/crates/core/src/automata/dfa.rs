use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// The `(state count, initial, finals)` part of an automaton, without transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateConfiguration {
    pub state_count: usize,
    pub initial: usize,
    pub finals: FixedBitSet,
}

impl StateConfiguration {
    pub fn new(state_count: usize, initial: usize, finals: &[usize]) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::InvalidAutomaton("a DFA needs at least one state".into()));
        }
        if initial >= state_count {
            return Err(Error::StateOutOfRange { state: initial, states: state_count });
        }
        let mut set = FixedBitSet::with_capacity(state_count);
        for &f in finals {
            if f >= state_count {
                return Err(Error::StateOutOfRange { state: f, states: state_count });
            }
            set.insert(f);
        }
        Ok(StateConfiguration { state_count, initial, finals: set })
    }

    pub fn final_count(&self) -> usize {
        self.finals.count_ones(..)
    }

    pub fn initial_is_final(&self) -> bool {
        self.finals.contains(self.initial)
    }
}

/// A complete deterministic finite automaton with a dense transition table.
///
/// States and letters are `0..state_count` and `0..alphabet_size`. The entry
/// for `(q, a)` lives at `delta[q * alphabet_size + a]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Dfa {
    state_count: usize,
    alphabet_size: usize,
    delta: Vec<u32>,
    initial: usize,
    finals: FixedBitSet,
    letter_names: Option<Arc<[String]>>,
}

impl Dfa {
    pub fn new(
        state_count: usize,
        alphabet_size: usize,
        delta: Vec<u32>,
        initial: usize,
        finals: &[usize],
    ) -> Result<Self> {
        let config = StateConfiguration::new(state_count, initial, finals)?;
        Self::from_parts(config, alphabet_size, delta)
    }

    pub fn from_parts(
        config: StateConfiguration,
        alphabet_size: usize,
        delta: Vec<u32>,
    ) -> Result<Self> {
        let n = config.state_count;
        if alphabet_size == 0 {
            return Err(Error::InvalidAutomaton("alphabet must be non-empty".into()));
        }
        if delta.len() != n * alphabet_size {
            return Err(Error::InvalidAutomaton(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                n * alphabet_size
            )));
        }
        if let Some(&bad) = delta.iter().find(|&&t| t as usize >= n) {
            return Err(Error::StateOutOfRange { state: bad as usize, states: n });
        }
        Ok(Dfa {
            state_count: n,
            alphabet_size,
            delta,
            initial: config.initial,
            finals: config.finals,
            letter_names: None,
        })
    }

    /// Builds a DFA from a transition function.
    pub fn from_fn(
        state_count: usize,
        alphabet_size: usize,
        initial: usize,
        finals: &[usize],
        mut next: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let mut delta = Vec::with_capacity(state_count * alphabet_size);
        for q in 0..state_count {
            for a in 0..alphabet_size {
                delta.push(next(q, a) as u32);
            }
        }
        Self::new(state_count, alphabet_size, delta, initial, finals)
    }

    /// One-state DFA accepting everything (`accept = true`) or nothing.
    pub fn trivial(alphabet_size: usize, accept: bool) -> Result<Self> {
        let finals: &[usize] = if accept { &[0] } else { &[] };
        Self::new(1, alphabet_size, vec![0; alphabet_size], 0, finals)
    }

    /// Attaches display names for letters.
    pub fn with_letter_names(mut self, names: Arc<[String]>) -> Result<Self> {
        if names.len() != self.alphabet_size {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet_size,
                found: names.len(),
            });
        }
        self.letter_names = Some(names);
        Ok(self)
    }

    pub fn without_letter_names(mut self) -> Self {
        self.letter_names = None;
        self
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn delta(&self) -> &[u32] {
        &self.delta
    }

    pub fn finals(&self) -> &FixedBitSet {
        &self.finals
    }

    pub fn final_states(&self) -> Vec<usize> {
        self.finals.ones().collect()
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(q)
    }

    pub fn letter_names(&self) -> Option<&Arc<[String]>> {
        self.letter_names.as_ref()
    }

    /// Display name of a letter; falls back to the index.
    pub fn letter_name(&self, a: usize) -> String {
        match &self.letter_names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn config(&self) -> StateConfiguration {
        StateConfiguration {
            state_count: self.state_count,
            initial: self.initial,
            finals: self.finals.clone(),
        }
    }

    #[inline]
    pub fn next(&self, q: usize, a: usize) -> usize {
        self.delta[q * self.alphabet_size + a] as usize
    }

    /// Row of successors of `q`, indexed by letter.
    #[inline]
    pub fn row(&self, q: usize) -> &[u32] {
        &self.delta[q * self.alphabet_size..(q + 1) * self.alphabet_size]
    }

    pub fn run_from(&self, q: usize, word: &[usize]) -> usize {
        word.iter().fold(q, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.is_final(self.run_from(self.initial, word))
    }

    /// Transformation induced by letter `a`, as an image vector.
    pub fn action(&self, a: usize) -> Vec<usize> {
        (0..self.state_count).map(|q| self.next(q, a)).collect()
    }

    /// States reachable from the initial state, in BFS order (letters by index).
    pub fn reachable_order(&self) -> Vec<usize> {
        let mut seen = FixedBitSet::with_capacity(self.state_count);
        let mut order = Vec::with_capacity(self.state_count);
        let mut queue = VecDeque::new();
        seen.insert(self.initial);
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &p in self.row(q) {
                let p = p as usize;
                if !seen.contains(p) {
                    seen.insert(p);
                    queue.push_back(p);
                }
            }
        }
        order
    }

    /// Language complement, same transition table.
    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        out.finals.toggle_range(..);
        out
    }

    /// Copy with a replaced final-state set.
    pub fn with_finals(&self, finals: &[usize]) -> Result<Dfa> {
        let config = StateConfiguration::new(self.state_count, self.initial, finals)?;
        let mut out = self.clone();
        out.finals = config.finals;
        Ok(out)
    }

    /// DFA for `L(self) φ⁻¹` where `φ` maps new letter `a` to `letter_map[a]`.
    ///
    /// The result keeps the state configuration of `self`.
    pub fn inverse_morphism(&self, letter_map: &[usize], new_alphabet_size: usize) -> Result<Dfa> {
        if letter_map.len() != new_alphabet_size {
            return Err(Error::AlphabetMismatch {
                expected: new_alphabet_size,
                found: letter_map.len(),
            });
        }
        if let Some(&bad) = letter_map.iter().find(|&&b| b >= self.alphabet_size) {
            return Err(Error::LetterOutOfRange { letter: bad, alphabet: self.alphabet_size });
        }
        let mut delta = Vec::with_capacity(self.state_count * new_alphabet_size);
        for q in 0..self.state_count {
            let row = self.row(q);
            delta.extend(letter_map.iter().map(|&b| row[b]));
        }
        Ok(Dfa {
            state_count: self.state_count,
            alphabet_size: new_alphabet_size,
            delta,
            initial: self.initial,
            finals: self.finals.clone(),
            letter_names: None,
        })
    }

    /// Renumbers states by a permutation: state `q` becomes `perm[q]`.
    pub fn permute_states(&self, perm: &[usize]) -> Result<Dfa> {
        if perm.len() != self.state_count {
            return Err(Error::SizeMismatch { left: perm.len(), right: self.state_count });
        }
        let mut inverse = vec![usize::MAX; self.state_count];
        for (q, &p) in perm.iter().enumerate() {
            if p >= self.state_count || inverse[p] != usize::MAX {
                return Err(Error::InvalidAutomaton("not a permutation".into()));
            }
            inverse[p] = q;
        }
        let finals: Vec<usize> = self.finals.ones().map(|q| perm[q]).collect();
        let mut out = Dfa::from_fn(
            self.state_count,
            self.alphabet_size,
            perm[self.initial],
            &finals,
            |p, a| perm[self.next(inverse[p], a)],
        )?;
        out.letter_names = self.letter_names.clone();
        Ok(out)
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("states", &self.state_count)
            .field("alphabet", &self.alphabet_size)
            .field("initial", &self.initial)
            .field("finals", &self.final_states())
            .field("delta", &self.delta)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity() -> Dfa {
        Dfa::from_fn(2, 1, 0, &[0], |q, _| 1 - q).unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Dfa::new(0, 1, vec![], 0, &[]).is_err());
        assert!(Dfa::new(2, 1, vec![0, 2], 0, &[]).is_err());
        assert!(Dfa::new(2, 1, vec![0], 0, &[]).is_err());
        assert!(Dfa::new(2, 1, vec![0, 1], 2, &[]).is_err());
        assert!(Dfa::new(2, 1, vec![0, 1], 0, &[5]).is_err());
        assert!(Dfa::new(1, 0, vec![], 0, &[]).is_err());
    }

    #[test]
    fn runs_words() {
        let d = parity();
        assert!(d.accepts(&[]));
        assert!(!d.accepts(&[0]));
        assert!(d.accepts(&[0, 0]));
        assert_eq!(d.action(0), vec![1, 0]);
    }

    #[test]
    fn identity_morphism_keeps_structure() {
        let d = Dfa::from_fn(3, 2, 1, &[0, 2], |q, a| (q + a + 1) % 3).unwrap();
        let same = d.inverse_morphism(&[0, 1], 2).unwrap();
        assert_eq!(same, d);
    }

    #[test]
    fn inverse_morphism_errors() {
        let d = parity();
        assert_eq!(
            d.inverse_morphism(&[1], 1),
            Err(Error::LetterOutOfRange { letter: 1, alphabet: 1 })
        );
        assert!(d.inverse_morphism(&[0, 0], 3).is_err());
    }

    #[test]
    fn collapsing_morphism_empties_ab() {
        // {ab} over {a, b}: 0 -a-> 1 -b-> 2 (final), 3 sink.
        let ab = Dfa::from_fn(4, 2, 0, &[2], |q, a| match (q, a) {
            (0, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        })
        .unwrap();
        let collapsed = ab.inverse_morphism(&[1, 1], 2).unwrap();
        assert_eq!(collapsed.config(), ab.config());
        for w in [vec![], vec![0], vec![0, 1], vec![1, 1], vec![0, 0]] {
            assert!(!collapsed.accepts(&w));
        }
    }

    #[test]
    fn complement_flips() {
        let d = parity();
        let c = d.complement();
        assert!(!c.accepts(&[]));
        assert!(c.accepts(&[0]));
    }

    #[test]
    fn permutation_preserves_language() {
        let d = Dfa::from_fn(3, 2, 0, &[2], |q, a| (q * 2 + a) % 3).unwrap();
        let p = d.permute_states(&[2, 0, 1]).unwrap();
        assert_eq!(p.initial(), 2);
        for w in [vec![], vec![0], vec![1, 1], vec![0, 1, 1], vec![1, 0, 1]] {
            assert_eq!(p.accepts(&w), d.accepts(&w));
        }
        assert!(d.permute_states(&[0, 0, 1]).is_err());
    }
}
