//! Complete DFAs, NFAs, subset construction, minimization and equivalence.

mod dfa;
mod io;
mod minimize;
mod nfa;

pub use dfa::{Dfa, StateConfiguration};
pub use minimize::{distinguishing_word, equivalent, minimize, state_complexity, trim};
pub use nfa::{reverse_nfa, Nfa};

use crate::error::Result;

/// Subset construction with a state cap.
pub fn determinize(nfa: &Nfa, max_states: usize) -> Result<Dfa> {
    nfa.determinize(max_states)
}

/// All words over `0..alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet);
        for w in &layer {
            for a in 0..alphabet {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
