//! Word-level definitions of the operations, used as independent oracles.
#![allow(dead_code)]

use olpa::automata::words_up_to;
use olpa::Dfa;

pub fn words(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    words_up_to(alphabet, max_len)
}

/// `x ∈ L^cyc` iff `x = uv` with `vu ∈ L`.
pub fn in_cyclic_shift(d: &Dfa, x: &[usize]) -> bool {
    (0..=x.len()).any(|i| {
        let (u, v) = x.split_at(i);
        let vu: Vec<usize> = v.iter().chain(u).copied().collect();
        d.accepts(&vu)
    })
}

/// `x ∈ ½L` iff `xy ∈ L` for some `y` with `|y| = |x|`.
pub fn in_half(d: &Dfa, x: &[usize]) -> bool {
    let k = d.alphabet_size();
    words(k, x.len()).into_iter().filter(|y| y.len() == x.len()).any(|y| {
        let xy: Vec<usize> = x.iter().chain(&y).copied().collect();
        d.accepts(&xy)
    })
}

/// Members of `L` up to `max_len`; long enough for the bounded-witness
/// arguments when `max_len ≥ |Q||Q'| - 1`.
pub fn members(d: &Dfa, max_len: usize) -> Vec<Vec<usize>> {
    words(d.alphabet_size(), max_len).into_iter().filter(|w| d.accepts(w)).collect()
}

/// `x ∈ L'\L` iff `wx ∈ L` for some `w ∈ L'`, with `divisor_words` the
/// members of `L'` up to the product bound.
pub fn in_left_quotient(dividend: &Dfa, divisor_words: &[Vec<usize>], x: &[usize]) -> bool {
    divisor_words.iter().any(|w| {
        let wx: Vec<usize> = w.iter().chain(x).copied().collect();
        dividend.accepts(&wx)
    })
}

/// `x ∈ L ∖ L'` iff `x = uz` with `uyz ∈ L` for some `y ∈ L'`.
pub fn in_deletion(d: &Dfa, removed_words: &[Vec<usize>], x: &[usize]) -> bool {
    (0..=x.len()).any(|i| {
        let (u, z) = x.split_at(i);
        removed_words.iter().any(|y| {
            let w: Vec<usize> = u.iter().chain(y).chain(z).copied().collect();
            d.accepts(&w)
        })
    })
}

/// `x ∈ L_1 ⧢_T L_2`: some trajectory `t ∈ T` of length `|x|` splits `x`
/// into a member of `L_1` (positions with `t = 0`) and one of `L_2`.
pub fn in_shuffle(traj: &Dfa, left: &Dfa, right: &Dfa, x: &[usize]) -> bool {
    (0..1usize << x.len()).any(|mask| {
        let t: Vec<usize> = (0..x.len()).map(|i| mask >> i & 1).collect();
        if !traj.accepts(&t) {
            return false;
        }
        let u: Vec<usize> = x.iter().zip(&t).filter(|(_, &b)| b == 0).map(|(&a, _)| a).collect();
        let v: Vec<usize> = x.iter().zip(&t).filter(|(_, &b)| b == 1).map(|(&a, _)| a).collect();
        left.accepts(&u) && right.accepts(&v)
    })
}

/// Shortest-witness bound for product reachability between two DFAs.
pub fn product_bound(a: &Dfa, b: &Dfa) -> usize {
    a.state_count() * b.state_count()
}

/// Number of residual classes of `accepts` among words up to `prefix_len`,
/// separated by suffixes up to `suffix_len`: a lower bound on the state
/// complexity that is exact once the lengths are large enough.
pub fn residual_count(alphabet: usize, prefix_len: usize, suffix_len: usize, accepts: impl Fn(&[usize]) -> bool) -> usize {
    let suffixes = words(alphabet, suffix_len);
    let mut rows = std::collections::HashSet::new();
    for x in words(alphabet, prefix_len) {
        let row: Vec<bool> = suffixes
            .iter()
            .map(|z| {
                let xz: Vec<usize> = x.iter().chain(z).copied().collect();
                accepts(&xz)
            })
            .collect();
        rows.insert(row);
    }
    rows.len()
}

/// Number of distinct sets `{ q : q·w ∈ F }` over all words `w`. For a DFA
/// whose states are all reachable this is the state complexity of the
/// reversed language.
pub fn reversal_subset_count(d: &Dfa) -> usize {
    let n = d.state_count();
    let k = d.alphabet_size();
    let start: Vec<bool> = (0..n).map(|q| d.is_final(q)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        for a in 0..k {
            let next: Vec<bool> = (0..n).map(|p| s[d.next(p, a)]).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}
