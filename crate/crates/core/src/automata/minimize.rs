//! Minimization and language equivalence for complete DFAs.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::Dfa;
use crate::error::{Error, Result};

/// Refinable partition of `0..n` with contiguous blocks in `elems`.
struct Partition {
    elems: Vec<u32>,
    loc: Vec<u32>,
    block_of: Vec<u32>,
    start: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
}

impl Partition {
    fn new(n: usize, is_final: impl Fn(usize) -> bool) -> Self {
        let mut elems: Vec<u32> = (0..n as u32).collect();
        // finals first
        elems.sort_by_key(|&q| !is_final(q as usize));
        let split = elems.iter().take_while(|&&q| is_final(q as usize)).count() as u32;
        let mut loc = vec![0; n];
        for (i, &q) in elems.iter().enumerate() {
            loc[q as usize] = i as u32;
        }
        let mut p = Partition {
            elems,
            loc,
            block_of: vec![0; n],
            start: vec![0],
            end: vec![n as u32],
            marked: vec![0],
        };
        if split > 0 && split < n as u32 {
            p.start.push(split);
            p.end.push(n as u32);
            p.marked.push(0);
            p.end[0] = split;
            for i in split as usize..n {
                let q = p.elems[i] as usize;
                p.block_of[q] = 1;
            }
        }
        p
    }

    fn block_count(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: usize) -> u32 {
        self.end[b] - self.start[b]
    }

    fn members(&self, b: usize) -> &[u32] {
        &self.elems[self.start[b] as usize..self.end[b] as usize]
    }

    /// Moves `q` into the marked prefix of its block. Returns true if the
    /// block had no marks before.
    fn mark(&mut self, q: usize) -> bool {
        let b = self.block_of[q] as usize;
        let pos = self.loc[q];
        let slot = self.start[b] + self.marked[b];
        if pos < slot {
            return false;
        }
        let other = self.elems[slot as usize];
        self.elems.swap(pos as usize, slot as usize);
        self.loc[other as usize] = pos;
        self.loc[q] = slot;
        self.marked[b] += 1;
        self.marked[b] == 1
    }

    /// Splits `b` into marked and unmarked parts. The smaller part receives
    /// the new block id, which is returned.
    fn split(&mut self, b: usize) -> Option<usize> {
        let marked = self.marked[b];
        self.marked[b] = 0;
        let size = self.size(b);
        if marked == 0 || marked == size {
            return None;
        }
        let nb = self.start.len();
        let cut = self.start[b] + marked;
        if marked <= size - marked {
            self.start.push(self.start[b]);
            self.end.push(cut);
            self.start[b] = cut;
        } else {
            self.start.push(cut);
            self.end.push(self.end[b]);
            self.end[b] = cut;
        }
        self.marked.push(0);
        for i in self.start[nb]..self.end[nb] {
            let q = self.elems[i as usize] as usize;
            self.block_of[q] = nb as u32;
        }
        Some(nb)
    }
}

/// Per-letter predecessor lists in CSR layout.
struct Inverse {
    offsets: Vec<u32>,
    sources: Vec<u32>,
    n: usize,
}

impl Inverse {
    fn new(d: &Dfa) -> Self {
        let n = d.state_count();
        let k = d.alphabet_size();
        let mut offsets = vec![0u32; n * k + 1];
        for q in 0..n {
            for a in 0..k {
                offsets[a * n + d.next(q, a) + 1] += 1;
            }
        }
        for i in 1..offsets.len() {
            offsets[i] += offsets[i - 1];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0u32; n * k];
        for q in 0..n {
            for a in 0..k {
                let slot = &mut fill[a * n + d.next(q, a)];
                sources[*slot as usize] = q as u32;
                *slot += 1;
            }
        }
        Inverse { offsets, sources, n }
    }

    fn preds(&self, a: usize, p: usize) -> &[u32] {
        let i = a * self.n + p;
        &self.sources[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }
}

/// Restriction of `d` to its reachable states, renumbered in BFS order.
pub fn trim(d: &Dfa) -> Dfa {
    let order = d.reachable_order();
    let mut id = vec![u32::MAX; d.state_count()];
    for (i, &q) in order.iter().enumerate() {
        id[q] = i as u32;
    }
    let finals: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &q)| d.is_final(q))
        .map(|(i, _)| i)
        .collect();
    let mut delta = Vec::with_capacity(order.len() * d.alphabet_size());
    for &q in &order {
        delta.extend(d.row(q).iter().map(|&p| id[p as usize]));
    }
    let out = Dfa::new(order.len(), d.alphabet_size(), delta, 0, &finals)
        .expect("trimmed table is well-formed");
    match d.letter_names() {
        Some(names) => out.with_letter_names(names.clone()).expect("same alphabet"),
        None => out,
    }
}

/// The minimal complete DFA for `L(d)`, with states numbered in BFS order
/// from the initial state (letters by index). Isomorphic inputs give
/// identical outputs.
pub fn minimize(d: &Dfa) -> Dfa {
    let t = trim(d);
    let n = t.state_count();
    let k = t.alphabet_size();
    let mut part = Partition::new(n, |q| t.is_final(q));

    if part.block_count() > 1 {
        let inv = Inverse::new(&t);
        let seed = if part.size(0) <= part.size(1) { 0 } else { 1 };
        let mut work: Vec<(u32, u32)> = (0..k as u32).rev().map(|a| (seed, a)).collect();
        let mut touched: Vec<usize> = Vec::new();
        let mut splitter: Vec<u32> = Vec::new();

        while let Some((b, a)) = work.pop() {
            splitter.clear();
            splitter.extend_from_slice(part.members(b as usize));
            for &p in &splitter {
                for &q in inv.preds(a as usize, p as usize) {
                    let q = q as usize;
                    if part.mark(q) {
                        touched.push(part.block_of[q] as usize);
                    }
                }
            }
            for x in touched.drain(..) {
                if let Some(nb) = part.split(x) {
                    work.extend((0..k as u32).rev().map(|c| (nb as u32, c)));
                }
            }
        }
    }

    quotient(&t, &part.block_of, part.block_count())
}

/// Collapses states with equal class ids and renumbers by BFS.
fn quotient(d: &Dfa, class: &[u32], classes: usize) -> Dfa {
    let k = d.alphabet_size();
    let mut rep = vec![usize::MAX; classes];
    for q in 0..d.state_count() {
        let c = class[q] as usize;
        if rep[c] == usize::MAX {
            rep[c] = q;
        }
    }
    let mut id = vec![u32::MAX; classes];
    let mut order = Vec::with_capacity(classes);
    let mut queue = VecDeque::new();
    let start = class[d.initial()] as usize;
    id[start] = 0;
    order.push(start);
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        for &p in d.row(rep[c]) {
            let pc = class[p as usize] as usize;
            if id[pc] == u32::MAX {
                id[pc] = order.len() as u32;
                order.push(pc);
                queue.push_back(pc);
            }
        }
    }
    let mut delta = Vec::with_capacity(order.len() * k);
    let mut finals = Vec::new();
    for (i, &c) in order.iter().enumerate() {
        let q = rep[c];
        if d.is_final(q) {
            finals.push(i);
        }
        delta.extend(d.row(q).iter().map(|&p| id[class[p as usize] as usize]));
    }
    let out = Dfa::new(order.len(), k, delta, 0, &finals).expect("quotient is well-formed");
    match d.letter_names() {
        Some(names) => out.with_letter_names(names.clone()).expect("same alphabet"),
        None => out,
    }
}

/// Number of states of the minimal DFA for `L(d)`.
pub fn state_complexity(d: &Dfa) -> usize {
    minimize(d).state_count()
}

/// Language equality by a synchronous walk over reachable state pairs.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool> {
    if a.alphabet_size() != b.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            expected: a.alphabet_size(),
            found: b.alphabet_size(),
        });
    }
    Ok(distinguishing_word(a, b)?.is_none())
}

/// A shortest word accepted by exactly one of `a`, `b`, if any.
pub fn distinguishing_word(a: &Dfa, b: &Dfa) -> Result<Option<Vec<usize>>> {
    if a.alphabet_size() != b.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            expected: a.alphabet_size(),
            found: b.alphabet_size(),
        });
    }
    let nb = b.state_count();
    let pair = |p: usize, q: usize| p * nb + q;
    let mut seen = FixedBitSet::with_capacity(a.state_count() * nb);
    // parent pointers for word reconstruction
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, 0); a.state_count() * nb];
    let mut queue = VecDeque::new();
    let start = pair(a.initial(), b.initial());
    seen.insert(start);
    queue.push_back((a.initial(), b.initial()));
    while let Some((p, q)) = queue.pop_front() {
        if a.is_final(p) != b.is_final(q) {
            let mut word = Vec::new();
            let mut cur = pair(p, q);
            while cur != start {
                let (prev, letter) = parent[cur];
                word.push(letter);
                cur = prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for l in 0..a.alphabet_size() {
            let (p2, q2) = (a.next(p, l), b.next(q, l));
            let id = pair(p2, q2);
            if !seen.contains(id) {
                seen.insert(id);
                parent[id] = (pair(p, q), l);
                queue.push_back((p2, q2));
            }
        }
    }
    Ok(None)
}
