//! JSON and Graphviz renderings of [`Dfa`].
//!
//! JSON layout: `{"states", "alphabet", "initial", "finals", "delta"}` where
//! `alphabet` is either a letter count or an array of letter names, states are
//! 0-based and `delta` is row-major (`q * alphabet + a`).

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Dfa;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlphabetRepr {
    Size(usize),
    Names(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaRepr {
    states: usize,
    alphabet: AlphabetRepr,
    initial: usize,
    finals: Vec<usize>,
    delta: Vec<u32>,
}

impl From<&Dfa> for DfaRepr {
    fn from(d: &Dfa) -> Self {
        DfaRepr {
            states: d.state_count(),
            alphabet: match d.letter_names() {
                Some(names) => AlphabetRepr::Names(names.to_vec()),
                None => AlphabetRepr::Size(d.alphabet_size()),
            },
            initial: d.initial(),
            finals: d.final_states(),
            delta: d.delta().to_vec(),
        }
    }
}

impl TryFrom<DfaRepr> for Dfa {
    type Error = Error;

    fn try_from(r: DfaRepr) -> Result<Self> {
        if r.finals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAutomaton("finals must be sorted and distinct".into()));
        }
        let (size, names) = match r.alphabet {
            AlphabetRepr::Size(k) => (k, None),
            AlphabetRepr::Names(names) => (names.len(), Some(names)),
        };
        let d = Dfa::new(r.states, size, r.delta, r.initial, &r.finals)?;
        match names {
            Some(names) => d.with_letter_names(Arc::from(names)),
            None => Ok(d),
        }
    }
}

impl Serialize for Dfa {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DfaRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dfa {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DfaRepr::deserialize(d)?;
        Dfa::try_from(repr).map_err(serde::de::Error::custom)
    }
}

impl Dfa {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("DFA serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        serde_json::from_str(text).map_err(|e| Error::InvalidAutomaton(e.to_string()))
    }

    /// Graphviz rendering. States are shown 1-based; parallel edges are merged
    /// into one edge whose label lists the letters in index order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\""));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  __start [shape=point];");
        for q in 0..self.state_count() {
            let shape = if self.is_final(q) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{} [shape={}, label=\"{}\"];", q + 1, shape, q + 1);
        }
        let _ = writeln!(out, "  __start -> q{};", self.initial() + 1);
        for p in 0..self.state_count() {
            let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); self.state_count()];
            for a in 0..self.alphabet_size() {
                by_target[self.next(p, a)].push(a);
            }
            for (q, letters) in by_target.iter().enumerate() {
                if letters.is_empty() {
                    continue;
                }
                let label = letters
                    .iter()
                    .map(|&a| self.letter_name(a))
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "  q{} -> q{} [label=\"{}\"];", p + 1, q + 1, label);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout_is_exact() {
        let d = Dfa::new(2, 2, vec![1, 0, 1, 1], 0, &[1]).unwrap();
        assert_eq!(
            d.to_json(),
            r#"{"states":2,"alphabet":2,"initial":0,"finals":[1],"delta":[1,0,1,1]}"#
        );
        let named = d.with_letter_names(Arc::from(vec!["x".to_string(), "y".to_string()])).unwrap();
        assert_eq!(
            named.to_json(),
            r#"{"states":2,"alphabet":["x","y"],"initial":0,"finals":[1],"delta":[1,0,1,1]}"#
        );
        assert_eq!(Dfa::from_json(&named.to_json()).unwrap(), named);
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(Dfa::from_json(r#"{"states":2,"alphabet":1,"initial":0,"finals":[1,0],"delta":[0,1]}"#).is_err());
        assert!(Dfa::from_json(r#"{"states":2,"alphabet":1,"initial":0,"finals":[],"delta":[0,2]}"#).is_err());
        assert!(Dfa::from_json(r#"{"states":1,"alphabet":1,"initial":0,"finals":[],"delta":[0],"x":1}"#).is_err());
    }

    #[test]
    fn dot_marks_finals_and_merges_edges() {
        let d = Dfa::new(2, 2, vec![1, 1, 0, 1], 0, &[1]).unwrap();
        let dot = d.to_dot("t");
        assert!(dot.contains("q2 [shape=doublecircle"));
        assert!(dot.contains("q1 [shape=circle"));
        assert!(dot.contains("q1 -> q2 [label=\"0,1\"];"));
        assert!(dot.contains("q2 -> q1 [label=\"0\"];"));
        assert!(dot.contains("__start -> q1;"));
    }
}
