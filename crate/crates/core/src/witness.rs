//! One-letter-per-action witnesses: standard DFAs of full transformation
//! (tuple) languages and the finite configuration sweep over them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::transform::{monoid_size, tuple_monoid_size, Transformation, TransformationTuple};

/// Per-input `(n_j, k_j, ℓ_j)`: size, number of finals, and whether the
/// initial state is final.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub sizes: Vec<usize>,
    #[serde(rename = "k")]
    pub finals: Vec<usize>,
    #[serde(rename = "l")]
    pub initial_final: Vec<bool>,
}

impl WitnessConfig {
    pub fn new(sizes: Vec<usize>, finals: Vec<usize>, initial_final: Vec<bool>) -> Result<Self> {
        let c = WitnessConfig { sizes, finals, initial_final };
        c.validate()?;
        Ok(c)
    }

    pub fn unary(n: usize, k: usize, initial_final: bool) -> Result<Self> {
        Self::new(vec![n], vec![k], vec![initial_final])
    }

    pub fn arity(&self) -> usize {
        self.sizes.len()
    }

    /// Checks `ℓ ≤ k ≤ n - 1 + ℓ` for every component.
    pub fn validate(&self) -> Result<()> {
        let m = self.sizes.len();
        if m == 0 || self.finals.len() != m || self.initial_final.len() != m {
            return Err(Error::InvalidConfig(format!(
                "need matching non-empty size/k/l vectors, got {}/{}/{}",
                m,
                self.finals.len(),
                self.initial_final.len()
            )));
        }
        for j in 0..m {
            let (n, k, l) = (self.sizes[j], self.finals[j], self.initial_final[j] as usize);
            if n == 0 {
                return Err(Error::InvalidConfig(format!("input {j}: size must be >= 1")));
            }
            if k < l || k + 1 > n + l {
                return Err(Error::InvalidConfig(format!(
                    "input {j}: k = {k} outside {l}..={} for n = {n}, l = {l}",
                    n - 1 + l
                )));
            }
        }
        Ok(())
    }

    /// The 0-based canonical final set of component `j`.
    pub fn final_set(&self, j: usize) -> Vec<usize> {
        canonical_finals(self.sizes[j], self.finals[j], self.initial_final[j])
    }

    /// `ℓ` vector as 0/1.
    pub fn l_vector(&self) -> Vec<u8> {
        self.initial_final.iter().map(|&b| b as u8).collect()
    }
}

/// `{0, …, k-1}` when the initial state is final, `{n-k, …, n-1}` otherwise.
pub fn canonical_finals(n: usize, k: usize, initial_final: bool) -> Vec<usize> {
    if initial_final {
        (0..k).collect()
    } else {
        (n - k..n).collect()
    }
}

/// Every configuration of the sweep, ordered lexicographically by
/// `(ℓ_1, k_1, …, ℓ_m, k_m)`. There are `∏ 2 n_j` of them.
pub fn enumerate_configs(sizes: &[usize]) -> Vec<WitnessConfig> {
    let per_input: Vec<Vec<(bool, usize)>> = sizes
        .iter()
        .map(|&n| {
            let mut v: Vec<(bool, usize)> = (0..n).map(|k| (false, k)).collect();
            v.extend((1..=n).map(|k| (true, k)));
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; sizes.len()];
    if sizes.is_empty() || sizes.contains(&0) {
        return out;
    }
    loop {
        let (initial_final, finals) = idx.iter().enumerate().map(|(j, &i)| per_input[j][i]).unzip();
        out.push(WitnessConfig { sizes: sizes.to_vec(), finals, initial_final });
        // odometer, last component fastest
        let mut j = sizes.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < per_input[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Standard DFA of the transformation language `Σ(i, F)` where the letters
/// are the given transformations.
pub fn standard_dfa(n: usize, initial: usize, finals: &[usize], alphabet: &[Transformation]) -> Result<Dfa> {
    if let Some(t) = alphabet.iter().find(|t| t.n() != n) {
        return Err(Error::SizeMismatch { left: t.n(), right: n });
    }
    let d = Dfa::from_fn(n, alphabet.len(), initial, finals, |q, a| alphabet[a].apply(q))?;
    let names: Vec<String> = alphabet.iter().map(ToString::to_string).collect();
    d.with_letter_names(Arc::from(names))
}

/// The unary OLPA witness `𝒯_n(0, F_{n,k,ℓ})`, letters named by 1-based images.
pub fn unary_witness(n: usize, k: usize, initial_final: bool, limits: &Limits) -> Result<Dfa> {
    let config = WitnessConfig::unary(n, k, initial_final)?;
    let factory = WitnessFactory::new(&[n], limits)?;
    let mut tuple = factory.build(&config)?;
    let d = tuple.dfas.pop().expect("one component");
    d.with_letter_names(letter_names(&[n]))
}

/// Display names for the letters of the tuple alphabet of `shape`.
pub fn letter_names(shape: &[usize]) -> Arc<[String]> {
    let total = tuple_monoid_size(shape) as u64;
    let names: Vec<String> = (0..total)
        .map(|r| {
            let t = TransformationTuple::unrank(shape, crate::transform::Rank(r)).expect("in range");
            if shape.len() == 1 {
                t.parts()[0].to_string()
            } else {
                t.to_string()
            }
        })
        .collect();
    Arc::from(names)
}

/// `m` standard DFAs over one shared tuple alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTuple {
    pub config: WitnessConfig,
    pub dfas: Vec<Dfa>,
}

/// Precomputed transition tables for one shape; builds witnesses for any
/// configuration of that shape by choosing final sets.
#[derive(Debug, Clone)]
pub struct WitnessFactory {
    shape: Vec<usize>,
    letters: usize,
    tables: Vec<Arc<Vec<u32>>>,
}

impl WitnessFactory {
    pub fn new(shape: &[usize], limits: &Limits) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidConfig("witness shape needs sizes >= 1".into()));
        }
        let total = tuple_monoid_size(shape);
        if total > limits.max_letters as u128 {
            return Err(Error::LetterLimit { letters: total, limit: limits.max_letters });
        }
        let letters = total as usize;
        let m = shape.len();
        // radix of the components after j
        let mut suffix = vec![1u64; m];
        for j in (0..m.saturating_sub(1)).rev() {
            suffix[j] = suffix[j + 1] * monoid_size(shape[j + 1]).expect("fits");
        }
        let tables = (0..m)
            .map(|j| {
                let n = shape[j];
                let radix = monoid_size(n).expect("fits");
                let mut place = vec![1u64; n];
                for q in (0..n.saturating_sub(1)).rev() {
                    place[q] = place[q + 1] * n as u64;
                }
                let mut delta = vec![0u32; n * letters];
                for a in 0..letters {
                    let digit = (a as u64 / suffix[j]) % radix;
                    for q in 0..n {
                        delta[q * letters + a] = ((digit / place[q]) % n as u64) as u32;
                    }
                }
                Arc::new(delta)
            })
            .collect();
        Ok(WitnessFactory { shape: shape.to_vec(), letters, tables })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn alphabet_size(&self) -> usize {
        self.letters
    }

    /// Component `j` with initial state 0 and an arbitrary final set.
    pub fn component(&self, j: usize, initial: usize, finals: &[usize]) -> Result<Dfa> {
        Dfa::new(self.shape[j], self.letters, self.tables[j].as_ref().clone(), initial, finals)
    }

    pub fn build(&self, config: &WitnessConfig) -> Result<WitnessTuple> {
        config.validate()?;
        if config.sizes != self.shape {
            return Err(Error::InvalidConfig(format!(
                "config sizes {:?} do not match factory shape {:?}",
                config.sizes, self.shape
            )));
        }
        let dfas = (0..self.shape.len())
            .map(|j| self.component(j, 0, &config.final_set(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(WitnessTuple { config: config.clone(), dfas })
    }
}

/// Witnesses for a configuration, unnamed letters.
pub fn tuple_witnesses(config: &WitnessConfig, limits: &Limits) -> Result<WitnessTuple> {
    config.validate()?;
    WitnessFactory::new(&config.sizes, limits)?.build(config)
}

/// Bijection `β` sending the initial state to 0 and the finals onto the
/// canonical final slots, filling the remaining slots in increasing order.
pub fn normalizing_bijection(dfa: &Dfa) -> Vec<usize> {
    let n = dfa.state_count();
    let i = dfa.initial();
    let initial_final = dfa.is_final(i);
    let k = dfa.finals().count_ones(..);
    let mut final_slots = canonical_finals(n, k, initial_final).into_iter();
    let mut other_slots = (0..n).filter(|s| !canonical_finals(n, k, initial_final).contains(s));
    let mut beta = vec![0usize; n];
    // the initial state takes slot 0 from whichever pool it belongs to
    if initial_final {
        beta[i] = final_slots.next().expect("slot 0 is final");
    } else {
        beta[i] = other_slots.next().expect("slot 0 is non-final");
    }
    for q in (0..n).filter(|&q| q != i) {
        beta[q] = if dfa.is_final(q) {
            final_slots.next().expect("enough final slots")
        } else {
            other_slots.next().expect("enough non-final slots")
        };
    }
    beta
}

/// For input DFAs over a common alphabet, the witness configuration they
/// normalize to and the 1-uniform letter map `φ` with
/// `L(dfas[j]) = L(witness_j) φ⁻¹`.
pub fn normalizing_morphism(dfas: &[Dfa]) -> Result<(WitnessConfig, Vec<usize>)> {
    let first = dfas.first().ok_or_else(|| Error::InvalidConfig("no input DFAs".into()))?;
    let sigma = first.alphabet_size();
    if let Some(d) = dfas.iter().find(|d| d.alphabet_size() != sigma) {
        return Err(Error::AlphabetMismatch { expected: sigma, found: d.alphabet_size() });
    }
    let betas: Vec<Vec<usize>> = dfas.iter().map(normalizing_bijection).collect();
    let config = WitnessConfig::new(
        dfas.iter().map(Dfa::state_count).collect(),
        dfas.iter().map(|d| d.finals().count_ones(..)).collect(),
        dfas.iter().map(|d| d.is_final(d.initial())).collect(),
    )?;
    let mut letter_map = Vec::with_capacity(sigma);
    for a in 0..sigma {
        let parts = dfas
            .iter()
            .zip(&betas)
            .map(|(d, beta)| {
                // conjugate: β⁻¹ T_a β, i.e. β(q) ↦ β(q·a)
                let mut image = vec![0usize; d.state_count()];
                for q in 0..d.state_count() {
                    image[beta[q]] = beta[d.next(q, a)];
                }
                Transformation::new(image)
            })
            .collect::<Result<Vec<_>>>()?;
        letter_map.push(TransformationTuple::new(parts)?.rank().0 as usize);
    }
    Ok((config, letter_map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::state_complexity;

    #[test]
    fn config_ranges() {
        assert!(WitnessConfig::unary(3, 0, false).is_ok());
        assert!(WitnessConfig::unary(3, 3, false).is_err());
        assert!(WitnessConfig::unary(3, 0, true).is_err());
        assert!(WitnessConfig::unary(3, 3, true).is_ok());
        assert!(WitnessConfig::unary(0, 0, false).is_err());
        assert!(WitnessConfig::new(vec![2, 2], vec![1], vec![false, false]).is_err());
    }

    #[test]
    fn canonical_final_sets() {
        assert_eq!(canonical_finals(4, 2, true), vec![0, 1]);
        assert_eq!(canonical_finals(4, 2, false), vec![2, 3]);
        assert_eq!(canonical_finals(4, 0, false), Vec::<usize>::new());
    }

    #[test]
    fn config_enumeration() {
        let c = enumerate_configs(&[3]);
        let pairs: Vec<(bool, usize)> = c.iter().map(|c| (c.initial_final[0], c.finals[0])).collect();
        assert_eq!(
            pairs,
            vec![(false, 0), (false, 1), (false, 2), (true, 1), (true, 2), (true, 3)]
        );
        assert_eq!(enumerate_configs(&[2, 2]).len(), 16);
        assert_eq!(enumerate_configs(&[2, 3]).len(), 24);
        assert_eq!(enumerate_configs(&[1]).len(), 2);
        let two = enumerate_configs(&[1, 2]);
        assert!(two.windows(2).all(|w| {
            let key = |c: &WitnessConfig| {
                c.initial_final.iter().zip(&c.finals).flat_map(|(&l, &k)| [l as usize, k]).collect::<Vec<_>>()
            };
            key(&w[0]) < key(&w[1])
        }));
    }

    #[test]
    fn trivial_witness() {
        let d = unary_witness(1, 1, true, &Limits::default()).unwrap();
        assert_eq!(d.state_count(), 1);
        assert_eq!(d.alphabet_size(), 1);
        assert!(d.accepts(&[0, 0, 0]));
    }

    #[test]
    fn three_state_witness() {
        let d = unary_witness(3, 1, false, &Limits::default()).unwrap();
        assert_eq!(d.alphabet_size(), 27);
        assert_eq!(d.final_states(), vec![2]);
        assert_eq!(d.letter_name(5), "[1 2 3]");
        assert_eq!(state_complexity(&d), 3);
    }

    #[test]
    fn figure_one_automaton() {
        let alphabet = crate::transform::enumerate_full_monoid(2, 16).unwrap();
        let d = standard_dfa(2, 0, &[1], &alphabet).unwrap();
        // letters in rank order: [1 1], [1 2], [2 1], [2 2]
        assert_eq!(d.delta(), &[0, 0, 1, 1, 0, 1, 0, 1]);
        assert_eq!(d, unary_witness(2, 1, false, &Limits::default()).unwrap());
    }

    #[test]
    fn universal_standard_dfa() {
        let d = standard_dfa(2, 0, &[0], &[Transformation::identity(2)]).unwrap();
        assert_eq!(state_complexity(&d), 1);
        assert!(standard_dfa(3, 0, &[0], &[Transformation::identity(2)]).is_err());
    }

    #[test]
    fn tuple_alphabet_sizes() {
        let c = WitnessConfig::new(vec![2, 3], vec![1, 1], vec![false, false]).unwrap();
        let w = tuple_witnesses(&c, &Limits::default()).unwrap();
        assert_eq!(w.dfas.len(), 2);
        assert!(w.dfas.iter().all(|d| d.alphabet_size() == 108));
        assert_eq!(w.dfas[0].state_count(), 2);
        assert_eq!(w.dfas[1].state_count(), 3);
        // letter 28 = ([1 2],[1 1 2])
        assert_eq!(w.dfas[0].action(28), vec![0, 1]);
        assert_eq!(w.dfas[1].action(28), vec![0, 0, 1]);
        let small = Limits::default().with_max_letters(100);
        assert!(matches!(tuple_witnesses(&c, &small), Err(Error::LetterLimit { .. })));
    }

    #[test]
    fn unary_tuple_matches_unary_witness() {
        let c = WitnessConfig::unary(3, 2, true).unwrap();
        let w = tuple_witnesses(&c, &Limits::default()).unwrap();
        let u = unary_witness(3, 2, true, &Limits::default()).unwrap();
        assert_eq!(w.dfas[0], u.without_letter_names());
    }

    #[test]
    fn bijection_is_canonical() {
        // initial 2, finals {0, 2}: i ∈ F so F_{3,2,1} = {0, 1}
        let d = Dfa::from_fn(3, 1, 2, &[0, 2], |q, _| q).unwrap();
        assert_eq!(normalizing_bijection(&d), vec![1, 2, 0]);
        // initial 1, finals {0}: i ∉ F so F_{3,1,0} = {2}
        let e = Dfa::from_fn(3, 1, 1, &[0], |q, _| q).unwrap();
        assert_eq!(normalizing_bijection(&e), vec![2, 0, 1]);
    }
}
