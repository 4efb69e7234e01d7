//! Worst-case sweeps over OLPA witnesses, the brute-force oracle and the
//! randomized uniformity probe.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ast::OpAst;
use crate::automata::{equivalent, Dfa};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::witness::{enumerate_configs, WitnessConfig, WitnessFactory};

/// Options for [`worst_case`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    pub limits: Limits,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScEntry {
    pub config: WitnessConfig,
    pub stc: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub capped: Option<String>,
}

/// Result of a configuration sweep. Timing is kept out of the JSON form so
/// that identical runs serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScReport {
    pub operation: String,
    pub sizes: Vec<usize>,
    pub max_value: Option<usize>,
    pub argmax: Option<WitnessConfig>,
    /// Some configuration hit a cap; `max_value` only covers the rest.
    pub partial: bool,
    pub entries: Vec<ScEntry>,
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl ScReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn entry(&self, config: &WitnessConfig) -> Option<&ScEntry> {
        self.entries.iter().find(|e| &e.config == config)
    }

    /// Aligned text table: ℓ-vector, k-vector, stc, capped.
    pub fn to_table(&self) -> String {
        let rows: Vec<[String; 4]> = self
            .entries
            .iter()
            .map(|e| {
                let join = |v: Vec<String>| v.join(",");
                [
                    join(e.config.l_vector().iter().map(ToString::to_string).collect()),
                    join(e.config.finals.iter().map(ToString::to_string).collect()),
                    e.stc.map_or_else(|| "-".to_string(), |v| v.to_string()),
                    e.capped.clone().unwrap_or_default(),
                ]
            })
            .collect();
        let head = ["l", "k", "stc", "capped"];
        let mut widths = head.map(str::len);
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: [&str; 4]| {
            let text: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", text.join("  ").trim_end());
        };
        let _ = writeln!(out, "operation: {}", self.operation);
        let _ = writeln!(out, "sizes: {:?}", self.sizes);
        line(&mut out, head);
        for r in &rows {
            line(&mut out, [&r[0], &r[1], &r[2], &r[3]]);
        }
        match (&self.max_value, &self.argmax) {
            (Some(v), Some(c)) => {
                let _ = writeln!(out, "max: {v} at l={:?} k={:?}", c.l_vector(), c.finals);
            }
            _ => {
                let _ = writeln!(out, "max: -");
            }
        }
        out
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

fn check_arity(ast: &OpAst, sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidConfig("sizes must be non-empty and positive".into()));
    }
    if ast.arity() > sizes.len() {
        return Err(Error::Arity { needed: ast.arity(), given: sizes.len() });
    }
    Ok(())
}

/// State complexity of `ast` on every OLPA witness configuration of `sizes`.
pub fn worst_case(ast: &OpAst, sizes: &[usize], options: &SweepOptions) -> Result<ScReport> {
    check_arity(ast, sizes)?;
    let start = Instant::now();
    let factory = WitnessFactory::new(sizes, &options.limits)?;
    let configs = enumerate_configs(sizes);
    let run = |config: &WitnessConfig| -> Result<ScEntry> {
        let inputs = factory.build(config)?.dfas;
        match ast.eval(&inputs, &options.limits) {
            Ok(out) => Ok(ScEntry { config: config.clone(), stc: Some(out.state_count()), capped: None }),
            Err(e @ Error::SubsetLimit { .. }) => {
                Ok(ScEntry { config: config.clone(), stc: None, capped: Some(e.to_string()) })
            }
            Err(e) => Err(e),
        }
    };
    let entries = pool(options.jobs)?.install(|| configs.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    let mut max_value = None;
    let mut argmax = None;
    for e in &entries {
        if let Some(v) = e.stc {
            if max_value.is_none_or(|m| v > m) {
                max_value = Some(v);
                argmax = Some(e.config.clone());
            }
        }
    }
    Ok(ScReport {
        operation: ast.to_string(),
        sizes: sizes.to_vec(),
        max_value,
        argmax,
        partial: entries.iter().any(|e| e.stc.is_none()),
        entries,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// Every complete DFA with exactly `n_j` states over `σ` letters, initial state 0.
    AllDfas,
    /// Every witness component with any initial state and final set,
    /// restricted to every non-empty subset of the tuple alphabet.
    TransformationSubsets,
}

impl OracleMode {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "all-dfas" => Some(OracleMode::AllDfas),
            "transformation-subsets" => Some(OracleMode::TransformationSubsets),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub operation: String,
    pub sizes: Vec<usize>,
    /// Input alphabet size; absent in transformation-subsets mode.
    pub sigma: Option<usize>,
    pub mode: OracleMode,
    pub max_value: usize,
    /// First input tuple (in enumeration order) reaching `max_value`.
    pub achievers: Vec<Dfa>,
    pub cases: u64,
    /// Cases whose value exceeds that of the full alphabet with the same
    /// initial states and final sets.
    pub dominance_violations: u64,
}

impl OracleResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("oracle result serializes")
    }
}

/// Decodes `index` into per-component digits of the given radices, last
/// component fastest.
fn split_index(mut index: u64, radices: &[u64]) -> Vec<u64> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

fn all_dfas_case(sizes: &[usize], sigma: usize, per: &[u64], index: u64) -> Result<Vec<Dfa>> {
    split_index(index, per)
        .into_iter()
        .zip(sizes)
        .map(|(mut code, &n)| {
            let finals_mask = code % (1u64 << n);
            code >>= n;
            let mut delta = vec![0u32; n * sigma];
            for slot in delta.iter_mut() {
                *slot = (code % n as u64) as u32;
                code /= n as u64;
            }
            let finals: Vec<usize> = (0..n).filter(|q| finals_mask >> q & 1 == 1).collect();
            Dfa::new(n, sigma, delta, 0, &finals)
        })
        .collect()
}

/// Keeps the larger value, and the smaller index on ties.
fn better(a: (usize, u64), b: (usize, u64)) -> (usize, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn budget_check(needed: Option<u128>, budget: u64) -> Result<u64> {
    match needed {
        Some(n) if n <= budget as u128 => Ok(n as u64),
        Some(n) => Err(Error::Budget { needed: n, budget: budget as u128 }),
        None => Err(Error::Budget { needed: u128::MAX, budget: budget as u128 }),
    }
}

/// Exhaustive maximum of the output state complexity over an input class.
pub fn brute_force_max(
    ast: &OpAst,
    sizes: &[usize],
    sigma: usize,
    mode: OracleMode,
    budget: u64,
    limits: &Limits,
) -> Result<OracleResult> {
    check_arity(ast, sizes)?;
    let eval = |inputs: &[Dfa]| -> Result<usize> { Ok(ast.eval(inputs, limits)?.state_count()) };
    match mode {
        OracleMode::AllDfas => {
            if sigma == 0 {
                return Err(Error::InvalidConfig("sigma must be >= 1".into()));
            }
            let per_opt: Option<Vec<u128>> = sizes
                .iter()
                .map(|&n| {
                    let tables = (n as u128).checked_pow(u32::try_from(n * sigma).ok()?)?;
                    tables.checked_mul(1u128.checked_shl(n as u32)?)
                })
                .collect();
            let total = per_opt
                .as_ref()
                .and_then(|p| p.iter().try_fold(1u128, |acc, &x| acc.checked_mul(x)));
            let cases = budget_check(total, budget)?;
            let per: Vec<u64> = per_opt.expect("checked").into_iter().map(|x| x as u64).collect();
            let best = (0..cases)
                .into_par_iter()
                .map(|i| Ok((eval(&all_dfas_case(sizes, sigma, &per, i)?)?, i)))
                .try_reduce(|| (0, u64::MAX), |a, b| Ok(better(a, b)))?;
            Ok(OracleResult {
                operation: ast.to_string(),
                sizes: sizes.to_vec(),
                sigma: Some(sigma),
                mode,
                max_value: best.0,
                achievers: all_dfas_case(sizes, sigma, &per, best.1)?,
                cases,
                dominance_violations: 0,
            })
        }
        OracleMode::TransformationSubsets => {
            let factory = WitnessFactory::new(sizes, limits)?;
            let letters = factory.alphabet_size();
            if letters >= 63 {
                return Err(Error::Budget { needed: 1u128 << letters.min(127), budget: budget as u128 });
            }
            let subsets = (1u64 << letters) - 1;
            // (initial, final mask) for each component
            let per: Vec<u64> = sizes.iter().map(|&n| (n as u64) << n).collect();
            let input_configs: u64 = per.iter().product();
            let cases = budget_check((input_configs as u128).checked_mul(subsets as u128), budget)?;
            let full = (1u64 << letters) - 1;
            let build = |config: u64, mask: u64| -> Result<Vec<Dfa>> {
                let letter_list: Vec<usize> = (0..letters).filter(|a| mask >> a & 1 == 1).collect();
                split_index(config, &per)
                    .into_iter()
                    .zip(sizes)
                    .enumerate()
                    .map(|(j, (code, &n))| {
                        let initial = (code >> n) as usize;
                        let finals: Vec<usize> = (0..n).filter(|q| code >> q & 1 == 1).collect();
                        factory.component(j, initial, &finals)?.inverse_morphism(&letter_list, letter_list.len())
                    })
                    .collect()
            };
            let per_config = (0..input_configs)
                .into_par_iter()
                .map(|c| -> Result<((usize, u64), u64)> {
                    let full_value = eval(&build(c, full)?)?;
                    let mut best = (full_value, c * subsets + (full - 1));
                    let mut violations = 0;
                    for mask in 1..full {
                        let v = eval(&build(c, mask)?)?;
                        if v > full_value {
                            violations += 1;
                        }
                        best = better(best, (v, c * subsets + (mask - 1)));
                    }
                    Ok((best, violations))
                })
                .collect::<Result<Vec<_>>>()?;
            let best = per_config.iter().fold((0, u64::MAX), |acc, &(b, _)| better(acc, b));
            let dominance_violations = per_config.iter().map(|&(_, v)| v).sum();
            let (c, m) = (best.1 / subsets, best.1 % subsets + 1);
            Ok(OracleResult {
                operation: ast.to_string(),
                sizes: sizes.to_vec(),
                sigma: None,
                mode,
                max_value: best.0,
                achievers: build(c, m)?,
                cases,
                dominance_violations,
            })
        }
    }
}

/// Size bounds for random probe inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBounds {
    pub max_states: usize,
    pub max_letters: usize,
}

impl Default for ProbeBounds {
    fn default() -> Self {
        ProbeBounds { max_states: 3, max_letters: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    NoCounterexample { trials: usize },
    Counterexample {
        trial: usize,
        /// The `K_j`, over `source_alphabet` letters.
        inputs: Vec<Dfa>,
        /// `φ`: letter `a` of the target alphabet maps to `letter_map[a]`.
        letter_map: Vec<usize>,
        source_alphabet: usize,
    },
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }
}

/// A uniformly random complete DFA with initial state 0.
pub fn random_dfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: usize) -> Dfa {
    let delta = (0..states * alphabet).map(|_| rng.gen_range(0..states) as u32).collect();
    let finals: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(states, alphabet, delta, 0, &finals).expect("valid random table")
}

/// `{w}` over `alphabet` letters.
fn singleton(word: &[usize], alphabet: usize) -> Dfa {
    let n = word.len() + 2;
    let sink = n - 1;
    Dfa::from_fn(n, alphabet, 0, &[word.len()], |q, a| {
        if q < word.len() && word[q] == a {
            q + 1
        } else {
            sink
        }
    })
    .expect("valid singleton table")
}

/// Whether `ast(K φ⁻¹) = ast(K) φ⁻¹`.
pub fn commutes(ast: &OpAst, inputs: &[Dfa], letter_map: &[usize], limits: &Limits) -> Result<bool> {
    let pulled: Vec<Dfa> = inputs
        .iter()
        .map(|k| k.inverse_morphism(letter_map, letter_map.len()))
        .collect::<Result<_>>()?;
    let lhs = ast.eval(&pulled, limits)?;
    let rhs = ast.eval(inputs, limits)?.inverse_morphism(letter_map, letter_map.len())?;
    equivalent(&lhs, &rhs)
}

/// Randomized search for inputs `K` and a letter map `φ` violating
/// `ast(K φ⁻¹) = ast(K) φ⁻¹`. Trial 0 uses `K_0 = {ab}`, `K_j = {a}` for
/// `j ≥ 1` and `a, b ↦ b`.
pub fn uniformity_probe(
    ast: &OpAst,
    arity: usize,
    trials: usize,
    bounds: ProbeBounds,
    seed: u64,
    limits: &Limits,
) -> Result<Verdict> {
    let arity = arity.max(ast.arity()).max(1);
    if bounds.max_states == 0 || bounds.max_letters == 0 {
        return Err(Error::InvalidConfig("probe bounds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let (inputs, letter_map, source) = if trial == 0 {
            let mut k = vec![singleton(&[0, 1], 2)];
            k.extend((1..arity).map(|_| singleton(&[0], 2)));
            (k, vec![1, 1], 2)
        } else {
            let source = rng.gen_range(1..=bounds.max_letters);
            let target = rng.gen_range(1..=bounds.max_letters);
            let letter_map: Vec<usize> = (0..target).map(|_| rng.gen_range(0..source)).collect();
            let inputs = (0..arity)
                .map(|_| {
                    let n = rng.gen_range(1..=bounds.max_states);
                    random_dfa(&mut rng, n, source)
                })
                .collect();
            (inputs, letter_map, source)
        };
        if !commutes(ast, &inputs, &letter_map, limits)? {
            return Ok(Verdict::Counterexample { trial, inputs, letter_map, source_alphabet: source });
        }
    }
    Ok(Verdict::NoCounterexample { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse;

    fn opts() -> SweepOptions {
        SweepOptions::default()
    }

    #[test]
    fn reversal_sweep_small() {
        let ast = parse("(rev (in 0))").unwrap();
        for (n, want) in [(1, 1), (2, 4), (3, 8)] {
            let r = worst_case(&ast, &[n], &opts()).unwrap();
            assert_eq!(r.max_value, Some(want), "n={n}");
            assert_eq!(r.entries.len(), 2 * n);
            assert!(!r.partial);
        }
    }

    #[test]
    fn argmax_is_first_maximal_config() {
        let ast = parse("(in 0)").unwrap();
        let r = worst_case(&ast, &[3], &opts()).unwrap();
        assert_eq!(r.max_value, Some(3));
        // k = 0 collapses to the empty language; k = 1, l = 0 comes next
        assert_eq!(r.argmax, Some(WitnessConfig::unary(3, 1, false).unwrap()));
    }

    #[test]
    fn capped_entries_are_reported() {
        let ast = parse("(rev (in 0))").unwrap();
        let limits = Limits::default().with_max_subsets(3);
        let r = worst_case(&ast, &[3], &SweepOptions { limits, jobs: 1 }).unwrap();
        assert!(r.partial);
        assert!(r.entries.iter().any(|e| e.capped.is_some() && e.stc.is_none()));
        assert_eq!(r.entries.len(), 6);
    }

    #[test]
    fn letter_cap_is_an_error() {
        let ast = parse("(in 0)").unwrap();
        let limits = Limits::default().with_max_letters(26);
        assert!(matches!(
            worst_case(&ast, &[3], &SweepOptions { limits, jobs: 1 }),
            Err(Error::LetterLimit { .. })
        ));
    }

    #[test]
    fn report_json_is_stable_across_jobs() {
        let ast = parse("(star (in 0))").unwrap();
        let a = worst_case(&ast, &[3], &SweepOptions { limits: Limits::default(), jobs: 1 }).unwrap();
        let b = worst_case(&ast, &[3], &SweepOptions { limits: Limits::default(), jobs: 4 }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.to_table().contains("max: 6"));
    }

    #[test]
    fn budget_is_enforced() {
        let ast = parse("(in 0)").unwrap();
        assert!(matches!(
            brute_force_max(&ast, &[3], 2, OracleMode::AllDfas, 100, &Limits::default()),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn identity_oracle() {
        let ast = parse("(in 0)").unwrap();
        let r = brute_force_max(&ast, &[2], 1, OracleMode::AllDfas, 1 << 20, &Limits::default()).unwrap();
        assert_eq!(r.cases, 16);
        assert_eq!(r.max_value, 2);
        assert_eq!(r.achievers.len(), 1);
        let s = brute_force_max(&ast, &[2], 0, OracleMode::TransformationSubsets, 1 << 20, &Limits::default())
            .unwrap();
        assert_eq!(s.cases, 8 * 15);
        assert_eq!(s.max_value, 2);
        assert_eq!(s.dominance_violations, 0);
    }

    #[test]
    fn probe_is_deterministic() {
        let ast = parse("(half (in 0))").unwrap();
        let a = uniformity_probe(&ast, 1, 200, ProbeBounds::default(), 7, &Limits::default()).unwrap();
        let b = uniformity_probe(&ast, 1, 200, ProbeBounds::default(), 7, &Limits::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.is_counterexample());
    }

    #[test]
    fn seeded_quotient_trial() {
        let ast = parse("(lquo (in 1) (in 0))").unwrap();
        match uniformity_probe(&ast, 2, 1, ProbeBounds::default(), 0, &Limits::default()).unwrap() {
            Verdict::Counterexample { trial, letter_map, .. } => {
                assert_eq!(trial, 0);
                assert_eq!(letter_map, vec![1, 1]);
            }
            v => panic!("expected counterexample, got {v:?}"),
        }
    }
}
