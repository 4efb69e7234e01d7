//! Golden checks of sweep results against known closed forms.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::ast::{parse, OpAst};
use crate::engine::{worst_case, ScReport, SweepOptions};
use crate::error::{Error, Result};
use crate::ops::BooleanFn;
use crate::witness::WitnessConfig;

pub const SUITES: [&str; 4] = ["reversal", "star", "boolean", "nonuniform"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: impl Into<String>, expected: impl fmt::Display, actual: impl fmt::Display, pass: bool) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    fn expect_eq(&mut self, name: impl Into<String>, expected: usize, actual: Option<usize>) {
        let shown = actual.map_or_else(|| "capped".to_string(), |v| v.to_string());
        self.push(name, expected, shown, actual == Some(expected));
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}  {:<width$}  expected {:>6}  actual {:>6}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.actual
            );
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(out, "{}: {} checks, {failed} failed", self.suite, self.checks.len());
        out
    }
}

/// Closed-form `stc(L*)` for `1 ≤ k ≤ n-1`, excluding `F = {i}`.
pub fn star_formula(n: usize, k: usize, initial_final: bool) -> usize {
    let p = |e: usize| 1usize << e;
    if initial_final {
        (p(n - k) - 1) + p(n - 1)
    } else {
        (p(n - k) - 1) + (p(n - 1) - p(n - k - 1)) + 1
    }
}

fn config_label(c: &WitnessConfig) -> String {
    format!("n={:?} k={:?} l={:?}", c.sizes, c.finals, c.l_vector())
}

fn sweep(text: &str, sizes: &[usize], options: &SweepOptions) -> Result<(OpAst, ScReport)> {
    let ast = parse(text)?;
    let report = worst_case(&ast, sizes, options)?;
    Ok((ast, report))
}

pub fn reversal(options: &SweepOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport { suite: "reversal".into(), checks: vec![] };
    for n in 1..=4 {
        let (_, rep) = sweep("(rev (in 0))", &[n], options)?;
        let want = if n == 1 { 1 } else { 1 << n };
        r.expect_eq(format!("rev max n={n}"), want, rep.max_value);
    }
    Ok(r)
}

pub fn star(options: &SweepOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport { suite: "star".into(), checks: vec![] };
    for n in 2..=4 {
        let (_, rep) = sweep("(star (in 0))", &[n], options)?;
        let (_, id) = sweep("(in 0)", &[n], options)?;
        for e in &rep.entries {
            let (k, l) = (e.config.finals[0], e.config.initial_final[0]);
            if k == 0 || k >= n {
                continue;
            }
            let label = format!("star {}", config_label(&e.config));
            if l && k == 1 {
                let base = id.entry(&e.config).and_then(|x| x.stc);
                let shown = base.map_or_else(|| "capped".to_string(), |v| v.to_string());
                let actual = e.stc.map_or_else(|| "capped".to_string(), |v| v.to_string());
                r.push(format!("{label} (F={{i}})"), shown, actual, e.stc.is_some() && e.stc == base);
            } else {
                r.expect_eq(label, star_formula(n, k, l), e.stc);
            }
        }
        if n == 4 {
            r.expect_eq("star max n=4", 12, rep.max_value);
        }
    }
    Ok(r)
}

pub fn boolean(options: &SweepOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport { suite: "boolean".into(), checks: vec![] };
    for sizes in [[2, 2], [2, 3], [3, 3]] {
        for name in ["or", "and", "xor"] {
            let (_, rep) = sweep(&format!("({name} (in 0) (in 1))"), &sizes, options)?;
            r.expect_eq(format!("{name} {sizes:?}"), sizes[0] * sizes[1], rep.max_value);
        }
        for table in ["0011", "0101", "1111", "0000"] {
            let f = BooleanFn::parse(table)?;
            let (_, rep) = sweep(&format!("(bool \"{table}\" (in 0) (in 1))"), &sizes, options)?;
            r.expect_eq(format!("bool {table} {sizes:?}"), f.bound(&sizes), rep.max_value);
        }
    }
    Ok(r)
}

pub fn nonuniform(options: &SweepOptions) -> Result<SuiteReport> {
    let mut r = SuiteReport { suite: "nonuniform".into(), checks: vec![] };
    for n in 1..=4 {
        let (_, rep) = sweep("(half (in 0))", &[n], options)?;
        for e in rep.entries.iter().filter(|e| e.config.finals[0] >= 1) {
            let actual = e.stc.map_or_else(|| "capped".to_string(), |v| v.to_string());
            r.push(format!("half {}", config_label(&e.config)), "<= 2", actual, e.stc.is_some_and(|v| v <= 2));
        }
    }
    for sizes in [[1, 1], [1, 2], [2, 1], [2, 2]] {
        let (_, rep) = sweep("(del (in 0) (in 1))", &sizes, options)?;
        for e in rep.entries.iter().filter(|e| e.config.finals.iter().all(|&k| k >= 1)) {
            r.expect_eq(format!("del {}", config_label(&e.config)), 1, e.stc);
        }
    }
    Ok(r)
}

pub fn run_suite(name: &str, options: &SweepOptions) -> Result<SuiteReport> {
    match name {
        "reversal" => reversal(options),
        "star" => star(options),
        "boolean" => boolean(options),
        "nonuniform" => nonuniform(options),
        other => Err(Error::InvalidConfig(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}
