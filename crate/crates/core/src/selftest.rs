//! Randomised end-to-end checks: generate, complement, compare on lassos,
//! and test exact disjointness of the input and its complement.
//!
//! Instances run in parallel but the report only depends on the seed and the
//! configuration: records are collected in instance order and contain no
//! timings.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{is_empty, xor_suite};
use crate::pipeline::{dispatch, ComplementOptions, Route};
use crate::random::{random_automaton, GenParams, RandomClass};
use crate::transform::{product, ProductMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestConfig {
    pub classes: Vec<RandomClass>,
    pub count: u64,
    pub seed: u64,
    pub params: GenParams,
    pub max_u: usize,
    pub max_v: usize,
    pub options: ComplementOptions,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            classes: RandomClass::ALL.to_vec(),
            count: 50,
            seed: 1,
            params: GenParams::default(),
            max_u: 2,
            max_v: 3,
            options: ComplementOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Budget,
    Error,
}

/// The outcome for one generated automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceRecord {
    pub class: RandomClass,
    pub index: u64,
    pub states: usize,
    pub colours: u32,
    pub acceptance: String,
    pub route: Option<Route>,
    pub complement_states: Option<usize>,
    pub lassos: usize,
    /// Lassos on which the input and its complement agree.
    pub xor_violations: Vec<String>,
    pub disjoint: Option<bool>,
    pub size_violations: Vec<String>,
    pub status: Status,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub class: RandomClass,
    pub instances: usize,
    pub ok: usize,
    pub violations: usize,
    pub budget: usize,
    pub errors: usize,
    pub max_complement_states: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub records: Vec<InstanceRecord>,
    pub summaries: Vec<ClassSummary>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Ok)
    }

    pub fn has_budget_failures(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Budget)
    }

    /// One line per failing instance plus one summary line per class.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in self.records.iter().filter(|r| r.status != Status::Ok) {
            let _ = write!(out, "{} #{}: {:?}", r.class, r.index, r.status);
            if let Some(w) = r.xor_violations.first() {
                let _ = write!(out, " lasso {w}");
            }
            if r.disjoint == Some(false) {
                out.push_str(" not disjoint");
            }
            for v in &r.size_violations {
                let _ = write!(out, " size: {v}");
            }
            if let Some(e) = &r.error {
                let _ = write!(out, " error: {e}");
            }
            out.push('\n');
        }
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{:<9} {:>3} instances  ok {:>3}  violations {}  budget {}  errors {}  max states {}",
                s.class.name(),
                s.instances,
                s.ok,
                s.violations,
                s.budget,
                s.errors,
                s.max_complement_states
            );
        }
        let _ = writeln!(out, "seed {}: {}", self.seed, if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    /// One JSON object per record, then one per class summary.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialise"));
            out.push('\n');
        }
        for s in &self.summaries {
            out.push_str(&serde_json::to_string(s).expect("summaries serialise"));
            out.push('\n');
        }
        out
    }
}

/// Runs one instance; generation errors are reported, not propagated.
pub fn run_instance(cfg: &SelftestConfig, class: RandomClass, index: u64) -> InstanceRecord {
    let mut rec = InstanceRecord {
        class,
        index,
        states: 0,
        colours: 0,
        acceptance: String::new(),
        route: None,
        complement_states: None,
        lassos: 0,
        xor_violations: vec![],
        disjoint: None,
        size_violations: vec![],
        status: Status::Ok,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let a = random_automaton(cfg.seed, class, index, cfg.params)?;
        rec.states = a.num_states();
        rec.colours = a.num_colours();
        rec.acceptance = a.acceptance().to_string();
        let (c, report) = dispatch(&a, &cfg.options)?;
        rec.route = Some(report.route);
        rec.complement_states = Some(c.num_states());
        rec.size_violations = report.violations();
        let xor = xor_suite(&a, &c, cfg.max_u, cfg.max_v)?;
        rec.lassos = xor.checked;
        rec.xor_violations = xor.violations.iter().map(|w| w.to_string()).collect();
        rec.disjoint = Some(is_empty(&product(&a, &c, ProductMode::Reachable)?)?);
        Ok(())
    })();
    match outcome {
        Err(Error::BudgetExceeded(_)) => rec.status = Status::Budget,
        Err(e) => {
            rec.status = Status::Error;
            rec.error = Some(e.to_string());
        }
        Ok(()) => {
            if !rec.xor_violations.is_empty() || rec.disjoint == Some(false) || !rec.size_violations.is_empty() {
                rec.status = Status::Violation;
            }
        }
    }
    rec
}

pub fn run_selftest(cfg: &SelftestConfig) -> Result<SelftestReport> {
    cfg.options.validate()?;
    let jobs: Vec<(RandomClass, u64)> =
        cfg.classes.iter().flat_map(|&c| (0..cfg.count).map(move |i| (c, i))).collect();
    let records: Vec<InstanceRecord> = jobs.par_iter().map(|&(c, i)| run_instance(cfg, c, i)).collect();
    let summaries = cfg
        .classes
        .iter()
        .map(|&class| {
            let rs: Vec<_> = records.iter().filter(|r| r.class == class).collect();
            let count = |s| rs.iter().filter(|r| r.status == s).count();
            ClassSummary {
                class,
                instances: rs.len(),
                ok: count(Status::Ok),
                violations: count(Status::Violation),
                budget: count(Status::Budget),
                errors: count(Status::Error),
                max_complement_states: rs.iter().filter_map(|r| r.complement_states).max().unwrap_or(0),
            }
        })
        .collect();
    Ok(SelftestReport { seed: cfg.seed, records, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_reproducible() {
        let cfg = SelftestConfig { count: 4, ..Default::default() };
        let a = run_selftest(&cfg).unwrap();
        assert!(a.passed(), "{}", a.to_text());
        let b = run_selftest(&cfg).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        assert_eq!(a.to_json_lines().lines().count(), 8 * 4 + 8);
    }
}
