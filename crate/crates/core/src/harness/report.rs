//! Check rows and suite reports.

use std::collections::BTreeMap;
use std::fmt;

use crate::rational::{to_f64, Q};

/// How a row compares its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

/// Zero for exact rational checks, otherwise an absolute float slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Exact,
    Abs(f64),
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Exact => f.write_str("exact"),
            Tolerance::Abs(t) => write!(f, "abs {t:e}"),
        }
    }
}

/// One checked relation `lhs (=|≤|<) rhs`. `margin` is `rhs − lhs`
/// (for equalities, minus the absolute difference).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scenario: String,
    pub rank: usize,
    pub seed: u64,
    pub lhs: String,
    pub rhs: String,
    pub margin: f64,
    pub witness: String,
    pub tolerance: Tolerance,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<Row>,
    /// Skipped samples and reported statistics.
    pub notes: Vec<String>,
}

/// Per-scenario aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    pub scenario: String,
    pub checks: usize,
    pub failures: usize,
    pub min_margin: f64,
    pub tolerance: Tolerance,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), ..Default::default() }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn exact(&mut self, scenario: &str, rank: usize, seed: u64, lhs: &Q, rel: Relation, rhs: &Q, witness: String) {
        let pass = match rel {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
        };
        let diff = to_f64(&(rhs - lhs));
        let margin = if rel == Relation::Eq { 0.0 - diff.abs() } else { diff };
        self.rows.push(Row {
            scenario: scenario.to_string(),
            rank,
            seed,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            margin,
            witness,
            tolerance: Tolerance::Exact,
            pass,
        });
    }

    #[allow(clippy::too_many_arguments)]
    pub fn float(
        &mut self,
        scenario: &str,
        rank: usize,
        seed: u64,
        lhs: f64,
        rel: Relation,
        rhs: f64,
        tol: f64,
        witness: String,
    ) {
        let diff = rhs - lhs;
        let pass = match rel {
            Relation::Eq => diff.abs() <= tol,
            Relation::Le => diff >= -tol,
            Relation::Lt => diff > 0.0,
        };
        let margin = if rel == Relation::Eq { 0.0 - diff.abs() } else { diff };
        self.rows.push(Row {
            scenario: scenario.to_string(),
            rank,
            seed,
            lhs: format!("{lhs:.12e}"),
            rhs: format!("{rhs:.12e}"),
            margin,
            witness,
            tolerance: Tolerance::Abs(tol),
            pass,
        });
    }

    /// A boolean check rendered as a row.
    pub fn flag(&mut self, scenario: &str, rank: usize, seed: u64, ok: bool, witness: String) {
        self.rows.push(Row {
            scenario: scenario.to_string(),
            rank,
            seed,
            lhs: ok.to_string(),
            rhs: "true".to_string(),
            margin: if ok { 0.0 } else { -1.0 },
            witness,
            tolerance: Tolerance::Exact,
            pass: ok,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    /// Nonempty and every row passes.
    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    pub fn rows_of<'a>(&'a self, scenario: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.scenario == scenario)
    }

    /// Scenarios in first-appearance order.
    pub fn summaries(&self) -> Vec<ScenarioSummary> {
        let mut order = Vec::new();
        let mut map: BTreeMap<&str, ScenarioSummary> = BTreeMap::new();
        for r in &self.rows {
            let s = map.entry(&r.scenario).or_insert_with(|| {
                order.push(r.scenario.clone());
                ScenarioSummary {
                    scenario: r.scenario.clone(),
                    checks: 0,
                    failures: 0,
                    min_margin: f64::INFINITY,
                    tolerance: r.tolerance,
                }
            });
            s.checks += 1;
            s.failures += usize::from(!r.pass);
            s.min_margin = s.min_margin.min(r.margin);
        }
        order.iter().map(|n| map[n.as_str()].clone()).collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "[{status}] suite {} ({} checks)", self.suite, self.rows.len())?;
        for s in self.summaries() {
            let mark = if s.failures == 0 { "ok  " } else { "FAIL" };
            writeln!(
                f,
                "  {mark} {:<32} checks {:>6}  failures {:>4}  min margin {:>12.4e}  tolerance {}",
                s.scenario, s.checks, s.failures, s.min_margin, s.tolerance
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        for r in self.failures().iter().take(10) {
            writeln!(f, "  failed {} rank {} seed {}: {} vs {} ({})", r.scenario, r.rank, r.seed, r.lhs, r.rhs, r.witness)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn empty_reports_do_not_pass() {
        let mut r = SuiteReport::new("t");
        assert!(!r.passed());
        r.exact("a", 2, 0, &q(1, 2), Relation::Le, &q(1, 2), String::new());
        r.float("b", 2, 0, 1.0, Relation::Eq, 1.0 + 1e-12, 1e-9, String::new());
        assert!(r.passed());
        r.exact("a", 2, 1, &q(1, 2), Relation::Lt, &q(1, 2), String::new());
        assert!(!r.passed());
        let s = r.summaries();
        assert_eq!((s[0].checks, s[0].failures), (2, 1));
        assert_eq!(s[1].tolerance, Tolerance::Abs(1e-9));
    }
}
