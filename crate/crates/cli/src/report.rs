//! The summary printed by `decide`, `solve` and `system`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use hypersack::knapsack::SolveStats;
use hypersack::semilinear::Valuation;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Answer {
    Decided(bool),
    /// Path of the written semilinear set.
    File(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub stage: String,
    pub ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub command: String,
    pub group: String,
    pub expression: String,
    pub answer: Option<Answer>,
    /// Present only after the witness passed verification.
    pub witness: Option<Valuation>,
    pub magnitude: Option<u64>,
    pub components: Option<usize>,
    pub route: Option<String>,
    pub bound: Option<u64>,
    /// Stages in execution order.
    pub timings: Vec<Timing>,
    pub case_counts: BTreeMap<String, u64>,
    pub max_recursion_depth: Option<usize>,
    pub stats: Option<SolveStats>,
}

impl RunReport {
    pub fn new(command: &str, group: &str, expression: &str) -> Self {
        RunReport {
            command: command.to_owned(),
            group: group.to_owned(),
            expression: expression.to_owned(),
            ..Self::default()
        }
    }

    /// Runs `f`, recording its wall time under `stage`.
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(Timing {
            stage: stage.to_owned(),
            ms: start.elapsed().as_secs_f64() * 1e3,
        });
        out
    }

    pub fn absorb_stats(&mut self, stats: SolveStats) {
        self.case_counts = stats.case_counts.clone();
        self.max_recursion_depth = Some(stats.max_recursion_depth);
        self.stats = Some(stats);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.answer {
            Some(Answer::Decided(true)) => writeln!(f, "yes")?,
            Some(Answer::Decided(false)) => writeln!(f, "no")?,
            Some(Answer::File(p)) => writeln!(f, "solution set written to {p}")?,
            None => {}
        }
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {w}")?;
        }
        if let Some(r) = &self.route {
            write!(f, "route: {r}")?;
            match self.bound {
                Some(b) => writeln!(f, " (bound {b})")?,
                None => writeln!(f)?,
            }
        }
        if let Some(m) = self.magnitude {
            writeln!(f, "magnitude: {m}")?;
        }
        if let Some(c) = self.components {
            writeln!(f, "components: {c}")?;
        }
        if let Some(d) = self.max_recursion_depth {
            writeln!(f, "recursion depth: {d}")?;
        }
        let cases: Vec<String> = self
            .case_counts
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|(c, n)| format!("{c}:{n}"))
            .collect();
        if !cases.is_empty() {
            writeln!(f, "case splits: {}", cases.join(" "))?;
        }
        let times: Vec<String> = self.timings.iter().map(|t| format!("{} {:.1}ms", t.stage, t.ms)).collect();
        if !times.is_empty() {
            writeln!(f, "timings: {}", times.join(", "))?;
        }
        Ok(())
    }
}
