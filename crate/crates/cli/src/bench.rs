//! Corpus benchmark: solve every instance, compare with brute force and
//! with the grid route, and time a large identity-membership query.

use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use hypersack::automata::{acyclic_membership, grid_nfa};
use hypersack::groups::{ConstantsConfig, Group, GroupSpec, Knobs};
use hypersack::knapsack::{KnapsackError, Route, Solver};
use hypersack::oracle::{brute_solve, verify};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Box enumeration equals brute force.
    Agree,
    Mismatch,
    /// No full solve for this group; the grid route was checked instead.
    GridOnly,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub origin: String,
    pub group: String,
    pub expr: String,
    pub depth: usize,
    pub size: usize,
    pub solve_ms: f64,
    pub oracle_ms: f64,
    pub magnitude: Option<u64>,
    pub solutions_in_box: usize,
    pub verdict: Verdict,
    /// Grid route with `p = magnitude + 1` (or the box bound) agrees on satisfiability.
    pub routes_agree: Option<bool>,
    pub detail: Option<String>,
}

impl Row {
    pub fn ok(&self) -> bool {
        matches!(self.verdict, Verdict::Agree | Verdict::GridOnly) && self.routes_agree != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipTiming {
    pub states: usize,
    pub accepted: bool,
    pub ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub rows: Vec<Row>,
    pub membership: Option<MembershipTiming>,
    pub total_ms: f64,
}

impl BenchReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<16} {:<22} {:>3} {:>3} {:>10} {:>10} {:>5} {:>5} {:<9} {:<6} expression",
            "instance", "group", "k", "|E|", "solve_ms", "oracle_ms", "mag", "#box", "oracle", "routes"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<16} {:<22} {:>3} {:>3} {:>10.2} {:>10.2} {:>5} {:>5} {:<9} {:<6} {}",
                r.origin,
                r.group,
                r.depth,
                r.size,
                r.solve_ms,
                r.oracle_ms,
                r.magnitude.map_or("-".into(), |m| m.to_string()),
                r.solutions_in_box,
                match r.verdict {
                    Verdict::Agree => "agree",
                    Verdict::Mismatch => "MISMATCH",
                    Verdict::GridOnly => "grid",
                    Verdict::Error => "ERROR",
                },
                match r.routes_agree {
                    Some(true) => "agree",
                    Some(false) => "DIFFER",
                    None => "-",
                },
                r.expr
            );
            if let Some(d) = &r.detail {
                let _ = writeln!(s, "    {d}");
            }
        }
        if let Some(m) = &self.membership {
            let _ = writeln!(
                s,
                "membership: {}-state grid automaton over F2, accepted={}, {:.1} ms",
                m.states, m.accepted, m.ms
            );
        }
        let bad = self.rows.iter().filter(|r| !r.ok()).count();
        let _ = writeln!(
            s,
            "{} instances, {} failing, {:.1} s total",
            self.rows.len(),
            bad,
            self.total_ms / 1e3
        );
        s
    }
}

/// Solves one instance and checks it against brute force in `[0, bound]^k`.
pub fn run_instance(inst: &Instance, corpus: &Corpus, config: ConstantsConfig, bound: u64) -> Row {
    let mut row = Row {
        origin: inst.origin.clone(),
        group: inst.group.clone(),
        expr: inst.expr.clone(),
        depth: 0,
        size: 0,
        solve_ms: 0.0,
        oracle_ms: 0.0,
        magnitude: None,
        solutions_in_box: 0,
        verdict: Verdict::Error,
        routes_agree: None,
        detail: None,
    };
    if let Err(e) = check(inst, corpus, config, bound, &mut row) {
        row.verdict = Verdict::Error;
        row.detail = Some(format!("{e:#}"));
    }
    row
}

fn check(inst: &Instance, corpus: &Corpus, config: ConstantsConfig, bound: u64, row: &mut Row) -> Result<()> {
    let (group, e) = inst.load(&corpus.dir, config)?;
    row.depth = e.depth();
    row.size = e.size();
    let solver = Solver::with_options(group.clone(), Default::default());

    let start = Instant::now();
    let want = brute_solve(&group, e.expr(), bound)?;
    row.oracle_ms = start.elapsed().as_secs_f64() * 1e3;
    row.solutions_in_box = want.len();

    let start = Instant::now();
    let set = match solver.solve(&e) {
        Ok(s) => s,
        Err(KnapsackError::Unsupported(_)) => {
            let d = solver.decide(&e, Route::Grid, Some(bound))?;
            row.solve_ms = start.elapsed().as_secs_f64() * 1e3;
            row.verdict = Verdict::GridOnly;
            row.routes_agree = Some(d.answer == !want.is_empty());
            return Ok(());
        }
        Err(err) => return Err(err.into()),
    };
    row.solve_ms = start.elapsed().as_secs_f64() * 1e3;
    row.magnitude = Some(set.magnitude());

    let got = set.enumerate_box(bound);
    let unsound: Vec<_> = got.iter().filter(|nu| !verify(&group, e.expr(), nu).unwrap_or(false)).collect();
    row.verdict = if got == want && unsound.is_empty() {
        Verdict::Agree
    } else {
        let missing = want.difference(&got).next();
        let extra = got.difference(&want).next();
        row.detail = Some(format!("missing {missing:?}, extra {extra:?}"));
        Verdict::Mismatch
    };
    if let Some(w) = set.smallest_offset() {
        if !verify(&group, e.expr(), &w)? {
            row.verdict = Verdict::Mismatch;
            row.detail = Some(format!("witness {w} does not verify"));
        }
    }
    let grid = solver.decide(&e, Route::Grid, Some(set.magnitude() + 1))?;
    row.routes_agree = Some(grid.answer == !set.is_empty());
    Ok(())
}

/// Times identity membership for a grid automaton with `states` states
/// (rounded to a multiple of 5) over F2.
pub fn membership_timing(states: usize) -> Result<MembershipTiming> {
    let g = Group::free(2);
    let e = hypersack::knapsack::KnapsackExpression::parse(&g, "[a b]^x1 a [b a^-1]^x2 b^-1 [a^-1 b^-1]^x3 [a b^-1]^x4 b a")?;
    let factors: Vec<_> = e.factors().iter().map(|f| (f.u.clone(), f.v.clone())).collect();
    let p = (states / (factors.len() + 1)).max(1) as u64 - 1;
    let grid = grid_nfa(&factors, p);
    let start = Instant::now();
    let hit = acyclic_membership(&g, &grid.nfa)?;
    Ok(MembershipTiming {
        states: grid.nfa.states,
        accepted: hit.is_some(),
        ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run(corpus: &Corpus, extra: &[Instance], config: ConstantsConfig, bound: u64, membership_states: Option<usize>) -> Result<BenchReport> {
    let start = Instant::now();
    let all: Vec<&Instance> = corpus.instances.iter().chain(extra).collect();
    let rows: Vec<Row> = all.par_iter().map(|i| run_instance(i, corpus, config, bound)).collect();
    let membership = membership_states.map(membership_timing).transpose()?;
    Ok(BenchReport {
        rows,
        membership,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// The constants section a group's knobs come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Free,
    Finite,
    FreeProduct,
}

pub fn backend(spec: &GroupSpec) -> Backend {
    match spec {
        GroupSpec::Free(_) => Backend::Free,
        GroupSpec::Finite { .. } => Backend::Finite,
        GroupSpec::FreeProduct(..) => Backend::FreeProduct,
        GroupSpec::DirectZ(inner) => backend(inner),
    }
}

fn with_knobs(base: ConstantsConfig, b: Backend, k: Knobs) -> ConstantsConfig {
    let mut c = base;
    match b {
        Backend::Free => c.free = k,
        Backend::Finite => c.finite = k,
        Backend::FreeProduct => c.free_product = k,
    }
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub backend: Backend,
    pub instances: usize,
    /// `(kappa, gamma, xi)` tried, with the number of failing instances.
    pub tried: Vec<((u64, u64, u64), usize)>,
    pub chosen: Option<(u64, u64, u64)>,
}

/// For each backend, the cheapest `(κ, γ, ξ)` under which every corpus
/// instance of that backend agrees with brute force.
pub fn calibrate(corpus: &Corpus, extra: &[Instance], bound: u64) -> Result<Vec<Calibration>> {
    let base = ConstantsConfig::default();
    let mut candidates = Vec::new();
    for xi in 0..=1 {
        for gamma in 1..=3 {
            for kappa in 0..=1 {
                candidates.push(Knobs { kappa, gamma, xi });
            }
        }
    }
    let all: Vec<&Instance> = corpus.instances.iter().chain(extra).collect();
    let mut out = Vec::new();
    for b in [Backend::Free, Backend::Finite, Backend::FreeProduct] {
        let mine: Vec<&Instance> = all
            .iter()
            .copied()
            .filter(|i| {
                i.load(&corpus.dir, base)
                    .map(|(g, _)| backend(g.spec()) == b && supports(&g))
                    .unwrap_or(false)
            })
            .collect();
        let mut cal = Calibration {
            backend: b,
            instances: mine.len(),
            tried: Vec::new(),
            chosen: None,
        };
        for k in &candidates {
            let config = with_knobs(base, b, *k);
            let failing = mine
                .par_iter()
                .filter(|i| !run_instance(i, corpus, config, bound).ok())
                .count();
            cal.tried.push(((k.kappa, k.gamma, k.xi), failing));
            if failing == 0 {
                cal.chosen = Some((k.kappa, k.gamma, k.xi));
                break;
            }
        }
        out.push(cal);
    }
    Ok(out)
}

fn supports(g: &Group) -> bool {
    Solver::new(g.clone()).supports_solve()
}

pub fn calibration_table(cals: &[Calibration]) -> String {
    let mut s = String::new();
    for c in cals {
        let _ = writeln!(s, "{:?}: {} instances", c.backend, c.instances);
        for ((k, g, x), failing) in &c.tried {
            let _ = writeln!(s, "  kappa={k} gamma={g} xi={x}: {failing} failing");
        }
        match c.chosen {
            Some((k, g, x)) => {
                let _ = writeln!(s, "  chosen: kappa={k} gamma={g} xi={x}");
            }
            None => {
                let _ = writeln!(s, "  no candidate passed");
            }
        }
    }
    s
}
