use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::base::{solve_depth1, solve_depth2};
use super::formula::SolutionFormula;
use super::normalize::{positivity_split, quasigeodesify, Branch};
use super::polygon::{split_polygon, CASE_NAMES};
use super::{ExponentExpression, KnapsackError, KnapsackExpression};
use crate::automata::{acyclic_membership_with_cap, grid_nfa, Depth2Params, DEFAULT_STATE_CAP};
use crate::groups::{Group, GroupSpec, HyperbolicConstants, Word};
use crate::oracle;
use crate::semilinear::{SemilinearSet, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Emptiness of the computed solution set.
    Semilinear,
    /// Identity membership in the grid automaton with a bound on exponents.
    Grid,
    /// Semilinear when the group supports it, grid otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Overrides the splitting radius `h` otherwise derived from `ξ`.
    pub h: Option<u64>,
    /// Cap on elements per automaton state in the grid route.
    pub state_cap: usize,
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            h: None,
            state_cap: DEFAULT_STATE_CAP,
            parallel: true,
        }
    }
}

/// Counters gathered while solving.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub branches: u64,
    pub depth1_calls: u64,
    pub depth2_calls: u64,
    pub cache_hits: u64,
    pub polygon_splits: u64,
    pub case_counts: BTreeMap<String, u64>,
    pub subequations_solved: u64,
    pub max_recursion_depth: usize,
    pub normalize_ms: u128,
    pub recursion_ms: u128,
}

impl SolveStats {
    fn absorb(&mut self, o: &SolveStats) {
        self.branches += o.branches;
        self.depth1_calls += o.depth1_calls;
        self.depth2_calls += o.depth2_calls;
        self.cache_hits += o.cache_hits;
        self.polygon_splits += o.polygon_splits;
        for (k, v) in &o.case_counts {
            *self.case_counts.entry(k.clone()).or_insert(0) += v;
        }
        self.subequations_solved += o.subequations_solved;
        self.max_recursion_depth = self.max_recursion_depth.max(o.max_recursion_depth);
        self.normalize_ms += o.normalize_ms;
        self.recursion_ms += o.recursion_ms;
    }
}

/// Answer of [`Solver::decide`]; a witness is always re-verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub answer: bool,
    pub witness: Option<Valuation>,
    pub route: Route,
    /// Magnitude of the solution set when the semilinear route ran.
    pub magnitude: Option<u64>,
    /// Exponent bound used by the grid route.
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSolution {
    pub set: SemilinearSet,
    pub witness: Option<Valuation>,
}

/// Canonical memo key: the words of a head-free expression plus `(λ, ε)`.
type MemoKey = (Vec<(Word, Word)>, Word, u64, u64);

/// Quasigeodesicity constants of the powers being solved.
#[derive(Clone, Copy, Debug)]
struct Quasi {
    lambda: u64,
    epsilon: u64,
}

pub struct Solver {
    group: Group,
    options: SolverOptions,
    memo: Mutex<HashMap<MemoKey, SemilinearSet>>,
    stats: Mutex<SolveStats>,
}

fn canonical_name(i: usize) -> String {
    format!("#{i}")
}

impl Solver {
    pub fn new(group: Group) -> Self {
        Self::with_options(group, SolverOptions::default())
    }

    pub fn with_options(group: Group, options: SolverOptions) -> Self {
        Solver {
            group,
            options,
            memo: Mutex::new(HashMap::new()),
            stats: Mutex::new(SolveStats::default()),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn stats(&self) -> SolveStats {
        self.stats.lock().expect("stats lock").clone()
    }

    fn bump(&self, f: impl FnOnce(&mut SolveStats)) {
        f(&mut self.stats.lock().expect("stats lock"));
    }

    /// Whether [`Solver::solve`] computes full solution sets for this group.
    pub fn supports_solve(&self) -> bool {
        fn ok(s: &GroupSpec) -> bool {
            match s {
                GroupSpec::DirectZ(inner) => ok(inner),
                other => !other.contains_direct_z(),
            }
        }
        ok(self.group.spec())
    }

    /// The full solution set of `E`.
    pub fn solve(&self, e: &KnapsackExpression) -> Result<SemilinearSet, KnapsackError> {
        for f in e.factors() {
            self.group.check_word(&f.u)?;
            self.group.check_word(&f.v)?;
        }
        self.group.check_word(e.head())?;
        let set = match self.group.spec() {
            GroupSpec::DirectZ(_) => self.solve_direct_z(e)?,
            _ if !self.group.is_hyperbolic() => {
                return Err(KnapsackError::Unsupported(format!(
                    "full solution sets over {} (a free product with a × ℤ factor) are not computed; use the grid route with a bound",
                    self.group.spec()
                )))
            }
            _ => self.solve_hyperbolic(e)?,
        };
        log::debug!(
            "solved |E| = {}, depth {}: {} components, magnitude {}",
            e.size(),
            e.depth(),
            set.num_components(),
            set.magnitude()
        );
        Ok(set)
    }

    /// `G × ℤ`: the `G`-projection's solutions on the hyperplane where the
    /// `t`-exponents cancel.
    fn solve_direct_z(&self, e: &KnapsackExpression) -> Result<SemilinearSet, KnapsackError> {
        let (inner, t) = self.group.direct_z_parts().expect("direct product");
        let t_inv = self.group.inverse_letter(t);
        let strip = |w: &[u16]| -> (Word, i64) {
            let mut out = Vec::with_capacity(w.len());
            let mut exp = 0i64;
            for &l in w {
                if l == t {
                    exp += 1;
                } else if l == t_inv {
                    exp -= 1;
                } else {
                    out.push(l);
                }
            }
            (out, exp)
        };
        let (head, mut constant) = strip(e.head());
        let mut coeffs = BTreeMap::new();
        let mut projected = ExponentExpression {
            head,
            factors: Vec::new(),
        };
        for f in e.factors() {
            let (u, a) = strip(&f.u);
            let (v, c) = strip(&f.v);
            constant += c;
            coeffs.insert(f.var.clone(), a);
            projected.factors.push(super::Factor {
                u,
                var: f.var.clone(),
                v,
            });
        }
        let sub = Solver::with_options(inner, self.options.clone());
        let set = sub.solve(&KnapsackExpression::new(projected)?)?;
        self.bump(|s| s.absorb(&sub.stats()));
        Ok(set.intersect_equation(&coeffs, -constant)?)
    }

    fn solve_hyperbolic(&self, e: &KnapsackExpression) -> Result<SemilinearSet, KnapsackError> {
        let start = Instant::now();
        let branches = quasigeodesify(&self.group, e)?;
        let normalize_ms = start.elapsed().as_millis();
        self.bump(|s| {
            s.branches += branches.len() as u64;
            s.normalize_ms += normalize_ms;
        });
        let start = Instant::now();
        let parts = self.map(&branches, |b| self.solve_branch_full(b))?;
        self.bump(|s| s.recursion_ms += start.elapsed().as_millis());
        let vars = e.variables();
        let mut sorted = vars.clone();
        sorted.sort();
        Ok(SemilinearSet::union_all(&sorted, &parts)?)
    }

    /// `(scale · sol(E_i) + shift) ⊕ congruences` for one normalization branch.
    pub fn solve_branch_full(&self, b: &Branch) -> Result<SemilinearSet, KnapsackError> {
        let core = self.solve_branch(b)?;
        let mut set = core.scale_shift(&b.normalized.scale, &b.normalized.shift)?;
        for c in &b.congruences {
            set = set.oplus(&c.to_set())?;
        }
        Ok(set)
    }

    /// `sol(E_i)` for the normalized expression of a branch.
    pub fn solve_branch(&self, b: &Branch) -> Result<SemilinearSet, KnapsackError> {
        let q = Quasi {
            lambda: b.normalized.lambda,
            epsilon: b.normalized.epsilon,
        };
        self.solve_rec(&b.normalized.expr, q, 1, b.normalized.expr.depth().max(1))
    }

    fn map<T: Sync, R: Send>(
        &self,
        items: &[T],
        f: impl Fn(&T) -> Result<R, KnapsackError> + Sync + Send,
    ) -> Result<Vec<R>, KnapsackError> {
        if self.options.parallel {
            items.par_iter().map(f).collect()
        } else {
            items.iter().map(f).collect()
        }
    }

    fn constants(&self) -> Result<HyperbolicConstants, KnapsackError> {
        Ok(self.group.constants()?)
    }

    /// Full solution set of an expression whose powers all have infinite
    /// order and `(λ, ε)`-quasigeodesic powers.
    fn solve_rec(&self, e: &KnapsackExpression, q: Quasi, level: usize, max_level: usize) -> Result<SemilinearSet, KnapsackError> {
        assert!(level <= max_level, "recursion depth {level} exceeds the input depth {max_level}");
        self.bump(|s| s.max_recursion_depth = s.max_recursion_depth.max(level));
        let e = e.reduced(&self.group);
        let key: MemoKey = (
            e.factors().iter().map(|f| (f.u.clone(), f.v.clone())).collect(),
            e.head().to_vec(),
            q.lambda,
            q.epsilon,
        );
        let rename: BTreeMap<String, String> = e
            .factors()
            .iter()
            .enumerate()
            .map(|(i, f)| (canonical_name(i), f.var.clone()))
            .collect();
        let cached = self.memo.lock().expect("memo lock").get(&key).cloned();
        let canon = match cached {
            Some(s) => {
                self.bump(|st| st.cache_hits += 1);
                s
            }
            None => {
                let mut ce = e.expr().clone();
                for (i, f) in ce.factors.iter_mut().enumerate() {
                    f.var = canonical_name(i);
                }
                let ce = KnapsackExpression::new(ce)?;
                let s = self.compute(&ce, q, level, max_level)?;
                self.memo.lock().expect("memo lock").insert(key, s.clone());
                s
            }
        };
        self.bump(|st| st.subequations_solved += 1);
        Ok(canon.rename(&rename)?)
    }

    fn depth2_params(&self, q: Quasi) -> Result<Depth2Params, KnapsackError> {
        let c = self.constants()?;
        Ok(Depth2Params {
            lambda: q.lambda,
            epsilon: q.epsilon,
            delta: c.delta,
            kappa: c.kappa,
            gamma: c.gamma,
        })
    }

    fn compute(&self, e: &KnapsackExpression, q: Quasi, level: usize, max_level: usize) -> Result<SemilinearSet, KnapsackError> {
        let g = &self.group;
        let f = e.factors();
        match f.len() {
            0 => Ok(if g.is_one(e.head()) {
                SemilinearSet::universal(Vec::<String>::new())
            } else {
                SemilinearSet::empty(Vec::<String>::new())
            }),
            1 => {
                self.bump(|s| s.depth1_calls += 1);
                solve_depth1(g, &f[0].u, &f[0].v, &f[0].var, q.lambda, q.epsilon)
            }
            2 => {
                // u1^{x1} v1 u2^{x2} v2 = 1  ⇔  v1 u2^{x2} = (u1⁻¹)^{x1} v2⁻¹
                self.bump(|s| s.depth2_calls += 1);
                solve_depth2(
                    g,
                    &f[0].v,
                    &f[1].u,
                    &g.inverse_word(&f[0].u),
                    &g.inverse_word(&f[1].v),
                    [&f[1].var, &f[0].var],
                    &self.depth2_params(q)?,
                )
            }
            k => {
                let formula = positivity_split(e);
                let parts = self.map(&formula.disjuncts, |c| {
                    let sub = &c.subequations[0];
                    let sol = if sub.depth() <= 2 || sub.depth() < k {
                        self.solve_rec(sub, q, level, max_level)?
                    } else {
                        self.solve_polygon(sub, q, level, max_level)?
                    };
                    Ok(c.assemble(&[sol], &formula.variables)?)
                })?;
                let mut vars = formula.variables.clone();
                vars.sort();
                Ok(SemilinearSet::union_all(&vars, &parts)?)
            }
        }
    }

    /// A set between `sol(E) ∩ (ℕ∖{0})^k` and `sol(E)`.
    fn solve_polygon(&self, e: &KnapsackExpression, q: Quasi, level: usize, max_level: usize) -> Result<SemilinearSet, KnapsackError> {
        let k = e.depth();
        let h = match self.options.h {
            Some(h) => h,
            None => self.constants()?.h(k),
        };
        let (formula, counts) = split_polygon(&self.group, e, h)?;
        self.bump(|s| {
            s.polygon_splits += 1;
            for (name, n) in CASE_NAMES.iter().zip(counts.0) {
                *s.case_counts.entry((*name).to_owned()).or_insert(0) += n;
            }
        });
        self.eval_formula(&formula, q, level + 1, max_level)
    }

    fn eval_formula(&self, formula: &SolutionFormula, q: Quasi, level: usize, max_level: usize) -> Result<SemilinearSet, KnapsackError> {
        let parts = self.map(&formula.disjuncts, |c| {
            let mut order: Vec<usize> = (0..c.subequations.len()).collect();
            order.sort_by_key(|&i| (c.subequations[i].depth(), c.subequations[i].size()));
            let mut sols = vec![None; c.subequations.len()];
            for i in order {
                let s = self.solve_rec(&c.subequations[i], q, level, max_level)?;
                if s.is_empty() {
                    let mut vars = formula.variables.clone();
                    vars.sort();
                    return Ok(SemilinearSet::empty(vars));
                }
                sols[i] = Some(s);
            }
            let sols: Vec<SemilinearSet> = sols.into_iter().map(|s| s.expect("solved")).collect();
            Ok(c.assemble(&sols, &formula.variables)?)
        })?;
        let mut vars = formula.variables.clone();
        vars.sort();
        Ok(SemilinearSet::union_all(&vars, &parts)?)
    }

    /// Public evaluation of a formula whose subequations satisfy the
    /// solver's preconditions (infinite-order, quasigeodesic powers with the
    /// given constants).
    pub fn evaluate_formula(&self, formula: &SolutionFormula, lambda: u64, epsilon: u64) -> Result<SemilinearSet, KnapsackError> {
        let depth = formula
            .disjuncts
            .iter()
            .flat_map(|c| c.subequations.iter().map(|s| s.depth()))
            .max()
            .unwrap_or(0);
        self.eval_formula(formula, Quasi { lambda, epsilon }, 1, depth.max(1))
    }

    /// Is `sol(E)` nonempty? `bound` caps exponents in the grid route.
    pub fn decide(&self, e: &KnapsackExpression, route: Route, bound: Option<u64>) -> Result<Decision, KnapsackError> {
        let route = match route {
            Route::Auto if self.supports_solve() => Route::Semilinear,
            Route::Auto => Route::Grid,
            r => r,
        };
        let mut decision = Decision {
            answer: false,
            witness: None,
            route,
            magnitude: None,
            bound: None,
        };
        match route {
            Route::Semilinear | Route::Auto => {
                let set = self.solve(e)?;
                decision.magnitude = Some(set.magnitude());
                decision.witness = set.smallest_offset();
            }
            Route::Grid => {
                let p = match bound {
                    Some(p) => p,
                    None if self.supports_solve() => self.solve(e)?.magnitude() + 1,
                    None => return Err(KnapsackError::BoundRequired),
                };
                decision.bound = Some(p);
                decision.witness = self.grid_witness(e, p)?;
            }
        }
        if let Some(w) = &decision.witness {
            if !oracle::verify(&self.group, e.expr(), w)? {
                return Err(KnapsackError::Internal(format!("witness {w} does not verify")));
            }
            decision.answer = true;
        }
        Ok(decision)
    }

    /// A solution with all exponents ≤ `p`, via identity membership in the grid automaton.
    pub fn grid_witness(&self, e: &KnapsackExpression, p: u64) -> Result<Option<Valuation>, KnapsackError> {
        let r = e.rotated();
        let factors: Vec<(Word, Word)> = r.factors().iter().map(|f| (f.u.clone(), f.v.clone())).collect();
        if factors.is_empty() {
            return Ok(self.group.is_one(r.head()).then(Valuation::new));
        }
        let grid = grid_nfa(&factors, p);
        let hit = acyclic_membership_with_cap(&self.group, &grid.nfa, self.options.state_cap)?;
        Ok(hit.map(|w| {
            r.factors()
                .iter()
                .zip(grid.exponents(&w))
                .map(|(f, n)| (f.var.clone(), n))
                .collect()
        }))
    }

    /// Common solutions of exponent expressions sharing variables.
    pub fn solve_system(&self, exprs: &[ExponentExpression]) -> Result<SystemSolution, KnapsackError> {
        let mut all_vars: Vec<String> = exprs.iter().flat_map(|e| e.variables()).collect();
        all_vars.sort();
        all_vars.dedup();
        let mut acc = SemilinearSet::universal(all_vars.clone());
        for e in exprs {
            let (k, equal) = e.separate_variables();
            let mut s = self.solve(&k)?;
            let mut copies = Vec::new();
            for (x, copy) in equal {
                let coeffs = BTreeMap::from([(x, 1i64), (copy.clone(), -1i64)]);
                s = s.intersect_equation(&coeffs, 0)?;
                copies.push(copy);
            }
            let s = s.project_out(&copies)?.extend_universal(&all_vars)?;
            acc = acc.intersect(&s)?;
            if acc.is_empty() {
                break;
            }
        }
        let witness = acc.smallest_offset();
        if let Some(w) = &witness {
            for e in exprs {
                if !oracle::verify(&self.group, e, w)? {
                    return Err(KnapsackError::Internal(format!("system witness {w} does not verify")));
                }
            }
        }
        Ok(SystemSolution { set: acc, witness })
    }
}
