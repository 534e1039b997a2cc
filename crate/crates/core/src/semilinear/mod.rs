//! Semilinear subsets of ℕ^X over named variables.
//!
//! A [`LinearSet`] is `v0 + ℕ·v1 + … + ℕ·vn`; a [`SemilinearSet`] is a finite
//! union of linear sets over one shared variable set. Vectors are stored
//! aligned to the sorted variable list, so two sets built from the same data
//! in any order compare and serialize identically once canonicalized.

pub mod diophantine;
mod text;

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use text::parse_semilinear;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemilinearError {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("variable sets overlap on {0:?}")]
    OverlappingVariables(Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("scale factor for `{0}` is zero")]
    ZeroScale(String),
    #[error("diophantine solver exceeded {0} frontier vectors")]
    SolverLimit(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A map from variable names to natural numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Valuation(BTreeMap<String, u64>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zero<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Valuation(vars.into_iter().map(|v| (v.into(), 0)).collect())
    }

    pub fn get(&self, var: &str) -> Option<u64> {
        self.0.get(var).copied()
    }

    pub fn insert(&mut self, var: impl Into<String>, value: u64) -> Option<u64> {
        self.0.insert(var.into(), value)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_entry(&self) -> u64 {
        self.0.values().copied().max().unwrap_or(0)
    }

    fn to_vector(&self, vars: &[String]) -> Result<Vec<u64>, SemilinearError> {
        if self.0.len() != vars.len() || !vars.iter().all(|v| self.0.contains_key(v)) {
            return Err(SemilinearError::VariableMismatch {
                left: self.0.keys().cloned().collect(),
                right: vars.to_vec(),
            });
        }
        Ok(vars.iter().map(|v| self.0[v]).collect())
    }

    fn from_vector(vars: &[String], values: &[u64]) -> Self {
        Valuation(vars.iter().cloned().zip(values.iter().copied()).collect())
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for Valuation {
    fn from_iter<T: IntoIterator<Item = (S, u64)>>(iter: T) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_vector(f, self.0.keys().map(String::as_str), self.0.values().copied())
    }
}

/// Offset and periods of one linear component, aligned to a variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Lin {
    offset: Vec<u64>,
    periods: Vec<Vec<u64>>,
}

impl Lin {
    fn canonicalize(&mut self) {
        self.periods.retain(|p| p.iter().any(|&v| v != 0));
        self.periods.sort_unstable();
        self.periods.dedup();
        // Drop periods generated by the remaining ones, largest first.
        let mut i = self.periods.len();
        while i > 0 {
            i -= 1;
            if self.periods.len() < 2 {
                break;
            }
            let p = self.periods.remove(i);
            if !monoid_contains(&p, &self.periods) {
                self.periods.insert(i, p);
            }
        }
    }

    fn contains(&self, v: &[u64]) -> bool {
        match sub_vec(v, &self.offset) {
            Some(rest) => monoid_contains(&rest, &self.periods),
            None => false,
        }
    }

    /// Sufficient test for `self ⊆ other`.
    fn subsumed_by(&self, other: &Lin) -> bool {
        other.contains(&self.offset) && self.periods.iter().all(|p| monoid_contains(p, &other.periods))
    }

    fn magnitude(&self) -> u64 {
        self.offset
            .iter()
            .chain(self.periods.iter().flatten())
            .copied()
            .max()
            .unwrap_or(0)
    }
}

fn sub_vec(a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

fn add_vec(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Whether `target` is an ℕ-combination of `gens`. All entries are naturals
/// and zero generators are ignored, so the search is finite.
pub(crate) fn monoid_contains(target: &[u64], gens: &[Vec<u64>]) -> bool {
    if target.iter().all(|&v| v == 0) {
        return true;
    }
    let gens: Vec<&Vec<u64>> = gens.iter().filter(|g| g.iter().any(|&v| v != 0)).collect();
    let mut failed: HashSet<(usize, Vec<u64>)> = HashSet::new();
    monoid_search(target, &gens, 0, &mut failed)
}

fn monoid_search(
    target: &[u64],
    gens: &[&Vec<u64>],
    idx: usize,
    failed: &mut HashSet<(usize, Vec<u64>)>,
) -> bool {
    if target.iter().all(|&v| v == 0) {
        return true;
    }
    if idx == gens.len() {
        return false;
    }
    if failed.contains(&(idx, target.to_vec())) {
        return false;
    }
    let g = gens[idx];
    let mut rest = target.to_vec();
    loop {
        if monoid_search(&rest, gens, idx + 1, failed) {
            return true;
        }
        match sub_vec(&rest, g) {
            Some(r) => rest = r,
            None => break,
        }
    }
    failed.insert((idx, target.to_vec()));
    false
}

/// `offset + ℕ·period_1 + … + ℕ·period_n` over a named variable set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSet {
    vars: Vec<String>,
    lin: Lin,
}

impl LinearSet {
    pub fn new(offset: Valuation, periods: Vec<Valuation>) -> Result<Self, SemilinearError> {
        let vars: Vec<String> = offset.vars().map(str::to_owned).collect();
        let off = offset.to_vector(&vars)?;
        let periods = periods
            .iter()
            .map(|p| p.to_vector(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        let mut lin = Lin {
            offset: off,
            periods,
        };
        lin.canonicalize();
        Ok(LinearSet { vars, lin })
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn offset(&self) -> Valuation {
        Valuation::from_vector(&self.vars, &self.lin.offset)
    }

    pub fn periods(&self) -> Vec<Valuation> {
        self.lin
            .periods
            .iter()
            .map(|p| Valuation::from_vector(&self.vars, p))
            .collect()
    }

    pub fn contains(&self, v: &Valuation) -> bool {
        v.to_vector(&self.vars).map(|x| self.lin.contains(&x)).unwrap_or(false)
    }
}

/// A finite union of linear sets over one variable set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    vars: Vec<String>,
    comps: Vec<Lin>,
}

fn sorted_vars<I, S>(vars: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut v: Vec<String> = vars.into_iter().map(Into::into).collect();
    v.sort();
    v.dedup();
    v
}

impl SemilinearSet {
    /// The empty set over `vars`.
    pub fn empty<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SemilinearSet {
            vars: sorted_vars(vars),
            comps: Vec::new(),
        }
    }

    /// All of ℕ^vars.
    pub fn universal<I, S>(vars: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars = sorted_vars(vars);
        let d = vars.len();
        let periods = (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                e
            })
            .collect();
        SemilinearSet {
            vars,
            comps: vec![Lin {
                offset: vec![0; d],
                periods,
            }],
        }
    }

    pub fn singleton(v: &Valuation) -> Self {
        let vars: Vec<String> = v.vars().map(str::to_owned).collect();
        let offset = v.to_vector(&vars).expect("own variables");
        SemilinearSet {
            vars,
            comps: vec![Lin {
                offset,
                periods: Vec::new(),
            }],
        }
    }

    /// `{ offset + k·modulus : k ∈ ℕ }` over a single variable.
    pub fn residue_class(var: &str, residue: u64, modulus: u64) -> Self {
        let mut lin = Lin {
            offset: vec![residue],
            periods: vec![vec![modulus]],
        };
        lin.canonicalize();
        SemilinearSet {
            vars: vec![var.to_owned()],
            comps: vec![lin],
        }
    }

    pub fn from_linear(l: LinearSet) -> Self {
        SemilinearSet {
            vars: l.vars,
            comps: vec![l.lin],
        }
    }

    pub fn from_components<I, S>(vars: I, comps: Vec<LinearSet>) -> Result<Self, SemilinearError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars = sorted_vars(vars);
        let mut out = SemilinearSet::empty(vars.clone());
        for c in comps {
            if c.vars != vars {
                return Err(SemilinearError::VariableMismatch {
                    left: vars,
                    right: c.vars,
                });
            }
            out.comps.push(c.lin);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Builds a set from raw vectors aligned to the sorted variable list.
    pub(crate) fn from_raw(vars: Vec<String>, raw: Vec<(Vec<u64>, Vec<Vec<u64>>)>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        let mut s = SemilinearSet {
            vars,
            comps: raw
                .into_iter()
                .map(|(offset, periods)| Lin { offset, periods })
                .collect(),
        };
        s.canonicalize();
        s
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Number of linear components in the stored representation.
    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> Vec<LinearSet> {
        self.comps
            .iter()
            .map(|l| LinearSet {
                vars: self.vars.clone(),
                lin: l.clone(),
            })
            .collect()
    }

    /// Largest number in any offset or period; zero for the empty set.
    pub fn magnitude(&self) -> u64 {
        self.comps.iter().map(Lin::magnitude).max().unwrap_or(0)
    }

    /// Sorts periods and components, drops zero and redundant periods,
    /// duplicate components and components contained in another one.
    pub fn canonicalize(&mut self) {
        for c in &mut self.comps {
            c.canonicalize();
        }
        self.comps.sort_unstable();
        self.comps.dedup();
        if self.comps.len() > 1 {
            let mut keep: Vec<Lin> = Vec::with_capacity(self.comps.len());
            let n = self.comps.len();
            let mut removed = vec![false; n];
            for i in 0..n {
                let subsumed = (0..n).any(|j| {
                    j != i && !removed[j] && self.comps[i].subsumed_by(&self.comps[j])
                });
                if subsumed {
                    removed[i] = true;
                }
            }
            for (i, c) in self.comps.drain(..).enumerate() {
                if !removed[i] {
                    keep.push(c);
                }
            }
            self.comps = keep;
        }
    }

    fn check_same_vars(&self, other: &SemilinearSet) -> Result<(), SemilinearError> {
        if self.vars != other.vars {
            return Err(SemilinearError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    fn index_of(&self, var: &str) -> Result<usize, SemilinearError> {
        self.vars
            .binary_search_by(|v| v.as_str().cmp(var))
            .map_err(|_| SemilinearError::UnknownVariable(var.to_owned()))
    }

    pub fn union(&self, other: &SemilinearSet) -> Result<SemilinearSet, SemilinearError> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        out.comps.extend(other.comps.iter().cloned());
        out.canonicalize();
        Ok(out)
    }

    /// Union of many sets over the same variables, canonicalized once.
    pub fn union_all<'a, I>(vars: &[String], sets: I) -> Result<SemilinearSet, SemilinearError>
    where
        I: IntoIterator<Item = &'a SemilinearSet>,
    {
        let mut out = SemilinearSet::empty(vars.iter().cloned());
        for s in sets {
            out.check_same_vars(s)?;
            out.comps.extend(s.comps.iter().cloned());
        }
        out.canonicalize();
        Ok(out)
    }

    /// `{ s ⊕ t }` for sets over disjoint variable sets.
    pub fn oplus(&self, other: &SemilinearSet) -> Result<SemilinearSet, SemilinearError> {
        let overlap: Vec<String> = self
            .vars
            .iter()
            .filter(|v| other.vars.binary_search(v).is_ok())
            .cloned()
            .collect();
        if !overlap.is_empty() {
            return Err(SemilinearError::OverlappingVariables(overlap));
        }
        let vars = sorted_vars(self.vars.iter().chain(other.vars.iter()).cloned());
        let left_pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).unwrap())
            .collect();
        let right_pos: Vec<usize> = other
            .vars
            .iter()
            .map(|v| vars.binary_search(v).unwrap())
            .collect();
        let d = vars.len();
        let embed = |src: &[u64], pos: &[usize]| {
            let mut out = vec![0; d];
            for (x, &p) in src.iter().zip(pos) {
                out[p] = *x;
            }
            out
        };
        let mut comps = Vec::with_capacity(self.comps.len() * other.comps.len());
        for a in &self.comps {
            for b in &other.comps {
                let ea = embed(&a.offset, &left_pos);
                let eb = embed(&b.offset, &right_pos);
                let offset = add_vec(&ea, &eb);
                let periods = a
                    .periods
                    .iter()
                    .map(|p| embed(p, &left_pos))
                    .chain(b.periods.iter().map(|p| embed(p, &right_pos)))
                    .collect();
                comps.push(Lin { offset, periods });
            }
        }
        let mut out = SemilinearSet { vars, comps };
        out.canonicalize();
        Ok(out)
    }

    /// Pointwise `m·s + d` for every member `s`.
    pub fn scale_shift(&self, m: &Valuation, d: &Valuation) -> Result<SemilinearSet, SemilinearError> {
        let mv = m.to_vector(&self.vars)?;
        let dv = d.to_vector(&self.vars)?;
        if let Some(i) = mv.iter().position(|&x| x == 0) {
            return Err(SemilinearError::ZeroScale(self.vars[i].clone()));
        }
        let scale = |v: &[u64]| -> Vec<u64> { v.iter().zip(&mv).map(|(a, b)| a * b).collect() };
        let comps = self
            .comps
            .iter()
            .map(|c| Lin {
                offset: add_vec(&scale(&c.offset), &dv),
                periods: c.periods.iter().map(|p| scale(p)).collect(),
            })
            .collect();
        let mut out = SemilinearSet {
            vars: self.vars.clone(),
            comps,
        };
        out.canonicalize();
        Ok(out)
    }

    /// Exact intersection.
    pub fn intersect(&self, other: &SemilinearSet) -> Result<SemilinearSet, SemilinearError> {
        self.check_same_vars(other)?;
        let mut comps = Vec::new();
        for a in &self.comps {
            for b in &other.comps {
                comps.extend(intersect_linear(a, b)?);
            }
        }
        let mut out = SemilinearSet {
            vars: self.vars.clone(),
            comps,
        };
        out.canonicalize();
        Ok(out)
    }

    /// Intersection with the hyperplane `Σ coeff(x)·x = rhs`.
    pub fn intersect_equation(
        &self,
        coeffs: &BTreeMap<String, i64>,
        rhs: i64,
    ) -> Result<SemilinearSet, SemilinearError> {
        let mut c = vec![0i64; self.vars.len()];
        for (var, &k) in coeffs {
            c[self.index_of(var)?] += k;
        }
        let dot = |v: &[u64]| -> i64 { v.iter().zip(&c).map(|(a, b)| *a as i64 * b).sum() };
        let mut comps = Vec::new();
        for l in &self.comps {
            let columns: Vec<Vec<i64>> = l.periods.iter().map(|p| vec![dot(p)]).collect();
            let target = rhs - dot(&l.offset);
            let sol = diophantine::solve(&columns, &[target])?;
            comps.extend(rebuild(l, &sol));
        }
        let mut out = SemilinearSet {
            vars: self.vars.clone(),
            comps,
        };
        out.canonicalize();
        Ok(out)
    }

    /// Keeps only members with `var ≥ 1`.
    pub fn restrict_positive(&self, var: &str) -> Result<SemilinearSet, SemilinearError> {
        let i = self.index_of(var)?;
        let mut comps = Vec::new();
        for l in &self.comps {
            if l.offset[i] >= 1 {
                comps.push(l.clone());
                continue;
            }
            for p in l.periods.iter().filter(|p| p[i] >= 1) {
                comps.push(Lin {
                    offset: add_vec(&l.offset, p),
                    periods: l.periods.clone(),
                });
            }
        }
        let mut out = SemilinearSet {
            vars: self.vars.clone(),
            comps,
        };
        out.canonicalize();
        Ok(out)
    }

    /// Adds the coordinate `target := Σ sources + constant`.
    ///
    /// Equals intersecting with the equation and the universal set on
    /// `target`, when `target` is a fresh variable.
    pub fn add_affine_coordinate(
        &self,
        target: &str,
        sources: &[&str],
        constant: u64,
    ) -> Result<SemilinearSet, SemilinearError> {
        if self.vars.iter().any(|v| v == target) {
            return Err(SemilinearError::OverlappingVariables(vec![target.to_owned()]));
        }
        let idx = sources
            .iter()
            .map(|s| self.index_of(s))
            .collect::<Result<Vec<_>, _>>()?;
        let vars = sorted_vars(self.vars.iter().cloned().chain([target.to_owned()]));
        let pos = vars.binary_search_by(|v| v.as_str().cmp(target)).unwrap();
        let extend = |v: &[u64], extra: u64| {
            let mut out = v.to_vec();
            out.insert(pos, extra);
            out
        };
        let sum = |v: &[u64]| idx.iter().map(|&i| v[i]).sum::<u64>();
        let comps = self
            .comps
            .iter()
            .map(|l| Lin {
                offset: extend(&l.offset, sum(&l.offset) + constant),
                periods: l.periods.iter().map(|p| extend(p, sum(p))).collect(),
            })
            .collect();
        let mut out = SemilinearSet { vars, comps };
        out.canonicalize();
        Ok(out)
    }

    /// Image under deletion of every coordinate outside `keep`.
    pub fn project<S: AsRef<str>>(&self, keep: &[S]) -> Result<SemilinearSet, SemilinearError> {
        let mut idx = keep
            .iter()
            .map(|k| self.index_of(k.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        idx.sort_unstable();
        idx.dedup();
        let vars: Vec<String> = idx.iter().map(|&i| self.vars[i].clone()).collect();
        let pick = |v: &[u64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let comps = self
            .comps
            .iter()
            .map(|l| Lin {
                offset: pick(&l.offset),
                periods: l.periods.iter().map(|p| pick(p)).collect(),
            })
            .collect();
        let mut out = SemilinearSet { vars, comps };
        out.canonicalize();
        Ok(out)
    }

    /// Projects away the named variables.
    pub fn project_out<S: AsRef<str>>(&self, drop: &[S]) -> Result<SemilinearSet, SemilinearError> {
        for d in drop {
            self.index_of(d.as_ref())?;
        }
        let keep: Vec<&String> = self
            .vars
            .iter()
            .filter(|v| !drop.iter().any(|d| d.as_ref() == v.as_str()))
            .collect();
        self.project(&keep)
    }

    /// `self ⊕ ℕ^extra` for variables not yet present.
    pub fn extend_universal<S: AsRef<str>>(&self, extra: &[S]) -> Result<SemilinearSet, SemilinearError> {
        let fresh: Vec<&str> = extra
            .iter()
            .map(AsRef::as_ref)
            .filter(|v| self.vars.binary_search_by(|x| x.as_str().cmp(v)).is_err())
            .collect();
        if fresh.is_empty() {
            return Ok(self.clone());
        }
        self.oplus(&SemilinearSet::universal(fresh))
    }

    /// Renames variables; the new names must be distinct.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Result<SemilinearSet, SemilinearError> {
        let new_names: Vec<String> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let vars = sorted_vars(new_names.iter().cloned());
        if vars.len() != new_names.len() {
            return Err(SemilinearError::OverlappingVariables(new_names));
        }
        let pos: Vec<usize> = new_names
            .iter()
            .map(|n| vars.binary_search(n).unwrap())
            .collect();
        let permute = |v: &[u64]| {
            let mut out = vec![0; v.len()];
            for (x, &p) in v.iter().zip(&pos) {
                out[p] = *x;
            }
            out
        };
        let comps = self
            .comps
            .iter()
            .map(|l| Lin {
                offset: permute(&l.offset),
                periods: l.periods.iter().map(|p| permute(p)).collect(),
            })
            .collect();
        let mut out = SemilinearSet { vars, comps };
        out.canonicalize();
        Ok(out)
    }

    pub fn member(&self, v: &Valuation) -> Result<bool, SemilinearError> {
        let x = v.to_vector(&self.vars)?;
        Ok(self.comps.iter().any(|l| l.contains(&x)))
    }

    /// Members as vectors aligned to [`Self::variables`], restricted to `[0, bound]^X`.
    pub fn enumerate_box_vectors(&self, bound: u64) -> BTreeSet<Vec<u64>> {
        let mut out = BTreeSet::new();
        for l in &self.comps {
            if l.offset.iter().any(|&x| x > bound) {
                continue;
            }
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert(l.offset.clone());
            queue.push_back(l.offset.clone());
            while let Some(v) = queue.pop_front() {
                for p in &l.periods {
                    let w = add_vec(&v, p);
                    if w.iter().all(|&x| x <= bound) && seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
                out.insert(v);
            }
        }
        out
    }

    /// Exactly `self ∩ [0, bound]^X`.
    pub fn enumerate_box(&self, bound: u64) -> BTreeSet<Valuation> {
        self.enumerate_box_vectors(bound)
            .into_iter()
            .map(|v| Valuation::from_vector(&self.vars, &v))
            .collect()
    }

    /// Member with the smallest offset (by maximum entry, then lexicographically).
    pub fn smallest_offset(&self) -> Option<Valuation> {
        self.comps
            .iter()
            .map(|l| &l.offset)
            .min_by(|a, b| {
                let ma = a.iter().max().copied().unwrap_or(0);
                let mb = b.iter().max().copied().unwrap_or(0);
                ma.cmp(&mb).then_with(|| a.cmp(b))
            })
            .map(|o| Valuation::from_vector(&self.vars, o))
    }

    /// Canonical text form (see [`parse_semilinear`]).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_semilinear(f, &self.vars, self.comps.iter().map(|l| (&l.offset, &l.periods)))
    }
}

fn rebuild(l: &Lin, sol: &diophantine::Solutions) -> Vec<Lin> {
    let combine = |coeffs: &[u64]| -> Vec<u64> {
        let mut out = vec![0; l.offset.len()];
        for (k, p) in coeffs.iter().zip(&l.periods) {
            for (o, x) in out.iter_mut().zip(p) {
                *o += k * x;
            }
        }
        out
    };
    let periods: Vec<Vec<u64>> = sol.homogeneous.iter().map(|h| combine(h)).collect();
    sol.particular
        .iter()
        .map(|p| Lin {
            offset: add_vec(&l.offset, &combine(p)),
            periods: periods.clone(),
        })
        .collect()
}

fn intersect_linear(a: &Lin, b: &Lin) -> Result<Vec<Lin>, SemilinearError> {
    let d = a.offset.len();
    // a + Pλ = b + Qμ  ⇔  Pλ - Qμ = b - a
    let mut columns: Vec<Vec<i64>> = a
        .periods
        .iter()
        .map(|p| p.iter().map(|&x| x as i64).collect())
        .collect();
    columns.extend(b.periods.iter().map(|q| q.iter().map(|&x| -(x as i64)).collect()));
    let rhs: Vec<i64> = (0..d).map(|i| b.offset[i] as i64 - a.offset[i] as i64).collect();
    let sol = diophantine::solve(&columns, &rhs)?;
    let np = a.periods.len();
    let truncate = |v: &Vec<u64>| v[..np].to_vec();
    let sol = diophantine::Solutions {
        particular: sol.particular.iter().map(truncate).collect(),
        homogeneous: sol.homogeneous.iter().map(truncate).collect(),
    };
    Ok(rebuild(a, &sol))
}

#[cfg(test)]
mod tests;
