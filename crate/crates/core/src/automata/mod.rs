//! Word-labelled automata over a group alphabet and counting automata.
//!
//! The central question is identity membership for acyclic NFAs: does the
//! automaton accept a word representing 1? Free backends answer it by
//! Benois saturation; every other backend runs a forward dynamic program over
//! sets of group elements.

mod benois;
mod depth2;
mod grid;
mod parikh;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{Element, Group, GroupError, GroupSpec, Word};

pub use benois::{benois_saturate, Saturated};
pub use depth2::{build_depth2_nfa, split_params, Depth2Params, SplitParams};
pub use grid::{grid_nfa, GridNfa};
pub use parikh::{parikh_image, CountTransition, ParikhNFA};

/// Default cap on the number of normal forms stored per state.
pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("automaton has a cycle through state {0}")]
    NotAcyclic(usize),
    #[error("state {state} reached more than {cap} distinct group elements")]
    CapExceeded { state: usize, cap: usize },
    #[error("state {0} is out of range")]
    BadState(usize),
    #[error("unknown state name `{0}`")]
    UnknownState(String),
    #[error("NFA file: {0}")]
    Json(String),
    #[error("{0} must be nonempty")]
    EmptyWord(&'static str),
    #[error("{0} is not geodesic")]
    NotGeodesic(&'static str),
    #[error("label dimension {found} does not match {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Semilinear(#[from] crate::semilinear::SemilinearError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub label: Word,
    pub to: usize,
}

/// NFA whose transitions carry words over a group alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordNFA {
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<Transition>,
}

/// Accepted word representing 1, with the transitions of its run in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipWitness {
    pub word: Word,
    pub transitions: Vec<usize>,
}

impl WordNFA {
    pub fn new(states: usize, initial: usize, finals: Vec<usize>) -> Self {
        WordNFA {
            states,
            initial,
            finals,
            transitions: Vec::new(),
        }
    }

    pub fn add_transition(&mut self, from: usize, label: Word, to: usize) -> usize {
        self.transitions.push(Transition { from, label, to });
        self.transitions.len() - 1
    }

    pub fn validate(&self) -> Result<(), AutomataError> {
        let bad = |s: usize| (s >= self.states).then_some(AutomataError::BadState(s));
        if let Some(e) = bad(self.initial) {
            return Err(e);
        }
        for &f in &self.finals {
            if let Some(e) = bad(f) {
                return Err(e);
            }
        }
        for t in &self.transitions {
            if let Some(e) = bad(t.from).or_else(|| bad(t.to)) {
                return Err(e);
            }
        }
        Ok(())
    }

    /// States in a topological order, or the first state found on a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>, AutomataError> {
        topo_sort(self.states, self.transitions.iter().map(|t| (t.from, t.to)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Every accepted word (acyclic automata only), with duplicates.
    pub fn accepted_words(&self) -> Result<Vec<Word>, AutomataError> {
        let order = self.topological_order()?;
        let mut words: Vec<Vec<Word>> = vec![Vec::new(); self.states];
        words[self.initial].push(Vec::new());
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); self.states];
        for (i, t) in self.transitions.iter().enumerate() {
            out_edges[t.from].push(i);
        }
        for &p in &order {
            let here = std::mem::take(&mut words[p]);
            for &ti in &out_edges[p] {
                let t = &self.transitions[ti];
                for w in &here {
                    let mut w2 = w.clone();
                    w2.extend_from_slice(&t.label);
                    words[t.to].push(w2);
                }
            }
            words[p] = here;
        }
        let mut out = Vec::new();
        for &f in &self.finals {
            out.extend(words[f].iter().cloned());
        }
        Ok(out)
    }

    pub fn from_json(group: &Group, text: &str) -> Result<Self, AutomataError> {
        let raw: NfaFile = serde_json::from_str(text).map_err(|e| AutomataError::Json(e.to_string()))?;
        let names: Option<Vec<String>> = match &raw.states {
            StatesField::Count(_) => None,
            StatesField::Names(n) => Some(n.clone()),
        };
        let count = match &raw.states {
            StatesField::Count(n) => *n,
            StatesField::Names(n) => n.len(),
        };
        let index: HashMap<&str, usize> = names
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let resolve = |s: &StateRef| -> Result<usize, AutomataError> {
            match s {
                StateRef::Index(i) => Ok(*i),
                StateRef::Name(n) => index
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| AutomataError::UnknownState(n.clone())),
            }
        };
        let mut nfa = WordNFA::new(
            count,
            resolve(&raw.initial)?,
            raw.finals.iter().map(resolve).collect::<Result<_, _>>()?,
        );
        for t in &raw.transitions {
            let label = group.parse_word(&t.label)?;
            nfa.add_transition(resolve(&t.from)?, label, resolve(&t.to)?);
        }
        nfa.validate()?;
        Ok(nfa)
    }

    pub fn to_json(&self, group: &Group) -> String {
        let raw = NfaFile {
            states: StatesField::Count(self.states),
            initial: StateRef::Index(self.initial),
            finals: self.finals.iter().map(|&f| StateRef::Index(f)).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionField {
                    from: StateRef::Index(t.from),
                    label: t
                        .label
                        .iter()
                        .map(|&l| group.letter_name(l))
                        .collect::<Vec<_>>()
                        .join(" "),
                    to: StateRef::Index(t.to),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StatesField {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StateRef {
    Index(usize),
    Name(String),
}

#[derive(Serialize, Deserialize)]
struct TransitionField {
    from: StateRef,
    #[serde(default)]
    label: String,
    to: StateRef,
}

#[derive(Serialize, Deserialize)]
struct NfaFile {
    states: StatesField,
    initial: StateRef,
    finals: Vec<StateRef>,
    transitions: Vec<TransitionField>,
}

pub(crate) fn topo_sort(
    n: usize,
    edges: impl Iterator<Item = (usize, usize)>,
) -> Result<Vec<usize>, AutomataError> {
    let mut indeg = vec![0usize; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in edges {
        adj[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(p) = queue.pop_front() {
        order.push(p);
        for &q in &adj[p] {
            indeg[q] -= 1;
            if indeg[q] == 0 {
                queue.push_back(q);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap_or(0);
        return Err(AutomataError::NotAcyclic(stuck));
    }
    Ok(order)
}

/// Does `nfa` accept a word equal to 1 in `group`? Returns such a word.
pub fn acyclic_membership(
    group: &Group,
    nfa: &WordNFA,
) -> Result<Option<MembershipWitness>, AutomataError> {
    acyclic_membership_with_cap(group, nfa, DEFAULT_STATE_CAP)
}

pub fn acyclic_membership_with_cap(
    group: &Group,
    nfa: &WordNFA,
    cap: usize,
) -> Result<Option<MembershipWitness>, AutomataError> {
    nfa.validate()?;
    match group.spec() {
        GroupSpec::Free(_) => Ok(benois_saturate(group, nfa)?.witness()),
        GroupSpec::Finite { .. } => element_dp(group, nfa, usize::MAX),
        _ => element_dp(group, nfa, cap),
    }
}

/// Forward DP carrying the set of reachable elements per state.
fn element_dp(
    group: &Group,
    nfa: &WordNFA,
    cap: usize,
) -> Result<Option<MembershipWitness>, AutomataError> {
    let order = nfa.topological_order()?;
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); nfa.states];
    for (i, t) in nfa.transitions.iter().enumerate() {
        out_edges[t.from].push(i);
    }
    // Per state: elements, index map, and back pointer (prev state, prev idx, transition).
    type Back = Option<(usize, usize, usize)>;
    let mut elems: Vec<Vec<(Element, Back)>> = vec![Vec::new(); nfa.states];
    let mut index: Vec<HashMap<Element, usize>> = vec![HashMap::new(); nfa.states];
    elems[nfa.initial].push((group.identity(), None));
    index[nfa.initial].insert(group.identity(), 0);
    for &p in &order {
        for &ti in &out_edges[p] {
            let t = &nfa.transitions[ti];
            for k in 0..elems[p].len() {
                let mut e = elems[p][k].0.clone();
                group.mul_word(&mut e, &t.label);
                if index[t.to].contains_key(&e) {
                    continue;
                }
                if elems[t.to].len() >= cap {
                    return Err(AutomataError::CapExceeded { state: t.to, cap });
                }
                index[t.to].insert(e.clone(), elems[t.to].len());
                elems[t.to].push((e, Some((p, k, ti))));
            }
        }
    }
    let id = group.identity();
    for &f in &nfa.finals {
        if let Some(&k) = index[f].get(&id) {
            let mut path = Vec::new();
            let (mut s, mut i) = (f, k);
            while let Some((ps, pi, ti)) = elems[s][i].1 {
                path.push(ti);
                s = ps;
                i = pi;
            }
            path.reverse();
            let word = path
                .iter()
                .flat_map(|&ti| nfa.transitions[ti].label.iter().copied())
                .collect();
            return Ok(Some(MembershipWitness {
                word,
                transitions: path,
            }));
        }
    }
    Ok(None)
}
