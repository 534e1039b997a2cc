//! Benois saturation for acyclic automata over free groups.
//!
//! Word labels are first split into chains of single letters. Saturation
//! adds an ε-edge `p → s` whenever `p -a-> q ⇝ε r -a⁻¹-> s`. On an acyclic
//! automaton one pass in reverse topological order reaches the fixpoint:
//! when `p` is processed every state after it already has its final
//! ε-closure. The accepted language then contains a word freely equal to 1
//! iff a final state is in the ε-closure of the initial state.

use std::collections::{BTreeMap, HashSet};

use super::{topo_sort, AutomataError, MembershipWitness, WordNFA};
use crate::groups::{Group, Letter};

#[derive(Clone, Debug)]
struct LetterEdge {
    from: usize,
    letter: Letter,
    to: usize,
    /// Source transition in the unsplit automaton.
    origin: usize,
    /// First letter of its transition's label.
    first: bool,
}

#[derive(Clone, Debug)]
enum EpsOrigin {
    /// An ε-labelled transition of the input.
    Transition(usize),
    /// `first` reads `a`, then an ε-path from `mid.0` to `mid.1`, then
    /// `second` reads `a⁻¹`.
    Derived {
        first: usize,
        mid: (usize, usize),
        second: usize,
    },
}

#[derive(Clone, Debug)]
struct EpsEdge {
    to: usize,
    origin: EpsOrigin,
}

/// A saturated letter automaton with ε-closures and how each was derived.
#[derive(Clone, Debug)]
pub struct Saturated {
    states: usize,
    initial: usize,
    finals: Vec<usize>,
    letters: Vec<LetterEdge>,
    eps: Vec<EpsEdge>,
    eps_out: Vec<Vec<usize>>,
    /// `closure[p][r]` is the first ε-edge of a path `p ⇝ r`; `None` for `r = p`.
    closure: Vec<BTreeMap<usize, Option<usize>>>,
    /// Number of ε-edges added by saturation.
    pub added: usize,
}

enum Step {
    Letter(usize),
    Eps(usize),
}

impl Saturated {
    pub fn state_count(&self) -> usize {
        self.states
    }

    /// ε-edges after saturation, as `(from, to)` pairs.
    pub fn epsilon_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (p, es) in self.eps_out.iter().enumerate() {
            for &e in es {
                out.push((p, self.eps[e].to));
            }
        }
        out.sort_unstable();
        out
    }

    /// The saturated automaton as a plain NFA with single-letter and ε labels.
    pub fn to_word_nfa(&self) -> WordNFA {
        let mut nfa = WordNFA::new(self.states, self.initial, self.finals.clone());
        for e in &self.letters {
            nfa.add_transition(e.from, vec![e.letter], e.to);
        }
        for (p, q) in self.epsilon_edges() {
            nfa.add_transition(p, Vec::new(), q);
        }
        nfa
    }

    pub fn epsilon_reachable(&self, from: usize, to: usize) -> bool {
        self.closure[from].contains_key(&to)
    }

    pub fn accepts_identity(&self) -> bool {
        self.finals
            .iter()
            .any(|f| self.closure[self.initial].contains_key(f))
    }

    pub fn witness(&self) -> Option<MembershipWitness> {
        let f = *self
            .finals
            .iter()
            .find(|f| self.closure[self.initial].contains_key(f))?;
        let mut steps = Vec::new();
        self.unfold(self.initial, f, &mut steps);
        let mut word = Vec::new();
        let mut transitions = Vec::new();
        for s in steps {
            match s {
                Step::Letter(e) => {
                    let le = &self.letters[e];
                    word.push(le.letter);
                    if le.first {
                        transitions.push(le.origin);
                    }
                }
                Step::Eps(t) => transitions.push(t),
            }
        }
        Some(MembershipWitness { word, transitions })
    }

    fn unfold(&self, mut p: usize, target: usize, out: &mut Vec<Step>) {
        while p != target {
            let e = self.closure[p][&target].expect("target ≠ p has a first edge");
            match self.eps[e].origin {
                EpsOrigin::Transition(t) => out.push(Step::Eps(t)),
                EpsOrigin::Derived { first, mid, second } => {
                    out.push(Step::Letter(first));
                    self.unfold(mid.0, mid.1, out);
                    out.push(Step::Letter(second));
                }
            }
            p = self.eps[e].to;
        }
    }
}

/// Splits labels into letters and saturates.
pub fn benois_saturate(group: &Group, nfa: &WordNFA) -> Result<Saturated, AutomataError> {
    nfa.validate()?;
    let mut states = nfa.states;
    let mut letters: Vec<LetterEdge> = Vec::new();
    let mut eps: Vec<EpsEdge> = Vec::new();
    let mut eps_from: Vec<usize> = Vec::new();
    for (ti, t) in nfa.transitions.iter().enumerate() {
        group.check_word(&t.label)?;
        if t.label.is_empty() {
            eps.push(EpsEdge {
                to: t.to,
                origin: EpsOrigin::Transition(ti),
            });
            eps_from.push(t.from);
            continue;
        }
        let mut cur = t.from;
        for (k, &l) in t.label.iter().enumerate() {
            let next = if k + 1 == t.label.len() {
                t.to
            } else {
                states += 1;
                states - 1
            };
            letters.push(LetterEdge {
                from: cur,
                letter: l,
                to: next,
                origin: ti,
                first: k == 0,
            });
            cur = next;
        }
    }
    let order = topo_sort(
        states,
        letters
            .iter()
            .map(|e| (e.from, e.to))
            .chain(eps.iter().zip(&eps_from).map(|(e, &f)| (f, e.to))),
    )?;

    let mut letter_out: Vec<Vec<usize>> = vec![Vec::new(); states];
    for (i, e) in letters.iter().enumerate() {
        letter_out[e.from].push(i);
    }
    let mut eps_out: Vec<Vec<usize>> = vec![Vec::new(); states];
    for (i, &f) in eps_from.iter().enumerate() {
        eps_out[f].push(i);
    }

    let mut closure: Vec<BTreeMap<usize, Option<usize>>> = vec![BTreeMap::new(); states];
    let mut added = 0;
    for &p in order.iter().rev() {
        let mut targets: HashSet<usize> = eps_out[p].iter().map(|&e| eps[e].to).collect();
        for &e1 in &letter_out[p] {
            let (a, q) = (letters[e1].letter, letters[e1].to);
            let inv = group.inverse_letter(a);
            for &r in closure[q].keys() {
                for &e2 in &letter_out[r] {
                    let s = letters[e2].to;
                    if letters[e2].letter != inv || !targets.insert(s) {
                        continue;
                    }
                    eps.push(EpsEdge {
                        to: s,
                        origin: EpsOrigin::Derived {
                            first: e1,
                            mid: (q, r),
                            second: e2,
                        },
                    });
                    eps_out[p].push(eps.len() - 1);
                    added += 1;
                }
            }
        }
        let mut cl: BTreeMap<usize, Option<usize>> = BTreeMap::from([(p, None)]);
        for &e in &eps_out[p] {
            for &r in closure[eps[e].to].keys() {
                cl.entry(r).or_insert(Some(e));
            }
        }
        closure[p] = cl;
    }

    Ok(Saturated {
        states,
        initial: nfa.initial,
        finals: nfa.finals.clone(),
        letters,
        eps,
        eps_out,
        closure,
        added,
    })
}
