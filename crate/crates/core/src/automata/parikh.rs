//! Counting automata and their Parikh images.
//!
//! Construction: after trimming, a breadth-first search over triples
//! `(state, visited set, vector)` enumerates every run of length at most
//! `n²`. Each run ending in a final state contributes the linear set
//! `vector + cycles(visited)*`, where the periods are the vectors of the
//! simple cycles inside the visited set (or, for automata with very many
//! simple cycles, of all closed walks of length at most `|visited|` there).
//!
//! A run whose vector is a vector already reached at the same state with the
//! same visited set plus one of those periods is not expanded further.
//!
//! Soundness: a closed walk inside the visited set starts at a state the run
//! passes through, so it can be spliced in. Completeness: any accepting run
//! that visits some state more than `|C|` times (C its visited set) contains
//! a simple cycle whose removal keeps the visited set, so every run reduces
//! to one of length at most `|C|²` plus simple cycles inside `C`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::AutomataError;
use crate::semilinear::SemilinearSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CountTransition {
    pub from: usize,
    pub label: Vec<u64>,
    pub to: usize,
}

/// NFA whose transitions carry count vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParikhNFA {
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub dim: usize,
    pub transitions: Vec<CountTransition>,
}

type Bits = Vec<u64>;

/// Above this many simple cycles, periods come from bounded closed walks instead.
const SIMPLE_CYCLE_CAP: usize = 200_000;

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_iter(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &x)| {
        (0..64).filter(move |k| x & (1 << k) != 0).map(move |k| w * 64 + k)
    })
}

impl ParikhNFA {
    pub fn new(states: usize, initial: usize, finals: Vec<usize>, dim: usize) -> Self {
        ParikhNFA {
            states,
            initial,
            finals,
            dim,
            transitions: Vec::new(),
        }
    }

    pub fn add_transition(&mut self, from: usize, label: Vec<u64>, to: usize) {
        debug_assert_eq!(label.len(), self.dim);
        self.transitions.push(CountTransition { from, label, to });
    }

    pub fn validate(&self) -> Result<(), AutomataError> {
        let ok = |s: usize| if s < self.states { Ok(()) } else { Err(AutomataError::BadState(s)) };
        ok(self.initial)?;
        for &f in &self.finals {
            ok(f)?;
        }
        for t in &self.transitions {
            ok(t.from)?;
            ok(t.to)?;
            if t.label.len() != self.dim {
                return Err(AutomataError::Dimension {
                    expected: self.dim,
                    found: t.label.len(),
                });
            }
        }
        Ok(())
    }

    /// States reachable from the initial state and co-reachable to a final one.
    pub fn useful_states(&self) -> Vec<bool> {
        let n = self.states;
        let mut fwd = vec![false; n];
        let mut bwd = vec![false; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut inc: Vec<Vec<usize>> = vec![Vec::new(); n];
        for t in &self.transitions {
            out[t.from].push(t.to);
            inc[t.to].push(t.from);
        }
        let walk = |start: Vec<usize>, adj: &Vec<Vec<usize>>, seen: &mut Vec<bool>| {
            let mut stack = start;
            while let Some(p) = stack.pop() {
                if seen[p] {
                    continue;
                }
                seen[p] = true;
                stack.extend(adj[p].iter().copied());
            }
        };
        walk(vec![self.initial], &out, &mut fwd);
        walk(self.finals.clone(), &inc, &mut bwd);
        (0..n).map(|i| fwd[i] && bwd[i]).collect()
    }

    /// The trimmed automaton; `None` if nothing is accepted.
    pub fn trim(&self) -> Option<ParikhNFA> {
        let useful = self.useful_states();
        if !useful[self.initial] {
            return None;
        }
        let mut map = vec![usize::MAX; self.states];
        let mut next = 0;
        for (i, &u) in useful.iter().enumerate() {
            if u {
                map[i] = next;
                next += 1;
            }
        }
        let mut out = ParikhNFA::new(
            next,
            map[self.initial],
            self.finals.iter().filter(|&&f| useful[f]).map(|&f| map[f]).collect(),
            self.dim,
        );
        let mut seen = HashSet::new();
        for t in &self.transitions {
            if useful[t.from] && useful[t.to] {
                let tr = CountTransition {
                    from: map[t.from],
                    label: t.label.clone(),
                    to: map[t.to],
                };
                if seen.insert(tr.clone()) {
                    out.transitions.push(tr);
                }
            }
        }
        out.finals.sort_unstable();
        out.finals.dedup();
        Some(out)
    }

    /// Exactly the Parikh vectors of accepted runs that lie in `[0, bound]^dim`,
    /// by search over `(state, vector)` pairs.
    pub fn box_image(&self, bound: u64) -> BTreeSet<Vec<u64>> {
        let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
        let mut queue = VecDeque::new();
        let start = (self.initial, vec![0; self.dim]);
        seen.insert(start.clone());
        queue.push_back(start);
        let mut out = BTreeSet::new();
        while let Some((q, v)) = queue.pop_front() {
            if self.finals.contains(&q) {
                out.insert(v.clone());
            }
            for t in self.transitions.iter().filter(|t| t.from == q) {
                let w: Vec<u64> = v.iter().zip(&t.label).map(|(a, b)| a + b).collect();
                if w.iter().all(|&x| x <= bound) && seen.insert((t.to, w.clone())) {
                    queue.push_back((t.to, w));
                }
            }
        }
        out
    }
}

/// Every simple cycle as (its state set, its count vector), or `None` if
/// there are more than `cap`.
fn simple_cycles(nfa: &ParikhNFA, words: usize, cap: usize) -> Option<Vec<(Bits, Vec<u64>)>> {
    let mut out_edges: Vec<Vec<&CountTransition>> = vec![Vec::new(); nfa.states];
    for t in &nfa.transitions {
        out_edges[t.from].push(t);
    }
    let mut found: BTreeSet<(Bits, Vec<u64>)> = BTreeSet::new();
    // Cycles are enumerated from their least state, through larger states only.
    for s in 0..nfa.states {
        let mut on_path = vec![false; nfa.states];
        let mut bits = vec![0u64; words];
        bit_set(&mut bits, s);
        on_path[s] = true;
        // Stack of (state, next edge index, vector, bits).
        let mut stack = vec![(s, 0usize, vec![0u64; nfa.dim], bits)];
        while let Some(top) = stack.last_mut() {
            let (q, i) = (top.0, top.1);
            if i == out_edges[q].len() {
                on_path[q] = false;
                stack.pop();
                continue;
            }
            top.1 += 1;
            let t = out_edges[q][i];
            let w: Vec<u64> = top.2.iter().zip(&t.label).map(|(x, y)| x + y).collect();
            if t.to == s {
                found.insert((top.3.clone(), w));
                if found.len() > cap {
                    return None;
                }
            } else if t.to > s && !on_path[t.to] {
                let mut b = top.3.clone();
                bit_set(&mut b, t.to);
                on_path[t.to] = true;
                stack.push((t.to, 0, w, b));
            }
        }
    }
    Some(found.into_iter().collect())
}

/// Vectors of closed walks of length ≤ |C| that stay inside `C`; the
/// fallback when there are too many simple cycles to list.
fn closed_walk_vectors(nfa: &ParikhNFA, bits: &Bits) -> Vec<Vec<u64>> {
    let members: Vec<usize> = bit_iter(bits).collect();
    let mut inside = vec![false; nfa.states];
    for &m in &members {
        inside[m] = true;
    }
    let mut out: BTreeSet<Vec<u64>> = BTreeSet::new();
    let bound = members.len();
    for &s in &members {
        let mut layer: HashSet<(usize, Vec<u64>)> = HashSet::from([(s, vec![0; nfa.dim])]);
        let mut seen = layer.clone();
        for _ in 0..bound {
            let mut next = HashSet::new();
            for (q, v) in &layer {
                for t in nfa.transitions.iter().filter(|t| t.from == *q && inside[t.to]) {
                    let w: Vec<u64> = v.iter().zip(&t.label).map(|(a, b)| a + b).collect();
                    if t.to == s {
                        out.insert(w.clone());
                    }
                    if seen.insert((t.to, w.clone())) {
                        next.insert((t.to, w));
                    }
                }
            }
            layer = next;
        }
    }
    out.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect()
}

/// Period vectors available to runs that visited exactly `bits`.
struct Periods<'a> {
    nfa: &'a ParikhNFA,
    cycles: Option<Vec<(Bits, Vec<u64>)>>,
    cache: HashMap<Bits, Vec<Vec<u64>>>,
}

impl<'a> Periods<'a> {
    fn new(nfa: &'a ParikhNFA, words: usize) -> Self {
        Periods {
            nfa,
            cycles: simple_cycles(nfa, words, SIMPLE_CYCLE_CAP),
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, bits: &Bits) -> &[Vec<u64>] {
        let (nfa, cycles) = (self.nfa, &self.cycles);
        self.cache.entry(bits.clone()).or_insert_with(|| match cycles {
            Some(cs) => {
                let set: BTreeSet<Vec<u64>> = cs
                    .iter()
                    .filter(|(b, v)| b.iter().zip(bits).all(|(x, y)| x & !y == 0) && v.iter().any(|&x| x != 0))
                    .map(|(_, v)| v.clone())
                    .collect();
                set.into_iter().collect()
            }
            None => closed_walk_vectors(nfa, bits),
        })
    }
}

/// Semilinear representation of the Parikh image over variables `vars`
/// (one per label coordinate, in label order).
pub fn parikh_image<S: AsRef<str>>(nfa: &ParikhNFA, vars: &[S]) -> Result<SemilinearSet, AutomataError> {
    nfa.validate()?;
    if vars.len() != nfa.dim {
        return Err(AutomataError::Dimension {
            expected: nfa.dim,
            found: vars.len(),
        });
    }
    let names: Vec<String> = vars.iter().map(|v| v.as_ref().to_owned()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    let perm: Vec<usize> = names
        .iter()
        .map(|n| sorted.binary_search(n).expect("present"))
        .collect();
    let align = |v: &[u64]| {
        let mut out = vec![0; v.len()];
        for (x, &p) in v.iter().zip(&perm) {
            out[p] = *x;
        }
        out
    };

    let Some(a) = nfa.trim() else {
        return Ok(SemilinearSet::empty(sorted));
    };
    let n = a.states;
    let words = n.div_ceil(64).max(1);
    let max_len = n * n;
    let mut out_edges: Vec<Vec<&CountTransition>> = vec![Vec::new(); n];
    for t in &a.transitions {
        out_edges[t.from].push(t);
    }
    let is_final: Vec<bool> = (0..n).map(|i| a.finals.contains(&i)).collect();

    let mut periods = Periods::new(&a, words);
    let mut kernels: BTreeMap<Bits, BTreeSet<Vec<u64>>> = BTreeMap::new();
    let mut start_bits = vec![0u64; words];
    bit_set(&mut start_bits, a.initial);
    // Vectors reached (or covered) per (state, visited set). A vector `w`
    // equal to a covered `u` plus a closed-walk vector of the visited set
    // is skipped: every extension of its run is an extension of `u`'s run
    // of no greater length, whose linear set already contains it.
    let mut covered: HashMap<(usize, Bits), HashSet<Vec<u64>>> = HashMap::new();
    covered
        .entry((a.initial, start_bits.clone()))
        .or_default()
        .insert(vec![0u64; a.dim]);
    let mut layer = vec![(a.initial, start_bits, vec![0u64; a.dim])];
    let mut pruned = 0usize;
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (q, bits, v) in layer {
            if is_final[q] {
                kernels.entry(bits.clone()).or_default().insert(v.clone());
            }
            if depth == max_len {
                continue;
            }
            for t in &out_edges[q] {
                let mut b2 = bits.clone();
                bit_set(&mut b2, t.to);
                let w: Vec<u64> = v.iter().zip(&t.label).map(|(x, y)| x + y).collect();
                let seen = covered.entry((t.to, b2.clone())).or_default();
                if seen.contains(&w) {
                    continue;
                }
                let ps = periods.get(&b2);
                let redundant = ps.iter().any(|p| {
                    w.iter().zip(p).all(|(x, y)| x >= y)
                        && seen.contains(&w.iter().zip(p).map(|(x, y)| x - y).collect::<Vec<u64>>())
                });
                seen.insert(w.clone());
                if redundant {
                    pruned += 1;
                } else {
                    next.push((t.to, b2, w));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }

    let mut raw = Vec::new();
    for (bits, offsets) in kernels {
        let ps: Vec<Vec<u64>> = periods.get(&bits).iter().map(|p| align(p)).collect();
        for o in offsets {
            raw.push((align(&o), ps.clone()));
        }
    }
    log::debug!(
        "parikh image: {} useful states, {} kernel runs, {} runs pruned",
        n,
        raw.len(),
        pruned
    );
    Ok(SemilinearSet::from_raw(sorted, raw))
}
