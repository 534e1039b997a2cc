//! Counting automaton for `v_1 u_1^{x_1} = u_2^{x_2} v_2` with long `u_1`-side.
//!
//! States besides `q0`, `qf` are triples `(i, b, j)`: the position `i` inside
//! the current `u_1` factor, the position `j` inside the current `u_2` factor,
//! and the short element `b` with `v_1 ·(u_1-prefix) = (u_2-prefix)· b`. The
//! run slides the connecting element `b` along both powers, emitting `(1,0)`
//! when a `u_1` factor completes and `(0,1)` when a `u_2` factor completes.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{AutomataError, ParikhNFA};
use crate::groups::{Element, Group, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitParams {
    pub p: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

/// `x = u_1^p u_1[:r]` has length `n1`; `z = u_1^s` minus its first `t`
/// letters has length `n2`.
pub fn split_params(n1: u64, n2: u64, l1: u64) -> Result<SplitParams, AutomataError> {
    if l1 == 0 {
        return Err(AutomataError::EmptyWord("u1"));
    }
    let s = n2.div_ceil(l1);
    Ok(SplitParams {
        p: n1 / l1,
        r: n1 % l1,
        s,
        t: s * l1 - n2,
    })
}

/// Geometry constants consumed by the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Depth2Params {
    pub lambda: u64,
    pub epsilon: u64,
    pub delta: u64,
    pub kappa: u64,
    pub gamma: u64,
}

impl Depth2Params {
    /// `N_i = λ(m_i + 2δ + κ) + ε` for `m_i = |v_i|`.
    pub fn split_length(&self, m: u64) -> u64 {
        self.lambda * (m + 2 * self.delta + self.kappa) + self.epsilon
    }

    /// Upper bound on `|x'|` (resp. `|z'|`) for `m = m_1, n = N_1` (resp. `m_2, N_2`).
    pub fn corner_range(&self, m: u64, n: u64) -> u64 {
        self.lambda * (m + n + 2 * self.delta + 2 * self.kappa) + self.epsilon
    }
}

struct Builder<'a> {
    group: &'a Group,
    ball: Vec<Element>,
    index: HashMap<Element, usize>,
    left_cache: HashMap<(usize, Letter), Option<usize>>,
    states: HashMap<(usize, usize, usize), usize>,
    nfa: ParikhNFA,
}

impl Builder<'_> {
    fn state(&mut self, key: (usize, usize, usize), queue: &mut VecDeque<(usize, usize, usize)>) -> usize {
        if let Some(&s) = self.states.get(&key) {
            return s;
        }
        let id = self.nfa.states;
        self.nfa.states += 1;
        self.states.insert(key, id);
        queue.push_back(key);
        id
    }

    fn right(&self, b: usize, l: Letter) -> Option<usize> {
        let mut e = self.ball[b].clone();
        self.group.mul_letter(&mut e, l);
        self.index.get(&e).copied()
    }

    fn left(&mut self, l: Letter, b: usize) -> Option<usize> {
        if let Some(&r) = self.left_cache.get(&(b, l)) {
            return r;
        }
        let mut e = self.group.eval(&[l]);
        self.group.mul_word(&mut e, &self.group.element_word(&self.ball[b]));
        let r = self.index.get(&e).copied();
        self.left_cache.insert((b, l), r);
        r
    }
}

fn check_geodesic(group: &Group, w: &[Letter], name: &'static str) -> Result<(), AutomataError> {
    if group.geodesic_length(w)? != w.len() as u64 {
        return Err(AutomataError::NotGeodesic(name));
    }
    Ok(())
}

/// Builds the counting automaton whose Parikh image is the set of solutions
/// `(n_1, n_2)` with `n_1 ≥ (N_1 + N_2)/ℓ_1`.
pub fn build_depth2_nfa(
    group: &Group,
    v1: &[Letter],
    u1: &[Letter],
    u2: &[Letter],
    v2: &[Letter],
    c: &Depth2Params,
) -> Result<ParikhNFA, AutomataError> {
    if u1.is_empty() {
        return Err(AutomataError::EmptyWord("u1"));
    }
    if u2.is_empty() {
        return Err(AutomataError::EmptyWord("u2"));
    }
    check_geodesic(group, u1, "u1")?;
    check_geodesic(group, u2, "u2")?;
    check_geodesic(group, v1, "v1")?;
    check_geodesic(group, v2, "v2")?;
    let (l1, l2) = (u1.len(), u2.len());
    let (m1, m2) = (v1.len() as u64, v2.len() as u64);
    let n1 = c.split_length(m1);
    let n2 = c.split_length(m2);
    let sp = split_params(n1, n2, l1 as u64)?;

    let ball = group.ball_elements(c.gamma, crate::groups::DEFAULT_BALL_CAP)?;
    let index: HashMap<Element, usize> = ball.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut b = Builder {
        group,
        ball,
        index,
        left_cache: HashMap::new(),
        states: HashMap::new(),
        nfa: ParikhNFA::new(2, 0, vec![1], 2),
    };
    let (q0, qf) = (0usize, 1usize);
    let mut queue = VecDeque::new();

    // Family 1: q0 → (r, c, r′) with c = (u2^{p′} u2[:r′])⁻¹ v1 u1^p u1[:r].
    let mut x: Word = v1.to_vec();
    for _ in 0..sp.p {
        x.extend_from_slice(u1);
    }
    x.extend_from_slice(&u1[..sp.r as usize]);
    let mut dinv = group.eval(&group.inverse_word(&x));
    let k1 = c.corner_range(m1, n1);
    let mut first: BTreeMap<(usize, usize, usize), Vec<Vec<u64>>> = BTreeMap::new();
    for k in 0..=k1 as usize {
        if group.element_length(&dinv) <= c.gamma {
            let ci = b.index[&group.inverse(&dinv)];
            let key = (sp.r as usize, ci, k % l2);
            first.entry(key).or_default().push(vec![sp.p, (k / l2) as u64]);
        }
        group.mul_letter(&mut dinv, u2[k % l2]);
    }

    // Family 6: (t, d, t′) → qf with d·z = z′·v2, z = u1[:t]⁻¹ u1^s,
    // z′ = u2[:t′]⁻¹ u2^{s′} of length k.
    let mut z: Word = Vec::new();
    for _ in 0..sp.s {
        z.extend_from_slice(u1);
    }
    let z: Word = z[sp.t as usize..].to_vec();
    let mut winv = z.clone();
    winv.extend(group.inverse_word(v2));
    let mut e = group.eval(&winv);
    let k2 = c.corner_range(m2, n2);
    let mut last: HashMap<(usize, usize, usize), Vec<Vec<u64>>> = HashMap::new();
    for k in 0..=k2 as usize {
        if group.element_length(&e) <= c.gamma {
            let di = b.index[&group.inverse(&e)];
            let t2 = (l2 - k % l2) % l2;
            let s2 = k.div_ceil(l2) as u64;
            last.entry((sp.t as usize, di, t2)).or_default().push(vec![sp.s, s2]);
        }
        let next_t = (l2 - (k + 1) % l2) % l2;
        group.mul_letter(&mut e, group.inverse_letter(u2[next_t]));
    }

    for (key, labels) in first {
        let s = b.state(key, &mut queue);
        for lab in labels {
            b.nfa.add_transition(q0, lab, s);
        }
    }

    // Families 2–5 by exploration from the family-1 targets.
    while let Some((i, bi, j)) = queue.pop_front() {
        let from = b.states[&(i, bi, j)];
        if let Some(b2) = b.right(bi, u1[i]) {
            let wrap = i + 1 == l1;
            let to = b.state(((i + 1) % l1, b2, j), &mut queue);
            b.nfa.add_transition(from, vec![wrap as u64, 0], to);
        }
        let inv = group.inverse_letter(u2[j]);
        if let Some(b2) = b.left(inv, bi) {
            let wrap = j + 1 == l2;
            let to = b.state((i, b2, (j + 1) % l2), &mut queue);
            b.nfa.add_transition(from, vec![0, wrap as u64], to);
        }
        if let Some(labels) = last.get(&(i, bi, j)) {
            for lab in labels {
                b.nfa.add_transition(from, lab.clone(), qf);
            }
        }
    }
    b.nfa.transitions.sort();
    b.nfa.transitions.dedup();
    log::trace!(
        "depth-2 automaton: {} states, {} transitions (ℓ1={l1}, ℓ2={l2}, |B_γ|={})",
        b.nfa.states,
        b.nfa.transitions.len(),
        b.ball.len()
    );
    Ok(b.nfa)
}
