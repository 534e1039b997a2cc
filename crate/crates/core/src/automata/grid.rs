//! The grid automaton of a knapsack expression.
//!
//! For `u_1^{x_1} v_1 ⋯ u_k^{x_k} v_k` and a bound `p`, states are pairs
//! `(i, j)` with `0 ≤ i ≤ k`, `0 ≤ j ≤ p`. Row `i` offers `p` steps, each
//! reading either `u_{i+1}` or nothing, and then `v_{i+1}` moves to row
//! `i + 1`. Accepted words are exactly `u_1^{n_1} v_1 ⋯ u_k^{n_k} v_k` with
//! every `n_i ≤ p`.

use super::{MembershipWitness, WordNFA};
use crate::groups::Word;

#[derive(Clone, Debug)]
pub struct GridNfa {
    pub nfa: WordNFA,
    /// For each transition, the index of the power it reads, if any.
    pub power_of: Vec<Option<usize>>,
    pub k: usize,
    pub p: u64,
}

impl GridNfa {
    pub fn state(&self, i: usize, j: u64) -> usize {
        i * (self.p as usize + 1) + j as usize
    }

    /// Exponents `n_1 … n_k` read along a witness run.
    pub fn exponents(&self, witness: &MembershipWitness) -> Vec<u64> {
        let mut n = vec![0; self.k];
        for &t in &witness.transitions {
            if let Some(i) = self.power_of[t] {
                n[i] += 1;
            }
        }
        n
    }
}

/// Builds the grid automaton for the factors `(u_i, v_i)`.
pub fn grid_nfa(factors: &[(Word, Word)], p: u64) -> GridNfa {
    let k = factors.len();
    let width = p as usize + 1;
    let mut nfa = WordNFA::new((k + 1) * width, 0, vec![k * width]);
    let mut power_of = Vec::new();
    for (i, (u, v)) in factors.iter().enumerate() {
        for j in 0..p as usize {
            let from = i * width + j;
            nfa.add_transition(from, u.clone(), from + 1);
            power_of.push(Some(i));
            nfa.add_transition(from, Vec::new(), from + 1);
            power_of.push(None);
        }
        nfa.add_transition(i * width + p as usize, v.clone(), (i + 1) * width);
        power_of.push(None);
    }
    GridNfa { nfa, power_of, k, p }
}
