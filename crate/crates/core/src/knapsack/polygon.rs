//! Cutting the solution polygon of a depth-`k ≥ 3` expression into pieces of
//! smaller depth.
//!
//! For a solution with all exponents positive, the closed path
//! `P_1 Q_1 ⋯ P_k Q_k` (`P_i` reads `u_i^{n_i}`, `Q_i` reads `v_i`) is a
//! polygon with quasigeodesic sides, so every point of `P_2` lies within `h`
//! of another side. Each way this can happen yields short connecting words
//! that cut the polygon into closed paths of smaller depth. Since we do not
//! detect which situation occurs, the formula is the disjunction over every
//! case and every choice of connecting word and cut positions. Each disjunct
//! is an exact consequence of `E = 1` for some solution and implies `E = 1`,
//! so the union is exact.
//!
//! Notation below is 1-based as in `u_1^{x_1} v_1 ⋯ u_k^{x_k} v_k`; a power
//! split at a point becomes `u^{y} (u_{·,1} u_{·,2}) u^{z}` with
//! `x = y + 1 + z`.

use std::collections::HashSet;

use super::expr::Item;
use super::formula::{Conjunct, Link, SolutionFormula};
use super::{KnapsackError, KnapsackExpression};
use crate::groups::{Group, Letter, Word};

/// Number of disjuncts produced per case, for diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseCounts(pub [u64; 8]);

/// Labels for the ways a point of `P_2` can be close to another side,
/// in the order of [`CaseCounts`].
pub const CASE_NAMES: [&str; 8] = [
    "far-constant",
    "far-power",
    "end-first-constant",
    "end-first-power",
    "constant-constant",
    "power-constant",
    "constant-power",
    "power-power",
];

fn splits(w: &[Letter]) -> impl Iterator<Item = (Word, Word)> + '_ {
    (0..=w.len()).map(move |r| (w[..r].to_vec(), w[r..].to_vec()))
}

fn cat(parts: &[&[Letter]]) -> Word {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

struct Ctx<'a> {
    group: &'a Group,
    u: Vec<Word>,
    v: Vec<Word>,
    x: Vec<String>,
    k: usize,
}

impl Ctx<'_> {
    // 1-based accessors.
    fn u(&self, i: usize) -> &[Letter] {
        &self.u[i - 1]
    }
    fn v(&self, i: usize) -> &[Letter] {
        &self.v[i - 1]
    }
    fn x(&self, i: usize) -> &str {
        &self.x[i - 1]
    }
    fn y(&self, i: usize) -> String {
        format!("{}~y", self.x(i))
    }
    fn z(&self, i: usize) -> String {
        format!("{}~z", self.x(i))
    }
    fn pow(&self, i: usize, var: String) -> Item {
        Item::Pow(self.u(i).to_vec(), var)
    }
    fn c(&self, w: Word) -> Item {
        Item::Const(w)
    }
    /// `u_a^{x_a} v_a ⋯ u_b^{x_b} v_b`, empty if `a > b`.
    fn run(&self, a: usize, b: usize) -> Vec<Item> {
        let mut out = Vec::new();
        for i in a..=b.min(self.k) {
            if i < 1 {
                continue;
            }
            out.push(self.pow(i, self.x(i).to_owned()));
            out.push(Item::Const(self.v(i).to_vec()));
        }
        out
    }
    fn inv(&self, w: &[Letter]) -> Word {
        self.group.inverse_word(w)
    }
    fn expr(&self, items: Vec<Item>) -> KnapsackExpression {
        KnapsackExpression::from_items(items).reduced(self.group)
    }
    fn link(&self, i: usize) -> Link {
        Link {
            target: self.x(i).to_owned(),
            left: self.y(i),
            right: self.z(i),
        }
    }
}

struct Out {
    seen: HashSet<Conjunct>,
    disjuncts: Vec<Conjunct>,
    counts: CaseCounts,
}

impl Out {
    fn push(&mut self, case: usize, subs: Vec<KnapsackExpression>, links: Vec<Link>) {
        let mut existentials = Vec::new();
        for l in &links {
            existentials.push(l.left.clone());
            existentials.push(l.right.clone());
        }
        let c = Conjunct {
            subequations: subs,
            links,
            existentials,
            ..Conjunct::default()
        };
        if self.seen.insert(c.clone()) {
            self.counts.0[case] += 1;
            self.disjuncts.push(c);
        }
    }
}

/// Rotates so that a longest power sits at position 2, then emits every case.
/// `e` must have depth ≥ 3 and an empty head.
pub fn split_polygon(group: &Group, e: &KnapsackExpression, h: u64) -> Result<(SolutionFormula, CaseCounts), KnapsackError> {
    let k = e.depth();
    if k < 3 {
        return Err(KnapsackError::Internal(format!("polygon splitting needs depth ≥ 3, got {k}")));
    }
    let e = e.rotated();
    let longest = (0..k).max_by_key(|&i| (e.factors()[i].u.len(), std::cmp::Reverse(i))).expect("k ≥ 3");
    let e = e.shifted((longest + k - 1) % k);
    let cx = Ctx {
        group,
        u: e.factors().iter().map(|f| f.u.clone()).collect(),
        v: e.factors().iter().map(|f| f.v.clone()).collect(),
        x: e.factors().iter().map(|f| f.var.clone()).collect(),
        k,
    };
    let ball_h = group.ball(h)?;
    let ball_h1 = group.ball(h + 1)?;
    let ball_2h1 = group.ball(2 * h + 1)?;
    let mut out = Out {
        seen: HashSet::new(),
        disjuncts: Vec::new(),
        counts: CaseCounts::default(),
    };

    // far-constant: a point of P_2 is close to a point of Q_i, 3 ≤ i ≤ k.
    //   F = u_1^{x_1} v_1 u_2^{y_2} (u_{2,1} w v_{i,2}) u_{i+1}^{x_{i+1}} ⋯ v_k
    //   G = u_{2,2} u_2^{z_2} v_2 u_3^{x_3} ⋯ u_i^{x_i} (v_{i,1} w⁻¹)
    for i in 3..=k {
        for (u21, u22) in splits(cx.u(2)) {
            for (vi1, vi2) in splits(cx.v(i)) {
                for w in &ball_h {
                    let mut f = cx.run(1, 1);
                    f.push(cx.pow(2, cx.y(2)));
                    f.push(cx.c(cat(&[&u21, w, &vi2])));
                    f.extend(cx.run(i + 1, k));
                    let mut g = vec![cx.c(u22.clone()), cx.pow(2, cx.z(2)), cx.c(cx.v(2).to_vec())];
                    g.extend(cx.run(3, i - 1));
                    g.push(cx.pow(i, cx.x(i).to_owned()));
                    g.push(cx.c(cat(&[&vi1, &cx.inv(w)])));
                    out.push(0, vec![cx.expr(f), cx.expr(g)], vec![cx.link(2)]);
                }
            }
        }
    }

    // far-power: a point of P_2 is close to a point of P_i, 4 ≤ i ≤ k.
    //   F = u_1^{x_1} v_1 u_2^{y_2} (u_{2,1} w u_{i,2}) u_i^{z_i} v_i ⋯ v_k
    //   G = u_{2,2} u_2^{z_2} v_2 ⋯ v_{i-1} u_i^{y_i} (u_{i,1} w⁻¹)
    for i in 4..=k {
        for (u21, u22) in splits(cx.u(2)) {
            for (ui1, ui2) in splits(cx.u(i)) {
                for w in &ball_h {
                    let mut f = cx.run(1, 1);
                    f.push(cx.pow(2, cx.y(2)));
                    f.push(cx.c(cat(&[&u21, w, &ui2])));
                    f.push(cx.pow(i, cx.z(i)));
                    f.push(cx.c(cx.v(i).to_vec()));
                    f.extend(cx.run(i + 1, k));
                    let mut g = vec![cx.c(u22.clone()), cx.pow(2, cx.z(2)), cx.c(cx.v(2).to_vec())];
                    g.extend(cx.run(3, i - 1));
                    g.push(cx.pow(i, cx.y(i)));
                    g.push(cx.c(cat(&[&ui1, &cx.inv(w)])));
                    out.push(1, vec![cx.expr(f), cx.expr(g)], vec![cx.link(2), cx.link(i)]);
                }
            }
        }
    }

    // end-first-constant: the end of P_2 is close to a point of Q_1.
    //   F = u_2^{x_2} (w v_{1,2}),  G = u_1^{x_1} (v_{1,1} w⁻¹ v_2) u_3^{x_3} ⋯ v_k
    for (v11, v12) in splits(cx.v(1)) {
        for w in &ball_h {
            let f = vec![cx.pow(2, cx.x(2).to_owned()), cx.c(cat(&[w, &v12]))];
            let mut g = vec![cx.pow(1, cx.x(1).to_owned()), cx.c(cat(&[&v11, &cx.inv(w), cx.v(2)]))];
            g.extend(cx.run(3, k));
            out.push(2, vec![cx.expr(f), cx.expr(g)], vec![]);
        }
    }

    // end-first-power: the end of P_2 is close to a point of P_1.
    //   F = u_1^{z_1} v_1 u_2^{x_2} (w u_{1,2}),  G = u_1^{y_1} (u_{1,1} w⁻¹ v_2) u_3^{x_3} ⋯ v_k
    for (u11, u12) in splits(cx.u(1)) {
        for w in &ball_h {
            let f = vec![
                cx.pow(1, cx.z(1)),
                cx.c(cx.v(1).to_vec()),
                cx.pow(2, cx.x(2).to_owned()),
                cx.c(cat(&[w, &u12])),
            ];
            let mut g = vec![cx.pow(1, cx.y(1)), cx.c(cat(&[&u11, &cx.inv(w), cx.v(2)]))];
            g.extend(cx.run(3, k));
            out.push(3, vec![cx.expr(f), cx.expr(g)], vec![cx.link(1)]);
        }
    }

    // Otherwise two neighbouring points of P_2 are close to q_1 ∈ P_1 ∪ Q_1
    // and q_2 ∈ Q_2 ∪ P_3, and |w| ≤ 2h + 1 for a path w between them.

    // constant-constant: q_1 ∈ Q_1, q_2 ∈ Q_2.
    //   F = v_{1,2} u_2^{x_2} (v_{2,1} w),  G = u_1^{x_1} (v_{1,1} w⁻¹ v_{2,2}) u_3^{x_3} ⋯ v_k
    for (v11, v12) in splits(cx.v(1)) {
        for (v21, v22) in splits(cx.v(2)) {
            for w in &ball_2h1 {
                let f = vec![cx.c(v12.clone()), cx.pow(2, cx.x(2).to_owned()), cx.c(cat(&[&v21, w]))];
                let mut g = vec![cx.pow(1, cx.x(1).to_owned()), cx.c(cat(&[&v11, &cx.inv(w), &v22]))];
                g.extend(cx.run(3, k));
                out.push(4, vec![cx.expr(f), cx.expr(g)], vec![]);
            }
        }
    }

    // power-constant: q_1 ∈ P_1, q_2 ∈ Q_2.
    //   F = u_{1,2} u_1^{z_1} v_1 u_2^{x_2} (v_{2,1} w),  G = u_1^{y_1} (u_{1,1} w⁻¹ v_{2,2}) u_3^{x_3} ⋯ v_k
    for (u11, u12) in splits(cx.u(1)) {
        for (v21, v22) in splits(cx.v(2)) {
            for w in &ball_2h1 {
                let f = vec![
                    cx.c(u12.clone()),
                    cx.pow(1, cx.z(1)),
                    cx.c(cx.v(1).to_vec()),
                    cx.pow(2, cx.x(2).to_owned()),
                    cx.c(cat(&[&v21, w])),
                ];
                let mut g = vec![cx.pow(1, cx.y(1)), cx.c(cat(&[&u11, &cx.inv(w), &v22]))];
                g.extend(cx.run(3, k));
                out.push(5, vec![cx.expr(f), cx.expr(g)], vec![cx.link(1)]);
            }
        }
    }

    // constant-power: q_1 ∈ Q_1, q_2 ∈ P_3 — power-constant mirrored: the cut point moves
    // from P_1 to Q_1 (v_1 = v_{1,1} v_{1,2}) and from Q_2 to P_3
    // (u_3^{x_3} = u_3^{y_3} u_{3,1} u_{3,2} u_3^{z_3}). With w read from q_2 to q_1,
    //   F = v_{1,2} u_2^{x_2} v_2 u_3^{y_3} (u_{3,1} w)
    //   G = u_3^{z_3} v_3 u_4^{x_4} ⋯ v_k u_1^{x_1} (v_{1,1} w⁻¹ u_{3,2})
    for (v11, v12) in splits(cx.v(1)) {
        for (u31, u32) in splits(cx.u(3)) {
            for w in &ball_2h1 {
                let f = vec![
                    cx.c(v12.clone()),
                    cx.pow(2, cx.x(2).to_owned()),
                    cx.c(cx.v(2).to_vec()),
                    cx.pow(3, cx.y(3)),
                    cx.c(cat(&[&u31, w])),
                ];
                let mut g = vec![cx.pow(3, cx.z(3)), cx.c(cx.v(3).to_vec())];
                g.extend(cx.run(4, k));
                g.push(cx.pow(1, cx.x(1).to_owned()));
                g.push(cx.c(cat(&[&v11, &cx.inv(w), &u32])));
                out.push(6, vec![cx.expr(f), cx.expr(g)], vec![cx.link(3)]);
            }
        }
    }

    // power-power: q_1 ∈ P_1, q_2 ∈ P_3, with w = w_1⁻¹ w_2.
    //   F = u_1^{z_1} v_1 u_2^{y_2} (u_{2,1} w_1 u_{1,2})
    //   G = u_2^{z_2} v_2 u_3^{y_3} (u_{3,1} w_2⁻¹ u_{2,2})
    //   H = u_3^{z_3} v_3 u_4^{x_4} ⋯ v_k u_1^{y_1} (u_{1,1} w u_{3,2})
    for (u11, u12) in splits(cx.u(1)) {
        for (u21, u22) in splits(cx.u(2)) {
            for (u31, u32) in splits(cx.u(3)) {
                for w1 in &ball_h {
                    for w2 in &ball_h1 {
                        let w = group.shlex(&cat(&[&cx.inv(w1), w2]));
                        let f = vec![
                            cx.pow(1, cx.z(1)),
                            cx.c(cx.v(1).to_vec()),
                            cx.pow(2, cx.y(2)),
                            cx.c(cat(&[&u21, w1, &u12])),
                        ];
                        let g = vec![
                            cx.pow(2, cx.z(2)),
                            cx.c(cx.v(2).to_vec()),
                            cx.pow(3, cx.y(3)),
                            cx.c(cat(&[&u31, &cx.inv(w2), &u22])),
                        ];
                        let mut hh = vec![cx.pow(3, cx.z(3)), cx.c(cx.v(3).to_vec())];
                        hh.extend(cx.run(4, k));
                        hh.push(cx.pow(1, cx.y(1)));
                        hh.push(cx.c(cat(&[&u11, &w, &u32])));
                        out.push(
                            7,
                            vec![cx.expr(f), cx.expr(g), cx.expr(hh)],
                            vec![cx.link(1), cx.link(2), cx.link(3)],
                        );
                    }
                }
            }
        }
    }

    for c in &out.disjuncts {
        for s in &c.subequations {
            assert!(s.depth() < k, "polygon piece of depth {} from depth {k}", s.depth());
        }
    }
    Ok((
        SolutionFormula {
            variables: cx.x.clone(),
            disjuncts: out.disjuncts,
        },
        out.counts,
    ))
}
