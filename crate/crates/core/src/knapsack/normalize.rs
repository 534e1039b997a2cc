//! Rewriting a knapsack expression into pieces whose powers have infinite
//! order and quasigeodesic powers.
//!
//! Torsion powers are replaced by their residues (`x ≡ f mod o`), and every
//! remaining power `u^x` is conjugated into `p^{x'}` with geodesic or at
//! least uniformly quasigeodesic powers of `p`, where `x = m·x' + d`.

use super::expr::Item;
use super::formula::{Congruence, Conjunct, SolutionFormula};
use super::{KnapsackError, KnapsackExpression};
use crate::groups::{Group, GroupSpec, Letter, Order, Word};
use crate::semilinear::Valuation;

/// Exponents up to which power quasigeodesicity is validated.
pub const TEST_EXPONENT: usize = 8;

/// `E = 1 ⇔ ⋁_I (E_I = 1 ∧ ⋀_{i∈I} x_i > 0)`; dropped variables are pinned to 0.
pub fn positivity_split(e: &KnapsackExpression) -> SolutionFormula {
    let k = e.depth();
    let vars = e.variables();
    let mut disjuncts = Vec::with_capacity(1 << k);
    for mask in 0u64..(1u64 << k) {
        let mut items = vec![Item::Const(e.head().to_vec())];
        let mut positivity = Vec::new();
        let mut zeros = Vec::new();
        for (i, f) in e.factors().iter().enumerate() {
            if mask & (1 << i) != 0 {
                items.push(Item::Pow(f.u.clone(), f.var.clone()));
                positivity.push(f.var.clone());
            } else {
                zeros.push(f.var.clone());
            }
            items.push(Item::Const(f.v.clone()));
        }
        disjuncts.push(Conjunct {
            subequations: vec![KnapsackExpression::from_items(items)],
            positivity,
            zeros,
            ..Conjunct::default()
        });
    }
    SolutionFormula {
        variables: vars,
        disjuncts,
    }
}

/// Removes every torsion power, one branch per residue vector.
/// Input words must be shortlex-reduced.
pub fn reduce_torsion(
    group: &Group,
    e: &KnapsackExpression,
) -> Result<Vec<(KnapsackExpression, Vec<Congruence>)>, KnapsackError> {
    let mut orders = Vec::with_capacity(e.depth());
    for f in e.factors() {
        orders.push(match group.order_of(&f.u)? {
            Order::Finite(o) => Some(o),
            Order::Infinite => None,
        });
    }
    let torsion: Vec<usize> = (0..e.depth()).filter(|&i| orders[i].is_some()).collect();
    let mut residues = vec![0u64; torsion.len()];
    let mut out = Vec::new();
    loop {
        let mut items = vec![Item::Const(e.head().to_vec())];
        let mut congruences = Vec::new();
        for (i, f) in e.factors().iter().enumerate() {
            match torsion.iter().position(|&t| t == i) {
                Some(j) => {
                    let r = residues[j];
                    items.push(Item::Const(f.u.repeat(r as usize)));
                    congruences.push(Congruence {
                        var: f.var.clone(),
                        residue: r,
                        modulus: orders[i].expect("torsion"),
                    });
                }
                None => items.push(Item::Pow(f.u.clone(), f.var.clone())),
            }
            items.push(Item::Const(f.v.clone()));
        }
        out.push((KnapsackExpression::from_items(items).reduced(group), congruences));
        // Next residue vector, odometer style.
        let mut j = 0;
        loop {
            if j == torsion.len() {
                return Ok(out);
            }
            residues[j] += 1;
            if residues[j] < orders[torsion[j]].expect("torsion") {
                break;
            }
            residues[j] = 0;
            j += 1;
        }
    }
}

/// One conjugated power `u^x = P (p)^{x'} S` with `x = m·x' + d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedPower {
    pub prefix: Word,
    pub power: Word,
    pub suffix: Word,
    pub m: u64,
    pub d: u64,
    /// Every `power^n` is a geodesic word.
    pub geodesic: bool,
}

/// A piece `E_d` with `sol(E) ⊇ m·sol(E_d) + d` (equality over the union of pieces)
/// and constants `(λ, ε)` for which all powers of `E_d` are quasigeodesic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub expr: KnapsackExpression,
    pub scale: Valuation,
    pub shift: Valuation,
    pub lambda: u64,
    pub epsilon: u64,
}

fn tree_like(spec: &GroupSpec) -> bool {
    match spec {
        GroupSpec::Free(_) | GroupSpec::Finite { .. } => true,
        GroupSpec::FreeProduct(a, b) => tree_like(a) && tree_like(b),
        GroupSpec::DirectZ(_) => false,
    }
}

/// Whether all powers of `p` are geodesic. In free groups and free products
/// of free and finite groups this holds exactly when `p²` is, since normal
/// forms of powers only interact at the junctions.
fn powers_geodesic(group: &Group, p: &[Letter]) -> bool {
    if !tree_like(group.spec()) {
        return false;
    }
    let two: Word = p.repeat(2);
    group.shlex(&two).len() == two.len()
        && (1..=TEST_EXPONENT).all(|n| group.shlex(&p.repeat(n)).len() == n * p.len())
}

fn powers_quasigeodesic(group: &Group, p: &[Letter], lambda: u64, epsilon: u64) -> bool {
    (1..=TEST_EXPONENT).all(|n| group.is_local_quasigeodesic(&p.repeat(n), lambda, epsilon, None))
}

/// Conjugates one infinite-order, shortlex-reduced power.
pub fn normalize_power(group: &Group, u: &[Letter]) -> Result<Vec<NormalizedPower>, KnapsackError> {
    let c = group.constants()?;
    let half = u.len() / 2;
    let (u1, u2) = u.split_at(half);
    let mut rot = u2.to_vec();
    rot.extend_from_slice(u1);
    let tilde = group.shlex(&rot);
    let (power, conj, m) = if tilde.len() as u64 > 2 * c.l {
        let ball = group.ball(4 * c.delta)?;
        let mut found = None;
        'search: for cw in &ball {
            for m in 1..=c.k_eh.max(1) {
                let mut w = group.inverse_word(cw);
                w.extend(tilde.repeat(m as usize));
                w.extend_from_slice(cw);
                let cand = group.shlex(&w);
                let geo = (1..=TEST_EXPONENT).all(|n| {
                    let p = cand.repeat(n);
                    group.shlex(&p).len() == p.len()
                });
                if geo {
                    found = Some((cand, cw.clone(), m));
                    break 'search;
                }
            }
        }
        found.ok_or_else(|| {
            KnapsackError::NormalizationFailed(format!(
                "no conjugator in B_{} with exponent ≤ {} makes powers of {} geodesic",
                4 * c.delta,
                c.k_eh,
                group.format_word(u)
            ))
        })?
    } else {
        (tilde.clone(), Vec::new(), 1)
    };
    let geodesic = powers_geodesic(group, &power);
    let u1_inv = group.inverse_word(u1);
    let c_inv = group.inverse_word(&conj);
    let mut out = Vec::with_capacity(m as usize);
    for d in 0..m {
        // u^{m x' + d} = u1 ũ^{m x' + d} u1⁻¹ = (u1 ũ^d c) (c⁻¹ ũ^m c)^{x'} (c⁻¹ u1⁻¹)
        let mut prefix = u1.to_vec();
        prefix.extend(tilde.repeat(d as usize));
        prefix.extend_from_slice(&conj);
        let mut suffix = c_inv.clone();
        suffix.extend_from_slice(&u1_inv);
        out.push(NormalizedPower {
            prefix: group.shlex(&prefix),
            power: power.clone(),
            suffix: group.shlex(&suffix),
            m,
            d,
            geodesic,
        });
    }
    Ok(out)
}

/// Splits every power per [`normalize_power`]; one piece per residue vector `d`.
/// All powers must have infinite order.
pub fn normalize_powers(group: &Group, e: &KnapsackExpression) -> Result<Vec<Normalized>, KnapsackError> {
    let consts = group.constants()?;
    let per: Vec<Vec<NormalizedPower>> = e
        .factors()
        .iter()
        .map(|f| normalize_power(group, &f.u))
        .collect::<Result<_, _>>()?;
    let mut lambda = 1;
    let mut epsilon = 0;
    for np in per.iter().map(|v| &v[0]) {
        let (l, eps) = if np.geodesic {
            (1, 0)
        } else {
            consts.for_word_length(np.power.len() as u64)
        };
        lambda = lambda.max(l);
        epsilon = epsilon.max(eps);
    }
    for np in per.iter().map(|v| &v[0]) {
        if !powers_quasigeodesic(group, &np.power, lambda, epsilon) {
            return Err(KnapsackError::NormalizationFailed(format!(
                "powers of {} are not ({lambda}, {epsilon})-quasigeodesic",
                group.format_word(&np.power)
            )));
        }
    }

    let mut out = Vec::new();
    let mut choice = vec![0usize; per.len()];
    loop {
        let mut items = vec![Item::Const(e.head().to_vec())];
        let mut scale = Valuation::new();
        let mut shift = Valuation::new();
        for (i, f) in e.factors().iter().enumerate() {
            let np = &per[i][choice[i]];
            items.push(Item::Const(np.prefix.clone()));
            items.push(Item::Pow(np.power.clone(), f.var.clone()));
            items.push(Item::Const(np.suffix.clone()));
            items.push(Item::Const(f.v.clone()));
            scale.insert(f.var.clone(), np.m);
            shift.insert(f.var.clone(), np.d);
        }
        out.push(Normalized {
            expr: KnapsackExpression::from_items(items).reduced(group),
            scale,
            shift,
            lambda,
            epsilon,
        });
        let mut j = 0;
        loop {
            if j == per.len() {
                return Ok(out);
            }
            choice[j] += 1;
            if choice[j] < per[j].len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
    }
}

/// One output of [`quasigeodesify`]:
/// `sol(E) = ⋃ ((scale · sol(expr) + shift) ⊕ ⋂ congruences)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub normalized: Normalized,
    pub congruences: Vec<Congruence>,
}

/// Torsion reduction followed by power normalization.
pub fn quasigeodesify(group: &Group, e: &KnapsackExpression) -> Result<Vec<Branch>, KnapsackError> {
    let e = e.reduced(group);
    let mut out = Vec::new();
    for (ef, congruences) in reduce_torsion(group, &e)? {
        for normalized in normalize_powers(group, &ef)? {
            out.push(Branch {
                normalized,
                congruences: congruences.clone(),
            });
        }
    }
    log::debug!(
        "normalization: |E| = {}, {} branches, max piece size {}",
        e.size(),
        out.len(),
        out.iter().map(|b| b.normalized.expr.size()).max().unwrap_or(0)
    );
    Ok(out)
}
