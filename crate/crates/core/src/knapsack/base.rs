//! Solvers for depth one and two.

use super::KnapsackError;
use crate::automata::{build_depth2_nfa, parikh_image, Depth2Params};
use crate::groups::{Group, Letter};
use crate::semilinear::{SemilinearSet, Valuation};

/// Solutions of `u^x v = 1`: at most one, with `|u|·n ≤ λ|v| + ε`.
///
/// The scan runs past the bound as well, and any solution found beyond it
/// fails an assertion: that would mean the powers of `u` are not
/// `(λ, ε)`-quasigeodesic, i.e. the normalization is broken.
pub fn solve_depth1(
    group: &Group,
    u: &[Letter],
    v: &[Letter],
    var: &str,
    lambda: u64,
    epsilon: u64,
) -> Result<SemilinearSet, KnapsackError> {
    if u.is_empty() {
        return Err(KnapsackError::Internal("depth-1 solver needs a nonempty power".into()));
    }
    let v_len = group.geodesic_length(v)?;
    let bound = (lambda * v_len + epsilon) / u.len() as u64;
    let target = group.eval(&group.inverse_word(v));
    let mut e = group.identity();
    let mut hit = None;
    for n in 0..=2 * bound + 2 {
        if e == target {
            assert!(
                n <= bound,
                "depth-1 bound violated: {}^{n} = ({})⁻¹ with |u|·n = {} > λ|v|+ε = {}",
                group.format_word(u),
                group.format_word(v),
                u.len() as u64 * n,
                lambda * v_len + epsilon
            );
            assert!(hit.is_none(), "two solutions for an infinite-order power");
            hit = Some(n);
        }
        group.mul_word(&mut e, u);
    }
    Ok(match hit {
        Some(n) => SemilinearSet::singleton(&Valuation::from_iter([(var.to_owned(), n)])),
        None => SemilinearSet::empty([var]),
    })
}

/// Solutions `(x1, x2)` of `v1 u1^{x1} = u2^{x2} v2`: the part with small
/// `x1` by enumeration, the rest as the Parikh image of the counting automaton.
#[allow(clippy::too_many_arguments)]
pub fn solve_depth2(
    group: &Group,
    v1: &[Letter],
    u1: &[Letter],
    u2: &[Letter],
    v2: &[Letter],
    vars: [&str; 2],
    params: &Depth2Params,
) -> Result<SemilinearSet, KnapsackError> {
    let v1 = group.shlex(v1);
    let v2 = group.shlex(v2);
    let (l1, l2) = (u1.len() as u64, u2.len() as u64);
    let (m1, m2) = (v1.len() as u64, v2.len() as u64);
    let n1 = params.split_length(m1);
    let n2 = params.split_length(m2);
    let small = (n1 + n2).div_ceil(l1);
    let max2 = (params.lambda * (n1 + n2 + m1 + m2) + params.epsilon).div_ceil(l2);

    // S1: x1 < (N1+N2)/ℓ1, x2 < (λ(N1+N2+m1+m2)+ε)/ℓ2.
    let mut left = group.eval(&v1);
    let rights: Vec<_> = {
        let mut r = Vec::with_capacity(max2 as usize);
        let mut e = group.identity();
        for _ in 0..max2 {
            let mut x = e.clone();
            group.mul_word(&mut x, &v2);
            r.push(x);
            group.mul_word(&mut e, u2);
        }
        r
    };
    let mut points = Vec::new();
    for a in 0..small {
        for (b, r) in rights.iter().enumerate() {
            if *r == left {
                points.push(Valuation::from_iter([(vars[0].to_owned(), a), (vars[1].to_owned(), b as u64)]));
            }
        }
        group.mul_word(&mut left, u1);
    }
    let s1 = SemilinearSet::union_all(
        &sorted(vars),
        &points.iter().map(SemilinearSet::singleton).collect::<Vec<_>>(),
    )?;

    let nfa = build_depth2_nfa(group, &v1, u1, u2, &v2, params)?;
    let s2 = parikh_image(&nfa, &vars)?;
    log::trace!(
        "depth-2: |S1| = {}, automaton {} states, S2 {} components",
        points.len(),
        nfa.states,
        s2.num_components()
    );
    Ok(s1.union(&s2)?)
}

fn sorted(vars: [&str; 2]) -> Vec<String> {
    let mut v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}
