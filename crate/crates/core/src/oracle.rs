//! Ground truth by brute force: substitute and solve the word problem.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::groups::Group;
use crate::knapsack::{ExponentExpression, Factor};
use crate::semilinear::Valuation;

/// Default limit on the number of valuations [`brute_solve`] will try.
pub const DEFAULT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error("box of {points} valuations exceeds the cap of {cap}")]
    CapExceeded { points: u128, cap: u64 },
}

/// Whether `ν(E) = 1`.
pub fn verify(group: &Group, e: &ExponentExpression, nu: &Valuation) -> Result<bool, OracleError> {
    let mut el = group.eval(&e.head);
    for Factor { u, var, v } in &e.factors {
        let n = nu.get(var).ok_or_else(|| OracleError::MissingVariable(var.clone()))?;
        for _ in 0..n {
            group.mul_word(&mut el, u);
        }
        group.mul_word(&mut el, v);
    }
    Ok(group.is_identity(&el))
}

/// All solutions in `[0, bound]^vars`, with [`DEFAULT_CAP`].
pub fn brute_solve(group: &Group, e: &ExponentExpression, bound: u64) -> Result<BTreeSet<Valuation>, OracleError> {
    brute_solve_with_cap(group, e, bound, DEFAULT_CAP)
}

/// All solutions in `[0, bound]^vars`, where `vars` are the distinct variables.
///
/// The first variable is split across threads; the rest are walked in
/// lexicographic order, reusing the prefix product for each inner step.
pub fn brute_solve_with_cap(
    group: &Group,
    e: &ExponentExpression,
    bound: u64,
    cap: u64,
) -> Result<BTreeSet<Valuation>, OracleError> {
    let mut vars = e.variables();
    vars.sort();
    let points = (bound as u128 + 1).pow(vars.len() as u32);
    if points > cap as u128 {
        return Err(OracleError::CapExceeded { points, cap });
    }
    if vars.is_empty() {
        let nu = Valuation::new();
        return Ok(if verify(group, e, &nu)? { BTreeSet::from([nu]) } else { BTreeSet::new() });
    }
    let rest = vars.len() - 1;
    let found: Vec<Vec<Valuation>> = (0..=bound)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut values = vec![0u64; rest];
            loop {
                let nu: Valuation = std::iter::once((vars[0].clone(), first))
                    .chain(vars[1..].iter().cloned().zip(values.iter().copied()))
                    .collect();
                if verify(group, e, &nu)? {
                    out.push(nu);
                }
                let mut j = rest;
                loop {
                    if j == 0 {
                        return Ok(out);
                    }
                    j -= 1;
                    values[j] += 1;
                    if values[j] <= bound {
                        break;
                    }
                    values[j] = 0;
                }
            }
        })
        .collect::<Result<_, OracleError>>()?;
    Ok(found.into_iter().flatten().collect())
}
