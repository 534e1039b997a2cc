//! Minimal nonnegative solutions of linear Diophantine systems `A·x = b`.
//!
//! The solver is the Contejean–Devie completion procedure run on the
//! homogenized system `A·x - b·y = 0` with the extra unknown `y` restricted to
//! `{0, 1}`. Minimal solutions with `y = 1` are the minimal particular
//! solutions of `A·x = b`; those with `y = 0` form the Hilbert basis of
//! `A·x = 0`. Every nonnegative solution of `A·x = b` is then a particular
//! solution plus an ℕ-combination of Hilbert basis vectors.

use std::collections::HashMap;

use super::SemilinearError;

/// Upper bound on the number of frontier vectors explored before giving up.
pub const DEFAULT_FRONTIER_LIMIT: usize = 5_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solutions {
    /// Minimal solutions of `A·x = b`.
    pub particular: Vec<Vec<u64>>,
    /// Hilbert basis of `A·x = 0` over ℕ.
    pub homogeneous: Vec<Vec<u64>>,
}

/// Solves `Σ_j x_j · columns[j] = rhs` over ℕ.
///
/// Every column must have the same length as `rhs`.
pub fn solve(columns: &[Vec<i64>], rhs: &[i64]) -> Result<Solutions, SemilinearError> {
    solve_with_limit(columns, rhs, DEFAULT_FRONTIER_LIMIT)
}

pub fn solve_with_limit(
    columns: &[Vec<i64>],
    rhs: &[i64],
    limit: usize,
) -> Result<Solutions, SemilinearError> {
    let rows = rhs.len();
    debug_assert!(columns.iter().all(|c| c.len() == rows));
    let n = columns.len();

    // Column n is the homogenizing unknown.
    let mut cols: Vec<Vec<i64>> = columns.to_vec();
    cols.push(rhs.iter().map(|v| -v).collect());

    let mut homogeneous: Vec<Vec<u64>> = Vec::new();
    let mut particular: Vec<Vec<u64>> = Vec::new();

    let mut frontier: HashMap<Vec<u64>, Vec<i64>> = HashMap::new();
    for (j, col) in cols.iter().enumerate() {
        let mut e = vec![0u64; n + 1];
        e[j] = 1;
        frontier.insert(e, col.clone());
    }

    let mut explored = 0usize;
    while !frontier.is_empty() {
        let mut level: Vec<(Vec<u64>, Vec<i64>)> = frontier.drain().collect();
        // Deterministic processing order.
        level.sort_unstable_by(|a, b| a.0.cmp(&b.0));

        let mut open = Vec::with_capacity(level.len());
        for (p, ap) in level {
            if ap.iter().all(|&v| v == 0) {
                if p[n] == 0 {
                    homogeneous.push(p);
                } else {
                    particular.push(p);
                }
            } else {
                open.push((p, ap));
            }
        }

        let mut next: HashMap<Vec<u64>, Vec<i64>> = HashMap::new();
        for (p, ap) in open {
            for (j, col) in cols.iter().enumerate() {
                if j == n && p[n] >= 1 {
                    continue;
                }
                let dot: i64 = ap.iter().zip(col).map(|(a, c)| a * c).sum();
                if dot >= 0 {
                    continue;
                }
                let mut q = p.clone();
                q[j] += 1;
                if next.contains_key(&q) || dominated(&q, n, &homogeneous, &particular) {
                    continue;
                }
                let aq: Vec<i64> = ap.iter().zip(col).map(|(a, c)| a + c).collect();
                next.insert(q, aq);
            }
        }
        explored += next.len();
        if explored > limit {
            return Err(SemilinearError::SolverLimit(limit));
        }
        frontier = next;
    }

    let strip = |mut v: Vec<u64>| {
        v.truncate(n);
        v
    };
    let mut particular: Vec<Vec<u64>> = particular.into_iter().map(strip).collect();
    let mut homogeneous: Vec<Vec<u64>> = homogeneous.into_iter().map(strip).collect();
    particular.sort_unstable();
    homogeneous.sort_unstable();
    Ok(Solutions {
        particular,
        homogeneous,
    })
}

fn dominated(q: &[u64], n: usize, homogeneous: &[Vec<u64>], particular: &[Vec<u64>]) -> bool {
    let ge = |s: &Vec<u64>| q.iter().zip(s).all(|(a, b)| a >= b);
    if homogeneous.iter().any(ge) {
        return true;
    }
    q[n] >= 1 && particular.iter().any(ge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(columns: &[Vec<i64>], x: &[u64], rhs: &[i64]) -> bool {
        (0..rhs.len()).all(|r| {
            let s: i64 = columns.iter().zip(x).map(|(c, &v)| c[r] * v as i64).sum();
            s == rhs[r]
        })
    }

    #[test]
    fn single_equation_hilbert_basis() {
        // x - y = 0 has basis (1,1) and no other minimal element.
        let sol = solve(&[vec![1], vec![-1]], &[0]).unwrap();
        assert_eq!(sol.particular, vec![vec![0, 0]]);
        assert_eq!(sol.homogeneous, vec![vec![1, 1]]);
    }

    #[test]
    fn classic_two_three() {
        // 2x - 3y = 1: minimal (2,1); homogeneous basis (3,2).
        let sol = solve(&[vec![2], vec![-3]], &[1]).unwrap();
        assert_eq!(sol.particular, vec![vec![2, 1]]);
        assert_eq!(sol.homogeneous, vec![vec![3, 2]]);
    }

    #[test]
    fn infeasible_system() {
        // 2x = 1 has no solution.
        let sol = solve(&[vec![2]], &[1]).unwrap();
        assert!(sol.particular.is_empty());
        assert!(sol.homogeneous.is_empty());
    }

    #[test]
    fn brute_force_agreement() {
        // x + 2y - 3z = 2 ; y - z + w = 1
        let cols = vec![vec![1, 0], vec![2, 1], vec![-3, -1], vec![0, 1]];
        let rhs = vec![2, 1];
        let sol = solve(&cols, &rhs).unwrap();
        for p in &sol.particular {
            assert!(check(&cols, p, &rhs));
        }
        for h in &sol.homogeneous {
            assert!(check(&cols, h, &[0, 0]));
        }
        // Every solution in a box is generated.
        let bound = 6u64;
        for a in 0..=bound {
            for b in 0..=bound {
                for c in 0..=bound {
                    for d in 0..=bound {
                        let x = [a, b, c, d];
                        if !check(&cols, &x, &rhs) {
                            continue;
                        }
                        let generated = sol.particular.iter().any(|p| {
                            let rest: Vec<u64> = match x
                                .iter()
                                .zip(p)
                                .map(|(a, b)| a.checked_sub(*b))
                                .collect::<Option<Vec<_>>>()
                            {
                                Some(r) => r,
                                None => return false,
                            };
                            crate::semilinear::monoid_contains(&rest, &sol.homogeneous)
                        });
                        assert!(generated, "solution {x:?} not generated");
                    }
                }
            }
        }
    }
}
