//! Finite groups given by multiplication tables.
//!
//! File format: the first non-comment line lists the element names, identity
//! first. Each following line is one row of the table: row `i`, column `j`
//! holds the name of `elements[i] · elements[j]`. Symbols are separated by
//! commas; blank lines and `#` comments are skipped.
//!
//! ```text
//! e, a
//! e, a
//! a, e
//! ```

use std::collections::VecDeque;
use std::path::Path;

use super::GroupError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTable {
    names: Vec<String>,
    mul: Vec<Vec<u32>>,
    inv: Vec<u32>,
    /// Cayley-graph distance from the identity with all non-identity
    /// elements as generators.
    dist: Vec<u32>,
}

impl FiniteTable {
    pub fn new(names: Vec<String>, mul: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let n = names.len();
        let bad = |m: String| Err(GroupError::InvalidTable(m));
        if n == 0 {
            return bad("table has no elements".into());
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return bad("duplicate element name".into());
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) {
            return bad(format!("table must be {n}×{n}"));
        }
        if mul.iter().flatten().any(|&x| x as usize >= n) {
            return bad("table entry out of range".into());
        }
        for (i, row) in mul.iter().enumerate() {
            if mul[0][i] != i as u32 || row[0] != i as u32 {
                return bad(format!("first element `{}` is not the identity", names[0]));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            match (0..n).find(|&j| mul[i][j] == 0) {
                Some(j) if mul[j][i] == 0 => inv[i] = j as u32,
                _ => return bad(format!("element `{}` has no two-sided inverse", names[i])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b] as usize;
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c] as usize] {
                        return bad(format!(
                            "not associative: ({0}{1}){2} ≠ {0}({1}{2})",
                            names[a], names[b], names[c]
                        ));
                    }
                }
            }
        }
        let mut t = FiniteTable {
            names,
            mul,
            inv,
            dist: Vec::new(),
        };
        t.dist = t.bfs_distances();
        Ok(t)
    }

    /// The cyclic group ℤ/n with element `names[i]` standing for `i`.
    pub fn cyclic(n: usize, names: &[&str]) -> Result<Self, GroupError> {
        if names.len() != n {
            return Err(GroupError::InvalidTable(format!(
                "expected {n} names, got {}",
                names.len()
            )));
        }
        let mul = (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect())
            .collect();
        FiniteTable::new(names.iter().map(|s| s.to_string()).collect(), mul)
    }

    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut rows = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(|s| s.trim().to_owned()).collect::<Vec<_>>());
        let names = rows
            .next()
            .ok_or_else(|| GroupError::InvalidTable("empty table file".into()))?;
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .map(|i| i as u32)
                .ok_or_else(|| GroupError::InvalidTable(format!("unknown element `{s}`")))
        };
        let mul = rows
            .map(|r| r.iter().map(|s| lookup(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        FiniteTable::new(names, mul)
    }

    pub fn load(path: &Path) -> Result<Self, GroupError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GroupError::Io(format!("{}: {e}", path.display())))?;
        FiniteTable::parse(&text)
    }

    fn bfs_distances(&self) -> Vec<u32> {
        let n = self.len();
        let mut dist = vec![u32::MAX; n];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for s in 1..n {
                let h = self.mul[g][s] as usize;
                if dist[h] == u32::MAX {
                    dist[h] = dist[g] + 1;
                    queue.push_back(h);
                }
            }
        }
        dist
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize][b as usize]
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn distance(&self, a: u32) -> u32 {
        self.dist[a as usize]
    }

    /// Diameter of the Cayley graph.
    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    pub fn order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}
