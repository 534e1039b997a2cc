//! Disjunctions of conjunctions of knapsack equations with linear side
//! conditions, as produced by the positivity and polygon splittings.

use super::KnapsackExpression;
use crate::semilinear::{SemilinearError, SemilinearSet, Valuation};

/// `target = left + right + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub target: String,
    pub left: String,
    pub right: String,
}

/// `var ≡ residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    pub var: String,
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    pub fn to_set(&self) -> SemilinearSet {
        SemilinearSet::residue_class(&self.var, self.residue, self.modulus)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Conjunct {
    /// Pairwise variable-disjoint equations `E_i = 1`.
    pub subequations: Vec<KnapsackExpression>,
    pub links: Vec<Link>,
    pub congruences: Vec<Congruence>,
    /// Variables required to be `≥ 1`.
    pub positivity: Vec<String>,
    /// Variables pinned to 0.
    pub zeros: Vec<String>,
    /// Auxiliary variables projected away.
    pub existentials: Vec<String>,
}

/// `⋁ conjuncts` over the free variables `variables`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolutionFormula {
    pub variables: Vec<String>,
    pub disjuncts: Vec<Conjunct>,
}

impl Conjunct {
    /// Combines the already-solved subequation sets `sols` (aligned with
    /// `subequations`) with the side conditions and projects onto `free`.
    pub fn assemble(&self, sols: &[SemilinearSet], free: &[String]) -> Result<SemilinearSet, SemilinearError> {
        let zeros = Valuation::zero(self.zeros.iter());
        let mut acc = SemilinearSet::singleton(&zeros);
        for s in sols {
            acc = acc.oplus(s)?;
        }
        for l in &self.links {
            let missing: Vec<&str> = [l.left.as_str(), l.right.as_str()]
                .into_iter()
                .filter(|v| !acc.variables().iter().any(|x| x == v))
                .collect();
            acc = acc.extend_universal(&missing)?;
            if acc.variables().contains(&l.target) {
                let mut c = std::collections::BTreeMap::new();
                *c.entry(l.target.clone()).or_insert(0) += 1;
                *c.entry(l.left.clone()).or_insert(0) -= 1;
                *c.entry(l.right.clone()).or_insert(0) -= 1;
                acc = acc.intersect_equation(&c, 1)?;
            } else {
                acc = acc.add_affine_coordinate(&l.target, &[&l.left, &l.right], 1)?;
            }
        }
        for c in &self.congruences {
            let set = c.to_set();
            if acc.variables().contains(&c.var) {
                acc = acc.intersect(&set.extend_universal(acc.variables())?)?;
            } else {
                acc = acc.oplus(&set)?;
            }
        }
        let missing: Vec<&String> = free.iter().filter(|v| !acc.variables().contains(v)).collect();
        acc = acc.extend_universal(&missing)?;
        for p in &self.positivity {
            acc = acc.restrict_positive(p)?;
        }
        acc.project(free)
    }
}
