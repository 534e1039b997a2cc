//! Group backends: free groups, finite groups, `G × ℤ` and free products.
//!
//! A [`Group`] is built from a [`GroupSpec`] term and fixes a symmetric
//! alphabet of [`Letter`]s. Letter indices define the order used for
//! shortlex normal forms. Free generators come as pairs `a, a^-1, b, b^-1, …`;
//! a finite group contributes one letter per non-identity element; `G × ℤ`
//! appends `t, t^-1` after the letters of `G`; a free product lists the left
//! factor's letters before the right factor's, tagged `left.` / `right.`.

mod constants;
mod finite;
mod node;
mod parse;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

pub use constants::{ConstantsConfig, HyperbolicConstants, Knobs, CONSTANTS_ENV};
pub use finite::FiniteTable;
pub use node::Element;

use node::Node;

pub type Letter = u16;
pub type Word = Vec<Letter>;

/// Default limit on the number of elements in a ball.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group spec, column {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownSymbol(String),
    #[error("generator `{0}` is ambiguous; candidates: {1:?}")]
    AmbiguousSymbol(String, Vec<String>),
    #[error("letter index {0} is outside the alphabet")]
    LetterOutOfRange(Letter),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Io(String),
    #[error("constants file: {0}")]
    Config(String),
    #[error("ball of radius {radius} exceeds {cap} elements")]
    BallCap { radius: u64, cap: usize },
    #[error("`{0}` is not a hyperbolic base spec; hyperbolicity constants are undefined")]
    NotHyperbolic(String),
}

/// Term tree of a group from the class generated by free and finite groups
/// under `× ℤ` and free products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Free(u16),
    Finite { label: String, table: Arc<FiniteTable> },
    DirectZ(Box<GroupSpec>),
    FreeProduct(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    /// Parses `F2`, `Z`, `finite:<file>`, `(S) x Z`, `(S) * (T)`.
    /// Table files are resolved relative to `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, GroupError> {
        parse::parse_spec(text, base_dir)
    }

    pub fn finite(label: impl Into<String>, table: FiniteTable) -> Self {
        GroupSpec::Finite {
            label: label.into(),
            table: Arc::new(table),
        }
    }

    pub fn direct_z(self) -> Self {
        GroupSpec::DirectZ(Box::new(self))
    }

    pub fn free_product(self, other: GroupSpec) -> Self {
        GroupSpec::FreeProduct(Box::new(self), Box::new(other))
    }

    pub fn contains_direct_z(&self) -> bool {
        match self {
            GroupSpec::Free(_) | GroupSpec::Finite { .. } => false,
            GroupSpec::DirectZ(_) => true,
            GroupSpec::FreeProduct(a, b) => a.contains_direct_z() || b.contains_direct_z(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(1) => f.write_str("Z"),
            GroupSpec::Free(n) => write!(f, "F{n}"),
            GroupSpec::Finite { label, .. } => write!(f, "finite:{label}"),
            GroupSpec::DirectZ(g) => write!(f, "({g}) x Z"),
            GroupSpec::FreeProduct(a, b) => write!(f, "({a}) * ({b})"),
        }
    }
}

/// Order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

struct Inner {
    spec: GroupSpec,
    node: Node,
    names: Vec<String>,
    /// Names accepted by the word parser, with their letters.
    primary: Vec<(String, Letter)>,
    exact: HashMap<String, Letter>,
    config: ConstantsConfig,
}

/// A group backend with a fixed ordered alphabet. Cheap to clone.
#[derive(Clone)]
pub struct Group(Arc<Inner>);

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group({})", self.0.spec)
    }
}

fn free_name(i: u16) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{}", i + 1)
    }
}

/// Builds the node tree and the display names of all letters, plus the
/// primary names accepted by the parser.
fn build(spec: &GroupSpec) -> (Node, Vec<String>, Vec<(String, Letter)>) {
    match spec {
        GroupSpec::Free(rank) => {
            let mut names = Vec::new();
            let mut primary = Vec::new();
            for i in 0..*rank {
                let n = free_name(i);
                primary.push((n.clone(), 2 * i));
                names.push(n.clone());
                names.push(format!("{n}^-1"));
            }
            (Node::Free { rank: *rank }, names, primary)
        }
        GroupSpec::Finite { table, .. } => {
            let names: Vec<String> = table.names()[1..].to_vec();
            let primary = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), i as Letter))
                .collect();
            (Node::Finite(table.clone()), names, primary)
        }
        GroupSpec::DirectZ(_) => {
            // Collect the chain of nested `× ℤ` and name the central letters
            // `t` (single level) or `t1`, `t2`, … from the inside out.
            let mut levels = 0;
            let mut base = spec;
            while let GroupSpec::DirectZ(inner) = base {
                levels += 1;
                base = inner;
            }
            let (mut node, mut names, mut primary) = build(base);
            for level in 1..=levels {
                let t = if levels == 1 {
                    "t".to_owned()
                } else {
                    format!("t{level}")
                };
                let idx = node.size();
                primary.push((t.clone(), idx));
                names.push(t.clone());
                names.push(format!("{t}^-1"));
                node = Node::DirectZ {
                    inner: Box::new(node),
                };
            }
            (node, names, primary)
        }
        GroupSpec::FreeProduct(a, b) => {
            let (ln, lnames, lprim) = build(a);
            let (rn, rnames, rprim) = build(b);
            let shift = ln.size();
            let names = lnames
                .into_iter()
                .map(|n| format!("left.{n}"))
                .chain(rnames.into_iter().map(|n| format!("right.{n}")))
                .collect();
            let primary = lprim
                .into_iter()
                .map(|(n, l)| (format!("left.{n}"), l))
                .chain(rprim.into_iter().map(|(n, l)| (format!("right.{n}"), l + shift)))
                .collect();
            (
                Node::FreeProduct {
                    left: Box::new(ln),
                    right: Box::new(rn),
                },
                names,
                primary,
            )
        }
    }
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self, GroupError> {
        Self::with_config(spec, ConstantsConfig::default())
    }

    pub fn with_config(spec: GroupSpec, config: ConstantsConfig) -> Result<Self, GroupError> {
        let (node, names, primary) = build(&spec);
        let mut exact = HashMap::new();
        for (n, l) in &primary {
            if exact.insert(n.clone(), *l).is_some() {
                return Err(GroupError::InvalidSpec(format!(
                    "generator name `{n}` occurs twice"
                )));
            }
        }
        Ok(Group(Arc::new(Inner {
            spec,
            node,
            names,
            primary,
            exact,
            config,
        })))
    }

    /// Parses a spec string and builds the group.
    pub fn parse(text: &str, base_dir: &Path, config: ConstantsConfig) -> Result<Self, GroupError> {
        Self::with_config(GroupSpec::parse(text, base_dir)?, config)
    }

    pub fn free(rank: u16) -> Self {
        Self::new(GroupSpec::Free(rank)).expect("free groups have distinct names")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0.spec
    }

    pub fn config(&self) -> &ConstantsConfig {
        &self.0.config
    }

    pub fn alphabet_size(&self) -> usize {
        self.0.names.len()
    }

    pub fn letter_name(&self, l: Letter) -> &str {
        &self.0.names[l as usize]
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        self.0.node.inverse_letter(l)
    }

    pub fn inverse_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inverse_letter(l)).collect()
    }

    /// Whether `G` is hyperbolic (no `× ℤ` anywhere in the term).
    pub fn is_hyperbolic(&self) -> bool {
        !self.0.node.contains_direct_z()
    }

    /// For `G × ℤ`: the group `G` (same letter numbering) and the letter `t`.
    pub fn direct_z_parts(&self) -> Option<(Group, Letter)> {
        match &self.0.spec {
            GroupSpec::DirectZ(inner) => {
                let g = Group::with_config((**inner).clone(), self.0.config).ok()?;
                let t = g.alphabet_size() as Letter;
                Some((g, t))
            }
            _ => None,
        }
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<(), GroupError> {
        match w.iter().find(|&&l| l as usize >= self.alphabet_size()) {
            Some(&l) => Err(GroupError::LetterOutOfRange(l)),
            None => Ok(()),
        }
    }

    /// Resolves a generator name; unambiguous unqualified suffixes of tagged
    /// names are accepted (`a` for `left.a`).
    pub fn resolve(&self, name: &str) -> Result<Letter, GroupError> {
        if let Some(&l) = self.0.exact.get(name) {
            return Ok(l);
        }
        let suffix = format!(".{name}");
        let hits: Vec<&(String, Letter)> = self
            .0
            .primary
            .iter()
            .filter(|(n, _)| n.ends_with(&suffix))
            .collect();
        match hits.as_slice() {
            [] => Err(GroupError::UnknownSymbol(name.to_owned())),
            [(_, l)] => Ok(*l),
            many => Err(GroupError::AmbiguousSymbol(
                name.to_owned(),
                many.iter().map(|(n, _)| n.clone()).collect(),
            )),
        }
    }

    /// Word of `g^k` for a generator `g` and an integer `k`.
    pub fn power_of_letter(&self, l: Letter, k: i64) -> Word {
        let letter = if k >= 0 { l } else { self.inverse_letter(l) };
        vec![letter; k.unsigned_abs() as usize]
    }

    /// Parses a whitespace-separated word such as `a b^-1 a^3`.
    /// `1`, `ε` and the empty string denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" || tok == "ε" {
                continue;
            }
            let (name, k) = match tok.split_once('^') {
                Some((n, e)) => {
                    let k: i64 = e.parse().map_err(|_| GroupError::Parse {
                        pos: 0,
                        message: format!("bad exponent in `{tok}`"),
                    })?;
                    (n, k)
                }
                None => (tok, 1),
            };
            let l = self.resolve(name)?;
            out.extend(self.power_of_letter(l, k));
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_owned();
        }
        w.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    // ---- elements ---------------------------------------------------------

    pub fn identity(&self) -> Element {
        self.0.node.identity()
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        self.0.node.is_identity(e)
    }

    pub fn mul_letter(&self, e: &mut Element, l: Letter) {
        self.0.node.mul_letter(e, l)
    }

    pub fn mul_word(&self, e: &mut Element, w: &[Letter]) {
        for &l in w {
            self.0.node.mul_letter(e, l);
        }
    }

    pub fn eval(&self, w: &[Letter]) -> Element {
        let mut e = self.identity();
        self.mul_word(&mut e, w);
        e
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.clone();
        self.mul_word(&mut out, &self.element_word(b));
        out
    }

    pub fn inverse(&self, e: &Element) -> Element {
        self.eval(&self.inverse_word(&self.element_word(e)))
    }

    /// The shortlex representative of `e`.
    pub fn element_word(&self, e: &Element) -> Word {
        let mut out = Vec::new();
        self.0.node.shortlex(e, &mut out);
        out
    }

    pub fn element_length(&self, e: &Element) -> u64 {
        self.0.node.length(e)
    }

    pub fn element_order(&self, e: &Element) -> Order {
        match self.0.node.order(e) {
            Some(n) => Order::Finite(n),
            None => Order::Infinite,
        }
    }

    // ---- word operations --------------------------------------------------

    /// Whether `w` represents the identity.
    pub fn word_problem(&self, w: &[Letter]) -> Result<bool, GroupError> {
        self.check_word(w)?;
        Ok(self.is_one(w))
    }

    pub fn shortlex_reduce(&self, w: &[Letter]) -> Result<Word, GroupError> {
        self.check_word(w)?;
        Ok(self.shlex(w))
    }

    pub fn geodesic_length(&self, w: &[Letter]) -> Result<u64, GroupError> {
        self.check_word(w)?;
        Ok(self.element_length(&self.eval(w)))
    }

    pub fn order_of(&self, w: &[Letter]) -> Result<Order, GroupError> {
        self.check_word(w)?;
        Ok(self.element_order(&self.eval(w)))
    }

    /// Unchecked [`Self::word_problem`] for words built internally.
    pub fn is_one(&self, w: &[Letter]) -> bool {
        self.is_identity(&self.eval(w))
    }

    /// Unchecked [`Self::shortlex_reduce`].
    pub fn shlex(&self, w: &[Letter]) -> Word {
        self.element_word(&self.eval(w))
    }

    /// Elements at distance ≤ `r` from 1, in shortlex order of their
    /// representatives.
    pub fn ball_elements(&self, r: u64, cap: usize) -> Result<Vec<Element>, GroupError> {
        let id = self.identity();
        let mut seen: HashSet<Element> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([(id, 0u64)]);
        let letters = self.alphabet_size() as Letter;
        while let Some((g, d)) = queue.pop_front() {
            if d == r {
                continue;
            }
            for l in 0..letters {
                let mut h = g.clone();
                self.mul_letter(&mut h, l);
                if seen.insert(h.clone()) {
                    if out.len() == cap {
                        return Err(GroupError::BallCap { radius: r, cap });
                    }
                    out.push(h.clone());
                    queue.push_back((h, d + 1));
                }
            }
        }
        Ok(out)
    }

    /// Shortlex representatives of `B_r(1)`.
    pub fn ball(&self, r: u64) -> Result<Vec<Word>, GroupError> {
        Ok(self
            .ball_elements(r, DEFAULT_BALL_CAP)?
            .iter()
            .map(|e| self.element_word(e))
            .collect())
    }

    fn delta(&self) -> Result<u64, GroupError> {
        fn go(spec: &GroupSpec) -> Option<u64> {
            match spec {
                GroupSpec::Free(_) => Some(0),
                GroupSpec::Finite { table, .. } => Some(table.diameter() as u64),
                GroupSpec::DirectZ(_) => None,
                GroupSpec::FreeProduct(a, b) => Some(go(a)?.max(go(b)?)),
            }
        }
        go(&self.0.spec).ok_or_else(|| GroupError::NotHyperbolic(self.0.spec.to_string()))
    }

    /// Hyperbolicity constants; `× ℤ` anywhere in the spec is rejected.
    pub fn constants(&self) -> Result<HyperbolicConstants, GroupError> {
        let delta = self.delta()?;
        let knobs = match &self.0.spec {
            GroupSpec::Free(_) => self.0.config.free,
            GroupSpec::Finite { .. } => self.0.config.finite,
            _ => self.0.config.free_product,
        };
        let n = self.ball_elements(2 * delta, DEFAULT_BALL_CAP)?.len() as u64;
        let b4 = self.ball_elements(4 * delta, DEFAULT_BALL_CAP)?.len() as u64;
        Ok(HyperbolicConstants::assemble(delta, n, b4, knobs))
    }

    /// λ, ε for which all powers of `g` are quasigeodesic.
    pub fn constants_for_word(&self, g: &[Letter]) -> Result<(u64, u64), GroupError> {
        let c = self.constants()?;
        Ok(c.for_word_length(self.geodesic_length(g)?))
    }

    /// Whether every subpath of length ≤ `zeta` (unbounded if `None`)
    /// satisfies `b − a ≤ λ·d(w_a, w_b) + ε`.
    pub fn is_local_quasigeodesic(&self, w: &[Letter], lambda: u64, epsilon: u64, zeta: Option<u64>) -> bool {
        let n = w.len();
        let zeta = zeta.unwrap_or(u64::MAX);
        for a in 0..n {
            let mut e = self.identity();
            for b in a + 1..=n {
                let span = (b - a) as u64;
                if span > zeta {
                    break;
                }
                self.mul_letter(&mut e, w[b - 1]);
                if span > lambda * self.element_length(&e) + epsilon {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests;
