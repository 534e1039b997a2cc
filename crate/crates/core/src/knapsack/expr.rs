//! Exponent and knapsack expressions, their text syntax, and rewriting helpers.

use std::collections::{BTreeMap, BTreeSet};

use super::KnapsackError;
use crate::groups::{Group, Letter, Word};
use crate::semilinear::Valuation;

/// One power `u^x` followed by the constant word `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub u: Word,
    pub var: String,
    pub v: Word,
}

/// `v_0 · u_1^{x_1} v_1 ⋯ u_k^{x_k} v_k`, variables possibly repeated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExponentExpression {
    pub head: Word,
    pub factors: Vec<Factor>,
}

/// An exponent expression whose variables are pairwise distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KnapsackExpression(ExponentExpression);

/// A parsed piece: a constant word or a power of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Item {
    Const(Word),
    Pow(Word, String),
}

impl ExponentExpression {
    pub fn parse(group: &Group, text: &str) -> Result<Self, KnapsackError> {
        let items = Parser::new(group, text).parse()?;
        Ok(Self::from_items(items))
    }

    pub(crate) fn from_items(items: impl IntoIterator<Item = Item>) -> Self {
        let mut out = ExponentExpression::default();
        for it in items {
            match it {
                Item::Const(w) => match out.factors.last_mut() {
                    Some(f) => f.v.extend(w),
                    None => out.head.extend(w),
                },
                Item::Pow(u, var) => out.factors.push(Factor { u, var, v: Vec::new() }),
            }
        }
        out
    }

    /// `k`, the number of powers.
    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    /// `|E| = Σ |u_i| + |v_i|`, counting `v_0`.
    pub fn size(&self) -> usize {
        self.head.len() + self.factors.iter().map(|f| f.u.len() + f.v.len()).sum::<usize>()
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        self.factors
            .iter()
            .filter(|f| seen.insert(f.var.as_str()))
            .map(|f| f.var.clone())
            .collect()
    }

    pub fn has_repeated_variables(&self) -> bool {
        self.variables().len() != self.factors.len()
    }

    /// The word `ν(E)`.
    pub fn substitute(&self, nu: &Valuation) -> Result<Word, KnapsackError> {
        let mut w = self.head.clone();
        for f in &self.factors {
            let n = nu
                .get(&f.var)
                .ok_or_else(|| KnapsackError::MissingVariable(f.var.clone()))?;
            for _ in 0..n {
                w.extend_from_slice(&f.u);
            }
            w.extend_from_slice(&f.v);
        }
        Ok(w)
    }

    /// Moves `v_0` to the end: `u_1^{x_1} v_1 ⋯ u_k^{x_k} (v_k v_0)`, a
    /// conjugate with the same solutions.
    pub fn rotated(&self) -> Self {
        let mut out = self.clone();
        if let Some(last) = out.factors.last_mut() {
            last.v.extend(std::mem::take(&mut out.head));
        }
        out
    }

    /// Renames the second and later occurrences of each variable to fresh
    /// copies `x#2, x#3, …`; returns the pairs `(x, copy)` that must be equal.
    pub fn separate_variables(&self) -> (KnapsackExpression, Vec<(String, String)>) {
        let mut count: BTreeMap<String, usize> = BTreeMap::new();
        let mut equal = Vec::new();
        let mut out = self.clone();
        for f in &mut out.factors {
            let c = count.entry(f.var.clone()).or_insert(0);
            *c += 1;
            if *c > 1 {
                let copy = format!("{}#{}", f.var, c);
                equal.push((f.var.clone(), copy.clone()));
                f.var = copy;
            }
        }
        (KnapsackExpression(out), equal)
    }

    pub fn display(&self, group: &Group) -> String {
        let mut s = String::new();
        let push = |s: &mut String, part: &str| {
            if !part.is_empty() {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push_str(part);
            }
        };
        push(&mut s, &const_text(group, &self.head));
        for f in &self.factors {
            let base = match f.u.as_slice() {
                [l] if !group.letter_name(*l).contains('^') => group.letter_name(*l).to_owned(),
                _ => format!("[{}]", const_text(group, &f.u)),
            };
            push(&mut s, &format!("{base}^{}", f.var));
            push(&mut s, &const_text(group, &f.v));
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}

fn const_text(group: &Group, w: &[Letter]) -> String {
    w.iter().map(|&l| group.letter_name(l)).collect::<Vec<_>>().join(" ")
}

impl KnapsackExpression {
    pub fn new(e: ExponentExpression) -> Result<Self, KnapsackError> {
        let mut seen = BTreeSet::new();
        for f in &e.factors {
            if !seen.insert(f.var.as_str()) {
                return Err(KnapsackError::RepeatedVariable(f.var.clone()));
            }
        }
        Ok(KnapsackExpression(e))
    }

    pub fn parse(group: &Group, text: &str) -> Result<Self, KnapsackError> {
        Self::new(ExponentExpression::parse(group, text)?)
    }

    /// Builds from items whose variables are known to be distinct.
    pub(crate) fn from_items(items: impl IntoIterator<Item = Item>) -> Self {
        let e = ExponentExpression::from_items(items);
        debug_assert!(!e.has_repeated_variables());
        KnapsackExpression(e)
    }

    pub fn expr(&self) -> &ExponentExpression {
        &self.0
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0.factors
    }

    pub fn head(&self) -> &[Letter] {
        &self.0.head
    }

    pub fn depth(&self) -> usize {
        self.0.depth()
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn variables(&self) -> Vec<String> {
        self.0.variables()
    }

    pub fn rotated(&self) -> Self {
        KnapsackExpression(self.0.rotated())
    }

    /// Cyclic shift so that factor `r` comes first (head must be empty).
    pub fn shifted(&self, r: usize) -> Self {
        debug_assert!(self.0.head.is_empty());
        let mut f = self.0.factors.clone();
        f.rotate_left(r);
        KnapsackExpression(ExponentExpression { head: Vec::new(), factors: f })
    }

    /// Shortlex-reduces every word, then rotates `v_0` away.
    pub fn reduced(&self, group: &Group) -> Self {
        let mut e = self.0.rotated();
        for f in &mut e.factors {
            f.u = group.shlex(&f.u);
            f.v = group.shlex(&f.v);
        }
        e.head = group.shlex(&e.head);
        KnapsackExpression(e)
    }

    pub fn display(&self, group: &Group) -> String {
        self.0.display(group)
    }
}

impl From<KnapsackExpression> for ExponentExpression {
    fn from(k: KnapsackExpression) -> Self {
        k.0
    }
}

struct Parser<'a> {
    group: &'a Group,
    chars: Vec<char>,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

impl<'a> Parser<'a> {
    fn new(group: &'a Group, text: &str) -> Self {
        Parser {
            group,
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, at: usize, message: impl Into<String>) -> KnapsackError {
        KnapsackError::Parse {
            pos: at + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| is_ident_char(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn parse(mut self) -> Result<Vec<Item>, KnapsackError> {
        self.sequence(None)
    }

    /// Items up to the closing bracket `close` (or end of input).
    fn sequence(&mut self, close: Option<(char, usize)>) -> Result<Vec<Item>, KnapsackError> {
        let mut items = Vec::new();
        loop {
            let Some(c) = self.peek() else {
                if let Some((_, open)) = close {
                    return Err(self.err(open, "unclosed `[`"));
                }
                return Ok(items);
            };
            let start = self.pos;
            let atom: Vec<Item> = if c == '[' {
                self.pos += 1;
                self.sequence(Some((']', start)))?
            } else if c == ']' {
                if close.is_some() {
                    self.pos += 1;
                    return Ok(items);
                }
                return Err(self.err(start, "unmatched `]`"));
            } else if c == '1' || c == 'ε' {
                self.pos += 1;
                vec![Item::Const(Vec::new())]
            } else if is_ident_start(c) {
                let name = self.ident();
                let l = self.group.resolve(&name).map_err(|e| self.err(start, e.to_string()))?;
                vec![Item::Const(vec![l])]
            } else {
                return Err(self.err(start, format!("unexpected `{c}`")));
            };
            if self.peek() == Some('^') {
                self.pos += 1;
                items.extend(self.exponent(atom, start)?);
            } else {
                items.extend(atom);
            }
        }
    }

    fn exponent(&mut self, atom: Vec<Item>, atom_start: usize) -> Result<Vec<Item>, KnapsackError> {
        let at = match self.peek() {
            Some(_) => self.pos,
            None => return Err(self.err(self.pos, "missing exponent")),
        };
        let c = self.chars[at];
        let word = if atom.iter().any(|it| matches!(it, Item::Pow(..))) {
            Err(self.err(atom_start, "a variable power cannot be raised to a power"))
        } else {
            Ok(atom
                .into_iter()
                .flat_map(|it| match it {
                    Item::Const(c) => c,
                    Item::Pow(..) => unreachable!(),
                })
                .collect::<Word>())
        };
        if c == '-' && self.chars.get(at + 1).is_some_and(|&c| is_ident_start(c)) {
            self.pos += 1;
            let var = self.ident();
            Ok(vec![Item::Pow(self.group.inverse_word(&word?), var)])
        } else if c == '-' || c.is_ascii_digit() {
            let neg = c == '-';
            if neg {
                self.pos += 1;
            }
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err(at, "expected an integer exponent"));
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let k: u64 = digits.parse().map_err(|_| self.err(at, "exponent too large"))?;
            let base = word?;
            let unit = if neg { self.group.inverse_word(&base) } else { base };
            let mut w = Vec::with_capacity(unit.len() * k as usize);
            for _ in 0..k {
                w.extend_from_slice(&unit);
            }
            Ok(vec![Item::Const(w)])
        } else if is_ident_start(c) {
            let var = self.ident();
            Ok(vec![Item::Pow(word?, var)])
        } else {
            Err(self.err(at, "expected an integer or a variable after `^`"))
        }
    }
}
