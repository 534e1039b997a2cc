//! Backend tree: normal forms and multiplication per spec constructor.
//!
//! Each node works with its own local letter numbering starting at zero; a
//! composite node shifts the letters of its children. The global letter
//! order is the local order of the root, which makes the shortlex order of a
//! composite the concatenation of its children's orders.

use std::sync::Arc;

use super::finite::FiniteTable;
use super::Letter;

/// Canonical normal form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced word.
    Free(Vec<Letter>),
    Finite(u32),
    /// Inner element and the exponent of the central generator.
    DirectZ(Box<Element>, i64),
    /// Alternating nontrivial syllables; `false` = left factor.
    FreeProduct(Vec<(bool, Element)>),
}

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Free { rank: u16 },
    Finite(Arc<FiniteTable>),
    DirectZ { inner: Box<Node> },
    FreeProduct { left: Box<Node>, right: Box<Node> },
}

impl Node {
    pub fn size(&self) -> u16 {
        match self {
            Node::Free { rank } => 2 * rank,
            Node::Finite(t) => (t.len() - 1) as u16,
            Node::DirectZ { inner } => inner.size() + 2,
            Node::FreeProduct { left, right } => left.size() + right.size(),
        }
    }

    pub fn inverse_letter(&self, l: Letter) -> Letter {
        match self {
            Node::Free { .. } => l ^ 1,
            Node::Finite(t) => (t.inverse(l as u32 + 1) - 1) as Letter,
            Node::DirectZ { inner } => {
                let n = inner.size();
                if l < n {
                    inner.inverse_letter(l)
                } else if l == n {
                    n + 1
                } else {
                    n
                }
            }
            Node::FreeProduct { left, right } => {
                let n = left.size();
                if l < n {
                    left.inverse_letter(l)
                } else {
                    n + right.inverse_letter(l - n)
                }
            }
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Node::Free { .. } => Element::Free(Vec::new()),
            Node::Finite(_) => Element::Finite(0),
            Node::DirectZ { inner } => Element::DirectZ(Box::new(inner.identity()), 0),
            Node::FreeProduct { .. } => Element::FreeProduct(Vec::new()),
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        match e {
            Element::Free(w) => w.is_empty(),
            Element::Finite(x) => *x == 0,
            Element::DirectZ(g, n) => {
                *n == 0
                    && match self {
                        Node::DirectZ { inner } => inner.is_identity(g),
                        _ => unreachable!("element/node mismatch"),
                    }
            }
            Element::FreeProduct(s) => s.is_empty(),
        }
    }

    /// Right-multiplies `e` by the letter `l`.
    pub fn mul_letter(&self, e: &mut Element, l: Letter) {
        match (self, e) {
            (Node::Free { .. }, Element::Free(w)) => {
                if w.last() == Some(&(l ^ 1)) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
            (Node::Finite(t), Element::Finite(x)) => *x = t.mul(*x, l as u32 + 1),
            (Node::DirectZ { inner }, Element::DirectZ(g, k)) => {
                let n = inner.size();
                if l < n {
                    inner.mul_letter(g, l);
                } else if l == n {
                    *k += 1;
                } else {
                    *k -= 1;
                }
            }
            (Node::FreeProduct { left, right }, Element::FreeProduct(syl)) => {
                let n = left.size();
                let (side, node, local) = if l < n {
                    (false, left.as_ref(), l)
                } else {
                    (true, right.as_ref(), l - n)
                };
                match syl.last_mut() {
                    Some((s, g)) if *s == side => {
                        node.mul_letter(g, local);
                        if node.is_identity(g) {
                            syl.pop();
                        }
                    }
                    _ => {
                        let mut g = node.identity();
                        node.mul_letter(&mut g, local);
                        if !node.is_identity(&g) {
                            syl.push((side, g));
                        }
                    }
                }
            }
            _ => unreachable!("element/node mismatch"),
        }
    }

    /// Shortlex-least word for `e`, in this node's local letters.
    pub fn shortlex(&self, e: &Element, out: &mut Vec<Letter>) {
        match (self, e) {
            (Node::Free { .. }, Element::Free(w)) => out.extend_from_slice(w),
            (Node::Finite(_), Element::Finite(x)) => {
                // Every non-identity element is a generator, and generators
                // are the only words of length one.
                if *x != 0 {
                    out.push((*x - 1) as Letter);
                }
            }
            (Node::DirectZ { inner }, Element::DirectZ(g, k)) => {
                inner.shortlex(g, out);
                let t = inner.size();
                let letter = if *k >= 0 { t } else { t + 1 };
                out.extend(std::iter::repeat_n(letter, k.unsigned_abs() as usize));
            }
            (Node::FreeProduct { left, right }, Element::FreeProduct(syl)) => {
                let n = left.size();
                for (side, g) in syl {
                    if *side {
                        let start = out.len();
                        right.shortlex(g, out);
                        for l in &mut out[start..] {
                            *l += n;
                        }
                    } else {
                        left.shortlex(g, out);
                    }
                }
            }
            _ => unreachable!("element/node mismatch"),
        }
    }

    /// Geodesic length of `e`.
    pub fn length(&self, e: &Element) -> u64 {
        match (self, e) {
            (Node::Free { .. }, Element::Free(w)) => w.len() as u64,
            (Node::Finite(t), Element::Finite(x)) => t.distance(*x) as u64,
            (Node::DirectZ { inner }, Element::DirectZ(g, k)) => inner.length(g) + k.unsigned_abs(),
            (Node::FreeProduct { left, right }, Element::FreeProduct(syl)) => syl
                .iter()
                .map(|(side, g)| if *side { right.length(g) } else { left.length(g) })
                .sum(),
            _ => unreachable!("element/node mismatch"),
        }
    }

    /// Order of `e`, `None` for infinite order.
    pub fn order(&self, e: &Element) -> Option<u64> {
        match (self, e) {
            (Node::Free { .. }, Element::Free(w)) => w.is_empty().then_some(1),
            (Node::Finite(t), Element::Finite(x)) => Some(t.order(*x)),
            (Node::DirectZ { inner }, Element::DirectZ(g, k)) => {
                if *k != 0 {
                    None
                } else {
                    inner.order(g)
                }
            }
            (Node::FreeProduct { left, right }, Element::FreeProduct(syl)) => {
                let mut syl = syl.clone();
                // Cyclically reduce: conjugate the first syllable to the end
                // while both ends live in the same factor.
                while syl.len() >= 2 && syl[0].0 == syl[syl.len() - 1].0 {
                    let (side, first) = syl.remove(0);
                    let node = if side { right.as_ref() } else { left.as_ref() };
                    let mut word = Vec::new();
                    node.shortlex(&first, &mut word);
                    let last = &mut syl.last_mut().expect("len ≥ 1").1;
                    for l in word {
                        node.mul_letter(last, l);
                    }
                    if node.is_identity(last) {
                        syl.pop();
                    }
                }
                match syl.as_slice() {
                    [] => Some(1),
                    [(side, g)] => {
                        if *side {
                            right.order(g)
                        } else {
                            left.order(g)
                        }
                    }
                    _ => None,
                }
            }
            _ => unreachable!("element/node mismatch"),
        }
    }

    pub fn contains_direct_z(&self) -> bool {
        match self {
            Node::Free { .. } | Node::Finite(_) => false,
            Node::DirectZ { .. } => true,
            Node::FreeProduct { left, right } => left.contains_direct_z() || right.contains_direct_z(),
        }
    }
}
