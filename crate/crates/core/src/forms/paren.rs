//! Bracketings of repeated nonassociative products.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest factor count for which every bracketing is enumerated.
pub const PAREN_ENUMERATION_CAP: usize = 5;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParenTree {
    Leaf,
    Node(Box<ParenTree>, Box<ParenTree>),
}

impl ParenTree {
    pub fn node(l: ParenTree, r: ParenTree) -> Self {
        ParenTree::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            ParenTree::Leaf => 1,
            ParenTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// `x(x(...(xx)))`.
    pub fn right_nested(t: usize) -> Self {
        assert!(t >= 1, "a product needs at least one factor");
        (1..t).fold(ParenTree::Leaf, |acc, _| ParenTree::node(ParenTree::Leaf, acc))
    }

    /// `((xx)x)...x`.
    pub fn left_nested(t: usize) -> Self {
        assert!(t >= 1, "a product needs at least one factor");
        (1..t).fold(ParenTree::Leaf, |acc, _| ParenTree::node(acc, ParenTree::Leaf))
    }

    /// Every bracketing of `t` factors (Catalan many), right-nested first.
    pub fn all(t: usize) -> Vec<ParenTree> {
        if t <= 1 {
            return vec![ParenTree::Leaf];
        }
        let mut out = Vec::new();
        for left in 1..t {
            for l in ParenTree::all(left) {
                for r in ParenTree::all(t - left) {
                    out.push(ParenTree::node(l.clone(), r));
                }
            }
        }
        out
    }

    /// [`ParenTree::all`], refusing above [`PAREN_ENUMERATION_CAP`] factors.
    pub fn all_capped(t: usize) -> Result<Vec<ParenTree>> {
        if t > PAREN_ENUMERATION_CAP {
            return Err(Error::ParenEnumerationCap {
                factors: t,
                cap: PAREN_ENUMERATION_CAP,
            });
        }
        Ok(ParenTree::all(t))
    }

    /// Splits into the two subtrees of the root.
    pub fn split(&self) -> Option<(&ParenTree, &ParenTree)> {
        match self {
            ParenTree::Leaf => None,
            ParenTree::Node(l, r) => Some((l, r)),
        }
    }
}

impl fmt::Display for ParenTree {
    /// Leaves print as `x`; every internal node is parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParenTree::Leaf => write!(f, "x"),
            ParenTree::Node(l, r) => write!(f, "({l}{r})"),
        }
    }
}

impl fmt::Debug for ParenTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ParenTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        fn parse(b: &[u8], pos: &mut usize) -> Option<ParenTree> {
            match b.get(*pos)? {
                b'x' => {
                    *pos += 1;
                    Some(ParenTree::Leaf)
                }
                b'(' => {
                    *pos += 1;
                    let l = parse(b, pos)?;
                    let r = parse(b, pos)?;
                    if b.get(*pos) != Some(&b')') {
                        return None;
                    }
                    *pos += 1;
                    Some(ParenTree::node(l, r))
                }
                _ => None,
            }
        }
        let compact: Vec<u8> = s.bytes().filter(|c| !c.is_ascii_whitespace()).collect();
        let mut pos = 0;
        match parse(&compact, &mut pos) {
            Some(t) if pos == compact.len() => Ok(t),
            _ => Err(Error::parse("parenthesization", format!("cannot parse {s:?}"))),
        }
    }
}
