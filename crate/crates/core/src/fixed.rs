use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::term::{Term, TermKind};

/// A symbolic fixed set `C`: the subcategory parameter telling which
/// attributes a morphism must leave in place.
///
/// Every variant denotes an infinite (or cofinite) subset of the
/// alphabet, so the set is never materialized; membership is decided by
/// term kind plus, for `IbOf`, a finite set of blank labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSet {
    /// Resource identifiers only: IRIs and literals.
    I,
    /// Resource identifiers and variables.
    Iv,
    /// Resource identifiers and all blanks.
    Ib,
    /// Resource identifiers, blanks and variables: everything.
    Ibv,
    /// Resource identifiers plus the blanks occurring in a given graph.
    IbOf(BTreeSet<String>),
}

impl FixedSet {
    /// `IB(G) = I ∪ |G|_B`: fixes the blanks of `g` but no others.
    pub fn ib_of(g: &Graph) -> FixedSet {
        FixedSet::IbOf(g.blanks().into_iter().map(|b| b.label).collect())
    }

    pub fn contains(&self, t: &Term) -> bool {
        if t.is_resource() {
            return true;
        }
        match (self, t.kind) {
            (FixedSet::Iv, TermKind::Variable) => true,
            (FixedSet::Ib, TermKind::Blank) => true,
            (FixedSet::Ibv, _) => true,
            (FixedSet::IbOf(labels), TermKind::Blank) => labels.contains(&t.label),
            _ => false,
        }
    }
}

impl std::fmt::Display for FixedSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixedSet::I => write!(f, "I"),
            FixedSet::Iv => write!(f, "IV"),
            FixedSet::Ib => write!(f, "IB"),
            FixedSet::Ibv => write!(f, "IBV"),
            FixedSet::IbOf(_) => write!(f, "IB(G)"),
        }
    }
}
