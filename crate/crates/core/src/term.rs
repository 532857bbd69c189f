use std::fmt;

/// The four pairwise disjoint namespaces of the attribute alphabet.
///
/// IRIs and literals together form the resource identifiers; blanks are
/// locally scoped anonymous nodes; variables occur only in query graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    Iri,
    Literal,
    Blank,
    Variable,
}

/// An attribute: a kind tag plus a label without sigils.
///
/// Equality and ordering are on `(kind, label)`, with kinds ordered
/// `Iri < Literal < Blank < Variable`. This ordering is the canonical
/// term order used everywhere determinism matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub kind: TermKind,
    pub label: String,
}

impl Term {
    pub fn new(kind: TermKind, label: impl Into<String>) -> Self {
        Term { kind, label: label.into() }
    }

    pub fn iri(label: impl Into<String>) -> Self {
        Term::new(TermKind::Iri, label)
    }

    pub fn literal(label: impl Into<String>) -> Self {
        Term::new(TermKind::Literal, label)
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::new(TermKind::Blank, label)
    }

    pub fn variable(label: impl Into<String>) -> Self {
        Term::new(TermKind::Variable, label)
    }

    /// A resource identifier is an IRI or a literal.
    pub fn is_resource(&self) -> bool {
        matches!(self.kind, TermKind::Iri | TermKind::Literal)
    }

    pub fn is_blank(&self) -> bool {
        self.kind == TermKind::Blank
    }

    pub fn is_variable(&self) -> bool {
        self.kind == TermKind::Variable
    }

    /// Same label, possibly different kind.
    pub fn with_kind(&self, kind: TermKind) -> Term {
        Term::new(kind, self.label.clone())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => {
                if crate::syntax::iri_needs_brackets(&self.label) {
                    write!(f, "<{}>", self.label)
                } else {
                    write!(f, ":{}", self.label)
                }
            }
            TermKind::Literal => write!(f, "\"{}\"", crate::syntax::escape_literal(&self.label)),
            TermKind::Blank => write!(f, "_:{}", self.label),
            TermKind::Variable => write!(f, "?{}", self.label),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_separates_namespaces() {
        assert_ne!(Term::iri("a"), Term::literal("a"));
        assert_ne!(Term::blank("a"), Term::variable("a"));
    }

    #[test]
    fn canonical_order_is_kind_then_label() {
        let mut ts = vec![
            Term::variable("a"),
            Term::blank("z"),
            Term::literal("m"),
            Term::iri("z"),
            Term::iri("a"),
        ];
        ts.sort();
        assert_eq!(
            ts,
            vec![
                Term::iri("a"),
                Term::iri("z"),
                Term::literal("m"),
                Term::blank("z"),
                Term::variable("a"),
            ]
        );
    }
}
