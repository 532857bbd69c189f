use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{Term, TermKind};

/// An ordered (subject, predicate, object) triple. No structural
/// restriction: blanks, literals and variables may appear in any
/// position; RDF conformance is a separate check ([`Graph::is_rdf_graph`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        Triple { subject, predicate, object }
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    /// Apply an attribute map position-wise. Attributes missing from the
    /// map are left unchanged.
    pub fn map_with<F: Fn(&Term) -> Term>(&self, f: F) -> Triple {
        Triple::new(f(&self.subject), f(&self.predicate), f(&self.object))
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph contains variables; not a data graph")]
    HasVariables,
}

/// A finite set of triples. Iteration order is canonical: lexicographic
/// on (subject, predicate, object) under the term order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Graph {
    triples: BTreeSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn insert(&mut self, t: Triple) {
        self.triples.insert(t);
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        self.triples.iter().chain(other.triples.iter()).cloned().collect()
    }

    /// Subgraph test on triple sets.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.triples.is_subset(&other.triples)
    }

    /// The set of attributes: all subjects, predicates and objects.
    pub fn attributes(&self) -> BTreeSet<Term> {
        self.triples
            .iter()
            .flat_map(|t| t.terms().map(Clone::clone))
            .collect()
    }

    /// Attributes split by namespace: resource identifiers (IRIs and
    /// literals together), blanks, variables. Disjoint, union is
    /// `attributes()`.
    pub fn partition_attributes(&self) -> (BTreeSet<Term>, BTreeSet<Term>, BTreeSet<Term>) {
        let mut resources = BTreeSet::new();
        let mut blanks = BTreeSet::new();
        let mut variables = BTreeSet::new();
        for a in self.attributes() {
            match a.kind {
                TermKind::Iri | TermKind::Literal => resources.insert(a),
                TermKind::Blank => blanks.insert(a),
                TermKind::Variable => variables.insert(a),
            };
        }
        (resources, blanks, variables)
    }

    pub fn blanks(&self) -> BTreeSet<Term> {
        self.partition_attributes().1
    }

    pub fn variables(&self) -> BTreeSet<Term> {
        self.partition_attributes().2
    }

    pub fn has_variables(&self) -> bool {
        self.triples
            .iter()
            .any(|t| t.terms().iter().any(|a| a.is_variable()))
    }

    /// True iff every triple is an RDF triple: subject an IRI or blank,
    /// predicate an IRI, object anything but a variable. Errors if the
    /// graph contains variables at all.
    pub fn is_rdf_graph(&self) -> Result<bool, GraphError> {
        if self.has_variables() {
            return Err(GraphError::HasVariables);
        }
        Ok(self.triples.iter().all(|t| {
            matches!(t.subject.kind, TermKind::Iri | TermKind::Blank)
                && t.predicate.kind == TermKind::Iri
        }))
    }

    /// The subgraph of RDF triples.
    pub fn rdf_triples(&self) -> Graph {
        self.triples
            .iter()
            .filter(|t| {
                matches!(t.subject.kind, TermKind::Iri | TermKind::Blank)
                    && t.predicate.kind == TermKind::Iri
                    && t.object.kind != TermKind::Variable
            })
            .cloned()
            .collect()
    }

    /// Image of the graph under an attribute map; attributes missing from
    /// the map stay put.
    pub fn map_attributes(&self, map: &std::collections::BTreeMap<Term, Term>) -> Graph {
        self.triples
            .iter()
            .map(|t| t.map_with(|a| map.get(a).cloned().unwrap_or_else(|| a.clone())))
            .collect()
    }
}

impl std::fmt::Display for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for t in self {
            if !first {
                write!(f, " . ")?;
            }
            first = false;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph { triples: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Graph {
        // :alice :knows _:b . _:c :knows :bob
        [
            Triple::new(Term::iri("alice"), Term::iri("knows"), Term::blank("b")),
            Triple::new(Term::blank("c"), Term::iri("knows"), Term::iri("bob")),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn attributes_of_empty_graph() {
        assert!(Graph::new().attributes().is_empty());
    }

    #[test]
    fn attributes_cover_all_positions() {
        let attrs = g1().attributes();
        let expected: BTreeSet<Term> = [
            Term::iri("alice"),
            Term::iri("knows"),
            Term::blank("b"),
            Term::blank("c"),
            Term::iri("bob"),
        ]
        .into_iter()
        .collect();
        assert_eq!(attrs, expected);
    }

    #[test]
    fn attributes_of_single_pattern() {
        let g: Graph = [Triple::new(
            Term::variable("x"),
            Term::iri("name"),
            Term::variable("name"),
        )]
        .into_iter()
        .collect();
        assert_eq!(g.attributes().len(), 3);
    }

    #[test]
    fn partition_splits_namespaces() {
        let (res, blanks, vars) = g1().partition_attributes();
        assert_eq!(res.len(), 3);
        assert_eq!(blanks.len(), 2);
        assert!(vars.is_empty());
        let empty = Graph::new().partition_attributes();
        assert!(empty.0.is_empty() && empty.1.is_empty() && empty.2.is_empty());
    }

    #[test]
    fn partition_with_variable() {
        let g: Graph = [Triple::new(
            Term::blank("x"),
            Term::iri("name"),
            Term::variable("name"),
        )]
        .into_iter()
        .collect();
        let (res, blanks, vars) = g.partition_attributes();
        assert_eq!(res, [Term::iri("name")].into_iter().collect());
        assert_eq!(blanks, [Term::blank("x")].into_iter().collect());
        assert_eq!(vars, [Term::variable("name")].into_iter().collect());
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let mut g = g1();
        let before = g.len();
        g.insert(Triple::new(Term::iri("alice"), Term::iri("knows"), Term::blank("b")));
        assert_eq!(g.len(), before);
    }

    #[test]
    fn rdf_graph_check() {
        assert_eq!(Graph::new().is_rdf_graph(), Ok(true));
        let ok: Graph = [Triple::new(
            Term::iri("alice"),
            Term::iri("name"),
            Term::literal("Alice"),
        )]
        .into_iter()
        .collect();
        assert_eq!(ok.is_rdf_graph(), Ok(true));
        let bad: Graph = [Triple::new(
            Term::literal("Alice"),
            Term::iri("name"),
            Term::iri("alice"),
        )]
        .into_iter()
        .collect();
        assert_eq!(bad.is_rdf_graph(), Ok(false));
        let with_var: Graph = [Triple::new(
            Term::variable("x"),
            Term::iri("name"),
            Term::iri("alice"),
        )]
        .into_iter()
        .collect();
        assert_eq!(with_var.is_rdf_graph(), Err(GraphError::HasVariables));
    }
}
