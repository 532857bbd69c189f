use std::collections::BTreeMap;

use thiserror::Error;

use crate::fixed::FixedSet;
use crate::graph::{Graph, Triple};
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("map is not total: attribute {0} of the domain has no image")]
    NotTotal(Term),
    #[error("not a homomorphism: image triple {0} {1} {2} is not in the codomain")]
    NotHomomorphism(Term, Term, Term),
    #[error("map moves the fixed attribute {0}")]
    ViolatesFixing(Term),
    #[error("morphisms do not compose: codomain/domain mismatch")]
    NotComposable,
}

/// A validated morphism of graphs fixing a set `C`: a total attribute
/// map whose induced triple map lands in the codomain and which is the
/// identity on fixed attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    domain: Graph,
    codomain: Graph,
    map: BTreeMap<Term, Term>,
    fixed: FixedSet,
}

impl Morphism {
    /// Validate `map` as a morphism `domain -> codomain` fixing `fixed`.
    ///
    /// Entries outside the domain's attribute set are ignored; fixed
    /// attributes missing from the map are completed with identity.
    pub fn check(
        map: BTreeMap<Term, Term>,
        domain: Graph,
        codomain: Graph,
        fixed: FixedSet,
    ) -> Result<Morphism, MorphismError> {
        let attrs = domain.attributes();
        let mut total = BTreeMap::new();
        for a in &attrs {
            match map.get(a) {
                Some(img) => {
                    if fixed.contains(a) && img != a {
                        return Err(MorphismError::ViolatesFixing(a.clone()));
                    }
                    total.insert(a.clone(), img.clone());
                }
                None if fixed.contains(a) => {
                    total.insert(a.clone(), a.clone());
                }
                None => return Err(MorphismError::NotTotal(a.clone())),
            }
        }
        for t in &domain {
            let img = t.map_with(|a| total[a].clone());
            if !codomain.contains(&img) {
                return Err(MorphismError::NotHomomorphism(
                    img.subject,
                    img.predicate,
                    img.object,
                ));
            }
        }
        Ok(Morphism { domain, codomain, map: total, fixed })
    }

    pub fn identity(g: &Graph, fixed: FixedSet) -> Morphism {
        let map = g.attributes().into_iter().map(|a| (a.clone(), a)).collect();
        Morphism { domain: g.clone(), codomain: g.clone(), map, fixed }
    }

    /// Inclusion of a subgraph. Panics if `sub` is not a subgraph.
    pub fn inclusion(sub: &Graph, sup: &Graph, fixed: FixedSet) -> Morphism {
        assert!(sub.is_subgraph_of(sup), "inclusion requires a subgraph");
        let map = sub.attributes().into_iter().map(|a| (a.clone(), a)).collect();
        Morphism { domain: sub.clone(), codomain: sup.clone(), map, fixed }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn fixed(&self) -> &FixedSet {
        &self.fixed
    }

    pub fn map(&self) -> &BTreeMap<Term, Term> {
        &self.map
    }

    pub fn apply(&self, t: &Term) -> Term {
        self.map.get(t).cloned().unwrap_or_else(|| t.clone())
    }

    pub fn apply_triple(&self, t: &Triple) -> Triple {
        t.map_with(|a| self.apply(a))
    }

    /// Image of the whole domain.
    pub fn image(&self) -> Graph {
        self.domain.iter().map(|t| self.apply_triple(t)).collect()
    }

    /// Restrict to a subgraph of the domain, with the stated codomain.
    pub fn restrict(&self, sub: &Graph, codomain: Graph) -> Result<Morphism, MorphismError> {
        let map = sub
            .attributes()
            .into_iter()
            .map(|a| {
                let img = self.apply(&a);
                (a, img)
            })
            .collect();
        Morphism::check(map, sub.clone(), codomain, self.fixed.clone())
    }

    /// Composition `other ∘ self` (self first).
    pub fn then(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        if &self.codomain != other.domain() {
            return Err(MorphismError::NotComposable);
        }
        let map = self
            .map
            .iter()
            .map(|(a, b)| (a.clone(), other.apply(b)))
            .collect();
        Morphism::check(map, self.domain.clone(), other.codomain.clone(), self.fixed.clone())
    }
}

/// Convenience wrapper matching the operation contract: validate a raw
/// attribute map as a morphism.
pub fn check_morphism(
    map: BTreeMap<Term, Term>,
    domain: &Graph,
    codomain: &Graph,
    fixed: FixedSet,
) -> Result<Morphism, MorphismError> {
    Morphism::check(map, domain.clone(), codomain.clone(), fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Graph {
        [
            Triple::new(Term::iri("alice"), Term::iri("knows"), Term::blank("b")),
            Triple::new(Term::blank("c"), Term::iri("knows"), Term::iri("bob")),
        ]
        .into_iter()
        .collect()
    }

    fn person_g() -> Graph {
        [
            Triple::new(Term::iri("alice"), Term::iri("name"), Term::literal("Alice")),
            Triple::new(Term::iri("alice"), Term::iri("nick"), Term::literal("Lissie")),
        ]
        .into_iter()
        .collect()
    }

    fn pattern() -> Graph {
        [Triple::new(Term::variable("x"), Term::iri("name"), Term::variable("name"))]
            .into_iter()
            .collect()
    }

    #[test]
    fn identity_is_a_morphism() {
        let g = g1();
        let map = g.attributes().into_iter().map(|a| (a.clone(), a)).collect();
        assert!(check_morphism(map, &g, &g, FixedSet::Ibv).is_ok());
    }

    #[test]
    fn match_into_data_graph() {
        let map: BTreeMap<Term, Term> = [
            (Term::variable("x"), Term::iri("alice")),
            (Term::variable("name"), Term::literal("Alice")),
            (Term::iri("name"), Term::iri("name")),
        ]
        .into_iter()
        .collect();
        let m = check_morphism(map, &pattern(), &person_g(), FixedSet::I).unwrap();
        assert_eq!(m.apply(&Term::variable("x")), Term::iri("alice"));
    }

    #[test]
    fn bad_binding_is_not_a_homomorphism() {
        let map: BTreeMap<Term, Term> = [
            (Term::variable("x"), Term::iri("alice")),
            (Term::variable("name"), Term::literal("Bob")),
        ]
        .into_iter()
        .collect();
        let err = check_morphism(map, &pattern(), &person_g(), FixedSet::I).unwrap_err();
        assert!(matches!(err, MorphismError::NotHomomorphism(..)));
    }

    #[test]
    fn missing_non_fixed_attribute_is_not_total() {
        let map: BTreeMap<Term, Term> =
            [(Term::variable("x"), Term::iri("alice"))].into_iter().collect();
        let err = check_morphism(map, &pattern(), &person_g(), FixedSet::I).unwrap_err();
        assert_eq!(err, MorphismError::NotTotal(Term::variable("name")));
    }

    #[test]
    fn moving_a_fixed_attribute_is_rejected() {
        let g = g1();
        let mut map: BTreeMap<Term, Term> =
            g.attributes().into_iter().map(|a| (a.clone(), a)).collect();
        map.insert(Term::blank("b"), Term::blank("elsewhere"));
        let err = check_morphism(map, &g, &g, FixedSet::Ibv).unwrap_err();
        assert_eq!(err, MorphismError::ViolatesFixing(Term::blank("b")));
    }

    #[test]
    fn composition_of_morphisms() {
        let g = g1();
        // swap the two blanks, twice: composes to the identity map
        let swap: BTreeMap<Term, Term> = [
            (Term::blank("b"), Term::blank("c")),
            (Term::blank("c"), Term::blank("b")),
        ]
        .into_iter()
        .collect();
        let g2 = g.map_attributes(&swap);
        let a = check_morphism(swap.clone(), &g, &g2, FixedSet::I).unwrap();
        let b = check_morphism(swap, &g2, &g, FixedSet::I).unwrap();
        let composed = a.then(&b).unwrap();
        assert_eq!(composed.apply(&Term::blank("b")), Term::blank("b"));
        assert_eq!(composed.image(), g);
    }
}
