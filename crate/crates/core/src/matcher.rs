use std::collections::BTreeMap;

use thiserror::Error;

use crate::fixed::FixedSet;
use crate::graph::{Graph, Triple};
use crate::morphism::Morphism;
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("the data graph contains variables")]
    CodomainHasVariables,
}

/// Enumerate all matches from a query graph `l` into a data graph `g`:
/// morphisms fixing `I`, so variables and blanks of `l` both bind.
///
/// Backtracking join over the triple patterns. Patterns are reordered
/// statically by ascending candidate count (cheapest first); within a
/// pattern, data triples are scanned in canonical order. The result
/// order is the deterministic discovery order and each match appears
/// exactly once.
pub fn enumerate_matches(l: &Graph, g: &Graph) -> Result<Vec<Morphism>, MatchError> {
    if g.has_variables() {
        return Err(MatchError::CodomainHasVariables);
    }
    let mut patterns: Vec<&Triple> = l.iter().collect();
    patterns.sort_by_key(|p| candidate_count(p, g));

    let mut results = Vec::new();
    let mut binding: BTreeMap<Term, Term> = BTreeMap::new();
    backtrack(&patterns, 0, g, &mut binding, &mut results);

    let matches = results
        .into_iter()
        .map(|map| {
            let mut total = map;
            for a in l.attributes() {
                total.entry(a.clone()).or_insert(a);
            }
            Morphism::check(total, l.clone(), g.clone(), FixedSet::I)
                .expect("search produced an invalid match")
        })
        .collect();
    Ok(matches)
}

/// The image `m³(L)` as a subgraph of the codomain.
pub fn match_image(m: &Morphism) -> Graph {
    m.image()
}

fn candidate_count(pattern: &Triple, g: &Graph) -> usize {
    g.iter()
        .filter(|t| unify(pattern, t, &BTreeMap::new()).is_some())
        .count()
}

fn backtrack(
    patterns: &[&Triple],
    idx: usize,
    g: &Graph,
    binding: &mut BTreeMap<Term, Term>,
    results: &mut Vec<BTreeMap<Term, Term>>,
) {
    if idx == patterns.len() {
        results.push(binding.clone());
        return;
    }
    let pattern = patterns[idx];
    if let Some(ground) = resolve(pattern, binding) {
        // fully determined: a membership test, a single continuation
        if g.contains(&ground) {
            backtrack(patterns, idx + 1, g, binding, results);
        }
        return;
    }
    for t in g {
        if let Some(extension) = unify(pattern, t, binding) {
            let added: Vec<Term> = extension
                .keys()
                .filter(|k| !binding.contains_key(*k))
                .cloned()
                .collect();
            binding.extend(extension);
            backtrack(patterns, idx + 1, g, binding, results);
            for k in added {
                binding.remove(&k);
            }
        }
    }
}

/// The ground image of a pattern under a binding, if every non-fixed
/// attribute is already bound.
fn resolve(pattern: &Triple, binding: &BTreeMap<Term, Term>) -> Option<Triple> {
    let mut out = Vec::with_capacity(3);
    for a in pattern.terms() {
        if a.is_resource() {
            out.push(a.clone());
        } else {
            out.push(binding.get(a)?.clone());
        }
    }
    Some(Triple::new(out[0].clone(), out[1].clone(), out[2].clone()))
}

/// Try to unify a pattern triple with a data triple under the current
/// binding; returns the extended binding entries on success.
fn unify(
    pattern: &Triple,
    data: &Triple,
    binding: &BTreeMap<Term, Term>,
) -> Option<BTreeMap<Term, Term>> {
    let mut extension: BTreeMap<Term, Term> = BTreeMap::new();
    let pairs = [
        (&pattern.subject, &data.subject),
        (&pattern.predicate, &data.predicate),
        (&pattern.object, &data.object),
    ];
    for (p, d) in pairs {
        if p.is_resource() {
            if p != d {
                return None;
            }
        } else if let Some(bound) = binding.get(p).or_else(|| extension.get(p)) {
            if bound != d {
                return None;
            }
        } else {
            extension.insert(p.clone(), d.clone());
        }
    }
    Some(extension)
}
