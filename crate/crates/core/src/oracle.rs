//! Independent direct-definition evaluators used for differential
//! testing. These deliberately share only the term and graph types with
//! the engine: match enumeration here is its own implementation and
//! CONSTRUCT results are plain substitution plus union, with no colimit
//! machinery. Fresh blanks use the `o` label prefix so accidental label
//! equality with engine output cannot mask an isomorphism bug.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Graph, Triple};
use crate::select::Multirelation;
use crate::term::{Term, TermKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("pattern contains blanks; the SPARQL answer is defined for blank-free patterns")]
    BlanksInL,
    #[error("instance too large for brute-force enumeration ({0} non-fixed attributes)")]
    TooLarge(usize),
    #[error("template variables not bound by the pattern")]
    UnboundVariables,
}

/// A binding of the non-fixed attributes of a pattern. Extended to the
/// identity on resource identifiers when applied.
pub type Binding = BTreeMap<Term, Term>;

fn apply_binding(binding: &Binding, t: &Triple) -> Triple {
    t.map_with(|a| binding.get(a).cloned().unwrap_or_else(|| a.clone()))
}

/// Enumerate the solution bindings of `l` against `g` by plain
/// recursion over the pattern triples in canonical order. No join
/// reordering, no sharing with the engine matcher.
pub fn solution_bindings(l: &Graph, g: &Graph) -> Vec<Binding> {
    let patterns: Vec<&Triple> = l.iter().collect();
    let mut out = Vec::new();
    descend(&patterns, g, BTreeMap::new(), &mut out);
    out
}

fn descend(patterns: &[&Triple], g: &Graph, binding: Binding, out: &mut Vec<Binding>) {
    let Some((first, rest)) = patterns.split_first() else {
        out.push(binding);
        return;
    };
    // distinct data triples yield distinct extensions, so no match is
    // reported twice
    for data in g {
        if let Some(extended) = extend(first, data, &binding) {
            descend(rest, g, extended, out);
        }
    }
}

fn extend(pattern: &Triple, data: &Triple, binding: &Binding) -> Option<Binding> {
    let mut next = binding.clone();
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
        } else {
            match next.get(p) {
                Some(bound) if bound != d => return None,
                Some(_) => {}
                None => {
                    next.insert(p.clone(), d.clone());
                }
            }
        }
    }
    Some(next)
}

/// Labels for oracle-created blanks: `o1`, `o2`, ... skipping any label
/// already used in the given graphs.
struct OracleBlanks {
    used: BTreeSet<String>,
    next: u64,
}

impl OracleBlanks {
    fn avoiding(graphs: &[&Graph]) -> OracleBlanks {
        let used = graphs
            .iter()
            .flat_map(|g| g.blanks())
            .map(|b| b.label)
            .collect();
        OracleBlanks { used, next: 1 }
    }

    fn fresh(&mut self) -> Term {
        loop {
            let label = format!("o{}", self.next);
            self.next += 1;
            if !self.used.contains(&label) {
                self.used.insert(label.clone());
                return Term::blank(label);
            }
        }
    }
}

/// Direct definition of the CONSTRUCT query result: for each match,
/// substitute the pattern bindings into the template, give each template
/// blank a fresh blank per match, and take the union.
pub fn direct_construct(l: &Graph, r: &Graph, g: &Graph) -> Result<Graph, OracleError> {
    if !r.variables().is_subset(&l.variables()) {
        return Err(OracleError::UnboundVariables);
    }
    let mut blanks = OracleBlanks::avoiding(&[l, r, g]);
    // keep the blank sets of the rule and the data disjoint
    let l_clean = relabel_colliding(l, g, &mut blanks);
    let r_clean = relabel_colliding(r, g, &mut blanks);

    let matches = solution_bindings(&l_clean, g);
    let mut result = Graph::new();
    for m in matches {
        let mut substitution = m;
        for b in r_clean.blanks() {
            substitution.insert(b, blanks.fresh());
        }
        for t in &r_clean {
            result.insert(apply_binding(&substitution, t));
        }
    }
    Ok(result)
}

fn relabel_colliding(part: &Graph, g: &Graph, blanks: &mut OracleBlanks) -> Graph {
    let data_blanks = g.blanks();
    let renaming: BTreeMap<Term, Term> = part
        .blanks()
        .into_iter()
        .filter(|b| data_blanks.contains(b))
        .map(|b| (b, blanks.fresh()))
        .collect();
    part.map_attributes(&renaming)
}

/// The SPARQL answer of a CONSTRUCT query over an RDF graph, for a
/// blank-free pattern: the set of RDF triples obtained by applying each
/// solution mapping to the template, with an injective blank relabeling
/// per mapping whose images are pairwise disjoint and avoid the data
/// blanks. Non-RDF instantiations are dropped.
pub fn sparql_construct_answer(l: &Graph, r: &Graph, g: &Graph) -> Result<Graph, OracleError> {
    if !l.blanks().is_empty() {
        return Err(OracleError::BlanksInL);
    }
    if !r.variables().is_subset(&l.variables()) {
        return Err(OracleError::UnboundVariables);
    }
    let mut blanks = OracleBlanks::avoiding(&[l, r, g]);
    let r_clean = relabel_colliding(r, g, &mut blanks);
    let mappings = solution_bindings(l, g);
    let mut result = Graph::new();
    for mu in mappings {
        let mut substitution = mu;
        for b in r_clean.blanks() {
            substitution.insert(b, blanks.fresh());
        }
        for t in &r_clean {
            let instantiated = apply_binding(&substitution, t);
            let is_rdf = matches!(instantiated.subject.kind, TermKind::Iri | TermKind::Blank)
                && instantiated.predicate.kind == TermKind::Iri;
            if is_rdf {
                result.insert(instantiated);
            }
        }
    }
    Ok(result)
}

/// The SPARQL answer of a SELECT query: the multiset of restrictions of
/// the solution mappings to the projected variables, one row per match.
pub fn sparql_select_answer(
    l: &Graph,
    projection: &[Term],
    g: &Graph,
) -> Result<Multirelation, OracleError> {
    let vars = l.variables();
    if !projection.iter().all(|v| vars.contains(v)) {
        return Err(OracleError::UnboundVariables);
    }
    let rows = solution_bindings(l, g)
        .into_iter()
        .map(|mu| projection.iter().map(|v| mu[v].clone()).collect())
        .collect();
    Ok(Multirelation::new(
        projection.iter().map(|v| v.label.clone()).collect(),
        rows,
    ))
}

/// Testing oracle for the matcher: every map from the non-fixed
/// attributes of `l` into the attributes of `g`, filtered by the
/// homomorphism condition. Exponential; guarded.
pub fn brute_force_matches(l: &Graph, g: &Graph) -> Result<BTreeSet<Binding>, OracleError> {
    let free: Vec<Term> = l
        .attributes()
        .into_iter()
        .filter(|a| !a.is_resource())
        .collect();
    if free.len() > 8 {
        return Err(OracleError::TooLarge(free.len()));
    }
    let candidates: Vec<Term> = g
        .attributes()
        .into_iter()
        .filter(|a| a.kind != TermKind::Variable)
        .collect();
    let mut out = BTreeSet::new();
    let mut current = BTreeMap::new();
    enumerate_maps(l, g, &free, 0, &candidates, &mut current, &mut out);
    Ok(out)
}

fn enumerate_maps(
    l: &Graph,
    g: &Graph,
    free: &[Term],
    idx: usize,
    candidates: &[Term],
    current: &mut Binding,
    out: &mut BTreeSet<Binding>,
) {
    if idx == free.len() {
        let homomorphic = l.iter().all(|t| g.contains(&apply_binding(current, t)));
        if homomorphic {
            out.insert(current.clone());
        }
        return;
    }
    for c in candidates {
        current.insert(free[idx].clone(), c.clone());
        enumerate_maps(l, g, free, idx + 1, candidates, current, out);
    }
    current.remove(&free[idx]);
}
