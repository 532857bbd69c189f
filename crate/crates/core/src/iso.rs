use std::collections::{BTreeMap, BTreeSet};

use crate::fixed::FixedSet;
use crate::fresh::FreshSupply;
use crate::graph::Graph;
use crate::morphism::Morphism;
use crate::term::Term;

/// Occurrence counts of an attribute per triple position. Invariant
/// under isomorphism, so signatures prune the candidate space.
fn signature(g: &Graph, a: &Term) -> (usize, usize, usize) {
    let mut s = (0, 0, 0);
    for t in g {
        if &t.subject == a {
            s.0 += 1;
        }
        if &t.predicate == a {
            s.1 += 1;
        }
        if &t.object == a {
            s.2 += 1;
        }
    }
    s
}

/// Search for an isomorphism `g1 -> g2` in the category fixing `fixed`:
/// identity on fixed attributes, a bijection on the rest, and the triple
/// image of `g1` equal to `g2`.
///
/// Backtracking over the non-fixed attributes of `g1`, candidates tried
/// in canonical term order; the first witness found is returned, so the
/// result is deterministic. Note that with `fixed = I` a blank may map
/// to a variable and vice versa: only membership in the complement of
/// the fixed set matters.
pub fn find_isomorphism(g1: &Graph, g2: &Graph, fixed: &FixedSet) -> Option<Morphism> {
    if g1.len() != g2.len() {
        return None;
    }
    let attrs1 = g1.attributes();
    let attrs2 = g2.attributes();
    let fixed1: BTreeSet<&Term> = attrs1.iter().filter(|a| fixed.contains(a)).collect();
    let fixed2: BTreeSet<&Term> = attrs2.iter().filter(|a| fixed.contains(a)).collect();
    if fixed1 != fixed2 {
        return None;
    }
    let free1: Vec<&Term> = attrs1.iter().filter(|a| !fixed.contains(a)).collect();
    let free2: Vec<&Term> = attrs2.iter().filter(|a| !fixed.contains(a)).collect();
    if free1.len() != free2.len() {
        return None;
    }
    for f in fixed1.iter() {
        if signature(g1, f) != signature(g2, f) {
            return None;
        }
    }

    let mut assignment: BTreeMap<Term, Term> = BTreeMap::new();
    let mut used: BTreeSet<Term> = BTreeSet::new();
    if search(g1, g2, fixed, &free1, 0, &mut assignment, &mut used) {
        let mut map = assignment;
        for a in fixed1 {
            map.insert(a.clone(), a.clone());
        }
        // the search already guarantees a valid bijective witness
        return Some(
            Morphism::check(map, g1.clone(), g2.clone(), fixed.clone())
                .expect("search produced an invalid witness"),
        );
    }
    None
}

fn search(
    g1: &Graph,
    g2: &Graph,
    fixed: &FixedSet,
    free1: &[&Term],
    idx: usize,
    assignment: &mut BTreeMap<Term, Term>,
    used: &mut BTreeSet<Term>,
) -> bool {
    if idx == free1.len() {
        // fully assigned: the image must be exactly g2
        let image: Graph = g1
            .iter()
            .map(|t| t.map_with(|a| assignment.get(a).cloned().unwrap_or_else(|| a.clone())))
            .collect();
        return &image == g2;
    }
    let a = free1[idx];
    let sig = signature(g1, a);
    let candidates: Vec<Term> = g2
        .attributes()
        .into_iter()
        .filter(|b| !fixed.contains(b) && !used.contains(b) && signature(g2, b) == sig)
        .collect();
    for b in candidates {
        assignment.insert(a.clone(), b.clone());
        used.insert(b.clone());
        if consistent(g1, g2, assignment, fixed) && search(g1, g2, fixed, free1, idx + 1, assignment, used) {
            return true;
        }
        assignment.remove(a);
        used.remove(&b);
    }
    false
}

/// Every triple of g1 whose attributes are all decided must map into g2.
fn consistent(g1: &Graph, g2: &Graph, assignment: &BTreeMap<Term, Term>, fixed: &FixedSet) -> bool {
    'triples: for t in g1 {
        let mut image = Vec::with_capacity(3);
        for a in t.terms() {
            if fixed.contains(a) {
                image.push(a.clone());
            } else if let Some(b) = assignment.get(a) {
                image.push(b.clone());
            } else {
                continue 'triples;
            }
        }
        let img = crate::graph::Triple::new(image[0].clone(), image[1].clone(), image[2].clone());
        if !g2.contains(&img) {
            return false;
        }
    }
    true
}

/// Replace every blank of `g` by a fresh blank, injectively. The result
/// is isomorphic to `g` fixing `I`; the renaming map is returned as the
/// witness data.
pub fn rename_blanks(g: &Graph, supply: &mut FreshSupply) -> (Graph, BTreeMap<Term, Term>) {
    let renaming: BTreeMap<Term, Term> = g
        .blanks()
        .into_iter()
        .map(|b| {
            let fresh = supply.fresh_blank();
            (b, fresh)
        })
        .collect();
    (g.map_attributes(&renaming), renaming)
}
