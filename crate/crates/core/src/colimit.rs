use std::collections::BTreeMap;

use thiserror::Error;

use crate::fixed::FixedSet;
use crate::fresh::FreshSupply;
use crate::graph::Graph;
use crate::morphism::{Morphism, MorphismError};
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColimitError {
    #[error("not an inclusion: the left graph is not a subgraph of the right one")]
    InvalidInclusion,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Outcome of a pushout of `m : L -> G` along an inclusion `L ⊆ K`.
#[derive(Debug, Clone)]
pub struct PushoutResult {
    /// `D = G ∪ N³(K)`.
    pub d: Graph,
    /// `n : K' -> D`, the restriction of `N³` (domain is the renamed `K`).
    pub n: Morphism,
    /// The inclusion `G ⊆ D`.
    pub g: Morphism,
    /// Renaming applied to the rule side so that `|K| ∩ |G| ⊆ C`.
    /// Identity when there was no collision.
    pub rule_renaming: BTreeMap<Term, Term>,
}

/// Outcome of an image factorization along an inclusion `R ⊆ K`.
#[derive(Debug, Clone)]
pub struct ImageResult {
    /// `H = n³(R)`.
    pub h: Graph,
    /// `p : R -> H`, the restriction of `n`.
    pub p: Morphism,
    /// The inclusion `H ⊆ D`.
    pub inclusion: Morphism,
}

/// Coproduct of `parts` in the category fixing `fixed`: rename the
/// non-fixed attributes of each part to fresh names so that parts only
/// share fixed attributes, then take the union. Returns the union and
/// the injection morphisms.
pub fn coproduct(
    parts: &[Graph],
    fixed: &FixedSet,
    supply: &mut FreshSupply,
) -> (Graph, Vec<Morphism>) {
    let mut union = Graph::new();
    let mut injections = Vec::with_capacity(parts.len());
    for part in parts {
        let renaming: BTreeMap<Term, Term> = part
            .attributes()
            .into_iter()
            .filter(|a| !fixed.contains(a))
            .map(|a| {
                let fresh = supply.fresh_like(&a);
                (a, fresh)
            })
            .collect();
        let renamed = part.map_attributes(&renaming);
        union = union.union(&renamed);
        let map: BTreeMap<Term, Term> = part
            .attributes()
            .into_iter()
            .map(|a| {
                let img = renaming.get(&a).cloned().unwrap_or_else(|| a.clone());
                (a, img)
            })
            .collect();
        injections.push((part, map));
    }
    let injections = injections
        .into_iter()
        .map(|(part, map)| {
            Morphism::check(map, part.clone(), union.clone(), fixed.clone())
                .expect("coproduct injection is a morphism by construction")
        })
        .collect();
    (union, injections)
}

/// Pushout of a match `m : L -> G` along an inclusion `l : L ⊆ K` in the
/// category fixing `fixed`.
///
/// Non-fixed attributes of `K` colliding with attributes of `G` are
/// first renamed freshly (always on the rule side, never in `G`), then
/// `N(x) = m(x)` for `x ∈ |L|` and `N(x) = x` otherwise, and
/// `D = G ∪ N³(K)`.
pub fn pushout(
    l_side: &Graph,
    k: &Graph,
    m: &Morphism,
    fixed: &FixedSet,
    supply: &mut FreshSupply,
) -> Result<PushoutResult, ColimitError> {
    if !l_side.is_subgraph_of(k) {
        return Err(ColimitError::InvalidInclusion);
    }
    let g = m.codomain().clone();
    let g_attrs = g.attributes();
    let rule_renaming: BTreeMap<Term, Term> = k
        .attributes()
        .into_iter()
        .filter(|a| !fixed.contains(a) && g_attrs.contains(a))
        .map(|a| {
            let fresh = supply.fresh_like(&a);
            (a, fresh)
        })
        .collect();
    let k_renamed = k.map_attributes(&rule_renaming);
    let l_renamed = l_side.map_attributes(&rule_renaming);
    let l_attrs = l_renamed.attributes();

    // N over the renamed K: matched part follows m, the rest stays put
    let mut big_n: BTreeMap<Term, Term> = BTreeMap::new();
    for a in k.attributes() {
        let renamed = rule_renaming.get(&a).cloned().unwrap_or_else(|| a.clone());
        let img = if l_attrs.contains(&renamed) { m.apply(&a) } else { renamed.clone() };
        big_n.insert(renamed, img);
    }
    let d = g.union(&k_renamed.map_attributes(&big_n));
    let n = Morphism::check(big_n, k_renamed, d.clone(), fixed.clone())?;
    let g_incl = Morphism::inclusion(&g, &d, fixed.clone());
    Ok(PushoutResult { d, n, g: g_incl, rule_renaming })
}

/// Image factorization of `n : K -> D` along an inclusion `r : R ⊆ K`:
/// `H` is the image of `R` in `D` and `p` the restriction of `n`.
pub fn image_factorization(r_side: &Graph, n: &Morphism) -> Result<ImageResult, ColimitError> {
    if !r_side.is_subgraph_of(n.domain()) {
        return Err(ColimitError::InvalidInclusion);
    }
    let h: Graph = r_side.iter().map(|t| n.apply_triple(t)).collect();
    let p = n.restrict(r_side, h.clone())?;
    let inclusion = Morphism::inclusion(&h, n.codomain(), n.fixed().clone());
    Ok(ImageResult { h, p, inclusion })
}
