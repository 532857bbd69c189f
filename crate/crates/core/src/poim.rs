use std::collections::BTreeMap;

use thiserror::Error;

use crate::colimit::{coproduct, image_factorization, pushout, ColimitError};
use crate::fixed::FixedSet;
use crate::fresh::FreshSupply;
use crate::graph::Graph;
use crate::matcher::{enumerate_matches, match_image, MatchError};
use crate::morphism::{Morphism, MorphismError};
use crate::term::Term;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("template variables not bound by the pattern: {}", format_terms(.0))]
    UnboundVariables(Vec<Term>),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

fn format_terms(ts: &[Term]) -> String {
    ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// How to handle template variables that do not occur in the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnboundPolicy {
    /// Reject the rule.
    #[default]
    Strict,
    /// Drop template triples containing an unbound variable, as SPARQL
    /// does for CONSTRUCT templates.
    DropTriples,
}

/// Which CONSTRUCT calculus to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Calculus {
    High,
    #[default]
    Low,
}

/// A CONSTRUCT transformation rule `L ⊆ K ⊇ R` with `K = L ∪ R`,
/// blanks of `L` and `R` disjoint and `vars(R) ⊆ vars(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructRule {
    l_side: Graph,
    r_side: Graph,
    k: Graph,
}

impl ConstructRule {
    /// Build a rule from a pattern `l` and template `r`. Blanks of `r`
    /// colliding with blanks of `l` are freshened first, so the two
    /// blank sets end up disjoint.
    pub fn new(l: Graph, r: Graph, supply: &mut FreshSupply) -> Result<ConstructRule, RuleError> {
        ConstructRule::with_policy(l, r, UnboundPolicy::Strict, supply)
    }

    pub fn with_policy(
        l: Graph,
        r: Graph,
        policy: UnboundPolicy,
        supply: &mut FreshSupply,
    ) -> Result<ConstructRule, RuleError> {
        let l_vars = l.variables();
        let r = match policy {
            UnboundPolicy::Strict => {
                let unbound: Vec<Term> =
                    r.variables().into_iter().filter(|v| !l_vars.contains(v)).collect();
                if !unbound.is_empty() {
                    return Err(RuleError::UnboundVariables(unbound));
                }
                r
            }
            UnboundPolicy::DropTriples => r
                .iter()
                .filter(|t| {
                    t.terms().iter().all(|a| !a.is_variable() || l_vars.contains(*a))
                })
                .cloned()
                .collect(),
        };
        let l_blanks = l.blanks();
        let renaming: BTreeMap<Term, Term> = r
            .blanks()
            .into_iter()
            .filter(|b| l_blanks.contains(b))
            .map(|b| {
                let fresh = supply.fresh_blank();
                (b, fresh)
            })
            .collect();
        let r = r.map_attributes(&renaming);
        let k = l.union(&r);
        Ok(ConstructRule { l_side: l, r_side: r, k })
    }

    pub fn pattern(&self) -> &Graph {
        &self.l_side
    }

    pub fn template(&self) -> &Graph {
        &self.r_side
    }

    pub fn glued(&self) -> &Graph {
        &self.k
    }
}

/// One POIM rewrite step for a single match `m : L -> G`: pushout along
/// `L ⊆ K`, then image factorization along `R ⊆ K`. Returns the result
/// `H`, the match `p : R -> H`, and the intermediate graph `D`.
pub fn poim_apply(
    rule: &ConstructRule,
    m: &Morphism,
    supply: &mut FreshSupply,
) -> Result<(Graph, Morphism, Graph), RuleError> {
    let po = pushout(&rule.l_side, &rule.k, m, &FixedSet::I, supply)?;
    // the rule side may have been renamed to avoid G's blanks; R moves along
    let r_renamed = rule.r_side.map_attributes(&po.rule_renaming);
    let im = image_factorization(&r_renamed, &po.n)?;
    Ok((im.h, im.p, po.d))
}

/// A rule made of `k` disjoint copies of another rule, with the per-copy
/// attribute renamings kept so a combined match can be assembled.
#[derive(Debug, Clone)]
pub struct KFoldRule {
    pub rule: ConstructRule,
    /// For copy `i`, the map original attribute -> copy-`i` attribute
    /// (non-fixed attributes only).
    pub copy_renamings: Vec<BTreeMap<Term, Term>>,
}

/// The k-fold coproduct of a rule in the category fixing `I`: blanks and
/// variables are renamed per copy, simultaneously in `L`, `K` and `R`.
pub fn k_fold_rule(rule: &ConstructRule, k: usize, supply: &mut FreshSupply) -> KFoldRule {
    let mut l = Graph::new();
    let mut r = Graph::new();
    let mut copy_renamings = Vec::with_capacity(k);
    for _ in 0..k {
        let renaming: BTreeMap<Term, Term> = rule
            .k
            .attributes()
            .into_iter()
            .filter(|a| !a.is_resource())
            .map(|a| {
                let fresh = supply.fresh_like(&a);
                (a, fresh)
            })
            .collect();
        l = l.union(&rule.l_side.map_attributes(&renaming));
        r = r.union(&rule.r_side.map_attributes(&renaming));
        copy_renamings.push(renaming);
    }
    let kk = l.union(&r);
    KFoldRule { rule: ConstructRule { l_side: l, r_side: r, k: kk }, copy_renamings }
}

/// Rename rule blanks that also occur in the data graph, so that the
/// blank sets of the rule and of `G` are disjoint as the calculi assume.
/// The renamed rule is isomorphic to the original fixing `IV`.
fn disjoin_from_data(rule: &ConstructRule, g: &Graph, supply: &mut FreshSupply) -> ConstructRule {
    let data_blanks = g.blanks();
    let renaming: BTreeMap<Term, Term> = rule
        .k
        .blanks()
        .into_iter()
        .filter(|b| data_blanks.contains(b))
        .map(|b| {
            let fresh = supply.fresh_blank();
            (b, fresh)
        })
        .collect();
    if renaming.is_empty() {
        return rule.clone();
    }
    ConstructRule {
        l_side: rule.l_side.map_attributes(&renaming),
        r_side: rule.r_side.map_attributes(&renaming),
        k: rule.k.map_attributes(&renaming),
    }
}

/// High-level calculus: one POIM application of the k-fold rule, where
/// `k` is the number of matches and the combined match coincides with
/// the i-th match on the i-th copy.
pub fn construct_high(
    rule: &ConstructRule,
    g: &Graph,
    supply: &mut FreshSupply,
) -> Result<Graph, RuleError> {
    let rule = disjoin_from_data(rule, g, supply);
    let rule = &rule;
    let matches = enumerate_matches(&rule.l_side, g)?;
    let folded = k_fold_rule(rule, matches.len(), supply);
    let mut map: BTreeMap<Term, Term> = BTreeMap::new();
    let l_attrs = rule.l_side.attributes();
    for (m_i, renaming) in matches.iter().zip(&folded.copy_renamings) {
        for (orig, copy) in renaming {
            if l_attrs.contains(orig) {
                map.insert(copy.clone(), m_i.apply(orig));
            }
        }
    }
    let combined = Morphism::check(map, folded.rule.l_side.clone(), g.clone(), FixedSet::I)?;
    let (h, _, _) = poim_apply(&folded.rule, &combined, supply)?;
    Ok(h)
}

/// Low-level calculus: one POIM application per match restricted to its
/// image, then a coproduct fixing `IB(G)` so the data blanks are shared
/// and the rule-created blanks are split per copy.
pub fn construct_low(
    rule: &ConstructRule,
    g: &Graph,
    supply: &mut FreshSupply,
) -> Result<Graph, RuleError> {
    let rule = disjoin_from_data(rule, g, supply);
    let rule = &rule;
    let matches = enumerate_matches(&rule.l_side, g)?;
    let mut locals = Vec::with_capacity(matches.len());
    for m in &matches {
        let image = match_image(m);
        let restricted = m.restrict(&rule.l_side, image)?;
        let (h_i, _, _) = poim_apply(rule, &restricted, supply)?;
        locals.push(h_i);
    }
    let (merged, _) = coproduct(&locals, &FixedSet::ib_of(g), supply);
    Ok(merged)
}

pub fn construct_eval(
    rule: &ConstructRule,
    g: &Graph,
    supply: &mut FreshSupply,
    calculus: Calculus,
) -> Result<Graph, RuleError> {
    match calculus {
        Calculus::High => construct_high(rule, g, supply),
        Calculus::Low => construct_low(rule, g, supply),
    }
}
