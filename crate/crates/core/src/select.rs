use std::collections::BTreeMap;

use thiserror::Error;

use crate::fresh::FreshSupply;
use crate::graph::Graph;
use crate::poim::{construct_eval, Calculus, ConstructRule, RuleError};
use crate::term::{Term, TermKind};

/// Namespace prefix for the column IRIs of relational graphs; keeps
/// result predicates apart from user data predicates.
pub const COLUMN_PREFIX: &str = "col:";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SelectError {
    #[error("projection must name at least one variable")]
    EmptyProjection,
    #[error("projection variable {0} does not occur in the pattern")]
    ProjectionNotInPattern(Term),
    #[error("duplicate projection variable {0}")]
    DuplicateProjectionVar(Term),
    #[error("graph is not a relational data graph for the given header")]
    NotRelational,
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// A basic SELECT query: a pattern plus an ordered projection of
/// distinct variables, each occurring in the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectQuery {
    pattern: Graph,
    projection: Vec<Term>,
}

impl SelectQuery {
    pub fn new(pattern: Graph, projection: Vec<Term>) -> Result<SelectQuery, SelectError> {
        if projection.is_empty() {
            return Err(SelectError::EmptyProjection);
        }
        let vars = pattern.variables();
        let mut seen = std::collections::BTreeSet::new();
        for v in &projection {
            debug_assert!(v.is_variable());
            if !seen.insert(v.clone()) {
                return Err(SelectError::DuplicateProjectionVar(v.clone()));
            }
            if !vars.contains(v) {
                return Err(SelectError::ProjectionNotInPattern(v.clone()));
            }
        }
        Ok(SelectQuery { pattern, projection })
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn projection(&self) -> &[Term] {
        &self.projection
    }

    /// The column IRIs, in projection order.
    pub fn header(&self) -> Vec<Term> {
        self.projection.iter().map(column_iri).collect()
    }
}

/// Column IRI for a projection variable.
pub fn column_iri(v: &Term) -> Term {
    Term::iri(format!("{}{}", COLUMN_PREFIX, v.label))
}

/// A multiset of rows over resource identifiers and blanks, with a
/// column header. Rows are kept sorted; multiplicities are semantic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multirelation {
    header: Vec<String>,
    rows: Vec<Vec<Term>>,
}

impl Multirelation {
    pub fn new(header: Vec<String>, mut rows: Vec<Vec<Term>>) -> Multirelation {
        debug_assert!(rows.iter().all(|r| r.len() == header.len()));
        rows.sort();
        Multirelation { header, rows }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn cell_text(t: &Term) -> String {
        t.to_string()
    }

    /// RFC 4180 CSV, header row first. A literal becomes a quoted field
    /// holding its value, so a row of names prints as `"Alice","Bob"`; other terms keep their syntax form.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&csv_row(self.header.iter().map(|h| csv_field(h))));
        for row in &self.rows {
            out.push_str(&csv_row(row.iter().map(|t| {
                if t.kind == TermKind::Literal {
                    format!("\"{}\"", t.label.replace('"', "\"\""))
                } else {
                    csv_field(&t.to_string())
                }
            })));
        }
        out
    }

    /// Column-aligned plain text.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Self::cell_text).collect())
            .collect();
        for row in &rendered {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let mut push_row = |cells: &[String]| {
            let line: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        };
        push_row(&self.header.iter().cloned().collect::<Vec<_>>());
        for row in &rendered {
            push_row(row);
        }
        out
    }
}

fn csv_field(c: &str) -> String {
    if c.contains(',') || c.contains('"') || c.contains('\n') || c.contains('\r') {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn csv_row(cells: impl Iterator<Item = String>) -> String {
    format!("{}\r\n", cells.collect::<Vec<_>>().join(","))
}

/// The relational query graph on a projection: one shared fresh blank
/// subject, one triple `(_:r, col, ?v)` per projected variable.
pub fn gr(projection: &[Term], supply: &mut FreshSupply) -> Result<Graph, SelectError> {
    if projection.is_empty() {
        return Err(SelectError::EmptyProjection);
    }
    let row = supply.fresh_blank();
    Ok(projection
        .iter()
        .map(|v| crate::graph::Triple::new(row.clone(), column_iri(v), v.clone()))
        .collect())
}

/// True iff the triples of `h` partition into row groups keyed by
/// pairwise distinct blank subjects, each group carrying exactly one
/// triple per header predicate and nothing else.
pub fn is_relational_data_graph(h: &Graph, header: &[Term]) -> bool {
    let mut groups: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
    for t in h {
        if t.subject.kind != TermKind::Blank {
            return false;
        }
        if t.object.kind == TermKind::Variable {
            return false;
        }
        groups.entry(&t.subject).or_default().push(&t.predicate);
    }
    let mut expected: Vec<&Term> = header.iter().collect();
    expected.sort();
    groups.values_mut().all(|preds| {
        preds.sort();
        *preds == expected
    })
}

/// Extract the multirelation of a relational data graph: one row per
/// row blank, cell `(i, j)` the object under the `j`-th header
/// predicate.
pub fn rel(h: &Graph, header: &[Term], names: Vec<String>) -> Result<Multirelation, SelectError> {
    if !is_relational_data_graph(h, header) {
        return Err(SelectError::NotRelational);
    }
    let mut by_row: BTreeMap<Term, BTreeMap<Term, Term>> = BTreeMap::new();
    for t in h {
        by_row
            .entry(t.subject.clone())
            .or_default()
            .insert(t.predicate.clone(), t.object.clone());
    }
    let rows = by_row
        .into_values()
        .map(|cells| header.iter().map(|p| cells[p].clone()).collect())
        .collect();
    Ok(Multirelation::new(names, rows))
}

/// Run a SELECT query: encode the projection as a relational query
/// graph, evaluate the associated CONSTRUCT query, extract the table.
pub fn select_eval(
    q: &SelectQuery,
    g: &Graph,
    supply: &mut FreshSupply,
    calculus: Calculus,
) -> Result<Multirelation, SelectError> {
    let template = gr(&q.projection, supply)?;
    let rule = ConstructRule::new(q.pattern.clone(), template, supply)?;
    let h = construct_eval(&rule, g, supply, calculus)?;
    let header = q.header();
    rel(&h, &header, q.projection.iter().map(|v| v.label.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Triple;

    fn t(s: Term, p: Term, o: Term) -> Triple {
        Triple::new(s, p, o)
    }

    fn names_g() -> Graph {
        // _:alice :knows _:bob/_:bobby/_:cathy, with names; bob and bobby
        // are both named "Bob"
        [
            t(Term::blank("alice"), Term::iri("name"), Term::literal("Alice")),
            t(Term::blank("bob"), Term::iri("name"), Term::literal("Bob")),
            t(Term::blank("bobby"), Term::iri("name"), Term::literal("Bob")),
            t(Term::blank("cathy"), Term::iri("name"), Term::literal("Cathy")),
            t(Term::blank("alice"), Term::iri("knows"), Term::blank("bob")),
            t(Term::blank("alice"), Term::iri("knows"), Term::blank("bobby")),
            t(Term::blank("alice"), Term::iri("knows"), Term::blank("cathy")),
        ]
        .into_iter()
        .collect()
    }

    fn name_query() -> SelectQuery {
        let pattern: Graph = [
            t(Term::variable("x"), Term::iri("knows"), Term::variable("y")),
            t(Term::variable("x"), Term::iri("name"), Term::variable("nameX")),
            t(Term::variable("y"), Term::iri("name"), Term::variable("nameY")),
        ]
        .into_iter()
        .collect();
        SelectQuery::new(pattern, vec![Term::variable("nameX"), Term::variable("nameY")]).unwrap()
    }

    #[test]
    fn gr_builds_one_triple_per_variable() {
        let mut s = FreshSupply::new();
        let g = gr(&[Term::variable("nameX"), Term::variable("nameY")], &mut s).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.blanks().len(), 1, "one shared row blank");
        assert!(g.attributes().contains(&Term::variable("nameX")));
        assert!(g.attributes().contains(&column_iri(&Term::variable("nameY"))));
        let single = gr(&[Term::variable("x")], &mut s).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn gr_unique_up_to_iso_regardless_of_supply() {
        let mut s1 = FreshSupply::new();
        let mut s2 = FreshSupply::with_offset(50);
        let vars = [Term::variable("a"), Term::variable("b")];
        let g1 = gr(&vars, &mut s1).unwrap();
        let g2 = gr(&vars, &mut s2).unwrap();
        assert!(crate::iso::find_isomorphism(&g1, &g2, &crate::FixedSet::Iv).is_some());
    }

    #[test]
    fn gr_rejects_empty_projection() {
        let mut s = FreshSupply::new();
        assert_eq!(gr(&[], &mut s).unwrap_err(), SelectError::EmptyProjection);
    }

    #[test]
    fn relational_graph_recognition() {
        let header = [Term::iri("col:nameX"), Term::iri("col:nameY")];
        assert!(is_relational_data_graph(&Graph::new(), &header));
        let good: Graph = [
            t(Term::blank("l1"), Term::iri("col:nameX"), Term::literal("Alice")),
            t(Term::blank("l1"), Term::iri("col:nameY"), Term::literal("Bob")),
        ]
        .into_iter()
        .collect();
        assert!(is_relational_data_graph(&good, &header));
        let missing_cell: Graph =
            [t(Term::blank("l1"), Term::iri("col:nameX"), Term::literal("Alice"))]
                .into_iter()
                .collect();
        assert!(!is_relational_data_graph(&missing_cell, &header));
    }

    #[test]
    fn rel_extracts_rows() {
        let header = [Term::iri("col:x")];
        let empty = rel(&Graph::new(), &header, vec!["x".into()]).unwrap();
        assert!(empty.is_empty());
        let single: Graph = [t(Term::blank("l1"), Term::iri("col:x"), Term::iri("alice"))]
            .into_iter()
            .collect();
        let table = rel(&single, &header, vec!["x".into()]).unwrap();
        assert_eq!(table.rows(), [vec![Term::iri("alice")]]);
        assert_eq!(
            rel(
                &[t(Term::iri("s"), Term::iri("col:x"), Term::iri("o"))].into_iter().collect(),
                &header,
                vec!["x".into()]
            )
            .unwrap_err(),
            SelectError::NotRelational
        );
    }

    #[test]
    fn select_example_has_duplicate_row() {
        let mut s = FreshSupply::new();
        let table = select_eval(&name_query(), &names_g(), &mut s, Calculus::Low).unwrap();
        assert_eq!(table.header(), ["nameX", "nameY"]);
        let expected = vec![
            vec![Term::literal("Alice"), Term::literal("Bob")],
            vec![Term::literal("Alice"), Term::literal("Bob")],
            vec![Term::literal("Alice"), Term::literal("Cathy")],
        ];
        assert_eq!(table.rows(), expected.as_slice());
    }

    #[test]
    fn select_with_no_matches_is_empty() {
        let mut s = FreshSupply::new();
        let table = select_eval(&name_query(), &Graph::new(), &mut s, Calculus::Low).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn projection_validation() {
        let pattern: Graph = [t(Term::variable("x"), Term::iri("p"), Term::variable("y"))]
            .into_iter()
            .collect();
        assert_eq!(
            SelectQuery::new(pattern.clone(), vec![Term::variable("z")]).unwrap_err(),
            SelectError::ProjectionNotInPattern(Term::variable("z"))
        );
        assert_eq!(
            SelectQuery::new(pattern.clone(), vec![Term::variable("x"), Term::variable("x")])
                .unwrap_err(),
            SelectError::DuplicateProjectionVar(Term::variable("x"))
        );
        assert_eq!(
            SelectQuery::new(pattern, vec![]).unwrap_err(),
            SelectError::EmptyProjection
        );
    }

    #[test]
    fn csv_quoting() {
        let table = Multirelation::new(
            vec!["a".into()],
            vec![vec![Term::literal("x,y")], vec![Term::iri("plain")]],
        );
        let csv = table.to_csv();
        assert!(csv.starts_with("a\r\n"));
        // a literal is a quoted field holding its value
        assert!(csv.contains("\"x,y\"\r\n"));
        assert!(csv.contains(":plain"));
    }

    #[test]
    fn round_trip_multirelation_through_graph_encoding() {
        // encode a table as a relational graph and extract it again
        let header = [Term::iri("col:a"), Term::iri("col:b")];
        let rows = vec![
            vec![Term::iri("x"), Term::literal("1")],
            vec![Term::iri("x"), Term::literal("1")],
            vec![Term::iri("y"), Term::blank("c")],
        ];
        let table = Multirelation::new(vec!["a".into(), "b".into()], rows.clone());
        let mut g = Graph::new();
        for (i, row) in rows.iter().enumerate() {
            let subject = Term::blank(format!("row{}", i));
            for (p, cell) in header.iter().zip(row) {
                g.insert(t(subject.clone(), p.clone(), cell.clone()));
            }
        }
        let back = rel(&g, &header, vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(back, table);
    }
}
