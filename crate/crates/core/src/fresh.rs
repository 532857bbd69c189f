use crate::term::{Term, TermKind};

/// Label prefix reserved for supply-generated attributes. Parsers reject
/// user blanks carrying it, so freshness never requires scanning graphs.
pub const RESERVED_PREFIX: &str = "fresh";

/// Deterministic source of fresh attribute labels for one evaluation
/// session. The only mutable object in the crate; everything else is an
/// immutable value.
#[derive(Debug, Clone)]
pub struct FreshSupply {
    next: u64,
}

impl FreshSupply {
    pub fn new() -> Self {
        FreshSupply { next: 1 }
    }

    /// Start the counter after `offset`, so separate sessions can pin
    /// distinct label ranges.
    pub fn with_offset(offset: u64) -> Self {
        FreshSupply { next: offset + 1 }
    }

    pub fn fresh_label(&mut self) -> String {
        let label = format!("{}{}", RESERVED_PREFIX, self.next);
        self.next += 1;
        label
    }

    pub fn fresh_blank(&mut self) -> Term {
        Term::blank(self.fresh_label())
    }

    /// Fresh attribute of the same kind as `t`. Used when renaming
    /// non-fixed attributes that may be blanks or variables.
    pub fn fresh_like(&mut self, t: &Term) -> Term {
        debug_assert!(!t.is_resource(), "resources are never renamed");
        match t.kind {
            TermKind::Variable => Term::variable(self.fresh_label()),
            _ => Term::blank(self.fresh_label()),
        }
    }
}

impl Default for FreshSupply {
    fn default() -> Self {
        FreshSupply::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_distinct_and_reserved() {
        let mut s = FreshSupply::new();
        let a = s.fresh_blank();
        let b = s.fresh_blank();
        assert_ne!(a, b);
        assert!(a.label.starts_with(RESERVED_PREFIX));
    }

    #[test]
    fn offset_shifts_counter() {
        let mut s = FreshSupply::with_offset(41);
        assert_eq!(s.fresh_label(), "fresh42");
    }

    #[test]
    fn fresh_like_preserves_kind() {
        let mut s = FreshSupply::new();
        assert!(s.fresh_like(&Term::variable("x")).is_variable());
        assert!(s.fresh_like(&Term::blank("b")).is_blank());
    }
}
