//! Context-qualified literals and bridge rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::syntax::{Belief, Binding, Element, Symbol, Term};

/// Index of a context inside its multi-context system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ContextId(pub usize);

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(c:p)` or `not (c:p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextLiteral {
    pub context: ContextId,
    pub belief: Belief,
    pub negated: bool,
}

impl ContextLiteral {
    pub fn pos(context: ContextId, belief: impl Into<Belief>) -> Self {
        ContextLiteral { context, belief: belief.into(), negated: false }
    }

    pub fn neg(context: ContextId, belief: impl Into<Belief>) -> Self {
        ContextLiteral { context, belief: belief.into(), negated: true }
    }
}

/// Built-in syntactic (in)equality test between terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    pub left: Term,
    pub right: Term,
    pub equal: bool,
}

impl Comparison {
    /// `None` while either side is still a variable.
    pub fn evaluate(&self, binding: &Binding) -> Option<bool> {
        let l = self.left.substitute(binding);
        let r = self.right.substitute(binding);
        match (l, r) {
            (Term::Const(a), Term::Const(b)) => Some((a == b) == self.equal),
            _ => None,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Symbol> {
        [&self.left, &self.right].into_iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyLiteral {
    Context(ContextLiteral),
    Compare(Comparison),
}

impl BodyLiteral {
    pub fn as_context(&self) -> Option<&ContextLiteral> {
        match self {
            BodyLiteral::Context(l) => Some(l),
            BodyLiteral::Compare(_) => None,
        }
    }

    pub fn vars(&self) -> Vec<Symbol> {
        match self {
            BodyLiteral::Context(l) => l.belief.vars(),
            BodyLiteral::Compare(c) => c.vars().cloned().collect(),
        }
    }
}

impl From<ContextLiteral> for BodyLiteral {
    fn from(l: ContextLiteral) -> Self {
        BodyLiteral::Context(l)
    }
}

/// Head of a bridge rule: a plain knowledge-base element, or `op(element)`
/// for managed contexts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Head {
    pub op: Option<Symbol>,
    pub element: Element,
}

impl Head {
    pub fn plain(element: impl Into<Element>) -> Self {
        Head { op: None, element: element.into() }
    }

    pub fn managed(op: impl Into<Symbol>, element: impl Into<Element>) -> Self {
        Head { op: Some(op.into()), element: element.into() }
    }

    /// Operation name, with plain heads read as `add`.
    pub fn op_name(&self) -> Symbol {
        self.op.clone().unwrap_or_else(|| Symbol::new(crate::repair::ADD))
    }

    pub fn substitute(&self, binding: &Binding) -> Head {
        Head { op: self.op.clone(), element: self.element.substitute(binding) }
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            Some(op) => write!(f, "{op}[{}]", self.element),
            None => write!(f, "{}", self.element),
        }
    }
}

/// A bridge rule owned by its target context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BridgeRule {
    pub head: Head,
    pub body: Vec<BodyLiteral>,
}

impl BridgeRule {
    pub fn new(head: Head, body: Vec<BodyLiteral>) -> Self {
        BridgeRule { head, body }
    }

    pub fn context_literals(&self) -> impl Iterator<Item = &ContextLiteral> {
        self.body.iter().filter_map(BodyLiteral::as_context)
    }

    pub fn head_vars(&self) -> Vec<Symbol> {
        self.head.element.atom().map(|a| a.vars().cloned().collect()).unwrap_or_default()
    }
}

/// Counts variable occurrences in a head and body.
pub(crate) fn occurrence_counts<'a>(
    head: impl IntoIterator<Item = Symbol>,
    body: impl IntoIterator<Item = &'a BodyLiteral>,
) -> BTreeMap<Symbol, usize> {
    let mut counts = BTreeMap::new();
    for v in head {
        *counts.entry(v).or_insert(0) += 1;
    }
    for lit in body {
        for v in lit.vars() {
            *counts.entry(v).or_insert(0) += 1;
        }
    }
    counts
}

/// Variables occurring in a non-negated context literal.
pub(crate) fn positive_vars<'a>(body: impl IntoIterator<Item = &'a BodyLiteral>) -> BTreeSet<Symbol> {
    body.into_iter()
        .filter_map(BodyLiteral::as_context)
        .filter(|l| !l.negated)
        .flat_map(|l| l.belief.vars())
        .collect()
}

/// Variables of negated literals that occur exactly once in the whole rule.
/// They are read existentially rather than grounded.
pub(crate) fn existential_vars(head: &[Symbol], body: &[BodyLiteral]) -> BTreeSet<Symbol> {
    let counts = occurrence_counts(head.iter().cloned(), body);
    let positive = positive_vars(body);
    body.iter()
        .filter_map(BodyLiteral::as_context)
        .filter(|l| l.negated)
        .flat_map(|l| l.belief.vars())
        .filter(|v| counts.get(v) == Some(&1) && !positive.contains(v))
        .collect()
}
