//! Structural well-formedness of a multi-context system.

use std::collections::BTreeSet;
use std::fmt;

use super::mcs::Mcs;
use super::rules::{existential_vars, positive_vars, BodyLiteral, BridgeRule, ContextId};
use super::syntax::{element_constants, Atom, PredKey, Symbol};
use crate::repair::ADD;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Location {
    Kb(ContextId),
    BridgeRule { context: ContextId, rule: usize },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Kb(c) => write!(f, "knowledge base of context {c}"),
            Location::BridgeRule { context, rule } => write!(f, "bridge rule {rule} of context {context}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `predicate/arity` is used but the declared signature has no such
    /// predicate; `declared` lists the arities it does declare.
    ArityMismatch { location: Location, predicate: Symbol, arity: usize, declared: Vec<usize> },
    DanglingContext { location: Location, index: usize },
    SignatureOverlap { context: ContextId, symbol: Symbol },
    UnsafeRule { context: ContextId, rule: usize, variables: Vec<Symbol> },
    UnboundHeadVariable { context: ContextId, rule: usize, variables: Vec<Symbol> },
    NonGroundElement { context: ContextId, element: String },
    UnknownOperation { context: ContextId, rule: usize, op: Symbol },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArityMismatch { location, predicate, arity, declared } => {
                write!(f, "{location}: {predicate}/{arity} not declared (declared arities: {declared:?})")
            }
            Violation::DanglingContext { location, index } => {
                write!(f, "{location}: reference to missing context {index}")
            }
            Violation::SignatureOverlap { context, symbol } => {
                write!(f, "context {context}: symbol {symbol} used both as a constant and as a predicate or variable")
            }
            Violation::UnsafeRule { context, rule, variables } => {
                write!(f, "bridge rule {rule} of context {context} is unsafe: {variables:?} only under negation")
            }
            Violation::UnboundHeadVariable { context, rule, variables } => {
                write!(f, "bridge rule {rule} of context {context}: head variables {variables:?} not bound in the body")
            }
            Violation::NonGroundElement { context, element } => {
                write!(f, "context {context}: knowledge-base element {element} is not ground")
            }
            Violation::UnknownOperation { context, rule, op } => {
                write!(f, "bridge rule {rule} of context {context}: operation {op} is not managed by the context")
            }
        }
    }
}

/// Outcome of [`validate_mcs`]; valid iff no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every variable of every negated literal also occurs in a positive literal.
pub fn check_safety(rule: &BridgeRule) -> bool {
    unsafe_vars(&rule.body, &[]).is_empty()
}

/// Negated-only variables, excluding those in `allowed`.
fn unsafe_vars(body: &[BodyLiteral], allowed: &[Symbol]) -> Vec<Symbol> {
    let positive = positive_vars(body);
    let mut out: BTreeSet<Symbol> = BTreeSet::new();
    for lit in body {
        match lit {
            BodyLiteral::Context(l) if l.negated => {
                out.extend(l.belief.vars().into_iter().filter(|v| !positive.contains(v)));
            }
            BodyLiteral::Compare(c) => out.extend(c.vars().filter(|v| !positive.contains(*v)).cloned()),
            _ => {}
        }
    }
    out.into_iter().filter(|v| !allowed.contains(v)).collect()
}

/// Unsafe variables of a rule or constraint body, tolerating singleton
/// variables that occur once, under negation (read existentially).
pub(crate) fn unsafe_vars_relaxed(head_vars: &[Symbol], body: &[BodyLiteral]) -> Vec<Symbol> {
    let existential: Vec<Symbol> = existential_vars(head_vars, body).into_iter().collect();
    unsafe_vars(body, &existential)
}

pub fn validate_mcs(m: &Mcs) -> ValidationReport {
    let mut violations = Vec::new();
    let n = m.len();

    // Vocabulary used per context: constants, predicates, variables.
    let mut constants: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); n];
    let mut predicates: Vec<BTreeSet<PredKey>> = vec![BTreeSet::new(); n];
    let mut variables: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); n];

    for (i, ctx) in m.contexts.iter().enumerate() {
        let id = ContextId(i);
        for e in &ctx.kb {
            if !e.is_ground() {
                violations.push(Violation::NonGroundElement { context: id, element: e.to_string() });
            }
            element_constants(e, &mut constants[i]);
            if let Some(a) = e.atom() {
                predicates[i].insert(a.key());
                check_declared(m, id, a, true, Location::Kb(id), &mut violations);
            }
        }

        for (r, rule) in ctx.bridge_rules.iter().enumerate() {
            let location = Location::BridgeRule { context: id, rule: r };
            if let Some(a) = rule.head.element.atom() {
                predicates[i].insert(a.key());
                constants[i].extend(a.constants().cloned());
                variables[i].extend(a.vars().cloned());
                check_declared(m, id, a, true, location.clone(), &mut violations);
            }
            if let Some(op) = &rule.head.op {
                let known = match &ctx.management {
                    Some(mg) => mg.ops.contains(op),
                    None => op.as_str() == ADD,
                };
                if !known {
                    violations.push(Violation::UnknownOperation { context: id, rule: r, op: op.clone() });
                }
            }
            for lit in rule.context_literals() {
                let j = lit.context.0;
                if j >= n {
                    violations.push(Violation::DanglingContext { location: location.clone(), index: j });
                    continue;
                }
                if let Some(a) = lit.belief.atom() {
                    predicates[j].insert(a.key());
                    constants[j].extend(a.constants().cloned());
                    variables[j].extend(a.vars().cloned());
                    check_declared(m, lit.context, a, false, location.clone(), &mut violations);
                }
            }
            let head_vars = rule.head_vars();
            let bad = unsafe_vars_relaxed(&head_vars, &rule.body);
            if !bad.is_empty() {
                violations.push(Violation::UnsafeRule { context: id, rule: r, variables: bad });
            }
            let bound = positive_vars(&rule.body);
            let unbound: Vec<Symbol> = head_vars
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .filter(|v| !bound.contains(v))
                .collect();
            if !unbound.is_empty() {
                violations.push(Violation::UnboundHeadVariable { context: id, rule: r, variables: unbound });
            }
        }
    }

    for (i, ctx) in m.contexts.iter().enumerate() {
        let id = ContextId(i);
        let (universe, preds): (BTreeSet<Symbol>, BTreeSet<Symbol>) = match &ctx.signature {
            Some(sig) => (
                sig.universe.clone(),
                sig.kb_predicates.iter().chain(&sig.belief_predicates).map(|(p, _)| p.clone()).collect(),
            ),
            None => (constants[i].clone(), predicates[i].iter().map(|(p, _)| p.clone()).collect()),
        };
        let mut overlap: BTreeSet<Symbol> = universe.intersection(&preds).cloned().collect();
        overlap.extend(variables[i].iter().filter(|v| universe.contains(*v) || preds.contains(*v)).cloned());
        for symbol in overlap {
            violations.push(Violation::SignatureOverlap { context: id, symbol });
        }
        for (j, dom) in &ctx.import_domains {
            if j.0 >= n {
                violations.push(Violation::DanglingContext { location: Location::Kb(id), index: j.0 });
            } else if let Some(sig) = &m.contexts[j.0].signature {
                if !sig.universe.is_empty() {
                    for c in dom.difference(&sig.universe) {
                        violations.push(Violation::SignatureOverlap { context: *j, symbol: c.clone() });
                    }
                }
            }
        }
    }

    violations.sort();
    violations.dedup();
    ValidationReport { violations }
}

fn check_declared(m: &Mcs, ctx: ContextId, atom: &Atom, kb_side: bool, location: Location, out: &mut Vec<Violation>) {
    let Some(sig) = m.contexts.get(ctx.0).and_then(|c| c.signature.as_ref()) else {
        return;
    };
    let key = atom.key();
    let ok = sig.kb_predicates.contains(&key) || (!kb_side && sig.belief_predicates.contains(&key));
    if !ok {
        let declared = sig
            .kb_predicates
            .iter()
            .chain(&sig.belief_predicates)
            .filter(|(p, _)| *p == atom.pred)
            .map(|(_, a)| *a)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        out.push(Violation::ArityMismatch { location, predicate: atom.pred.clone(), arity: atom.arity(), declared });
    }
}
