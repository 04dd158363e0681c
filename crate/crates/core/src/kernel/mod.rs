//! Core domain types: terms, atoms, contexts, bridge rules and systems.

mod mcs;
mod rules;
mod syntax;
mod validate;

pub use mcs::{BeliefSet, BeliefState, Context, Kb, Mcs, Signature};
pub(crate) use mcs::instantiations;
pub use rules::{BodyLiteral, BridgeRule, Comparison, ContextId, ContextLiteral, Head};
pub(crate) use rules::existential_vars;
pub use syntax::{is_bare_constant, Atom, Belief, Binding, Element, PredKey, Symbol, Term};
pub(crate) use syntax::element_constants;
pub use validate::{check_safety, validate_mcs, Location, ValidationReport, Violation};
pub(crate) use validate::unsafe_vars_relaxed;
