//! Context logics: the acceptability function of each context.
//!
//! A logic maps a knowledge base to the finite list of belief sets it
//! accepts. The engine also asks for [`Bounds`]: sound under- and
//! over-approximations of every belief set acceptable for any knowledge base
//! between two given ones. Logics that cannot say anything return
//! [`Bounds::Unknown`], which only costs search time.

mod builtin;
pub mod datalog;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use builtin::{closure_acc, relational_db_acc, ChoiceLogic, ClosedWorldLogic, ClosureLogic, DatalogLogic, FlagLogic, FlagVariant};
pub use datalog::{datalog_minimal_model, Rule, SignedAtom};

use crate::error::LogicError;
use crate::kernel::{Atom, Belief, BeliefSet, Kb, Symbol};

pub trait ContextLogic: fmt::Debug + Send + Sync {
    /// Short name used in diagnostics and in the text format.
    fn kind(&self) -> &str;

    /// Acceptable belief sets for `kb`, in a deterministic order.
    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError>;

    /// Bounds on the belief sets acceptable for any kb with
    /// `lower ⊆ kb ⊆ upper`.
    fn bounds(&self, _lower: &Kb, _upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Unknown)
    }

    /// `acc` returns at most one belief set and is monotone in the kb.
    fn is_monotone_singleton(&self) -> bool {
        false
    }

    /// Whether beliefs can depend on kb elements other than themselves
    /// (rules, axioms). Used for dependency analysis.
    fn derives(&self) -> bool {
        true
    }

    /// Constants the logic itself introduces (rule or axiom constants).
    fn constants(&self) -> BTreeSet<Symbol> {
        BTreeSet::new()
    }

    /// Text-format description, when the logic is one of the built-ins.
    fn source(&self) -> Option<LogicSource> {
        None
    }
}

#[derive(Clone, Debug)]
pub enum Bounds {
    Unknown,
    Known { lower: BeliefSet, upper: BeliefSet },
}

impl Bounds {
    /// `pattern` (possibly with existential variables) holds in every
    /// acceptable belief set.
    pub fn certainly(&self, pattern: &Belief, domain: &BTreeSet<Symbol>) -> bool {
        match self {
            Bounds::Unknown => false,
            Bounds::Known { lower, upper } => match pattern {
                // The implicit negative part of a closed set shrinks as the set grows.
                Belief::Negated(_) if upper.is_closed() => upper.matches_any(pattern, domain),
                _ => lower.matches_any(pattern, domain),
            },
        }
    }

    /// `pattern` holds in some acceptable belief set.
    pub fn possibly(&self, pattern: &Belief, domain: &BTreeSet<Symbol>) -> bool {
        match self {
            Bounds::Unknown => true,
            Bounds::Known { lower, upper } => match pattern {
                Belief::Negated(_) if lower.is_closed() => lower.matches_any(pattern, domain),
                _ => upper.matches_any(pattern, domain),
            },
        }
    }
}

/// Text-level description of a built-in logic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogicSource {
    ClosedWorld,
    Datalog(Vec<Rule>),
    Closure(Vec<Rule>),
    Choice(BTreeSet<Atom>),
    Flag(FlagVariant),
}

impl LogicSource {
    pub fn kind(&self) -> &'static str {
        match self {
            LogicSource::ClosedWorld => "db",
            LogicSource::Datalog(_) => "datalog",
            LogicSource::Closure(_) => "closure",
            LogicSource::Choice(_) => "choice",
            LogicSource::Flag(FlagVariant::Weak) => "flag_weak",
            LogicSource::Flag(FlagVariant::Strong) => "flag_strong",
        }
    }

    pub fn build(&self) -> Result<Arc<dyn ContextLogic>, LogicError> {
        Ok(match self {
            LogicSource::ClosedWorld => Arc::new(ClosedWorldLogic),
            LogicSource::Datalog(rules) => Arc::new(DatalogLogic::new(rules.clone())?),
            LogicSource::Closure(axioms) => Arc::new(ClosureLogic::new(axioms.clone())?),
            LogicSource::Choice(optional) => Arc::new(ChoiceLogic::new(optional.clone())),
            LogicSource::Flag(v) => Arc::new(FlagLogic::new(*v)),
        })
    }
}

/// `flag_logic(variant)`: the two-valued logic over `℘({*})` used by the
/// constraint encodings.
pub fn flag_logic(variant: FlagVariant) -> Arc<dyn ContextLogic> {
    Arc::new(FlagLogic::new(variant))
}

/// The `*` token the flag logics react to.
pub fn flag_token() -> Symbol {
    Symbol::new("*")
}
