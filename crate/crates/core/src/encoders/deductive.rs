//! Deductive databases: extensional facts plus a definite view, as an
//! extensional context `E` and an intensional context `I`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::constraints::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::kernel::{Atom, BridgeRule, Context, ContextId, ContextLiteral, Head, Mcs, PredKey};
use crate::logics::{ClosedWorldLogic, Rule};

pub const EXTENSIONAL: ContextId = ContextId(0);
pub const INTENSIONAL: ContextId = ContextId(1);

#[derive(Clone, Debug, Default)]
pub struct DeductiveDb {
    pub facts: BTreeSet<Atom>,
    pub rules: Vec<Rule>,
}

impl DeductiveDb {
    pub fn new(facts: impl IntoIterator<Item = Atom>, rules: Vec<Rule>) -> Self {
        DeductiveDb { facts: facts.into_iter().collect(), rules }
    }

    /// Intensional predicates: those defined by some rule.
    pub fn intensional(&self) -> BTreeSet<PredKey> {
        self.rules.iter().map(|r| r.head.atom.key()).collect()
    }

    /// Extensional predicates: those with facts or used only in bodies.
    pub fn extensional(&self) -> BTreeSet<PredKey> {
        let i = self.intensional();
        self.facts
            .iter()
            .map(Atom::key)
            .chain(self.rules.iter().flat_map(|r| r.body.iter().map(|l| l.atom.key())))
            .filter(|k| !i.contains(k))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let i = self.intensional();
        if let Some(a) = self.facts.iter().find(|a| i.contains(&a.key())) {
            return Err(Error::Validation(format!("{}/{} has both facts and rules", a.pred, a.arity())));
        }
        for r in &self.rules {
            if r.head.negative || !r.naf.is_empty() || r.body.iter().any(|l| l.negative) {
                return Err(Error::Validation(format!("rule `{r}` is not definite")));
            }
        }
        Ok(())
    }
}

/// `C_E = Ctx(DB)`; `C_I` has an empty kb and one bridge rule per view
/// rule, with body atoms routed to `E` or `I` by their predicate.
pub fn deductive_db_to_mcs(d: &DeductiveDb) -> Result<Mcs> {
    d.validate()?;
    let i = d.intensional();
    let mut view = Context::new("I", Arc::new(ClosedWorldLogic));
    for r in &d.rules {
        let body = r
            .body
            .iter()
            .map(|l| {
                let c = if i.contains(&l.atom.key()) { INTENSIONAL } else { EXTENSIONAL };
                ContextLiteral::pos(c, l.atom.clone()).into()
            })
            .collect();
        view.bridge_rules.push(BridgeRule::new(Head::plain(r.head.atom.clone()), body));
    }
    let mut m = Mcs::new();
    m.add_context(Context::new("E", Arc::new(ClosedWorldLogic)).with_facts(d.facts.iter().cloned()));
    m.add_context(view);
    Ok(m)
}

/// Every constraint literal queries the extensional context.
pub fn extensional_only_check(ics: &[IntegrityConstraint]) -> bool {
    ics.iter().all(|ic| ic.contexts().all(|c| c == EXTENSIONAL))
}
