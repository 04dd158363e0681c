//! Distributed databases: one closed-world context per site, with
//! constraints requiring shared relations to agree across sites.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::constraints::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::kernel::{Atom, BodyLiteral, Context, ContextId, ContextLiteral, Mcs, Symbol, Term};
use crate::logics::ClosedWorldLogic;

#[derive(Clone, Debug, Default)]
pub struct Site {
    pub name: String,
    pub facts: BTreeSet<Atom>,
    /// Relations the site holds even when their table is empty.
    pub relations: BTreeSet<Symbol>,
}

impl Site {
    pub fn new(name: impl Into<String>, facts: impl IntoIterator<Item = Atom>) -> Self {
        Site { name: name.into(), facts: facts.into_iter().collect(), relations: BTreeSet::new() }
    }
}

/// Builds one context per site and, for every relation held at two or more
/// sites, the constraints `← (i:p(X̄)), not (j:p(X̄))` for all ordered pairs.
/// `schema` fixes arities; relations missing from it take the arity of
/// their facts.
pub fn distributed_db(sites: &[Site], schema: &BTreeMap<Symbol, usize>) -> Result<(Mcs, Vec<IntegrityConstraint>)> {
    let mut arity: BTreeMap<Symbol, usize> = schema.clone();
    let mut holders: BTreeMap<Symbol, BTreeSet<usize>> = BTreeMap::new();
    for (k, site) in sites.iter().enumerate() {
        for a in &site.facts {
            match arity.get(&a.pred) {
                Some(n) if *n != a.arity() => {
                    return Err(Error::Schema(format!(
                        "{} at site {} has arity {} but {} is expected",
                        a.pred,
                        site.name,
                        a.arity(),
                        n
                    )))
                }
                Some(_) => {}
                None => {
                    arity.insert(a.pred.clone(), a.arity());
                }
            }
            holders.entry(a.pred.clone()).or_default().insert(k);
        }
        for p in &site.relations {
            if !arity.contains_key(p) {
                return Err(Error::Schema(format!("relation {p} at site {} has no known arity", site.name)));
            }
            holders.entry(p.clone()).or_default().insert(k);
        }
    }

    let mut m = Mcs::new();
    for site in sites {
        m.add_context(Context::new(site.name.clone(), Arc::new(ClosedWorldLogic)).with_facts(site.facts.iter().cloned()));
    }
    let mut ics = Vec::new();
    for (p, at) in &holders {
        let args: Vec<Term> = (1..=arity[p]).map(|k| Term::var(format!("X{k}"))).collect();
        let atom = Atom::new(p.clone(), args);
        for &i in at {
            for &j in at {
                if i != j {
                    ics.push(IntegrityConstraint::new(vec![
                        ContextLiteral::pos(ContextId(i), atom.clone()).into(),
                        ContextLiteral::neg(ContextId(j), atom.clone()).into(),
                    ]));
                }
            }
        }
    }
    Ok((m, ics))
}

/// `← (home:p(Id)), (d:p(Id))` for every district `d` other than `home`:
/// nobody may be registered at two districts.
pub fn exclusion_constraints(home: ContextId, pred: &str, districts: &[ContextId]) -> Vec<IntegrityConstraint> {
    let atom = Atom::new(pred, vec![Term::var("Id")]);
    districts
        .iter()
        .filter(|d| **d != home)
        .map(|d| {
            IntegrityConstraint::new(vec![
                BodyLiteral::from(ContextLiteral::pos(home, atom.clone())),
                ContextLiteral::pos(*d, atom.clone()).into(),
            ])
        })
        .collect()
}
