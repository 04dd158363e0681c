//! Exhaustive reference implementations used for cross-checking.
//!
//! Nothing here prunes: candidate belief sets come from every subset of
//! every context's ground heads, and every tuple of candidates is checked
//! against the equilibrium condition.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::constraints::{first_violation, IntegrityConstraint};
use crate::equilibria::{effective_kb, GroundMcs};
use crate::error::{Error, Result};
use crate::grounding::default_import_domains;
use crate::kernel::{BeliefSet, BeliefState, ContextId, Head, Mcs};

/// Refuse brute force beyond this many ground heads in one context.
pub const MAX_ORACLE_HEADS: usize = 14;

/// Every equilibrium, by checking all belief-state tuples built from the
/// acceptable belief sets of every possible head selection. Sorted.
pub fn brute_force_equilibria(m: &Mcs) -> Result<Vec<BeliefState>> {
    let g = GroundMcs::new(m);
    let mut candidates: Vec<Vec<BeliefSet>> = Vec::with_capacity(m.len());
    for (i, ctx) in m.contexts.iter().enumerate() {
        let heads: Vec<Head> = g.rules[i].iter().map(|r| r.head.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        if heads.len() > MAX_ORACLE_HEADS {
            return Err(Error::LimitRequired { free_heads: heads.len(), threshold: MAX_ORACLE_HEADS });
        }
        let mut sets = BTreeSet::new();
        for subset in heads.iter().powerset() {
            let kb = effective_kb(ctx, subset.into_iter())?;
            sets.extend(ctx.logic.acc(&kb).map_err(|source| Error::Logic { context: ContextId(i), source })?);
        }
        candidates.push(sets.into_iter().collect());
    }
    let mut out = BTreeSet::new();
    for tuple in candidates.iter().map(|c| c.iter()).multi_cartesian_product() {
        let s = BeliefState(tuple.into_iter().cloned().collect());
        if g.is_equilibrium(&s)? {
            out.insert(s);
        }
    }
    if m.is_empty() {
        out.insert(BeliefState(Vec::new()));
    }
    Ok(out.into_iter().collect())
}

/// Weak and strong satisfaction from an explicit list of equilibria.
pub fn satisfaction_from(m: &Mcs, equilibria: &[BeliefState], ics: &[IntegrityConstraint]) -> Result<(bool, bool)> {
    let domains = default_import_domains(m);
    let mut ok = Vec::with_capacity(equilibria.len());
    for s in equilibria {
        ok.push(first_violation(s, ics, &domains)?.is_none());
    }
    Ok((ok.iter().any(|b| *b), !ok.is_empty() && ok.iter().all(|b| *b)))
}
