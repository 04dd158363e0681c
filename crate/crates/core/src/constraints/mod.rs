//! Integrity constraints: satisfaction by a belief state, weak and strong
//! satisfaction by a system, and the reductions to consistency.

mod encode;
mod fastpath;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use encode::{encode_strong, encode_weak, FLAG_CONTEXT};
pub use fastpath::db_fastpath_check;

use crate::equilibria::{enumerate_with, EnumerationOptions};
use crate::error::Result;
use crate::grounding::{default_import_domains, domain_pool, ground_constraint, ImportDomains};
use crate::kernel::{Belief, BeliefState, Binding, BodyLiteral, ContextId, ContextLiteral, Mcs};

/// A denial `← body`. Satisfied when no instantiation makes every positive
/// literal true and every negated literal false.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegrityConstraint {
    pub body: Vec<BodyLiteral>,
}

impl IntegrityConstraint {
    pub fn new(body: Vec<BodyLiteral>) -> Self {
        IntegrityConstraint { body }
    }

    pub fn positive(&self) -> impl Iterator<Item = &ContextLiteral> {
        self.body.iter().filter_map(BodyLiteral::as_context).filter(|l| !l.negated)
    }

    pub fn negative(&self) -> impl Iterator<Item = &ContextLiteral> {
        self.body.iter().filter_map(BodyLiteral::as_context).filter(|l| l.negated)
    }

    pub fn contexts(&self) -> impl Iterator<Item = ContextId> + '_ {
        self.body.iter().filter_map(BodyLiteral::as_context).map(|l| l.context)
    }
}

impl fmt::Display for IntegrityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("←")?;
        for (k, lit) in self.body.iter().enumerate() {
            f.write_str(if k == 0 { " " } else { ", " })?;
            match lit {
                BodyLiteral::Context(l) => {
                    if l.negated {
                        f.write_str("not ")?;
                    }
                    write!(f, "({}:{})", l.context, l.belief)?;
                }
                BodyLiteral::Compare(c) => write!(f, "{} {} {}", c.left, if c.equal { "=" } else { "!=" }, c.right)?,
            }
        }
        Ok(())
    }
}

fn holds(s: &BeliefState, domains: &ImportDomains, c: ContextId, b: &Belief) -> bool {
    s.get(c).matches_any(b, domain_pool(domains, c))
}

/// The first instantiation of `ic` violated by `s`, if any.
pub fn ic_violation(s: &BeliefState, ic: &IntegrityConstraint, domains: &ImportDomains) -> Result<Option<Binding>> {
    for g in ground_constraint(ic, domains)? {
        if g.positive.iter().all(|(c, b)| holds(s, domains, *c, b)) && !g.negative.iter().any(|(c, b)| holds(s, domains, *c, b)) {
            return Ok(Some(g.binding));
        }
    }
    Ok(None)
}

pub fn ic_satisfied(s: &BeliefState, ic: &IntegrityConstraint, domains: &ImportDomains) -> Result<bool> {
    Ok(ic_violation(s, ic, domains)?.is_none())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Weak,
    Strong,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        })
    }
}

/// A violated constraint: its position in the input and the instantiation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcViolation {
    pub constraint: usize,
    pub binding: Binding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatisfactionVerdict {
    pub holds: bool,
    /// Weak: the satisfying equilibrium when `holds`. Strong: the violating
    /// equilibrium on failure, or the first equilibrium when `holds`. Absent
    /// when the system has no equilibrium.
    pub witness: Option<BeliefState>,
    pub violation: Option<IcViolation>,
    /// Number of equilibria inspected.
    pub equilibria: usize,
}

/// First violated constraint of `ics` in `s`.
pub fn first_violation(s: &BeliefState, ics: &[IntegrityConstraint], domains: &ImportDomains) -> Result<Option<IcViolation>> {
    for (k, ic) in ics.iter().enumerate() {
        if let Some(binding) = ic_violation(s, ic, domains)? {
            return Ok(Some(IcViolation { constraint: k, binding }));
        }
    }
    Ok(None)
}

fn check_all(m: &Mcs, ics: &[IntegrityConstraint]) -> Result<(Vec<BeliefState>, Vec<Option<IcViolation>>)> {
    for ic in ics {
        crate::grounding::check_constraint_safety(ic)?;
    }
    let equilibria = enumerate_with(m, EnumerationOptions::unbounded())?;
    let domains = default_import_domains(m);
    let violations = equilibria.par_iter().map(|s| first_violation(s, ics, &domains)).collect::<Result<Vec<_>>>()?;
    Ok((equilibria, violations))
}

/// Some equilibrium of `m` satisfies every constraint.
pub fn weak_satisfies(m: &Mcs, ics: &[IntegrityConstraint]) -> Result<SatisfactionVerdict> {
    let (equilibria, violations) = check_all(m, ics)?;
    let n = equilibria.len();
    Ok(match violations.iter().position(Option::is_none) {
        Some(k) => SatisfactionVerdict { holds: true, witness: Some(equilibria[k].clone()), violation: None, equilibria: n },
        None => SatisfactionVerdict {
            holds: false,
            witness: equilibria.first().cloned(),
            violation: violations.into_iter().next().flatten(),
            equilibria: n,
        },
    })
}

/// `m` has an equilibrium and every equilibrium satisfies every constraint.
pub fn strong_satisfies(m: &Mcs, ics: &[IntegrityConstraint]) -> Result<SatisfactionVerdict> {
    let (equilibria, violations) = check_all(m, ics)?;
    let n = equilibria.len();
    if n == 0 {
        return Ok(SatisfactionVerdict { holds: false, witness: None, violation: None, equilibria: 0 });
    }
    Ok(match violations.iter().position(Option::is_some) {
        Some(k) => SatisfactionVerdict {
            holds: false,
            witness: Some(equilibria[k].clone()),
            violation: violations[k].clone(),
            equilibria: n,
        },
        None => SatisfactionVerdict { holds: true, witness: equilibria.into_iter().next(), violation: None, equilibria: n },
    })
}

pub fn satisfies(m: &Mcs, ics: &[IntegrityConstraint], mode: Mode) -> Result<SatisfactionVerdict> {
    match mode {
        Mode::Weak => weak_satisfies(m, ics),
        Mode::Strong => strong_satisfies(m, ics),
    }
}
