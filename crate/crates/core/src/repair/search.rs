//! Breadth-first search for subset-minimal repairs.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use log::debug;
use rayon::prelude::*;

use super::{apply_updates, UpdateAction, ADD, REMOVE};
use crate::constraints::{encode_weak, strong_satisfies, IntegrityConstraint, Mode};
use crate::equilibria::is_consistent;
use crate::error::Result;
use crate::grounding::default_import_domains;
use crate::kernel::{instantiations, Atom, Belief, BodyLiteral, ContextId, Element, Mcs, PredKey, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RepairKind {
    WeakRepair,
    Repair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairResult {
    pub actions: Vec<UpdateAction>,
    pub kind: RepairKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepairOutcome {
    /// The system is already consistent with the constraints.
    AlreadyConsistent,
    /// Minimal repairs up to the size bound, smallest first.
    Repairs(Vec<RepairResult>),
    /// No update action is available under the allowed operations.
    NoCandidates,
    /// Every action set up to `max_size` was tried without success.
    Exhausted { max_size: usize, candidates: usize },
}

#[derive(Clone, Debug)]
pub struct RepairOptions {
    pub max_size: usize,
    /// Operations usable per context. `None` allows every registered
    /// operation; contexts missing from the map get none.
    pub allowed_ops: Option<BTreeMap<ContextId, BTreeSet<Symbol>>>,
    pub mode: Mode,
}

impl Default for RepairOptions {
    fn default() -> Self {
        RepairOptions { max_size: 2, allowed_ops: None, mode: Mode::Weak }
    }
}

/// Consistency of `m` with respect to `ics` in the given mode.
pub fn consistent_wrt(m: &Mcs, ics: &[IntegrityConstraint], mode: Mode) -> Result<bool> {
    match mode {
        Mode::Weak => Ok(is_consistent(&encode_weak(m, ics))?.is_some()),
        Mode::Strong => Ok(strong_satisfies(m, ics)?.holds),
    }
}

pub fn is_weak_repair(m: &Mcs, ics: &[IntegrityConstraint], updates: &[UpdateAction], mode: Mode) -> Result<bool> {
    consistent_wrt(&apply_updates(m, updates)?, ics, mode)
}

/// A weak repair no proper subset of which is one.
pub fn is_repair(m: &Mcs, ics: &[IntegrityConstraint], updates: &[UpdateAction], mode: Mode) -> Result<bool> {
    let distinct: Vec<&UpdateAction> = updates.iter().collect::<BTreeSet<_>>().into_iter().collect();
    if !is_weak_repair(m, ics, updates, mode)? {
        return Ok(false);
    }
    for size in 0..distinct.len() {
        for subset in distinct.iter().copied().combinations(size) {
            let subset: Vec<UpdateAction> = subset.into_iter().cloned().collect();
            if is_weak_repair(m, ics, &subset, mode)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn literal_bodies<'a>(m: &'a Mcs, ics: &'a [IntegrityConstraint]) -> impl Iterator<Item = &'a BodyLiteral> {
    m.contexts.iter().flat_map(|c| c.bridge_rules.iter().flat_map(|r| r.body.iter())).chain(ics.iter().flat_map(|ic| ic.body.iter()))
}

/// The finite action universe: `add` (and other registered insert-like
/// operations) over ground atoms of each context's predicates and the
/// active domain, and `remove` over present kb elements.
pub fn candidate_actions(m: &Mcs, ics: &[IntegrityConstraint], allowed: Option<&BTreeMap<ContextId, BTreeSet<Symbol>>>) -> Vec<UpdateAction> {
    let mut domain = default_import_domains(m).all_constants();
    for lit in literal_bodies(m, ics) {
        if let BodyLiteral::Context(l) = lit {
            if let Some(a) = l.belief.atom() {
                domain.extend(a.constants().cloned());
            }
        }
    }

    let mut preds: Vec<BTreeSet<PredKey>> = vec![BTreeSet::new(); m.len()];
    let mut tokens: Vec<BTreeSet<Symbol>> = vec![BTreeSet::new(); m.len()];
    let mut note = |c: ContextId, e: &Element| {
        if c.0 >= m.len() {
            return;
        }
        match e {
            Element::Relational(a) => {
                preds[c.0].insert(a.key());
            }
            Element::Ordinary(t) => {
                tokens[c.0].insert(t.clone());
            }
        }
    };
    for (i, ctx) in m.contexts.iter().enumerate() {
        for e in &ctx.kb {
            note(ContextId(i), e);
        }
        for r in &ctx.bridge_rules {
            note(ContextId(i), &r.head.element);
        }
    }
    for lit in literal_bodies(m, ics) {
        if let BodyLiteral::Context(l) = lit {
            let e = match &l.belief {
                Belief::Relational(a) | Belief::Negated(a) => Element::Relational(a.clone()),
                Belief::Ordinary(t) => Element::Ordinary(t.clone()),
            };
            note(l.context, &e);
        }
    }
    for (i, ctx) in m.contexts.iter().enumerate() {
        if let Some(sig) = &ctx.signature {
            preds[i].extend(sig.kb_predicates.iter().cloned());
        }
    }

    let mut out = Vec::new();
    for (i, ctx) in m.contexts.iter().enumerate() {
        let id = ContextId(i);
        let registered: BTreeSet<Symbol> = match &ctx.management {
            Some(mg) => mg.ops.clone(),
            None => [Symbol::new(ADD), Symbol::new(REMOVE)].into(),
        };
        let ops: Vec<Symbol> = match allowed {
            None => registered.into_iter().collect(),
            Some(map) => map.get(&id).map(|a| registered.intersection(a).cloned().collect()).unwrap_or_default(),
        };
        let mut elements: BTreeSet<Element> = tokens[i].iter().cloned().map(Element::Ordinary).collect();
        for (pred, arity) in &preds[i] {
            let vars: Vec<Symbol> = (0..*arity).map(|k| Symbol::new(format!("V{k}"))).collect();
            for b in instantiations(&vars, &domain) {
                let args = vars.iter().map(|v| Term::Const(b[v].clone())).collect();
                elements.insert(Element::Relational(Atom::new(pred.clone(), args)));
            }
        }
        for op in ops {
            if op.as_str() == REMOVE {
                out.extend(ctx.kb.iter().map(|e| UpdateAction::new(id, op.clone(), e.clone())));
            } else {
                out.extend(elements.iter().filter(|e| !ctx.kb.contains(e)).map(|e| UpdateAction::new(id, op.clone(), e.clone())));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

const BATCH: usize = 4096;

/// All subset-minimal repairs with at most `max_size` actions.
pub fn enumerate_repairs(m: &Mcs, ics: &[IntegrityConstraint], options: &RepairOptions) -> Result<RepairOutcome> {
    if consistent_wrt(m, ics, options.mode)? {
        return Ok(RepairOutcome::AlreadyConsistent);
    }
    let universe = candidate_actions(m, ics, options.allowed_ops.as_ref());
    if universe.is_empty() {
        return Ok(RepairOutcome::NoCandidates);
    }
    debug!("repair search over {} candidate actions", universe.len());

    let mut found: Vec<Vec<usize>> = Vec::new();
    for size in 1..=options.max_size.min(universe.len()) {
        let mut level = Vec::new();
        let combos = (0..universe.len()).combinations(size).filter(|c| !found.iter().any(|f| f.iter().all(|x| c.contains(x))));
        for chunk in &combos.chunks(BATCH) {
            let chunk: Vec<Vec<usize>> = chunk.collect();
            let hits = chunk
                .par_iter()
                .map(|c| {
                    let actions: Vec<UpdateAction> = c.iter().map(|k| universe[*k].clone()).collect();
                    is_weak_repair(m, ics, &actions, options.mode)
                })
                .collect::<Result<Vec<bool>>>()?;
            level.extend(chunk.into_iter().zip(hits).filter(|(_, hit)| *hit).map(|(c, _)| c));
        }
        debug!("size {size}: {} repairs", level.len());
        found.extend(level);
    }

    if found.is_empty() {
        return Ok(RepairOutcome::Exhausted { max_size: options.max_size, candidates: universe.len() });
    }
    Ok(RepairOutcome::Repairs(
        found
            .into_iter()
            .map(|c| RepairResult { actions: c.into_iter().map(|k| universe[k].clone()).collect(), kind: RepairKind::Repair })
            .collect(),
    ))
}
