//! Managed contexts, update actions and repair enumeration.

mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use search::{enumerate_repairs, is_repair, is_weak_repair, RepairKind, RepairOptions, RepairOutcome, RepairResult};

use crate::error::{Error, Result};
use crate::kernel::{ContextId, Element, Kb, Mcs, PredKey, Symbol};

pub const ADD: &str = "add";
pub const REMOVE: &str = "remove";
pub const REPLACE: &str = "replace";

/// `mng_i`: maps a set of `(op, element)` actions and a kb to a new kb.
pub trait ManagementFunction: fmt::Debug + Send + Sync {
    fn apply(&self, actions: &[(Symbol, Element)], kb: &Kb) -> Result<Kb>;

    /// Applying `op` to `element` only inserts `element`.
    fn is_additive(&self, _op: &Symbol, _element: &Element) -> bool {
        false
    }

    /// The built-in description, for serialization.
    fn standard(&self) -> Option<&StandardManagement> {
        None
    }
}

/// Built-in management: `add` inserts, `remove` deletes and `replace`
/// deletes every element sharing the argument's key before inserting it.
/// Keys are declared per predicate as a number of leading arguments; on a
/// keyed predicate `add` behaves like `replace`. Keyed deletions happen
/// first, then insertions, then removals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StandardManagement {
    pub keys: BTreeMap<PredKey, usize>,
}

impl StandardManagement {
    pub fn with_key(mut self, pred: PredKey, length: usize) -> Self {
        self.keys.insert(pred, length);
        self
    }

    fn key_of(&self, e: &Element, replacing: bool) -> Option<(PredKey, Vec<Symbol>)> {
        let a = e.atom()?;
        let length = match self.keys.get(&a.key()) {
            Some(n) => *n,
            None if replacing => 1,
            None => return None,
        };
        let prefix = a.args.iter().take(length).filter_map(|t| t.as_const().cloned()).collect();
        Some((a.key(), prefix))
    }
}

impl ManagementFunction for StandardManagement {
    fn apply(&self, actions: &[(Symbol, Element)], kb: &Kb) -> Result<Kb> {
        let mut displaced = BTreeSet::new();
        let mut inserts = Vec::new();
        let mut removes = Vec::new();
        for (op, e) in actions {
            match op.as_str() {
                ADD | REPLACE => {
                    if let Some(k) = self.key_of(e, op.as_str() == REPLACE) {
                        displaced.insert(k);
                    }
                    inserts.push(e);
                }
                REMOVE => removes.push(e),
                other => return Err(Error::Action(format!("unknown operation `{other}`"))),
            }
        }
        let mut out: Kb = kb.iter().filter(|e| self.key_of(e, true).map_or(true, |k| !displaced.contains(&k))).cloned().collect();
        out.extend(inserts.into_iter().cloned());
        for e in removes {
            out.remove(e);
        }
        Ok(out)
    }

    fn is_additive(&self, op: &Symbol, element: &Element) -> bool {
        op.as_str() == ADD && self.key_of(element, false).is_none()
    }

    fn standard(&self) -> Option<&StandardManagement> {
        Some(self)
    }
}

/// Operations of a managed context together with its management function.
#[derive(Clone, Debug)]
pub struct Management {
    pub ops: BTreeSet<Symbol>,
    pub function: Arc<dyn ManagementFunction>,
}

impl Management {
    pub fn standard(ops: impl IntoIterator<Item = impl Into<Symbol>>, function: StandardManagement) -> Self {
        Management { ops: ops.into_iter().map(Into::into).collect(), function: Arc::new(function) }
    }

    /// `add` and `remove` with the built-in semantics.
    pub fn add_remove() -> Self {
        Management::standard([ADD, REMOVE], StandardManagement::default())
    }

    pub fn apply(&self, actions: &[(Symbol, Element)], kb: &Kb) -> Result<Kb> {
        if let Some((op, _)) = actions.iter().find(|(op, _)| !self.ops.contains(op)) {
            return Err(Error::Action(format!("operation `{op}` is not registered")));
        }
        self.function.apply(actions, kb)
    }

    pub fn is_additive(&self, op: &Symbol, element: &Element) -> bool {
        self.ops.contains(op) && self.function.is_additive(op, element)
    }
}

/// `(context : op(element))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpdateAction {
    pub context: ContextId,
    pub op: Symbol,
    pub element: Element,
}

impl UpdateAction {
    pub fn new(context: ContextId, op: impl Into<Symbol>, element: impl Into<Element>) -> Self {
        UpdateAction { context, op: op.into(), element: element.into() }
    }
}

impl fmt::Display for UpdateAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}({}))", self.context, self.op, self.element)
    }
}

/// Gives every unmanaged context the built-in `add`/`remove` management.
/// Plain heads already read as `add`, so equilibria do not change.
pub fn lift_to_managed(m: &Mcs) -> Mcs {
    let mut out = m.clone();
    for ctx in &mut out.contexts {
        if ctx.management.is_none() {
            ctx.management = Some(Management::add_remove());
        }
    }
    out
}

/// Replaces each kb by its management image under the actions targeting
/// it. Unmanaged contexts accept `add` and `remove`.
pub fn apply_updates<'u>(m: &Mcs, updates: impl IntoIterator<Item = &'u UpdateAction>) -> Result<Mcs> {
    let mut per_context: BTreeMap<ContextId, Vec<(Symbol, Element)>> = BTreeMap::new();
    for u in updates {
        if u.context.0 >= m.len() {
            return Err(Error::Action(format!("update targets unknown context {}", u.context)));
        }
        per_context.entry(u.context).or_default().push((u.op.clone(), u.element.clone()));
    }
    let mut out = m.clone();
    let default = Management::add_remove();
    for (c, actions) in per_context {
        let ctx = out.context_mut(c);
        let mg = ctx.management.as_ref().unwrap_or(&default);
        ctx.kb = mg.apply(&actions, &ctx.kb)?;
    }
    Ok(out)
}
