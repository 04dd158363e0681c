//! Contexts, multi-context systems, belief sets and belief states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::rules::{BridgeRule, ContextId};
use super::syntax::{Atom, Belief, Binding, Element, PredKey, Symbol};
use crate::logics::ContextLogic;
use crate::repair::Management;

/// Declared vocabulary of a context. Optional: undeclared contexts are
/// checked against the vocabulary they actually use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub kb_predicates: BTreeSet<PredKey>,
    pub belief_predicates: BTreeSet<PredKey>,
    pub universe: BTreeSet<Symbol>,
}

pub type Kb = BTreeSet<Element>;

#[derive(Clone, Debug)]
pub struct Context {
    pub name: String,
    pub logic: Arc<dyn ContextLogic>,
    pub kb: Kb,
    pub bridge_rules: Vec<BridgeRule>,
    /// Explicit `D_{self,j}` overrides; absent pairs use the defaults.
    pub import_domains: BTreeMap<ContextId, BTreeSet<Symbol>>,
    pub signature: Option<Signature>,
    pub management: Option<Management>,
}

impl Context {
    pub fn new(name: impl Into<String>, logic: Arc<dyn ContextLogic>) -> Self {
        Context {
            name: name.into(),
            logic,
            kb: Kb::new(),
            bridge_rules: Vec::new(),
            import_domains: BTreeMap::new(),
            signature: None,
            management: None,
        }
    }

    pub fn with_kb(mut self, kb: impl IntoIterator<Item = Element>) -> Self {
        self.kb.extend(kb);
        self
    }

    pub fn with_facts(self, facts: impl IntoIterator<Item = Atom>) -> Self {
        self.with_kb(facts.into_iter().map(Element::Relational))
    }

    pub fn with_rule(mut self, rule: BridgeRule) -> Self {
        self.bridge_rules.push(rule);
        self
    }
}

/// An indexed collection of contexts linked by bridge rules.
#[derive(Clone, Debug, Default)]
pub struct Mcs {
    pub contexts: Vec<Context>,
}

impl Mcs {
    pub fn new() -> Self {
        Mcs::default()
    }

    pub fn add_context(&mut self, context: Context) -> ContextId {
        self.contexts.push(context);
        ContextId(self.contexts.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn context(&self, id: ContextId) -> &Context {
        &self.contexts[id.0]
    }

    pub fn context_mut(&mut self, id: ContextId) -> &mut Context {
        &mut self.contexts[id.0]
    }

    pub fn find(&self, name: &str) -> Option<ContextId> {
        self.contexts.iter().position(|c| c.name == name).map(ContextId)
    }

    pub fn ids(&self) -> impl Iterator<Item = ContextId> {
        (0..self.contexts.len()).map(ContextId)
    }
}

/// One belief set. A closed set answers `Negated(a)` as the absence of
/// `a` instead of storing the negative part.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BeliefSet {
    beliefs: BTreeSet<Belief>,
    closed: bool,
}

impl BeliefSet {
    pub fn open(beliefs: impl IntoIterator<Item = Belief>) -> Self {
        BeliefSet { beliefs: beliefs.into_iter().collect(), closed: false }
    }

    /// Closed-world completion of a set of ground atoms.
    pub fn closed(atoms: impl IntoIterator<Item = Atom>) -> Self {
        BeliefSet { beliefs: atoms.into_iter().map(Belief::Relational).collect(), closed: true }
    }

    pub fn empty() -> Self {
        BeliefSet::default()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Explicitly stored beliefs (the positive part for closed sets).
    pub fn beliefs(&self) -> &BTreeSet<Belief> {
        &self.beliefs
    }

    pub fn len(&self) -> usize {
        self.beliefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beliefs.is_empty()
    }

    pub fn contains(&self, belief: &Belief) -> bool {
        match belief {
            Belief::Negated(a) if self.closed => !self.beliefs.contains(&Belief::Relational(a.clone())),
            other => self.beliefs.contains(other),
        }
    }

    pub fn constants(&self) -> BTreeSet<Symbol> {
        self.beliefs.iter().filter_map(Belief::atom).flat_map(|a| a.constants().cloned()).collect()
    }

    /// Whether some instantiation of the free variables of `pattern` is in
    /// this set. Stored beliefs are matched directly; the implicit negative
    /// part of a closed set is instantiated over `domain`.
    pub fn matches_any(&self, pattern: &Belief, domain: &BTreeSet<Symbol>) -> bool {
        if pattern.is_ground() {
            return self.contains(pattern);
        }
        match pattern {
            Belief::Negated(atom) if self.closed => {
                let vars: Vec<Symbol> = atom.vars().cloned().collect::<BTreeSet<_>>().into_iter().collect();
                let mut pool = domain.clone();
                pool.extend(self.constants());
                let hit = instantiations(&vars, &pool).any(|b| self.contains(&Belief::Negated(atom.substitute(&b))));
                hit
            }
            _ => self.beliefs.iter().any(|b| pattern.match_ground(b, &mut Binding::new())),
        }
    }
}

/// All assignments of `vars` to constants of `pool`.
pub(crate) fn instantiations<'a>(vars: &'a [Symbol], pool: &'a BTreeSet<Symbol>) -> impl Iterator<Item = Binding> + 'a {
    let values: Vec<&Symbol> = pool.iter().collect();
    let n = vars.len();
    let total = if n == 0 { 1 } else if values.is_empty() { 0 } else { values.len().pow(n as u32) };
    (0..total).map(move |mut idx| {
        let mut b = Binding::new();
        for v in vars {
            b.insert(v.clone(), values[idx % values.len()].clone());
            idx /= values.len();
        }
        b
    })
}

impl FromIterator<Belief> for BeliefSet {
    fn from_iter<T: IntoIterator<Item = Belief>>(iter: T) -> Self {
        BeliefSet::open(iter)
    }
}

impl fmt::Debug for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.beliefs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")?;
        if self.closed {
            f.write_str("^cw")?;
        }
        Ok(())
    }
}

/// One belief set per context, indexed like the owning system.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BeliefState(pub Vec<BeliefSet>);

impl BeliefState {
    pub fn get(&self, id: ContextId) -> &BeliefSet {
        &self.0[id.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BeliefState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(">")
    }
}
