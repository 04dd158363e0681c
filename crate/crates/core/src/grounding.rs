//! Import domains and grounding of bridge rules and integrity constraints.
//!
//! A variable ranges over the intersection of the import domains of the
//! contexts its positive literals query. Constants written literally in a rule or
//! constraint are added to the domain of the context they appear on, so
//! rules mentioning fresh constants can still be instantiated. Variables
//! that occur exactly once, inside a negated literal, are not grounded:
//! they stay in the ground instance and are read existentially.

use std::collections::{BTreeMap, BTreeSet};

use crate::constraints::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::kernel::{
    element_constants, existential_vars, Belief, Binding, BodyLiteral, ContextId, Head, Mcs, Symbol,
};

/// Default import domains `D_j` plus explicit per-pair overrides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImportDomains {
    defaults: Vec<BTreeSet<Symbol>>,
    overrides: BTreeMap<(ContextId, ContextId), BTreeSet<Symbol>>,
}

impl ImportDomains {
    /// `D_{importer,source}`. Constraints have no importer and always see
    /// the default.
    pub fn get(&self, importer: Option<ContextId>, source: ContextId) -> &BTreeSet<Symbol> {
        importer
            .and_then(|i| self.overrides.get(&(i, source)))
            .unwrap_or(&self.defaults[source.0])
    }

    /// The default domain exported by `source`.
    pub fn exported(&self, source: ContextId) -> &BTreeSet<Symbol> {
        &self.defaults[source.0]
    }

    /// Every ordered pair `(i, j)` with its domain.
    pub fn pairs(&self) -> BTreeMap<(ContextId, ContextId), BTreeSet<Symbol>> {
        let n = self.defaults.len();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                out.insert((ContextId(i), ContextId(j)), self.get(Some(ContextId(i)), ContextId(j)).clone());
            }
        }
        out
    }

    /// Union of all default domains.
    pub fn all_constants(&self) -> BTreeSet<Symbol> {
        self.defaults.iter().flatten().cloned().collect()
    }
}

/// Domains from the constants of each kb, of its logic, and of the heads
/// of its bridge rules. Head constants are taken from ground instances, so
/// constants imported through a head variable flow into the head context;
/// this is iterated to a fixpoint.
pub fn default_import_domains(m: &Mcs) -> ImportDomains {
    let mut defaults: Vec<BTreeSet<Symbol>> = m
        .contexts
        .iter()
        .map(|c| {
            let mut d = c.logic.constants();
            for e in &c.kb {
                element_constants(e, &mut d);
            }
            for r in &c.bridge_rules {
                element_constants(&r.head.element, &mut d);
            }
            d
        })
        .collect();
    let overrides = m
        .contexts
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.import_domains.iter().map(move |(j, d)| ((ContextId(i), *j), d.clone())))
        .collect();
    let mut domains = ImportDomains { defaults: defaults.clone(), overrides };

    loop {
        let mut changed = false;
        for (i, ctx) in m.contexts.iter().enumerate() {
            for rule in &ctx.bridge_rules {
                let head_vars = rule.head_vars();
                let var_domains = variable_domains(&head_vars, &rule.body, Some(ContextId(i)), &domains);
                if var_domains.values().any(BTreeSet::is_empty) {
                    continue;
                }
                for v in &head_vars {
                    if let Some(d) = var_domains.get(v) {
                        for c in d {
                            changed |= defaults[i].insert(c.clone());
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
        domains.defaults = defaults.clone();
    }
    domains
}

/// Domain of each grounded variable of a body. Variables outside any
/// context literal get an empty domain, which yields no instances.
fn variable_domains(
    head_vars: &[Symbol],
    body: &[BodyLiteral],
    importer: Option<ContextId>,
    domains: &ImportDomains,
) -> BTreeMap<Symbol, BTreeSet<Symbol>> {
    let existential = existential_vars(head_vars, body);
    let mut literal_constants: BTreeMap<ContextId, BTreeSet<Symbol>> = BTreeMap::new();
    for lit in body.iter().filter_map(BodyLiteral::as_context) {
        if let Some(a) = lit.belief.atom() {
            literal_constants.entry(lit.context).or_default().extend(a.constants().cloned());
        }
    }

    // Negated literals only filter; they restrict a variable's domain only
    // when no positive literal binds it.
    let positive: BTreeSet<Symbol> = body
        .iter()
        .filter_map(BodyLiteral::as_context)
        .filter(|l| !l.negated)
        .flat_map(|l| l.belief.vars())
        .collect();
    let mut out: BTreeMap<Symbol, Option<BTreeSet<Symbol>>> = BTreeMap::new();
    for v in head_vars {
        out.entry(v.clone()).or_insert(None);
    }
    for lit in body {
        match lit {
            BodyLiteral::Context(l) => {
                if l.context.0 >= domains.defaults.len() {
                    continue;
                }
                for v in l.belief.vars() {
                    if existential.contains(&v) || (l.negated && positive.contains(&v)) {
                        continue;
                    }
                    let mut source = domains.get(importer, l.context).clone();
                    if let Some(extra) = literal_constants.get(&l.context) {
                        source.extend(extra.iter().cloned());
                    }
                    let slot = out.entry(v).or_insert(None);
                    *slot = Some(match slot.take() {
                        None => source,
                        Some(prev) => prev.intersection(&source).cloned().collect(),
                    });
                }
            }
            BodyLiteral::Compare(c) => {
                for v in c.vars() {
                    out.entry(v.clone()).or_insert(None);
                }
            }
        }
    }
    out.into_iter().map(|(v, d)| (v, d.unwrap_or_default())).collect()
}

/// A variable-free bridge rule. Negated literals may still carry
/// existential variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundRule {
    pub head: Head,
    pub positive: Vec<(ContextId, Belief)>,
    pub negative: Vec<(ContextId, Belief)>,
}

/// A ground integrity constraint with the instantiation that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundConstraint {
    pub positive: Vec<(ContextId, Belief)>,
    pub negative: Vec<(ContextId, Belief)>,
    pub binding: Binding,
}

struct Instance {
    binding: Binding,
    positive: Vec<(ContextId, Belief)>,
    negative: Vec<(ContextId, Belief)>,
}

fn instances(
    head_vars: &[Symbol],
    body: &[BodyLiteral],
    importer: Option<ContextId>,
    domains: &ImportDomains,
) -> Vec<Instance> {
    let var_domains = variable_domains(head_vars, body, importer, domains);
    let mut out = Vec::new();
    let mut binding = Binding::new();
    let vars: Vec<(&Symbol, Vec<&Symbol>)> = var_domains.iter().map(|(v, d)| (v, d.iter().collect())).collect();
    enumerate(&vars, 0, &mut binding, &mut |b| {
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for lit in body {
            match lit {
                BodyLiteral::Context(l) => {
                    let belief = l.belief.substitute(b);
                    if l.negated {
                        negative.push((l.context, belief));
                    } else {
                        positive.push((l.context, belief));
                    }
                }
                BodyLiteral::Compare(c) => {
                    if c.evaluate(b) != Some(true) {
                        return;
                    }
                }
            }
        }
        out.push(Instance { binding: b.clone(), positive, negative });
    });
    out
}

fn enumerate(vars: &[(&Symbol, Vec<&Symbol>)], pos: usize, binding: &mut Binding, emit: &mut dyn FnMut(&Binding)) {
    if pos == vars.len() {
        emit(binding);
        return;
    }
    let (v, domain) = &vars[pos];
    for c in domain {
        binding.insert((*v).clone(), (*c).clone());
        enumerate(vars, pos + 1, binding, emit);
    }
    binding.remove(*v);
}

/// Ground instances of every bridge rule, per context, deduplicated and
/// sorted.
pub fn ground_bridge_rules(m: &Mcs) -> Vec<Vec<GroundRule>> {
    ground_bridge_rules_with(m, &default_import_domains(m))
}

pub fn ground_bridge_rules_with(m: &Mcs, domains: &ImportDomains) -> Vec<Vec<GroundRule>> {
    m.contexts
        .iter()
        .enumerate()
        .map(|(i, ctx)| {
            let mut set = BTreeSet::new();
            for rule in &ctx.bridge_rules {
                let head_vars = rule.head_vars();
                for inst in instances(&head_vars, &rule.body, Some(ContextId(i)), domains) {
                    let head = rule.head.substitute(&inst.binding);
                    if !head.element.is_ground() {
                        continue;
                    }
                    set.insert(GroundRule { head, positive: inst.positive, negative: inst.negative });
                }
            }
            set.into_iter().collect()
        })
        .collect()
}

/// Checks the constraint safety condition: a variable that occurs only
/// under negation must occur exactly once.
pub fn check_constraint_safety(ic: &IntegrityConstraint) -> Result<()> {
    match crate::kernel::unsafe_vars_relaxed(&[], &ic.body).into_iter().next() {
        Some(v) => Err(Error::UnsafeConstraint { variable: v.to_string() }),
        None => Ok(()),
    }
}

/// Ground instances of one constraint.
pub fn ground_constraint(ic: &IntegrityConstraint, domains: &ImportDomains) -> Result<Vec<GroundConstraint>> {
    check_constraint_safety(ic)?;
    let mut seen = BTreeMap::new();
    for inst in instances(&[], &ic.body, None, domains) {
        seen.entry((inst.positive, inst.negative)).or_insert(inst.binding);
    }
    Ok(seen
        .into_iter()
        .map(|((positive, negative), binding)| GroundConstraint { positive, negative, binding })
        .collect())
}

pub fn ground_ics(m: &Mcs, ics: &[IntegrityConstraint]) -> Result<Vec<GroundConstraint>> {
    let domains = default_import_domains(m);
    let mut out = BTreeSet::new();
    for ic in ics {
        out.extend(ground_constraint(ic, &domains)?);
    }
    Ok(out.into_iter().collect())
}

/// Constants used to instantiate existential variables against the
/// implicit negative part of closed belief sets.
pub(crate) fn domain_pool(domains: &ImportDomains, context: ContextId) -> &BTreeSet<Symbol> {
    domains.exported(context)
}
