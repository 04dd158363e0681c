//! Peer-to-peer systems: peers are deductive databases linked by mapping
//! rules. Each peer becomes one closed-world context; atoms are qualified
//! by the index of the peer that owns them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::constraints::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::kernel::{instantiations, Atom, Belief, BeliefSet, BeliefState, BodyLiteral, BridgeRule, Context, ContextId, ContextLiteral, Head, Mcs, PredKey, Symbol};
use crate::logics::{Rule, SignedAtom};

pub type PeerAtom = (usize, Atom);
pub type Interpretation = BTreeSet<PeerAtom>;

/// `head ←_source body`: imports from peer `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingRule {
    pub head: Atom,
    pub source: usize,
    pub body: Vec<Atom>,
}

#[derive(Clone, Debug, Default)]
pub struct Peer {
    pub name: String,
    pub facts: BTreeSet<Atom>,
    pub rules: Vec<Rule>,
    pub mappings: Vec<MappingRule>,
    /// Denials; a negative literal reads as `not`.
    pub ics: Vec<Vec<SignedAtom>>,
}

impl Peer {
    pub fn new(name: impl Into<String>) -> Self {
        Peer { name: name.into(), ..Default::default() }
    }

    fn extensional(&self) -> BTreeSet<PredKey> {
        self.facts.iter().map(Atom::key).collect()
    }

    fn intensional(&self) -> BTreeSet<PredKey> {
        self.rules.iter().map(|r| r.head.atom.key()).collect()
    }

    fn mapped(&self) -> BTreeSet<PredKey> {
        self.mappings.iter().map(|r| r.head.key()).collect()
    }
}

fn validate(peers: &[Peer]) -> Result<()> {
    for (i, p) in peers.iter().enumerate() {
        let (e, n, m) = (p.extensional(), p.intensional(), p.mapped());
        if let Some(k) = e.intersection(&n).chain(e.intersection(&m)).chain(n.intersection(&m)).next() {
            return Err(Error::Validation(format!("peer {}: {}/{} belongs to two signatures", p.name, k.0, k.1)));
        }
        for r in &p.rules {
            if r.head.negative || !r.naf.is_empty() || r.body.iter().any(|l| l.negative) {
                return Err(Error::Validation(format!("peer {}: rule `{r}` is not definite", p.name)));
            }
            let bound: BTreeSet<&Symbol> = r.body.iter().flat_map(|l| l.atom.vars()).collect();
            if r.head.atom.vars().any(|v| !bound.contains(v)) {
                return Err(Error::Validation(format!("peer {}: rule `{r}` is not range-restricted", p.name)));
            }
        }
        for mr in &p.mappings {
            if mr.source == i || mr.source >= peers.len() {
                return Err(Error::Validation(format!("peer {}: mapping rule for {} must read another peer", p.name, mr.head)));
            }
            let bound: BTreeSet<&Symbol> = mr.body.iter().flat_map(|a| a.vars()).collect();
            if mr.head.vars().any(|v| !bound.contains(v)) {
                return Err(Error::Validation(format!("peer {}: mapping rule for {} is not range-restricted", p.name, mr.head)));
            }
        }
        for ic in &p.ics {
            let bound: BTreeSet<&Symbol> = ic.iter().filter(|l| !l.negative).flat_map(|l| l.atom.vars()).collect();
            if ic.iter().filter(|l| l.negative).flat_map(|l| l.atom.vars()).any(|v| !bound.contains(v)) {
                return Err(Error::Validation(format!("peer {}: unsafe integrity constraint", p.name)));
            }
        }
    }
    Ok(())
}

/// The induced system: local rules become bridge rules inside the peer's
/// context, mapping rules become bridge rules reading the source peer and
/// each local constraint is qualified with the peer's index.
pub fn p2p_to_mcs(peers: &[Peer]) -> Result<(Mcs, Vec<IntegrityConstraint>)> {
    validate(peers)?;
    let mut m = Mcs::new();
    let mut ics = Vec::new();
    for (i, p) in peers.iter().enumerate() {
        let me = ContextId(i);
        let mut ctx = Context::new(p.name.clone(), Arc::new(crate::logics::ClosedWorldLogic)).with_facts(p.facts.iter().cloned());
        for r in &p.rules {
            let body = r.body.iter().map(|l| ContextLiteral::pos(me, l.atom.clone()).into()).collect();
            ctx.bridge_rules.push(BridgeRule::new(Head::plain(r.head.atom.clone()), body));
        }
        for mr in &p.mappings {
            let body = mr.body.iter().map(|a| ContextLiteral::pos(ContextId(mr.source), a.clone()).into()).collect();
            ctx.bridge_rules.push(BridgeRule::new(Head::plain(mr.head.clone()), body));
        }
        m.add_context(ctx);
        for ic in &p.ics {
            let body: Vec<BodyLiteral> = ic
                .iter()
                .map(|l| ContextLiteral { context: me, belief: Belief::Relational(l.atom.clone()), negated: l.negative }.into())
                .collect();
            ics.push(IntegrityConstraint::new(body));
        }
    }
    Ok((m, ics))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundPeerRule {
    pub head: PeerAtom,
    pub body: Vec<PeerAtom>,
    pub mapping: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub facts: Interpretation,
    pub rules: Vec<GroundPeerRule>,
}

fn constants(peers: &[Peer]) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for p in peers {
        let atoms = p
            .facts
            .iter()
            .chain(p.rules.iter().flat_map(|r| std::iter::once(&r.head.atom).chain(r.body.iter().map(|l| &l.atom))))
            .chain(p.mappings.iter().flat_map(|m| std::iter::once(&m.head).chain(&m.body)))
            .chain(p.ics.iter().flatten().map(|l| &l.atom));
        for a in atoms {
            out.extend(a.constants().cloned());
        }
    }
    out
}

fn ground_into(out: &mut BTreeSet<GroundPeerRule>, head: (usize, &Atom), body: &[(usize, &Atom)], mapping: bool, pool: &BTreeSet<Symbol>) {
    let vars: Vec<Symbol> = body.iter().flat_map(|(_, a)| a.vars().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
    for b in instantiations(&vars, pool) {
        out.insert(GroundPeerRule {
            head: (head.0, head.1.substitute(&b)),
            body: body.iter().map(|(k, a)| (*k, a.substitute(&b))).collect(),
            mapping,
        });
    }
}

/// Every rule and mapping rule grounded over the constants of the system.
pub fn p2p_ground_program(peers: &[Peer]) -> Result<GroundProgram> {
    validate(peers)?;
    let pool = constants(peers);
    let mut rules = BTreeSet::new();
    let mut facts = Interpretation::new();
    for (i, p) in peers.iter().enumerate() {
        facts.extend(p.facts.iter().map(|a| (i, a.clone())));
        for r in &p.rules {
            let body: Vec<(usize, &Atom)> = r.body.iter().map(|l| (i, &l.atom)).collect();
            ground_into(&mut rules, (i, &r.head.atom), &body, false, &pool);
        }
        for mr in &p.mappings {
            let body: Vec<(usize, &Atom)> = mr.body.iter().map(|a| (mr.source, a)).collect();
            ground_into(&mut rules, (i, &mr.head), &body, true, &pool);
        }
    }
    Ok(GroundProgram { facts, rules: rules.into_iter().collect() })
}

/// `P^I`: the ground program without the mapping instances whose head is
/// not in `interpretation`.
pub fn p2p_reduced_program(peers: &[Peer], interpretation: &Interpretation) -> Result<GroundProgram> {
    Ok(reduce(&p2p_ground_program(peers)?, interpretation))
}

fn reduce(program: &GroundProgram, interpretation: &Interpretation) -> GroundProgram {
    GroundProgram {
        facts: program.facts.clone(),
        rules: program.rules.iter().filter(|r| !r.mapping || interpretation.contains(&r.head)).cloned().collect(),
    }
}

/// Least model of a ground definite program, by naive iteration.
pub fn p2p_minimal_model(program: &GroundProgram) -> Interpretation {
    let mut model = program.facts.clone();
    loop {
        let before = model.len();
        for r in &program.rules {
            if r.body.iter().all(|b| model.contains(b)) {
                model.insert(r.head.clone());
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

/// Every local constraint holds in `interpretation`.
pub fn p2p_constraints_hold(peers: &[Peer], interpretation: &Interpretation) -> bool {
    let pool = constants(peers);
    peers.iter().enumerate().all(|(i, p)| {
        p.ics.iter().all(|ic| {
            let vars: Vec<Symbol> = ic.iter().flat_map(|l| l.atom.vars().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
            let ok = instantiations(&vars, &pool)
                .all(|b| !ic.iter().all(|l| interpretation.contains(&(i, l.atom.substitute(&b))) != l.negative));
            ok
        })
    })
}

/// Above this many relevant mapping instances the search is refused.
pub const MAX_MAPPING_INSTANCES: usize = 20;

/// Interpretations `I` with `I = MM(P^I)` that satisfy every constraint,
/// found by disabling subsets of the mapping instances whose body holds in
/// the least model of the whole program. Sorted.
pub fn p2p_weak_models(peers: &[Peer]) -> Result<Vec<Interpretation>> {
    let program = p2p_ground_program(peers)?;
    let full = p2p_minimal_model(&program);
    let relevant: Vec<usize> = program
        .rules
        .iter()
        .enumerate()
        .filter(|(_, r)| r.mapping && r.body.iter().all(|b| full.contains(b)))
        .map(|(k, _)| k)
        .collect();
    if relevant.len() > MAX_MAPPING_INSTANCES {
        return Err(Error::LimitRequired { free_heads: relevant.len(), threshold: MAX_MAPPING_INSTANCES });
    }
    let found: BTreeSet<Interpretation> = (0u64..1 << relevant.len())
        .into_par_iter()
        .filter_map(|mask| {
            let disabled: BTreeSet<usize> = relevant.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, k)| *k).collect();
            let sub = GroundProgram {
                facts: program.facts.clone(),
                rules: program.rules.iter().enumerate().filter(|(k, _)| !disabled.contains(k)).map(|(_, r)| r.clone()).collect(),
            };
            let candidate = p2p_minimal_model(&sub);
            let stable = p2p_minimal_model(&reduce(&program, &candidate)) == candidate;
            (stable && p2p_constraints_hold(peers, &candidate)).then_some(candidate)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// The belief state assigning each peer's atoms to its context.
pub fn interpretation_to_state(peers: usize, interpretation: &Interpretation) -> BeliefState {
    let mut sets: BTreeMap<usize, Vec<Atom>> = (0..peers).map(|k| (k, Vec::new())).collect();
    for (k, a) in interpretation {
        sets.entry(*k).or_default().push(a.clone());
    }
    BeliefState(sets.into_values().map(BeliefSet::closed).collect())
}

pub fn state_to_interpretation(s: &BeliefState) -> Interpretation {
    s.0.iter()
        .enumerate()
        .flat_map(|(k, set)| {
            set.beliefs().iter().filter_map(move |b| match b {
                Belief::Relational(a) => Some((k, a.clone())),
                _ => None,
            })
        })
        .collect()
}
