//! Applicability, equilibrium checking and equilibrium enumeration.
//!
//! The search guesses which ground bridge-rule heads are applicable,
//! derives candidate belief sets from each context logic and keeps the
//! candidates whose applicable heads reproduce the guess. Guesses are
//! pruned by propagating logic bounds: a head is forced in when some rule
//! for it is certainly applicable and forced out when none possibly is.

use std::collections::{BTreeMap, BTreeSet};

use log::debug;

use crate::error::{Error, Result};
use crate::grounding::{default_import_domains, domain_pool, ground_bridge_rules_with, GroundRule, ImportDomains};
use crate::kernel::{Belief, BeliefSet, BeliefState, BodyLiteral, Context, ContextId, Head, Kb, Mcs, PredKey};
use crate::logics::Bounds;

/// Above this many undetermined heads an explicit limit is required.
pub const DEFAULT_MAX_FREE_HEADS: usize = 20;

/// Knowledge base after applying `heads` to the context: plain union, or
/// the management function for managed contexts.
pub fn effective_kb<'h>(ctx: &Context, heads: impl IntoIterator<Item = &'h Head>) -> Result<Kb> {
    match &ctx.management {
        Some(mg) => {
            let actions: Vec<(crate::kernel::Symbol, crate::kernel::Element)> =
                heads.into_iter().map(|h| (h.op_name(), h.element.clone())).collect();
            mg.apply(&actions, &ctx.kb)
        }
        None => {
            let mut kb = ctx.kb.clone();
            kb.extend(heads.into_iter().map(|h| h.element.clone()));
            Ok(kb)
        }
    }
}

/// Whether adding heads to this context only ever grows its kb.
fn additive(ctx: &Context, heads: &[Head]) -> bool {
    match &ctx.management {
        None => true,
        Some(mg) => heads.iter().all(|h| mg.is_additive(&h.op_name(), &h.element)),
    }
}

fn acc(ctx: &Context, id: ContextId, kb: &Kb) -> Result<Vec<BeliefSet>> {
    ctx.logic.acc(kb).map_err(|source| Error::Logic { context: id, source })
}

/// A system together with its import domains and ground bridge rules.
#[derive(Debug)]
pub struct GroundMcs<'a> {
    pub mcs: &'a Mcs,
    pub domains: ImportDomains,
    pub rules: Vec<Vec<GroundRule>>,
}

impl<'a> GroundMcs<'a> {
    pub fn new(mcs: &'a Mcs) -> Self {
        let domains = default_import_domains(mcs);
        let rules = ground_bridge_rules_with(mcs, &domains);
        GroundMcs { mcs, domains, rules }
    }

    pub fn holds(&self, s: &BeliefState, context: ContextId, belief: &Belief) -> bool {
        s.get(context).matches_any(belief, domain_pool(&self.domains, context))
    }

    pub fn is_applicable(&self, rule: &GroundRule, s: &BeliefState) -> bool {
        rule.positive.iter().all(|(c, b)| self.holds(s, *c, b)) && rule.negative.iter().all(|(c, b)| !self.holds(s, *c, b))
    }

    /// `app_i(S)`: heads of the ground rules of context `i` applicable in `s`.
    pub fn applicable_heads(&self, s: &BeliefState, i: ContextId) -> BTreeSet<Head> {
        self.rules[i.0].iter().filter(|r| self.is_applicable(r, s)).map(|r| r.head.clone()).collect()
    }

    pub fn is_equilibrium(&self, s: &BeliefState) -> Result<bool> {
        if s.len() != self.mcs.len() {
            return Ok(false);
        }
        for (i, ctx) in self.mcs.contexts.iter().enumerate() {
            let id = ContextId(i);
            let app = self.applicable_heads(s, id);
            let kb = effective_kb(ctx, &app)?;
            if !acc(ctx, id, &kb)?.contains(s.get(id)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn applicable_heads(m: &Mcs, s: &BeliefState, i: ContextId) -> BTreeSet<Head> {
    GroundMcs::new(m).applicable_heads(s, i)
}

pub fn is_equilibrium(m: &Mcs, s: &BeliefState) -> Result<bool> {
    GroundMcs::new(m).is_equilibrium(s)
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Stop after this many equilibria.
    pub limit: Option<usize>,
    /// Refuse unbounded enumeration above this many undetermined heads.
    pub max_free_heads: Option<usize>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { limit: None, max_free_heads: Some(DEFAULT_MAX_FREE_HEADS) }
    }
}

impl EnumerationOptions {
    pub fn unbounded() -> Self {
        EnumerationOptions { limit: None, max_free_heads: None }
    }
}

/// Every equilibrium of `m`, at most `limit` of them.
///
/// Results are ordered by the number of applicable heads, then by the head
/// selection, then by the state. With a limit the search stops early, so
/// the returned equilibria are the first `limit` found, sorted.
pub fn enumerate_equilibria(m: &Mcs, limit: Option<usize>) -> Result<Vec<BeliefState>> {
    enumerate_with(m, EnumerationOptions { limit, ..Default::default() })
}

pub fn enumerate_with(m: &Mcs, options: EnumerationOptions) -> Result<Vec<BeliefState>> {
    if options.limit == Some(0) {
        return Ok(Vec::new());
    }
    let g = GroundMcs::new(m);
    if fast_path_eligible(m) && dependencies_acyclic(m) {
        debug!("monotone acyclic system: using least-fixpoint evaluation");
        return Ok(least_equilibrium(&g)?.into_iter().collect());
    }
    Search::new(&g).run(options)
}

/// Logical consistency: some equilibrium exists. Returns a witness.
pub fn is_consistent(m: &Mcs) -> Result<Option<BeliefState>> {
    let g = GroundMcs::new(m);
    if fast_path_eligible(m) {
        return least_equilibrium(&g);
    }
    Ok(Search::new(&g).run(EnumerationOptions { limit: Some(1), max_free_heads: None })?.into_iter().next())
}

/// Every logic is monotone with at most one belief set, every body literal
/// is a positive query of a non-negated belief, and heads only add.
pub fn fast_path_eligible(m: &Mcs) -> bool {
    m.contexts.iter().all(|c| {
        c.logic.is_monotone_singleton()
            && additive(c, &c.bridge_rules.iter().map(|r| r.head.clone()).collect::<Vec<_>>())
            && c.bridge_rules.iter().all(|r| {
                r.body.iter().all(|l| match l {
                    BodyLiteral::Context(l) => !l.negated && !matches!(l.belief, Belief::Negated(_)),
                    BodyLiteral::Compare(_) => true,
                })
            })
    })
}

/// Least fixpoint of `S ↦ ACC(kb ∪ app(S))` for fast-path systems. `None`
/// when some context accepts no belief set along the way, which for
/// monotone logics means the system has no equilibrium at all.
pub fn least_equilibrium(g: &GroundMcs<'_>) -> Result<Option<BeliefState>> {
    let m = g.mcs;
    let mut heads: Vec<BTreeSet<Head>> = vec![BTreeSet::new(); m.len()];
    loop {
        let mut sets = Vec::with_capacity(m.len());
        for (i, ctx) in m.contexts.iter().enumerate() {
            let kb = effective_kb(ctx, &heads[i])?;
            let mut accepted = acc(ctx, ContextId(i), &kb)?;
            match accepted.len() {
                0 => return Ok(None),
                1 => sets.push(accepted.pop().unwrap()),
                n => {
                    return Err(Error::Validation(format!(
                        "context {i} returned {n} belief sets from a logic declared singleton"
                    )))
                }
            }
        }
        let state = BeliefState(sets);
        let next: Vec<BTreeSet<Head>> = m.ids().map(|i| g.applicable_heads(&state, i)).collect();
        if next == heads {
            return Ok(Some(state));
        }
        heads = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Pred(ContextId, PredKey),
    Token(ContextId, crate::kernel::Symbol),
    Hub(ContextId),
}

fn belief_node(c: ContextId, b: &Belief) -> Node {
    match b {
        Belief::Relational(a) | Belief::Negated(a) => Node::Pred(c, a.key()),
        Belief::Ordinary(t) => Node::Token(c, t.clone()),
    }
}

/// Whether the predicate-level dependency graph of the bridge rules is
/// acyclic. Contexts whose logic derives beliefs route every incoming head
/// to every queried belief.
pub fn dependencies_acyclic(m: &Mcs) -> bool {
    let mut edges: BTreeMap<Node, BTreeSet<Node>> = BTreeMap::new();
    for (i, ctx) in m.contexts.iter().enumerate() {
        let id = ContextId(i);
        for rule in &ctx.bridge_rules {
            let head = belief_node(id, &rule.head.element.to_belief());
            let head = if ctx.logic.derives() {
                edges.entry(head.clone()).or_default().insert(Node::Hub(id));
                Node::Hub(id)
            } else {
                head
            };
            for lit in rule.context_literals() {
                let Some(src) = m.contexts.get(lit.context.0) else { continue };
                let from = if src.logic.derives() { Node::Hub(lit.context) } else { belief_node(lit.context, &lit.belief) };
                edges.entry(from).or_default().insert(head.clone());
            }
        }
    }
    // Iterative three-colour DFS.
    let mut state: BTreeMap<&Node, u8> = BTreeMap::new();
    for start in edges.keys() {
        if state.contains_key(start) {
            continue;
        }
        let mut stack: Vec<(&Node, Vec<&Node>)> = vec![(start, edges[start].iter().collect())];
        state.insert(start, 1);
        while let Some((_, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match state.get(next) {
                    Some(1) => return false,
                    Some(_) => {}
                    None => {
                        state.insert(next, 1);
                        let succ = edges.get(next).map(|s| s.iter().collect()).unwrap_or_default();
                        stack.push((next, succ));
                    }
                },
                None => {
                    let (done, _) = stack.pop().unwrap();
                    state.insert(done, 2);
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Decision {
    Unknown,
    In,
    Out,
}

struct Search<'g, 'a> {
    g: &'g GroundMcs<'a>,
    /// Distinct ground heads per context, sorted.
    heads: Vec<Vec<Head>>,
    /// For each context, the rules grouped by head index.
    rules_by_head: Vec<Vec<Vec<&'g GroundRule>>>,
}

type Found = (Vec<Vec<Head>>, BeliefState);

impl<'g, 'a> Search<'g, 'a> {
    fn new(g: &'g GroundMcs<'a>) -> Self {
        let mut heads = Vec::new();
        let mut rules_by_head = Vec::new();
        for rules in &g.rules {
            let distinct: Vec<Head> = rules.iter().map(|r| r.head.clone()).collect::<BTreeSet<_>>().into_iter().collect();
            let mut grouped: Vec<Vec<&GroundRule>> = vec![Vec::new(); distinct.len()];
            for r in rules {
                let idx = distinct.binary_search(&r.head).expect("head collected above");
                grouped[idx].push(r);
            }
            heads.push(distinct);
            rules_by_head.push(grouped);
        }
        Search { g, heads, rules_by_head }
    }

    fn run(&self, options: EnumerationOptions) -> Result<Vec<BeliefState>> {
        let mut assign: Vec<Vec<Decision>> = self.heads.iter().map(|h| vec![Decision::Unknown; h.len()]).collect();
        let mut found: Vec<Found> = Vec::new();
        if self.propagate(&mut assign)? {
            let free = assign.iter().flatten().filter(|d| **d == Decision::Unknown).count();
            debug!("equilibrium search: {} ground heads, {free} undetermined", assign.iter().map(Vec::len).sum::<usize>());
            if let (None, Some(threshold)) = (options.limit, options.max_free_heads) {
                if free > threshold {
                    return Err(Error::LimitRequired { free_heads: free, threshold });
                }
            }
            self.dfs(assign, options.limit, &mut found)?;
        }
        found.sort_by(|(sa, a), (sb, b)| {
            let na: usize = sa.iter().map(Vec::len).sum();
            let nb: usize = sb.iter().map(Vec::len).sum();
            na.cmp(&nb).then_with(|| sa.cmp(sb)).then_with(|| a.cmp(b))
        });
        found.dedup_by(|a, b| a.1 == b.1);
        Ok(found.into_iter().map(|(_, s)| s).collect())
    }

    fn dfs(&self, mut assign: Vec<Vec<Decision>>, limit: Option<usize>, found: &mut Vec<Found>) -> Result<()> {
        if limit.is_some_and(|l| found.len() >= l) {
            return Ok(());
        }
        if !self.propagate(&mut assign)? {
            return Ok(());
        }
        let next = assign
            .iter()
            .enumerate()
            .find_map(|(i, ds)| ds.iter().position(|d| *d == Decision::Unknown).map(|h| (i, h)));
        match next {
            None => self.leaf(&assign, limit, found),
            Some((i, h)) => {
                for choice in [Decision::Out, Decision::In] {
                    let mut branch = assign.clone();
                    branch[i][h] = choice;
                    self.dfs(branch, limit, found)?;
                }
                Ok(())
            }
        }
    }

    fn selected(&self, assign: &[Vec<Decision>], pick: impl Fn(Decision) -> bool) -> Vec<Vec<Head>> {
        assign
            .iter()
            .zip(&self.heads)
            .map(|(ds, hs)| ds.iter().zip(hs).filter(|(d, _)| pick(**d)).map(|(_, h)| h.clone()).collect())
            .collect()
    }

    fn leaf(&self, assign: &[Vec<Decision>], limit: Option<usize>, found: &mut Vec<Found>) -> Result<()> {
        let selection = self.selected(assign, |d| d == Decision::In);
        let m = self.g.mcs;
        let mut candidates: Vec<Vec<BeliefSet>> = Vec::with_capacity(m.len());
        for (i, ctx) in m.contexts.iter().enumerate() {
            let kb = effective_kb(ctx, &selection[i])?;
            let sets = acc(ctx, ContextId(i), &kb)?;
            if sets.is_empty() {
                return Ok(());
            }
            candidates.push(sets);
        }
        let wanted: Vec<BTreeSet<Head>> = selection.iter().map(|s| s.iter().cloned().collect()).collect();
        let mut index = vec![0usize; candidates.len()];
        loop {
            let state = BeliefState(index.iter().zip(&candidates).map(|(k, c)| c[*k].clone()).collect());
            if m.ids().all(|i| self.g.applicable_heads(&state, i) == wanted[i.0]) {
                found.push((selection.clone(), state));
                if limit.is_some_and(|l| found.len() >= l) {
                    return Ok(());
                }
            }
            // Odometer over the candidate product.
            let mut pos = candidates.len();
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < candidates[pos].len() {
                    break;
                }
                index[pos] = 0;
            }
        }
    }

    /// Tightens `assign` to a fixpoint. Returns false on conflict.
    fn propagate(&self, assign: &mut [Vec<Decision>]) -> Result<bool> {
        let m = self.g.mcs;
        let mut lower: Vec<Vec<bool>> = assign.iter().map(|ds| ds.iter().map(|d| *d == Decision::In).collect()).collect();
        let mut upper: Vec<Vec<bool>> = assign.iter().map(|ds| ds.iter().map(|d| *d != Decision::Out).collect()).collect();
        loop {
            let mut bounds = Vec::with_capacity(m.len());
            for (i, ctx) in m.contexts.iter().enumerate() {
                let lo: Vec<Head> = self.pick(i, &lower[i]);
                let up: Vec<Head> = self.pick(i, &upper[i]);
                if !additive(ctx, &up) {
                    bounds.push(Bounds::Unknown);
                    continue;
                }
                let lo_kb = effective_kb(ctx, &lo)?;
                let up_kb = effective_kb(ctx, &up)?;
                bounds.push(ctx.logic.bounds(&lo_kb, &up_kb).map_err(|source| Error::Logic { context: ContextId(i), source })?);
            }

            let mut changed = false;
            for i in 0..m.len() {
                for h in 0..self.heads[i].len() {
                    let rules = &self.rules_by_head[i][h];
                    if upper[i][h] && !rules.iter().any(|r| self.body_possible(r, &bounds)) {
                        upper[i][h] = false;
                        changed = true;
                    }
                    if !lower[i][h] && rules.iter().any(|r| self.body_certain(r, &bounds)) {
                        lower[i][h] = true;
                        changed = true;
                    }
                    if lower[i][h] && !upper[i][h] {
                        return Ok(false);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..assign.len() {
            for h in 0..assign[i].len() {
                if lower[i][h] {
                    assign[i][h] = Decision::In;
                } else if !upper[i][h] {
                    assign[i][h] = Decision::Out;
                }
            }
        }
        Ok(true)
    }

    fn pick(&self, i: usize, mask: &[bool]) -> Vec<Head> {
        self.heads[i].iter().zip(mask).filter(|(_, on)| **on).map(|(h, _)| h.clone()).collect()
    }

    fn body_possible(&self, r: &GroundRule, bounds: &[Bounds]) -> bool {
        let pool = |c: ContextId| domain_pool(&self.g.domains, c);
        r.positive.iter().all(|(c, b)| bounds[c.0].possibly(b, pool(*c)))
            && r.negative.iter().all(|(c, b)| !bounds[c.0].certainly(b, pool(*c)))
    }

    fn body_certain(&self, r: &GroundRule, bounds: &[Bounds]) -> bool {
        let pool = |c: ContextId| domain_pool(&self.g.domains, c);
        r.positive.iter().all(|(c, b)| bounds[c.0].certainly(b, pool(*c)))
            && r.negative.iter().all(|(c, b)| !bounds[c.0].possibly(b, pool(*c)))
    }
}
