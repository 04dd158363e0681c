//! Denial checking directly against a closed-world store, without
//! grounding: each constraint's positive part is evaluated as a conjunctive
//! query with hash-indexed joins and the negated part as lookups.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::grounding::check_constraint_safety;
use crate::kernel::{Atom, Belief, Binding, BodyLiteral, Comparison, ContextId, PredKey, Symbol, Term};

type Tuple = Vec<Symbol>;
type Lookup = HashMap<Tuple, Vec<usize>>;

struct Store {
    tuples: HashMap<PredKey, Vec<Tuple>>,
    members: HashMap<PredKey, HashSet<Tuple>>,
    indexes: HashMap<(PredKey, Vec<usize>), Lookup>,
}

impl Store {
    fn new(db: &BTreeSet<Atom>) -> Result<Self> {
        let mut tuples: HashMap<PredKey, Vec<Tuple>> = HashMap::new();
        for a in db {
            let t: Option<Tuple> = a.args.iter().map(|x| x.as_const().cloned()).collect();
            let t = t.ok_or_else(|| Error::Validation(format!("non-ground fact {a}")))?;
            tuples.entry(a.key()).or_default().push(t);
        }
        let members = tuples.iter().map(|(k, v)| (k.clone(), v.iter().cloned().collect())).collect();
        Ok(Store { tuples, members, indexes: HashMap::new() })
    }

    fn size(&self, key: &PredKey) -> usize {
        self.tuples.get(key).map_or(0, Vec::len)
    }

    fn ensure_index(&mut self, key: &PredKey, positions: &[usize]) {
        if positions.is_empty() || self.indexes.contains_key(&(key.clone(), positions.to_vec())) {
            return;
        }
        let mut lookup: Lookup = HashMap::new();
        for (n, t) in self.tuples.get(key).into_iter().flatten().enumerate() {
            lookup.entry(positions.iter().map(|p| t[*p].clone()).collect()).or_default().push(n);
        }
        self.indexes.insert((key.clone(), positions.to_vec()), lookup);
    }

    /// Tuples of `key` agreeing with `values` on `positions`.
    fn matching<'s>(&'s self, key: &PredKey, positions: &[usize], values: &[Symbol]) -> Box<dyn Iterator<Item = &'s Tuple> + 's> {
        let all = self.tuples.get(key).map(Vec::as_slice).unwrap_or(&[]);
        if positions.is_empty() {
            return Box::new(all.iter());
        }
        match self.indexes.get(&(key.clone(), positions.to_vec())).and_then(|l| l.get(values)) {
            Some(ids) => Box::new(ids.iter().map(move |n| &all[*n])),
            None => Box::new(std::iter::empty()),
        }
    }
}

/// Positions of `atom` whose value is known once `bound` is.
fn bound_positions(atom: &Atom, bound: &BTreeSet<Symbol>) -> Vec<usize> {
    atom.args
        .iter()
        .enumerate()
        .filter(|(_, t)| match t {
            Term::Const(_) => true,
            Term::Var(v) => bound.contains(v),
        })
        .map(|(n, _)| n)
        .collect()
}

fn key_values(atom: &Atom, positions: &[usize], binding: &Binding) -> Tuple {
    positions
        .iter()
        .map(|p| match &atom.args[*p] {
            Term::Const(c) => c.clone(),
            Term::Var(v) => binding[v].clone(),
        })
        .collect()
}

struct Plan {
    /// Positive atoms in join order, with the positions bound on entry.
    steps: Vec<(Atom, Vec<usize>)>,
    negative: Vec<(Atom, Vec<usize>)>,
    comparisons: Vec<Comparison>,
}

fn plan(ic: &IntegrityConstraint, store: &mut Store) -> Result<Plan> {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut comparisons = Vec::new();
    for lit in &ic.body {
        match lit {
            BodyLiteral::Compare(c) => comparisons.push(c.clone()),
            BodyLiteral::Context(l) => {
                if l.context != ContextId(0) {
                    return Err(Error::NotApplicable(format!("constraint refers to context {}", l.context)));
                }
                let Belief::Relational(a) = &l.belief else {
                    return Err(Error::NotApplicable(format!("constraint queries non-relational belief {}", l.belief)));
                };
                if l.negated {
                    negative.push(a.clone());
                } else {
                    positive.push(a.clone());
                }
            }
        }
    }

    let mut bound = BTreeSet::new();
    let mut steps = Vec::new();
    while !positive.is_empty() {
        let best = (0..positive.len())
            .max_by_key(|&n| {
                let a = &positive[n];
                (bound_positions(a, &bound).len(), std::cmp::Reverse(store.size(&a.key())), std::cmp::Reverse(n))
            })
            .expect("non-empty");
        let a = positive.remove(best);
        let positions = bound_positions(&a, &bound);
        store.ensure_index(&a.key(), &positions);
        bound.extend(a.vars().cloned());
        steps.push((a, positions));
    }
    let negative = negative
        .into_iter()
        .map(|a| {
            let positions = bound_positions(&a, &bound);
            store.ensure_index(&a.key(), &positions);
            (a, positions)
        })
        .collect();
    Ok(Plan { steps, negative, comparisons })
}

fn violated(plan: &Plan, store: &Store, step: usize, binding: &mut Binding) -> bool {
    if step == plan.steps.len() {
        if !plan.comparisons.iter().all(|c| c.evaluate(binding) == Some(true)) {
            return false;
        }
        return !plan.negative.iter().any(|(a, positions)| {
            let values = key_values(a, positions, binding);
            if positions.len() == a.args.len() {
                store.members.get(&a.key()).is_some_and(|m| m.contains(&values))
            } else {
                store.matching(&a.key(), positions, &values).next().is_some()
            }
        });
    }
    let (atom, positions) = &plan.steps[step];
    let values = key_values(atom, positions, binding);
    for tuple in store.matching(&atom.key(), positions, &values) {
        let mut added = Vec::new();
        let mut ok = true;
        for (term, value) in atom.args.iter().zip(tuple) {
            if let Term::Var(v) = term {
                match binding.get(v) {
                    Some(b) if b != value => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding.insert(v.clone(), value.clone());
                        added.push(v.clone());
                    }
                }
            }
        }
        let hit = ok && violated(plan, store, step + 1, binding);
        for v in added {
            binding.remove(&v);
        }
        if hit {
            return true;
        }
    }
    false
}

/// Whether the closed-world store `db` satisfies every denial in `ics`.
/// All literals must query context 0 and be relational.
pub fn db_fastpath_check(db: &BTreeSet<Atom>, ics: &[IntegrityConstraint]) -> Result<bool> {
    let mut store = Store::new(db)?;
    let mut plans = Vec::with_capacity(ics.len());
    for ic in ics {
        check_constraint_safety(ic)?;
        plans.push(plan(ic, &mut store)?);
    }
    Ok(!plans.iter().any(|p| violated(p, &store, 0, &mut Binding::new())))
}
