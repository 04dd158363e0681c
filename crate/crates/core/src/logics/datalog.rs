//! Semi-naive bottom-up evaluation of definite rules.
//!
//! Facts and rule literals carry an optional classical-negation sign so the
//! same engine serves both plain Datalog and Horn closure with negative
//! heads. Negation as failure is rejected.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::LogicError;
use crate::kernel::{Atom, Symbol, Term};

/// An atom with a classical-negation marker (`-p(a)`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedAtom {
    pub negative: bool,
    pub atom: Atom,
}

impl SignedAtom {
    pub fn pos(atom: Atom) -> Self {
        SignedAtom { negative: false, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        SignedAtom { negative: true, atom }
    }
}

impl fmt::Debug for SignedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SignedAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// `head :- body, not naf.`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: SignedAtom,
    pub body: Vec<SignedAtom>,
    /// Negation-as-failure literals. Only present so that unsupported
    /// input can be reported; evaluation rejects rules that use them.
    pub naf: Vec<Atom>,
}

impl Rule {
    pub fn definite(head: Atom, body: Vec<Atom>) -> Self {
        Rule { head: SignedAtom::pos(head), body: body.into_iter().map(SignedAtom::pos).collect(), naf: Vec::new() }
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        std::iter::once(&self.head.atom)
            .chain(self.body.iter().map(|l| &l.atom))
            .chain(&self.naf)
            .flat_map(|a| a.constants())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() || !self.naf.is_empty() {
            f.write_str(" :- ")?;
            let mut first = true;
            for l in &self.body {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "{l}")?;
            }
            for a in &self.naf {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                write!(f, "not {a}")?;
            }
        }
        f.write_str(".")
    }
}

type Tuple = Vec<Symbol>;
type RelKey = (bool, Symbol, usize);
type Relations = HashMap<RelKey, HashSet<Tuple>>;

fn rel_key(l: &SignedAtom) -> RelKey {
    (l.negative, l.atom.pred.clone(), l.atom.args.len())
}

/// Checks that rules are definite and range-restricted.
pub(crate) fn check_rules(logic: &str, rules: &[Rule], allow_negative_literals: bool) -> Result<(), LogicError> {
    for rule in rules {
        if !rule.naf.is_empty() {
            return Err(LogicError::Unsupported { logic: logic.into(), reason: format!("negation as failure in `{rule}`") });
        }
        if !allow_negative_literals && (rule.head.negative || rule.body.iter().any(|l| l.negative)) {
            return Err(LogicError::Unsupported {
                logic: logic.into(),
                reason: format!("classical negation in `{rule}`"),
            });
        }
        let body_vars: HashSet<&Symbol> = rule.body.iter().flat_map(|l| l.atom.vars()).collect();
        if let Some(v) = rule.head.atom.vars().find(|v| !body_vars.contains(v)) {
            return Err(LogicError::Unsupported {
                logic: logic.into(),
                reason: format!("head variable {v} not bound by the body of `{rule}`"),
            });
        }
    }
    Ok(())
}

/// Least fixpoint of the immediate-consequence operator, computed
/// semi-naively: every round joins at least one literal against the facts
/// derived in the previous round.
pub fn least_model(facts: impl IntoIterator<Item = SignedAtom>, rules: &[Rule]) -> BTreeSet<SignedAtom> {
    let mut total: Relations = HashMap::new();
    let mut delta: Relations = HashMap::new();
    let seed = facts.into_iter().chain(rules.iter().filter(|r| r.body.is_empty()).map(|r| r.head.clone()));
    for fact in seed {
        let Some(tuple) = ground_tuple(&fact.atom) else { continue };
        let key = rel_key(&fact);
        if total.entry(key.clone()).or_default().insert(tuple.clone()) {
            delta.entry(key).or_default().insert(tuple);
        }
    }

    let rules: Vec<&Rule> = rules.iter().filter(|r| !r.body.is_empty()).collect();
    while !delta.is_empty() {
        let mut fresh: Relations = HashMap::new();
        for rule in &rules {
            for pivot in 0..rule.body.len() {
                if !delta.contains_key(&rel_key(&rule.body[pivot])) {
                    continue;
                }
                let mut binding = HashMap::new();
                join(rule, pivot, 0, &total, &delta, &mut binding, &mut |b| {
                    let tuple: Tuple = rule.head.atom.args.iter().map(|t| resolve(t, b)).collect();
                    let key = rel_key(&rule.head);
                    if !total.get(&key).is_some_and(|s| s.contains(&tuple)) {
                        fresh.entry(key).or_default().insert(tuple);
                    }
                });
            }
        }
        for (key, tuples) in &fresh {
            total.entry(key.clone()).or_default().extend(tuples.iter().cloned());
        }
        delta = fresh;
    }

    total
        .into_iter()
        .flat_map(|((negative, pred, _), tuples)| {
            tuples.into_iter().map(move |t| SignedAtom {
                negative,
                atom: Atom::new(pred.clone(), t.into_iter().map(Term::Const).collect()),
            })
        })
        .collect()
}

fn ground_tuple(atom: &Atom) -> Option<Tuple> {
    atom.args.iter().map(|t| t.as_const().cloned()).collect()
}

fn resolve(t: &Term, b: &HashMap<Symbol, Symbol>) -> Symbol {
    match t {
        Term::Const(c) => c.clone(),
        Term::Var(v) => b[v].clone(),
    }
}

fn join(
    rule: &Rule,
    pivot: usize,
    pos: usize,
    total: &Relations,
    delta: &Relations,
    binding: &mut HashMap<Symbol, Symbol>,
    emit: &mut dyn FnMut(&HashMap<Symbol, Symbol>),
) {
    if pos == rule.body.len() {
        emit(binding);
        return;
    }
    let lit = &rule.body[pos];
    let source = if pos == pivot { delta } else { total };
    let Some(tuples) = source.get(&rel_key(lit)) else { return };
    for tuple in tuples {
        let mut added = Vec::new();
        let mut ok = true;
        for (term, value) in lit.atom.args.iter().zip(tuple) {
            match term {
                Term::Const(c) => {
                    if c != value {
                        ok = false;
                        break;
                    }
                }
                Term::Var(v) => match binding.get(v) {
                    Some(bound) if bound == value => {}
                    Some(_) => {
                        ok = false;
                        break;
                    }
                    None => {
                        binding.insert(v.clone(), value.clone());
                        added.push(v.clone());
                    }
                },
            }
        }
        if ok {
            join(rule, pivot, pos + 1, total, delta, binding, emit);
        }
        for v in added {
            binding.remove(&v);
        }
    }
}

/// Least Herbrand model of definite `rules` over `facts`.
pub fn datalog_minimal_model(facts: &BTreeSet<Atom>, rules: &[Rule]) -> Result<BTreeSet<Atom>, LogicError> {
    check_rules("datalog", rules, false)?;
    Ok(least_model(facts.iter().cloned().map(SignedAtom::pos), rules).into_iter().map(|l| l.atom).collect())
}
