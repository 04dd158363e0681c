use std::collections::BTreeSet;

use super::datalog::{check_rules, least_model, Rule, SignedAtom};
use super::{Bounds, ContextLogic, LogicSource};
use crate::error::LogicError;
use crate::kernel::{Atom, Belief, BeliefSet, Element, Kb, Symbol};

fn relational_atoms(logic: &str, kb: &Kb) -> Result<Vec<Atom>, LogicError> {
    kb.iter()
        .map(|e| match e {
            Element::Relational(a) => Ok(a.clone()),
            Element::Ordinary(_) => Err(LogicError::RejectedElement { logic: logic.into(), element: e.to_string() }),
        })
        .collect()
}

/// Closed-world completion: the only acceptable belief set of `kb` is
/// `kb` together with the negation of every atom outside it.
pub fn relational_db_acc(kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
    Ok(vec![BeliefSet::closed(relational_atoms("db", kb)?)])
}

/// A relational database under the closed-world assumption.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedWorldLogic;

impl ContextLogic for ClosedWorldLogic {
    fn kind(&self) -> &str {
        "db"
    }

    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
        relational_db_acc(kb)
    }

    fn bounds(&self, lower: &Kb, upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Known {
            lower: BeliefSet::closed(relational_atoms("db", lower)?),
            upper: BeliefSet::closed(relational_atoms("db", upper)?),
        })
    }

    fn is_monotone_singleton(&self) -> bool {
        true
    }

    fn derives(&self) -> bool {
        false
    }

    fn source(&self) -> Option<LogicSource> {
        Some(LogicSource::ClosedWorld)
    }
}

/// Positive Datalog: the belief set is the least model of the kb facts
/// under the context's rules. Ordinary tokens pass through unchanged.
#[derive(Clone, Debug)]
pub struct DatalogLogic {
    rules: Vec<Rule>,
}

impl DatalogLogic {
    pub fn new(rules: Vec<Rule>) -> Result<Self, LogicError> {
        check_rules("datalog", &rules, false)?;
        Ok(DatalogLogic { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn model(&self, kb: &Kb) -> BeliefSet {
        let facts = kb.iter().filter_map(|e| e.atom().cloned()).map(SignedAtom::pos);
        let tokens = kb.iter().filter_map(|e| match e {
            Element::Ordinary(t) => Some(Belief::Ordinary(t.clone())),
            Element::Relational(_) => None,
        });
        let model = least_model(facts, &self.rules).into_iter().map(|l| Belief::Relational(l.atom));
        BeliefSet::open(model.chain(tokens))
    }
}

impl ContextLogic for DatalogLogic {
    fn kind(&self) -> &str {
        "datalog"
    }

    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
        Ok(vec![self.model(kb)])
    }

    fn bounds(&self, lower: &Kb, upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Known { lower: self.model(lower), upper: self.model(upper) })
    }

    fn is_monotone_singleton(&self) -> bool {
        true
    }

    fn constants(&self) -> BTreeSet<Symbol> {
        self.rules.iter().flat_map(Rule::constants).cloned().collect()
    }

    fn source(&self) -> Option<LogicSource> {
        Some(LogicSource::Datalog(self.rules.clone()))
    }
}

/// Deductive closure of `kb` under Horn axioms whose literals may carry
/// classical negation. Returns no belief set when the closure contains an
/// atom and its negation. The result is open-world: an atom may be
/// neither derived nor refuted.
pub fn closure_acc(kb: &Kb, axioms: &[Rule]) -> Result<Vec<BeliefSet>, LogicError> {
    check_rules("closure", axioms, true)?;
    let closure = saturate(kb, axioms);
    let contradictory = closure.beliefs().iter().any(|b| match b {
        Belief::Negated(a) => closure.contains(&Belief::Relational(a.clone())),
        _ => false,
    });
    Ok(if contradictory { Vec::new() } else { vec![closure] })
}

fn saturate(kb: &Kb, axioms: &[Rule]) -> BeliefSet {
    let facts = kb.iter().filter_map(|e| e.atom().cloned()).map(SignedAtom::pos);
    let tokens = kb.iter().filter_map(|e| match e {
        Element::Ordinary(t) => Some(Belief::Ordinary(t.clone())),
        Element::Relational(_) => None,
    });
    let derived = least_model(facts, axioms).into_iter().map(|l| {
        if l.negative {
            Belief::Negated(l.atom)
        } else {
            Belief::Relational(l.atom)
        }
    });
    BeliefSet::open(derived.chain(tokens))
}

/// Ontology-like context: known consequences under Horn axioms.
#[derive(Clone, Debug)]
pub struct ClosureLogic {
    axioms: Vec<Rule>,
}

impl ClosureLogic {
    pub fn new(axioms: Vec<Rule>) -> Result<Self, LogicError> {
        check_rules("closure", &axioms, true)?;
        Ok(ClosureLogic { axioms })
    }
}

impl ContextLogic for ClosureLogic {
    fn kind(&self) -> &str {
        "closure"
    }

    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
        closure_acc(kb, &self.axioms)
    }

    fn bounds(&self, lower: &Kb, upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Known { lower: saturate(lower, &self.axioms), upper: saturate(upper, &self.axioms) })
    }

    fn is_monotone_singleton(&self) -> bool {
        true
    }

    fn constants(&self) -> BTreeSet<Symbol> {
        self.axioms.iter().flat_map(Rule::constants).cloned().collect()
    }

    fn source(&self) -> Option<LogicSource> {
        Some(LogicSource::Closure(self.axioms.clone()))
    }
}

/// Finite model enumeration: every belief set `kb ∪ X` with `X` a subset
/// of the declared optional atoms. A bounded stand-in for logics whose kb
/// admits several models.
#[derive(Clone, Debug)]
pub struct ChoiceLogic {
    optional: BTreeSet<Atom>,
}

impl ChoiceLogic {
    pub fn new(optional: BTreeSet<Atom>) -> Self {
        ChoiceLogic { optional }
    }
}

impl ContextLogic for ChoiceLogic {
    fn kind(&self) -> &str {
        "choice"
    }

    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
        let base: Vec<Belief> = kb.iter().map(Element::to_belief).collect();
        let free: Vec<&Atom> = self.optional.iter().filter(|a| !kb.contains(&Element::Relational((*a).clone()))).collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for size in 0..=free.len() {
            for pick in itertools::Itertools::combinations(free.iter(), size) {
                let extra = pick.into_iter().map(|a| Belief::Relational((*a).clone()));
                out.push(BeliefSet::open(base.iter().cloned().chain(extra)));
            }
        }
        Ok(out)
    }

    fn bounds(&self, lower: &Kb, upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Known {
            lower: BeliefSet::open(lower.iter().map(Element::to_belief)),
            upper: BeliefSet::open(
                upper.iter().map(Element::to_belief).chain(self.optional.iter().cloned().map(Belief::Relational)),
            ),
        })
    }

    fn derives(&self) -> bool {
        false
    }

    fn constants(&self) -> BTreeSet<Symbol> {
        self.optional.iter().flat_map(|a| a.constants().cloned()).collect()
    }

    fn source(&self) -> Option<LogicSource> {
        Some(LogicSource::Choice(self.optional.clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlagVariant {
    /// `ACC(∅) = {∅}`, `ACC({*}) = ∅`.
    Weak,
    /// `ACC(∅) = ∅`, `ACC({*}) = {{*}}`.
    Strong,
}

#[derive(Clone, Copy, Debug)]
pub struct FlagLogic {
    variant: FlagVariant,
}

impl FlagLogic {
    pub fn new(variant: FlagVariant) -> Self {
        FlagLogic { variant }
    }

    pub fn variant(&self) -> FlagVariant {
        self.variant
    }
}

impl ContextLogic for FlagLogic {
    fn kind(&self) -> &str {
        match self.variant {
            FlagVariant::Weak => "flag_weak",
            FlagVariant::Strong => "flag_strong",
        }
    }

    fn acc(&self, kb: &Kb) -> Result<Vec<BeliefSet>, LogicError> {
        let star = Element::Ordinary(super::flag_token());
        if let Some(other) = kb.iter().find(|e| **e != star) {
            return Err(LogicError::RejectedElement { logic: self.kind().into(), element: other.to_string() });
        }
        let flagged = kb.contains(&star);
        Ok(match (self.variant, flagged) {
            (FlagVariant::Weak, false) => vec![BeliefSet::empty()],
            (FlagVariant::Weak, true) => vec![],
            (FlagVariant::Strong, false) => vec![],
            (FlagVariant::Strong, true) => vec![BeliefSet::open([Belief::Ordinary(super::flag_token())])],
        })
    }

    fn bounds(&self, _lower: &Kb, _upper: &Kb) -> Result<Bounds, LogicError> {
        Ok(Bounds::Known {
            lower: BeliefSet::empty(),
            upper: BeliefSet::open([Belief::Ordinary(super::flag_token())]),
        })
    }

    fn derives(&self) -> bool {
        false
    }

    fn source(&self) -> Option<LogicSource> {
        Some(LogicSource::Flag(self.variant))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb(atoms: &[Atom]) -> Kb {
        atoms.iter().cloned().map(Element::Relational).collect()
    }

    #[test]
    fn closed_world_example_store() {
        let sets = relational_db_acc(&kb(&[Atom::ground("R", &["a", "b"]), Atom::ground("R", &["b", "c"])])).unwrap();
        assert_eq!(sets.len(), 1);
        assert!(sets[0].contains(&Belief::Relational(Atom::ground("R", &["a", "b"]))));
        assert!(!sets[0].contains(&Belief::Relational(Atom::ground("R", &["a", "c"]))));
        assert!(sets[0].contains(&Belief::Negated(Atom::ground("R", &["a", "c"]))));
    }

    #[test]
    fn closed_world_empty_and_negative_queries() {
        let empty = relational_db_acc(&Kb::new()).unwrap();
        assert!(empty[0].contains(&Belief::Negated(Atom::ground("p", &["a"]))));
        let p = relational_db_acc(&kb(&[Atom::ground("p", &["a"])])).unwrap();
        assert!(p[0].contains(&Belief::Negated(Atom::ground("p", &["b"]))));
    }

    #[test]
    fn closed_world_rejects_ordinary_elements() {
        let kb: Kb = [Element::Ordinary(Symbol::new("tok"))].into();
        assert!(matches!(relational_db_acc(&kb), Err(LogicError::RejectedElement { .. })));
    }

    #[test]
    fn closure_is_open_world() {
        let sets = closure_acc(&kb(&[Atom::ground("person", &["alice"])]), &[]).unwrap();
        assert_eq!(sets[0].len(), 1);
        let has = Belief::Relational(Atom::ground("hasCPR", &["alice", "n"]));
        assert!(!sets[0].contains(&has));
        assert!(!sets[0].contains(&Belief::Negated(Atom::ground("hasCPR", &["alice", "n"]))));
        assert_eq!(closure_acc(&Kb::new(), &[]).unwrap(), vec![BeliefSet::empty()]);
    }

    #[test]
    fn closure_applies_axioms_and_detects_contradiction() {
        let p_to_q = Rule::definite(Atom::parse_terms("q", &["X"]), vec![Atom::parse_terms("p", &["X"])]);
        let sets = closure_acc(&kb(&[Atom::ground("p", &["a"])]), std::slice::from_ref(&p_to_q)).unwrap();
        assert_eq!(
            sets[0],
            BeliefSet::open([Belief::Relational(Atom::ground("p", &["a"])), Belief::Relational(Atom::ground("q", &["a"]))])
        );
        let not_q = Rule {
            head: SignedAtom::neg(Atom::parse_terms("q", &["X"])),
            body: vec![SignedAtom::pos(Atom::parse_terms("p", &["X"]))],
            naf: vec![],
        };
        assert!(closure_acc(&kb(&[Atom::ground("p", &["a"])]), &[p_to_q, not_q]).unwrap().is_empty());
    }

    #[test]
    fn closure_rejects_non_horn() {
        let mut r = Rule::definite(Atom::parse_terms("q", &["X"]), vec![Atom::parse_terms("p", &["X"])]);
        r.naf.push(Atom::parse_terms("r", &["X"]));
        assert!(ClosureLogic::new(vec![r]).is_err());
    }

    #[test]
    fn flag_variants() {
        let star: Kb = [Element::Ordinary(super::super::flag_token())].into();
        let weak = FlagLogic::new(FlagVariant::Weak);
        let strong = FlagLogic::new(FlagVariant::Strong);
        assert_eq!(weak.acc(&Kb::new()).unwrap(), vec![BeliefSet::empty()]);
        assert!(weak.acc(&star).unwrap().is_empty());
        assert!(strong.acc(&Kb::new()).unwrap().is_empty());
        assert_eq!(strong.acc(&star).unwrap().len(), 1);
        assert!(weak.acc(&kb(&[Atom::ground("p", &[])])).is_err());
    }

    #[test]
    fn choice_enumerates_supersets() {
        let logic = ChoiceLogic::new([Atom::ground("R", &["a", "c"]), Atom::ground("R", &["c", "a"])].into());
        let sets = logic.acc(&kb(&[Atom::ground("R", &["a", "b"])])).unwrap();
        assert_eq!(sets.len(), 4);
        assert_eq!(sets[0].len(), 1);
        let again = logic.acc(&kb(&[Atom::ground("R", &["a", "c"])])).unwrap();
        assert_eq!(again.len(), 2);
    }
}
