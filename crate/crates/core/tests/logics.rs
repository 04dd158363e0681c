mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{a, herbrand_base};
use mcs_core::kernel::{Atom, Belief, BeliefSet, Element, Kb, Symbol};
use mcs_core::logics::{
    closure_acc, datalog_minimal_model, flag_logic, flag_token, relational_db_acc, ClosureLogic, ContextLogic, DatalogLogic, FlagVariant,
    Rule, SignedAtom,
};
use mcs_core::LogicError;

fn kb(atoms: &[Atom]) -> Kb {
    atoms.iter().cloned().map(Element::Relational).collect()
}

#[test]
fn closed_world_database() {
    let sets = relational_db_acc(&kb(&[a("R", &["a", "b"]), a("R", &["b", "c"])])).unwrap();
    assert_eq!(sets.len(), 1);
    assert!(sets[0].contains(&Belief::Relational(a("R", &["a", "b"]))));
    assert!(sets[0].contains(&Belief::Negated(a("R", &["a", "c"]))));
    let empty = relational_db_acc(&Kb::new()).unwrap();
    assert!(empty[0].contains(&Belief::Negated(a("R", &["a", "a"]))));
    assert!(relational_db_acc(&kb(&[a("p", &["a"])])).unwrap()[0].contains(&Belief::Negated(a("p", &["b"]))));
    let token: Kb = [Element::Ordinary(Symbol::new("t"))].into();
    assert!(matches!(relational_db_acc(&token), Err(LogicError::RejectedElement { .. })));
}

#[test]
fn datalog_rejects_negation() {
    let mut r = Rule::definite(a("p", &["X"]), vec![a("q", &["X"])]);
    r.naf.push(a("s", &["X"]));
    assert!(matches!(DatalogLogic::new(vec![r]), Err(LogicError::Unsupported { .. })));
    let classical = Rule { head: SignedAtom::neg(a("p", &["X"])), body: vec![SignedAtom::pos(a("q", &["X"]))], naf: vec![] };
    assert!(DatalogLogic::new(vec![classical]).is_err());
}

#[test]
fn isa_view() {
    let rules = vec![
        Rule::definite(a("sub", &["A", "B"]), vec![a("isa", &["A", "B"])]),
        Rule::definite(a("sub", &["A", "C"]), vec![a("isa", &["A", "B"]), a("sub", &["B", "C"])]),
    ];
    let facts: BTreeSet<Atom> = [a("isa", &["array", "list"]), a("isa", &["list", "collection"])].into();
    let model = datalog_minimal_model(&facts, &rules).unwrap();
    assert!(model.contains(&a("sub", &["array", "collection"])));
    assert_eq!(datalog_minimal_model(&facts, &[]).unwrap(), facts);
}

/// Least model as the intersection of every model over the Herbrand base.
fn subset_oracle(facts: &BTreeSet<Atom>, rules: &[Rule], base: &[Atom]) -> BTreeSet<Atom> {
    let consts: BTreeSet<Symbol> = base.iter().flat_map(|x| x.constants().cloned()).collect();
    let is_model = |m: &BTreeSet<Atom>| {
        facts.is_subset(m)
            && rules.iter().all(|r| {
                let vars: Vec<Symbol> =
                    r.body.iter().flat_map(|l| l.atom.vars().cloned()).collect::<BTreeSet<_>>().into_iter().collect();
                let mut ok = true;
                let n = vars.len();
                let vals: Vec<&Symbol> = consts.iter().collect();
                for idx in 0..vals.len().pow(n as u32) {
                    let mut b = mcs_core::kernel::Binding::new();
                    let mut k = idx;
                    for v in &vars {
                        b.insert(v.clone(), vals[k % vals.len()].clone());
                        k /= vals.len();
                    }
                    if r.body.iter().all(|l| m.contains(&l.atom.substitute(&b))) && !m.contains(&r.head.atom.substitute(&b)) {
                        ok = false;
                    }
                }
                ok
            })
    };
    let mut best: Option<BTreeSet<Atom>> = None;
    for mask in 0u64..1 << base.len() {
        let m: BTreeSet<Atom> = base.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, x)| x.clone()).collect();
        if is_model(&m) {
            best = Some(match best {
                None => m,
                Some(b) => b.intersection(&m).cloned().collect(),
            });
        }
    }
    best.unwrap()
}

fn rule_strategy() -> impl Strategy<Value = Rule> {
    let atom = |pred: &'static [&'static str]| {
        (prop::sample::select(pred.to_vec()), prop::sample::select(vec!["X", "Y", "c0", "c3"]))
            .prop_map(|(p, t)| a(p, &[t]))
    };
    (atom(&["p", "q", "r"]), prop::collection::vec(atom(&["p", "q", "r"]), 1..3)).prop_filter_map("range restricted", |(h, body)| {
        let bound: BTreeSet<&Symbol> = body.iter().flat_map(|b| b.vars()).collect();
        let ok = h.vars().all(|v| bound.contains(v));
        ok.then(|| Rule::definite(h.clone(), body.clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn datalog_matches_subset_oracle(
        rules in prop::collection::vec(rule_strategy(), 0..=5),
        facts in prop::collection::btree_set((prop::sample::select(vec!["p", "q", "r"]), prop::sample::select(vec!["c0", "c1", "c2"])), 0..4),
    ) {
        let facts: BTreeSet<Atom> = facts.into_iter().map(|(p, c)| a(p, &[c])).collect();
        let base = herbrand_base(&[("p", 1), ("q", 1), ("r", 1)], &["c0", "c1", "c2", "c3"]);
        let expected = subset_oracle(&facts, &rules, &base);
        prop_assert_eq!(datalog_minimal_model(&facts, &rules).unwrap(), expected);
    }
}

#[test]
fn closure_is_open_world() {
    let sets = closure_acc(&kb(&[a("person", &["alice"])]), &[]).unwrap();
    assert_eq!(sets, vec![BeliefSet::open([Belief::Relational(a("person", &["alice"]))])]);
    assert!(!sets[0].contains(&Belief::Relational(a("hasCPR", &["alice", "n1"]))));
    assert!(!sets[0].contains(&Belief::Negated(a("hasCPR", &["alice", "n1"]))));
    assert_eq!(closure_acc(&Kb::new(), &[]).unwrap(), vec![BeliefSet::empty()]);
}

/// Naive saturation: apply every axiom instance until nothing changes.
fn saturate(facts: &[Atom], unary_axioms: &[(&str, &str)]) -> BTreeSet<Atom> {
    let mut out: BTreeSet<Atom> = facts.iter().cloned().collect();
    loop {
        let mut next = out.clone();
        for x in &out {
            for (from, to) in unary_axioms {
                if x.pred.as_str() == *from {
                    next.insert(Atom::new(*to, x.args.clone()));
                }
            }
        }
        if next == out {
            return out;
        }
        out = next;
    }
}

#[test]
fn closure_matches_saturation() {
    let axioms = [("p", "q"), ("q", "r"), ("s", "p")];
    let rules: Vec<Rule> = axioms.iter().map(|(f, t)| Rule::definite(a(t, &["X"]), vec![a(f, &["X"])])).collect();
    let facts = [a("p", &["a"]), a("s", &["b"])];
    let logic = ClosureLogic::new(rules).unwrap();
    let got = logic.acc(&kb(&facts)).unwrap();
    let expected = BeliefSet::open(saturate(&facts, &axioms).into_iter().map(Belief::Relational));
    assert_eq!(got, vec![expected]);
}

#[test]
fn closure_detects_contradiction() {
    let axiom = Rule { head: SignedAtom::neg(a("q", &["X"])), body: vec![SignedAtom::pos(a("p", &["X"]))], naf: vec![] };
    assert!(closure_acc(&kb(&[a("p", &["a"]), a("q", &["a"])]), &[axiom]).unwrap().is_empty());
    let mut naf = Rule::definite(a("q", &["X"]), vec![a("p", &["X"])]);
    naf.naf.push(a("r", &["X"]));
    assert!(ClosureLogic::new(vec![naf]).is_err());
}

#[test]
fn flag_logics() {
    let star: Kb = [Element::Ordinary(flag_token())].into();
    let weak = flag_logic(FlagVariant::Weak);
    let strong = flag_logic(FlagVariant::Strong);
    assert_eq!(weak.acc(&Kb::new()).unwrap(), vec![BeliefSet::empty()]);
    assert!(weak.acc(&star).unwrap().is_empty());
    assert!(strong.acc(&Kb::new()).unwrap().is_empty());
    assert_eq!(strong.acc(&star).unwrap(), vec![BeliefSet::open([Belief::Ordinary(flag_token())])]);
}
