#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mcs_core::constraints::IntegrityConstraint;
use mcs_core::kernel::{Atom, BodyLiteral, BridgeRule, Comparison, Context, ContextId, ContextLiteral, Head, Mcs, Term};
use mcs_core::logics::{ChoiceLogic, ClosedWorldLogic, ClosureLogic, ContextLogic, Rule};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "mcs"))
        .collect();
    files.sort();
    files
}

pub fn load_corpus(name: &str) -> (Mcs, Vec<IntegrityConstraint>) {
    let text = std::fs::read_to_string(corpus_dir().join(name)).expect("corpus file");
    mcs_core::frontend::load(&text).expect("corpus file loads")
}

pub fn a(pred: &str, args: &[&str]) -> Atom {
    Atom::parse_terms(pred, args)
}

pub fn pos(c: usize, atom: Atom) -> BodyLiteral {
    ContextLiteral::pos(ContextId(c), atom).into()
}

pub fn neg(c: usize, atom: Atom) -> BodyLiteral {
    ContextLiteral::neg(ContextId(c), atom).into()
}

/// Size limits for random systems.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub contexts: usize,
    pub constants: usize,
    pub rules: usize,
    pub ics: usize,
}

pub const SMALL: Shape = Shape { contexts: 3, constants: 3, rules: 6, ics: 3 };

const CONSTANTS: [&str; 3] = ["a", "b", "c"];
const UNARY: [&str; 2] = ["p", "q"];

/// A literal's atom: unary over `X` or a constant, or the 0-ary `s`.
fn random_atom(rng: &mut ChaCha8Rng, consts: &[&str], var: bool) -> Atom {
    if rng.gen_ratio(1, 5) {
        return Atom::new("s", vec![]);
    }
    let pred = UNARY.choose(rng).unwrap();
    let arg = if var { Term::var("X") } else { Term::constant(consts.choose(rng).unwrap()) };
    Atom::new(*pred, vec![arg])
}

fn random_logic(rng: &mut ChaCha8Rng, consts: &[&str]) -> Arc<dyn ContextLogic> {
    match rng.gen_range(0..4) {
        0 | 1 => Arc::new(ClosedWorldLogic),
        2 => {
            let optional: BTreeSet<Atom> = (0..rng.gen_range(1..=2)).map(|_| random_atom(rng, consts, false)).collect();
            Arc::new(ChoiceLogic::new(optional))
        }
        _ => Arc::new(ClosureLogic::new(vec![Rule::definite(a("q", &["X"]), vec![a("p", &["X"])])]).unwrap()),
    }
}

/// A body of one or two literals. The first is positive; when the rule
/// uses `X`, the first literal binds it, so negated ones stay safe.
fn random_body(rng: &mut ChaCha8Rng, n: usize, consts: &[&str], uses_var: bool) -> Vec<BodyLiteral> {
    let mut body = Vec::new();
    let mut first = Atom::new("s", vec![]);
    while uses_var && first.args.is_empty() {
        first = random_atom(rng, consts, true);
    }
    if !uses_var {
        first = random_atom(rng, consts, false);
    }
    body.push(pos(rng.gen_range(0..n), first));
    if rng.gen_bool(0.6) {
        let var = uses_var && rng.gen_bool(0.5);
        let atom = random_atom(rng, consts, var);
        let c = rng.gen_range(0..n);
        body.push(if rng.gen_bool(0.5) { neg(c, atom) } else { pos(c, atom) });
    }
    body
}

/// A random system within `shape`.
pub fn random_system(rng: &mut ChaCha8Rng, shape: Shape) -> (Mcs, Vec<IntegrityConstraint>) {
    let consts = &CONSTANTS[..shape.constants.clamp(1, 3)];
    let n = rng.gen_range(1..=shape.contexts);
    let mut m = Mcs::new();
    for i in 0..n {
        let facts: Vec<Atom> = (0..rng.gen_range(0..=2)).map(|_| random_atom(rng, consts, false)).collect();
        let logic = random_logic(rng, consts);
        m.add_context(Context::new(format!("c{i}"), logic).with_facts(facts));
    }
    for _ in 0..rng.gen_range(0..=shape.rules) {
        let target = rng.gen_range(0..n);
        let uses_var = rng.gen_bool(0.5);
        let body = random_body(rng, n, consts, uses_var);
        let head = random_atom(rng, consts, uses_var);
        m.context_mut(ContextId(target)).bridge_rules.push(BridgeRule::new(Head::plain(head), body));
    }
    let ics = (0..rng.gen_range(0..=shape.ics))
        .map(|_| {
            let uses_var = rng.gen_bool(0.5);
            let mut body = random_body(rng, n, consts, uses_var);
            if uses_var && rng.gen_ratio(1, 6) {
                body.push(BodyLiteral::Compare(Comparison {
                    left: Term::var("X"),
                    right: Term::constant(consts[0]),
                    equal: rng.gen_bool(0.5),
                }));
            }
            IntegrityConstraint::new(body)
        })
        .collect();
    (m, ics)
}

/// Ground atoms over `preds` (name, arity) and `consts`.
pub fn herbrand_base(preds: &[(&str, usize)], consts: &[&str]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, arity) in preds {
        let mut tuples: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..*arity {
            tuples = tuples.into_iter().flat_map(|t| consts.iter().map(move |c| [t.clone(), vec![*c]].concat())).collect();
        }
        out.extend(tuples.into_iter().map(|t| Atom::ground(p, &t)));
    }
    out
}
