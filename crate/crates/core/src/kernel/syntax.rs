//! Terms, atoms, knowledge-base elements and beliefs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// An immutable, cheaply clonable name: constant, predicate, variable,
/// operation or ordinary token.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

/// Variable assignment produced by grounding or matching.
pub type Binding = BTreeMap<Symbol, Symbol>;

/// `(name, arity)`; `p/2` and `p/3` are distinct predicates.
pub type PredKey = (Symbol, usize);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(Symbol),
    Var(Symbol),
}

impl Term {
    pub fn constant(name: impl AsRef<str>) -> Self {
        Term::Const(Symbol::new(name))
    }

    pub fn var(name: impl AsRef<str>) -> Self {
        Term::Var(Symbol::new(name))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_const(&self) -> Option<&Symbol> {
        match self {
            Term::Const(c) => Some(c),
            Term::Var(_) => None,
        }
    }

    /// Applies `binding`; unbound variables are left in place.
    pub fn substitute(&self, binding: &Binding) -> Term {
        match self {
            Term::Var(v) => match binding.get(v) {
                Some(c) => Term::Const(c.clone()),
                None => self.clone(),
            },
            Term::Const(_) => self.clone(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v.as_str()),
            Term::Const(c) => write_constant(f, c.as_str()),
        }
    }
}

/// True when `name` can be written without quotes in constant position.
pub fn is_bare_constant(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => name.chars().all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

pub(crate) fn write_constant(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_bare_constant(name) {
        f.write_str(name)
    } else {
        write_quoted(f, name)
    }
}

pub(crate) fn write_quoted(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    f.write_str("\"")?;
    for c in name.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// `p(t1,...,tk)`; ground when no argument is a variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<Symbol>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    /// Ground atom from constant names.
    pub fn ground(pred: &str, args: &[&str]) -> Self {
        Atom::new(pred, args.iter().map(|a| Term::constant(a)).collect())
    }

    /// Atom from term strings: uppercase or `_`-prefixed strings become variables.
    pub fn parse_terms(pred: &str, args: &[&str]) -> Self {
        let args = args
            .iter()
            .map(|a| {
                if a.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
                    Term::var(a)
                } else {
                    Term::constant(a)
                }
            })
            .collect();
        Atom::new(pred, args)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn key(&self) -> PredKey {
        (self.pred.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn vars(&self) -> impl Iterator<Item = &Symbol> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.args.iter().filter_map(Term::as_const)
    }

    pub fn substitute(&self, binding: &Binding) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.substitute(binding)).collect(),
        }
    }

    /// Extends `binding` so that this pattern equals the ground atom `fact`.
    pub fn match_ground(&self, fact: &Atom, binding: &mut Binding) -> bool {
        if self.pred != fact.pred || self.args.len() != fact.args.len() {
            return false;
        }
        let mut added: Vec<Symbol> = Vec::new();
        for (pattern, value) in self.args.iter().zip(&fact.args) {
            let value = match value {
                Term::Const(c) => c,
                Term::Var(_) => return undo(binding, &added),
            };
            match pattern {
                Term::Const(c) if c == value => {}
                Term::Const(_) => return undo(binding, &added),
                Term::Var(v) => match binding.get(v) {
                    Some(bound) if bound == value => {}
                    Some(_) => return undo(binding, &added),
                    None => {
                        binding.insert(v.clone(), value.clone());
                        added.push(v.clone());
                    }
                },
            }
        }
        true
    }
}

fn undo(binding: &mut Binding, added: &[Symbol]) -> bool {
    for v in added {
        binding.remove(v);
    }
    false
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pred.as_str())?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Element of a knowledge base, or the payload of a bridge-rule head.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Relational(Atom),
    Ordinary(Symbol),
}

impl Element {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Element::Relational(a) => Some(a),
            Element::Ordinary(_) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom().map_or(true, Atom::is_ground)
    }

    pub fn substitute(&self, binding: &Binding) -> Element {
        match self {
            Element::Relational(a) => Element::Relational(a.substitute(binding)),
            Element::Ordinary(_) => self.clone(),
        }
    }

    pub fn to_belief(&self) -> Belief {
        match self {
            Element::Relational(a) => Belief::Relational(a.clone()),
            Element::Ordinary(t) => Belief::Ordinary(t.clone()),
        }
    }
}

impl From<Atom> for Element {
    fn from(a: Atom) -> Self {
        Element::Relational(a)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Relational(a) => write!(f, "{a}"),
            Element::Ordinary(t) => write_token(f, t),
        }
    }
}

pub(crate) fn write_token(f: &mut fmt::Formatter<'_>, t: &Symbol) -> fmt::Result {
    f.write_str("#")?;
    let s = t.as_str();
    if s == "*" || (!s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')) {
        f.write_str(s)
    } else {
        write_quoted(f, s)
    }
}

/// A belief: relational atom, explicit classical negation of one, or an
/// ordinary token.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Belief {
    Relational(Atom),
    Negated(Atom),
    Ordinary(Symbol),
}

impl Belief {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Belief::Relational(a) | Belief::Negated(a) => Some(a),
            Belief::Ordinary(_) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom().map_or(true, Atom::is_ground)
    }

    pub fn vars(&self) -> Vec<Symbol> {
        self.atom().map(|a| a.vars().cloned().collect()).unwrap_or_default()
    }

    pub fn substitute(&self, binding: &Binding) -> Belief {
        match self {
            Belief::Relational(a) => Belief::Relational(a.substitute(binding)),
            Belief::Negated(a) => Belief::Negated(a.substitute(binding)),
            Belief::Ordinary(_) => self.clone(),
        }
    }

    /// Extends `binding` so that this pattern equals the ground belief `fact`.
    pub fn match_ground(&self, fact: &Belief, binding: &mut Binding) -> bool {
        match (self, fact) {
            (Belief::Relational(p), Belief::Relational(g)) | (Belief::Negated(p), Belief::Negated(g)) => {
                p.match_ground(g, binding)
            }
            (Belief::Ordinary(a), Belief::Ordinary(b)) => a == b,
            _ => false,
        }
    }
}

impl From<Atom> for Belief {
    fn from(a: Atom) -> Self {
        Belief::Relational(a)
    }
}

impl fmt::Debug for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Belief::Relational(a) => write!(f, "{a}"),
            Belief::Negated(a) => write!(f, "-{a}"),
            Belief::Ordinary(t) => write_token(f, t),
        }
    }
}

/// Collects the constants of an element into `out`.
pub(crate) fn element_constants(e: &Element, out: &mut BTreeSet<Symbol>) {
    if let Element::Relational(a) = e {
        out.extend(a.constants().cloned());
    }
}
