//! A relational database as a one-context system, and denials as
//! constraints over it.

use std::fmt;
use std::sync::Arc;

use crate::constraints::IntegrityConstraint;
use crate::error::Result;
use crate::kernel::{Atom, BodyLiteral, Comparison, Context, ContextId, ContextLiteral, Mcs};
use crate::logics::ClosedWorldLogic;

/// `Ctx(DB)`: one closed-world context holding `db` and no bridge rules.
pub fn ctx_of_db(db: impl IntoIterator<Item = Atom>) -> Mcs {
    let mut m = Mcs::new();
    m.add_context(Context::new("db", Arc::new(ClosedWorldLogic)).with_facts(db));
    m
}

/// A denial `A₁ ∧ … ∧ A_k ∧ ¬B₁ ∧ … ∧ ¬B_m → ⊥`, universally closed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Denial {
    pub positive: Vec<Atom>,
    pub negative: Vec<Atom>,
    pub comparisons: Vec<Comparison>,
}

impl fmt::Display for Denial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.positive.iter().map(ToString::to_string).collect();
        parts.extend(self.negative.iter().map(|a| format!("~{a}")));
        parts.extend(self.comparisons.iter().map(|c| format!("{} {} {}", c.left, if c.equal { "=" } else { "!=" }, c.right)));
        write!(f, "{} -> false", parts.join(" & "))
    }
}

/// Parses `p(X,Y) & ~q(X) & X != Y -> false`. Variables start with an
/// uppercase letter or underscore.
pub fn parse_denial(text: &str) -> Result<Denial> {
    crate::frontend::parse_denial(text)
}

/// Literal-by-literal translation onto context 0.
pub fn denial_to_ic(d: &Denial) -> IntegrityConstraint {
    let c = ContextId(0);
    let mut body: Vec<BodyLiteral> = d.positive.iter().map(|a| ContextLiteral::pos(c, a.clone()).into()).collect();
    body.extend(d.negative.iter().map(|a| BodyLiteral::from(ContextLiteral::neg(c, a.clone()))));
    body.extend(d.comparisons.iter().cloned().map(BodyLiteral::Compare));
    IntegrityConstraint::new(body)
}
