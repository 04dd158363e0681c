use super::IntegrityConstraint;
use crate::kernel::{BridgeRule, Context, Element, Head, Mcs};
use crate::logics::{flag_logic, flag_token, FlagVariant};

/// Base name of the appended flag context. A numeric suffix is added when
/// the system already uses the name.
pub const FLAG_CONTEXT: &str = "flag";

fn encode(m: &Mcs, ics: &[IntegrityConstraint], variant: FlagVariant) -> Mcs {
    let mut name = FLAG_CONTEXT.to_string();
    let mut k = 1;
    while m.find(&name).is_some() {
        name = format!("{FLAG_CONTEXT}_{k}");
        k += 1;
    }
    let mut flag = Context::new(name, flag_logic(variant));
    for ic in ics {
        flag.bridge_rules.push(BridgeRule::new(Head::plain(Element::Ordinary(flag_token())), ic.body.clone()));
    }
    let mut out = m.clone();
    out.add_context(flag);
    out
}

/// Appends a context that accepts nothing once any constraint body fires:
/// the result is consistent iff `m` weakly satisfies `ics`.
pub fn encode_weak(m: &Mcs, ics: &[IntegrityConstraint]) -> Mcs {
    encode(m, ics, FlagVariant::Weak)
}

/// Appends a context that is only satisfiable once some constraint body
/// fires: for consistent `m`, the result is inconsistent iff `m` strongly
/// satisfies `ics`.
pub fn encode_strong(m: &Mcs, ics: &[IntegrityConstraint]) -> Mcs {
    encode(m, ics, FlagVariant::Strong)
}
