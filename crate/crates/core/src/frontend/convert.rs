//! Between documents and systems.

use std::collections::{BTreeMap, BTreeSet};

use super::document::{BodyItem, BridgeDecl, ContextDecl, Document, DomainDecl, IcDecl, ManageDecl, SignatureDecl};
use super::lexer::{Diagnostic, Pos};
use crate::constraints::IntegrityConstraint;
use crate::error::{Error, Result};
use crate::grounding::check_constraint_safety;
use crate::kernel::{validate_mcs, Belief, BodyLiteral, BridgeRule, Context, ContextId, ContextLiteral, Mcs, Signature, Violation};
use crate::logics::{FlagVariant, LogicSource};
use crate::repair::{Management, StandardManagement};

fn logic_source(decl: &ContextDecl) -> Result<LogicSource, Diagnostic> {
    let kind = decl.kind.as_str();
    let refuse = |what: &str| Err(Diagnostic::new(decl.pos, format!("context {}: {kind} contexts do not take {what}", decl.name)));
    if !decl.rules.is_empty() && !matches!(kind, "datalog" | "closure") {
        return refuse("rules");
    }
    if !decl.choices.is_empty() && kind != "choice" {
        return refuse("choice declarations");
    }
    Ok(match kind {
        "db" => LogicSource::ClosedWorld,
        "datalog" => LogicSource::Datalog(decl.rules.clone()),
        "closure" => LogicSource::Closure(decl.rules.clone()),
        "choice" => LogicSource::Choice(decl.choices.iter().cloned().collect()),
        "flag_weak" => LogicSource::Flag(FlagVariant::Weak),
        "flag_strong" => LogicSource::Flag(FlagVariant::Strong),
        other => return Err(Diagnostic::new(decl.pos, format!("unknown context kind `{other}`"))),
    })
}

fn body(items: &[BodyItem], ids: &BTreeMap<&str, ContextId>, pos: Pos) -> Result<Vec<BodyLiteral>, Diagnostic> {
    items
        .iter()
        .map(|item| match item {
            BodyItem::Literal { context, belief, negated } => {
                let id = ids.get(context.as_str()).ok_or_else(|| Diagnostic::new(pos, format!("unknown context `{context}`")))?;
                Ok(BodyLiteral::Context(ContextLiteral { context: *id, belief: belief.clone(), negated: *negated }))
            }
            BodyItem::Compare(c) => Ok(BodyLiteral::Compare(c.clone())),
        })
        .collect()
}

fn violation_site(v: &Violation) -> Option<(ContextId, Option<usize>)> {
    use crate::kernel::Location;
    let loc = |l: &Location| match l {
        Location::Kb(c) => (*c, None),
        Location::BridgeRule { context, rule } => (*context, Some(*rule)),
    };
    Some(match v {
        Violation::ArityMismatch { location, .. } | Violation::DanglingContext { location, .. } => loc(location),
        Violation::SignatureOverlap { context, .. } | Violation::NonGroundElement { context, .. } => (*context, None),
        Violation::UnsafeRule { context, rule, .. }
        | Violation::UnboundHeadVariable { context, rule, .. }
        | Violation::UnknownOperation { context, rule, .. } => (*context, Some(*rule)),
    })
}

/// Builds the system and its constraints. Fails with a positioned
/// diagnostic on unknown names, rejected logics and structural violations.
pub fn to_mcs(doc: &Document) -> Result<(Mcs, Vec<IntegrityConstraint>), Diagnostic> {
    let mut ids: BTreeMap<&str, ContextId> = BTreeMap::new();
    let mut m = Mcs::new();
    for decl in &doc.contexts {
        if ids.contains_key(decl.name.as_str()) {
            return Err(Diagnostic::new(decl.pos, format!("duplicate context `{}`", decl.name)));
        }
        let logic = logic_source(decl)?
            .build()
            .map_err(|e| Diagnostic::new(decl.pos, format!("context {}: {e}", decl.name)))?;
        let mut ctx = Context::new(decl.name.clone(), logic).with_kb(decl.facts.iter().cloned());
        ctx.signature = decl.signature.as_ref().map(|s| Signature {
            kb_predicates: s.kb.iter().cloned().collect(),
            belief_predicates: s.belief.iter().cloned().collect(),
            universe: s.universe.iter().cloned().collect(),
        });
        ids.insert(&decl.name, m.add_context(ctx));
    }
    let resolve = |n: &str, pos: Pos| ids.get(n).copied().ok_or_else(|| Diagnostic::new(pos, format!("unknown context `{n}`")));

    let mut rule_pos: BTreeMap<(ContextId, usize), Pos> = BTreeMap::new();
    for b in &doc.bridges {
        let target = resolve(&b.target, b.pos)?;
        let rule = BridgeRule::new(b.head.clone(), body(&b.body, &ids, b.pos)?);
        let ctx = m.context_mut(target);
        rule_pos.insert((target, ctx.bridge_rules.len()), b.pos);
        ctx.bridge_rules.push(rule);
    }
    for mg in &doc.manages {
        let c = resolve(&mg.context, mg.pos)?;
        if m.context(c).management.is_some() {
            return Err(Diagnostic::new(mg.pos, format!("context `{}` is managed twice", mg.context)));
        }
        let function = StandardManagement { keys: mg.keys.iter().cloned().collect() };
        m.context_mut(c).management = Some(Management::standard(mg.ops.iter().cloned(), function));
    }
    for d in &doc.domains {
        let importer = resolve(&d.importer, d.pos)?;
        let source = resolve(&d.source, d.pos)?;
        m.context_mut(importer).import_domains.insert(source, d.constants.iter().cloned().collect());
    }
    let mut ics = Vec::new();
    for ic in &doc.ics {
        let c = IntegrityConstraint::new(body(&ic.body, &ids, ic.pos)?);
        if c.body.iter().filter_map(BodyLiteral::as_context).any(|l| matches!(l.belief, Belief::Ordinary(_))) {
            return Err(Diagnostic::new(ic.pos, "integrity constraints may only query relational beliefs"));
        }
        check_constraint_safety(&c).map_err(|e| Diagnostic::new(ic.pos, e.to_string()))?;
        ics.push(c);
    }

    let report = validate_mcs(&m);
    if let Some(v) = report.violations.first() {
        let pos = match violation_site(v) {
            Some((c, Some(rule))) => rule_pos.get(&(c, rule)).copied(),
            Some((c, None)) => doc.contexts.get(c.0).map(|d| d.pos),
            None => None,
        };
        return Err(Diagnostic::new(pos.unwrap_or_default(), v.to_string()));
    }
    Ok((m, ics))
}

/// Parses and builds in one step.
pub fn load(text: &str) -> Result<(Mcs, Vec<IntegrityConstraint>)> {
    let doc = super::parse(text)?;
    Ok(to_mcs(&doc)?)
}

fn items(lits: &[BodyLiteral], m: &Mcs) -> Vec<BodyItem> {
    lits.iter()
        .map(|l| match l {
            BodyLiteral::Context(l) => BodyItem::Literal {
                context: m.contexts.get(l.context.0).map_or_else(|| l.context.to_string(), |c| c.name.clone()),
                belief: l.belief.clone(),
                negated: l.negated,
            },
            BodyLiteral::Compare(c) => BodyItem::Compare(c.clone()),
        })
        .collect()
}

/// The document describing `m` and `ics`, in canonical order. Fails when
/// a context uses a logic or management function without a text form.
pub fn from_mcs(m: &Mcs, ics: &[IntegrityConstraint]) -> Result<Document> {
    let mut doc = Document::default();
    let names: BTreeSet<&str> = m.contexts.iter().map(|c| c.name.as_str()).collect();
    if names.len() != m.len() {
        return Err(Error::Validation("context names must be unique to be written out".into()));
    }
    let pos = Pos::default();
    for ctx in &m.contexts {
        let source = ctx
            .logic
            .source()
            .ok_or_else(|| Error::Validation(format!("context {} uses a {} logic with no text form", ctx.name, ctx.logic.kind())))?;
        let (rules, choices) = match &source {
            LogicSource::Datalog(r) | LogicSource::Closure(r) => (r.clone(), Vec::new()),
            LogicSource::Choice(c) => (Vec::new(), c.iter().cloned().collect()),
            _ => (Vec::new(), Vec::new()),
        };
        doc.contexts.push(ContextDecl {
            name: ctx.name.clone(),
            kind: source.kind().to_string(),
            signature: ctx.signature.as_ref().map(|s| SignatureDecl {
                kb: s.kb_predicates.iter().cloned().collect(),
                belief: s.belief_predicates.iter().cloned().collect(),
                universe: s.universe.iter().cloned().collect(),
            }),
            facts: ctx.kb.iter().cloned().collect(),
            choices,
            rules,
            pos,
        });
        for r in &ctx.bridge_rules {
            doc.bridges.push(BridgeDecl { target: ctx.name.clone(), head: r.head.clone(), body: items(&r.body, m), pos });
        }
        if let Some(mg) = &ctx.management {
            let standard = mg
                .function
                .standard()
                .ok_or_else(|| Error::Validation(format!("context {} uses a custom management function", ctx.name)))?;
            doc.manages.push(ManageDecl {
                context: ctx.name.clone(),
                ops: mg.ops.iter().cloned().collect(),
                keys: standard.keys.iter().map(|(k, n)| (k.clone(), *n)).collect(),
                pos,
            });
        }
        for (source, constants) in &ctx.import_domains {
            doc.domains.push(DomainDecl {
                importer: ctx.name.clone(),
                source: m.context(*source).name.clone(),
                constants: constants.iter().cloned().collect(),
                pos,
            });
        }
    }
    doc.ics = ics.iter().map(|ic| IcDecl { body: items(&ic.body, m), pos }).collect();
    Ok(doc)
}

/// Text form of a constraint with context names.
pub fn format_ic(m: &Mcs, ic: &IntegrityConstraint) -> String {
    let mut s = String::from(":- ");
    super::document::write_body(&mut s, &items(&ic.body, m)).expect("string write");
    s.push('.');
    s
}
