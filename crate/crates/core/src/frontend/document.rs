//! Syntax tree of the text format and its canonical serialization.

use std::fmt::{self, Write};

use super::lexer::Pos;
use crate::kernel::{is_bare_constant, Atom, Belief, Comparison, Element, Head, PredKey, Symbol};
use crate::logics::Rule;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub contexts: Vec<ContextDecl>,
    pub bridges: Vec<BridgeDecl>,
    pub ics: Vec<IcDecl>,
    pub manages: Vec<ManageDecl>,
    pub domains: Vec<DomainDecl>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignatureDecl {
    pub kb: Vec<PredKey>,
    pub belief: Vec<PredKey>,
    pub universe: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextDecl {
    pub name: String,
    pub kind: String,
    pub signature: Option<SignatureDecl>,
    pub facts: Vec<Element>,
    pub choices: Vec<Atom>,
    pub rules: Vec<Rule>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BodyItem {
    Literal { context: String, belief: Belief, negated: bool },
    Compare(Comparison),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeDecl {
    pub target: String,
    pub head: Head,
    pub body: Vec<BodyItem>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcDecl {
    pub body: Vec<BodyItem>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManageDecl {
    pub context: String,
    pub ops: Vec<Symbol>,
    pub keys: Vec<(PredKey, usize)>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainDecl {
    pub importer: String,
    pub source: String,
    pub constants: Vec<Symbol>,
    pub pos: Pos,
}

/// Context names are written bare when they lex as one identifier.
pub fn write_name(out: &mut impl Write, name: &str) -> fmt::Result {
    let bare = !name.is_empty()
        && name.chars().all(|c| c.is_alphanumeric() || c == '_')
        && !name.chars().all(|c| c.is_ascii_digit())
        && !matches!(name, "not" | "kind" | "from");
    if bare {
        out.write_str(name)
    } else {
        write!(out, "\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

fn name(n: &str) -> String {
    let mut s = String::new();
    write_name(&mut s, n).expect("string write");
    s
}

fn constant(c: &Symbol) -> String {
    if is_bare_constant(c.as_str()) {
        c.to_string()
    } else {
        format!("\"{}\"", c.as_str().replace('\\', "\\\\").replace('"', "\\\""))
    }
}

pub fn write_comparison(out: &mut impl Write, c: &Comparison) -> fmt::Result {
    write!(out, "{} {} {}", c.left, if c.equal { "=" } else { "!=" }, c.right)
}

pub fn write_body(out: &mut impl Write, body: &[BodyItem]) -> fmt::Result {
    for (k, item) in body.iter().enumerate() {
        if k > 0 {
            out.write_str(", ")?;
        }
        match item {
            BodyItem::Literal { context, belief, negated } => {
                if *negated {
                    out.write_str("not ")?;
                }
                write_name(out, context)?;
                write!(out, ":{belief}")?;
            }
            BodyItem::Compare(c) => write_comparison(out, c)?,
        }
    }
    Ok(())
}

fn preds(list: &[PredKey]) -> String {
    list.iter().map(|(p, n)| format!("{p}/{n}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sections: Vec<String> = Vec::new();
        for c in &self.contexts {
            let mut s = String::new();
            writeln!(s, "context {} kind {} {{", name(&c.name), c.kind)?;
            if let Some(sig) = &c.signature {
                let mut parts = Vec::new();
                if !sig.kb.is_empty() {
                    parts.push(format!("kb: {};", preds(&sig.kb)));
                }
                if !sig.belief.is_empty() {
                    parts.push(format!("belief: {};", preds(&sig.belief)));
                }
                if !sig.universe.is_empty() {
                    parts.push(format!("universe: {};", sig.universe.iter().map(constant).collect::<Vec<_>>().join(", ")));
                }
                writeln!(s, "  signature {{ {} }}", parts.join(" "))?;
            }
            for e in &c.facts {
                writeln!(s, "  {e}.")?;
            }
            for a in &c.choices {
                writeln!(s, "  choice {a}.")?;
            }
            for r in &c.rules {
                if r.body.is_empty() && r.naf.is_empty() && !r.head.negative {
                    // Keeps a bodiless rule distinct from a fact.
                    writeln!(s, "  {} :- .", r.head)?;
                } else {
                    writeln!(s, "  {r}")?;
                }
            }
            s.push('}');
            sections.push(s);
        }
        let mut lines = Vec::new();
        for b in &self.bridges {
            let mut s = format!("bridge {} : {}", name(&b.target), b.head);
            if !b.body.is_empty() {
                s.push_str(" :- ");
                write_body(&mut s, &b.body)?;
            }
            s.push('.');
            lines.push(s);
        }
        if !lines.is_empty() {
            sections.push(lines.join("\n"));
        }
        let mut lines = Vec::new();
        for ic in &self.ics {
            let mut s = String::from("ic :-");
            if !ic.body.is_empty() {
                s.push(' ');
                write_body(&mut s, &ic.body)?;
            }
            s.push('.');
            lines.push(s);
        }
        if !lines.is_empty() {
            sections.push(lines.join("\n"));
        }
        let mut lines = Vec::new();
        for m in &self.manages {
            let mut s = format!("manage {} {{ ops {};", name(&m.context), m.ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(", "));
            for ((p, n), len) in &m.keys {
                write!(s, " key {p}/{n} {len};")?;
            }
            s.push_str(" }");
            lines.push(s);
        }
        for d in &self.domains {
            lines.push(format!(
                "domain {} from {} {{ {} }}",
                name(&d.importer),
                name(&d.source),
                d.constants.iter().map(constant).collect::<Vec<_>>().join(", ")
            ));
        }
        if !lines.is_empty() {
            sections.push(lines.join("\n"));
        }
        if sections.is_empty() {
            return Ok(());
        }
        writeln!(f, "{}", sections.join("\n\n"))
    }
}

/// Canonical text of a document.
pub fn serialize(doc: &Document) -> String {
    doc.to_string()
}
