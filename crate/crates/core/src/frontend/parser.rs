use super::document::{BodyItem, BridgeDecl, ContextDecl, Document, DomainDecl, IcDecl, ManageDecl, SignatureDecl};
use super::lexer::{tokenize, Diagnostic, Pos, Tok};
use crate::encoders::Denial;
use crate::kernel::{Atom, Belief, Comparison, Element, Head, PredKey, Symbol, Term};
use crate::logics::{Rule, SignedAtom};

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(self.pos(), format!("expected {expected}, found {}", self.peek())))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&tok.to_string())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        if self.is_keyword(word) {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{word}`"))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Quoted(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("a name"),
        }
    }

    fn number(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Number(s) => {
                let pos = self.pos();
                self.bump();
                s.parse().map_err(|_| Diagnostic::new(pos, format!("number {s} is too large")))
            }
            _ => self.error("a number"),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                let first = s.chars().next().expect("identifiers are non-empty");
                Ok(if first.is_uppercase() || first == '_' { Term::var(s) } else { Term::constant(s) })
            }
            Tok::Number(s) | Tok::Quoted(s) => {
                self.bump();
                Ok(Term::constant(s))
            }
            _ => self.error("a term"),
        }
    }

    fn constant(&mut self) -> PResult<Symbol> {
        let pos = self.pos();
        match self.term()? {
            Term::Const(c) => Ok(c),
            Term::Var(v) => Err(Diagnostic::new(pos, format!("expected a constant, found variable {v}"))),
        }
    }

    fn atom(&mut self) -> PResult<Atom> {
        let pred = match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                s
            }
            _ => return self.error("an atom"),
        };
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok(Atom::new(pred, args))
    }

    fn pred_key(&mut self) -> PResult<PredKey> {
        let p = self.name()?;
        self.expect(Tok::Slash)?;
        Ok((Symbol::new(p), self.number()?))
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn element(&mut self) -> PResult<Element> {
        match self.peek().clone() {
            Tok::Token(t) => {
                self.bump();
                Ok(Element::Ordinary(Symbol::new(t)))
            }
            _ => Ok(Element::Relational(self.atom()?)),
        }
    }

    fn belief(&mut self) -> PResult<Belief> {
        if self.eat(&Tok::Minus) {
            return Ok(Belief::Negated(self.atom()?));
        }
        Ok(self.element()?.to_belief())
    }

    fn comparison(&mut self) -> PResult<Comparison> {
        let left = self.term()?;
        let equal = match self.bump() {
            Tok::Eq => true,
            Tok::Neq => false,
            _ => {
                self.at -= 1;
                return self.error("`=` or `!=`");
            }
        };
        Ok(Comparison { left, right: self.term()?, equal })
    }

    fn body_item(&mut self) -> PResult<BodyItem> {
        let negated = self.is_keyword("not") && *self.peek2() != Tok::Colon;
        if negated {
            self.bump();
        }
        let context_literal = matches!(self.peek(), Tok::Ident(_) | Tok::Quoted(_)) && *self.peek2() == Tok::Colon;
        if context_literal {
            let context = self.name()?;
            self.expect(Tok::Colon)?;
            let belief = self.belief()?;
            return Ok(BodyItem::Literal { context, belief, negated });
        }
        if negated {
            return self.error("a context literal after `not`");
        }
        Ok(BodyItem::Compare(self.comparison()?))
    }

    fn body(&mut self) -> PResult<Vec<BodyItem>> {
        if *self.peek() == Tok::Dot {
            return Ok(Vec::new());
        }
        self.list(Self::body_item)
    }

    fn signed_atom(&mut self) -> PResult<SignedAtom> {
        let negative = self.eat(&Tok::Minus);
        Ok(SignedAtom { negative, atom: self.atom()? })
    }

    fn rule_body(&mut self, head: SignedAtom) -> PResult<Rule> {
        let mut rule = Rule { head, body: Vec::new(), naf: Vec::new() };
        if *self.peek() != Tok::Dot {
            loop {
                if self.is_keyword("not") && *self.peek2() != Tok::LParen {
                    self.bump();
                    rule.naf.push(self.atom()?);
                } else {
                    rule.body.push(self.signed_atom()?);
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Dot)?;
        Ok(rule)
    }

    fn signature(&mut self) -> PResult<SignatureDecl> {
        self.expect(Tok::LBrace)?;
        let mut sig = SignatureDecl::default();
        while !self.eat(&Tok::RBrace) {
            let section = self.name()?;
            self.expect(Tok::Colon)?;
            match section.as_str() {
                "kb" => sig.kb.extend(self.list(Self::pred_key)?),
                "belief" => sig.belief.extend(self.list(Self::pred_key)?),
                "universe" => sig.universe.extend(self.list(Self::constant)?),
                other => {
                    return Err(Diagnostic::new(self.pos(), format!("unknown signature section `{other}`")));
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(sig)
    }

    fn context(&mut self) -> PResult<ContextDecl> {
        let pos = self.pos();
        self.keyword("context")?;
        let name = self.name()?;
        self.keyword("kind")?;
        let kind = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = ContextDecl { name, kind, signature: None, facts: Vec::new(), choices: Vec::new(), rules: Vec::new(), pos };
        while !self.eat(&Tok::RBrace) {
            let item_pos = self.pos();
            if self.is_keyword("signature") && *self.peek2() == Tok::LBrace {
                self.bump();
                if decl.signature.is_some() {
                    return Err(Diagnostic::new(item_pos, "duplicate signature"));
                }
                decl.signature = Some(self.signature()?);
            } else if self.is_keyword("choice") && matches!(self.peek2(), Tok::Ident(_)) {
                self.bump();
                decl.choices.push(self.atom()?);
                self.expect(Tok::Dot)?;
            } else if let Tok::Token(t) = self.peek().clone() {
                self.bump();
                decl.facts.push(Element::Ordinary(Symbol::new(t)));
                self.expect(Tok::Dot)?;
            } else if *self.peek() == Tok::Eof {
                return self.error("`}`");
            } else {
                let head = self.signed_atom()?;
                if self.eat(&Tok::If) {
                    decl.rules.push(self.rule_body(head)?);
                } else if head.negative {
                    self.expect(Tok::Dot)?;
                    decl.rules.push(Rule { head, body: Vec::new(), naf: Vec::new() });
                } else {
                    self.expect(Tok::Dot)?;
                    if !head.atom.is_ground() {
                        return Err(Diagnostic::new(item_pos, format!("fact {} is not ground", head.atom)));
                    }
                    decl.facts.push(Element::Relational(head.atom));
                }
            }
        }
        Ok(decl)
    }

    fn head(&mut self) -> PResult<Head> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::LBracket {
            let op = self.name()?;
            self.expect(Tok::LBracket)?;
            let element = self.element()?;
            self.expect(Tok::RBracket)?;
            return Ok(Head::managed(op, element));
        }
        Ok(Head::plain(self.element()?))
    }

    fn bridge(&mut self) -> PResult<BridgeDecl> {
        let pos = self.pos();
        self.keyword("bridge")?;
        let target = self.name()?;
        self.expect(Tok::Colon)?;
        let head = self.head()?;
        let body = if self.eat(&Tok::If) { self.body()? } else { Vec::new() };
        self.expect(Tok::Dot)?;
        Ok(BridgeDecl { target, head, body, pos })
    }

    fn ic(&mut self) -> PResult<IcDecl> {
        let pos = self.pos();
        self.keyword("ic")?;
        self.expect(Tok::If)?;
        let body = self.body()?;
        self.expect(Tok::Dot)?;
        Ok(IcDecl { body, pos })
    }

    fn manage(&mut self) -> PResult<ManageDecl> {
        let pos = self.pos();
        self.keyword("manage")?;
        let context = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut decl = ManageDecl { context, ops: Vec::new(), keys: Vec::new(), pos };
        while !self.eat(&Tok::RBrace) {
            if self.is_keyword("ops") {
                self.bump();
                decl.ops.extend(self.list(|p| p.name().map(Symbol::new))?);
            } else if self.is_keyword("key") {
                self.bump();
                let key = self.pred_key()?;
                let length = self.number()?;
                decl.keys.push((key, length));
            } else {
                return self.error("`ops`, `key` or `}`");
            }
            self.expect(Tok::Semi)?;
        }
        Ok(decl)
    }

    fn domain(&mut self) -> PResult<DomainDecl> {
        let pos = self.pos();
        self.keyword("domain")?;
        let importer = self.name()?;
        self.keyword("from")?;
        let source = self.name()?;
        self.expect(Tok::LBrace)?;
        let constants = if *self.peek() == Tok::RBrace { Vec::new() } else { self.list(Self::constant)? };
        self.expect(Tok::RBrace)?;
        Ok(DomainDecl { importer, source, constants, pos })
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            match self.peek() {
                Tok::Eof => return Ok(doc),
                Tok::Ident(s) => match s.as_str() {
                    "context" => doc.contexts.push(self.context()?),
                    "bridge" => doc.bridges.push(self.bridge()?),
                    "ic" => doc.ics.push(self.ic()?),
                    "manage" => doc.manages.push(self.manage()?),
                    "domain" => doc.domains.push(self.domain()?),
                    _ => return self.error("`context`, `bridge`, `ic`, `manage` or `domain`"),
                },
                _ => return self.error("`context`, `bridge`, `ic`, `manage` or `domain`"),
            }
        }
    }

    fn denial(&mut self) -> PResult<Denial> {
        let mut d = Denial::default();
        if *self.peek() != Tok::Arrow {
            loop {
                if self.eat(&Tok::Tilde) || (self.is_keyword("not") && matches!(self.peek2(), Tok::Ident(_))) {
                    if self.is_keyword("not") {
                        self.bump();
                    }
                    d.negative.push(self.atom()?);
                } else if matches!(self.peek2(), Tok::Eq | Tok::Neq) {
                    d.comparisons.push(self.comparison()?);
                } else {
                    d.positive.push(self.atom()?);
                }
                if !(self.eat(&Tok::Amp) || self.eat(&Tok::Comma)) {
                    break;
                }
            }
        }
        self.expect(Tok::Arrow)?;
        self.keyword("false")?;
        self.eat(&Tok::Dot);
        if *self.peek() != Tok::Eof {
            return self.error("end of input");
        }
        Ok(d)
    }
}

/// Parses a document.
pub fn parse(text: &str) -> Result<Document, Diagnostic> {
    Parser { toks: tokenize(text)?, at: 0 }.document()
}

/// Parses `A₁ & … & ~B₁ & … -> false`.
pub fn parse_denial(text: &str) -> crate::error::Result<Denial> {
    Ok(Parser { toks: tokenize(text)?, at: 0 }.denial()?)
}
