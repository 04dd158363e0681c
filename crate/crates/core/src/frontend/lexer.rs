use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

/// Positions are metadata: two declarations at different places are
/// still equal.
impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { pos, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.pos.line, self.pos.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

impl From<Diagnostic> for crate::error::Error {
    fn from(d: Diagnostic) -> Self {
        crate::error::Error::Parse(d.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Quoted(String),
    /// `#name`, `#*` or `#"..."`.
    Token(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Semi,
    Slash,
    Minus,
    Eq,
    Neq,
    If,
    Amp,
    Tilde,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "\"{s}\""),
            Tok::Token(s) => write!(f, "`#{s}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Comma => ",",
                    Tok::Dot => ".",
                    Tok::Colon => ":",
                    Tok::Semi => ";",
                    Tok::Slash => "/",
                    Tok::Minus => "-",
                    Tok::Eq => "=",
                    Tok::Neq => "!=",
                    Tok::If => ":-",
                    Tok::Amp => "&",
                    Tok::Tilde => "~",
                    _ => "->",
                };
                write!(f, "`{s}`")
            }
        }
    }
}

pub fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut k, mut line, mut col) = (0usize, 1usize, 1usize);
    let ident_char = |c: char| c.is_alphanumeric() || c == '_';

    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, column: col };
        let advance = |n: usize, k: &mut usize, col: &mut usize| {
            *k += n;
            *col += n;
        };
        match c {
            '\n' => {
                k += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut k, &mut col),
            '%' => {
                while k < chars.len() && chars[k] != '\n' {
                    k += 1;
                }
            }
            '"' => {
                let (s, used) = quoted(&chars[k..]).ok_or_else(|| Diagnostic::new(pos, "unterminated string"))?;
                out.push((Tok::Quoted(s), pos));
                advance(used, &mut k, &mut col);
            }
            '#' => {
                let rest = &chars[k + 1..];
                let (s, used) = match rest.first() {
                    Some('*') => ("*".to_string(), 1),
                    Some('"') => quoted(rest).ok_or_else(|| Diagnostic::new(pos, "unterminated string"))?,
                    Some(c) if ident_char(*c) => {
                        let n = rest.iter().take_while(|c| ident_char(**c)).count();
                        (rest[..n].iter().collect(), n)
                    }
                    _ => return Err(Diagnostic::new(pos, "expected a token name after `#`")),
                };
                out.push((Tok::Token(s), pos));
                advance(used + 1, &mut k, &mut col);
            }
            c if ident_char(c) => {
                let n = chars[k..].iter().take_while(|c| ident_char(**c)).count();
                let s: String = chars[k..k + n].iter().collect();
                let tok = if s.chars().all(|c| c.is_ascii_digit()) { Tok::Number(s) } else { Tok::Ident(s) };
                out.push((tok, pos));
                advance(n, &mut k, &mut col);
            }
            _ => {
                let next = chars.get(k + 1).copied();
                let (tok, n) = match (c, next) {
                    (':', Some('-')) => (Tok::If, 2),
                    ('!', Some('=')) => (Tok::Neq, 2),
                    ('-', Some('>')) => (Tok::Arrow, 2),
                    ('(', _) => (Tok::LParen, 1),
                    (')', _) => (Tok::RParen, 1),
                    ('{', _) => (Tok::LBrace, 1),
                    ('}', _) => (Tok::RBrace, 1),
                    ('[', _) => (Tok::LBracket, 1),
                    (']', _) => (Tok::RBracket, 1),
                    (',', _) => (Tok::Comma, 1),
                    ('.', _) => (Tok::Dot, 1),
                    (':', _) => (Tok::Colon, 1),
                    (';', _) => (Tok::Semi, 1),
                    ('/', _) => (Tok::Slash, 1),
                    ('-', _) => (Tok::Minus, 1),
                    ('=', _) => (Tok::Eq, 1),
                    ('&' | '∧', _) => (Tok::Amp, 1),
                    ('~' | '¬', _) => (Tok::Tilde, 1),
                    ('→', _) => (Tok::Arrow, 1),
                    ('≠', _) => (Tok::Neq, 1),
                    ('←', _) => (Tok::If, 1),
                    ('⊥', _) => (Tok::Ident("false".into()), 1),
                    _ => return Err(Diagnostic::new(pos, format!("unexpected character `{c}`"))),
                };
                out.push((tok, pos));
                advance(n, &mut k, &mut col);
            }
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// Parses a double-quoted string starting at `chars[0]`; returns the
/// content and the number of characters consumed.
fn quoted(chars: &[char]) -> Option<(String, usize)> {
    let mut s = String::new();
    let mut k = 1;
    while k < chars.len() {
        match chars[k] {
            '"' => return Some((s, k + 1)),
            '\\' => {
                s.push(*chars.get(k + 1)?);
                k += 2;
            }
            '\n' => return None,
            c => {
                s.push(c);
                k += 1;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("% header\nbridge c2 : Rt(X) :- c1:R(X).").unwrap();
        assert_eq!(toks[0], (Tok::Ident("bridge".into()), Pos { line: 2, column: 1 }));
        assert_eq!(toks[0].1.line, 2);
        assert!(toks.iter().any(|(t, _)| *t == Tok::If));
        let err = tokenize("p(a) $").unwrap_err();
        assert_eq!((err.pos.line, err.pos.column), (1, 6));
    }

    #[test]
    fn tokens_and_quotes() {
        let toks = tokenize(r##"#* #tok #"a b" "x\"y" 1111111118"##).unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|(t, _)| t).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Token("*".into()),
                Tok::Token("tok".into()),
                Tok::Token("a b".into()),
                Tok::Quoted("x\"y".into()),
                Tok::Number("1111111118".into()),
                Tok::Eof
            ]
        );
    }
}
