use crate::diag::{Code, Diagnostic, Pos, Span};

use super::ast::Width;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(u64, Option<Width>),
    Float(String),
    Str(String),
    Kw(Kw),
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Dot,
    Eq,
    EqEq,
    FatArrow,
    Arrow,
    Backslash,
    Bar,
    Underscore,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kw {
    Module,
    Import,
    Concept,
    Model,
    Fn,
    Type,
    Data,
    Where,
    Match,
    Let,
    In,
    If,
    Then,
    Else,
    True,
    False,
}

impl Kw {
    fn from_str(s: &str) -> Option<Kw> {
        Some(match s {
            "module" => Kw::Module,
            "import" => Kw::Import,
            "concept" => Kw::Concept,
            "model" => Kw::Model,
            "fn" => Kw::Fn,
            "type" => Kw::Type,
            "data" => Kw::Data,
            "where" => Kw::Where,
            "match" => Kw::Match,
            "let" => Kw::Let,
            "in" => Kw::In,
            "if" => Kw::If,
            "then" => Kw::Then,
            "else" => Kw::Else,
            "true" => Kw::True,
            "false" => Kw::False,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kw::Module => "module",
            Kw::Import => "import",
            Kw::Concept => "concept",
            Kw::Model => "model",
            Kw::Fn => "fn",
            Kw::Type => "type",
            Kw::Data => "data",
            Kw::Where => "where",
            Kw::Match => "match",
            Kw::Let => "let",
            Kw::In => "in",
            Kw::If => "if",
            Kw::Then => "then",
            Kw::Else => "else",
            Kw::True => "true",
            Kw::False => "false",
        }
    }
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(v, _) => format!("integer `{v}`"),
        Tok::Float(s) => format!("float `{s}`"),
        Tok::Str(_) => "string literal".into(),
        Tok::Kw(k) => format!("`{}`", k.as_str()),
        Tok::LBracket => "`[`".into(),
        Tok::RBracket => "`]`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eq => "`=`".into(),
        Tok::EqEq => "`==`".into(),
        Tok::FatArrow => "`=>`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Backslash => "`\\`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Underscore => "`_`".into(),
        Tok::Eof => "end of file".into(),
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    file: &'a str,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.pos + 1).copied()
    }

    fn here(&self) -> Pos {
        Pos::new(self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, start: Pos, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(Code::Parse, "", Span::new(self.file, start, self.here()), msg)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') if self.peek2() == Some('-') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, start: Pos) -> Result<Tok, Diagnostic> {
        let mut digits = String::new();
        let hex = self.peek() == Some('0') && matches!(self.peek2(), Some('x') | Some('X'));
        if hex {
            self.bump();
            self.bump();
            while let Some(c) = self.peek() {
                if c.is_ascii_hexdigit() || c == '_' {
                    digits.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
        } else {
            while let Some(c) = self.peek() {
                if c.is_ascii_digit() || c == '_' {
                    digits.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if self.peek() == Some('.') && self.peek2().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
                let mut frac = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        frac.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                return Ok(Tok::Float(format!("{digits}.{frac}")));
            }
        }
        let digits: String = digits.chars().filter(|&c| c != '_').collect();
        if digits.is_empty() {
            return Err(self.err(start, "malformed integer literal"));
        }
        let radix = if hex { 16 } else { 10 };
        let value = u64::from_str_radix(&digits, radix)
            .map_err(|_| self.err(start, "integer literal does not fit in 64 bits"))?;
        let width = if self.peek() == Some('u') {
            let rest: String = self.chars[self.pos..].iter().take_while(|c| c.is_ascii_alphanumeric()).collect();
            let w = match rest.as_str() {
                "u8" => Width::U8,
                "u64" => Width::U64,
                _ => return Err(self.err(start, format!("unknown literal suffix `{rest}`"))),
            };
            for _ in 0..rest.len() {
                self.bump();
            }
            Some(w)
        } else {
            None
        };
        if width == Some(Width::U8) && value > u8::MAX as u64 {
            return Err(self.err(start, "integer literal does not fit in 8 bits"));
        }
        Ok(Tok::Int(value, width))
    }

    fn string(&mut self, start: Pos) -> Result<Tok, Diagnostic> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err(start, "unterminated string literal")),
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => match self.bump() {
                    Some('n') => s.push('\n'),
                    Some('t') => s.push('\t'),
                    Some('\\') => s.push('\\'),
                    Some('"') => s.push('"'),
                    _ => return Err(self.err(start, "invalid escape in string literal")),
                },
                Some(c) => s.push(c),
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, Diagnostic> {
        self.skip_trivia();
        let start = self.here();
        let Some(c) = self.peek() else {
            return Ok(Token { tok: Tok::Eof, span: Span::new(self.file, start, start) });
        };
        let tok = if c.is_ascii_digit() {
            self.number(start)?
        } else if c == '"' {
            self.string(start)?
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(c) = self.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if s == "_" {
                Tok::Underscore
            } else if let Some(k) = Kw::from_str(&s) {
                Tok::Kw(k)
            } else {
                Tok::Ident(s)
            }
        } else {
            self.bump();
            match c {
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '\\' => Tok::Backslash,
                '|' => Tok::Bar,
                '=' => match self.peek() {
                    Some('=') => {
                        self.bump();
                        Tok::EqEq
                    }
                    Some('>') => {
                        self.bump();
                        Tok::FatArrow
                    }
                    _ => Tok::Eq,
                },
                '-' if self.peek() == Some('>') => {
                    self.bump();
                    Tok::Arrow
                }
                other => return Err(self.err(start, format!("unexpected character `{other}`"))),
            }
        };
        Ok(Token { tok, span: Span::new(self.file, start, self.here()) })
    }
}

pub fn lex(text: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer { chars: text.chars().collect(), pos: 0, line: 1, col: 1, file };
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let eof = t.tok == Tok::Eof;
        out.push(t);
        if eof {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, "t.sl").unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn literals_and_suffixes() {
        assert_eq!(
            toks("0x2a2a 42u8 7u64 1.5 \"a\\n\""),
            vec![
                Tok::Int(0x2a2a, None),
                Tok::Int(42, Some(Width::U8)),
                Tok::Int(7, Some(Width::U64)),
                Tok::Float("1.5".into()),
                Tok::Str("a\n".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_operators() {
        assert_eq!(
            toks("-- hi\n a == b => -> = _"),
            vec![
                Tok::Ident("a".into()),
                Tok::EqEq,
                Tok::Ident("b".into()),
                Tok::FatArrow,
                Tok::Arrow,
                Tok::Eq,
                Tok::Underscore,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn oversized_u8_is_rejected() {
        let e = lex("300u8", "t.sl").unwrap_err();
        assert_eq!(e.code, Code::Parse);
    }

    #[test]
    fn spans_are_one_based() {
        let ts = lex("\n  foo", "t.sl").unwrap();
        assert_eq!(ts[0].span.start, Pos::new(2, 3));
        assert_eq!(ts[0].span.end, Pos::new(2, 6));
    }
}
