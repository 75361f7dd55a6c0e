//! Lexer and recursive-descent parser for the surface syntax.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := INT | IDENT | IDENT '(' args ')' | '(' args ')' | '[' args ']'
//! args    := (expr (',' expr)*)?
//! ```
//!
//! A parenthesized list with one entry is grouping; with several entries it
//! is a generator list.

use std::fmt;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Comma => write!(f, ","),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(src: &str, start: Pos) -> Result<Vec<(Tok, Pos)>, CliError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut pos = start;
    while i < chars.len() {
        let c = chars[i];
        let here = pos;
        if c == '\n' {
            pos.line += 1;
            pos.col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            pos.col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let j = chars[i..].iter().position(|c| !c.is_ascii_digit()).map_or(chars.len(), |k| i + k);
            let text: String = chars[i..j].iter().collect();
            let n = text.parse::<i128>().map_err(|_| CliError::parse(here, format!("integer {text} is too large")))?;
            out.push((Tok::Int(n), here));
            pos.col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let j = chars[i..]
                .iter()
                .position(|c| !(c.is_ascii_alphanumeric() || *c == '_'))
                .map_or(chars.len(), |k| i + k);
            out.push((Tok::Ident(chars[i..j].iter().collect()), here));
            pos.col += j - i;
            i = j;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            _ => return Err(CliError::parse(here, format!("unexpected character '{c}'"))),
        };
        out.push((tok, here));
        pos.col += 1;
        i += 1;
    }
    out.push((Tok::Eof, pos));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Int(i128),
    Ident(String),
    Call(String, Vec<Expr>),
    /// Parenthesized list of two or more entries.
    Tuple(Vec<Expr>),
    /// Bracketed list.
    List(Vec<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// A syntax tree node; equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Int(a), Int(b)) => a == b,
            (Ident(a), Ident(b)) => a == b,
            (Call(f, a), Call(g, b)) => f == g && a == b,
            (Tuple(a), Tuple(b)) | (List(a), List(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Bin(o, a, b), Bin(p, c, d)) => o == p && a == c && b == d,
            _ => false,
        }
    }
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Self { kind, pos: Pos::default() }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, _, _) => op.precedence(),
            ExprKind::Neg(_) => 3,
            ExprKind::Int(n) if *n < 0 => 3,
            _ => 5,
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match &self.kind {
            ExprKind::Int(n) if *n < 0 => write!(f, "-{}", n.unsigned_abs()),
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Ident(s) => write!(f, "{s}"),
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                join(f, args)?;
                write!(f, ")")
            }
            ExprKind::Tuple(items) => {
                write!(f, "(")?;
                join(f, items)?;
                write!(f, ")")
            }
            ExprKind::List(items) => {
                write!(f, "[")?;
                join(f, items)?;
                write!(f, "]")
            }
            ExprKind::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, e.precedence() < 4)
            }
            ExprKind::Bin(op, a, b) => {
                let p = op.precedence();
                // left-associative except for the right-associative power
                let (lp, rp) = if *op == BinOp::Pow { (a.precedence() <= p, b.precedence() < 3) } else { (a.precedence() < p, b.precedence() <= p) };
                wrap(f, a, lp)?;
                if *op == BinOp::Pow {
                    write!(f, "^")?;
                } else {
                    write!(f, " {} ", op.symbol())?;
                }
                wrap(f, b, rp)
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }
    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }
    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }
    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.term()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let (_, pos) = self.bump();
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if *self.peek() == Tok::Minus {
            let (_, pos) = self.bump();
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            let (_, pos) = self.bump();
            let exp = self.unary()?;
            return Ok(Expr { kind: ExprKind::Bin(BinOp::Pow, Box::new(base), Box::new(exp)), pos });
        }
        Ok(base)
    }

    fn args(&mut self, close: Tok) -> Result<Vec<Expr>, CliError> {
        let mut items = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if *t == close => {
                    self.bump();
                    return Ok(items);
                }
                t => return Err(CliError::parse(self.pos(), format!("expected ',' or '{close}', found '{t}'"))),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    self.bump();
                    ExprKind::Call(name, self.args(Tok::RParen)?)
                } else {
                    ExprKind::Ident(name)
                }
            }
            Tok::LParen => {
                let mut items = self.args(Tok::RParen)?;
                match items.len() {
                    0 => return Err(CliError::parse(pos, "empty parentheses".into())),
                    1 => return Ok(items.pop().expect("one item")),
                    _ => ExprKind::Tuple(items),
                }
            }
            Tok::LBracket => ExprKind::List(self.args(Tok::RBracket)?),
            t => return Err(CliError::parse(pos, format!("unexpected '{t}'"))),
        };
        Ok(Expr { kind, pos })
    }
}

/// Parse a complete expression; `start` is the position of its first
/// character in the enclosing text.
pub fn parse_at(src: &str, start: Pos) -> Result<Expr, CliError> {
    let toks = lex(src, start)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(CliError::parse(p.pos(), format!("unexpected '{}' after expression", p.peek())));
    }
    Ok(e)
}

pub fn parse(src: &str) -> Result<Expr, CliError> {
    parse_at(src, Pos { line: 1, col: 1 })
}
