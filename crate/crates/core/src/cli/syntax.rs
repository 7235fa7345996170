//! Tokens, expression trees, and a recursive-descent parser for the
//! command language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT | '^' '(' '-'? INT ')')?
//! atom   := INT | 'sqrt' '(' INT ')' | 't' '^' '(' texp ')' | 't' | NAME | '(' expr ')'
//! texp   := rat | '(' rat (',' rat)* ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::valgroup::{GroupCut, GroupElem, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Eq,
    End,
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
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::Comma => write!(f, ","),
            Tok::Semi => write!(f, ";"),
            Tok::Colon => write!(f, ":"),
            Tok::Eq => write!(f, "="),
            Tok::End => write!(f, "end of input"),
        }
    }
}

/// Words that can never name a session object.
pub const KEYWORDS: &[&str] = &[
    "in", "over", "to", "into", "from", "var", "order", "at", "upper", "lower", "above", "coset",
    "all", "empty", "inf", "sqrt", "t", "ball", "edge", "filler", "Q",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '=' => Tok::Eq,
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((t, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Scalar(BigRational),
    Tuple(Vec<BigRational>),
}

impl Exponent {
    pub fn to_group_elem(&self) -> GroupElem {
        match self {
            Exponent::Scalar(q) => GroupElem::new(vec![q.clone()]),
            Exponent::Tuple(v) => GroupElem::new(v.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Sqrt(u64),
    Mono(Exponent),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl Expr {
    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Name(n) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.names(out),
            Expr::Bin(_, a, b) => {
                a.names(out);
                b.names(out);
            }
            _ => {}
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Sqrt(d) => write!(f, "sqrt({d})"),
            Expr::Mono(Exponent::Scalar(q)) => write!(f, "t^({})", fmt_rat(q)),
            Expr::Mono(Exponent::Tuple(v)) => {
                let xs: Vec<String> = v.iter().map(fmt_rat).collect();
                write!(f, "t^(({}))", xs.join(","))
            }
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Neg(e) => {
                let wrap = ctx > PREC_UNARY;
                if wrap {
                    write!(f, "(")?;
                }
                write!(f, "-")?;
                e.write_prec(f, PREC_UNARY)?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::Bin(op, a, b) => {
                let p = op.prec();
                let wrap = ctx > p;
                if wrap {
                    write!(f, "(")?;
                }
                a.write_prec(f, p)?;
                write!(f, "{}", op.symbol())?;
                // a negated right operand reads badly without parentheses
                let rctx = if matches!(**b, Expr::Neg(_)) { PREC_ATOM } else { p + 1 };
                b.write_prec(f, rctx)?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Expr::Pow(b, k) => {
                let wrap = ctx > PREC_POW;
                if wrap {
                    write!(f, "(")?;
                }
                b.write_prec(f, PREC_ATOM)?;
                if *k < 0 {
                    write!(f, "^({k})")?;
                } else {
                    write!(f, "^{k}")?;
                }
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

pub struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    pub fn new(input: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    pub fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    pub fn at_end(&self) -> bool {
        *self.peek() == Tok::End
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error(format!("unexpected `{}`", self.peek()))
        }
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected `{t}`, found `{}`", self.peek()))
        }
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    pub fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.error(format!("expected `{w}`, found `{}`", self.peek()))
        }
    }

    /// A hyphenated keyword such as `from-cut`.
    pub fn eat_compound(&mut self, w: &str) -> bool {
        let parts: Vec<&str> = w.split('-').collect();
        for (k, p) in parts.iter().enumerate() {
            let idx = 2 * k;
            if !matches!(self.peek_at(idx), Tok::Ident(s) if s == p) {
                return false;
            }
            if k + 1 < parts.len() && *self.peek_at(idx + 1) != Tok::Minus {
                return false;
            }
        }
        for _ in 0..(2 * parts.len() - 1) {
            self.next();
        }
        true
    }

    pub fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.next();
                Ok(s)
            }
            t => self.error(format!("expected a name, found `{t}`")),
        }
    }

    pub fn name_list(&mut self) -> Result<Vec<String>> {
        let mut out = vec![self.name()?];
        while self.eat(&Tok::Comma) {
            out.push(self.name()?);
        }
        Ok(out)
    }

    pub fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            t => self.error(format!("expected an integer, found `{t}`")),
        }
    }

    pub fn small_int(&mut self) -> Result<i64> {
        let at = self.offset();
        let n = self.int()?;
        n.to_i64().ok_or(Error::Syntax {
            pos: at,
            msg: "integer out of range".into(),
        })
    }

    pub fn signed_int(&mut self) -> Result<BigInt> {
        let neg = self.eat(&Tok::Minus);
        let n = self.int()?;
        Ok(if neg { -n } else { n })
    }

    pub fn rational(&mut self) -> Result<BigRational> {
        let n = self.signed_int()?;
        if self.eat(&Tok::Slash) {
            let at = self.offset();
            let d = self.int()?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(n, d))
        } else {
            Ok(BigRational::from_integer(n))
        }
    }

    pub fn tuple(&mut self) -> Result<Vec<BigRational>> {
        self.expect(&Tok::LParen)?;
        let mut v = vec![self.rational()?];
        while self.eat(&Tok::Comma) {
            v.push(self.rational()?);
        }
        self.expect(&Tok::RParen)?;
        Ok(v)
    }

    pub fn group_elem(&mut self) -> Result<GroupElem> {
        Ok(GroupElem::new(self.tuple()?))
    }

    /// `all | empty | above (..) | from (..) | above coset (..)+H_k | from coset (..)+H_k`
    pub fn group_cut(&mut self) -> Result<GroupCut> {
        if self.eat_word("all") {
            return Ok(GroupCut::MinusInf);
        }
        if self.eat_word("empty") {
            return Ok(GroupCut::PlusInf);
        }
        let side = if self.eat_word("above") {
            Side::Upper
        } else if self.eat_word("from") {
            Side::Lower
        } else {
            return self.error(format!("expected a segment, found `{}`", self.peek()));
        };
        if self.eat_word("coset") {
            let at = self.group_elem()?;
            self.expect(&Tok::Plus)?;
            let level = match self.next() {
                Tok::Ident(s) if s.starts_with("H_") => s[2..].parse::<usize>().ok(),
                _ => None,
            };
            let Some(level) = level else {
                return self.error("expected `H_k`");
            };
            return Ok(GroupCut::CosetEdge { at, level, side });
        }
        let g = self.group_elem()?;
        Ok(match side {
            Side::Upper => GroupCut::Above(g),
            Side::Lower => GroupCut::Below(g),
        })
    }

    pub fn side(&mut self) -> Result<Side> {
        if self.eat_word("upper") {
            Ok(Side::Upper)
        } else if self.eat_word("lower") {
            Ok(Side::Lower)
        } else {
            self.error(format!("expected `upper` or `lower`, found `{}`", self.peek()))
        }
    }

    fn starts_term(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Tok::Int(_) | Tok::LParen | Tok::Minus => true,
            Tok::Ident(s) => !is_keyword(s) || s == "sqrt" || s == "t",
            _ => false,
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            // a trailing sign belongs to the caller (cut syntax `a+`)
            if !self.starts_term(1) {
                break;
            }
            self.next();
            let r = self.term()?;
            e = Expr::Bin(op, Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.next();
            let r = self.unary()?;
            e = Expr::Bin(op, Box::new(e), Box::new(r));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        let k = if self.eat(&Tok::LParen) {
            let k = self.signed_int()?;
            self.expect(&Tok::RParen)?;
            k
        } else {
            self.int()?
        };
        let k = k.to_i32().ok_or(Error::Syntax {
            pos: at,
            msg: "exponent out of range".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::Int(n))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.next();
                self.expect(&Tok::LParen)?;
                let at = self.offset();
                let d = self.int()?;
                self.expect(&Tok::RParen)?;
                let d = d.to_u64().filter(|d| *d > 0).ok_or(Error::Syntax {
                    pos: at,
                    msg: "radicand must be a positive integer".into(),
                })?;
                Ok(Expr::Sqrt(d))
            }
            Tok::Ident(s) if s == "t" => {
                self.next();
                if *self.peek() != Tok::Caret || *self.peek_at(1) != Tok::LParen {
                    return Ok(Expr::Mono(Exponent::Scalar(BigRational::one())));
                }
                self.next();
                self.expect(&Tok::LParen)?;
                let e = if *self.peek() == Tok::LParen {
                    Exponent::Tuple(self.tuple()?)
                } else {
                    Exponent::Scalar(self.rational()?)
                };
                self.expect(&Tok::RParen)?;
                Ok(Expr::Mono(e))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.next();
                Ok(Expr::Name(s))
            }
            t => self.error(format!("expected an expression, found `{t}`")),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr> {
    let mut p = Parser::new(input)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Sign-aware helper used by generators: a rational literal as an
/// expression tree.
pub fn rational_expr(q: &BigRational) -> Expr {
    let num = Expr::Int(q.numer().abs());
    let e = if q.is_integer() {
        num
    } else {
        Expr::Bin(BinOp::Div, Box::new(num), Box::new(Expr::Int(q.denom().clone())))
    };
    if q.is_negative() {
        Expr::Neg(Box::new(e))
    } else {
        e
    }
}
