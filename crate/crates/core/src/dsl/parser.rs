//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := atom ['^' uint]
//! atom   := rational | symbol | genref | '(' expr ')' | '-' factor
//! ```
//!
//! Juxtaposition is composition; whitespace is insignificant.

use num_bigint::BigInt;

use super::ast::{Expr, GenCall, Sym};
use super::{DslContext, DslError};
use crate::embed::LTag;
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'0'..=b'9' => {
                let end = digits(i);
                let num: BigInt = text[i..end].parse().expect("ascii digits");
                i = end;
                if i < bytes.len() && bytes[i] == b'/' {
                    let dend = digits(i + 1);
                    if dend == i + 1 {
                        return Err(DslError::syntax(i, "expected denominator after '/'"));
                    }
                    let den: BigInt = text[i + 1..dend].parse().expect("ascii digits");
                    if den == BigInt::from(0) {
                        return Err(DslError::syntax(i + 1, "zero denominator"));
                    }
                    i = dend;
                    Tok::Num(Rational::new(num, den))
                } else {
                    Tok::Num(Rational::from_integer(num))
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let j = digits(j);
                let name = text[i..j].to_string();
                i = j;
                Tok::Ident(name)
            }
            _ => {
                i += 1;
                match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b'{' => Tok::LBrace,
                    b'}' => Tok::RBrace,
                    b',' => Tok::Comma,
                    _ => {
                        let ch = text[start..].chars().next().unwrap_or('?');
                        return Err(DslError::syntax(start, format!("unexpected character '{ch}'")));
                    }
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a DslContext,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DslError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(DslError::syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            return match self.bump().0 {
                Tok::Num(q) if q.is_integer() => {
                    let e: u32 = q.to_integer().try_into().map_err(|_| {
                        DslError::syntax(at, "exponent too large")
                    })?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(DslError::syntax(at, "expected non-negative integer exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(q) => Ok(Expr::Num(q)),
            Tok::Minus => Ok(Expr::Neg(Box::new(self.factor()?))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::LBracket {
                    self.genref(&name, at)
                } else {
                    self.symbol(&name, at)
                }
            }
            Tok::End => Err(DslError::syntax(at, "unexpected end of input")),
            other => Err(DslError::syntax(at, format!("unexpected token {other:?}"))),
        }
    }

    fn symbol(&self, name: &str, at: usize) -> Result<Expr, DslError> {
        let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
        let (head, idx) = name.split_at(split);
        let index = || -> Result<usize, DslError> {
            idx.parse::<usize>()
                .map_err(|_| DslError::UnknownSymbol { pos: at, name: name.into() })
        };
        let vars = self.ctx.n() - 2;
        let sym = match (head, idx.is_empty()) {
            ("E", true) => Sym::Euler,
            ("k", true) => Sym::K,
            ("u", false) => Sym::U(self.bounded(name, at, index()?, 1, vars)?),
            ("d", false) => Sym::D(self.bounded(name, at, index()?, 1, vars)?),
            ("nu", false) => Sym::Nu(self.bounded(name, at, index()?, 1, self.ctx.n())?),
            _ => return Err(DslError::UnknownSymbol { pos: at, name: name.into() }),
        };
        Ok(Expr::Sym(sym))
    }

    fn bounded(
        &self,
        name: &str,
        at: usize,
        index: usize,
        min: usize,
        max: usize,
    ) -> Result<usize, DslError> {
        if (min..=max).contains(&index) {
            Ok(index)
        } else {
            Err(DslError::IndexOutOfBounds {
                pos: at,
                name: name.into(),
                index,
                min,
                max,
            })
        }
    }

    fn uint(&mut self) -> Result<usize, DslError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(q) if q.is_integer() => q
                .to_integer()
                .try_into()
                .map_err(|_| DslError::syntax(at, "index too large")),
            _ => Err(DslError::syntax(at, "expected index")),
        }
    }

    fn genref(&mut self, name: &str, at: usize) -> Result<Expr, DslError> {
        self.expect(Tok::LBracket, "'['")?;
        let n = self.ctx.n();
        if *self.peek() == Tok::LBrace {
            self.bump();
            let mut set = vec![self.uint()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                set.push(self.uint()?);
            }
            self.expect(Tok::RBrace, "'}'")?;
            self.expect(Tok::RBracket, "']'")?;
            if name != "C" {
                return Err(DslError::syntax(at, format!("{name} does not take a set")));
            }
            for &e in &set {
                self.bounded(name, at, e, 1, n)?;
            }
            return Ok(Expr::Gen(GenCall::CSet(set)));
        }
        let mut args = vec![self.uint()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.uint()?);
        }
        self.expect(Tok::RBracket, "']'")?;
        let check = |lo: usize, hi: usize| -> Result<(), DslError> {
            for &a in &args {
                self.bounded(name, at, a, lo, hi)?;
            }
            Ok(())
        };
        let ltag = |t: &str| match t {
            "L1" => Some(LTag::L1),
            "L2" => Some(LTag::L2),
            "L3" => Some(LTag::L3),
            "L4" => Some(LTag::L4),
            "L5" => Some(LTag::L5),
            "L6" => Some(LTag::L6),
            _ => None,
        };
        let call = match (name, args.as_slice()) {
            ("T", &[i, j]) => {
                check(1, n - 1)?;
                GenCall::T(i, j)
            }
            ("Td", &[d]) => {
                check(1, n - 2)?;
                GenCall::Td(d)
            }
            ("C", &[i]) => {
                check(1, n)?;
                GenCall::CSingle(i)
            }
            ("C", &[i, j]) => {
                check(1, n)?;
                GenCall::CPair(i, j)
            }
            (t, &[j]) if matches!(ltag(t), Some(LTag::L1 | LTag::L2 | LTag::L3 | LTag::L4)) => {
                check(3, n)?;
                GenCall::L(ltag(t).expect("matched"), j)
            }
            (t, &[i, j]) if matches!(ltag(t), Some(LTag::L5 | LTag::L6)) => {
                check(3, n)?;
                GenCall::LPair(ltag(t).expect("matched"), i, j)
            }
            ("T" | "Td" | "C" | "L1" | "L2" | "L3" | "L4" | "L5" | "L6", _) => {
                return Err(DslError::syntax(
                    at,
                    format!("wrong number of indices for {name}"),
                ))
            }
            _ => return Err(DslError::UnknownSymbol { pos: at, name: name.into() }),
        };
        Ok(Expr::Gen(call))
    }
}

pub fn parse(text: &str, ctx: &DslContext) -> Result<Expr, DslError> {
    if text.trim().is_empty() {
        return Err(DslError::syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        ctx,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(DslError::syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}
