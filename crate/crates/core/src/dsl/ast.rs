use std::fmt;

use crate::embed::LTag;
use crate::Rational;

/// Atomic symbols of the operator language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    /// multiplication by `u_i`
    U(usize),
    /// derivative `d_i`
    D(usize),
    /// shifted Euler operator
    Euler,
    K,
    Nu(usize),
}

/// Named generators and composite operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenCall {
    T(usize, usize),
    Td(usize),
    CSingle(usize),
    CPair(usize, usize),
    CSet(Vec<usize>),
    L(LTag, usize),
    LPair(LTag, usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym(Sym),
    Gen(GenCall),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::U(i) => write!(f, "u{i}"),
            Sym::D(i) => write!(f, "d{i}"),
            Sym::Euler => f.write_str("E"),
            Sym::K => f.write_str("k"),
            Sym::Nu(i) => write!(f, "nu{i}"),
        }
    }
}

impl fmt::Display for GenCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = |t: &LTag| match t {
            LTag::L1 => "L1",
            LTag::L2 => "L2",
            LTag::L3 => "L3",
            LTag::L4 => "L4",
            LTag::L5 => "L5",
            LTag::L6 => "L6",
        };
        match self {
            GenCall::T(i, j) => write!(f, "T[{i},{j}]"),
            GenCall::Td(d) => write!(f, "Td[{d}]"),
            GenCall::CSingle(i) => write!(f, "C[{i}]"),
            GenCall::CPair(i, j) => write!(f, "C[{i},{j}]"),
            GenCall::CSet(s) => {
                let inner: Vec<String> = s.iter().map(usize::to_string).collect();
                write!(f, "C[{{{}}}]", inner.join(","))
            }
            GenCall::L(t, j) => write!(f, "{}[{j}]", tag(t)),
            GenCall::LPair(t, i, j) => write!(f, "{}[{i},{j}]", tag(t)),
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}
