//! Text syntax for operator expressions.
//!
//! An expression lives in the context of a Racah algebra on `n` factors:
//! variables `u1..u(n-2)` and derivatives `d1..d(n-2)`, parameters `k` and
//! `nu1..nun`, the Euler operator `E` and the generators of `D_{n-1}`:
//!
//! | syntax              | meaning                           |
//! |---------------------|-----------------------------------|
//! | `T[i,j]`, `Td[d]`   | `sl_{n-1}` generator images       |
//! | `C[i]`, `C[i,j]`    | Racah generators                  |
//! | `C[{i,j,l}]`        | intermediate Casimir of a subset  |
//! | `L1[j]`..`L4[j]`    | auxiliary operators, `3 <= j <= n`|
//! | `L5[i,j]`, `L6[i,j]`| auxiliary operators, `3 <= j < i` |
//!
//! [`print_canonical`] output always parses back to the same operator.

pub mod ast;
mod parser;

use thiserror::Error;

pub use ast::{Expr, GenCall, Sym};

use crate::coeffring::Poly;
use crate::embed::EmbedContext;
use crate::error::AlgebraError;
use crate::racah::SubsetId;
use crate::weyl::WeylOp;
use crate::{QWeylOp, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol '{name}' at position {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("index {index} of '{name}' at position {pos} outside {min}..={max}")]
    IndexOutOfBounds {
        pos: usize,
        name: String,
        index: usize,
        min: usize,
        max: usize,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl DslError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        DslError::Syntax {
            pos,
            msg: msg.into(),
        }
    }
}

/// Context for parsing and elaboration: the Racah algebra on `n` factors
/// and its ambient `D_{n-1}`.
#[derive(Debug, Clone, Copy)]
pub struct DslContext {
    embed: EmbedContext,
}

impl DslContext {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        Ok(DslContext {
            embed: EmbedContext::new(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.embed.n()
    }

    pub fn embed(&self) -> &EmbedContext {
        &self.embed
    }

    pub fn parse(&self, text: &str) -> Result<Expr, DslError> {
        parse(text, self)
    }

    /// Parses and elaborates in one step.
    pub fn eval(&self, text: &str) -> Result<QWeylOp, DslError> {
        elaborate(&self.parse(text)?, self)
    }
}

pub fn parse(text: &str, ctx: &DslContext) -> Result<Expr, DslError> {
    parser::parse(text, ctx)
}

pub fn elaborate(ast: &Expr, ctx: &DslContext) -> Result<QWeylOp, DslError> {
    let space = ctx.embed.dm().space();
    let e = &ctx.embed;
    Ok(match ast {
        Expr::Num(q) => WeylOp::scalar(space, q.clone()),
        Expr::Sym(s) => match *s {
            Sym::U(i) => WeylOp::from_poly(Poly::symbol(space, crate::Symbol::U(i))?),
            Sym::D(i) => WeylOp::partial(space, i)?,
            Sym::Euler => e.dm().euler_op(),
            Sym::K => WeylOp::from_poly(Poly::k(space)),
            Sym::Nu(i) => WeylOp::from_poly(Poly::symbol(space, crate::Symbol::Nu(i))?),
        },
        Expr::Gen(g) => match g {
            GenCall::T(i, j) => e.dm().t_op(*i, *j)?,
            GenCall::Td(d) => e.dm().ttilde_op(*d)?,
            GenCall::CSingle(i) => e.racah().c_single(*i)?,
            GenCall::CPair(i, j) => e.racah().c_pair(*i, *j)?,
            GenCall::CSet(set) => e.racah().c_set(&SubsetId::new(ctx.n(), set.clone())?)?,
            GenCall::L(tag, j) => e.l_op::<Rational>(*tag, *j)?.op,
            GenCall::LPair(tag, i, j) => e.l_op_pair::<Rational>(*tag, *i, *j)?.op,
        },
        Expr::Add(a, b) => elaborate(a, ctx)?.checked_add(&elaborate(b, ctx)?)?,
        Expr::Sub(a, b) => elaborate(a, ctx)?.checked_sub(&elaborate(b, ctx)?)?,
        Expr::Mul(a, b) => elaborate(a, ctx)?.checked_mul(&elaborate(b, ctx)?)?,
        Expr::Neg(a) => -elaborate(a, ctx)?,
        Expr::Pow(a, k) => elaborate(a, ctx)?.pow(*k),
    })
}

/// Canonical text of a normal-ordered operator.
pub fn print_canonical(op: &QWeylOp) -> String {
    op.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, QWeylOp};

    fn ctx(n: usize) -> DslContext {
        DslContext::new(n).unwrap()
    }

    #[test]
    fn juxtaposition_is_composition() {
        let c = ctx(4);
        let ast = c.parse("d1 u1").unwrap();
        assert_eq!(
            ast,
            Expr::Mul(Box::new(Expr::Sym(Sym::D(1))), Box::new(Expr::Sym(Sym::U(1))))
        );
        assert_eq!(c.eval("d1 u1 - u1 d1").unwrap(), QWeylOp::one(c.embed().dm().space()));
        assert_eq!(c.eval("d1*u1").unwrap(), c.eval("d1 u1").unwrap());
    }

    #[test]
    fn generator_references() {
        let c = ctx(4);
        let s = c.embed().dm().space();
        let e = c.eval("E").unwrap();
        assert_eq!(
            e,
            QWeylOp::u(s, 1) * QWeylOp::d(s, 1) + QWeylOp::u(s, 2) * QWeylOp::d(s, 2)
                - QWeylOp::from_poly(QPoly::k(s))
        );
        assert_eq!(c.eval("T[3,1]").unwrap(), QWeylOp::u(s, 1) * e);
        assert_eq!(c.eval("C[1,2]").unwrap(), c.embed().racah().c_pair(1, 2).unwrap());
        assert_eq!(c.eval("C[{1,2,3}]").unwrap(), c.eval("C[1,2] + C[1,3] + C[2,3] - C[1] - C[2] - C[3]").unwrap());
    }

    #[test]
    fn transcribed_c1j_identity() {
        let c = ctx(4);
        let lhs = c
            .eval("L1[3] L2[3] - (2 nu3 - 1) L2[3] - 2 nu1 L1[3] + (nu1+nu3)(nu1+nu3-1)")
            .unwrap();
        assert_eq!(lhs, c.eval("C[1,3]").unwrap());
    }

    #[test]
    fn powers_negation_and_rationals() {
        let c = ctx(3);
        assert_eq!(c.eval("-u1^2").unwrap(), -(c.eval("u1 u1").unwrap()));
        assert_eq!(c.eval("1/2 k + 1/2 k").unwrap(), c.eval("k").unwrap());
        assert_eq!(c.eval("(d1 + u1)^0").unwrap(), c.eval("1").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let c = ctx(4);
        assert!(matches!(c.parse("d1 +"), Err(DslError::Syntax { pos: 4, .. })));
        assert!(matches!(c.parse("foo"), Err(DslError::UnknownSymbol { pos: 0, .. })));
        assert!(matches!(
            c.parse("u1 u3"),
            Err(DslError::IndexOutOfBounds { pos: 3, index: 3, .. })
        ));
        assert!(matches!(c.parse("nu5"), Err(DslError::IndexOutOfBounds { .. })));
        assert!(matches!(c.parse("(u1"), Err(DslError::Syntax { .. })));
        assert!(matches!(c.parse("u1 $"), Err(DslError::Syntax { pos: 3, .. })));
        assert!(matches!(c.parse(""), Err(DslError::Syntax { .. })));
        assert!(matches!(c.parse("T[1]"), Err(DslError::Syntax { .. })));
        assert!(matches!(c.parse("L1[2]"), Err(DslError::IndexOutOfBounds { .. })));
        assert!(matches!(c.parse("1/0"), Err(DslError::Syntax { .. })));
        // structurally fine but rejected by the constructor
        assert!(matches!(c.eval("T[2,2]"), Err(DslError::Algebra(_))));
        assert!(matches!(c.eval("C[{1,1}]"), Err(DslError::Algebra(_))));
    }

    #[test]
    fn canonical_print_round_trips() {
        let c = ctx(4);
        for text in ["d1 u1", "0", "T[3,1] T[1,3]", "C[1,4]", "L4[4] - 3/2 nu2 d2^2"] {
            let op = c.eval(text).unwrap();
            let printed = print_canonical(&op);
            assert_eq!(c.eval(&printed).unwrap(), op, "{text} -> {printed}");
        }
        assert_eq!(print_canonical(&c.eval("d1 u1").unwrap()), "u1 d1 + 1");
    }

    #[test]
    fn ast_display_reparses() {
        let c = ctx(4);
        let ast = c.parse("-2 u1 d1^2 + C[{1,2,3}] - L5[4,3]").unwrap();
        assert_eq!(c.parse(&ast.to_string()).unwrap(), ast);
    }
}
