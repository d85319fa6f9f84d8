//! The Weyl algebra: differential operators with polynomial coefficients.
//!
//! A [`WeylOp`] is stored in normal order, `sum_alpha p_alpha(u, k, nu) * d^alpha`,
//! with every multiplication operator to the left of every derivative.
//! Because the normal form is unique, operator equality is map equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeffring::{forward_binop, write_signed_term, Monomial, Poly, Space};
use crate::error::AlgebraError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct WeylOp<S> {
    space: Space,
    // derivative exponent (length = space.vars) -> coefficient
    terms: BTreeMap<Monomial, Poly<S>>,
}

impl<S: Scalar> WeylOp<S> {
    pub fn zero(space: Space) -> Self {
        WeylOp {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: Space) -> Self {
        Self::from_poly(Poly::one(space))
    }

    pub fn scalar(space: Space, c: S) -> Self {
        Self::from_poly(Poly::constant(space, c))
    }

    /// Multiplication by a polynomial.
    pub fn from_poly(p: Poly<S>) -> Self {
        let space = p.space();
        let mut op = Self::zero(space);
        op.add_term(Monomial::one(space.vars), p);
        op
    }

    /// `coefficient * d^exps`.
    pub fn term(coefficient: Poly<S>, exps: Vec<u32>) -> Result<Self, AlgebraError> {
        let space = coefficient.space();
        if exps.len() != space.vars {
            return Err(AlgebraError::InvalidArgument(format!(
                "derivative exponent of length {} in space {space}",
                exps.len()
            )));
        }
        let mut op = Self::zero(space);
        op.add_term(Monomial(exps), coefficient);
        Ok(op)
    }

    pub fn partial(space: Space, i: usize) -> Result<Self, AlgebraError> {
        if !(1..=space.vars).contains(&i) {
            return Err(AlgebraError::index("derivative d", i, space.vars));
        }
        let mut exps = vec![0; space.vars];
        exps[i - 1] = 1;
        Self::term(Poly::one(space), exps)
    }

    /// The derivative `d_i`. Panics if `i` is outside `1..=vars`.
    pub fn d(space: Space, i: usize) -> Self {
        Self::partial(space, i).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Multiplication by `u_i`. Panics if `i` is outside `1..=vars`.
    pub fn u(space: Space, i: usize) -> Self {
        Self::from_poly(Poly::u(space, i))
    }

    fn add_term(&mut self, exps: Monomial, coeff: Poly<S>) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Normal-ordered terms, ascending in graded-lex order of the derivative exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Poly<S>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Poly<S> {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.space))
    }

    /// The multiplication polynomial, if the operator has no derivative part.
    pub fn as_poly(&self) -> Option<Poly<S>> {
        match self.terms.len() {
            0 => Some(Poly::zero(self.space)),
            1 => {
                let (m, p) = self.terms.iter().next()?;
                m.is_one().then(|| p.clone())
            }
            _ => None,
        }
    }

    /// Highest derivative order appearing.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest possible increase of `u`-degree when acting on a polynomial.
    pub fn degree_raise(&self) -> i64 {
        self.terms
            .iter()
            .map(|(m, p)| p.u_degree() as i64 - m.degree() as i64)
            .max()
            .unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), -p);
        }
        Ok(out)
    }

    /// Normal-ordered composition `self ∘ other`.
    ///
    /// Uses `d^a ∘ q = sum_{g <= a} binom(a, g) (d^g q) d^(a - g)` per pair of terms.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = Self::zero(self.space);
        for (alpha, p) in &self.terms {
            for (beta, q) in &other.terms {
                for gamma in sub_exponents(&alpha.0) {
                    let mut dq = q.clone();
                    for (slot, &g) in gamma.iter().enumerate() {
                        for _ in 0..g {
                            dq = dq.diff_slot(slot);
                        }
                    }
                    if dq.is_zero() {
                        continue;
                    }
                    let binom = alpha
                        .0
                        .iter()
                        .zip(&gamma)
                        .map(|(&a, &g)| binomial(a, g))
                        .product::<u64>();
                    let coeff = (p * &dq).scale(&S::from_u64(binom).expect("binomial"));
                    let exps = alpha
                        .0
                        .iter()
                        .zip(&gamma)
                        .zip(&beta.0)
                        .map(|((&a, &g), &b)| a - g + b)
                        .collect();
                    out.add_term(Monomial(exps), coeff);
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Acts on a polynomial.
    pub fn apply(&self, p: &Poly<S>) -> Result<Poly<S>, AlgebraError> {
        self.space.ensure_same(&p.space())?;
        let mut out = Poly::zero(self.space);
        for (alpha, coeff) in &self.terms {
            let mut dp = p.clone();
            for (slot, &a) in alpha.0.iter().enumerate() {
                for _ in 0..a {
                    dp = dp.diff_slot(slot);
                }
            }
            if !dp.is_zero() {
                out = out + coeff * &dp;
            }
        }
        Ok(out)
    }

    /// Operator equality; errors only on mismatched spaces.
    pub fn equals(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.checked_sub(other)?.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.left_mul_poly(&Poly::constant(self.space, c.clone()))
    }

    /// `p ∘ self`; stays normal-ordered since `p` is a multiplication operator.
    pub fn left_mul_poly(&self, p: &Poly<S>) -> Self {
        let mut out = Self::zero(self.space);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), p * coeff);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.space), |acc, _| &acc * self)
    }

    /// Substitutes symbols inside every coefficient.
    pub fn substitute(
        &self,
        assignment: &crate::coeffring::Assignment<S>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(self.space);
        for (m, coeff) in &self.terms {
            out.add_term(m.clone(), coeff.substitute(assignment)?);
        }
        Ok(out)
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// All exponent vectors componentwise `<= top`.
fn sub_exponents(top: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(top.len())];
    for &t in top {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=t).map(move |g| {
                    let mut v = prefix.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
    }
    out
}

impl<S: Scalar> fmt::Display for WeylOp<S> {
    /// Canonical rendering: one monomial per term, derivative part descending
    /// in graded-lex order, then coefficient monomials descending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (alpha, coeff) in self.terms.iter().rev() {
            let dnames: Vec<String> = alpha
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("d{}", i + 1)
                    } else {
                        format!("d{}^{e}", i + 1)
                    }
                })
                .collect();
            for (m, c) in coeff.terms().rev() {
                let mut factors = Poly::<S>::factor_names(self.space, m);
                factors.extend(dnames.iter().cloned());
                write_signed_term(&mut out, c, &factors);
            }
        }
        f.write_str(&out)
    }
}

forward_binop!(WeylOp, Add, add, checked_add);
forward_binop!(WeylOp, Sub, sub, checked_sub);
forward_binop!(WeylOp, Mul, mul, checked_mul);

impl<S: Scalar> Neg for &WeylOp<S> {
    type Output = WeylOp<S>;
    fn neg(self) -> WeylOp<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for WeylOp<S> {
    type Output = WeylOp<S>;
    fn neg(self) -> WeylOp<S> {
        -&self
    }
}

impl<S: Scalar> From<Poly<S>> for WeylOp<S> {
    fn from(p: Poly<S>) -> Self {
        WeylOp::from_poly(p)
    }
}
