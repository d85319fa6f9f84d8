//! Sparse multivariate polynomials over a [`Scalar`] field.
//!
//! The indeterminates are the commuting variables `u1..um` followed by the
//! formal parameters `k, nu1..nun`. Parameters are ordinary ring elements;
//! only the `u`'s can be differentiated.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// Shape of the ambient coefficient ring: number of `u` variables and of `nu` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Space {
    pub vars: usize,
    pub nus: usize,
}

impl Space {
    pub fn new(vars: usize, nus: usize) -> Self {
        Space { vars, nus }
    }

    /// Length of an exponent vector: `u`'s, then `k`, then the `nu`'s.
    pub fn width(&self) -> usize {
        self.vars + 1 + self.nus
    }

    pub fn slot(&self, sym: Symbol) -> Result<usize, AlgebraError> {
        match sym {
            Symbol::U(i) if (1..=self.vars).contains(&i) => Ok(i - 1),
            Symbol::U(i) => Err(AlgebraError::index("variable u", i, self.vars)),
            Symbol::K => Ok(self.vars),
            Symbol::Nu(i) if (1..=self.nus).contains(&i) => Ok(self.vars + i),
            Symbol::Nu(i) => Err(AlgebraError::index("parameter nu", i, self.nus)),
        }
    }

    pub fn symbol_at(&self, slot: usize) -> Symbol {
        if slot < self.vars {
            Symbol::U(slot + 1)
        } else if slot == self.vars {
            Symbol::K
        } else {
            Symbol::Nu(slot - self.vars)
        }
    }

    pub(crate) fn ensure_same(&self, other: &Space) -> Result<(), AlgebraError> {
        if self == other {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(vars={}, nus={})", self.vars, self.nus)
    }
}

/// A named indeterminate of the coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    U(usize),
    K,
    Nu(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::U(i) => write!(f, "u{i}"),
            Symbol::K => write!(f, "k"),
            Symbol::Nu(i) => write!(f, "nu{i}"),
        }
    }
}

/// Exponent vector ordered graded-lexicographically.
///
/// Larger total degree compares greater; ties are broken lexicographically
/// with the first slot most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial(vec![0; width])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Partial substitution of symbols by field values.
pub type Assignment<S> = BTreeMap<Symbol, S>;

/// Sparse polynomial in canonical form: no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    space: Space,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(space: Space) -> Self {
        Poly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: Space) -> Self {
        Self::constant(space, S::one())
    }

    pub fn constant(space: Space, c: S) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(space.width()), c);
        }
        p
    }

    pub fn symbol(space: Space, sym: Symbol) -> Result<Self, AlgebraError> {
        let slot = space.slot(sym)?;
        let mut exps = vec![0; space.width()];
        exps[slot] = 1;
        let mut p = Self::zero(space);
        p.terms.insert(Monomial(exps), S::one());
        Ok(p)
    }

    /// The variable `u_i`. Panics if `i` is outside `1..=vars`.
    pub fn u(space: Space, i: usize) -> Self {
        Self::symbol(space, Symbol::U(i)).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn k(space: Space) -> Self {
        Self::symbol(space, Symbol::K).unwrap_or_else(|e| panic!("{e}"))
    }

    /// The parameter `nu_i`. Panics if `i` is outside `1..=nus`.
    pub fn nu(space: Space, i: usize) -> Self {
        Self::symbol(space, Symbol::Nu(i)).unwrap_or_else(|e| panic!("{e}"))
    }

    /// `u_B = sum of u_i for i in B`.
    pub fn u_sum<I: IntoIterator<Item = usize>>(space: Space, indices: I) -> Self {
        indices
            .into_iter()
            .fold(Self::zero(space), |acc, i| acc + Self::u(space, i))
    }

    /// Builds a polynomial from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(space: Space, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            if m.0.len() != space.width() {
                return Err(AlgebraError::InvalidArgument(format!(
                    "exponent vector of length {} in space {space}",
                    m.0.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
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

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// The value if this is a constant polynomial (no variables, no parameters).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when some term carries a positive power of a `u` variable.
    pub fn depends_on_u(&self) -> bool {
        let vars = self.space.vars;
        self.terms.keys().any(|m| m.0[..vars].iter().any(|&e| e > 0))
    }

    /// Highest total degree in the `u` variables alone (0 for the zero polynomial).
    pub fn u_degree(&self) -> u32 {
        let vars = self.space.vars;
        self.terms
            .keys()
            .map(|m| m.0[..vars].iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.space.ensure_same(&other.space)?;
        let mut out = Self::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        Poly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.space), |acc, _| &acc * self)
    }

    /// Formal partial derivative with respect to `u_var` (1-based).
    pub fn diff(&self, var: usize) -> Result<Self, AlgebraError> {
        if !(1..=self.space.vars).contains(&var) {
            return Err(AlgebraError::index("variable u", var, self.space.vars));
        }
        Ok(self.diff_slot(var - 1))
    }

    pub(crate) fn diff_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[slot] -= 1;
            out.add_term(Monomial(exps), c.clone() * S::from_count(e as usize));
        }
        out
    }

    /// Replaces assigned symbols by values; unassigned symbols stay formal.
    pub fn substitute(&self, assignment: &Assignment<S>) -> Result<Self, AlgebraError> {
        let slots = assignment
            .iter()
            .map(|(sym, v)| Ok((self.space.slot(*sym)?, v)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        let mut out = Self::zero(self.space);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let mut coeff = c.clone();
            for (slot, v) in &slots {
                let e = exps[*slot];
                if e > 0 {
                    coeff = coeff * num_traits::pow((*v).clone(), e as usize);
                    exps[*slot] = 0;
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }

    /// Renders the monomial factors of an exponent vector (`u1^2 k nu3`).
    pub(crate) fn factor_names(space: Space, m: &Monomial) -> Vec<String> {
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(slot, &e)| {
                let name = space.symbol_at(slot).to_string();
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect()
    }
}

/// Appends `c * factors` to a `+`/`-` separated sum.
pub(crate) fn write_signed_term<S: Scalar>(
    out: &mut String,
    c: &S,
    factors: &[String],
) {
    let negative = c.is_negative();
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let mag = c.abs();
    if factors.is_empty() {
        out.push_str(&mag.to_string());
    } else {
        if !mag.is_one() {
            out.push_str(&mag.to_string());
            out.push(' ');
        }
        out.push_str(&factors.join(" "));
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            write_signed_term(&mut out, c, &Self::factor_names(self.space, m));
        }
        f.write_str(&out)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $tr:ident, $method:ident, $checked:ident) => {
        impl<'a, S: Scalar> $tr<&'a $ty<S>> for &'a $ty<S> {
            type Output = $ty<S>;
            fn $method(self, rhs: &'a $ty<S>) -> $ty<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<S: Scalar> $tr<$ty<S>> for $ty<S> {
            type Output = $ty<S>;
            fn $method(self, rhs: $ty<S>) -> $ty<S> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, S: Scalar> $tr<&'a $ty<S>> for $ty<S> {
            type Output = $ty<S>;
            fn $method(self, rhs: &'a $ty<S>) -> $ty<S> {
                (&self).$method(rhs)
            }
        }
        impl<'a, S: Scalar> $tr<$ty<S>> for &'a $ty<S> {
            type Output = $ty<S>;
            fn $method(self, rhs: $ty<S>) -> $ty<S> {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(Poly, Add, add, checked_add);
forward_binop!(Poly, Sub, sub, checked_sub);
forward_binop!(Poly, Mul, mul, checked_mul);

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, Rational};

    fn sp() -> Space {
        Space::new(2, 2)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn c(v: i64) -> QPoly {
        QPoly::constant(sp(), q(v, 1))
    }

    #[test]
    fn additive_cancellation_and_identity() {
        let u1 = QPoly::u(sp(), 1);
        assert_eq!(&(&u1 + &c(1)) + &(-&u1), c(1));
        assert_eq!(QPoly::zero(sp()) + u1.clone(), u1);
        let ku1 = QPoly::k(sp()) * u1.clone();
        let two = &ku1 + &ku1;
        assert_eq!(two, ku1.scale(&q(2, 1)));
        assert_eq!(two.len(), 1);
    }

    #[test]
    fn binomial_square_and_absorbing_zero() {
        let p = c(1) - QPoly::u(sp(), 1);
        let sq = &p * &p;
        let u1 = QPoly::u(sp(), 1);
        assert_eq!(sq, c(1) - u1.scale(&q(2, 1)) + &u1 * &u1);
        assert!((&p * &QPoly::zero(sp())).is_zero());
    }

    #[test]
    fn casimir_constant_term_expansion() {
        let n1 = QPoly::nu(sp(), 1);
        let n2 = QPoly::nu(sp(), 2);
        let s = &n1 + &n2;
        let lhs = &s * &(&s - &c(1));
        let rhs = &n1 * &n1 + (&n1 * &n2).scale(&q(2, 1)) + &n2 * &n2 - &n1 - &n2;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn differentiation_rules() {
        let u1 = QPoly::u(sp(), 1);
        let u2 = QPoly::u(sp(), 2);
        assert_eq!((&u1 * &u1 * &u2).diff(1).unwrap(), (&u1 * &u2).scale(&q(2, 1)));
        assert!((QPoly::k(sp()) * u1.clone()).diff(2).unwrap().is_zero());
        let lin = c(1) - u1.clone();
        assert_eq!((&lin * &lin).diff(1).unwrap(), lin.scale(&q(-2, 1)));
        assert!(matches!(
            u1.diff(3),
            Err(AlgebraError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(u1.diff(0).is_err());
    }

    #[test]
    fn substitution() {
        let k = QPoly::k(sp());
        let u1 = QPoly::u(sp(), 1);
        let mut a = Assignment::new();
        a.insert(Symbol::K, q(2, 1));
        assert_eq!((&k + &u1).substitute(&a).unwrap(), c(2) + u1.clone());

        let s = QPoly::nu(sp(), 1) + QPoly::nu(sp(), 2);
        let cas = &s * &(&s - &c(1));
        let mut a = Assignment::new();
        a.insert(Symbol::Nu(1), q(1, 2));
        a.insert(Symbol::Nu(2), q(3, 2));
        assert_eq!(cas.substitute(&a).unwrap(), c(2));
        assert_eq!(cas.substitute(&Assignment::new()).unwrap(), cas);

        let mut bad = Assignment::new();
        bad.insert(Symbol::Nu(7), q(1, 1));
        assert!(cas.substitute(&bad).is_err());
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = QPoly::one(Space::new(1, 0));
        let b = QPoly::one(Space::new(2, 0));
        assert!(matches!(
            a.checked_add(&b),
            Err(AlgebraError::ContextMismatch { .. })
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let u1 = QPoly::u(sp(), 1);
        let p = c(1) - u1.scale(&q(2, 1)) + &u1 * &u1;
        assert_eq!(p.to_string(), "u1^2 - 2 u1 + 1");
        let p = QPoly::k(sp()).scale(&q(-1, 2)) + QPoly::nu(sp(), 2);
        assert_eq!(p.to_string(), "-1/2 k + nu2");
        assert_eq!(QPoly::zero(sp()).to_string(), "0");
    }

    #[test]
    fn grlex_ordering() {
        let a = Monomial(vec![1, 0, 0]);
        let b = Monomial(vec![0, 1, 0]);
        let c = Monomial(vec![0, 0, 2]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn works_over_machine_rationals() {
        use crate::Rational64;
        let s = Space::new(1, 0);
        let u = Poly::<Rational64>::u(s, 1);
        let p = (&u + &Poly::one(s)).pow(3);
        assert_eq!(p.coefficient(&Monomial(vec![2, 0])), Rational64::from_integer(3));
    }
}
