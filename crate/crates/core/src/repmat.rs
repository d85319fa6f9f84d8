//! Exact matrix model of operators acting on polynomials of bounded degree.
//!
//! For numeric `k` and `nu`'s, an operator restricted to `Pi_k` (polynomials
//! of total degree `<= k` in the realization variables) is a finite square
//! matrix. The matrices are built by letting the operator act on each basis
//! monomial, independently of the normal-ordering product, so they serve as
//! an oracle for every symbolic identity.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::coeffring::{Assignment, Monomial, Poly, Space, Symbol};
use crate::embed::Provenance;
use crate::error::AlgebraError;
use crate::scalar::Scalar;
use crate::sln::DmContext;
use crate::weyl::WeylOp;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("leakage: image of basis monomial {column} has a component {monomial} outside degree <= {bound}")]
    Leakage {
        column: String,
        monomial: String,
        bound: u32,
    },
    #[error("k = {assigned} must equal the basis degree bound {bound}")]
    KMismatch { assigned: u32, bound: u32 },
    #[error("expected {expected} nu values, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("basis has {basis} variables but operator acts on {op}")]
    VariableCount { basis: usize, op: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Monomials of total degree `<= k` in `vars` variables, graded-lex ordered
/// (ascending degree, `u1` before `u2` within a degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiBasis {
    vars: usize,
    k: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl PiBasis {
    pub fn new(vars: usize, k: u32) -> Self {
        let mut monomials = Vec::new();
        for d in 0..=k {
            let mut layer = Vec::new();
            compositions(vars, d, &mut Vec::new(), &mut layer);
            layer.sort_by(|a, b| b.cmp(a));
            monomials.extend(layer);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        PiBasis {
            vars,
            k,
            monomials,
            index,
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn name(&self, idx: usize) -> String {
        let exps = &self.monomials[idx];
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("u{}", i + 1) } else { format!("u{}^{e}", i + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn poly<S: Scalar>(&self, idx: usize, space: Space) -> Poly<S> {
        let mut exps = self.monomials[idx].clone();
        exps.resize(space.width(), 0);
        Poly::from_terms(space, [(Monomial(exps), S::one())]).expect("width matches")
    }
}

fn compositions(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in 0..=total {
        prefix.push(e);
        compositions(parts - 1, total - e, prefix, out);
        prefix.pop();
    }
}

/// Numeric values for `k` and `nu1..nun`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamValues<S> {
    pub k: u32,
    pub nus: Vec<S>,
}

impl<S: Scalar> ParamValues<S> {
    pub fn new(k: u32, nus: Vec<S>) -> Self {
        ParamValues { k, nus }
    }

    fn assignment(&self, space: Space) -> Result<Assignment<S>, RepError> {
        if self.nus.len() != space.nus {
            return Err(RepError::ParameterCount {
                expected: space.nus,
                got: self.nus.len(),
            });
        }
        let mut a = Assignment::new();
        a.insert(Symbol::K, S::from_count(self.k as usize));
        for (i, v) in self.nus.iter().enumerate() {
            a.insert(Symbol::Nu(i + 1), v.clone());
        }
        Ok(a)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> OpMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        OpMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    /// Zero-pads rows so the matrix maps into a larger codomain.
    pub fn pad_rows(&self, rows: usize) -> Self {
        assert!(rows >= self.rows);
        let mut data = self.data.clone();
        data.resize(rows * self.cols, S::zero());
        OpMatrix {
            rows,
            cols: self.cols,
            data,
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RepError> {
        if self.cols != other.rows {
            return Err(RepError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, RepError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(RepError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(OpMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RepError> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RepError> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }
}

impl<'a, S: Scalar> Mul<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn mul(self, rhs: &'a OpMatrix<S>) -> OpMatrix<S> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, S: Scalar> Add<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn add(self, rhs: &'a OpMatrix<S>) -> OpMatrix<S> {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a, S: Scalar> Sub<&'a OpMatrix<S>> for &'a OpMatrix<S> {
    type Output = OpMatrix<S>;
    fn sub(self, rhs: &'a OpMatrix<S>) -> OpMatrix<S> {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<S: Scalar> fmt::Display for OpMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl OpMatrix<Rational> {
    /// Row-major dump, every entry written as `p/q`, one row per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let v = self.get(r, c);
                    format!("{}/{}", v.numer(), v.denom())
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Matrix of `op` from `domain` into `codomain`, any numeric `k`.
pub fn to_matrix_between<S: Scalar>(
    op: &WeylOp<S>,
    domain: &PiBasis,
    codomain: &PiBasis,
    values: &ParamValues<S>,
) -> Result<OpMatrix<S>, RepError> {
    let space = op.space();
    for b in [domain, codomain] {
        if b.vars != space.vars {
            return Err(RepError::VariableCount {
                basis: b.vars,
                op: space.vars,
            });
        }
    }
    let numeric = op.substitute(&values.assignment(space)?)?;
    let mut mat = OpMatrix::zeros(codomain.len(), domain.len());
    for col in 0..domain.len() {
        let image = numeric.apply(&domain.poly(col, space))?;
        for (m, c) in image.terms() {
            let row = if m.0[space.vars..].iter().all(|&e| e == 0) {
                codomain.position(&m.0[..space.vars])
            } else {
                None
            };
            match row {
                Some(r) => mat.set(r, col, c.clone()),
                None => {
                    return Err(RepError::Leakage {
                        column: domain.name(col),
                        monomial: Poly::<S>::factor_names(space, m).join(" "),
                        bound: codomain.k,
                    })
                }
            }
        }
    }
    Ok(mat)
}

/// Square matrix of `op` on `Pi_k`; `k` must equal the basis bound.
pub fn to_matrix<S: Scalar>(
    op: &WeylOp<S>,
    basis: &PiBasis,
    values: &ParamValues<S>,
) -> Result<OpMatrix<S>, RepError> {
    if values.k != basis.k {
        return Err(RepError::KMismatch {
            assigned: values.k,
            bound: basis.k,
        });
    }
    to_matrix_between(op, basis, basis, values)
}

/// Matrix equality of two operators on `Pi_k`.
pub fn mat_check_identity<S: Scalar>(
    lhs: &WeylOp<S>,
    rhs: &WeylOp<S>,
    basis: &PiBasis,
    values: &ParamValues<S>,
) -> Result<bool, RepError> {
    Ok(to_matrix(lhs, basis, values)? == to_matrix(rhs, basis, values)?)
}

/// Matrix of the composition `factors[0] ∘ factors[1] ∘ ...` on `Pi_k`,
/// computed as a product of rectangular factor matrices. Each factor gets a
/// codomain large enough for its degree raise, so non-invariant factors
/// (plain multiplication by `u`) are allowed. Returns the product together
/// with its codomain.
pub fn chain_matrix<S: Scalar>(
    factors: &[&WeylOp<S>],
    domain: &PiBasis,
    values: &ParamValues<S>,
) -> Result<(OpMatrix<S>, PiBasis), RepError> {
    let mut current = domain.clone();
    let mut acc = OpMatrix::identity(domain.len());
    for op in factors.iter().rev() {
        let bound = (current.k as i64 + op.degree_raise().max(0)) as u32;
        let next = PiBasis::new(domain.vars, bound);
        let m = to_matrix_between(op, &current, &next, values)?;
        acc = m.checked_mul(&acc)?;
        current = next;
    }
    Ok((acc, current))
}

/// Matrix of a provenance tree on `Pi_k`, built from generator matrices by
/// matrix sums and products only.
pub fn provenance_matrix<S: Scalar>(
    tree: &Provenance<S>,
    dm: &DmContext,
    basis: &PiBasis,
    values: &ParamValues<S>,
) -> Result<OpMatrix<S>, RepError> {
    let space = dm.space();
    let assignment = values.assignment(space)?;
    let dim = basis.len();
    tree.fold(
        &|g| {
            let op = Provenance::Generator(g).evaluate(dm)?;
            to_matrix(&op, basis, values)
        },
        &|p: &Poly<S>| {
            let c = p.substitute(&assignment)?.as_constant().ok_or_else(|| {
                RepError::Algebra(AlgebraError::InvalidArgument(format!(
                    "scalar leaf {p} is not constant after substitution"
                )))
            })?;
            Ok(OpMatrix::identity(dim).scale(&c))
        },
        &|a, b| &a + &b,
        &|a, b| &a * &b,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, QWeylOp};
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = PiBasis::new(2, 1);
        assert_eq!(b.monomials(), &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(PiBasis::new(2, 0).len(), 1);
        assert_eq!(PiBasis::new(3, 3).len(), 20);
        let b = PiBasis::new(2, 2);
        assert_eq!(b.name(3), "u1^2");
        assert_eq!(b.name(4), "u1 u2");
    }

    #[test]
    fn derivative_matrix() {
        let s = Space::new(2, 0);
        let b = PiBasis::new(2, 1);
        let v = ParamValues::new(1, vec![]);
        let m = to_matrix(&QWeylOp::d(s, 1), &b, &v).unwrap();
        assert_eq!(*m.get(0, 1), q(1, 1));
        assert_eq!(m.data.iter().filter(|x| !x.is_zero()).count(), 1);
    }

    #[test]
    fn euler_is_diagonal() {
        let dm = DmContext::new(3).unwrap();
        let b = PiBasis::new(2, 1);
        let v = ParamValues::new(1, vec![]);
        let m = to_matrix(&dm.euler_op::<Rational>(), &b, &v).unwrap();
        let mut expected = OpMatrix::zeros(3, 3);
        expected.set(0, 0, q(-1, 1));
        assert_eq!(m, expected);
    }

    #[test]
    fn raising_generator_does_not_leak_at_k() {
        let dm = DmContext::new(3).unwrap();
        let b = PiBasis::new(2, 1);
        let v = ParamValues::new(1, vec![]);
        let op = dm.u_set_euler::<Rational>(&[1]).unwrap();
        let m = to_matrix(&op, &b, &v).unwrap();
        // image of 1 is -k u1 = -u1; image of u1 is (1 - 1) u1^2 = 0
        assert_eq!(*m.get(1, 0), q(-1, 1));
        assert!((0..3).all(|r| m.get(r, 1).is_zero()));
    }

    #[test]
    fn leakage_and_k_mismatch() {
        let s = Space::new(2, 0);
        let b = PiBasis::new(2, 1);
        let v = ParamValues::new(1, vec![]);
        let err = to_matrix(&QWeylOp::u(s, 1), &b, &v).unwrap_err();
        assert!(matches!(err, RepError::Leakage { .. }), "{err}");
        let v2 = ParamValues::new(2, vec![]);
        assert!(matches!(
            to_matrix(&QWeylOp::d(s, 1), &b, &v2),
            Err(RepError::KMismatch { .. })
        ));
        let v3 = ParamValues::new(1, vec![q(1, 2)]);
        assert!(matches!(
            to_matrix(&QWeylOp::d(s, 1), &b, &v3),
            Err(RepError::ParameterCount { .. })
        ));
    }

    #[test]
    fn identity_check_distinguishes_orderings() {
        let s = Space::new(2, 0);
        let b = PiBasis::new(2, 2);
        let v = ParamValues::new(2, vec![]);
        let d1 = QWeylOp::d(s, 1);
        let u1 = QWeylOp::u(s, 1);
        let (a, cod) = chain_matrix(&[&d1, &u1], &b, &v).unwrap();
        let (c, cod2) = chain_matrix(&[&u1, &d1], &b, &v).unwrap();
        assert_eq!(cod.k(), cod2.k());
        assert_ne!(a, c);
        let diff = &a - &c;
        let id = OpMatrix::<Rational>::identity(cod.len());
        // d1 u1 - u1 d1 = 1 on Pi_k, seen inside the larger codomain
        let expected = to_matrix_between(&QWeylOp::one(s), &b, &cod, &v).unwrap();
        assert_eq!(diff, expected);
        assert_eq!(id.rows(), cod.len());
        assert!(!mat_check_identity(&(&d1 * &u1), &(&u1 * &d1), &b, &v).unwrap());
    }

    #[test]
    fn dump_format() {
        let s = Space::new(1, 0);
        let b = PiBasis::new(1, 1);
        let v = ParamValues::new(1, vec![]);
        let op = QWeylOp::from_poly(QPoly::constant(s, q(1, 2))) + QWeylOp::d(s, 1);
        let m = to_matrix(&op, &b, &v).unwrap();
        assert_eq!(m.dump(), "1/2 1/1\n0/1 1/2\n");
    }
}
