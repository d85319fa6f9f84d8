//! Differential realization of `sl_m` in the variables `u1..u(m-1)`.
//!
//! The generators are
//!
//! * `T_ij = -u_j d_i` for `i, j < m`,
//! * `T_im = -d_i`,
//! * `T_mj = u_j E`,
//! * `Td_d = -u_d d_d - E`,
//!
//! with the shifted Euler operator `E = sum u_i d_i - k`. The map
//! `E_ij -> T_ij`, `E_dd - E_mm -> Td_d` is a Lie algebra isomorphism; the
//! check suites below verify it together with the auxiliary identities used
//! to place `u_B E` and `u_B d_a` inside the enveloping algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use crate::coeffring::{Poly, Space};
use crate::error::AlgebraError;
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::weyl::WeylOp;

/// Rank `m` of the realized `sl_m`, plus the number of `nu` parameters the
/// coefficient ring should carry (zero unless shared with a Racah context).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DmContext {
    m: usize,
    nus: usize,
}

impl DmContext {
    pub fn new(m: usize) -> Result<Self, AlgebraError> {
        Self::with_params(m, 0)
    }

    pub fn with_params(m: usize, nus: usize) -> Result<Self, AlgebraError> {
        if m < 2 {
            return Err(AlgebraError::InvalidArgument(format!(
                "sl_m realization needs m >= 2, got {m}"
            )));
        }
        Ok(DmContext { m, nus })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> Space {
        Space::new(self.m - 1, self.nus)
    }

    fn check_var(&self, what: &'static str, i: usize) -> Result<(), AlgebraError> {
        if (1..self.m).contains(&i) {
            Ok(())
        } else {
            Err(AlgebraError::index(what, i, self.m - 1))
        }
    }

    fn check_subset(&self, set: &[usize]) -> Result<(), AlgebraError> {
        if set.is_empty() {
            return Err(AlgebraError::InvalidArgument("empty index set".into()));
        }
        for (pos, &i) in set.iter().enumerate() {
            self.check_var("subset element", i)?;
            if set[..pos].contains(&i) {
                return Err(AlgebraError::InvalidArgument(format!(
                    "repeated index {i} in subset"
                )));
            }
        }
        Ok(())
    }

    /// Generator image `T_ij`.
    pub fn t_op<S: Scalar>(&self, i: usize, j: usize) -> Result<WeylOp<S>, AlgebraError> {
        let m = self.m;
        for idx in [i, j] {
            if !(1..=m).contains(&idx) {
                return Err(AlgebraError::index("sl index", idx, m));
            }
        }
        if i == j {
            return Err(AlgebraError::InvalidArgument(format!(
                "T_ij needs i != j, got ({i}, {j})"
            )));
        }
        let s = self.space();
        Ok(if i == m {
            self.euler_op().left_mul_poly(&Poly::u(s, j))
        } else if j == m {
            -WeylOp::d(s, i)
        } else {
            -(WeylOp::u(s, j) * WeylOp::d(s, i))
        })
    }

    /// Generator image `Td_d = -u_d d_d - E`.
    pub fn ttilde_op<S: Scalar>(&self, d: usize) -> Result<WeylOp<S>, AlgebraError> {
        self.check_var("Td index", d)?;
        let s = self.space();
        Ok(-(WeylOp::u(s, d) * WeylOp::d(s, d)) - self.euler_op())
    }

    /// `E = sum_i u_i d_i - k`.
    pub fn euler_op<S: Scalar>(&self) -> WeylOp<S> {
        let s = self.space();
        (1..self.m).fold(WeylOp::from_poly(-Poly::k(s)), |acc, i| {
            acc + WeylOp::u(s, i) * WeylOp::d(s, i)
        })
    }

    /// `E` rebuilt from the generators: `(-1/m)(k + sum_d Td_d)`.
    pub fn euler_from_generators<S: Scalar>(&self) -> WeylOp<S> {
        let s = self.space();
        let sum = (1..self.m).fold(WeylOp::from_poly(Poly::k(s)), |acc, d| {
            acc + self.ttilde_op(d).expect("d in range")
        });
        sum.scale(&S::from_i64_ratio(-1, self.m as i64))
    }

    /// Linear extension of `E_ij -> T_ij`, `H_d -> Td_d`.
    pub fn sigma<S: Scalar>(&self, x: &SlElement<S>) -> Result<WeylOp<S>, AlgebraError> {
        if x.m != self.m {
            return Err(AlgebraError::ContextMismatch {
                left: format!("sl_{}", x.m),
                right: format!("sl_{}", self.m),
            });
        }
        let mut out = WeylOp::zero(self.space());
        for (b, c) in &x.terms {
            let img = match *b {
                SlBasis::E(i, j) => self.t_op(i, j)?,
                SlBasis::H(d) => self.ttilde_op(d)?,
            };
            out = out + img.scale(c);
        }
        Ok(out)
    }

    /// `u_B E` as the generator sum `sum_{j in B} T_mj`.
    pub fn u_set_euler<S: Scalar>(&self, set: &[usize]) -> Result<WeylOp<S>, AlgebraError> {
        self.check_subset(set)?;
        let mut out = WeylOp::zero(self.space());
        for &j in set {
            out = out + self.t_op(self.m, j)?;
        }
        Ok(out)
    }

    /// `u_B d_a` as `-[a in B](Td_a + E) - sum_{j in B, j != a} T_aj`.
    pub fn u_set_partial<S: Scalar>(
        &self,
        set: &[usize],
        alpha: usize,
    ) -> Result<WeylOp<S>, AlgebraError> {
        self.check_subset(set)?;
        self.check_var("derivative index", alpha)?;
        let mut out = WeylOp::zero(self.space());
        if delta(alpha, set) {
            out = out - (self.ttilde_op(alpha)? + self.euler_op());
        }
        for &j in set.iter().filter(|&&j| j != alpha) {
            out = out - self.t_op(alpha, j)?;
        }
        Ok(out)
    }

    /// All `m^2 - 1` basis elements, `E_ij` sorted by `(i, j)` then `H_d`.
    pub fn basis(&self) -> Vec<SlBasis> {
        SlBasis::all(self.m)
    }

    pub fn check_sl_homomorphism<S: Scalar>(&self) -> Report {
        let basis = self.basis();
        let images: Vec<WeylOp<S>> = basis
            .iter()
            .map(|b| self.sigma(&SlElement::basis(self.m, *b)).expect("basis image"))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|a| (0..basis.len()).map(move |b| (a, b)))
            .collect();
        let checks = pairs
            .par_iter()
            .map(|&(a, b)| {
                let started = Instant::now();
                let (x, y) = (basis[a], basis[b]);
                let id = format!("hom[{x},{y}]");
                let desc = format!("[sigma({x}), sigma({y})] = sigma([{x}, {y}])");
                let bracket = SlElement::<S>::basis(self.m, x).bracket(&SlElement::basis(self.m, y));
                match (
                    images[a].commutator(&images[b]),
                    bracket.and_then(|z| self.sigma(&z)),
                ) {
                    (Ok(lhs), Ok(rhs)) => Check::compare(id, desc, &lhs, &rhs, started),
                    (Err(e), _) | (_, Err(e)) => Check::failed(id, desc, &e),
                }
            })
            .collect();
        Report::new("sln-homomorphism", self.m, checks)
    }

    /// Both commutator identities
    /// `[u_B E, d_a] = -u_B d_a - [a in B] E` and `[u_A, d_a] = -[a in A]`.
    pub fn check_lemma1<S: Scalar>(&self) -> Report {
        let s = self.space();
        let euler: WeylOp<S> = self.euler_op();
        let mut cases = Vec::new();
        for set in nonempty_subsets(self.m - 1) {
            for alpha in 1..self.m {
                cases.push((set.clone(), alpha));
            }
        }
        let mut checks: Vec<Check> = cases
            .par_iter()
            .map(|(set, alpha)| {
                let started = Instant::now();
                let ub = Poly::<S>::u_sum(s, set.iter().copied());
                let d = WeylOp::d(s, *alpha);
                let lhs = euler
                    .left_mul_poly(&ub)
                    .commutator(&d)
                    .expect("same space");
                let mut rhs = -(WeylOp::from_poly(ub) * d);
                if delta(*alpha, set) {
                    rhs = rhs - euler.clone();
                }
                Check::compare(
                    format!("uBE{}:d{alpha}", fmt_set(set)),
                    format!("[u_B E, d{alpha}] = -u_B d{alpha} - delta E, B={}", fmt_set(set)),
                    &lhs,
                    &rhs,
                    started,
                )
            })
            .collect();
        checks.extend(cases.par_iter().map(|(set, alpha)| {
            let started = Instant::now();
            let ua = WeylOp::from_poly(Poly::<S>::u_sum(s, set.iter().copied()));
            let lhs = ua.commutator(&WeylOp::d(s, *alpha)).expect("same space");
            let rhs = if delta(*alpha, set) {
                -WeylOp::one(s)
            } else {
                WeylOp::zero(s)
            };
            Check::compare(
                format!("uA{}:d{alpha}", fmt_set(set)),
                format!("[u_A, d{alpha}] = -delta, A={}", fmt_set(set)),
                &lhs,
                &rhs,
                started,
            )
        }).collect::<Vec<_>>());
        Report::new("lemma1", self.m, checks)
    }

    /// Generator-membership identities: `u_B E`, `u_B d_a` and `E` rebuilt from generators.
    pub fn check_membership<S: Scalar>(&self) -> Report {
        let s = self.space();
        let euler: WeylOp<S> = self.euler_op();
        let started = Instant::now();
        let mut checks = vec![Check::compare(
            "euler",
            "E = (-1/m)(k + sum Td_d)",
            &euler,
            &self.euler_from_generators(),
            started,
        )];
        let sets = nonempty_subsets(self.m - 1);
        checks.extend(
            sets.par_iter()
                .map(|set| {
                    let started = Instant::now();
                    let ub = Poly::<S>::u_sum(s, set.iter().copied());
                    Check::compare(
                        format!("uBE{}", fmt_set(set)),
                        "sum_{j in B} T_mj = u_B E",
                        &self.u_set_euler(set).expect("valid subset"),
                        &euler.left_mul_poly(&ub),
                        started,
                    )
                })
                .collect::<Vec<_>>(),
        );
        let cases: Vec<(Vec<usize>, usize)> = sets
            .iter()
            .flat_map(|set| (1..self.m).map(move |a| (set.clone(), a)))
            .collect();
        checks.extend(
            cases
                .par_iter()
                .map(|(set, alpha)| {
                    let started = Instant::now();
                    let ub = Poly::<S>::u_sum(s, set.iter().copied());
                    Check::compare(
                        format!("uBd{}:{alpha}", fmt_set(set)),
                        format!("generator form of u_B d{alpha}"),
                        &self.u_set_partial(set, *alpha).expect("valid subset"),
                        &WeylOp::d(s, *alpha).left_mul_poly(&ub),
                        started,
                    )
                })
                .collect::<Vec<_>>(),
        );
        Report::new("sln-membership", self.m, checks)
    }

    /// Homomorphism and membership checks together.
    pub fn check_all<S: Scalar>(&self) -> Report {
        Report::merge(
            "sln",
            self.m,
            vec![self.check_sl_homomorphism::<S>(), self.check_membership::<S>()],
        )
    }
}

/// `delta_{aB}`: membership predicate.
pub fn delta(alpha: usize, set: &[usize]) -> bool {
    set.contains(&alpha)
}

/// Non-empty subsets of `{1..=max}` in ascending bitmask order.
pub fn nonempty_subsets(max: usize) -> Vec<Vec<usize>> {
    (1u64..(1 << max))
        .map(|mask| (1..=max).filter(|i| mask & (1 << (i - 1)) != 0).collect())
        .collect()
}

pub(crate) fn fmt_set(set: &[usize]) -> String {
    let inner: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Basis symbol of `sl_m`: a matrix unit `E_ij` (`i != j`) or `H_d = E_dd - E_mm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlBasis {
    E(usize, usize),
    H(usize),
}

impl SlBasis {
    pub fn all(m: usize) -> Vec<SlBasis> {
        let mut out: Vec<SlBasis> = (1..=m)
            .flat_map(|i| (1..=m).filter(move |&j| j != i).map(move |j| SlBasis::E(i, j)))
            .collect();
        out.extend((1..m).map(SlBasis::H));
        out
    }
}

impl fmt::Display for SlBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlBasis::E(i, j) => write!(f, "E{i}{j}"),
            SlBasis::H(d) => write!(f, "H{d}"),
        }
    }
}

/// Formal linear combination of `sl_m` basis symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SlElement<S> {
    m: usize,
    terms: BTreeMap<SlBasis, S>,
}

impl<S: Scalar> SlElement<S> {
    pub fn zero(m: usize) -> Self {
        SlElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(m: usize, b: SlBasis) -> Self {
        let mut x = Self::zero(m);
        x.terms.insert(b, S::one());
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (SlBasis, S)>>(
        m: usize,
        terms: I,
    ) -> Result<Self, AlgebraError> {
        let mut x = Self::zero(m);
        for (b, c) in terms {
            match b {
                SlBasis::E(i, j) if i == j || !(1..=m).contains(&i) || !(1..=m).contains(&j) => {
                    return Err(AlgebraError::InvalidArgument(format!("bad basis symbol {b}")))
                }
                SlBasis::H(d) if !(1..m).contains(&d) => {
                    return Err(AlgebraError::InvalidArgument(format!("bad basis symbol {b}")))
                }
                _ => {}
            }
            x.add_term(b, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, b: SlBasis, c: S) {
        let sum = self.terms.remove(&b).unwrap_or_else(S::zero) + c;
        if !sum.is_zero() {
            self.terms.insert(b, sum);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SlBasis, &S)> {
        self.terms.iter()
    }

    /// Dense `m x m` trace-zero matrix, row-major.
    pub fn to_matrix(&self) -> Vec<Vec<S>> {
        let m = self.m;
        let mut mat = vec![vec![S::zero(); m]; m];
        for (b, c) in &self.terms {
            match *b {
                SlBasis::E(i, j) => mat[i - 1][j - 1] = mat[i - 1][j - 1].clone() + c.clone(),
                SlBasis::H(d) => {
                    mat[d - 1][d - 1] = mat[d - 1][d - 1].clone() + c.clone();
                    mat[m - 1][m - 1] = mat[m - 1][m - 1].clone() - c.clone();
                }
            }
        }
        mat
    }

    /// Reads a trace-zero matrix back in the `E_ij`, `H_d` basis.
    pub fn from_matrix(mat: &[Vec<S>]) -> Result<Self, AlgebraError> {
        let m = mat.len();
        let trace = (0..m).fold(S::zero(), |acc, i| acc + mat[i][i].clone());
        if !trace.is_zero() {
            return Err(AlgebraError::InvalidArgument(format!(
                "matrix has nonzero trace {trace}"
            )));
        }
        let mut x = Self::zero(m);
        for (i, row) in mat.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if i != j {
                    x.add_term(SlBasis::E(i + 1, j + 1), c.clone());
                }
            }
        }
        // diag(a_1..a_m) with trace zero equals sum_{d<m} a_d H_d
        for (d, row) in mat.iter().enumerate().take(m.saturating_sub(1)) {
            x.add_term(SlBasis::H(d + 1), row[d].clone());
        }
        Ok(x)
    }

    /// Matrix commutator re-expressed in the basis.
    pub fn bracket(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.m != other.m {
            return Err(AlgebraError::ContextMismatch {
                left: format!("sl_{}", self.m),
                right: format!("sl_{}", other.m),
            });
        }
        let (a, b) = (self.to_matrix(), other.to_matrix());
        let m = self.m;
        let mut c = vec![vec![S::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = S::zero();
                for l in 0..m {
                    acc = acc + a[i][l].clone() * b[l][j].clone()
                        - b[i][l].clone() * a[l][j].clone();
                }
                c[i][j] = acc;
            }
        }
        Self::from_matrix(&c)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut x = Self::zero(self.m);
        for (b, v) in &self.terms {
            x.add_term(*b, v.clone() * c.clone());
        }
        x
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (b, v) in &other.terms {
            x.add_term(*b, v.clone());
        }
        x
    }
}
