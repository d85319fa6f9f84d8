//! Differential realization of the rank `n - 2` Racah algebra in the
//! variables `u1..u(n-2)`, with symbolic `k` and `nu1..nun`.
//!
//! Index `n - 1` never denotes a variable: `u_{n-1} = 0` and `d_{n-1} = 0`
//! wherever a formula reaches it.

use std::time::Instant;

use rayon::prelude::*;

use crate::coeffring::{Poly, Space};
use crate::error::AlgebraError;
use crate::report::{Check, Report};
use crate::scalar::Scalar;
use crate::sln::fmt_set;
use crate::weyl::WeylOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RacahContext {
    n: usize,
}

/// Non-empty subset of `{1..=n}`, sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetId(Vec<usize>);

impl SubsetId {
    pub fn new(n: usize, mut elems: Vec<usize>) -> Result<Self, AlgebraError> {
        if elems.is_empty() {
            return Err(AlgebraError::InvalidArgument("empty subset".into()));
        }
        elems.sort_unstable();
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(AlgebraError::InvalidArgument(format!(
                    "repeated element {} in subset",
                    w[0]
                )));
            }
        }
        if let Some(&bad) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(AlgebraError::index("subset element", bad, n));
        }
        Ok(SubsetId(elems))
    }

    /// Bit `i - 1` of `mask` selects element `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        SubsetId((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for SubsetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_set(&self.0))
    }
}

impl RacahContext {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        if n < 3 {
            return Err(AlgebraError::InvalidArgument(format!(
                "Racah realization needs n >= 3, got {n}"
            )));
        }
        Ok(RacahContext { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> Space {
        Space::new(self.n - 2, self.n)
    }

    /// `d_l`, or zero when `l` is the phantom index `n - 1`.
    pub(crate) fn d_or_zero<S: Scalar>(&self, l: usize) -> WeylOp<S> {
        if l == self.n - 1 {
            WeylOp::zero(self.space())
        } else {
            WeylOp::d(self.space(), l)
        }
    }

    /// `d_a - d_(a+1)`.
    pub(crate) fn d_step<S: Scalar>(&self, a: usize) -> WeylOp<S> {
        self.d_or_zero(a) - self.d_or_zero(a + 1)
    }

    /// `u_[lo, hi] = sum_{l=lo}^{hi} u_l`, dropping `u_{n-1}`.
    pub(crate) fn u_range<S: Scalar>(&self, lo: usize, hi: usize) -> Poly<S> {
        Poly::u_sum(self.space(), (lo..=hi).filter(|&l| l != self.n - 1))
    }

    /// `sum_l u_l d_l` without the `-k` shift.
    fn degree_op<S: Scalar>(&self) -> WeylOp<S> {
        let s = self.space();
        (1..=self.n - 2).fold(WeylOp::zero(s), |acc, l| {
            acc + WeylOp::u(s, l) * WeylOp::d(s, l)
        })
    }

    fn check_index(&self, i: usize) -> Result<(), AlgebraError> {
        if (1..=self.n).contains(&i) {
            Ok(())
        } else {
            Err(AlgebraError::index("Racah index", i, self.n))
        }
    }

    pub(crate) fn nu<S: Scalar>(&self, i: usize) -> Poly<S> {
        Poly::nu(self.space(), i)
    }

    /// `x (x - 1)` for a polynomial `x`.
    pub(crate) fn falling<S: Scalar>(x: &Poly<S>) -> Poly<S> {
        x * &(x - &Poly::one(x.space()))
    }

    /// `C_i = nu_i (nu_i - 1)`.
    pub fn c_single<S: Scalar>(&self, i: usize) -> Result<WeylOp<S>, AlgebraError> {
        self.check_index(i)?;
        Ok(WeylOp::from_poly(Self::falling(&self.nu(i))))
    }

    /// `C_ij` for an unordered pair; the arguments may come in either order.
    pub fn c_pair<S: Scalar>(&self, a: usize, b: usize) -> Result<WeylOp<S>, AlgebraError> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(AlgebraError::InvalidArgument(format!(
                "C_ij needs distinct indices, got ({a}, {b})"
            )));
        }
        let (i, j) = if a > b { (a, b) } else { (b, a) };
        let s = self.space();
        let one = WeylOp::one(s);
        let two = S::from_count(2);
        let k = WeylOp::from_poly(Poly::k(s));
        let eu = self.degree_op();
        let d1 = WeylOp::d(s, 1);
        let two_nu = |l: usize| self.nu::<S>(l).scale(&two);
        let constant = WeylOp::from_poly(Self::falling(&(self.nu(i) + self.nu(j))));

        let op = match (j, i) {
            (1, 2) => {
                // -(k-1-Eu)(-k-d1+Eu) + 2nu2(k-Eu) - 2nu1(-k-d1+Eu)
                let lowered = -&k - &d1 + &eu;
                -((&k - &one - &eu) * &lowered)
                    + (&k - &eu).left_mul_poly(&two_nu(2))
                    - lowered.left_mul_poly(&two_nu(1))
            }
            (1, j) => {
                let w = Poly::one(s) - self.u_range(1, j - 2);
                let step = self.d_step(j - 2);
                -((&k - &one - &eu) * &step).left_mul_poly(&(&w * &w))
                    + (&k - &eu).left_mul_poly(&(&w * &two_nu(j)))
                    - step.left_mul_poly(&(&w * &two_nu(1)))
            }
            (2, j) => {
                let w = self.u_range(1, j - 2);
                let step = self.d_step(j - 2);
                -((&one - &k - &d1 + &eu) * &step).left_mul_poly(&(&w * &w))
                    + (&k + &d1 - &eu).left_mul_poly(&(&w * &two_nu(j)))
                    + step.left_mul_poly(&(&w * &two_nu(2)))
            }
            (j, i) => {
                let w = self.u_range(j - 1, i - 2);
                let step_i = self.d_step(i - 2);
                let step_j = self.d_step(j - 2);
                -(&step_i * &step_j).left_mul_poly(&(&w * &w))
                    + step_i.left_mul_poly(&(&w * &two_nu(j)))
                    - step_j.left_mul_poly(&(&w * &two_nu(i)))
            }
        };
        Ok(op + constant)
    }

    /// `C_A = sum_{{i,j} in A} C_ij - (|A| - 2) sum_{i in A} C_i`.
    pub fn c_set<S: Scalar>(&self, set: &SubsetId) -> Result<WeylOp<S>, AlgebraError> {
        let a = set.elems();
        if let Some(&bad) = a.iter().find(|&&e| e == 0 || e > self.n) {
            return Err(AlgebraError::index("subset element", bad, self.n));
        }
        match a.len() {
            0 => Err(AlgebraError::InvalidArgument("empty subset".into())),
            1 => self.c_single(a[0]),
            2 => self.c_pair(a[0], a[1]),
            len => {
                let mut out = WeylOp::zero(self.space());
                for (p, &i) in a.iter().enumerate() {
                    for &j in &a[p + 1..] {
                        out = out + self.c_pair(i, j)?;
                    }
                }
                let mut singles = WeylOp::zero(self.space());
                for &i in a {
                    singles = singles + self.c_single(i)?;
                }
                Ok(out - singles.scale(&S::from_count(len - 2)))
            }
        }
    }

    /// All non-empty subsets of `[n]` in ascending bitmask order.
    pub fn subsets(&self) -> Vec<SubsetId> {
        (1u64..(1 << self.n))
            .map(|mask| SubsetId::from_mask(self.n, mask))
            .collect()
    }

    /// Commutativity of intermediate Casimirs on disjoint and on nested
    /// subsets, plus the action of the full Casimir on the constant 1.
    pub fn check_racah_structure<S: Scalar>(&self) -> Report {
        let n = self.n;
        let full = (1u64 << n) - 1;
        let ops: Vec<WeylOp<S>> = (1..=full)
            .into_par_iter()
            .map(|mask| {
                self.c_set(&SubsetId::from_mask(n, mask))
                    .expect("subset in range")
            })
            .collect();
        let op = |mask: u64| &ops[(mask - 1) as usize];

        let mut pairs = Vec::new();
        for a in 1..=full {
            for b in (a + 1)..=full {
                let kind = if a & b == 0 {
                    "disjoint"
                } else if a & b == a || a & b == b {
                    "nested"
                } else {
                    continue;
                };
                pairs.push((a, b, kind));
            }
        }
        let zero = WeylOp::zero(self.space());
        let mut checks: Vec<Check> = pairs
            .par_iter()
            .map(|&(a, b, kind)| {
                let started = Instant::now();
                let (sa, sb) = (SubsetId::from_mask(n, a), SubsetId::from_mask(n, b));
                let lhs = op(a).commutator(op(b)).expect("same space");
                Check::compare(
                    format!("[C{sa},C{sb}]"),
                    format!("{kind} subsets commute"),
                    &lhs,
                    &zero,
                    started,
                )
            })
            .collect();

        let started = Instant::now();
        let lowest = op(full).apply(&Poly::one(self.space())).expect("same space");
        checks.push(Check::boolean(
            "full-casimir-on-1",
            "C_[n] applied to 1 has no u-dependence",
            lowest.to_string(),
            "polynomial in k, nu only",
            !lowest.depends_on_u(),
            started,
        ));
        Report::new("racah", n, checks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{QPoly, QWeylOp, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn singles_are_central_scalars() {
        let ctx = RacahContext::new(4).unwrap();
        let s = ctx.space();
        let c1: QWeylOp = ctx.c_single(1).unwrap();
        let nu1 = QPoly::nu(s, 1);
        assert_eq!(c1.as_poly().unwrap(), &nu1 * &(&nu1 - &QPoly::one(s)));
        let c13: QWeylOp = ctx.c_pair(1, 3).unwrap();
        assert!(c1.commutator(&c13).unwrap().is_zero());
        let mut a = crate::QAssignment::new();
        a.insert(crate::Symbol::Nu(1), q(1));
        assert!(c1.substitute(&a).unwrap().is_zero());
        assert!(ctx.c_single::<Rational>(5).is_err());
    }

    #[test]
    fn c12_on_constant() {
        for n in 3..=6 {
            let ctx = RacahContext::new(n).unwrap();
            let s = ctx.space();
            let c12: QWeylOp = ctx.c_pair(1, 2).unwrap();
            let x = QPoly::k(s) + QPoly::nu(s, 1) + QPoly::nu(s, 2);
            let expected = &x * &(&x - &QPoly::one(s));
            assert_eq!(c12.apply(&QPoly::one(s)).unwrap(), expected);
        }
    }

    #[test]
    fn c_ij_uses_shifted_ranges() {
        // n = 5, (i, j) = (4, 3): w = u2, steps d2 - d3 (d3 absent) and d1 - d2
        let ctx = RacahContext::new(5).unwrap();
        let s = ctx.space();
        let c43: QWeylOp = ctx.c_pair(4, 3).unwrap();
        let w = QPoly::u(s, 2);
        let si = QWeylOp::d(s, 2) - QWeylOp::d(s, 3);
        let sj = QWeylOp::d(s, 1) - QWeylOp::d(s, 2);
        let two = q(2);
        let expected = -(&si * &sj).left_mul_poly(&(&w * &w))
            + si.left_mul_poly(&(&w * &QPoly::nu(s, 3).scale(&two)))
            - sj.left_mul_poly(&(&w * &QPoly::nu(s, 4).scale(&two)))
            + QWeylOp::from_poly(RacahContext::falling(&(QPoly::nu(s, 4) + QPoly::nu(s, 3))));
        assert_eq!(c43, expected);
    }

    #[test]
    fn c1n_has_no_phantom_derivative() {
        // the phantom d_{n-1} simply does not exist as a variable; the
        // operator must only involve d1..d_{n-2}
        let ctx = RacahContext::new(4).unwrap();
        let c14: QWeylOp = ctx.c_pair(1, 4).unwrap();
        assert_eq!(c14.space().vars, 2);
        let s = ctx.space();
        // step at j-2 = 2 is d2 alone
        assert_eq!(ctx.d_step::<Rational>(2), QWeylOp::d(s, 2));
    }

    #[test]
    fn pair_normalization() {
        let ctx = RacahContext::new(5).unwrap();
        for i in 1..=5 {
            for j in 1..=5 {
                if i != j {
                    assert_eq!(
                        ctx.c_pair::<Rational>(i, j).unwrap(),
                        ctx.c_pair::<Rational>(j, i).unwrap()
                    );
                }
            }
        }
        assert!(ctx.c_pair::<Rational>(2, 2).is_err());
        assert!(ctx.c_pair::<Rational>(0, 2).is_err());
        assert!(ctx.c_pair::<Rational>(6, 2).is_err());
    }

    #[test]
    fn c_set_cases() {
        let ctx = RacahContext::new(4).unwrap();
        let set = |v: Vec<usize>| SubsetId::new(4, v).unwrap();
        assert_eq!(
            ctx.c_set::<Rational>(&set(vec![3])).unwrap(),
            ctx.c_single(3).unwrap()
        );
        assert_eq!(
            ctx.c_set::<Rational>(&set(vec![2, 1])).unwrap(),
            ctx.c_pair(1, 2).unwrap()
        );
        let c123: QWeylOp = ctx.c_set(&set(vec![1, 2, 3])).unwrap();
        let expected = ctx.c_pair::<Rational>(1, 2).unwrap()
            + ctx.c_pair(1, 3).unwrap()
            + ctx.c_pair(2, 3).unwrap()
            - ctx.c_single(1).unwrap()
            - ctx.c_single(2).unwrap()
            - ctx.c_single(3).unwrap();
        assert_eq!(c123, expected);
        assert!(SubsetId::new(4, vec![]).is_err());
        assert!(SubsetId::new(4, vec![5]).is_err());
        assert!(SubsetId::new(4, vec![1, 1]).is_err());
    }

    #[test]
    fn disjoint_and_full_commute_n4() {
        let ctx = RacahContext::new(4).unwrap();
        let c12: QWeylOp = ctx.c_pair(1, 2).unwrap();
        let c34: QWeylOp = ctx.c_pair(3, 4).unwrap();
        assert!(c12.commutator(&c34).unwrap().is_zero());
        let full: QWeylOp = ctx.c_set(&SubsetId::new(4, vec![1, 2, 3, 4]).unwrap()).unwrap();
        assert!(full.commutator(&c12).unwrap().is_zero());
        assert!(c12.commutator(&c12).unwrap().is_zero());
    }

    #[test]
    fn structure_report_n3() {
        let r = RacahContext::new(3).unwrap().check_racah_structure::<Rational>();
        assert!(r.all_passed(), "{r}");
        // 7 subsets: 6 disjoint unordered pairs + 12 nested + full-casimir check
        assert_eq!(r.checks.len(), 6 + 12 + 1);
    }

    #[test]
    fn rank_precondition() {
        assert!(RacahContext::new(2).is_err());
    }
}
