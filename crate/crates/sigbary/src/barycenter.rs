//! Barycenters of group-like samples.
//!
//! The barycenter of x_1..x_N is the unique group-like m whose residual
//! sum_i log(m^{-1} x_i) vanishes. Because the level-j slice of the residual
//! depends on m only through its components of level <= j, and linearly in
//! the level-j one with coefficient -N, the system solves in a single sweep
//! from level 1 upward.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::tensor_algebra::{
    exp, group_inverse, is_grouplike, linear_combine, log, mul, TensorSeq,
};

/// A nonempty list of group-like elements sharing one ambient space.
#[derive(Clone, Debug)]
pub struct GroupSample {
    members: Vec<TensorSeq>,
}

impl GroupSample {
    pub fn new(members: Vec<TensorSeq>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySample);
        }
        let (dim, level) = (members[0].dim(), members[0].level());
        for (index, member) in members.iter().enumerate() {
            if member.dim() != dim || member.level() != level {
                return Err(Error::ContextMismatch(dim, level, member.dim(), member.level()));
            }
            if !is_grouplike(member) {
                return Err(Error::NotGrouplike { index });
            }
        }
        Ok(GroupSample { members })
    }

    pub fn members(&self) -> &[TensorSeq] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn level(&self) -> usize {
        self.members[0].level()
    }
}

/// sum_i log(candidate^{-1} x_i) for a candidate with unit constant term.
/// The candidate need not be group-like: the level sweep feeds partially
/// solved intermediates through this.
fn residual_raw(candidate: &TensorSeq, members: &[TensorSeq]) -> TensorSeq {
    let inv = group_inverse(candidate).expect("candidate has unit constant term");
    let one = BigRational::one();
    let mut acc =
        TensorSeq::zero(candidate.dim(), candidate.level()).expect("candidate has a valid shape");
    for x in members {
        let shifted = log(&mul(&inv, x).expect("same ambient space"))
            .expect("group elements have unit constant term");
        acc = linear_combine(&one, &acc, &one, &shifted).expect("same ambient space");
    }
    acc
}

pub fn bary_residual(candidate: &TensorSeq, sample: &GroupSample) -> Result<TensorSeq> {
    if candidate.dim() != sample.dim() || candidate.level() != sample.level() {
        return Err(Error::ContextMismatch(
            sample.dim(),
            sample.level(),
            candidate.dim(),
            candidate.level(),
        ));
    }
    if !candidate.component(0)[0].is_one() {
        return Err(Error::ConstantNotOne);
    }
    Ok(residual_raw(candidate, sample.members()))
}

/// The barycenter, by the level sweep. Infallible on a valid sample.
pub fn bary(sample: &GroupSample) -> TensorSeq {
    let n = BigRational::from_integer(BigInt::from(sample.len()));
    let mut m = TensorSeq::one(sample.dim(), sample.level()).expect("valid shape");
    for j in 1..=sample.level() {
        let r = residual_raw(&m, sample.members());
        let comp: Vec<BigRational> = m
            .component(j)
            .iter()
            .zip(r.component(j))
            .map(|(cur, res)| cur + res / &n)
            .collect();
        m.set_component(j, comp).expect("level in range");
    }
    debug_assert!(residual_raw(&m, sample.members()).is_zero(), "sweep left a residual");
    debug_assert!(is_grouplike(&m), "barycenter left the group");
    m
}

/// Closed form at truncation level 2: the level-1 part is the plain mean,
/// and the level-2 part is
///   mean(x^(2)) - (1/2N) sum_i x_i^(1) (x) x_i^(1)
///                + (1/2N^2) (sum_i x_i^(1)) (x) (sum_i x_i^(1)).
pub fn bary_k2(sample: &GroupSample) -> Result<TensorSeq> {
    if sample.level() != 2 {
        return Err(Error::NotLevelTwo(sample.level()));
    }
    let d = sample.dim();
    let n = BigRational::from_integer(BigInt::from(sample.len()));
    let two_n = BigRational::from_integer(BigInt::from(2)) * &n;
    let mut mean1 = vec![BigRational::zero(); d];
    let mut sum1 = vec![BigRational::zero(); d];
    let mut lvl2 = vec![BigRational::zero(); d * d];
    for x in sample.members() {
        let x1 = x.component(1);
        for i in 0..d {
            sum1[i] += &x1[i];
            mean1[i] += &x1[i] / &n;
        }
        let x2 = x.component(2);
        for i in 0..d {
            for j in 0..d {
                lvl2[i * d + j] += &x2[i * d + j] / &n - &x1[i] * &x1[j] / &two_n;
            }
        }
    }
    let two_n_sq = BigRational::from_integer(BigInt::from(2)) * &n * &n;
    for i in 0..d {
        for j in 0..d {
            lvl2[i * d + j] += &sum1[i] * &sum1[j] / &two_n_sq;
        }
    }
    TensorSeq::from_levels(d, 2, vec![vec![BigRational::one()], mean1, lvl2])
}

/// Barycenter of two group elements: x1 * exp((1/2) log(x1^{-1} x2)), the
/// midpoint of the geodesic between them.
pub fn bary_pair(x1: &TensorSeq, x2: &TensorSeq) -> Result<TensorSeq> {
    if x1.dim() != x2.dim() || x1.level() != x2.level() {
        return Err(Error::ContextMismatch(x1.dim(), x1.level(), x2.dim(), x2.level()));
    }
    for (index, x) in [x1, x2].into_iter().enumerate() {
        if !is_grouplike(x) {
            return Err(Error::NotGrouplike { index });
        }
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let displacement = log(&mul(&group_inverse(x1)?, x2)?)?;
    mul(x1, &exp(&displacement.scaled(&half))?)
}

/// Given all sample members but one and the intended barycenter, returns the
/// missing member, solved by the same level sweep (its level-j component
/// enters the level-j residual with coefficient +1).
pub fn bary_solve_last(fixed: &[TensorSeq], target: &TensorSeq) -> Result<TensorSeq> {
    if !is_grouplike(target) {
        return Err(Error::NotGrouplike { index: fixed.len() });
    }
    for (index, member) in fixed.iter().enumerate() {
        if member.dim() != target.dim() || member.level() != target.level() {
            return Err(Error::ContextMismatch(
                target.dim(),
                target.level(),
                member.dim(),
                member.level(),
            ));
        }
        if !is_grouplike(member) {
            return Err(Error::NotGrouplike { index });
        }
    }
    let mut x = TensorSeq::one(target.dim(), target.level())?;
    for j in 1..=target.level() {
        let mut members = fixed.to_vec();
        members.push(x.clone());
        let r = residual_raw(target, &members);
        let comp: Vec<BigRational> = x
            .component(j)
            .iter()
            .zip(r.component(j))
            .map(|(cur, res)| cur - res)
            .collect();
        x.set_component(j, comp)?;
    }
    debug_assert!(is_grouplike(&x), "completion left the group");
    Ok(x)
}
