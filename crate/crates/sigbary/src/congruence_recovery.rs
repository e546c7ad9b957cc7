//! Exact congruence normal forms for the quadratic forms carrying level-two
//! signature data, and the path recovery those normal forms enable.
//!
//! Everything here happens over the rationals. Transforms are kept integral
//! where a real change of basis would need a square root; the `scale_sq`
//! field of [`CongruenceResult`] records the squared scalar that was split
//! off.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::barycenter::{bary, GroupSample};
use crate::error::{Error, Result};
pub use crate::linalg::{RationalMatrix, RationalVector};
use crate::ratio::{frac, int};
use crate::signatures::{sig_pwl, sig_segment, Composition, PwlPath};

/// The 1x1 and 2x2 blocks the normal forms in this module are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalBlock {
    /// `[[0, -1], [1, 1]]`, reached by the even-size axis forms.
    Gamma2,
    /// `[[0, 1], [-1, 0]]`, the invertible skew 2x2 block.
    H2Neg1,
    /// `[1]`.
    One,
    /// `[0]`.
    Zero,
}

impl CanonicalBlock {
    pub fn matrix(self) -> RationalMatrix {
        match self {
            CanonicalBlock::Gamma2 => RationalMatrix::from_int_rows(&[vec![0, -1], vec![1, 1]]),
            CanonicalBlock::H2Neg1 => RationalMatrix::from_int_rows(&[vec![0, 1], vec![-1, 0]]),
            CanonicalBlock::One => RationalMatrix::from_int_rows(&[vec![1]]),
            CanonicalBlock::Zero => RationalMatrix::from_int_rows(&[vec![0]]),
        }
    }
}

/// The m x m matrices every construction below keeps reaching for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalMatrices {
    /// Strictly upper triangular matrix of ones.
    pub strict_upper: RationalMatrix,
    /// Diagonal matrix of alternating signs `+1, -1, +1, ...`.
    pub alt_diag: RationalMatrix,
    /// `I/2 + strict_upper`: the level-two form of the axis path.
    pub axis_form: RationalMatrix,
    pub identity: RationalMatrix,
    pub all_ones: RationalMatrix,
}

pub fn canonical_matrices(m: usize) -> CanonicalMatrices {
    let mut strict_upper = RationalMatrix::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            strict_upper.set(i, j, BigRational::one());
        }
    }
    let mut alt_diag = RationalMatrix::zeros(m, m);
    for i in 0..m {
        alt_diag.set(i, i, if i % 2 == 0 { int(1) } else { int(-1) });
    }
    let axis_form = RationalMatrix::identity(m).scaled(&frac(1, 2)).add(&strict_upper);
    CanonicalMatrices {
        strict_upper,
        alt_diag,
        axis_form,
        identity: RationalMatrix::identity(m),
        all_ones: RationalMatrix::ones(m, m),
    }
}

/// A congruence transform together with the normal form it reaches.
///
/// The invariant is `scale_sq * transform * input * transform^T == normal_form`,
/// so the exact change of basis is `sqrt(scale_sq) * transform`; splitting the
/// scalar off keeps every stored entry rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceResult {
    pub transform: RationalMatrix,
    pub scale_sq: u32,
    pub normal_form: RationalMatrix,
    pub rank: usize,
}

/// Block-diagonalizes the skew form `U - U^T` (upper triangle +1, lower -1).
///
/// The transform is unimodular and sends the form to `H ⊕ ... ⊕ H`, padded by
/// a single `[0]` block when `m` is odd, with `H = [[0, 1], [-1, 0]]`.
pub fn skew_axis_nf(m: usize) -> CongruenceResult {
    let mut transform = RationalMatrix::identity(m);
    for i in 1..=(m.saturating_sub(1) / 2) {
        for j in (2 * i + 1)..=m {
            transform.set(j - 1, 2 * i - 2, int(1));
            transform.set(j - 1, 2 * i - 1, int(-1));
        }
    }
    let pairs = m / 2;
    let mut blocks = vec![CanonicalBlock::H2Neg1.matrix(); pairs];
    if m % 2 == 1 {
        blocks.push(CanonicalBlock::Zero.matrix());
    }
    let normal_form = RationalMatrix::block_diag(&blocks);
    let result = CongruenceResult { transform, scale_sq: 1, normal_form, rank: 2 * pairs };
    debug_assert!({
        let c = canonical_matrices(m);
        let skew = c.strict_upper.sub(&c.strict_upper.transpose());
        result.transform.mul(&skew).mul(&result.transform.transpose()) == result.normal_form
    });
    result
}

/// Exact inverse of `U - U^T`, which exists precisely for even sizes.
pub fn skew_axis_inverse(m: usize) -> Result<RationalMatrix> {
    if m % 2 != 0 {
        return Err(Error::OddSize);
    }
    let c = canonical_matrices(m);
    let skew = c.strict_upper.sub(&c.strict_upper.transpose());
    let inv = c.alt_diag.mul(&skew).mul(&c.alt_diag);
    debug_assert!(skew.mul(&inv) == RationalMatrix::identity(m));
    Ok(inv)
}

/// Congruence normal form of the axis form `C = I/2 + U`.
///
/// The transform is unimodular and `2 * P * C * P^T` equals
/// `Gamma2 ⊕ H ⊕ ... ⊕ H` for even sizes and `[1] ⊕ H ⊕ ... ⊕ H` for odd
/// ones; `scale_sq` records the factor 2. For odd sizes the transform also
/// sends the all-ones vector to the first coordinate vector.
pub fn axis_matrix_nf(m: usize) -> CongruenceResult {
    assert!(m >= 1, "the axis form needs at least one coordinate");
    let mut inner = RationalMatrix::identity(m);
    for s in 2..=m {
        inner.set(s - 1, 0, int(-1));
    }
    for i in 1..=((m - 1) / 2) {
        for j in 1..=(m - 2 * i) {
            inner.set(j - 1, m - 2 * i + 1, int(1));
            inner.set(j - 1, m - 2 * i, int(-1));
        }
    }
    let transform = if m % 2 == 0 {
        let mut rows = inner.to_rows();
        rows.swap(0, 1);
        RationalMatrix::from_rows(rows)
    } else {
        inner
    };
    let lead = if m % 2 == 0 { CanonicalBlock::Gamma2 } else { CanonicalBlock::One };
    let mut blocks = vec![lead.matrix()];
    blocks.extend(vec![CanonicalBlock::H2Neg1.matrix(); (m - lead.matrix().rows()) / 2]);
    let normal_form = RationalMatrix::block_diag(&blocks);
    let result = CongruenceResult { transform, scale_sq: 2, normal_form, rank: m };
    debug_assert!({
        let axis = canonical_matrices(m).axis_form;
        result.transform.mul(&axis).mul(&result.transform.transpose()).scaled(&int(2))
            == result.normal_form
    });
    result
}

/// Level-two form of a barycenter of axis subpath signatures.
///
/// Splitting an m-segment axis path according to `alpha` and stacking the
/// increment matrices of paths with matching segment counts into one `d x m`
/// matrix `X`, the level-two component of the barycenter of their signatures
/// is `X * w_alpha * X^T`. Entries: `1/(2N^2)` everywhere, plus `1/(2N)`
/// above and minus `1/(2N)` below the diagonal inside each block, for
/// `N = alpha.len()`.
pub fn w_alpha(alpha: &Composition) -> RationalMatrix {
    let n = alpha.len() as i64;
    let m = alpha.total();
    let mut w = RationalMatrix::ones(m, m).scaled(&frac(1, 2 * n * n));
    let step = frac(1, 2 * n);
    let mut offset = 0;
    for &part in alpha.parts() {
        for a in 0..part {
            for b in (a + 1)..part {
                let above = w.get(offset + a, offset + b) + &step;
                w.set(offset + a, offset + b, above);
                let below = w.get(offset + b, offset + a) - &step;
                w.set(offset + b, offset + a, below);
            }
        }
        offset += part;
    }
    w
}

/// Skew/symmetric split and rank data of [`w_alpha`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WAlphaProps {
    pub skew_part: RationalMatrix,
    pub sym_part: RationalMatrix,
    pub skew_rank: usize,
    pub rank: usize,
    /// Exact inverse, present exactly when every part of the composition is
    /// even.
    pub inverse: Option<RationalMatrix>,
}

pub fn w_alpha_props(alpha: &Composition) -> WAlphaProps {
    let w = w_alpha(alpha);
    let m = alpha.total();
    let n = alpha.len() as i64;
    let wt = w.transpose();
    let half = frac(1, 2);
    let skew_part = w.sub(&wt).scaled(&half);
    let sym_part = w.add(&wt).scaled(&half);
    let odd = alpha.parts().iter().filter(|&&p| p % 2 == 1).count();
    let skew_rank = m - odd;
    let rank = if odd == 0 { m } else { m - odd + 1 };
    let inverse = if odd == 0 {
        let q = canonical_matrices(m).alt_diag;
        let inv = q.mul(&w).mul(&q).scaled(&int(4 * n * n));
        debug_assert!(w.mul(&inv) == RationalMatrix::identity(m));
        Some(inv)
    } else {
        None
    };
    WAlphaProps { skew_part, sym_part, skew_rank, rank, inverse }
}

/// Simultaneous normal form of [`w_alpha`] and the mean vector `(1/N)·ones`.
///
/// One unimodular matrix `M` sends the form to an axis form padded by zeros
/// and the vector to the matching 0/1 vector, so both reductions share a
/// single change of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimultaneousNf {
    pub congruence: CongruenceResult,
    pub vector_image: RationalVector,
}

pub fn w_alpha_nf(alpha: &Composition) -> SimultaneousNf {
    let m = alpha.total();
    let odd = alpha.parts().iter().filter(|&&p| p % 2 == 1).count();
    let (transform, rank) = if odd == 0 {
        (all_even_transform(alpha), m)
    } else {
        (odd_transform(alpha), m - odd + 1)
    };
    let mut normal_form = RationalMatrix::zeros(m, m);
    let axis = canonical_matrices(rank).axis_form;
    for i in 0..rank {
        for j in 0..rank {
            normal_form.set(i, j, axis.get(i, j).clone());
        }
    }
    let vector_image: RationalVector =
        (0..m).map(|i| if i < rank { int(1) } else { int(0) }).collect();
    debug_assert!({
        let w = w_alpha(alpha);
        transform.mul(&w).mul(&transform.transpose()) == normal_form
    });
    debug_assert!({
        let mean = vec![frac(1, alpha.len() as i64); m];
        transform.mul_vec(&mean) == vector_image
    });
    SimultaneousNf {
        congruence: CongruenceResult { transform, scale_sq: 1, normal_form, rank },
        vector_image,
    }
}

/// Transform for compositions whose parts are all even: the result is the
/// full axis form with no zero padding.
fn all_even_transform(alpha: &Composition) -> RationalMatrix {
    let m = alpha.total();
    let n = alpha.len() as i64;
    let mut block = vec![0usize; m];
    let mut offset = 0;
    for (b, &part) in alpha.parts().iter().enumerate() {
        for s in 0..part {
            block[offset + s] = b;
        }
        offset += part;
    }
    // clear couplings between distinct blocks
    let mut p1 = RationalMatrix::identity(m);
    for i in 0..m {
        for j in 0..i {
            if block[i] != block[j] {
                p1.set(i, j, if (j + 1) % 2 == 1 { int(-1) } else { int(1) });
            }
        }
    }
    // rescale column pairs to absorb the 1/N factors
    let mut p2 = RationalMatrix::identity(m);
    for j in 1..=m {
        let add = if j % 2 == 1 { int(n - 1) } else { int(1 - n) };
        for i in (2 * (j / 2) + 1)..=m {
            let cur = p2.get(i - 1, j - 1) + &add;
            p2.set(i - 1, j - 1, cur);
        }
    }
    p2.mul(&p1)
}

/// Transform for compositions with at least one odd part. An odd block is
/// rotated to the front, the remaining blocks are reduced to their skew
/// parts, and everything is folded back into one smaller axis form, leaving
/// one zero coordinate per further odd block.
fn odd_transform(alpha: &Composition) -> RationalMatrix {
    let m = alpha.total();
    let n = alpha.len() as i64;
    let parts = alpha.parts();
    let t = parts.iter().position(|&p| p % 2 == 1).expect("an odd part exists");
    let rotated: Vec<usize> = parts[t..].iter().chain(&parts[..t]).copied().collect();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for &part in parts {
        offsets.push(offset);
        offset += part;
    }
    let mut order = Vec::with_capacity(m);
    for b in (t..parts.len()).chain(0..t) {
        order.extend(offsets[b]..offsets[b] + parts[b]);
    }
    let rho = RationalMatrix::permutation(&order);
    let a1 = rotated[0];

    // clear every coupling between the leading block and the rest
    let mut p1 = RationalMatrix::identity(m);
    for i in (a1 + 1)..=m {
        for j in 1..=a1 {
            p1.set(i - 1, j - 1, if j % 2 == 1 { int(-1) } else { int(1) });
        }
    }
    // rescale the leading block so its image is exactly the axis form
    let mut top = RationalMatrix::identity(a1).scaled(&int(n));
    for j in 1..=((a1 - 1) / 2) {
        for i in (2 * j)..=a1 {
            let plus = top.get(i - 1, 2 * j - 2) + int(n - 1);
            top.set(i - 1, 2 * j - 2, plus);
            let minus = top.get(i - 1, 2 * j - 1) - int(n - 1);
            top.set(i - 1, 2 * j - 1, minus);
        }
    }
    let p2 = RationalMatrix::block_diag(&[top, RationalMatrix::identity(m - a1)]);
    let pre = p2.mul(&p1).mul(&rho);
    #[cfg(debug_assertions)]
    {
        // at this point the form splits into the leading axis form and the
        // scaled skew parts of the remaining blocks
        let mut expected = vec![canonical_matrices(a1).axis_form];
        for &part in &rotated[1..] {
            let c = canonical_matrices(part);
            let skew = c.strict_upper.sub(&c.strict_upper.transpose());
            expected.push(skew.scaled(&frac(1, 2 * n)));
        }
        let w = w_alpha(alpha);
        debug_assert!(
            pre.mul(&w).mul(&pre.transpose()) == RationalMatrix::block_diag(&expected)
        );
    }

    // halve each skew block into H/2 pairs, matching the halved axis blocks
    let mut g_blocks = vec![axis_matrix_nf(a1).transform];
    for &part in &rotated[1..] {
        let mut d_blocks = Vec::new();
        for _ in 0..(part / 2) {
            let mut b = RationalMatrix::identity(2);
            b.set(0, 0, int(n));
            d_blocks.push(b);
        }
        if part % 2 == 1 {
            d_blocks.push(RationalMatrix::identity(1));
        }
        let d = RationalMatrix::block_diag(&d_blocks);
        g_blocks.push(d.mul(&skew_axis_nf(part).transform));
    }
    let g = RationalMatrix::block_diag(&g_blocks);

    // push the dead coordinate of each later odd block to the end
    let mut kept: Vec<usize> = (0..a1).collect();
    let mut zeroed = Vec::new();
    let mut offset = a1;
    for &part in &rotated[1..] {
        if part % 2 == 1 {
            kept.extend(offset..offset + part - 1);
            zeroed.push(offset + part - 1);
        } else {
            kept.extend(offset..offset + part);
        }
        offset += part;
    }
    let r = kept.len();
    kept.extend(zeroed);
    let reorder = RationalMatrix::permutation(&kept);

    // undo the halving: fold [1] ⊕ H ⊕ ... ⊕ H, all halved, back into an
    // axis form on the surviving coordinates
    let unfold = RationalMatrix::block_diag(&[
        axis_matrix_nf(r).transform.inverse().expect("axis transforms are unimodular"),
        RationalMatrix::identity(m - r),
    ]);
    unfold.mul(&reorder).mul(&g).mul(&pre)
}

/// Fewest segments that can realize the barycenter of level-two axis subpath
/// signatures in dimension `dim`: the rank of [`w_alpha`], capped by `dim`.
pub fn recovery_order(dim: usize, alpha: &Composition) -> Result<usize> {
    if dim < 2 {
        return Err(Error::RecoveryDim);
    }
    let odd = alpha.parts().iter().filter(|&&p| p % 2 == 1).count();
    let rank = if odd == 0 { alpha.total() } else { alpha.total() - odd + 1 };
    Ok(dim.min(rank))
}

/// Builds a path whose level-two signature equals the barycenter of the
/// level-two signatures of `paths`, using `rank(w_alpha)` segments where
/// `w_alpha` is taken at the composition of segment counts.
pub fn recover_k2(paths: &[PwlPath], level: usize) -> Result<PwlPath> {
    if level != 2 {
        return Err(Error::RecoveryLevel(level));
    }
    let Some(first) = paths.first() else {
        return Err(Error::EmptySample);
    };
    let dim = first.dim();
    for p in paths {
        if p.dim() != dim {
            return Err(Error::ContextMismatch(dim, level, p.dim(), level));
        }
    }
    let alpha = Composition::new(paths.iter().map(PwlPath::segments).collect())?;
    let nf = w_alpha_nf(&alpha);
    let r = nf.congruence.rank;
    let folded = nf.congruence.transform.inverse()?.first_cols(r);
    let stacked =
        RationalMatrix::hstack(&paths.iter().map(|p| p.increments().clone()).collect::<Vec<_>>());
    let result = PwlPath::new(stacked.mul(&folded))?;
    #[cfg(debug_assertions)]
    {
        let mut sigs = Vec::new();
        for p in paths {
            sigs.push(sig_pwl(p, 2)?);
        }
        let sample = GroupSample::new(sigs)?;
        debug_assert!(sig_pwl(&result, 2)? == bary(&sample));
    }
    Ok(result)
}

/// One-parameter family of planar three-segment paths sharing a single
/// level-three signature barycenter; see [`verify_recovery_k3`].
pub fn k3_family_matrix(omega: &BigRational) -> Result<RationalMatrix> {
    if omega.is_zero() {
        return Err(Error::ZeroOmega);
    }
    let reciprocal = frac(1, 8) / omega;
    Ok(RationalMatrix::from_rows(vec![
        vec![int(1), int(-1), int(1)],
        vec![omega.clone(), &reciprocal - omega, -reciprocal.clone()],
    ]))
}

/// Checks that the path built from [`k3_family_matrix`] has the same
/// level-three signature as the barycenter of the signatures of the segments
/// `(1, 1/2)` and `(1, -1/2)`, for any nonzero rational parameter.
pub fn verify_recovery_k3(omega: &BigRational) -> Result<bool> {
    let path = PwlPath::new(k3_family_matrix(omega)?)?;
    let candidate = sig_pwl(&path, 3)?;
    let sample = GroupSample::new(vec![
        sig_segment(&[int(1), frac(1, 2)], 3)?,
        sig_segment(&[int(1), frac(-1, 2)], 3)?,
    ])?;
    Ok(candidate == bary(&sample))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_blocks_have_their_fixed_entries() {
        assert_eq!(
            CanonicalBlock::Gamma2.matrix(),
            RationalMatrix::from_int_rows(&[vec![0, -1], vec![1, 1]])
        );
        assert_eq!(
            CanonicalBlock::H2Neg1.matrix(),
            RationalMatrix::from_int_rows(&[vec![0, 1], vec![-1, 0]])
        );
        assert_eq!(CanonicalBlock::One.matrix(), RationalMatrix::from_int_rows(&[vec![1]]));
        assert_eq!(CanonicalBlock::Zero.matrix(), RationalMatrix::from_int_rows(&[vec![0]]));
    }

    #[test]
    fn canonical_matrices_at_size_three() {
        let c = canonical_matrices(3);
        assert_eq!(
            c.strict_upper,
            RationalMatrix::from_int_rows(&[vec![0, 1, 1], vec![0, 0, 1], vec![0, 0, 0]])
        );
        assert_eq!(
            c.alt_diag,
            RationalMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]])
        );
        assert_eq!(
            c.axis_form,
            RationalMatrix::from_rows(vec![
                vec![frac(1, 2), int(1), int(1)],
                vec![int(0), frac(1, 2), int(1)],
                vec![int(0), int(0), frac(1, 2)],
            ])
        );
        assert_eq!(c.identity, RationalMatrix::identity(3));
        assert_eq!(c.all_ones, RationalMatrix::ones(3, 3));
    }

    #[test]
    fn skew_normal_form_reaches_paired_blocks() {
        for m in 1..=8 {
            let res = skew_axis_nf(m);
            let c = canonical_matrices(m);
            let skew = c.strict_upper.sub(&c.strict_upper.transpose());
            assert_eq!(res.transform.mul(&skew).mul(&res.transform.transpose()), res.normal_form);
            assert_eq!(res.rank, 2 * (m / 2));
            assert_eq!(res.normal_form.rank(), res.rank);
            assert_eq!(res.scale_sq, 1);
            res.transform.inverse().expect("skew transforms are unimodular");
        }
        assert_eq!(skew_axis_nf(1).normal_form, CanonicalBlock::Zero.matrix());
        assert_eq!(
            skew_axis_nf(8).transform,
            RationalMatrix::from_int_rows(&[
                vec![1, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0, 0, 0],
                vec![1, -1, 1, 0, 0, 0, 0, 0],
                vec![1, -1, 0, 1, 0, 0, 0, 0],
                vec![1, -1, 1, -1, 1, 0, 0, 0],
                vec![1, -1, 1, -1, 0, 1, 0, 0],
                vec![1, -1, 1, -1, 1, -1, 1, 0],
                vec![1, -1, 1, -1, 1, -1, 0, 1],
            ])
        );
    }

    #[test]
    fn skew_inverse_exists_exactly_for_even_sizes() {
        assert_eq!(
            skew_axis_inverse(2).unwrap(),
            RationalMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]])
        );
        for m in [2usize, 4, 6, 8] {
            let inv = skew_axis_inverse(m).unwrap();
            let c = canonical_matrices(m);
            let skew = c.strict_upper.sub(&c.strict_upper.transpose());
            assert_eq!(skew.mul(&inv), RationalMatrix::identity(m));
            assert_eq!(inv.mul(&skew), RationalMatrix::identity(m));
        }
        assert!(matches!(skew_axis_inverse(3), Err(Error::OddSize)));
        assert!(matches!(skew_axis_inverse(1), Err(Error::OddSize)));
    }

    #[test]
    fn axis_normal_form_halves_into_leading_block_plus_pairs() {
        for m in 1..=8 {
            let res = axis_matrix_nf(m);
            let axis = canonical_matrices(m).axis_form;
            assert_eq!(
                res.transform.mul(&axis).mul(&res.transform.transpose()).scaled(&int(2)),
                res.normal_form
            );
            assert_eq!(res.scale_sq, 2);
            assert_eq!(res.rank, m);
            res.transform.inverse().expect("axis transforms are unimodular");
        }
        assert_eq!(
            axis_matrix_nf(2).transform,
            RationalMatrix::from_int_rows(&[vec![-1, 1], vec![1, 0]])
        );
        assert_eq!(axis_matrix_nf(2).normal_form, CanonicalBlock::Gamma2.matrix());
        assert_eq!(
            axis_matrix_nf(3).normal_form,
            RationalMatrix::from_int_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, -1, 0]])
        );
        assert_eq!(
            axis_matrix_nf(4).normal_form,
            RationalMatrix::from_int_rows(&[
                vec![0, -1, 0, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, -1, 0],
            ])
        );
        // odd sizes also normalize the all-ones vector
        for m in [1usize, 3, 5, 7] {
            let res = axis_matrix_nf(m);
            let image = res.transform.mul_vec(&vec![int(1); m]);
            let mut e1 = vec![int(0); m];
            e1[0] = int(1);
            assert_eq!(image, e1);
        }
    }

    #[test]
    fn quadratic_form_entries_follow_the_block_pattern() {
        for m in 1..=5 {
            let alpha = Composition::new(vec![m]).unwrap();
            assert_eq!(w_alpha(&alpha), canonical_matrices(m).axis_form);
        }
        let alpha = Composition::new(vec![1, 1]).unwrap();
        assert_eq!(w_alpha(&alpha), RationalMatrix::ones(2, 2).scaled(&frac(1, 8)));
        let alpha = Composition::new(vec![4, 6, 2]).unwrap();
        let w = w_alpha(&alpha);
        assert_eq!(w.get(0, 1), &frac(2, 9));
        assert_eq!(w.get(1, 0), &frac(-1, 9));
        assert_eq!(w.get(0, 0), &frac(1, 18));
        assert_eq!(w.get(0, 4), &frac(1, 18));
        assert_eq!(w.get(11, 3), &frac(1, 18));
        assert_eq!(w.get(4, 9), &frac(2, 9));
        assert_eq!(w.get(10, 11), &frac(2, 9));
        assert_eq!(w.get(11, 10), &frac(-1, 9));
    }

    #[test]
    fn split_ranks_and_inverse_of_the_quadratic_form() {
        let cases = [
            vec![2],
            vec![1, 1],
            vec![3, 2],
            vec![2, 2],
            vec![2, 3, 4],
            vec![1, 1, 1],
            vec![4, 6, 2],
        ];
        for parts in cases {
            let odd = parts.iter().filter(|&&p| p % 2 == 1).count();
            let alpha = Composition::new(parts).unwrap();
            let m = alpha.total();
            let n = alpha.len() as i64;
            let props = w_alpha_props(&alpha);
            let w = w_alpha(&alpha);
            assert_eq!(props.skew_part.add(&props.sym_part), w);
            assert_eq!(props.skew_part.transpose(), props.skew_part.scaled(&int(-1)));
            assert_eq!(props.sym_part, RationalMatrix::ones(m, m).scaled(&frac(1, 2 * n * n)));
            assert_eq!(props.sym_part.rank(), 1);
            assert_eq!(props.skew_rank, props.skew_part.rank());
            assert_eq!(props.rank, w.rank());
            assert_eq!(props.inverse.is_some(), odd == 0);
            if let Some(inv) = &props.inverse {
                assert_eq!(w.mul(inv), RationalMatrix::identity(m));
                assert_eq!(inv.mul(&w), RationalMatrix::identity(m));
            }
        }
    }

    #[test]
    fn simultaneous_normal_form_maps_both_the_form_and_the_mean_vector() {
        let cases = [
            vec![1],
            vec![2],
            vec![3],
            vec![1, 1],
            vec![3, 2],
            vec![2, 2],
            vec![2, 3, 4],
            vec![1, 1, 1],
            vec![5, 4, 3, 4],
            vec![4, 6, 2],
        ];
        for parts in cases {
            let odd = parts.iter().filter(|&&p| p % 2 == 1).count();
            let alpha = Composition::new(parts).unwrap();
            let m = alpha.total();
            let n = alpha.len() as i64;
            let nf = w_alpha_nf(&alpha);
            let r = nf.congruence.rank;
            assert_eq!(r, if odd == 0 { m } else { m - odd + 1 });
            assert_eq!(nf.congruence.scale_sq, 1);
            let mapped = nf
                .congruence
                .transform
                .mul(&w_alpha(&alpha))
                .mul(&nf.congruence.transform.transpose());
            assert_eq!(mapped, nf.congruence.normal_form);
            let mut expected = RationalMatrix::zeros(m, m);
            let axis = canonical_matrices(r).axis_form;
            for i in 0..r {
                for j in 0..r {
                    expected.set(i, j, axis.get(i, j).clone());
                }
            }
            assert_eq!(nf.congruence.normal_form, expected);
            let image = nf.congruence.transform.mul_vec(&vec![frac(1, n); m]);
            let expected_vec: RationalVector =
                (0..m).map(|i| if i < r { int(1) } else { int(0) }).collect();
            assert_eq!(image, expected_vec);
            assert_eq!(nf.vector_image, expected_vec);
        }
    }

    #[test]
    fn two_singleton_blocks_normal_form() {
        let alpha = Composition::new(vec![1, 1]).unwrap();
        let nf = w_alpha_nf(&alpha);
        assert_eq!(
            nf.congruence.transform,
            RationalMatrix::from_int_rows(&[vec![2, 0], vec![-1, 1]])
        );
        assert_eq!(nf.congruence.rank, 1);
    }

    #[test]
    fn recovery_order_is_capped_by_dimension_and_rank() {
        let alpha = Composition::new(vec![4, 6, 2]).unwrap();
        assert_eq!(recovery_order(2, &alpha).unwrap(), 2);
        assert_eq!(recovery_order(12, &alpha).unwrap(), 12);
        assert_eq!(recovery_order(40, &alpha).unwrap(), 12);
        let alpha = Composition::new(vec![1, 1]).unwrap();
        assert_eq!(recovery_order(2, &alpha).unwrap(), 1);
        let alpha = Composition::new(vec![2, 1]).unwrap();
        assert_eq!(recovery_order(2, &alpha).unwrap(), 2);
        assert_eq!(recovery_order(3, &alpha).unwrap(), 3);
        assert!(matches!(recovery_order(1, &alpha), Err(Error::RecoveryDim)));
        assert!(matches!(recovery_order(0, &alpha), Err(Error::RecoveryDim)));
    }

    #[test]
    fn recovery_reproduces_the_worked_pair() {
        let p1 = PwlPath::new(RationalMatrix::from_rows(vec![vec![int(1)], vec![frac(1, 2)]]))
            .unwrap();
        let p2 = PwlPath::new(RationalMatrix::from_rows(vec![vec![frac(1, 2)], vec![int(1)]]))
            .unwrap();
        let rec = recover_k2(&[p1, p2], 2).unwrap();
        assert_eq!(rec.segments(), 1);
        assert_eq!(
            rec.increments(),
            &RationalMatrix::from_rows(vec![vec![frac(3, 4)], vec![frac(3, 4)]])
        );
    }

    #[test]
    fn recovery_of_a_single_path_returns_it_unchanged() {
        let odd_count = RationalMatrix::from_rows(vec![
            vec![int(1), int(0), int(-2)],
            vec![frac(1, 2), int(3), int(1)],
        ]);
        let path = PwlPath::new(odd_count.clone()).unwrap();
        assert_eq!(recover_k2(&[path], 2).unwrap().increments(), &odd_count);
        let even_count = RationalMatrix::from_rows(vec![
            vec![int(1), int(0)],
            vec![frac(1, 2), int(3)],
        ]);
        let path = PwlPath::new(even_count.clone()).unwrap();
        assert_eq!(recover_k2(&[path], 2).unwrap().increments(), &even_count);
    }

    #[test]
    fn recovery_rejects_bad_inputs() {
        let p = PwlPath::new(RationalMatrix::from_int_rows(&[vec![1], vec![2]])).unwrap();
        assert!(matches!(recover_k2(&[p.clone()], 3), Err(Error::RecoveryLevel(3))));
        assert!(matches!(recover_k2(&[], 2), Err(Error::EmptySample)));
        let q =
            PwlPath::new(RationalMatrix::from_int_rows(&[vec![1], vec![2], vec![3]])).unwrap();
        assert!(matches!(recover_k2(&[p, q], 2), Err(Error::ContextMismatch(2, 2, 3, 2))));
    }

    #[test]
    fn level_three_family_hits_fixed_values() {
        let a = k3_family_matrix(&frac(1, 4)).unwrap();
        assert_eq!(
            a,
            RationalMatrix::from_rows(vec![
                vec![int(1), int(-1), int(1)],
                vec![frac(1, 4), frac(1, 4), frac(-1, 2)],
            ])
        );
        let a = k3_family_matrix(&frac(7, 5)).unwrap();
        assert_eq!(a.row(1).to_vec(), vec![frac(7, 5), frac(-367, 280), frac(-5, 56)]);
        assert!(matches!(k3_family_matrix(&int(0)), Err(Error::ZeroOmega)));
    }

    #[test]
    fn level_three_family_members_share_the_pair_barycenter() {
        assert!(verify_recovery_k3(&frac(3, 4)).unwrap());
        assert!(verify_recovery_k3(&int(2)).unwrap());
    }
}
