//! Signatures of piecewise-linear paths, computed exactly.
//!
//! The signature of a concatenation of straight segments is the product of
//! the segment exponentials (Chen's identity). For a path given by an
//! increment matrix A this factors further: the signature equals the
//! level-wise congruence action of A on the signature of the axis path whose
//! segments are the standard basis directions, which is what `sig_pwl` uses.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, RationalVector};
use crate::ratio::{format_rational, frac, parse_rational};
use crate::tensor_algebra::{exp, mul, TensorSeq};

/// A piecewise-linear path, stored as its d x m increment matrix: column j
/// is the displacement of segment j, and the path starts at the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PwlPath {
    increments: RationalMatrix,
}

impl PwlPath {
    pub fn new(increments: RationalMatrix) -> Result<Self> {
        if increments.rows() == 0 {
            return Err(Error::ZeroDim);
        }
        if increments.cols() == 0 {
            return Err(Error::EmptyPath);
        }
        Ok(PwlPath { increments })
    }

    pub fn dim(&self) -> usize {
        self.increments.rows()
    }

    pub fn segments(&self) -> usize {
        self.increments.cols()
    }

    pub fn increments(&self) -> &RationalMatrix {
        &self.increments
    }

    /// The m+1 vertices of the path, starting at the origin.
    pub fn vertices(&self) -> Vec<RationalVector> {
        let d = self.dim();
        let mut out = vec![vec![BigRational::zero(); d]];
        for j in 0..self.segments() {
            let prev = out.last().unwrap().clone();
            let next: RationalVector = (0..d)
                .map(|i| &prev[i] + self.increments.get(i, j))
                .collect();
            out.push(next);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cols: Vec<Value> = (0..self.segments())
            .map(|j| {
                Value::Array(
                    (0..self.dim())
                        .map(|i| Value::String(format_rational(self.increments.get(i, j))))
                        .collect(),
                )
            })
            .collect();
        json!({ "dim": self.dim(), "increments": cols })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::BadInput(msg.to_string());
        let obj = value.as_object().ok_or_else(|| bad("expected a JSON object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or non-integer \"dim\""))? as usize;
        let cols = obj
            .get("increments")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"increments\" array"))?;
        if dim == 0 {
            return Err(Error::ZeroDim);
        }
        if cols.is_empty() {
            return Err(Error::EmptyPath);
        }
        let mut increments = RationalMatrix::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            let entries = col
                .as_array()
                .ok_or_else(|| bad("increments must be arrays of rational strings"))?;
            if entries.len() != dim {
                return Err(bad(&format!(
                    "increment {j} has {} entries, expected {dim}",
                    entries.len()
                )));
            }
            for (i, entry) in entries.iter().enumerate() {
                let text = entry
                    .as_str()
                    .ok_or_else(|| bad("coordinates must be rational strings"))?;
                increments.set(i, j, parse_rational(text)?);
            }
        }
        PwlPath::new(increments)
    }
}

/// An ordered tuple of positive integers; used to slice the m-segment axis
/// path into consecutive blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::BadComposition);
        }
        Ok(Composition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Signature of a single straight segment: exp of the increment placed at
/// level one.
pub fn sig_segment(increment: &[BigRational], level: usize) -> Result<TensorSeq> {
    let mut z = TensorSeq::zero(increment.len(), level)?;
    z.set_component(1, increment.to_vec())?;
    exp(&z)
}

/// Signature of the m-segment axis path: segment j moves one unit along the
/// j-th coordinate direction.
pub fn sig_axis(m: usize, level: usize) -> Result<TensorSeq> {
    let mut acc = TensorSeq::one(m, level)?;
    for j in 0..m {
        let mut e = vec![BigRational::zero(); m];
        e[j] = BigRational::one();
        acc = mul(&acc, &sig_segment(&e, level)?)?;
    }
    Ok(acc)
}

/// Level-wise congruence action of a d x m matrix: every tensor axis of
/// every level is contracted with the matrix. For signatures this realizes
/// the pushforward of the path by the linear map.
pub fn congruence(a: &RationalMatrix, z: &TensorSeq) -> Result<TensorSeq> {
    if a.rows() == 0 {
        return Err(Error::ZeroDim);
    }
    if a.cols() != z.dim() {
        return Err(Error::ContextMismatch(a.cols(), z.level(), z.dim(), z.level()));
    }
    let d = a.rows();
    let m = a.cols();
    let mut levels = vec![vec![z.component(0)[0].clone()]];
    for l in 1..=z.level() {
        let mut cur = z.component(l).to_vec();
        for _ in 0..l {
            // contract the first axis (length m) with the matrix
            let rest = cur.len() / m;
            let mut contracted = vec![BigRational::zero(); d * rest];
            for i in 0..d {
                for j in 0..m {
                    let c = a.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    for t in 0..rest {
                        contracted[i * rest + t] += c * &cur[j * rest + t];
                    }
                }
            }
            // rotate the freshly contracted axis to the back so the next
            // uncontracted axis comes first
            let mut rotated = vec![BigRational::zero(); d * rest];
            for i in 0..d {
                for t in 0..rest {
                    rotated[t * d + i] = contracted[i * rest + t].clone();
                }
            }
            cur = rotated;
        }
        levels.push(cur);
    }
    TensorSeq::from_levels(d, z.level(), levels)
}

/// Signature of a piecewise-linear path: the congruence action of its
/// increment matrix on the axis-path signature.
pub fn sig_pwl(path: &PwlPath, level: usize) -> Result<TensorSeq> {
    congruence(path.increments(), &sig_axis(path.segments(), level)?)
}

/// Signature (in the ambient m-dimensional space) of the index-th block of
/// consecutive axis segments cut out by the composition. Blocks are 1-based.
pub fn sig_axis_subpath(alpha: &Composition, index: usize, level: usize) -> Result<TensorSeq> {
    if index == 0 || index > alpha.len() {
        return Err(Error::SubpathIndex { index, len: alpha.len() });
    }
    let m = alpha.total();
    let start: usize = alpha.parts()[..index - 1].iter().sum();
    let mut acc = TensorSeq::one(m, level)?;
    for j in start..start + alpha.parts()[index - 1] {
        let mut e = vec![BigRational::zero(); m];
        e[j] = BigRational::one();
        acc = mul(&acc, &sig_segment(&e, level)?)?;
    }
    Ok(acc)
}

/// Signed area enclosed by a planar path closed up with the chord back to
/// its start (shoelace formula over the vertex cycle).
pub fn signed_area(path: &PwlPath) -> Result<BigRational> {
    if path.dim() != 2 {
        return Err(Error::NotPlanar);
    }
    let verts = path.vertices();
    let mut acc = BigRational::zero();
    for i in 0..verts.len() {
        let a = &verts[i];
        let b = &verts[(i + 1) % verts.len()];
        acc += &a[0] * &b[1] - &b[0] * &a[1];
    }
    Ok(acc * frac(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::int;
    use crate::tensor_algebra::is_grouplike;

    #[test]
    fn path_construction_and_vertices() {
        assert!(matches!(PwlPath::new(RationalMatrix::zeros(0, 0)), Err(Error::ZeroDim)));
        assert!(matches!(PwlPath::new(RationalMatrix::zeros(2, 0)), Err(Error::EmptyPath)));
        let p = PwlPath::new(RationalMatrix::from_int_rows(&[vec![1, 0], vec![1, -2]])).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.segments(), 2);
        assert_eq!(
            p.vertices(),
            vec![
                vec![int(0), int(0)],
                vec![int(1), int(1)],
                vec![int(1), int(-1)],
            ]
        );
    }

    #[test]
    fn three_segment_axis_signature() {
        let sig = sig_axis(3, 2).unwrap();
        let expected = TensorSeq::from_levels(
            3,
            2,
            vec![
                vec![int(1)],
                vec![int(1), int(1), int(1)],
                vec![
                    frac(1, 2),
                    int(1),
                    int(1),
                    int(0),
                    frac(1, 2),
                    int(1),
                    int(0),
                    int(0),
                    frac(1, 2),
                ],
            ],
        )
        .unwrap();
        assert_eq!(sig, expected);
        assert!(is_grouplike(&sig));
        assert!(is_grouplike(&sig_axis(4, 3).unwrap()));
    }

    #[test]
    fn congruence_with_identity_fixes_everything() {
        let z = sig_axis(3, 3).unwrap();
        assert_eq!(congruence(&RationalMatrix::identity(3), &z).unwrap(), z);
        let wrong = RationalMatrix::identity(2);
        assert!(matches!(congruence(&wrong, &z), Err(Error::ContextMismatch(..))));
    }

    #[test]
    fn path_signature_agrees_with_segment_products() {
        let p = PwlPath::new(RationalMatrix::from_rows(vec![
            vec![int(1), frac(1, 2), int(-1)],
            vec![int(0), int(2), frac(1, 3)],
        ]))
        .unwrap();
        for k in 1..=3 {
            let via_congruence = sig_pwl(&p, k).unwrap();
            let mut via_chen = TensorSeq::one(2, k).unwrap();
            for j in 0..p.segments() {
                let col: Vec<BigRational> =
                    (0..2).map(|i| p.increments().get(i, j).clone()).collect();
                via_chen = mul(&via_chen, &sig_segment(&col, k).unwrap()).unwrap();
            }
            assert_eq!(via_congruence, via_chen);
            assert!(is_grouplike(&via_congruence));
        }
    }

    #[test]
    fn subpath_blocks_sit_in_the_ambient_space() {
        let alpha = Composition::new(vec![1, 2]).unwrap();
        let block2 = sig_axis_subpath(&alpha, 2, 2).unwrap();
        assert_eq!(block2.dim(), 3);
        // the block covers segments 2 and 3 only
        assert_eq!(block2.component(1), &[int(0), int(1), int(1)]);
        let idx = |i: usize, j: usize| 3 * i + j;
        assert_eq!(block2.component(2)[idx(1, 2)], int(1));
        assert_eq!(block2.component(2)[idx(2, 1)], int(0));
        assert_eq!(block2.component(2)[idx(1, 1)], frac(1, 2));
        assert_eq!(block2.component(2)[idx(0, 0)], int(0));

        let whole = Composition::new(vec![3]).unwrap();
        assert_eq!(sig_axis_subpath(&whole, 1, 2).unwrap(), sig_axis(3, 2).unwrap());
        assert!(matches!(
            sig_axis_subpath(&alpha, 3, 2),
            Err(Error::SubpathIndex { .. })
        ));
        assert!(matches!(Composition::new(vec![]), Err(Error::BadComposition)));
        assert!(matches!(Composition::new(vec![2, 0]), Err(Error::BadComposition)));
    }

    #[test]
    fn signed_area_requires_the_plane() {
        let p = PwlPath::new(RationalMatrix::from_int_rows(&[vec![1], vec![0], vec![0]])).unwrap();
        assert!(matches!(signed_area(&p), Err(Error::NotPlanar)));
    }

    #[test]
    fn json_round_trip_and_exact_layout() {
        let p = PwlPath::new(RationalMatrix::from_rows(vec![
            vec![int(1), frac(1, 2)],
            vec![frac(-1, 3), int(0)],
        ]))
        .unwrap();
        let v = p.to_json();
        assert_eq!(PwlPath::from_json(&v).unwrap(), p);
        assert_eq!(
            v.to_string(),
            "{\"dim\":2,\"increments\":[[\"1/1\",\"-1/3\"],[\"1/2\",\"0/1\"]]}"
        );
        assert!(PwlPath::from_json(&json!({"dim": 2, "increments": [["1/1"]]})).is_err());
        assert!(PwlPath::from_json(&json!({"dim": 2, "increments": []})).is_err());
    }
}
