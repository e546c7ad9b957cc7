//! Exact arithmetic in the tensor algebra over Q^d truncated at level k.
//!
//! An element is stored densely as one flattened coefficient vector per
//! level, so the whole space has dimension 1 + d + d^2 + ... + d^k. The
//! product drops every contribution above the truncation level, which makes
//! `exp` and `log` finite sums and the group of constant-term-one elements an
//! honest group.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ratio::{format_rational, parse_rational};

/// A word over the letters 1..=d, used to address a single tensor
/// coefficient. The empty word addresses the constant component.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.iter().any(|&a| a == 0) {
            return Err(Error::ZeroLetter);
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Row-major index of a word among all words of its length: the letter
/// sequence read as a base-d numeral with digits shifted down by one.
fn word_index(dim: usize, letters: &[u8]) -> usize {
    letters.iter().fold(0, |acc, &a| acc * dim + (a as usize - 1))
}

/// A truncated tensor series: one exact rational coefficient per word of
/// length 0..=k over d letters.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorSeq {
    dim: usize,
    level: usize,
    levels: Vec<Vec<BigRational>>,
}

impl fmt::Debug for TensorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorSeq(dim={}, level={}", self.dim, self.level)?;
        for comp in &self.levels {
            let entries: Vec<String> = comp.iter().map(format_rational).collect();
            write!(f, ", [{}]", entries.join(" "))?;
        }
        write!(f, ")")
    }
}

fn check_shape(dim: usize, level: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDim);
    }
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    Ok(())
}

fn check_context(x: &TensorSeq, y: &TensorSeq) -> Result<()> {
    if x.dim != y.dim || x.level != y.level {
        return Err(Error::ContextMismatch(x.dim, x.level, y.dim, y.level));
    }
    Ok(())
}

impl TensorSeq {
    pub fn zero(dim: usize, level: usize) -> Result<Self> {
        check_shape(dim, level)?;
        let levels = (0..=level)
            .map(|l| vec![BigRational::zero(); dim.pow(l as u32)])
            .collect();
        Ok(TensorSeq { dim, level, levels })
    }

    pub fn one(dim: usize, level: usize) -> Result<Self> {
        let mut out = Self::zero(dim, level)?;
        out.levels[0][0] = BigRational::one();
        Ok(out)
    }

    pub fn from_levels(dim: usize, level: usize, levels: Vec<Vec<BigRational>>) -> Result<Self> {
        check_shape(dim, level)?;
        if levels.len() != level + 1 {
            return Err(Error::BadLevelCount { expected: level + 1, found: levels.len() });
        }
        for (l, comp) in levels.iter().enumerate() {
            let expected = dim.pow(l as u32);
            if comp.len() != expected {
                return Err(Error::BadLevelShape { level: l, expected, found: comp.len() });
            }
        }
        Ok(TensorSeq { dim, level, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Flattened coefficients of one level. Panics if `l` exceeds the
    /// truncation level.
    pub fn component(&self, l: usize) -> &[BigRational] {
        assert!(l <= self.level, "level {l} out of range 0..={}", self.level);
        &self.levels[l]
    }

    pub fn set_component(&mut self, l: usize, values: Vec<BigRational>) -> Result<()> {
        if l > self.level {
            return Err(Error::GradeOutOfRange { component: l, level: self.level });
        }
        let expected = self.dim.pow(l as u32);
        if values.len() != expected {
            return Err(Error::BadLevelShape { level: l, expected, found: values.len() });
        }
        self.levels[l] = values;
        Ok(())
    }

    pub fn word_coeff(&self, w: &Word) -> Result<BigRational> {
        if w.len() > self.level {
            return Err(Error::WordTooLong { len: w.len(), level: self.level });
        }
        for &a in w.letters() {
            if a as usize > self.dim {
                return Err(Error::LetterTooLarge { letter: a, dim: self.dim });
            }
        }
        Ok(self.levels[w.len()][word_index(self.dim, w.letters())].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|comp| comp.iter().all(Zero::is_zero))
    }

    pub(crate) fn scaled(&self, c: &BigRational) -> TensorSeq {
        let levels = self
            .levels
            .iter()
            .map(|comp| comp.iter().map(|x| x * c).collect())
            .collect();
        TensorSeq { dim: self.dim, level: self.level, levels }
    }

    pub fn to_json(&self) -> Value {
        let mut levels = Vec::with_capacity(self.level + 1);
        levels.push(Value::String(format_rational(&self.levels[0][0])));
        for comp in &self.levels[1..] {
            levels.push(Value::Array(
                comp.iter().map(|x| Value::String(format_rational(x))).collect(),
            ));
        }
        json!({ "dim": self.dim, "level": self.level, "levels": levels })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::BadInput(msg.to_string());
        let obj = value.as_object().ok_or_else(|| bad("expected a JSON object"))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or non-integer \"dim\""))? as usize;
        let level = obj
            .get("level")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or non-integer \"level\""))? as usize;
        let raw = obj
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"levels\" array"))?;
        let mut levels = Vec::with_capacity(raw.len());
        for (l, entry) in raw.iter().enumerate() {
            if l == 0 {
                let text = entry
                    .as_str()
                    .ok_or_else(|| bad("constant component must be a rational string"))?;
                levels.push(vec![parse_rational(text)?]);
            } else {
                let comp = entry
                    .as_array()
                    .ok_or_else(|| bad("level components must be arrays"))?;
                let parsed: Result<Vec<BigRational>> = comp
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| bad("coefficients must be rational strings"))
                            .and_then(parse_rational)
                    })
                    .collect();
                levels.push(parsed?);
            }
        }
        Self::from_levels(dim, level, levels)
    }
}

/// a*x + b*y, entrywise.
pub fn linear_combine(
    a: &BigRational,
    x: &TensorSeq,
    b: &BigRational,
    y: &TensorSeq,
) -> Result<TensorSeq> {
    check_context(x, y)?;
    let levels = x
        .levels
        .iter()
        .zip(&y.levels)
        .map(|(xc, yc)| xc.iter().zip(yc).map(|(xv, yv)| a * xv + b * yv).collect())
        .collect();
    Ok(TensorSeq { dim: x.dim, level: x.level, levels })
}

/// Truncated tensor product: contributions above the truncation level are
/// dropped.
pub fn mul(x: &TensorSeq, y: &TensorSeq) -> Result<TensorSeq> {
    check_context(x, y)?;
    let mut out = TensorSeq::zero(x.dim, x.level)?;
    for l in 0..=x.level {
        let comp = &mut out.levels[l];
        for a in 0..=l {
            let xa = &x.levels[a];
            let yb = &y.levels[l - a];
            let stride = yb.len();
            for (ia, xv) in xa.iter().enumerate() {
                if xv.is_zero() {
                    continue;
                }
                for (ib, yv) in yb.iter().enumerate() {
                    if yv.is_zero() {
                        continue;
                    }
                    comp[ia * stride + ib] += xv * yv;
                }
            }
        }
    }
    Ok(out)
}

/// exp(z) = sum of z^l / l!, a finite sum under truncation. Requires a zero
/// constant component.
pub fn exp(z: &TensorSeq) -> Result<TensorSeq> {
    if !z.levels[0][0].is_zero() {
        return Err(Error::ConstantNotZero);
    }
    let one = BigRational::one();
    let mut acc = TensorSeq::one(z.dim, z.level)?;
    let mut term = TensorSeq::one(z.dim, z.level)?;
    for l in 1..=z.level {
        term = mul(&term, z)?;
        term = term.scaled(&BigRational::new(BigInt::one(), BigInt::from(l)));
        acc = linear_combine(&one, &acc, &one, &term)?;
    }
    Ok(acc)
}

/// log(s) = sum of (-1)^(l+1) (s-1)^l / l. Requires a unit constant
/// component.
pub fn log(s: &TensorSeq) -> Result<TensorSeq> {
    if !s.levels[0][0].is_one() {
        return Err(Error::ConstantNotOne);
    }
    let mut u = s.clone();
    u.levels[0][0] = BigRational::zero();
    let one = BigRational::one();
    let mut acc = TensorSeq::zero(s.dim, s.level)?;
    let mut pow = u.clone();
    for l in 1..=s.level {
        let sign = if l % 2 == 1 { 1 } else { -1 };
        let c = BigRational::new(BigInt::from(sign), BigInt::from(l));
        acc = linear_combine(&one, &acc, &c, &pow)?;
        if l < s.level {
            pow = mul(&pow, &u)?;
        }
    }
    Ok(acc)
}

/// Multiplicative inverse of an element with unit constant component,
/// computed as the geometric series in 1 - z.
pub fn group_inverse(z: &TensorSeq) -> Result<TensorSeq> {
    if !z.levels[0][0].is_one() {
        return Err(Error::ConstantNotOne);
    }
    let one_el = TensorSeq::one(z.dim, z.level)?;
    let one = BigRational::one();
    let u = linear_combine(&one, &one_el, &-one.clone(), z)?;
    let mut acc = one_el.clone();
    let mut pow = one_el;
    for _ in 1..=z.level {
        pow = mul(&pow, &u)?;
        acc = linear_combine(&one, &acc, &one, &pow)?;
    }
    #[cfg(debug_assertions)]
    {
        let via_exp = exp(&log(z)?.scaled(&-BigRational::one()))?;
        debug_assert_eq!(acc, via_exp, "inverse routes disagree");
    }
    Ok(acc)
}

/// Shuffle product of two words as a multiset of words, built from the
/// recursion (ua) sh (vb) = ((u sh vb))a + ((ua sh v))b.
pub fn shuffle_product(u: &Word, v: &Word) -> BTreeMap<Word, BigRational> {
    fn shuf(u: &[u8], v: &[u8]) -> BTreeMap<Vec<u8>, BigRational> {
        if u.is_empty() {
            return [(v.to_vec(), BigRational::one())].into_iter().collect();
        }
        if v.is_empty() {
            return [(u.to_vec(), BigRational::one())].into_iter().collect();
        }
        let (u0, a) = u.split_at(u.len() - 1);
        let (v0, b) = v.split_at(v.len() - 1);
        let mut out: BTreeMap<Vec<u8>, BigRational> = BTreeMap::new();
        for (w, c) in shuf(u0, v) {
            let mut w = w;
            w.push(a[0]);
            *out.entry(w).or_insert_with(BigRational::zero) += c;
        }
        for (w, c) in shuf(u, v0) {
            let mut w = w;
            w.push(b[0]);
            *out.entry(w).or_insert_with(BigRational::zero) += c;
        }
        out
    }
    shuf(&u.letters, &v.letters)
        .into_iter()
        .map(|(letters, c)| (Word { letters }, c))
        .collect()
}

/// Whether a series satisfies every shuffle relation visible under the
/// truncation: the constant is 1 and, for all nonempty words with
/// |u| + |v| <= k, the coefficient pairing factors as
/// <s, u sh v> = <s,u><s,v>.
pub fn is_grouplike(s: &TensorSeq) -> bool {
    if !s.levels[0][0].is_one() {
        return false;
    }
    let d = s.dim;
    let k = s.level;
    for lu in 1..=k {
        if 2 * lu > k {
            break;
        }
        for lv in lu..=(k - lu) {
            let nu = d.pow(lu as u32);
            let nv = d.pow(lv as u32);
            for iu in 0..nu {
                let u = word_at(d, lu, iu);
                let start = if lu == lv { iu } else { 0 };
                for iv in start..nv {
                    let v = word_at(d, lv, iv);
                    let mut lhs = BigRational::zero();
                    for (w, c) in shuffle_product(&u, &v) {
                        lhs += c * &s.levels[lu + lv][word_index(d, w.letters())];
                    }
                    let rhs = &s.levels[lu][iu] * &s.levels[lv][iv];
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The word of the given length whose row-major index is `idx`.
fn word_at(dim: usize, len: usize, idx: usize) -> Word {
    let mut letters = vec![0u8; len];
    let mut rem = idx;
    for slot in letters.iter_mut().rev() {
        *slot = (rem % dim) as u8 + 1;
        rem /= dim;
    }
    Word { letters }
}

/// Dimension of the free Lie algebra over d generators truncated at level k:
/// the total number of Lyndon words of length 1..=k, computed as a Moebius
/// sum (necklace counting) per length.
pub fn lie_algebra_dim(d: usize, k: usize) -> BigUint {
    assert!(d >= 1, "dimension must be at least 1");
    assert!(k >= 1, "level must be at least 1");
    let mut total = BigInt::zero();
    for l in 1..=k {
        let mut inner = BigInt::zero();
        for a in 1..=l {
            if l % a != 0 {
                continue;
            }
            let mu = moebius(a);
            if mu != 0 {
                inner += BigInt::from(mu) * BigInt::from(d).pow((l / a) as u32);
            }
        }
        let (q, rem) = inner.div_rem(&BigInt::from(l));
        debug_assert!(rem.is_zero(), "necklace sum not divisible by length");
        total += q;
    }
    total.to_biguint().expect("Lyndon counts are nonnegative")
}

fn moebius(mut n: usize) -> i64 {
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    fn seq(dim: usize, level: usize, levels: Vec<Vec<BigRational>>) -> TensorSeq {
        TensorSeq::from_levels(dim, level, levels).unwrap()
    }

    #[test]
    fn constructors_validate_shapes() {
        assert!(matches!(TensorSeq::zero(0, 2), Err(Error::ZeroDim)));
        assert!(matches!(TensorSeq::one(2, 0), Err(Error::ZeroLevel)));
        let bad = TensorSeq::from_levels(2, 2, vec![vec![int(1)], vec![int(0); 2]]);
        assert!(matches!(bad, Err(Error::BadLevelCount { .. })));
        let bad = TensorSeq::from_levels(2, 1, vec![vec![int(1)], vec![int(0); 3]]);
        assert!(matches!(bad, Err(Error::BadLevelShape { .. })));
    }

    #[test]
    fn linear_combine_is_entrywise() {
        let x = seq(2, 1, vec![vec![int(1)], vec![int(2), int(-3)]]);
        let y = seq(2, 1, vec![vec![int(0)], vec![int(4), int(5)]]);
        let got = linear_combine(&frac(1, 2), &x, &frac(1, 2), &y).unwrap();
        assert_eq!(got, seq(2, 1, vec![vec![frac(1, 2)], vec![int(3), int(1)]]));
        let other = TensorSeq::one(3, 1).unwrap();
        assert!(matches!(
            linear_combine(&int(1), &x, &int(1), &other),
            Err(Error::ContextMismatch(..))
        ));
    }

    #[test]
    fn one_is_the_multiplicative_unit() {
        let x = seq(2, 2, vec![vec![int(7)], vec![int(1), int(2)], vec![int(3); 4]]);
        let one = TensorSeq::one(2, 2).unwrap();
        assert_eq!(mul(&x, &one).unwrap(), x);
        assert_eq!(mul(&one, &x).unwrap(), x);
    }

    #[test]
    fn product_of_level_one_embeds_is_outer_product() {
        let mut u = TensorSeq::zero(2, 2).unwrap();
        u.set_component(1, vec![int(2), int(3)]).unwrap();
        let mut v = TensorSeq::zero(2, 2).unwrap();
        v.set_component(1, vec![int(5), int(7)]).unwrap();
        let p = mul(&u, &v).unwrap();
        assert!(p.component(0)[0].is_zero());
        assert!(p.component(1).iter().all(Zero::is_zero));
        assert_eq!(p.component(2), &[int(10), int(14), int(15), int(21)]);
    }

    #[test]
    fn products_above_the_truncation_level_vanish() {
        let mut u = TensorSeq::zero(2, 2).unwrap();
        u.set_component(2, vec![int(1); 4]).unwrap();
        let mut v = TensorSeq::zero(2, 2).unwrap();
        v.set_component(1, vec![int(1), int(1)]).unwrap();
        assert!(mul(&u, &v).unwrap().is_zero());
    }

    #[test]
    fn exp_of_level_one_vector() {
        let mut z = TensorSeq::zero(2, 2).unwrap();
        z.set_component(1, vec![int(1), int(1)]).unwrap();
        let e = exp(&z).unwrap();
        let expected = seq(
            2,
            2,
            vec![vec![int(1)], vec![int(1), int(1)], vec![frac(1, 2); 4]],
        );
        assert_eq!(e, expected);
        assert!(matches!(exp(&TensorSeq::one(2, 2).unwrap()), Err(Error::ConstantNotZero)));
    }

    #[test]
    fn log_inverts_exp() {
        let mut z = TensorSeq::zero(2, 3).unwrap();
        z.set_component(1, vec![int(1), frac(-2, 3)]).unwrap();
        z.set_component(2, vec![frac(1, 5), int(0), int(2), int(-1)]).unwrap();
        assert_eq!(log(&exp(&z).unwrap()).unwrap(), z);
        assert_eq!(log(&TensorSeq::one(2, 3).unwrap()).unwrap(), TensorSeq::zero(2, 3).unwrap());
        assert!(matches!(log(&TensorSeq::zero(2, 3).unwrap()), Err(Error::ConstantNotOne)));
    }

    #[test]
    fn group_inverse_of_exponential_negates_the_exponent() {
        let mut z = TensorSeq::zero(3, 2).unwrap();
        z.set_component(1, vec![int(1), int(-2), frac(1, 3)]).unwrap();
        let g = exp(&z).unwrap();
        let inv = group_inverse(&g).unwrap();
        assert_eq!(inv, exp(&z.scaled(&int(-1))).unwrap());
        assert_eq!(mul(&g, &inv).unwrap(), TensorSeq::one(3, 2).unwrap());
        let one = TensorSeq::one(2, 2).unwrap();
        assert_eq!(group_inverse(&one).unwrap(), one);
    }

    #[test]
    fn word_coeff_addresses_row_major_entries() {
        let x = seq(
            2,
            2,
            vec![vec![int(9)], vec![int(1), int(2)], vec![int(11), int(12), int(21), int(22)]],
        );
        let w = |l: &[u8]| Word::new(l.to_vec()).unwrap();
        assert_eq!(x.word_coeff(&Word::empty()).unwrap(), int(9));
        assert_eq!(x.word_coeff(&w(&[2])).unwrap(), int(2));
        assert_eq!(x.word_coeff(&w(&[1, 2])).unwrap(), int(12));
        assert_eq!(x.word_coeff(&w(&[2, 1])).unwrap(), int(21));
        assert!(matches!(x.word_coeff(&w(&[1, 1, 1])), Err(Error::WordTooLong { .. })));
        assert!(matches!(x.word_coeff(&w(&[3])), Err(Error::LetterTooLarge { .. })));
        assert!(matches!(Word::new(vec![0]), Err(Error::ZeroLetter)));
    }

    #[test]
    fn grouplike_accepts_exponentials_and_rejects_flat_level_two() {
        let mut z = TensorSeq::zero(3, 3).unwrap();
        z.set_component(1, vec![int(1), frac(1, 2), int(-3)]).unwrap();
        assert!(is_grouplike(&exp(&z).unwrap()));
        assert!(is_grouplike(&TensorSeq::one(2, 4).unwrap()));

        // level-one data with no matching level-two part fails s_1^2 = 2 s_11
        let mut bad = TensorSeq::one(2, 2).unwrap();
        bad.set_component(1, vec![int(1), int(1)]).unwrap();
        assert!(!is_grouplike(&bad));
        // wrong constant fails immediately
        assert!(!is_grouplike(&TensorSeq::zero(2, 2).unwrap()));
    }

    #[test]
    fn grouplike_at_level_two_is_exactly_the_four_small_relations() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let mut s = TensorSeq::one(2, 2).unwrap();
            let mut draw = || frac(rng.random_range(-2i64..=2), rng.random_range(1i64..=2));
            s.set_component(1, vec![draw(), draw()]).unwrap();
            s.set_component(2, vec![draw(), draw(), draw(), draw()]).unwrap();
            let l1 = s.component(1).to_vec();
            let l2 = s.component(2).to_vec();
            let by_hand = &l1[0] * &l1[0] == int(2) * &l2[0]
                && &l1[0] * &l1[1] == &l2[1] + &l2[2]
                && &l1[1] * &l1[1] == int(2) * &l2[3];
            assert_eq!(is_grouplike(&s), by_hand);
        }
    }

    #[test]
    fn lie_dimension_known_values() {
        assert_eq!(lie_algebra_dim(2, 2), BigUint::from(3u32));
        assert_eq!(lie_algebra_dim(2, 3), BigUint::from(5u32));
        assert_eq!(lie_algebra_dim(3, 2), BigUint::from(6u32));
        assert_eq!(lie_algebra_dim(2, 4), BigUint::from(8u32));
        assert_eq!(lie_algebra_dim(1, 5), BigUint::from(1u32));
    }

    #[test]
    #[should_panic(expected = "dimension must be at least 1")]
    fn lie_dimension_rejects_zero_alphabet() {
        lie_algebra_dim(0, 2);
    }

    #[test]
    fn json_round_trip_and_exact_layout() {
        let x = seq(2, 2, vec![vec![int(1)], vec![frac(3, 4), int(1)], vec![frac(9, 32); 4]]);
        let v = x.to_json();
        assert_eq!(TensorSeq::from_json(&v).unwrap(), x);
        let text = v.to_string();
        assert_eq!(
            text,
            "{\"dim\":2,\"level\":2,\"levels\":[\"1/1\",[\"3/4\",\"1/1\"],\
             [\"9/32\",\"9/32\",\"9/32\",\"9/32\"]]}"
        );
        assert!(TensorSeq::from_json(&serde_json::json!({"dim": 2})).is_err());
        assert!(TensorSeq::from_json(&serde_json::json!({
            "dim": 2, "level": 1, "levels": ["1/1", ["1/0", "0/1"]]
        }))
        .is_err());
    }
}
