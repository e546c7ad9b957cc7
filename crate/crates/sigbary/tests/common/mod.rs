#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sigbary::congruence_recovery::RationalMatrix;
use sigbary::signatures::{sig_pwl, PwlPath};
use sigbary::tensor_algebra::TensorSeq;

pub fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.random_range(-4i64..=4);
    let den = rng.random_range(1i64..=4);
    r(num, den)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    let data: Vec<Vec<BigRational>> = (0..rows)
        .map(|_| (0..cols).map(|_| rand_rational(rng)).collect())
        .collect();
    RationalMatrix::from_rows(data)
}

pub fn rand_path(rng: &mut ChaCha8Rng, dim: usize, segments: usize) -> PwlPath {
    PwlPath::new(rand_matrix(rng, dim, segments)).expect("valid path shape")
}

/// Random group-like element, produced as the signature of a short random
/// piecewise-linear path. Degenerate all-zero paths are fine: they give the
/// identity, which is group-like too.
pub fn rand_grouplike(rng: &mut ChaCha8Rng, dim: usize, level: usize) -> TensorSeq {
    let segments = rng.random_range(1usize..=3);
    sig_pwl(&rand_path(rng, dim, segments), level).expect("signature of a random path")
}

/// All compositions of m (ordered tuples of positive integers summing to m).
pub fn compositions(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=m {
        for mut rest in compositions(m - first) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

/// All words of the given length over letters 1..=d, in lexicographic order
/// (which is also the order of their flattened tensor indices).
pub fn all_words(d: usize, len: usize) -> Vec<Vec<u8>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for a in 1..=d as u8 {
        for rest in all_words(d, len - 1) {
            let mut w = vec![a];
            w.extend_from_slice(&rest);
            out.push(w);
        }
    }
    out
}

/// The two unit-speed sample paths used in the worked two-sample recovery
/// example: increments (1, 1/2) and (1/2, 1).
pub fn two_sample_paths() -> Vec<PwlPath> {
    let x1 = PwlPath::new(RationalMatrix::from_rows(vec![vec![ri(1)], vec![r(1, 2)]])).unwrap();
    let x2 = PwlPath::new(RationalMatrix::from_rows(vec![vec![r(1, 2)], vec![ri(1)]])).unwrap();
    vec![x1, x2]
}

pub fn two_sample_sigs(level: usize) -> Vec<TensorSeq> {
    two_sample_paths()
        .iter()
        .map(|p| sig_pwl(p, level).unwrap())
        .collect()
}
