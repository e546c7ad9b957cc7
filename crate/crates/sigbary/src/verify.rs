//! Self-checking suite behind the `verify` command: fixed golden values plus
//! randomized structural properties, all evaluated in exact arithmetic with
//! fixed seeds so every run is reproducible.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::barycenter::{bary, bary_k2, bary_pair, bary_residual, bary_solve_last, GroupSample};
use crate::congruence_recovery::{
    k3_family_matrix, recover_k2, verify_recovery_k3, w_alpha, RationalMatrix,
};
use crate::ncpoly::{build_bary_poly, evaluate};
use crate::ratio::{frac, int};
use crate::signatures::{
    congruence, sig_axis, sig_axis_subpath, sig_pwl, sig_segment, signed_area, Composition,
    PwlPath,
};
use crate::tensor_algebra::{
    exp, group_inverse, is_grouplike, lie_algebra_dim, log, mul, shuffle_product, TensorSeq, Word,
};

/// Result of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Empty on success, otherwise a one-line description of the first
    /// failing instance.
    pub detail: String,
}

type CheckResult = std::result::Result<(), String>;

/// Runs every check and reports one outcome per check. `extra_omega` adds a
/// caller-chosen parameter to the level-three family checks.
pub fn run_suite(extra_omega: Option<&BigRational>) -> Vec<CheckOutcome> {
    let checks: Vec<(&'static str, CheckResult)> = vec![
        ("axis_signature_golden", check_axis_signature_golden()),
        ("lie_dimension_golden", check_lie_dimension_golden()),
        ("worked_barycenter_golden", check_worked_barycenter_golden()),
        ("worked_recovery_golden", check_worked_recovery_golden()),
        ("barycenter_residual_zero", check_barycenter_residual_zero()),
        ("barycenter_equivariance", check_barycenter_equivariance()),
        ("barycenter_permutation_invariance", check_barycenter_permutation_invariance()),
        ("barycenter_power_sample", check_barycenter_power_sample()),
        ("pair_closed_form_matches_solver", check_pair_closed_form_matches_solver()),
        ("solve_last_round_trip", check_solve_last_round_trip()),
        ("chen_identity", check_chen_identity()),
        ("congruence_equivariance", check_congruence_equivariance()),
        ("grouplike_closure", check_grouplike_closure()),
        ("exp_log_round_trip", check_exp_log_round_trip()),
        ("shuffle_mass_binomial", check_shuffle_mass_binomial()),
        ("segment_recovery_closure", check_segment_recovery_closure()),
        ("subpath_form_oracle", check_subpath_form_oracle()),
        ("poly_route_matches_solver", check_poly_route_matches_solver()),
        ("k3_family", check_k3_family(extra_omega)),
    ];
    checks
        .into_iter()
        .map(|(name, res)| match res {
            Ok(()) => CheckOutcome { name, passed: true, detail: String::new() },
            Err(detail) => CheckOutcome { name, passed: false, detail },
        })
        .collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn s<T>(r: crate::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic sweep of (dim, level, sample size) triples.
fn grid(i: usize) -> (usize, usize, usize) {
    (1 + i % 3, 1 + (i / 3) % 3, 1 + (i / 9) % 4)
}

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    frac(rng.random_range(-4i64..=4), rng.random_range(1i64..=4))
}

fn rand_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| rand_rational(rng)).collect()).collect(),
    )
}

fn rand_path(rng: &mut ChaCha8Rng, dim: usize, segments: usize) -> PwlPath {
    PwlPath::new(rand_matrix(rng, dim, segments)).expect("valid path shape")
}

fn rand_grouplike(rng: &mut ChaCha8Rng, dim: usize, level: usize) -> TensorSeq {
    let segments = rng.random_range(1usize..=3);
    sig_pwl(&rand_path(rng, dim, segments), level).expect("signature of a random path")
}

fn rand_tensor(rng: &mut ChaCha8Rng, dim: usize, level: usize, constant: i64) -> TensorSeq {
    let mut levels = vec![vec![int(constant)]];
    for l in 1..=level {
        levels.push((0..dim.pow(l as u32)).map(|_| rand_rational(rng)).collect());
    }
    TensorSeq::from_levels(dim, level, levels).expect("valid tensor shape")
}

fn rand_sample(rng: &mut ChaCha8Rng, dim: usize, level: usize, n: usize) -> Vec<TensorSeq> {
    (0..n).map(|_| rand_grouplike(rng, dim, level)).collect()
}

fn binomial(n: usize, k: usize) -> BigRational {
    let mut value = int(1);
    for i in 0..k {
        value = value * frac((n - i) as i64, (i + 1) as i64);
    }
    value
}

fn all_compositions(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=m {
        for mut rest in all_compositions(m - first) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

fn check_axis_signature_golden() -> CheckResult {
    let got = s(sig_axis(3, 2))?;
    let expected = s(TensorSeq::from_levels(
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
    ))?;
    ensure(got == expected, "three-segment axis signature at level 2 is off")
}

fn check_lie_dimension_golden() -> CheckResult {
    for (d, k, expected) in [(2, 2, 3u32), (2, 3, 5), (3, 2, 6), (2, 4, 8)] {
        ensure(
            lie_algebra_dim(d, k) == BigUint::from(expected),
            format!("free Lie dimension differs at d={d} k={k}"),
        )?;
    }
    Ok(())
}

fn worked_pair() -> std::result::Result<Vec<TensorSeq>, String> {
    Ok(vec![
        s(sig_segment(&[frac(1, 2), int(1)], 2))?,
        s(sig_segment(&[int(1), frac(1, 2)], 2))?,
    ])
}

fn worked_barycenter() -> std::result::Result<TensorSeq, String> {
    s(TensorSeq::from_levels(
        2,
        2,
        vec![
            vec![int(1)],
            vec![frac(3, 4), frac(3, 4)],
            vec![frac(9, 32), frac(9, 32), frac(9, 32), frac(9, 32)],
        ],
    ))
}

fn check_worked_barycenter_golden() -> CheckResult {
    let members = worked_pair()?;
    let expected = worked_barycenter()?;
    let sample = s(GroupSample::new(members.clone()))?;
    ensure(bary(&sample) == expected, "level-sweep barycenter differs on the worked pair")?;
    ensure(s(bary_k2(&sample))? == expected, "closed-form barycenter differs on the worked pair")?;
    let via_poly = s(evaluate(&build_bary_poly(2, 2), &members))?;
    ensure(via_poly == expected, "polynomial-route barycenter differs on the worked pair")
}

fn check_worked_recovery_golden() -> CheckResult {
    let p1 = s(PwlPath::new(RationalMatrix::from_rows(vec![vec![frac(1, 2)], vec![int(1)]])))?;
    let p2 = s(PwlPath::new(RationalMatrix::from_rows(vec![vec![int(1)], vec![frac(1, 2)]])))?;
    let rec = s(recover_k2(&[p1, p2], 2))?;
    ensure(rec.segments() == 1, "worked recovery should need one segment")?;
    let expected = RationalMatrix::from_rows(vec![vec![frac(3, 4)], vec![frac(3, 4)]]);
    ensure(rec.increments() == &expected, "worked recovery increment differs from (3/4, 3/4)")
}

fn check_barycenter_residual_zero() -> CheckResult {
    let mut rng = seeded(11);
    for i in 0..54 {
        let (d, k, n) = grid(i);
        let sample = s(GroupSample::new(rand_sample(&mut rng, d, k, n)))?;
        let center = bary(&sample);
        let residual = s(bary_residual(&center, &sample))?;
        ensure(residual.is_zero(), format!("nonzero residual at d={d} k={k} n={n}"))?;
    }
    Ok(())
}

fn check_barycenter_equivariance() -> CheckResult {
    let mut rng = seeded(12);
    for i in 0..54 {
        let (d, k, n) = grid(i);
        let members = rand_sample(&mut rng, d, k, n);
        let g = rand_grouplike(&mut rng, d, k);
        let base = bary(&s(GroupSample::new(members.clone()))?);

        let mut left = Vec::new();
        for x in &members {
            left.push(s(mul(&g, x))?);
        }
        let left_bary = bary(&s(GroupSample::new(left))?);
        ensure(left_bary == s(mul(&g, &base))?, format!("left shift at d={d} k={k} n={n}"))?;

        let mut right = Vec::new();
        for x in &members {
            right.push(s(mul(x, &g))?);
        }
        let right_bary = bary(&s(GroupSample::new(right))?);
        ensure(right_bary == s(mul(&base, &g))?, format!("right shift at d={d} k={k} n={n}"))?;

        let mut inverted = Vec::new();
        for x in &members {
            inverted.push(s(group_inverse(x))?);
        }
        let inv_bary = bary(&s(GroupSample::new(inverted))?);
        ensure(inv_bary == s(group_inverse(&base))?, format!("inversion at d={d} k={k} n={n}"))?;
    }
    Ok(())
}

fn check_barycenter_permutation_invariance() -> CheckResult {
    let mut rng = seeded(13);
    for i in 0..54 {
        let (d, k, n) = grid(i);
        let members = rand_sample(&mut rng, d, k, n);
        let base = bary(&s(GroupSample::new(members.clone()))?);
        let mut rotated = members.clone();
        rotated.rotate_left(i % n);
        ensure(
            bary(&s(GroupSample::new(rotated))?) == base,
            format!("rotation changes the barycenter at d={d} k={k} n={n}"),
        )?;
        let mut reversed = members;
        reversed.reverse();
        ensure(
            bary(&s(GroupSample::new(reversed))?) == base,
            format!("reversal changes the barycenter at d={d} k={k} n={n}"),
        )?;
    }
    Ok(())
}

fn check_barycenter_power_sample() -> CheckResult {
    let mut rng = seeded(14);
    for i in 0..54 {
        let (d, k, n) = grid(i);
        let members = rand_sample(&mut rng, d, k, n);
        let base = bary(&s(GroupSample::new(members.clone()))?);
        let doubled: Vec<TensorSeq> = members.iter().chain(&members).cloned().collect();
        ensure(
            bary(&s(GroupSample::new(doubled))?) == base,
            format!("doubling the sample moves the barycenter at d={d} k={k} n={n}"),
        )?;
    }
    Ok(())
}

fn check_pair_closed_form_matches_solver() -> CheckResult {
    let mut rng = seeded(15);
    for i in 0..54 {
        let (d, k, _) = grid(i);
        let x1 = rand_grouplike(&mut rng, d, k);
        let x2 = rand_grouplike(&mut rng, d, k);
        let sample = s(GroupSample::new(vec![x1.clone(), x2.clone()]))?;
        let base = bary(&sample);
        ensure(
            s(bary_pair(&x1, &x2))? == base,
            format!("two-point closed form differs at d={d} k={k}"),
        )?;
        if k == 2 {
            ensure(
                s(bary_k2(&sample))? == base,
                format!("level-two closed form differs at d={d}"),
            )?;
        }
    }
    Ok(())
}

fn check_solve_last_round_trip() -> CheckResult {
    let mut rng = seeded(16);
    for i in 0..54 {
        let (d, k, n) = grid(i);
        let members = rand_sample(&mut rng, d, k, n);
        let center = bary(&s(GroupSample::new(members.clone()))?);
        let got = s(bary_solve_last(&members[..n - 1], &center))?;
        ensure(got == members[n - 1], format!("completion differs at d={d} k={k} n={n}"))?;
    }
    Ok(())
}

fn check_chen_identity() -> CheckResult {
    let mut rng = seeded(17);
    for i in 0..54 {
        let (d, k, _) = grid(i);
        let s1 = 1 + i % 3;
        let s2 = 1 + (i / 2) % 3;
        let whole = rand_path(&mut rng, d, s1 + s2);
        let rows = whole.increments().to_rows();
        let head: Vec<Vec<BigRational>> = rows.iter().map(|r| r[..s1].to_vec()).collect();
        let tail: Vec<Vec<BigRational>> = rows.iter().map(|r| r[s1..].to_vec()).collect();
        let first = s(PwlPath::new(RationalMatrix::from_rows(head)))?;
        let second = s(PwlPath::new(RationalMatrix::from_rows(tail)))?;
        let product = s(mul(&s(sig_pwl(&first, k))?, &s(sig_pwl(&second, k))?))?;
        ensure(
            product == s(sig_pwl(&whole, k))?,
            format!("concatenation product differs at d={d} k={k} split {s1}+{s2}"),
        )?;
    }
    Ok(())
}

fn check_congruence_equivariance() -> CheckResult {
    let mut rng = seeded(18);
    for i in 0..54 {
        let (d, k, _) = grid(i);
        let rows = 1 + (i / 2) % 3;
        let a = rand_matrix(&mut rng, rows, d);
        let path = rand_path(&mut rng, d, 1 + i % 3);
        let mapped_path = s(PwlPath::new(a.mul(path.increments())))?;
        ensure(
            s(congruence(&a, &s(sig_pwl(&path, k))?))? == s(sig_pwl(&mapped_path, k))?,
            format!("signature naturality fails at d={d} k={k} rows={rows}"),
        )?;
        let x = rand_grouplike(&mut rng, d, k);
        let y = rand_grouplike(&mut rng, d, k);
        let lhs = s(congruence(&a, &s(mul(&x, &y))?))?;
        let rhs = s(mul(&s(congruence(&a, &x))?, &s(congruence(&a, &y))?))?;
        ensure(lhs == rhs, format!("congruence is not multiplicative at d={d} k={k}"))?;
    }
    Ok(())
}

fn check_grouplike_closure() -> CheckResult {
    let mut rng = seeded(19);
    for i in 0..54 {
        let (d, k, _) = grid(i);
        let x = rand_grouplike(&mut rng, d, k);
        let y = rand_grouplike(&mut rng, d, k);
        ensure(is_grouplike(&s(mul(&x, &y))?), format!("product not group-like d={d} k={k}"))?;
        ensure(
            is_grouplike(&s(group_inverse(&x))?),
            format!("inverse not group-like d={d} k={k}"),
        )?;
        ensure(is_grouplike(&s(TensorSeq::one(d, k))?), "unit not group-like")?;
        if k >= 2 {
            let mut bad = x.clone();
            let mut level2 = bad.component(2).to_vec();
            level2[0] += int(1);
            s(bad.set_component(2, level2))?;
            ensure(!is_grouplike(&bad), format!("perturbation undetected d={d} k={k}"))?;
        }
    }
    Ok(())
}

fn check_exp_log_round_trip() -> CheckResult {
    let mut rng = seeded(20);
    for i in 0..54 {
        let (d, k, _) = grid(i);
        let z = rand_tensor(&mut rng, d, k, 0);
        ensure(s(log(&s(exp(&z))?))? == z, format!("log(exp) differs at d={d} k={k}"))?;
        let mut g = rand_tensor(&mut rng, d, k, 1);
        ensure(s(exp(&s(log(&g))?))? == g, format!("exp(log) differs at d={d} k={k}"))?;
        g = rand_grouplike(&mut rng, d, k);
        ensure(s(exp(&s(log(&g))?))? == g, format!("exp(log) differs on signatures d={d}"))?;
    }
    Ok(())
}

fn check_shuffle_mass_binomial() -> CheckResult {
    let mut rng = seeded(21);
    for i in 0..60 {
        let d = 1 + i % 3;
        let lu = 1 + (i / 3) % 3;
        let lv = 1 + (i / 9) % 3;
        let letters = |rng: &mut ChaCha8Rng, len: usize| -> std::result::Result<Word, String> {
            s(Word::new((0..len).map(|_| rng.random_range(1..=d as u8)).collect()))
        };
        let u = letters(&mut rng, lu)?;
        let v = letters(&mut rng, lv)?;
        let mass = shuffle_product(&u, &v)
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c);
        ensure(
            mass == binomial(lu + lv, lu),
            format!("shuffle mass differs for lengths {lu}+{lv} over {d} letters"),
        )?;
    }
    Ok(())
}

fn check_segment_recovery_closure() -> CheckResult {
    let mut rng = seeded(22);
    for i in 0..54 {
        let d = 2 + i % 2;
        let n = 1 + (i / 2) % 4;
        let paths: Vec<PwlPath> = (0..n).map(|_| rand_path(&mut rng, d, 1)).collect();
        let rec = s(recover_k2(&paths, 2))?;
        ensure(rec.segments() == 1, format!("segments in, more segments out at d={d} n={n}"))?;
        let mut sigs = Vec::new();
        for p in &paths {
            sigs.push(s(sig_pwl(p, 2))?);
        }
        let target = bary(&s(GroupSample::new(sigs))?);
        ensure(
            s(sig_pwl(&rec, 2))? == target,
            format!("recovered segment misses the barycenter at d={d} n={n}"),
        )?;
    }
    Ok(())
}

fn check_subpath_form_oracle() -> CheckResult {
    for m in 1..=6 {
        for parts in all_compositions(m) {
            let alpha = s(Composition::new(parts.clone()))?;
            let mut sigs = Vec::new();
            for j in 1..=alpha.len() {
                sigs.push(s(sig_axis_subpath(&alpha, j, 2))?);
            }
            let center = bary(&s(GroupSample::new(sigs))?);
            let w = w_alpha(&alpha);
            let flat: Vec<BigRational> =
                w.to_rows().into_iter().flatten().collect();
            ensure(
                center.component(2) == flat.as_slice(),
                format!("level-two form differs for composition {parts:?}"),
            )?;
        }
    }
    Ok(())
}

fn check_poly_route_matches_solver() -> CheckResult {
    let mut rng = seeded(23);
    for i in 0..54 {
        let d = 1 + i % 3;
        let k = 1 + (i / 3) % 3;
        let n = 1 + (i / 9) % 3;
        let members = rand_sample(&mut rng, d, k, n);
        let via_poly = s(evaluate(&build_bary_poly(n, k), &members))?;
        let base = bary(&s(GroupSample::new(members))?);
        ensure(via_poly == base, format!("polynomial route differs at d={d} k={k} n={n}"))?;
    }
    Ok(())
}

fn check_k3_family(extra_omega: Option<&BigRational>) -> CheckResult {
    let mut omegas = vec![frac(1, 4), frac(3, 4), frac(-1, 4), frac(7, 5)];
    if let Some(w) = extra_omega {
        omegas.push(w.clone());
    }
    for w in &omegas {
        ensure(s(verify_recovery_k3(w))?, format!("family member differs at omega={w}"))?;
        let path = s(PwlPath::new(s(k3_family_matrix(w))?))?;
        ensure(s(signed_area(&path))?.is_zero(), format!("nonzero area at omega={w}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_full_suite_passes() {
        let outcomes = run_suite(None);
        assert_eq!(outcomes.len(), 19);
        for o in &outcomes {
            assert!(o.passed, "{} failed: {}", o.name, o.detail);
            assert!(o.detail.is_empty());
        }
    }

    #[test]
    fn a_caller_chosen_family_parameter_is_included() {
        let outcomes = run_suite(Some(&frac(2, 3)));
        assert!(outcomes.iter().all(|o| o.passed));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), int(6));
        assert_eq!(binomial(5, 0), int(1));
        assert_eq!(binomial(6, 6), int(1));
        assert_eq!(binomial(6, 1), int(6));
    }
}
