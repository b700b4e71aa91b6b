//! The acceptance criteria as runnable checks with pinned parameters.
//!
//! Each criterion returns a [`CriterionResult`]; `selftest` and the
//! `acceptance` test target print one line per criterion.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rank_ff, FieldElem, MatPoly, Matrix, PolyRing, PrimeField, SparseMultiPoly, UniPoly};
use crate::concentration::{
    certify_family, check_basis_isolating, collapse_y, commutative_blackbox_pit, concentrated_points,
    concentration_target, default_max_weight, is_l_concentrated, lagrange_tuple, required_d2, search_isolating,
    weight_shift, ShiftFamily, WeightAssignment,
};
use crate::error::Result;
use crate::known_order::{
    bivariate_map, conjecture_probe, halving_transform, halving_transform_with, hitting_set_for_order,
    hitting_set_known_order, hitting_set_truncated, run_points, univariate_by_halving, PolyTuple, Verdict,
};
use crate::nisan::{binomial_matrix, pdm};
use crate::roabp::{
    random_commutative, random_roabp_with, roabp_from_bivariate, Layer, MatrixRoabp, Roabp, DEFAULT_TERM_CAP,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

fn timed(id: u32, name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn prime(p: u64) -> PrimeField {
    PrimeField::new(p).expect("pinned primes are prime")
}

/// `sum_{i,j} M(i,j) t^(2i) (t^2 + t)^j`, computed directly.
fn substitute_bivariate(f: PrimeField, m: &Matrix<FieldElem>, p0: &UniPoly, p1: &UniPoly) -> UniPoly {
    let n = m.rows();
    let pow0: Vec<UniPoly> = (0..n).map(|i| p0.pow(i as u64)).collect();
    let pow1: Vec<UniPoly> = (0..n).map(|j| p1.pow(j as u64)).collect();
    let mut acc = UniPoly::zero(f);
    for (i, a) in pow0.iter().enumerate() {
        for (j, b) in pow1.iter().enumerate() {
            let c = *m.get(i, j);
            if !c.is_zero() {
                acc = acc.add(&a.mul(b).scale(c));
            }
        }
    }
    acc
}

/// Every nonzero `u1 v1^T + u2 v2^T` over `Z_3` (`d = 2`, `w = 2`) survives
/// `(t^2, t^2 + t)`. Checked by direct substitution and, independently, by
/// building the width-`rank` ROABP and halving it.
pub fn criterion_1() -> CriterionResult {
    timed(1, "exhaustive bivariate map over Z_3, d=2, w=2", || {
        let f = prime(3);
        let map = bivariate_map(f, 2)?;
        let (p0, p1) = (&map.entries()[0], &map.entries()[1]);
        let vectors: Vec<[u64; 3]> = (0..27).map(|x| [x % 3, (x / 3) % 3, x / 9]).collect();
        let mut seen = vec![false; 19683];
        let (mut distinct, mut failures) = (0usize, 0usize);
        for u1 in &vectors {
            for v1 in &vectors {
                for u2 in &vectors {
                    for v2 in &vectors {
                        let mut key = 0usize;
                        let mut cells = [0u64; 9];
                        for i in 0..3 {
                            for j in 0..3 {
                                let c = (u1[i] * v1[j] + u2[i] * v2[j]) % 3;
                                cells[3 * i + j] = c;
                                key = key * 3 + c as usize;
                            }
                        }
                        if key == 0 || std::mem::replace(&mut seen[key], true) {
                            continue;
                        }
                        distinct += 1;
                        let m = Matrix::new(3, 3, cells.iter().map(|&c| f.elem(c)).collect())?;
                        let direct = substitute_bivariate(f, &m, p0, p1);
                        let a = roabp_from_bivariate(&crate::nisan::PartialDerivMatrix::from_matrix(f, m)?)?;
                        let halved = halving_transform_with(&a, 2)?.layer_polys(0).get(0, 0).clone();
                        if direct.is_zero() || direct != halved {
                            failures += 1;
                        }
                    }
                }
            }
        }
        Ok((
            failures == 0,
            format!("{distinct} distinct nonzero coefficient matrices, {failures} failures"),
        ))
    })
}

/// The ROABP `(x1^2 + x1, 1) . (1, x2^2)^T` over `Z_2`.
pub fn char2_counterexample() -> Result<Roabp> {
    let f = prime(2);
    let p = |c: &[u64]| UniPoly::from_u64s(f, c);
    Roabp::from_poly_layers(
        f,
        2,
        2,
        vec![0, 1],
        &[
            Matrix::from_rows(vec![vec![p(&[0, 1, 1]), p(&[1])]])?,
            Matrix::from_rows(vec![vec![p(&[1])], vec![p(&[0, 0, 1])]])?,
        ],
    )
}

/// `x2^2 + x1^2 + x1` vanishes under `(t^2, t^2 + t)` over `Z_2`.
pub fn criterion_2() -> CriterionResult {
    timed(2, "characteristic-2 counterexample", || {
        let a = char2_counterexample()?;
        let f = a.field();
        let poly = a.expand(DEFAULT_TERM_CAP)?;
        let expected = SparseMultiPoly::from_terms(
            f,
            2,
            [(vec![0, 2], f.one()), (vec![2, 0], f.one()), (vec![1, 0], f.one())],
        )?;
        let map = bivariate_map(f, 2)?;
        let pointwise_zero = (0..2).all(|tau| {
            let pt = map.eval(f.elem(tau));
            a.eval(&pt).map(|v| v.is_zero()).unwrap_or(false)
        });
        let direct = substitute_bivariate(f, pdm(&poly, 2)?.matrix(), &map.entries()[0], &map.entries()[1]);
        let halved = univariate_by_halving(&a)?;
        let hs = hitting_set_truncated(f, a.order(), 2, 2)?;
        let out = run_points(&hs.points, |x| a.eval(x).expect("length"));
        let ok = poly == expected
            && pointwise_zero
            && direct.is_zero()
            && halved.is_zero()
            && hs.len() == 2
            && out.verdict == Verdict::Zero;
        Ok((
            ok,
            format!(
                "f = {poly}; zero at both points of Z_2: {pointwise_zero}; symbolic image zero: {}",
                direct.is_zero() && halved.is_zero()
            ),
        ))
    })
}

/// Rank of the coefficient matrix is at most the width; binomial matrices
/// with distinct `j < p` are invertible; the `Z_2`, `j = (0, 2)` matrix is singular.
pub fn criterion_3(seed: u64) -> CriterionResult {
    timed(3, "rank <= width and binomial matrix invertibility", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(101);
        let mut rank_violations = 0;
        for _ in 0..1000 {
            let w = rng.gen_range(1..=4);
            let d = rng.gen_range(0..=4);
            let a = random_roabp_with(f, 2, d, w, false, &mut rng);
            let m = pdm(&a.expand(DEFAULT_TERM_CAP)?, d)?;
            if m.rank() > w {
                rank_violations += 1;
            }
        }
        let mut singular = 0;
        for _ in 0..1000 {
            let w = rng.gen_range(1..=8);
            let mut pool: Vec<u64> = (0..f.modulus()).collect();
            pool.shuffle(&mut rng);
            let js = &pool[..w];
            if rank_ff(&f, &binomial_matrix(&f, js, w)?) != w {
                singular += 1;
            }
        }
        let f2 = prime(2);
        let c = binomial_matrix(&f2, &[0, 2], 2)?;
        let pinned = rank_ff(&f2, &c) == 1;
        Ok((
            rank_violations == 0 && singular == 0 && pinned,
            format!(
                "{rank_violations}/1000 rank violations, {singular}/1000 singular binomial matrices, Z_2 j=(0,2) singular: {pinned}"
            ),
        ))
    })
}

/// The 33-point set for `(4, 2, 2)` over `Z_10007` hits every random nonzero
/// instance (random known orders) and never the zero ROABP.
pub fn criterion_4(seed: u64) -> CriterionResult {
    timed(4, "known-order hitting set (n,d,w)=(4,2,2), p=10007", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(10007);
        let base = hitting_set_known_order(f, 4, 2, 2)?;
        let mut missed = 0;
        for _ in 0..1000 {
            let mut order: Vec<usize> = (0..4).collect();
            order.shuffle(&mut rng);
            let a = random_roabp_with(f, 4, 2, 2, true, &mut rng).with_order(order)?;
            let hs = hitting_set_for_order(f, a.order(), 2, 2)?;
            if run_points(&hs.points, |x| a.eval(x).expect("length")).verdict != Verdict::Nonzero {
                missed += 1;
            }
        }
        let zero = Roabp::zero(f, 4, 2, 2)?;
        let zero_out = run_points(&base.points, |x| zero.eval(x).expect("length"));
        let ok = base.len() == 33 && missed == 0 && zero_out.verdict == Verdict::Zero;
        Ok((
            ok,
            format!(
                "{} points; hit {}/1000 nonzero instances; zero ROABP hit: {}",
                base.len(),
                1000 - missed,
                zero_out.verdict == Verdict::Nonzero
            ),
        ))
    })
}

/// One halving round equals substituting `(t_i^w, t_i^w + t_i^(w-1))` for
/// each variable pair in the expansion, and stays nonzero.
pub fn criterion_5(seed: u64) -> CriterionResult {
    timed(5, "halving soundness, n=4, d<=2, w<=2, p=101", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(101);
        let (mut mismatches, mut zeros) = (0, 0);
        for _ in 0..200 {
            let d = rng.gen_range(0..=2);
            let w = rng.gen_range(1..=2);
            let a = random_roabp_with(f, 4, d, w, true, &mut rng);
            let halved = halving_transform(&a)?.expand(DEFAULT_TERM_CAP)?;
            let map = bivariate_map(f, w)?;
            let images: Vec<SparseMultiPoly> = (0..4)
                .map(|i| {
                    let p = &map.entries()[i % 2];
                    let mut img = SparseMultiPoly::zero(f, 2);
                    for (e, &c) in p.coeffs().iter().enumerate() {
                        let mut exp = vec![0, 0];
                        exp[i / 2] = e as u32;
                        img.add_term(exp, c);
                    }
                    img
                })
                .collect();
            let direct = a.expand(DEFAULT_TERM_CAP)?.substitute(&images)?;
            if halved != direct {
                mismatches += 1;
            }
            if halved.is_zero() {
                zeros += 1;
            }
        }
        Ok((
            mismatches == 0 && zeros == 0,
            format!("200 instances: {mismatches} mismatches, {zeros} zero images"),
        ))
    })
}

fn lift(d: &MatPoly<PrimeField>) -> MatPoly<PolyRing> {
    let f = *d.ring();
    d.map_ring(PolyRing::new(f), |&c| UniPoly::constant(f, c))
}

/// Isolating weights found by search make `D(x + t^w)` concentrated.
pub fn criterion_6(seed: u64) -> CriterionResult {
    timed(6, "isolation implies concentration, n=4, d<=2, w<=2", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(10007);
        let (mut found, mut failures) = (0, 0);
        for _ in 0..200 {
            let d = rng.gen_range(0..=2);
            let w = rng.gen_range(1..=2);
            let a = random_commutative(f, 4, d, w, &mut rng)?;
            let poly = a.matrix_polynomial(DEFAULT_TERM_CAP)?;
            let Some(weights) = search_isolating(&poly, default_max_weight(4, d)) else {
                continue;
            };
            found += 1;
            let ell = concentration_target(w * w);
            let shifted = lift(&poly).shift(weight_shift(f, &weights).entries())?;
            if check_basis_isolating(&poly, &weights).is_none() || !is_l_concentrated(&shifted, ell) {
                failures += 1;
            }
        }
        Ok((
            failures == 0,
            format!(
                "search succeeded on {found}/200 (failure rate {:.1}%), {failures} concentration failures",
                100.0 * (200 - found) as f64 / 200.0
            ),
        ))
    })
}

/// A polynomial over the `k`-dimensional diagonal algebra supported only on
/// monomials that use every variable, so no shift-free low-support
/// coefficient exists.
fn full_support_poly<R: Rng>(f: PrimeField, n: usize, d: u32, k: usize, rng: &mut R) -> MatPoly<PrimeField> {
    let mut out = MatPoly::zero(f, n, 1, k);
    let mut exps = vec![vec![]];
    for _ in 0..n {
        exps = exps
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (1..=d).map(move |x| {
                    let mut e = e.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    for e in exps {
        out.add_term(e, Matrix::from_fn(1, k, |_, _| f.random(rng)));
    }
    out
}

/// Families in which exactly one member concentrates `D`: the interpolated,
/// collapsed shift concentrates `D` as well.
pub fn criterion_7(seed: u64) -> CriterionResult {
    timed(7, "interpolated shift preserves concentration", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(1_000_003);
        let (n, d, k) = (3usize, 2u32, 3usize);
        let ell = concentration_target(k);
        let (mut built, mut failures, mut attempts) = (0, 0, 0);
        while built < 50 && attempts < 500 {
            attempts += 1;
            let poly = full_support_poly(f, n, d, k, &mut rng);
            // Decoys shift at most one variable, leaving every monomial with
            // support >= n - 1 >= ell; the isolating member is Kronecker.
            let mut members = Vec::new();
            let decoys = rng.gen_range(1..=3);
            for _ in 0..decoys {
                let mut entries = vec![UniPoly::zero(f); n];
                let v = rng.gen_range(0..n);
                entries[v] = UniPoly::monomial(f, f.random_nonzero(&mut rng), rng.gen_range(0..4));
                members.push(PolyTuple::new(f, entries)?);
            }
            let pos = rng.gen_range(0..=members.len());
            members.insert(pos, weight_shift(f, &WeightAssignment::kronecker(n, d as usize)?));
            let mut nodes: Vec<FieldElem> = Vec::new();
            while nodes.len() < members.len() {
                let a = f.random(&mut rng);
                if !nodes.contains(&a) {
                    nodes.push(a);
                }
            }
            let family = ShiftFamily::new(f, members.clone(), nodes)?;
            let lifted = lift(&poly);
            let mut concentrating = 0;
            for m in &members {
                if is_l_concentrated(&lifted.shift(m.entries())?, ell) {
                    concentrating += 1;
                }
            }
            if concentrating != 1 {
                continue;
            }
            built += 1;
            let l = lagrange_tuple(&family)?;
            let d2 = required_d2(n, d as usize, k, l.t_degree())?;
            let single = collapse_y(&l, d2, n, d as usize, k)?;
            if !is_l_concentrated(&lifted.shift(single.entries())?, ell) {
                failures += 1;
            }
        }
        Ok((
            built == 50 && failures == 0,
            format!("{built} families built in {attempts} attempts, {failures} failures"),
        ))
    })
}

/// A random commutative instance, zero in roughly one case out of twelve.
fn commutative_instance<R: Rng>(f: PrimeField, rng: &mut R) -> Result<(MatrixRoabp, usize, usize, usize)> {
    let n = rng.gen_range(1..=4);
    let d = rng.gen_range(0..=2);
    let w = rng.gen_range(1..=2);
    let a = random_commutative(f, n, d, w, rng)?;
    if rng.gen_range(0..12) != 0 {
        return Ok((a, n, d, w));
    }
    let mut layers = a.layers().to_vec();
    let t = match rng.gen_range(0..2) {
        0 => {
            let i = rng.gen_range(0..n);
            layers[i] = Layer::constant(Matrix::zeros(&f, w, w));
            a.t().to_vec()
        }
        _ => vec![f.zero(); w],
    };
    Ok((
        MatrixRoabp::new(f, d, a.order().to_vec(), a.u().to_vec(), layers, t)?,
        n,
        d,
        w,
    ))
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Commutative PIT verdicts agree with expansion, and the hitting-set size
/// matches `C(n, l-1) (d+1)^(l-1) (t_degree + 1)`.
pub fn criterion_8(seed: u64) -> CriterionResult {
    timed(8, "commutative PIT end-to-end, n<=4, d<=2, w<=2", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(10007);
        let (mut disagreements, mut size_mismatches, mut zeros) = (0, 0, 0);
        for _ in 0..500 {
            let (a, n, d, w) = commutative_instance(f, &mut rng)?;
            let truth = !a.fold()?.expand(DEFAULT_TERM_CAP)?.is_zero();
            let family = ShiftFamily::standard(f, n, d)?;
            let (plan, hs) = concentrated_points(&family, n, d, w, None)?;
            let s = (plan.ell - 1).min(n);
            let closed = binom(n, s) * (d as u128 + 1).pow(s as u32) * (plan.t_degree as u128 + 1);
            if hs.len() != closed.into() {
                size_mismatches += 1;
            }
            let out = commutative_blackbox_pit(|x| a.eval(x).expect("length"), &family, n, d, w, None)?;
            if !truth {
                zeros += 1;
                if out.evaluations as u128 != closed {
                    size_mismatches += 1;
                }
            }
            if (out.verdict == Verdict::Nonzero) != truth {
                disagreements += 1;
            }
        }
        Ok((
            disagreements == 0 && size_mismatches == 0,
            format!("500 instances ({zeros} zero): {disagreements} disagreements, {size_mismatches} size mismatches"),
        ))
    })
}

/// Probes `x_i -> (t + i - 1)^r` for `r <= n d w` on random nonzero
/// instances; instances zero for all `r` are reported, not failed.
pub fn criterion_9(seed: u64) -> CriterionResult {
    timed(9, "conjecture probe, 10^4 instances, r_max = ndw", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = prime(1_000_003);
        let mut candidates = Vec::new();
        for i in 0..10_000 {
            let n = rng.gen_range(1..=4);
            let d = rng.gen_range(1..=2);
            let w = rng.gen_range(1..=2);
            let a = random_roabp_with(f, n, d, w, true, &mut rng);
            let report = conjecture_probe(&a, n * d * w)?;
            if report.candidate_counterexample {
                candidates.push(i);
            }
        }
        Ok((
            true,
            format!(
                "{} instances zero for every r (potential counterexamples{})",
                candidates.len(),
                if candidates.is_empty() {
                    String::new()
                } else {
                    format!(": indices {candidates:?}")
                }
            ),
        ))
    })
}

/// Runs all criteria in order. `seed` feeds the randomized ones.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(seed),
        criterion_4(seed.wrapping_add(1)),
        criterion_5(seed.wrapping_add(2)),
        criterion_6(seed.wrapping_add(3)),
        criterion_7(seed.wrapping_add(4)),
        criterion_8(seed.wrapping_add(5)),
        criterion_9(seed.wrapping_add(6)),
    ]
}

/// Also exported for the family certificate used by the CLI.
pub fn certify_standard_family(d: &MatPoly<PrimeField>, n: usize, deg: usize, k: usize) -> Result<Option<usize>> {
    let family = ShiftFamily::standard(*d.ring(), n, deg)?;
    certify_family(d, &family, concentration_target(k))
}
