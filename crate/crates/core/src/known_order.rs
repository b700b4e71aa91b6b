//! Hitting sets for ROABPs whose variable order is known.
//!
//! Two variables are merged into one fresh variable by
//! `(x_1, x_2) -> (t^w, t^w + t^(w-1))`. Applying this pairwise merge
//! `log n` times sends every variable to a univariate polynomial of degree
//! `w^log n`, so a nonzero ROABP becomes a nonzero univariate polynomial of
//! degree at most `n d w^log n` and can be tested by interpolation.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::algebra::{FieldElem, Matrix, PolyRing, PrimeField, SparseMultiPoly, UniPoly};
use crate::error::{precondition, shape, Error, Result};
use crate::roabp::{Roabp, DEFAULT_TERM_CAP};

/// Largest hitting set this module will materialize.
pub const MAX_POINTS: usize = 10_000_000;

/// `n` univariate polynomials in one variable `t` over a common field.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTuple {
    field: PrimeField,
    entries: Vec<UniPoly>,
}

impl PolyTuple {
    pub fn new(field: PrimeField, entries: Vec<UniPoly>) -> Result<Self> {
        for e in &entries {
            field.check_same(&e.field())?;
        }
        Ok(PolyTuple { field, entries })
    }

    pub fn zero(field: PrimeField, n: usize) -> Self {
        PolyTuple {
            field,
            entries: vec![UniPoly::zero(field); n],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn entries(&self) -> &[UniPoly] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact degree of each entry; the zero polynomial reports `None`.
    pub fn degrees(&self) -> Vec<Option<usize>> {
        self.entries.iter().map(UniPoly::degree).collect()
    }

    /// `max_i deg(entry_i)`, zero entries counting as degree 0.
    pub fn max_degree(&self) -> usize {
        self.entries.iter().filter_map(UniPoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, tau: FieldElem) -> Vec<FieldElem> {
        self.entries.iter().map(|p| p.eval(tau)).collect()
    }
}

/// `(t^w, t^w + t^(w-1))`.
pub fn bivariate_map(field: PrimeField, w: usize) -> Result<PolyTuple> {
    if w == 0 {
        return Err(precondition("the bivariate map needs w >= 1"));
    }
    let first = UniPoly::monomial(field, field.one(), w);
    let second = first.add(&UniPoly::monomial(field, field.one(), w - 1));
    PolyTuple::new(field, vec![first, second])
}

/// `ceil(log2 n)`, with `ceil(log2 1) = 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// `x_{2i-1}, x_{2i} -> t_i` via the bivariate map with the ROABP's width.
///
/// Layer pairs are multiplied out: `D'_i = D_{2i-1}(t^w) D_{2i}(t^w + t^(w-1))`,
/// so the width stays `w` and the individual degree becomes `2dw`.
pub fn halving_transform(a: &Roabp) -> Result<Roabp> {
    halving_transform_with(a, a.width())
}

/// [`halving_transform`] with an explicit map parameter `w >= width`.
pub fn halving_transform_with(a: &Roabp, w: usize) -> Result<Roabp> {
    let n = a.nvars();
    if !n.is_multiple_of(2) {
        return Err(shape(format!("halving needs an even number of variables, got {n}")));
    }
    if !a.is_identity_order() {
        return Err(precondition("halving expects layers in the order x1, ..., xn"));
    }
    let f = a.field();
    let ring = PolyRing::new(f);
    let map = bivariate_map(f, w)?;
    let (p0, p1) = (&map.entries()[0], &map.entries()[1]);
    let mut layers = Vec::with_capacity(n / 2);
    for i in 0..n / 2 {
        let left = compose_entries(&a.layer_polys(2 * i), p0)?;
        let right = compose_entries(&a.layer_polys(2 * i + 1), p1)?;
        layers.push(left.mul(&right, &ring)?);
    }
    Roabp::from_poly_layers(f, a.width(), 2 * a.degree() * w, (0..n / 2).collect(), &layers)
}

fn compose_entries(m: &Matrix<UniPoly>, inner: &UniPoly) -> Result<Matrix<UniPoly>> {
    let entries = m
        .entries()
        .iter()
        .map(|e| e.compose(inner))
        .collect::<Result<Vec<_>>>()?;
    Matrix::new(m.rows(), m.cols(), entries)
}

/// Entry `i` is `p_{i_1}(p_{i_2}(... p_{i_L}(t)))` where `i_1` is the least
/// significant of the `L = log2 n` bits of `i`, `p_0 = t^w`, `p_1 = t^w + t^(w-1)`.
pub fn recursive_map(field: PrimeField, n: usize, w: usize) -> Result<PolyTuple> {
    if n == 0 || !n.is_power_of_two() {
        return Err(precondition(format!(
            "the recursive map needs a power of two, got n = {n}"
        )));
    }
    let map = bivariate_map(field, w)?;
    let levels = ceil_log2(n);
    let entries = (0..n)
        .map(|i| {
            let mut inner = UniPoly::var(field);
            for bit in (0..levels).rev() {
                inner = map.entries()[(i >> bit) & 1].compose(&inner)?;
            }
            Ok(inner)
        })
        .collect::<Result<Vec<_>>>()?;
    PolyTuple::new(field, entries)
}

/// `n d w^ceil(log2 n)`, exact.
pub fn degree_bound(n: usize, d: usize, w: usize) -> BigUint {
    BigUint::from(n) * BigUint::from(d) * BigUint::from(w).pow(ceil_log2(n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingSetMeta {
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub degree_bound: BigUint,
    /// True when fewer than `degree_bound + 1` nodes were available.
    pub truncated: bool,
}

/// Points `point_k[pi(i)] = phi_i(tau_k)` for nodes `tau_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingSet {
    pub points: Vec<Vec<FieldElem>>,
    pub nodes: Vec<FieldElem>,
    pub meta: HittingSetMeta,
}

impl HittingSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn build_points(
    field: PrimeField,
    order: &[usize],
    d: usize,
    w: usize,
    nodes: u64,
    truncated: bool,
) -> Result<HittingSet> {
    let n = order.len();
    let padded = n.max(1).next_power_of_two();
    let phi = recursive_map(field, padded, w)?;
    let nodes: Vec<FieldElem> = (0..nodes).map(|k| field.elem(k)).collect();
    let points = nodes
        .iter()
        .map(|&tau| {
            let mut pt = vec![field.zero(); n];
            for (pos, &var) in order.iter().enumerate() {
                pt[var] = phi.entries()[pos].eval(tau);
            }
            pt
        })
        .collect();
    Ok(HittingSet {
        points,
        nodes,
        meta: HittingSetMeta {
            n,
            d,
            w,
            degree_bound: degree_bound(n, d, w),
            truncated,
        },
    })
}

fn node_count(bound: &BigUint) -> Result<u64> {
    let count = bound + 1u32;
    match count.to_usize() {
        Some(c) if c <= MAX_POINTS => Ok(c as u64),
        _ => Err(Error::Capacity {
            needed: count.to_string(),
            cap: MAX_POINTS,
        }),
    }
}

/// The hitting set for width-`w`, degree-`d` ROABPs in layer order `order`
/// (layer `i` reads `x_{order[i]}`). Needs `p > degree_bound(n, d, w)`.
pub fn hitting_set_for_order(field: PrimeField, order: &[usize], d: usize, w: usize) -> Result<HittingSet> {
    let bound = degree_bound(order.len(), d, w);
    if BigUint::from(field.modulus()) <= bound {
        return Err(Error::Characteristic {
            required: bound.to_string(),
            p: field.modulus(),
        });
    }
    let nodes = node_count(&bound)?;
    build_points(field, order, d, w, nodes, false)
}

/// [`hitting_set_for_order`] for the order `x_1, ..., x_n`.
pub fn hitting_set_known_order(field: PrimeField, n: usize, d: usize, w: usize) -> Result<HittingSet> {
    hitting_set_for_order(field, &(0..n).collect::<Vec<_>>(), d, w)
}

/// Like [`hitting_set_for_order`] but never fails on a small field: it uses
/// the nodes `0..min(bound, p - 1)` and flags the result as truncated when
/// that is fewer than `bound + 1`.
pub fn hitting_set_truncated(field: PrimeField, order: &[usize], d: usize, w: usize) -> Result<HittingSet> {
    let bound = degree_bound(order.len(), d, w);
    let p = field.modulus();
    let truncated = BigUint::from(p) <= bound;
    let nodes = if truncated {
        p.min(MAX_POINTS as u64)
    } else {
        node_count(&bound)?
    };
    build_points(field, order, d, w, nodes, truncated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Zero,
    Nonzero,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Zero => "zero",
            Verdict::Nonzero => "nonzero",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PitOutcome {
    pub verdict: Verdict,
    /// The first point with a nonzero value, when there is one.
    pub witness: Option<Vec<FieldElem>>,
    pub evaluations: usize,
}

/// Evaluates `oracle` on `points` and stops at the first nonzero value.
pub fn run_points<I, F>(points: I, mut oracle: F) -> PitOutcome
where
    I: IntoIterator,
    I::Item: AsRef<[FieldElem]>,
    F: FnMut(&[FieldElem]) -> FieldElem,
{
    let mut evaluations = 0;
    for pt in points {
        evaluations += 1;
        if !oracle(pt.as_ref()).is_zero() {
            return PitOutcome {
                verdict: Verdict::Nonzero,
                witness: Some(pt.as_ref().to_vec()),
                evaluations,
            };
        }
    }
    PitOutcome {
        verdict: Verdict::Zero,
        witness: None,
        evaluations,
    }
}

/// Blackbox PIT for an oracle computing a width-`w`, degree-`d` ROABP in the
/// order `x_1, ..., x_n`.
pub fn blackbox_pit_known_order<F>(field: PrimeField, oracle: F, n: usize, d: usize, w: usize) -> Result<PitOutcome>
where
    F: FnMut(&[FieldElem]) -> FieldElem,
{
    let hs = hitting_set_known_order(field, n, d, w)?;
    Ok(run_points(&hs.points, oracle))
}

/// Zero test of an explicit ROABP through its own order's hitting set.
pub fn pit_roabp(a: &Roabp) -> Result<PitOutcome> {
    let hs = hitting_set_for_order(a.field(), a.order(), a.degree(), a.width())?;
    Ok(run_points(&hs.points, |pt| a.eval(pt).expect("point length matches")))
}

/// `f(phi(t))` computed by repeated halving: pad to a power of two, then
/// merge variable pairs until one remains.
pub fn univariate_by_halving(a: &Roabp) -> Result<UniPoly> {
    let (mut cur, _) = a.with_identity_order();
    let w = cur.width();
    cur = cur.pad_variables(cur.nvars().next_power_of_two())?;
    while cur.nvars() > 1 {
        cur = halving_transform_with(&cur, w)?;
    }
    Ok(cur.layer_polys(0).get(0, 0).clone())
}

/// `f(phi(t))` by substituting the closed-form map into the expansion.
pub fn univariate_by_substitution(a: &Roabp, term_cap: usize) -> Result<UniPoly> {
    let f = a.field();
    let n = a.nvars();
    let phi = recursive_map(f, n.next_power_of_two(), a.width())?;
    let mut images = vec![SparseMultiPoly::zero(f, 1); n];
    for (pos, &var) in a.order().iter().enumerate() {
        images[var] = SparseMultiPoly::from_unipoly(&phi.entries()[pos], 1, 0);
    }
    a.expand(term_cap)?.substitute(&images)?.to_unipoly()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRound {
    pub r: usize,
    pub nonzero: bool,
    /// A node where the substituted polynomial is nonzero.
    pub witness: Option<FieldElem>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub rounds: Vec<ProbeRound>,
    /// Whether the instance itself is nonzero.
    pub instance_nonzero: bool,
    /// Nonzero instance that vanished for every `r <= r_max`.
    pub candidate_counterexample: bool,
}

/// Substitutes `x_i -> (t + i - 1)^r` for `r = 1..=r_max`, deciding each
/// univariate by evaluation at `n d r + 1` nodes.
pub fn conjecture_probe(a: &Roabp, r_max: usize) -> Result<ProbeReport> {
    let f = a.field();
    let n = a.nvars();
    let d = a.degree();
    let need = BigUint::from(n) * BigUint::from(d) * BigUint::from(r_max);
    if BigUint::from(f.modulus()) <= need {
        return Err(Error::Characteristic {
            required: need.to_string(),
            p: f.modulus(),
        });
    }
    let instance_nonzero = match pit_roabp(a) {
        Ok(out) => out.verdict == Verdict::Nonzero,
        Err(Error::Characteristic { .. } | Error::Capacity { .. }) => !a.expand(DEFAULT_TERM_CAP)?.is_zero(),
        Err(e) => return Err(e),
    };
    let mut rounds = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        let nodes = (n * d * r + 1) as u64;
        let mut witness = None;
        for tau in 0..nodes {
            let tau = f.elem(tau);
            let pt: Vec<FieldElem> = (0..n).map(|i| f.pow(f.add(tau, f.elem(i as u64)), r as u64)).collect();
            if !a.eval(&pt)?.is_zero() {
                witness = Some(tau);
                break;
            }
        }
        rounds.push(ProbeRound {
            r,
            nonzero: witness.is_some(),
            witness,
        });
    }
    let candidate_counterexample = instance_nonzero && rounds.iter().all(|x| !x.nonzero);
    Ok(ProbeReport {
        rounds,
        instance_nonzero,
        candidate_counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roabp::{random_roabp, Layer};

    fn p(f: PrimeField, c: &[u64]) -> UniPoly {
        UniPoly::from_u64s(f, c)
    }

    #[test]
    fn bivariate_map_examples() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(
            bivariate_map(f, 2).unwrap().entries(),
            &[p(f, &[0, 0, 1]), p(f, &[0, 1, 1])]
        );
        assert_eq!(bivariate_map(f, 1).unwrap().entries(), &[p(f, &[0, 1]), p(f, &[1, 1])]);
        assert_eq!(
            bivariate_map(f, 3).unwrap().entries(),
            &[p(f, &[0, 0, 0, 1]), p(f, &[0, 0, 1, 1])]
        );
        assert!(matches!(bivariate_map(f, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn recursive_map_n4_w2() {
        let f = PrimeField::new(101).unwrap();
        let phi = recursive_map(f, 4, 2).unwrap();
        assert_eq!(
            phi.entries(),
            &[
                p(f, &[0, 0, 0, 0, 1]),
                p(f, &[0, 0, 1, 0, 1]),
                p(f, &[0, 0, 1, 2, 1]),
                p(f, &[0, 1, 2, 2, 1]),
            ]
        );
        assert!(phi.degrees().iter().all(|&d| d == Some(4)));
        assert_eq!(recursive_map(f, 2, 5).unwrap(), bivariate_map(f, 5).unwrap());
        assert!(recursive_map(f, 3, 2).is_err());
    }

    #[test]
    fn degree_bounds() {
        assert_eq!(degree_bound(2, 1, 2), BigUint::from(4u32));
        assert_eq!(degree_bound(4, 2, 2), BigUint::from(32u32));
        assert_eq!(degree_bound(1, 7, 9), BigUint::from(7u32));
        assert_eq!(degree_bound(3, 1, 2), BigUint::from(12u32));
        let huge = degree_bound(1 << 20, 1000, 1000);
        assert!(huge > BigUint::from(u64::MAX));
    }

    #[test]
    fn hitting_set_sizes_and_characteristic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(hitting_set_known_order(f, 2, 1, 2).unwrap().len(), 5);
        assert_eq!(hitting_set_known_order(f, 4, 2, 2).unwrap().len(), 33);
        let small = PrimeField::new(31).unwrap();
        assert!(matches!(
            hitting_set_known_order(small, 4, 2, 2),
            Err(Error::Characteristic { .. })
        ));
        let t = hitting_set_truncated(small, &[0, 1, 2, 3], 2, 2).unwrap();
        assert!(t.meta.truncated);
        assert_eq!(t.len(), 31);
    }

    #[test]
    fn sum_of_two_variables_is_hit_at_one() {
        let f = PrimeField::new(7).unwrap();
        let hs = hitting_set_known_order(f, 2, 1, 2).unwrap();
        // tau = 1: (1, 2), value 3.
        assert_eq!(hs.points[1], vec![f.one(), f.elem(2)]);
        let out = blackbox_pit_known_order(f, |x| f.add(x[0], x[1]), 2, 1, 2).unwrap();
        assert_eq!(out.verdict, Verdict::Nonzero);
        assert_eq!(out.witness, Some(vec![f.one(), f.elem(2)]));
    }

    #[test]
    fn zero_and_product_oracles() {
        let f = PrimeField::new(101).unwrap();
        let zero = blackbox_pit_known_order(f, |_| f.zero(), 4, 2, 2).unwrap();
        assert_eq!((zero.verdict, zero.evaluations), (Verdict::Zero, 33));
        let prod = blackbox_pit_known_order(f, |x| x.iter().fold(f.one(), |a, &b| f.mul(a, b)), 4, 1, 1).unwrap();
        assert_eq!(prod.verdict, Verdict::Nonzero);
    }

    #[test]
    fn halving_n2_matches_the_bivariate_substitution() {
        let f = PrimeField::new(101).unwrap();
        for seed in 0..10 {
            let a = random_roabp(f, 2, 2, 2, seed, false);
            let h = halving_transform(&a).unwrap();
            assert_eq!(h.nvars(), 1);
            assert_eq!(h.degree(), 8);
            let direct = univariate_by_substitution(&a, DEFAULT_TERM_CAP).unwrap();
            assert_eq!(h.layer_polys(0).get(0, 0), &direct);
        }
        assert!(halving_transform(&random_roabp(f, 3, 1, 2, 0, false)).is_err());
        let z = Roabp::zero(f, 4, 2, 1).unwrap();
        assert!(halving_transform(&z)
            .unwrap()
            .expand(DEFAULT_TERM_CAP)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn halving_rounds_match_closed_form() {
        let f = PrimeField::new(10007).unwrap();
        for (n, seed) in [(1, 1), (3, 2), (4, 3), (5, 4), (8, 5)] {
            let a = random_roabp(f, n, 1, 2, seed, true);
            assert_eq!(
                univariate_by_halving(&a).unwrap(),
                univariate_by_substitution(&a, DEFAULT_TERM_CAP).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn the_characteristic_two_failure() {
        let f = PrimeField::new(2).unwrap();
        // f = x2^2 + x1^2 + x1 as (x1^2 + x1, 1) . (1, x2^2)^T
        let a = Roabp::from_poly_layers(
            f,
            2,
            2,
            vec![0, 1],
            &[
                Matrix::from_rows(vec![vec![p(f, &[0, 1, 1]), p(f, &[1])]]).unwrap(),
                Matrix::from_rows(vec![vec![p(f, &[1])], vec![p(f, &[0, 0, 1])]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(!a.expand(DEFAULT_TERM_CAP).unwrap().is_zero());
        assert!(univariate_by_halving(&a).unwrap().is_zero());
        let hs = hitting_set_truncated(f, a.order(), 2, 2).unwrap();
        assert_eq!(hs.len(), 2);
        let out = run_points(&hs.points, |x| a.eval(x).unwrap());
        assert_eq!(out.verdict, Verdict::Zero);
        assert!(pit_roabp(&a).is_err());
    }

    #[test]
    fn probe_examples() {
        let f = PrimeField::new(101).unwrap();
        let x1 = Roabp::new(
            f,
            1,
            1,
            vec![0],
            vec![Layer::new(vec![Matrix::filled(1, 1, f.zero()), Matrix::filled(1, 1, f.one())]).unwrap()],
        )
        .unwrap();
        let rep = conjecture_probe(&x1, 1).unwrap();
        assert!(rep.rounds[0].nonzero && !rep.candidate_counterexample);

        // x1 - x2 as (x1, 1) . (1, -x2)^T
        let diff = Roabp::from_poly_layers(
            f,
            2,
            1,
            vec![0, 1],
            &[
                Matrix::from_rows(vec![vec![p(f, &[0, 1]), p(f, &[1])]]).unwrap(),
                Matrix::from_rows(vec![vec![p(f, &[1])], vec![UniPoly::from_i64s(f, &[0, -1])]]).unwrap(),
            ],
        )
        .unwrap();
        let rep = conjecture_probe(&diff, 1).unwrap();
        assert!(rep.rounds[0].nonzero);
        assert_eq!(rep.rounds[0].witness, Some(f.zero()));
    }
}
