//! Low-support concentration of polynomials with vector or matrix
//! coefficients, basis-isolating weights, and the shift-based hitting sets
//! they yield for commutative ROABPs.

mod shift;

pub use shift::{
    certify_family, collapse_y, commutative_blackbox_pit, commutative_shift, concentrated_hitting_set,
    concentrated_points, lagrange_tuple, required_d2, shift_matrix_roabp, shift_roabp, weight_shift,
    ConcentratedHittingSet, LagrangeTuple, ShiftFamily, ShiftPlan,
};

use std::collections::BTreeMap;

use crate::algebra::{support_size, Exponent, FieldElem, MatPoly, Matrix, PrimeField, RankRing, SpanBasis};
use crate::error::{precondition, Result};

/// `w(x^a) = sum_i a_i w(x_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightAssignment {
    weights: Vec<u64>,
}

impl WeightAssignment {
    pub fn new(weights: Vec<u64>) -> Self {
        WeightAssignment { weights }
    }

    /// `w(x_i) = (d + 1)^i`: every monomial of individual degree `<= d` gets
    /// its own weight.
    pub fn kronecker(n: usize, d: usize) -> Result<Self> {
        let base = d as u64 + 1;
        let mut weights = Vec::with_capacity(n);
        let mut cur: u64 = 1;
        for i in 0..n {
            weights.push(cur);
            if i + 1 < n {
                cur = cur
                    .checked_mul(base)
                    .ok_or_else(|| precondition(format!("Kronecker weights for n = {n}, d = {d} overflow")))?;
            }
        }
        Ok(WeightAssignment { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn of(&self, a: &[u32]) -> u128 {
        a.iter().zip(&self.weights).map(|(&e, &w)| e as u128 * w as u128).sum()
    }
}

/// The coefficients of a polynomial, one vector per monomial.
#[derive(Debug, Clone)]
pub struct CoeffSpace<R: RankRing> {
    ring: R,
    monomials: Vec<Exponent>,
    vectors: Matrix<R::Elem>,
}

impl<R: RankRing> CoeffSpace<R> {
    pub fn of(d: &MatPoly<R>) -> Self {
        CoeffSpace {
            ring: d.ring().clone(),
            monomials: d.terms().map(|(a, _)| a.clone()).collect(),
            vectors: d.coefficient_stack(|_| true),
        }
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn vectors(&self) -> &Matrix<R::Elem> {
        &self.vectors
    }

    /// Dimension `k` of each coefficient vector.
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn rank(&self) -> usize {
        self.ring.rank(&self.vectors)
    }
}

/// True iff the coefficients of monomials with support `< ell` span all
/// coefficients (rank taken over the fraction field of the coefficient ring).
pub fn is_l_concentrated<R: RankRing>(d: &MatPoly<R>, ell: usize) -> bool {
    let low = d.low_support_rank(ell);
    // min(#terms, k) bounds the full rank, so reaching it settles the question.
    low == d.len().min(d.coeff_dim()) || low == d.coefficient_rank()
}

/// The greedy sweep: monomials by ascending weight; within a class at most
/// one coefficient may leave the span of the chosen basis elements of
/// strictly smaller weight, and it joins the basis. Returns the basis `S`
/// when `w` is basis-isolating.
pub fn check_basis_isolating(d: &MatPoly<PrimeField>, w: &WeightAssignment) -> Option<Vec<Exponent>> {
    let mut classes: BTreeMap<u128, Vec<(&Exponent, &Matrix<FieldElem>)>> = BTreeMap::new();
    for (a, m) in d.terms() {
        classes.entry(w.of(a)).or_default().push((a, m));
    }
    let mut span = SpanBasis::new(*d.ring(), d.coeff_dim());
    let mut basis = Vec::new();
    for members in classes.values() {
        let mut outside = members.iter().filter(|(_, m)| !span.contains(m.entries()));
        let Some(&(a, m)) = outside.next() else {
            continue;
        };
        if outside.next().is_some() {
            return None;
        }
        span.insert(m.entries());
        basis.push(a.clone());
    }
    Some(basis)
}

/// First weight vector in `[0, max_weight]^n`, lexicographically, that is
/// basis-isolating for `d`.
pub fn search_isolating(d: &MatPoly<PrimeField>, max_weight: u64) -> Option<WeightAssignment> {
    let n = d.nvars();
    let mut cur = vec![0u64; n];
    loop {
        let w = WeightAssignment::new(cur.clone());
        if check_basis_isolating(d, &w).is_some() {
            return Some(w);
        }
        // Odometer increment, last coordinate fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if cur[i] < max_weight {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Default search bound `n (d + 1)`.
pub fn default_max_weight(n: usize, d: usize) -> u64 {
    (n * (d + 1)) as u64
}

/// `ceil(log2(k + 1))`.
pub fn concentration_target(k: usize) -> usize {
    crate::known_order::ceil_log2(k + 1) as usize
}

/// Number of `(< ell)`-support monomials among the terms of `d`.
pub fn low_support_count<R: RankRing>(d: &MatPoly<R>, ell: usize) -> usize {
    d.terms().filter(|(a, _)| support_size(a) < ell).count()
}
