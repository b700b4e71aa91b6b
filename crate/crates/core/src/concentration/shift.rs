//! Shifts `x -> x + f(t)`, families of shifts merged by interpolation in a
//! new variable `y`, and the hitting sets of low-support concentrated
//! polynomials.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::{concentration_target, is_l_concentrated, WeightAssignment};
use crate::algebra::{BiPolyRing, FieldElem, MatPoly, PolyRing, PrimeField, SparseMultiPoly, UniPoly};
use crate::error::{precondition, shape, Error, Result};
use crate::known_order::{run_points, PitOutcome, PolyTuple, MAX_POINTS};
use crate::roabp::{LayeredProgram, MatrixRoabp, Roabp};

/// `(t^{w(x_1)}, ..., t^{w(x_n)})`.
pub fn weight_shift(field: PrimeField, w: &WeightAssignment) -> PolyTuple {
    let entries = w
        .weights()
        .iter()
        .map(|&e| UniPoly::monomial(field, field.one(), e as usize))
        .collect();
    PolyTuple::new(field, entries).expect("one field")
}

fn lift_and_shift(program: &LayeredProgram<PrimeField>, s: &PolyTuple) -> Result<LayeredProgram<PolyRing>> {
    let f = *program.ring();
    f.check_same(&s.field())?;
    if s.len() != program.nvars() {
        return Err(shape(format!(
            "shift of length {} for {} variables",
            s.len(),
            program.nvars()
        )));
    }
    program
        .map_ring(PolyRing::new(f), |&c| UniPoly::constant(f, c))
        .shift(s.entries())
}

/// Each layer `D_i(x)` becomes `D_i(x + s_{pi(i)}(t))`, with coefficients in `F[t]`.
pub fn shift_roabp(a: &Roabp, s: &PolyTuple) -> Result<LayeredProgram<PolyRing>> {
    lift_and_shift(a.program(), s)
}

/// [`shift_roabp`] for the square-layer form (end vectors left out).
pub fn shift_matrix_roabp(a: &MatrixRoabp, s: &PolyTuple) -> Result<LayeredProgram<PolyRing>> {
    lift_and_shift(a.program(), s)
}

/// Shifts `f_1, ..., f_N` with distinct interpolation nodes `alpha_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftFamily {
    field: PrimeField,
    tuples: Vec<PolyTuple>,
    nodes: Vec<FieldElem>,
    weights: Option<Vec<WeightAssignment>>,
}

impl ShiftFamily {
    pub fn new(field: PrimeField, tuples: Vec<PolyTuple>, nodes: Vec<FieldElem>) -> Result<Self> {
        let Some(first) = tuples.first() else {
            return Err(precondition("a shift family needs at least one member"));
        };
        if nodes.len() != tuples.len() {
            return Err(shape(format!("{} nodes for {} shifts", nodes.len(), tuples.len())));
        }
        let n = first.len();
        for t in &tuples {
            field.check_same(&t.field())?;
            if t.len() != n {
                return Err(shape("shifts of different lengths"));
            }
        }
        let mut seen = HashSet::new();
        if !nodes.iter().all(|a| seen.insert(*a)) {
            return Err(precondition("interpolation nodes must be distinct"));
        }
        Ok(ShiftFamily {
            field,
            tuples,
            nodes,
            weights: None,
        })
    }

    /// Members `t^w` for each weight assignment, nodes `0, 1, ..., N - 1`.
    pub fn from_weights(field: PrimeField, weights: Vec<WeightAssignment>) -> Result<Self> {
        if weights.len() as u64 > field.modulus() {
            return Err(Error::Characteristic {
                required: format!("{} (one node per family member)", weights.len() - 1),
                p: field.modulus(),
            });
        }
        let tuples = weights.iter().map(|w| weight_shift(field, w)).collect();
        let nodes = (0..weights.len() as u64).map(|i| field.elem(i)).collect();
        let mut fam = Self::new(field, tuples, nodes)?;
        fam.weights = Some(weights);
        Ok(fam)
    }

    /// The all-ones shift and the Kronecker shift `t^{(d+1)^i}`. The latter
    /// gives every monomial of individual degree `<= d` a distinct weight, so
    /// it isolates a basis of any coefficient space.
    pub fn standard(field: PrimeField, n: usize, d: usize) -> Result<Self> {
        Self::from_weights(
            field,
            vec![WeightAssignment::new(vec![0; n]), WeightAssignment::kronecker(n, d)?],
        )
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Number of variables each member shifts.
    pub fn nvars(&self) -> usize {
        self.tuples[0].len()
    }

    pub fn tuples(&self) -> &[PolyTuple] {
        &self.tuples
    }

    pub fn nodes(&self) -> &[FieldElem] {
        &self.nodes
    }

    pub fn weights(&self) -> Option<&[WeightAssignment]> {
        self.weights.as_deref()
    }

    /// `max` degree over all members.
    pub fn degree(&self) -> usize {
        self.tuples.iter().map(PolyTuple::max_degree).max().unwrap_or(0)
    }
}

/// `n` polynomials in `(y, t)`, variable 0 being `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeTuple {
    field: PrimeField,
    entries: Vec<SparseMultiPoly>,
}

impl LagrangeTuple {
    pub fn new(field: PrimeField, entries: Vec<SparseMultiPoly>) -> Result<Self> {
        for e in &entries {
            field.check_same(&e.field())?;
            if e.nvars() != 2 {
                return Err(shape("entries must be polynomials in (y, t)"));
            }
        }
        Ok(LagrangeTuple { field, entries })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn entries(&self) -> &[SparseMultiPoly] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn y_degree(&self) -> usize {
        self.degree_in(BiPolyRing::Y)
    }

    pub fn t_degree(&self) -> usize {
        self.degree_in(BiPolyRing::T)
    }

    fn degree_in(&self, var: usize) -> usize {
        self.entries.iter().filter_map(|e| e.degree_in(var)).max().unwrap_or(0) as usize
    }

    /// Specializes `y := alpha`.
    pub fn at_y(&self, alpha: FieldElem) -> PolyTuple {
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let mut coeffs = vec![f.zero(); e.degree_in(BiPolyRing::T).unwrap_or(0) as usize + 1];
                for (a, &c) in e.terms() {
                    let b = a[BiPolyRing::T] as usize;
                    coeffs[b] = f.add(coeffs[b], f.mul(c, f.pow(alpha, a[BiPolyRing::Y] as u64)));
                }
                UniPoly::from_coeffs(f, coeffs)
            })
            .collect();
        PolyTuple::new(f, entries).expect("one field")
    }
}

/// `L_j = sum_i f_{i,j}(t) prod_{i' != i} (y - alpha_{i'}) / (alpha_i - alpha_{i'})`.
pub fn lagrange_tuple(family: &ShiftFamily) -> Result<LagrangeTuple> {
    let f = family.field();
    let nodes = family.nodes();
    let mut seen = HashSet::new();
    if !nodes.iter().all(|a| seen.insert(*a)) {
        return Err(precondition("interpolation nodes must be distinct"));
    }
    let basis: Vec<UniPoly> = nodes
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(UniPoly::one(f), |acc, (_, &aj)| {
                    let factor = UniPoly::from_coeffs(f, vec![f.neg(aj), f.one()]);
                    acc.mul(&factor).scale(f.inv(f.sub(ai, aj)).expect("distinct nodes"))
                })
        })
        .collect();
    let entries = (0..family.nvars())
        .map(|j| {
            let mut lj = SparseMultiPoly::zero(f, 2);
            for (member, li) in family.tuples().iter().zip(&basis) {
                let fij = &member.entries()[j];
                for (ya, &cy) in li.coeffs().iter().enumerate() {
                    for (tb, &ct) in fij.coeffs().iter().enumerate() {
                        lj.add_term(vec![ya as u32, tb as u32], f.mul(cy, ct));
                    }
                }
            }
            lj
        })
        .collect();
    LagrangeTuple::new(f, entries)
}

/// `k d n T` where `T` is the largest `t`-degree of the interpolated shift:
/// the `t`-degree of any `k x k` minor of the shifted coefficients is at most
/// this, so `y := t^(d'' + 1)` with `d''` at least this keeps it nonzero.
pub fn required_d2(n: usize, d: usize, k: usize, t_degree: usize) -> Result<u64> {
    [n, d, k, t_degree]
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x as u64))
        .ok_or_else(|| precondition("the collapse degree overflows 64 bits"))
}

/// `y := t^(d2 + 1)`; fails when `d2 < k d n deg_t(L)`.
pub fn collapse_y(l: &LagrangeTuple, d2: u64, n: usize, d: usize, k: usize) -> Result<PolyTuple> {
    let need = required_d2(n, d, k, l.t_degree())?;
    if d2 < need {
        return Err(precondition(format!("d'' = {d2} is below the required bound {need}")));
    }
    let f = l.field();
    let stride = d2 as usize + 1;
    let entries = l
        .entries()
        .iter()
        .map(|e| {
            let top = e
                .terms()
                .map(|(a, _)| a[BiPolyRing::Y] as usize * stride + a[BiPolyRing::T] as usize)
                .max()
                .unwrap_or(0);
            let mut coeffs = vec![f.zero(); top + 1];
            for (a, &c) in e.terms() {
                let i = a[BiPolyRing::Y] as usize * stride + a[BiPolyRing::T] as usize;
                coeffs[i] = f.add(coeffs[i], c);
            }
            UniPoly::from_coeffs(f, coeffs)
        })
        .collect();
    PolyTuple::new(f, entries)
}

/// The single shift for a family, plus the parameters its hitting set needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftPlan {
    pub shift: PolyTuple,
    /// Dimension of the coefficient algebra.
    pub k: usize,
    /// Target concentration `ceil(log2(k + 1))`.
    pub ell: usize,
    pub d2: u64,
    /// Degree in `t` of the ROABP after the shift and any grid substitution.
    pub t_degree: u64,
}

/// Collapses the interpolated family into one shift. `k` defaults to `w^2`.
pub fn commutative_shift(family: &ShiftFamily, n: usize, d: usize, w: usize, k: Option<usize>) -> Result<ShiftPlan> {
    if family.nvars() != n {
        return Err(shape(format!(
            "family shifts {} variables, expected {n}",
            family.nvars()
        )));
    }
    let k = k.unwrap_or(w * w);
    let l = lagrange_tuple(family)?;
    let d2 = required_d2(n, d, k, l.t_degree())?;
    let shift = collapse_y(&l, d2, n, d, k)?;
    let t_degree = (n as u64)
        .checked_mul(d as u64)
        .and_then(|x| x.checked_mul(shift.max_degree() as u64))
        .ok_or_else(|| precondition("the shifted degree overflows 64 bits"))?;
    Ok(ShiftPlan {
        shift,
        k,
        ell: concentration_target(k),
        d2,
        t_degree,
    })
}

/// Points `g + shift(tau)`: `g` ranges over `[0..d]` on each `s`-subset of
/// the variables (`s = min(ell - 1, n)`, zero elsewhere), `tau` over
/// `0..=t_degree`. Generated lazily; the enumeration is a multiset of exactly
/// [`ConcentratedHittingSet::len`] points.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentratedHittingSet {
    field: PrimeField,
    n: usize,
    d: usize,
    ell: usize,
    shift: PolyTuple,
    t_degree: u64,
    base: Vec<Vec<FieldElem>>,
}

impl ConcentratedHittingSet {
    pub fn subset_size(&self) -> usize {
        (self.ell - 1).min(self.n)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn t_degree(&self) -> u64 {
        self.t_degree
    }

    pub fn shift(&self) -> &PolyTuple {
        &self.shift
    }

    /// Grid points before the shift is added.
    pub fn base_points(&self) -> &[Vec<FieldElem>] {
        &self.base
    }

    /// `C(n, s) (d + 1)^s (t_degree + 1)`.
    pub fn len(&self) -> BigUint {
        BigUint::from(self.base.len()) * BigUint::from(self.t_degree + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<FieldElem>> + '_ {
        let f = self.field;
        (0..=self.t_degree).flat_map(move |tau| {
            let s = self.shift.eval(f.elem(tau));
            self.base
                .iter()
                .map(move |g| g.iter().zip(&s).map(|(&a, &b)| f.add(a, b)).collect())
        })
    }

    /// All points, failing beyond [`MAX_POINTS`].
    pub fn to_points(&self) -> Result<Vec<Vec<FieldElem>>> {
        let len = self.len();
        if len > BigUint::from(MAX_POINTS) {
            return Err(Error::Capacity {
                needed: len.to_string(),
                cap: MAX_POINTS,
            });
        }
        Ok(self.iter().collect())
    }
}

fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

pub fn concentrated_hitting_set(
    field: PrimeField,
    n: usize,
    d: usize,
    ell: usize,
    shift: PolyTuple,
    t_degree: u64,
) -> Result<ConcentratedHittingSet> {
    if ell == 0 {
        return Err(precondition("concentration target must be at least 1"));
    }
    if shift.len() != n {
        return Err(shape(format!("shift of length {} for {n} variables", shift.len())));
    }
    let need = t_degree.max(d as u64);
    if field.modulus() <= need {
        return Err(Error::Characteristic {
            required: need.to_string(),
            p: field.modulus(),
        });
    }
    let s = (ell - 1).min(n);
    let mut base = Vec::new();
    for subset in combinations(n, s) {
        let mut digits = vec![0u64; s];
        loop {
            let mut pt = vec![field.zero(); n];
            for (&v, &g) in subset.iter().zip(&digits) {
                pt[v] = field.elem(g);
            }
            base.push(pt);
            let mut i = s;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if digits[i] < d as u64 {
                    digits[i] += 1;
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&g| g == 0) {
                break;
            }
        }
    }
    Ok(ConcentratedHittingSet {
        field,
        n,
        d,
        ell,
        shift,
        t_degree,
        base,
    })
}

/// Enumerates the concentrated hitting set of the family's collapsed shift.
pub fn concentrated_points(
    family: &ShiftFamily,
    n: usize,
    d: usize,
    w: usize,
    k: Option<usize>,
) -> Result<(ShiftPlan, ConcentratedHittingSet)> {
    let plan = commutative_shift(family, n, d, w, k)?;
    let hs = concentrated_hitting_set(family.field(), n, d, plan.ell, plan.shift.clone(), plan.t_degree)?;
    Ok((plan, hs))
}

/// Blackbox PIT for commutative ROABPs of width `<= w` (or coefficient
/// algebra dimension `k`) whose coefficient spaces the family isolates.
pub fn commutative_blackbox_pit<F>(
    oracle: F,
    family: &ShiftFamily,
    n: usize,
    d: usize,
    w: usize,
    k: Option<usize>,
) -> Result<PitOutcome>
where
    F: FnMut(&[FieldElem]) -> FieldElem,
{
    let (_, hs) = concentrated_points(family, n, d, w, k)?;
    Ok(run_points(hs.iter(), oracle))
}

/// Index of the first family member whose shift makes `d`
/// `ell`-concentrated over `F(t)`.
pub fn certify_family(d: &MatPoly<PrimeField>, family: &ShiftFamily, ell: usize) -> Result<Option<usize>> {
    let f = *d.ring();
    let lifted = d.map_ring(PolyRing::new(f), |&c| UniPoly::constant(f, c));
    for (i, member) in family.tuples().iter().enumerate() {
        if is_l_concentrated(&lifted.shift(member.entries())?, ell) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f101() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn up(f: PrimeField, c: &[u64]) -> UniPoly {
        UniPoly::from_u64s(f, c)
    }

    #[test]
    fn lagrange_examples() {
        let f = f101();
        let fam = ShiftFamily::new(
            f,
            vec![PolyTuple::new(f, vec![up(f, &[1, 2]), up(f, &[0, 0, 3])]).unwrap()],
            vec![f.elem(5)],
        )
        .unwrap();
        let l = lagrange_tuple(&fam).unwrap();
        assert_eq!(l.y_degree(), 0);
        assert_eq!(l.at_y(f.elem(77)), fam.tuples()[0]);

        let f1 = PolyTuple::new(f, vec![up(f, &[3])]).unwrap();
        let f2 = PolyTuple::new(f, vec![up(f, &[0, 1])]).unwrap();
        let fam = ShiftFamily::new(f, vec![f1, f2], vec![f.zero(), f.one()]).unwrap();
        let l = lagrange_tuple(&fam).unwrap();
        // 3 (1 - y) + t y
        let expect = SparseMultiPoly::from_terms(
            f,
            2,
            [
                (vec![0, 0], f.elem(3)),
                (vec![1, 0], f.from_i64(-3)),
                (vec![1, 1], f.one()),
            ],
        )
        .unwrap();
        assert_eq!(l.entries()[0], expect);

        assert!(ShiftFamily::new(
            f,
            vec![PolyTuple::zero(f, 1), PolyTuple::zero(f, 1)],
            vec![f.one(), f.one()]
        )
        .is_err());
    }

    #[test]
    fn collapse_examples() {
        let f = f101();
        let y = LagrangeTuple::new(f, vec![SparseMultiPoly::var(f, 2, BiPolyRing::Y)]).unwrap();
        let c = collapse_y(&y, 4, 1, 1, 1).unwrap();
        assert_eq!(c.entries()[0], UniPoly::monomial(f, f.one(), 5));

        let t = LagrangeTuple::new(f, vec![SparseMultiPoly::var(f, 2, BiPolyRing::T)]).unwrap();
        assert_eq!(collapse_y(&t, 0, 1, 1, 0).unwrap().entries()[0], UniPoly::var(f));
        assert!(matches!(collapse_y(&t, 3, 2, 2, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_enumeration() {
        let f = f101();
        let ell1 = concentrated_hitting_set(f, 3, 2, 1, PolyTuple::zero(f, 3), 4).unwrap();
        assert_eq!(ell1.len(), BigUint::from(5u32));
        assert_eq!(ell1.base_points(), &[vec![f.zero(); 3]]);

        let hs = concentrated_hitting_set(f, 2, 1, 2, PolyTuple::zero(f, 2), 0).unwrap();
        let pts = hs.to_points().unwrap();
        assert_eq!(pts.len(), 4);
        let distinct: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(distinct.len(), 3);
        assert!(distinct.contains(&vec![f.one(), f.zero()]));
        assert!(distinct.contains(&vec![f.zero(), f.one()]));

        let big = concentrated_hitting_set(f, 4, 2, 3, PolyTuple::zero(f, 4), 7).unwrap();
        assert_eq!(big.len(), BigUint::from(6u32 * 9 * 8));
        assert_eq!(big.iter().count(), 6 * 9 * 8);

        let small = PrimeField::new(5).unwrap();
        assert!(matches!(
            concentrated_hitting_set(small, 2, 1, 2, PolyTuple::zero(small, 2), 5),
            Err(Error::Characteristic { .. })
        ));
    }
}
