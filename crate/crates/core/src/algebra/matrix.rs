//! Rectangular matrices over a [`Ring`] and exact rank computations.

use super::field::{FieldElem, PrimeField};
use super::multipoly::SparseMultiPoly;
use super::poly::UniPoly;
use super::ring::{BiPolyRing, PolyRing, Ring};
use crate::error::{shape, Result};

/// Row-major dense matrix. Arithmetic takes the ring context explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type FieldMatrix = Matrix<FieldElem>;
pub type UniPolyMatrix = Matrix<UniPoly>;

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(shape("ragged rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<E> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    pub fn add<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Result<Self> {
        if self.dims() != other.dims() {
            return Err(shape(format!(
                "adding {:?} and {:?} matrices",
                self.dims(),
                other.dims()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect(),
        })
    }

    pub fn scale<R: Ring<Elem = E>>(&self, c: &E, ring: &R) -> Self {
        self.map(|a| ring.mul(a, c))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Result<Self> {
        if self.cols != other.rows {
            return Err(shape(format!("multiplying {:?} by {:?}", self.dims(), other.dims())));
        }
        let mut out = Self::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        Ok(out)
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn commutes_with<R: Ring<Elem = E>>(&self, other: &Self, ring: &R) -> Result<bool> {
        Ok(self.mul(other, ring)? == other.mul(self, ring)?)
    }
}

/// Rank of a matrix over `Z_p` by Gaussian elimination.
pub fn rank_ff(field: &PrimeField, m: &FieldMatrix) -> usize {
    row_echelon(field, m).1.len()
}

/// Reduced row echelon form and pivot columns.
pub fn row_echelon(field: &PrimeField, m: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
    let f = *field;
    let mut a = m.clone();
    let (rows, cols) = a.dims();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(*a.get(r, c)).expect("nonzero pivot");
        for j in 0..cols {
            let v = f.mul(*a.get(r, j), inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = *a.get(i, c);
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = f.sub(*a.get(i, j), f.mul(factor, *a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank over `F(t)` of a matrix with entries in `F[t]`.
///
/// A few evaluations at fixed points give a lower bound; when it already meets
/// `min(rows, cols)` the answer is certified. Otherwise the exact
/// fraction-free elimination of [`rank_ff_t_exact`] decides.
pub fn rank_ff_t(field: &PrimeField, m: &UniPolyMatrix) -> usize {
    let full = m.rows().min(m.cols());
    if full == 0 {
        return 0;
    }
    let p = field.modulus();
    let mut x = p / 3 + 1;
    for _ in 0..2 {
        let at = field.elem(x);
        let evaluated = m.map(|e| e.eval(at));
        if rank_ff(field, &evaluated) == full {
            return full;
        }
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) % p;
    }
    rank_ff_t_exact(m)
}

/// Fraction-free (Bareiss) elimination over `F[t]`; every division is exact.
pub fn rank_ff_t_exact(m: &UniPolyMatrix) -> usize {
    let (rows, cols) = m.dims();
    if rows == 0 || cols == 0 {
        return 0;
    }
    let field = m.entries()[0].field();
    let mut a = m.to_rows();
    let mut prev = UniPoly::one(field);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][c].clone();
        let (top, below) = a.split_at_mut(r + 1);
        let prow = &top[r];
        for row in below.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let num = pivot.mul(&row[j]).sub(&lead.mul(&prow[j]));
                row[j] = num.exact_div(&prev).expect("Bareiss step divides exactly");
            }
            row[c] = UniPoly::zero(field);
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Kronecker map `y^a t^b -> t^(a*stride + b)` from `F[y,t]` into `F[t]`.
pub fn kronecker_to_t(p: &SparseMultiPoly, stride: usize) -> UniPoly {
    let f = p.field();
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for (e, &c) in p.terms() {
        let k = e[BiPolyRing::Y] as usize * stride + e[BiPolyRing::T] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, f.zero());
        }
        coeffs[k] = f.add(coeffs[k], c);
    }
    UniPoly::from_coeffs(f, coeffs)
}

/// Rank over `F(y, t)` of a matrix over `F[y, t]`.
///
/// Every minor of order `s` has `t`-degree at most `s * max_t_degree`, so with
/// a stride beyond that bound the Kronecker map is injective on minors and the
/// rank over `F(t)` of the image equals the rank over `F(y, t)`.
pub fn rank_fyt(field: &PrimeField, m: &Matrix<SparseMultiPoly>) -> usize {
    let max_t = m
        .entries()
        .iter()
        .filter_map(|e| e.degree_in(BiPolyRing::T))
        .max()
        .unwrap_or(0) as usize;
    let stride = m.rows().min(m.cols()) * max_t + 1;
    rank_ff_t(field, &m.map(|e| kronecker_to_t(e, stride)))
}

/// Rings whose matrices have an exact rank over the fraction field.
pub trait RankRing: Ring {
    fn rank(&self, m: &Matrix<Self::Elem>) -> usize;
}

impl RankRing for PrimeField {
    fn rank(&self, m: &FieldMatrix) -> usize {
        rank_ff(self, m)
    }
}

impl RankRing for PolyRing {
    fn rank(&self, m: &UniPolyMatrix) -> usize {
        rank_ff_t(&self.field, m)
    }
}

impl RankRing for BiPolyRing {
    fn rank(&self, m: &Matrix<SparseMultiPoly>) -> usize {
        rank_fyt(&self.field, m)
    }
}

/// An incrementally built basis of a subspace of `F^dim`, kept in echelon form.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl SpanBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        SpanBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `v` minus its projection along the current pivots.
    pub fn reduce(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        v
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns `false` (and leaves the basis unchanged) if `v` was
    /// already in the span.
    pub fn insert(&mut self, v: &[FieldElem]) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv(r[pivot]).expect("nonzero pivot");
        let row = r.iter().map(|&x| self.field.mul(x, inv)).collect();
        self.rows.push((pivot, row));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fm(f: &PrimeField, rows: &[&[u64]]) -> FieldMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.elem(v)).collect()).collect()).unwrap()
    }

    /// Determinant by cofactor expansion, independent of elimination.
    fn det(f: &PrimeField, m: &[Vec<FieldElem>]) -> FieldElem {
        let n = m.len();
        if n == 0 {
            return f.one();
        }
        let mut acc = f.zero();
        for j in 0..n {
            let minor: Vec<Vec<FieldElem>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = f.mul(m[0][j], det(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    }

    /// Rank as the largest order of a nonvanishing minor.
    fn rank_by_minors(f: &PrimeField, m: &FieldMatrix) -> usize {
        let (r, c) = m.dims();
        for k in (1..=r.min(c)).rev() {
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let sub: Vec<Vec<FieldElem>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| *m.get(i, j)).collect()).collect();
                    if !det(f, &sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(rank_ff(&f, &Matrix::zeros(&f, 3, 3)), 0);
        assert_eq!(rank_ff(&f, &Matrix::identity(&f, 4)), 4);
        assert_eq!(rank_ff(&f, &fm(&f, &[&[0, 1], &[1, 0]])), 2);
        assert_eq!(rank_ff(&f, &fm(&f, &[&[1, 2, 3], &[2, 4, 6]])), 1);
    }

    #[test]
    fn rank_matches_minor_enumeration_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..1000 {
            let f = PrimeField::new([2u64, 3, 5, 7][trial % 4]).unwrap();
            let n = rng.gen_range(1..=4);
            let m = Matrix::from_fn(n, n, |_, _| f.random(&mut rng));
            assert_eq!(rank_ff(&f, &m), rank_by_minors(&f, &m), "{m:?}");
        }
    }

    #[test]
    fn polynomial_rank_examples() {
        let f = PrimeField::new(101).unwrap();
        let t = |c: &[u64]| UniPoly::from_u64s(f, c);
        let diag = Matrix::from_rows(vec![vec![t(&[0, 1]), t(&[])], vec![t(&[]), t(&[0, 1])]]).unwrap();
        assert_eq!(rank_ff_t(&f, &diag), 2);
        assert_eq!(rank_ff_t_exact(&diag), 2);
        let dep = Matrix::from_rows(vec![vec![t(&[0, 1]), t(&[0, 0, 1])], vec![t(&[1]), t(&[0, 1])]]).unwrap();
        assert_eq!(rank_ff_t(&f, &dep), 1);
        assert_eq!(rank_ff_t_exact(&dep), 1);
        let empty: UniPolyMatrix = Matrix::new(0, 0, vec![]).unwrap();
        assert_eq!(rank_ff_t(&f, &empty), 0);
    }

    #[test]
    fn bivariate_rank_via_kronecker() {
        let f = PrimeField::new(101).unwrap();
        let y = SparseMultiPoly::var(f, 2, BiPolyRing::Y);
        let t = SparseMultiPoly::var(f, 2, BiPolyRing::T);
        // [[y, t], [t, y]] has determinant y^2 - t^2 != 0.
        let m = Matrix::from_rows(vec![vec![y.clone(), t.clone()], vec![t.clone(), y.clone()]]).unwrap();
        assert_eq!(rank_fyt(&f, &m), 2);
        // [[y, t], [y*t, t^2]] has determinant zero.
        let m = Matrix::from_rows(vec![vec![y.clone(), t.clone()], vec![y.mul(&t), t.mul(&t)]]).unwrap();
        assert_eq!(rank_fyt(&f, &m), 1);
    }

    fn arb_poly_matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<u64>>)> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                prop::collection::vec(prop::collection::vec(0u64..5, 0..3), r * c),
            )
        })
    }

    proptest! {
        #[test]
        fn exact_polynomial_rank_agrees_with_some_evaluation((r, c, raw) in arb_poly_matrix(), seed in 0u64..1000) {
            let f = PrimeField::new(10007).unwrap();
            let m = Matrix::new(r, c, raw.iter().map(|cs| UniPoly::from_u64s(f, cs)).collect()).unwrap();
            let exact = rank_ff_t_exact(&m);
            prop_assert_eq!(rank_ff_t(&f, &m), exact);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let hits = (0..3)
                .map(|_| f.random(&mut rng))
                .filter(|&x| rank_ff(&f, &m.map(|e| e.eval(x))) == exact)
                .count();
            prop_assert!(hits >= 1);
        }
    }

    #[test]
    fn span_basis_membership() {
        let f = PrimeField::new(5).unwrap();
        let mut b = SpanBasis::new(f, 3);
        let v = |a: [u64; 3]| a.map(|x| f.elem(x));
        assert!(b.insert(&v([1, 2, 0])));
        assert!(b.insert(&v([0, 1, 1])));
        assert!(b.contains(&v([1, 3, 1])));
        assert!(!b.contains(&v([0, 0, 1])));
        assert!(!b.insert(&v([2, 4, 0])));
        assert_eq!(b.rank(), 2);
    }
}
