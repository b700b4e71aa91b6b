//! Polynomials with matrix coefficients, stored sparsely by monomial.
//!
//! This is the expanded form of a layered program: `D(x) = sum_a C_a x^a`.
//! Coefficients live in a ring `R`, so the same type carries unshifted
//! polynomials (over `F`) and shifted ones (over `F[t]` or `F[y, t]`).

use std::collections::BTreeMap;

use super::field::{FieldElem, PrimeField};
use super::matrix::{Matrix, RankRing};
use super::multipoly::{support_size, Exponent, SparseMultiPoly};
use super::ring::Ring;
use crate::error::{shape, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly<R: Ring> {
    ring: R,
    nvars: usize,
    rows: usize,
    cols: usize,
    terms: BTreeMap<Exponent, Matrix<R::Elem>>,
}

impl<R: Ring> MatPoly<R> {
    pub fn zero(ring: R, nvars: usize, rows: usize, cols: usize) -> Self {
        MatPoly {
            ring,
            nvars,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(ring: R, nvars: usize, rows: usize, cols: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Matrix<R::Elem>)>,
    {
        let mut p = Self::zero(ring, nvars, rows, cols);
        for (a, m) in terms {
            if a.len() != nvars || m.dims() != (rows, cols) {
                return Err(shape("term does not match the polynomial's shape"));
            }
            p.add_term(a, m);
        }
        Ok(p)
    }

    /// Adds `m * x^a`; zero sums are dropped.
    pub fn add_term(&mut self, a: Exponent, m: Matrix<R::Elem>) {
        debug_assert_eq!(m.dims(), (self.rows, self.cols));
        if m.is_zero(&self.ring) {
            return;
        }
        match self.terms.remove(&a) {
            None => {
                self.terms.insert(a, m);
            }
            Some(old) => {
                let s = old.add(&m, &self.ring).expect("same shape");
                if !s.is_zero(&self.ring) {
                    self.terms.insert(a, s);
                }
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Dimension `k` of the coefficient vectors.
    pub fn coeff_dim(&self) -> usize {
        self.rows * self.cols
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Matrix<R::Elem>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &[u32]) -> Option<&Matrix<R::Elem>> {
        self.terms.get(a)
    }

    pub fn individual_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().copied().max().unwrap_or(0)).max()
    }

    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> MatPoly<S> {
        let mut out = MatPoly::zero(ring, self.nvars, self.rows, self.cols);
        for (a, m) in &self.terms {
            out.add_term(a.clone(), m.map(&f));
        }
        out
    }

    pub fn mul(&self, other: &MatPoly<R>) -> Result<MatPoly<R>> {
        if self.nvars != other.nvars || self.cols != other.rows {
            return Err(shape("incompatible matrix polynomials"));
        }
        let mut out = MatPoly::zero(self.ring.clone(), self.nvars, self.rows, other.cols);
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ma.mul(mb, &self.ring)?);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[R::Elem]) -> Result<Matrix<R::Elem>> {
        if point.len() != self.nvars {
            return Err(shape("evaluation point has the wrong length"));
        }
        let ring = &self.ring;
        let mut acc = Matrix::zeros(ring, self.rows, self.cols);
        for (a, m) in &self.terms {
            let mut c = ring.one();
            for (x, &e) in point.iter().zip(a) {
                if e > 0 {
                    c = ring.mul(&c, &ring.pow(x, e));
                }
            }
            acc = acc.add(&m.scale(&c, ring), ring)?;
        }
        Ok(acc)
    }

    /// `D(x + s)`, expanding every monomial binomially.
    pub fn shift(&self, s: &[R::Elem]) -> Result<MatPoly<R>> {
        if s.len() != self.nvars {
            return Err(shape(format!(
                "shift of length {} for {} variables",
                s.len(),
                self.nvars
            )));
        }
        let ring = &self.ring;
        let f = ring.base();
        let top = self.individual_degree().unwrap_or(0) as usize;
        let binom = pascal(&f, top);
        let powers: Vec<Vec<R::Elem>> = s
            .iter()
            .map(|v| {
                let mut pw = vec![ring.one()];
                for _ in 0..top {
                    let next = ring.mul(pw.last().unwrap(), v);
                    pw.push(next);
                }
                pw
            })
            .collect();

        let mut out = MatPoly::zero(ring.clone(), self.nvars, self.rows, self.cols);
        for (a, m) in &self.terms {
            // Enumerate b <= a with the scalar prod_i binom(a_i, b_i) s_i^(a_i - b_i).
            let mut partial: Vec<(Exponent, R::Elem)> = vec![(Vec::with_capacity(self.nvars), ring.one())];
            for (i, &ai) in a.iter().enumerate() {
                let mut next = Vec::with_capacity(partial.len() * (ai as usize + 1));
                for (b, c) in &partial {
                    for bi in 0..=ai {
                        let factor = ring.scale(&powers[i][(ai - bi) as usize], binom[ai as usize][bi as usize]);
                        if ring.is_zero(&factor) {
                            continue;
                        }
                        let mut nb = b.clone();
                        nb.push(bi);
                        next.push((nb, ring.mul(c, &factor)));
                    }
                }
                partial = next;
            }
            for (b, c) in partial {
                out.add_term(b, m.scale(&c, ring));
            }
        }
        Ok(out)
    }

    /// Coefficient vectors (flattened row-major) of the monomials accepted by
    /// `keep`, stacked as the rows of a matrix.
    pub fn coefficient_stack(&self, mut keep: impl FnMut(&[u32]) -> bool) -> Matrix<R::Elem> {
        let rows: Vec<Vec<R::Elem>> = self
            .terms
            .iter()
            .filter(|(a, _)| keep(a))
            .map(|(_, m)| m.entries().to_vec())
            .collect();
        let k = self.coeff_dim();
        let n = rows.len();
        Matrix::new(n, k, rows.into_iter().flatten().collect()).expect("consistent stack")
    }
}

impl<R: RankRing> MatPoly<R> {
    /// Dimension of the coefficient space over the fraction field of `R`.
    pub fn coefficient_rank(&self) -> usize {
        self.ring.rank(&self.coefficient_stack(|_| true))
    }

    /// Rank of the span of coefficients of monomials with support `< ell`.
    pub fn low_support_rank(&self, ell: usize) -> usize {
        self.ring.rank(&self.coefficient_stack(|a| support_size(a) < ell))
    }
}

impl MatPoly<PrimeField> {
    /// The scalar polynomial of a `1 x 1` matrix polynomial.
    pub fn to_scalar(&self) -> Result<SparseMultiPoly> {
        if self.dims() != (1, 1) {
            return Err(shape(format!("expected 1x1 coefficients, got {:?}", self.dims())));
        }
        SparseMultiPoly::from_terms(
            self.ring,
            self.nvars,
            self.terms.iter().map(|(a, m)| (a.clone(), *m.get(0, 0))),
        )
    }

    pub fn from_scalar(p: &SparseMultiPoly) -> Self {
        let mut out = MatPoly::zero(p.field(), p.nvars(), 1, 1);
        for (a, &c) in p.terms() {
            out.add_term(a.clone(), Matrix::filled(1, 1, c));
        }
        out
    }
}

/// `table[n][k] = binom(n, k) mod p` for `n <= top`.
pub(crate) fn pascal(f: &PrimeField, top: usize) -> Vec<Vec<FieldElem>> {
    let mut table: Vec<Vec<FieldElem>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut row = vec![f.one(); n + 1];
        for k in 1..n {
            row[k] = f.add(table[n - 1][k - 1], table[n - 1][k]);
        }
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::UniPoly;
    use crate::algebra::ring::PolyRing;

    #[test]
    fn shift_of_monomial_product_by_ones() {
        let f = PrimeField::new(101).unwrap();
        // x1 x2 x3 shifted by (1,1,1) = (x1+1)(x2+1)(x3+1): every multilinear monomial, coefficient 1.
        let p = MatPoly::from_scalar(&SparseMultiPoly::from_terms(f, 3, [(vec![1, 1, 1], f.one())]).unwrap());
        let s = p.shift(&[f.one(), f.one(), f.one()]).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.terms().all(|(_, m)| *m.get(0, 0) == f.one()));
        assert_eq!(s.coeff(&[0, 0, 0]).map(|m| *m.get(0, 0)), Some(f.one()));
    }

    #[test]
    fn shift_then_unshift_is_identity() {
        let f = PrimeField::new(101).unwrap();
        let ring = PolyRing::new(f);
        let p = SparseMultiPoly::from_terms(
            f,
            2,
            [
                (vec![2, 1], f.elem(3)),
                (vec![0, 2], f.elem(5)),
                (vec![1, 0], f.elem(7)),
            ],
        )
        .unwrap();
        let lifted = MatPoly::from_scalar(&p).map_ring(ring, |&c| UniPoly::constant(f, c));
        let s = [UniPoly::from_u64s(f, &[1, 2]), UniPoly::from_u64s(f, &[0, 0, 3])];
        let back: Vec<UniPoly> = s.iter().map(|x| x.neg()).collect();
        let round = lifted.shift(&s).unwrap().shift(&back).unwrap();
        assert_eq!(round, lifted);
    }

    #[test]
    fn pascal_rows() {
        let f = PrimeField::new(7).unwrap();
        let t = pascal(&f, 7);
        assert_eq!(t[4][2], f.elem(6));
        assert_eq!(t[7][3], f.zero()); // 35 = 0 mod 7
    }
}
