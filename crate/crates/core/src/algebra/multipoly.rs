//! Sparse multivariate polynomials over `Z_p`, keyed by exponent vectors.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{FieldElem, PrimeField};
use super::poly::UniPoly;
use crate::error::{shape, Result};

/// Exponent vector `a` of the monomial `x^a`.
pub type Exponent = Vec<u32>;

/// Number of variables that occur in `x^a`.
pub fn support_size(a: &[u32]) -> usize {
    a.iter().filter(|&&e| e > 0).count()
}

/// A polynomial in `nvars` variables; only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMultiPoly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Exponent, FieldElem>,
}

impl SparseMultiPoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        SparseMultiPoly {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    /// The variable `x_i`.
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut a = vec![0; nvars];
        a[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(a, field.one());
        p
    }

    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, FieldElem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (a, c) in terms {
            if a.len() != nvars {
                return Err(shape(format!(
                    "exponent of length {} in a {nvars}-variate polynomial",
                    a.len()
                )));
            }
            p.add_term(a, c);
        }
        Ok(p)
    }

    /// Embeds `p(t)` as a polynomial in variable `var` of an `nvars`-variate ring.
    pub fn from_unipoly(p: &UniPoly, nvars: usize, var: usize) -> Self {
        let mut out = Self::zero(p.field(), nvars);
        for (i, &c) in p.coeffs().iter().enumerate() {
            let mut a = vec![0; nvars];
            a[var] = i as u32;
            out.add_term(a, c);
        }
        out
    }

    /// Adds `c * x^a` in place.
    pub fn add_term(&mut self, a: Exponent, c: FieldElem) {
        debug_assert_eq!(a.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let f = self.field;
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &FieldElem)> {
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

    pub fn coeff(&self, a: &[u32]) -> FieldElem {
        self.terms.get(a).copied().unwrap_or_default()
    }

    /// `max_i deg_{x_i}`, or `None` for the zero polynomial.
    pub fn individual_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.iter().copied().max().unwrap_or(0)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|a| a[var]).max()
    }

    fn same_ring(&self, other: &SparseMultiPoly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
    }

    pub fn add(&self, other: &SparseMultiPoly) -> SparseMultiPoly {
        self.same_ring(other);
        let mut out = self.clone();
        for (a, &c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> SparseMultiPoly {
        let f = self.field;
        SparseMultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, &c)| (a.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &SparseMultiPoly) -> SparseMultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElem) -> SparseMultiPoly {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (a, &v) in &self.terms {
            out.add_term(a.clone(), f.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &SparseMultiPoly) -> SparseMultiPoly {
        self.same_ring(other);
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SparseMultiPoly {
        let mut acc = Self::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(shape(format!(
                "point of length {} for a {}-variate polynomial",
                point.len(),
                self.nvars
            )));
        }
        let f = self.field;
        let mut acc = f.zero();
        for (a, &c) in &self.terms {
            let mut m = c;
            for (&x, &e) in point.iter().zip(a) {
                if e > 0 {
                    m = f.mul(m, f.pow(x, e as u64));
                }
            }
            acc = f.add(acc, m);
        }
        Ok(acc)
    }

    /// Substitutes `x_i := images[i]`; all images live in one common ring.
    pub fn substitute(&self, images: &[SparseMultiPoly]) -> Result<SparseMultiPoly> {
        if images.len() != self.nvars {
            return Err(shape(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        let Some(first) = images.first() else {
            // Zero variables: the polynomial is a constant.
            return Ok(self.clone());
        };
        let (f, m) = (first.field, first.nvars);
        for img in images {
            f.check_same(&img.field)?;
            if img.nvars != m {
                return Err(shape("substitution images in different rings"));
            }
        }
        // powers[i][e] = images[i]^e, built lazily up to the largest exponent used.
        let mut powers: Vec<Vec<SparseMultiPoly>> = vec![vec![Self::one(f, m)]; self.nvars];
        let mut out = Self::zero(f, m);
        for (a, &c) in &self.terms {
            let mut term = Self::constant(f, m, c);
            for (i, &e) in a.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// The univariate polynomial for a one-variable ring.
    pub fn to_unipoly(&self) -> Result<UniPoly> {
        if self.nvars != 1 {
            return Err(shape(format!(
                "expected a univariate polynomial, got {} variables",
                self.nvars
            )));
        }
        let deg = self.degree_in(0).unwrap_or(0) as usize;
        let mut coeffs = vec![self.field.zero(); deg + 1];
        for (a, &c) in &self.terms {
            coeffs[a[0] as usize] = c;
        }
        Ok(UniPoly::from_coeffs(self.field, coeffs))
    }
}

impl fmt::Debug for SparseMultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.field.modulus())
    }
}

impl fmt::Display for SparseMultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let f = f7();
        let p = SparseMultiPoly::from_terms(
            f,
            2,
            [
                (vec![1, 0], f.elem(3)),
                (vec![1, 0], f.elem(4)),
                (vec![0, 2], f.elem(0)),
            ],
        )
        .unwrap();
        assert!(p.is_zero());
        assert_eq!(p.individual_degree(), None);
    }

    #[test]
    fn individual_degree_is_max_single_exponent() {
        let f = f7();
        let p = SparseMultiPoly::from_terms(f, 3, [(vec![1, 1, 1], f.one()), (vec![0, 2, 0], f.one())]).unwrap();
        assert_eq!(p.individual_degree(), Some(2));
    }

    #[test]
    fn substitution_into_univariate_images() {
        let f = f7();
        // x1 * x2 at (t^2, t^2 + t) -> t^4 + t^3
        let p = SparseMultiPoly::from_terms(f, 2, [(vec![1, 1], f.one())]).unwrap();
        let img = [
            SparseMultiPoly::from_unipoly(&UniPoly::from_u64s(f, &[0, 0, 1]), 1, 0),
            SparseMultiPoly::from_unipoly(&UniPoly::from_u64s(f, &[0, 1, 1]), 1, 0),
        ];
        let q = p.substitute(&img).unwrap().to_unipoly().unwrap();
        assert_eq!(q, UniPoly::from_u64s(f, &[0, 0, 0, 1, 1]));
    }

    #[test]
    fn eval_checks_length() {
        let f = f7();
        let p = SparseMultiPoly::var(f, 2, 1);
        assert!(p.eval(&[f.one()]).is_err());
        assert_eq!(p.eval(&[f.one(), f.elem(5)]).unwrap(), f.elem(5));
    }
}
