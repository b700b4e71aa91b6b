//! Dense univariate polynomials over `Z_p`.

use std::fmt;

use super::field::{FieldElem, PrimeField};
use crate::error::Result;

/// A dense polynomial in one variable, `coeffs[i]` multiplying `t^i`.
///
/// Always canonical: no trailing zero coefficient, so the zero polynomial has
/// an empty coefficient vector and [`UniPoly::degree`] returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: PrimeField, c: FieldElem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// `c * t^deg`.
    pub fn monomial(field: PrimeField, c: FieldElem, deg: usize) -> Self {
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(field, coeffs)
    }

    /// The variable `t`.
    pub fn var(field: PrimeField) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_u64s(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn from_i64s(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElem> {
        self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial (degree `-inf`).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    fn same_field(&self, other: &UniPoly) {
        assert_eq!(self.field, other.field, "polynomial arithmetic across different fields");
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        UniPoly::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.same_field(other);
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        UniPoly::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        let f = self.field;
        UniPoly {
            field: f,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn scale(&self, c: FieldElem) -> UniPoly {
        let f = self.field;
        UniPoly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::from_coeffs(f, out)
    }

    pub fn pow(&self, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly {
            field: self.field,
            coeffs,
        }
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(inner(t))`, by Horner's rule over polynomials.
    pub fn compose(&self, inner: &UniPoly) -> Result<UniPoly> {
        self.field.check_same(&inner.field)?;
        let f = self.field;
        let mut acc = UniPoly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(f, c));
        }
        Ok(acc)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        self.same_field(divisor);
        let f = self.field;
        let lead_inv = f.inv(divisor.leading_coeff()?)?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Some((UniPoly::zero(f), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        Some((UniPoly::from_coeffs(f, quot), UniPoly::from_coeffs(f, rem)))
    }

    /// Quotient when `divisor` divides `self` exactly, otherwise `None`.
    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.field.modulus())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.value()) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "t")?,
                (1, v) => write!(f, "{v}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                (_, v) => write!(f, "{v}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn canonical_zero_stripping() {
        let f = z(7);
        let p = UniPoly::from_u64s(f, &[1, 0, 7, 14]);
        assert_eq!(p.coeffs().len(), 1);
        assert_eq!(p.degree(), Some(0));
        let zero = p.sub(&p);
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), None);
    }

    #[test]
    fn compose_examples() {
        let f = z(5);
        let q = UniPoly::from_u64s(f, &[3, 0, 1, 4]);
        assert_eq!(UniPoly::var(f).compose(&q).unwrap(), q);
        // t^2 o (t^2 + t) = t^4 + 2t^3 + t^2
        let outer = UniPoly::from_u64s(f, &[0, 0, 1]);
        let inner = UniPoly::from_u64s(f, &[0, 1, 1]);
        assert_eq!(outer.compose(&inner).unwrap(), UniPoly::from_u64s(f, &[0, 0, 1, 2, 1]));
        // (t^2 + t) o t^2 = t^4 + t^2
        assert_eq!(inner.compose(&outer).unwrap(), UniPoly::from_u64s(f, &[0, 0, 1, 0, 1]));
    }

    #[test]
    fn compose_rejects_mixed_fields() {
        let a = UniPoly::var(z(5));
        let b = UniPoly::var(z(7));
        assert!(matches!(
            a.compose(&b),
            Err(crate::Error::FieldMismatch { left: 5, right: 7 })
        ));
    }

    #[test]
    fn division_roundtrip() {
        let f = z(101);
        let a = UniPoly::from_u64s(f, &[5, 3, 0, 9, 1]);
        let b = UniPoly::from_u64s(f, &[2, 7, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree() < b.degree());
        assert_eq!(q.mul(&b).add(&r), a);
        assert_eq!(a.mul(&b).exact_div(&b), Some(a.clone()));
        assert!(a.div_rem(&UniPoly::zero(f)).is_none());
    }

    fn arb_poly(f: PrimeField) -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(0..f.modulus(), 0..5).prop_map(move |c| UniPoly::from_u64s(f, &c))
    }

    proptest! {
        #[test]
        fn compose_is_associative(
            a in arb_poly(z(10007)), b in arb_poly(z(10007)), c in arb_poly(z(10007))
        ) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn compose_degree_multiplies(a in arb_poly(z(10007)), b in arb_poly(z(10007))) {
            let c = a.compose(&b).unwrap();
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                if da > 0 && db > 0 {
                    prop_assert_eq!(c.degree(), Some(da * db));
                }
            }
        }

        #[test]
        fn eval_is_a_homomorphism(a in arb_poly(z(97)), b in arb_poly(z(97)), x in 0u64..97) {
            let f = z(97);
            let x = f.elem(x);
            prop_assert_eq!(a.mul(&b).eval(x), f.mul(a.eval(x), b.eval(x)));
            prop_assert_eq!(a.compose(&b).unwrap().eval(x), a.eval(b.eval(x)));
        }
    }
}
