//! Commutative coefficient rings used by matrices and layered programs.
//!
//! A ring value is a context (e.g. the modulus) and elements are plain values
//! manipulated through it. Three rings are used: `Z_p` itself, `Z_p[t]`, and
//! `Z_p[y, t]`.

use std::fmt;

use super::field::{FieldElem, PrimeField};
use super::multipoly::SparseMultiPoly;
use super::poly::UniPoly;

pub trait Ring: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    /// The base field every element is defined over.
    fn base(&self) -> PrimeField;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The image of a base-field scalar.
    fn embed(&self, c: FieldElem) -> Self::Elem;

    fn scale(&self, a: &Self::Elem, c: FieldElem) -> Self::Elem {
        self.mul(a, &self.embed(c))
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }
}

impl Ring for PrimeField {
    type Elem = FieldElem;

    fn base(&self) -> PrimeField {
        *self
    }
    fn zero(&self) -> FieldElem {
        PrimeField::zero(self)
    }
    fn one(&self) -> FieldElem {
        PrimeField::one(self)
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        PrimeField::add(self, *a, *b)
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        PrimeField::sub(self, *a, *b)
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        PrimeField::neg(self, *a)
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        PrimeField::mul(self, *a, *b)
    }
    fn embed(&self, c: FieldElem) -> FieldElem {
        c
    }
    fn pow(&self, a: &FieldElem, e: u32) -> FieldElem {
        PrimeField::pow(self, *a, e as u64)
    }
}

/// `Z_p[t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyRing {
    pub field: PrimeField,
}

impl PolyRing {
    pub fn new(field: PrimeField) -> Self {
        PolyRing { field }
    }
}

impl Ring for PolyRing {
    type Elem = UniPoly;

    fn base(&self) -> PrimeField {
        self.field
    }
    fn zero(&self) -> UniPoly {
        UniPoly::zero(self.field)
    }
    fn one(&self) -> UniPoly {
        UniPoly::one(self.field)
    }
    fn is_zero(&self, a: &UniPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.add(b)
    }
    fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.sub(b)
    }
    fn neg(&self, a: &UniPoly) -> UniPoly {
        a.neg()
    }
    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.mul(b)
    }
    fn embed(&self, c: FieldElem) -> UniPoly {
        UniPoly::constant(self.field, c)
    }
    fn scale(&self, a: &UniPoly, c: FieldElem) -> UniPoly {
        a.scale(c)
    }
    fn pow(&self, a: &UniPoly, e: u32) -> UniPoly {
        a.pow(e as u64)
    }
}

/// `Z_p[y, t]` as two-variable sparse polynomials; variable 0 is `y`,
/// variable 1 is `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiPolyRing {
    pub field: PrimeField,
}

impl BiPolyRing {
    pub const Y: usize = 0;
    pub const T: usize = 1;

    pub fn new(field: PrimeField) -> Self {
        BiPolyRing { field }
    }
}

impl Ring for BiPolyRing {
    type Elem = SparseMultiPoly;

    fn base(&self) -> PrimeField {
        self.field
    }
    fn zero(&self) -> SparseMultiPoly {
        SparseMultiPoly::zero(self.field, 2)
    }
    fn one(&self) -> SparseMultiPoly {
        SparseMultiPoly::one(self.field, 2)
    }
    fn is_zero(&self, a: &SparseMultiPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &SparseMultiPoly, b: &SparseMultiPoly) -> SparseMultiPoly {
        a.add(b)
    }
    fn sub(&self, a: &SparseMultiPoly, b: &SparseMultiPoly) -> SparseMultiPoly {
        a.sub(b)
    }
    fn neg(&self, a: &SparseMultiPoly) -> SparseMultiPoly {
        a.neg()
    }
    fn mul(&self, a: &SparseMultiPoly, b: &SparseMultiPoly) -> SparseMultiPoly {
        a.mul(b)
    }
    fn embed(&self, c: FieldElem) -> SparseMultiPoly {
        SparseMultiPoly::constant(self.field, 2, c)
    }
    fn scale(&self, a: &SparseMultiPoly, c: FieldElem) -> SparseMultiPoly {
        a.scale(c)
    }
}
