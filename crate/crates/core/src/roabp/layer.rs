//! Layered matrix products `D_1(x_{pi(1)}) ... D_n(x_{pi(n)})`, each layer a
//! univariate polynomial with matrix coefficients.

use crate::algebra::matpoly::pascal;
use crate::algebra::{Exponent, MatPoly, Matrix, Ring};
use crate::error::{shape, Error, Result};

/// `D(x) = sum_e coeffs[e] * x^e`, all coefficients of one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<E> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> Layer<E> {
    pub fn new(coeffs: Vec<Matrix<E>>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| shape("a layer needs at least one coefficient matrix"))?;
        let (rows, cols) = first.dims();
        if coeffs.iter().any(|c| c.dims() != (rows, cols)) {
            return Err(shape("layer coefficients of different shapes"));
        }
        Ok(Layer { rows, cols, coeffs })
    }

    /// Constant layer.
    pub fn constant(m: Matrix<E>) -> Self {
        let (rows, cols) = m.dims();
        Layer {
            rows,
            cols,
            coeffs: vec![m],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coefficient matrices, index = power of the layer variable.
    pub fn coeffs(&self) -> &[Matrix<E>] {
        &self.coeffs
    }

    /// Number of stored coefficients minus one (an upper bound on the degree).
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Pads with zero coefficients up to `degree`.
    pub fn padded<R: Ring<Elem = E>>(mut self, ring: &R, degree: usize) -> Self {
        while self.coeffs.len() <= degree {
            self.coeffs.push(Matrix::zeros(ring, self.rows, self.cols));
        }
        self
    }

    /// Actual degree, `None` when every coefficient vanishes.
    pub fn degree<R: Ring<Elem = E>>(&self, ring: &R) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero(ring))
    }

    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, x: &E) -> Matrix<E> {
        let mut acc = self.coeffs.last().expect("nonempty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.scale(x, ring).add(c, ring).expect("same shape");
        }
        acc
    }

    /// Entry `(i, j)` as the list of its coefficients.
    pub fn entry(&self, i: usize, j: usize) -> Vec<E> {
        self.coeffs.iter().map(|c| c.get(i, j).clone()).collect()
    }

    /// `D(x + s)`: coefficient of `x^j` is `sum_{e >= j} binom(e, j) s^(e-j) C_e`.
    pub fn shift<R: Ring<Elem = E>>(&self, ring: &R, s: &E) -> Layer<E> {
        let d = self.coeffs.len() - 1;
        let binom = pascal(&ring.base(), d);
        let mut powers = vec![ring.one()];
        for _ in 0..d {
            let next = ring.mul(powers.last().unwrap(), s);
            powers.push(next);
        }
        let coeffs = (0..=d)
            .map(|j| {
                let mut acc = Matrix::zeros(ring, self.rows, self.cols);
                for e in j..=d {
                    let factor = ring.scale(&powers[e - j], binom[e][j]);
                    if ring.is_zero(&factor) {
                        continue;
                    }
                    acc = acc.add(&self.coeffs[e].scale(&factor, ring), ring).expect("same shape");
                }
                acc
            })
            .collect();
        Layer {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn map<F: Clone + PartialEq>(&self, f: impl Fn(&E) -> F) -> Layer<F> {
        Layer {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }
}

/// A product of univariate matrix-polynomial layers over a ring `R`.
///
/// Layer `i` reads variable `order[i]`; `order` is a permutation of `0..n`
/// and consecutive layer shapes chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredProgram<R: Ring> {
    ring: R,
    order: Vec<usize>,
    layers: Vec<Layer<R::Elem>>,
}

impl<R: Ring> LayeredProgram<R> {
    pub fn new(ring: R, order: Vec<usize>, layers: Vec<Layer<R::Elem>>) -> Result<Self> {
        let n = order.len();
        if layers.len() != n {
            return Err(shape(format!("{} layers for {n} variables", layers.len())));
        }
        if n == 0 {
            return Err(shape("a program needs at least one layer"));
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(shape(format!("order {order:?} is not a permutation of 0..{n}")));
            }
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].cols != pair[1].rows {
                return Err(shape(format!(
                    "layer {i} is {:?} but layer {} is {:?}",
                    pair[0].dims(),
                    i + 1,
                    pair[1].dims()
                )));
            }
        }
        Ok(LayeredProgram { ring, order, layers })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn layers(&self) -> &[Layer<R::Elem>] {
        &self.layers
    }

    /// Shape of the full product.
    pub fn dims(&self) -> (usize, usize) {
        (self.layers[0].rows, self.layers[self.layers.len() - 1].cols)
    }

    pub fn max_layer_degree(&self) -> usize {
        self.layers.iter().map(Layer::degree_bound).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[R::Elem]) -> Result<Matrix<R::Elem>> {
        if point.len() != self.nvars() {
            return Err(shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let mut acc: Option<Matrix<R::Elem>> = None;
        for (layer, &v) in self.layers.iter().zip(&self.order) {
            let m = layer.eval(&self.ring, &point[v]);
            acc = Some(match acc {
                None => m,
                Some(a) => a.mul(&m, &self.ring)?,
            });
        }
        Ok(acc.expect("at least one layer"))
    }

    /// Number of monomials a full expansion may touch, `prod_i (deg_i + 1)`.
    pub fn expansion_size(&self) -> u128 {
        self.layers
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.coeffs.len() as u128))
    }

    /// Full symbolic expansion by multiplying layers term by term.
    pub fn expand(&self, term_cap: usize) -> Result<MatPoly<R>> {
        let size = self.expansion_size();
        if size > term_cap as u128 {
            return Err(Error::Capacity {
                needed: size.to_string(),
                cap: term_cap,
            });
        }
        let n = self.nvars();
        let ring = &self.ring;
        let mut partial: Vec<(Exponent, Matrix<R::Elem>)> = Vec::new();
        for (i, (layer, &v)) in self.layers.iter().zip(&self.order).enumerate() {
            let mut next = Vec::new();
            for (e, c) in layer.coeffs.iter().enumerate() {
                if c.is_zero(ring) {
                    continue;
                }
                if i == 0 {
                    let mut a = vec![0; n];
                    a[v] = e as u32;
                    next.push((a, c.clone()));
                    continue;
                }
                for (a, m) in &partial {
                    let prod = m.mul(c, ring)?;
                    if prod.is_zero(ring) {
                        continue;
                    }
                    let mut a = a.clone();
                    a[v] = e as u32;
                    next.push((a, prod));
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        let (rows, cols) = self.dims();
        MatPoly::from_terms(ring.clone(), n, rows, cols, partial)
    }

    /// Substitutes `x_v := x_v + s[v]` layer by layer.
    pub fn shift(&self, s: &[R::Elem]) -> Result<LayeredProgram<R>> {
        if s.len() != self.nvars() {
            return Err(shape(format!(
                "shift of length {} for {} variables",
                s.len(),
                self.nvars()
            )));
        }
        let layers = self
            .layers
            .iter()
            .zip(&self.order)
            .map(|(l, &v)| l.shift(&self.ring, &s[v]))
            .collect();
        Ok(LayeredProgram {
            ring: self.ring.clone(),
            order: self.order.clone(),
            layers,
        })
    }

    pub fn map_ring<S: Ring>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> LayeredProgram<S> {
        LayeredProgram {
            ring,
            order: self.order.clone(),
            layers: self.layers.iter().map(|l| l.map(&f)).collect(),
        }
    }
}
