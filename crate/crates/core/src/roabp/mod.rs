//! Read-once oblivious algebraic branching programs.
//!
//! [`Roabp`] is the folded form `D_1 D_2 ... D_n` with `D_1` a row vector and
//! `D_n` a column vector. [`MatrixRoabp`] keeps the end vectors apart,
//! `u^T D_1 ... D_n t` with square layers, which is the form in which
//! commutativity of the layers is meaningful.

mod layer;
mod random;
mod setml;

pub use layer::{Layer, LayeredProgram};
pub use random::{random_commutative, random_roabp, random_roabp_with, random_set_multilinear};
pub use setml::{from_set_multilinear, AffineForm, SetMultilinearCircuit};

use crate::algebra::{row_echelon, FieldElem, FieldMatrix, MatPoly, Matrix, PrimeField, SparseMultiPoly, UniPoly};
use crate::error::{shape, Result};
use crate::nisan::PartialDerivMatrix;

/// Default cap on `prod_i (deg_i + 1)` for full expansion.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Roabp {
    program: LayeredProgram<PrimeField>,
    width: usize,
    degree: usize,
}

fn expected_dims(i: usize, n: usize, w: usize) -> (usize, usize) {
    match (i == 0, i + 1 == n) {
        (true, true) => (1, 1),
        (true, false) => (1, w),
        (false, true) => (w, 1),
        (false, false) => (w, w),
    }
}

/// Drops trailing zero coefficients down to `degree + 1`, failing if a
/// nonzero one remains above it, then pads back up to exactly `degree + 1`.
fn normalize_layer(field: &PrimeField, layer: Layer<FieldElem>, degree: usize) -> Result<Layer<FieldElem>> {
    if let Some(actual) = layer.degree(field) {
        if actual > degree {
            return Err(shape(format!("layer entry of degree {actual} exceeds d = {degree}")));
        }
    }
    let coeffs: Vec<FieldMatrix> = layer.coeffs().iter().take(degree + 1).cloned().collect();
    Ok(Layer::new(coeffs)?.padded(field, degree))
}

/// Splits a matrix of univariate polynomials into coefficient matrices.
pub fn layer_from_polys(field: &PrimeField, m: &Matrix<UniPoly>, degree: usize) -> Result<Layer<FieldElem>> {
    let (rows, cols) = m.dims();
    for e in m.entries() {
        field.check_same(&e.field())?;
        if e.degree().unwrap_or(0) > degree {
            return Err(shape(format!("layer entry {e} exceeds degree {degree}")));
        }
    }
    Layer::new(
        (0..=degree)
            .map(|k| Matrix::from_fn(rows, cols, |i, j| m.get(i, j).coeff(k)))
            .collect(),
    )
}

/// The inverse of [`layer_from_polys`].
pub fn layer_to_polys(field: &PrimeField, layer: &Layer<FieldElem>) -> Matrix<UniPoly> {
    let (rows, cols) = layer.dims();
    Matrix::from_fn(rows, cols, |i, j| UniPoly::from_coeffs(*field, layer.entry(i, j)))
}

impl Roabp {
    /// Builds a folded ROABP; layer `i` reads `x_{order[i]}`.
    pub fn new(
        field: PrimeField,
        width: usize,
        degree: usize,
        order: Vec<usize>,
        layers: Vec<Layer<FieldElem>>,
    ) -> Result<Self> {
        if width == 0 {
            return Err(shape("width must be at least 1"));
        }
        let n = layers.len();
        let mut normalized = Vec::with_capacity(n);
        for (i, layer) in layers.into_iter().enumerate() {
            let want = expected_dims(i, n, width);
            if layer.dims() != want {
                return Err(shape(format!(
                    "layer {} is {:?}, expected {want:?} for width {width}",
                    i + 1,
                    layer.dims()
                )));
            }
            normalized.push(normalize_layer(&field, layer, degree)?);
        }
        let program = LayeredProgram::new(field, order, normalized)?;
        Ok(Roabp { program, width, degree })
    }

    /// Same as [`Roabp::new`] with layers given as matrices of polynomials.
    pub fn from_poly_layers(
        field: PrimeField,
        width: usize,
        degree: usize,
        order: Vec<usize>,
        layers: &[Matrix<UniPoly>],
    ) -> Result<Self> {
        let layers = layers
            .iter()
            .map(|m| layer_from_polys(&field, m, degree))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, width, degree, order, layers)
    }

    /// Imports the `u^T D_1 ... D_n t` form.
    pub fn from_endpoints(
        field: PrimeField,
        degree: usize,
        order: Vec<usize>,
        u: Vec<FieldElem>,
        layers: Vec<Layer<FieldElem>>,
        t: Vec<FieldElem>,
    ) -> Result<Self> {
        MatrixRoabp::new(field, degree, order, u, layers, t)?.fold()
    }

    /// The zero polynomial: every layer vanishes.
    pub fn zero(field: PrimeField, n: usize, width: usize, degree: usize) -> Result<Self> {
        let layers = (0..n)
            .map(|i| {
                let (r, c) = expected_dims(i, n, width);
                Layer::constant(Matrix::zeros(&field, r, c))
            })
            .collect();
        Self::new(field, width, degree, (0..n).collect(), layers)
    }

    pub fn field(&self) -> PrimeField {
        *self.program.ring()
    }

    pub fn nvars(&self) -> usize {
        self.program.nvars()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Individual degree bound `d`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &[usize] {
        self.program.order()
    }

    pub fn layers(&self) -> &[Layer<FieldElem>] {
        self.program.layers()
    }

    pub fn program(&self) -> &LayeredProgram<PrimeField> {
        &self.program
    }

    pub fn layer_polys(&self, i: usize) -> Matrix<UniPoly> {
        layer_to_polys(&self.field(), &self.layers()[i])
    }

    pub fn is_identity_order(&self) -> bool {
        self.order().iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars() {
            return Err(shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars()
            )));
        }
        let f = self.field();
        // Row vector times each evaluated layer; entries evaluated by Horner.
        let mut state = vec![f.one()];
        for (layer, &v) in self.layers().iter().zip(self.order()) {
            let x = point[v];
            let (rows, cols) = layer.dims();
            let coeffs = layer.coeffs();
            let mut next = vec![f.zero(); cols];
            for (i, &s) in state.iter().enumerate().take(rows) {
                if s.is_zero() {
                    continue;
                }
                for (j, slot) in next.iter_mut().enumerate() {
                    let mut acc = f.zero();
                    for c in coeffs.iter().rev() {
                        acc = f.add(f.mul(acc, x), *c.get(i, j));
                    }
                    *slot = f.add(*slot, f.mul(s, acc));
                }
            }
            state = next;
        }
        Ok(state[0])
    }

    pub fn expand(&self, term_cap: usize) -> Result<SparseMultiPoly> {
        self.program.expand(term_cap)?.to_scalar()
    }

    /// Commutativity of the layer coefficients.
    ///
    /// Coefficient matrices of distinct layers are compared pairwise whenever
    /// both are square of the same size. In the folded form the end layers are
    /// vectors and drop out, so for `n >= 3` this checks the interior layers;
    /// use [`MatrixRoabp::is_commutative`] for the full check.
    pub fn is_commutative(&self) -> bool {
        commutative_layers(&self.field(), self.layers())
    }

    /// Renames variables so that layer `i` reads `x_i`. The returned map sends
    /// new variable `i` to the original variable `order[i]`.
    pub fn with_identity_order(&self) -> (Roabp, Vec<usize>) {
        let order = self.order().to_vec();
        let program = LayeredProgram::new(self.field(), (0..self.nvars()).collect(), self.layers().to_vec())
            .expect("same layers");
        (
            Roabp {
                program,
                width: self.width,
                degree: self.degree,
            },
            order,
        )
    }

    /// Same layers read in a different variable order.
    pub fn with_order(&self, order: Vec<usize>) -> Result<Roabp> {
        let program = LayeredProgram::new(self.field(), order, self.layers().to_vec())?;
        Ok(Roabp {
            program,
            width: self.width,
            degree: self.degree,
        })
    }

    /// Appends variables the polynomial does not depend on until there are
    /// `n_new` of them. The extra layers are identities closed by `e_1`.
    pub fn pad_variables(&self, n_new: usize) -> Result<Roabp> {
        let n = self.nvars();
        if n_new < n {
            return Err(shape(format!("cannot pad {n} variables down to {n_new}")));
        }
        if n_new == n {
            return Ok(self.clone());
        }
        let f = self.field();
        let w = self.width;
        let mut layers = self.layers().to_vec();
        let last = layers.pop().expect("at least one layer");
        let rows = last.dims().0;
        let widened = last
            .coeffs()
            .iter()
            .map(|c| Matrix::from_fn(rows, w, |i, j| if j == 0 { *c.get(i, 0) } else { f.zero() }))
            .collect();
        layers.push(Layer::new(widened)?);
        for _ in 0..n_new - n - 1 {
            layers.push(Layer::constant(Matrix::identity(&f, w)));
        }
        layers.push(Layer::constant(Matrix::from_fn(w, 1, |i, _| {
            if i == 0 {
                f.one()
            } else {
                f.zero()
            }
        })));
        let mut order = self.order().to_vec();
        order.extend(n..n_new);
        Roabp::new(f, w, self.degree, order, layers)
    }

    /// Reinterprets every coefficient in another prime field.
    pub fn with_field(&self, field: PrimeField) -> Roabp {
        let program = self.program.map_ring(field, |c| field.elem(c.value()));
        Roabp {
            program,
            width: self.width,
            degree: self.degree,
        }
    }
}

fn commutative_layers(field: &PrimeField, layers: &[Layer<FieldElem>]) -> bool {
    for (i, a) in layers.iter().enumerate() {
        let (r, c) = a.dims();
        if r != c {
            continue;
        }
        for b in &layers[i + 1..] {
            if b.dims() != (r, c) {
                continue;
            }
            for ca in a.coeffs() {
                for cb in b.coeffs() {
                    if !ca.commutes_with(cb, field).expect("square of equal size") {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `u^T D_1(x_{pi(1)}) ... D_n(x_{pi(n)}) t` with square `w x w` layers.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRoabp {
    program: LayeredProgram<PrimeField>,
    u: Vec<FieldElem>,
    t: Vec<FieldElem>,
    degree: usize,
}

impl MatrixRoabp {
    pub fn new(
        field: PrimeField,
        degree: usize,
        order: Vec<usize>,
        u: Vec<FieldElem>,
        layers: Vec<Layer<FieldElem>>,
        t: Vec<FieldElem>,
    ) -> Result<Self> {
        let w = u.len();
        if w == 0 || t.len() != w {
            return Err(shape(format!("end vectors of lengths {} and {}", u.len(), t.len())));
        }
        let layers = layers
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                if l.dims() != (w, w) {
                    return Err(shape(format!("layer {} is {:?}, expected {w}x{w}", i + 1, l.dims())));
                }
                normalize_layer(&field, l, degree)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixRoabp {
            program: LayeredProgram::new(field, order, layers)?,
            u,
            t,
            degree,
        })
    }

    pub fn field(&self) -> PrimeField {
        *self.program.ring()
    }

    pub fn nvars(&self) -> usize {
        self.program.nvars()
    }

    pub fn width(&self) -> usize {
        self.u.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &[usize] {
        self.program.order()
    }

    pub fn layers(&self) -> &[Layer<FieldElem>] {
        self.program.layers()
    }

    pub fn program(&self) -> &LayeredProgram<PrimeField> {
        &self.program
    }

    pub fn u(&self) -> &[FieldElem] {
        &self.u
    }

    pub fn t(&self) -> &[FieldElem] {
        &self.t
    }

    /// True iff coefficient matrices from distinct layers commute pairwise.
    pub fn is_commutative(&self) -> bool {
        commutative_layers(&self.field(), self.layers())
    }

    /// Absorbs `u` and `t` into the end layers.
    pub fn fold(&self) -> Result<Roabp> {
        let f = self.field();
        let w = self.width();
        let row = Matrix::new(1, w, self.u.clone())?;
        let col = Matrix::new(w, 1, self.t.clone())?;
        let n = self.nvars();
        let mut layers = self.layers().to_vec();
        let first: Vec<FieldMatrix> = layers[0]
            .coeffs()
            .iter()
            .map(|c| {
                let m = row.mul(c, &f)?;
                if n == 1 {
                    m.mul(&col, &f)
                } else {
                    Ok(m)
                }
            })
            .collect::<Result<_>>()?;
        layers[0] = Layer::new(first)?;
        if n > 1 {
            let last: Vec<FieldMatrix> = layers[n - 1]
                .coeffs()
                .iter()
                .map(|c| c.mul(&col, &f))
                .collect::<Result<_>>()?;
            layers[n - 1] = Layer::new(last)?;
        }
        Roabp::new(f, w, self.degree, self.order().to_vec(), layers)
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        let f = self.field();
        let m = self.program.eval(point)?;
        let mut acc = f.zero();
        for (i, &ui) in self.u.iter().enumerate() {
            for (j, &tj) in self.t.iter().enumerate() {
                acc = f.add(acc, f.mul(ui, f.mul(*m.get(i, j), tj)));
            }
        }
        Ok(acc)
    }

    /// `D(x) = D_1 ... D_n` as a matrix polynomial, without the end vectors.
    pub fn matrix_polynomial(&self, term_cap: usize) -> Result<MatPoly<PrimeField>> {
        self.program.expand(term_cap)
    }

    /// The product of the layers at `positions` (kept in their relative
    /// order) as a program in `positions.len()` variables; the layer at
    /// `positions[i]` reads the new variable `i`.
    pub fn restrict(&self, positions: &[usize]) -> Result<MatrixRoabp> {
        let layers = positions
            .iter()
            .map(|&i| {
                self.layers()
                    .get(i)
                    .cloned()
                    .ok_or_else(|| shape(format!("no layer at position {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixRoabp::new(
            self.field(),
            self.degree,
            (0..positions.len()).collect(),
            self.u.clone(),
            layers,
            self.t.clone(),
        )
    }

    /// Same program with layers listed in the given order of positions.
    pub fn permuted(&self, positions: &[usize]) -> Result<MatrixRoabp> {
        let n = self.nvars();
        if positions.len() != n {
            return Err(shape("permutation length differs from the layer count"));
        }
        let layers = positions.iter().map(|&i| self.layers()[i].clone()).collect();
        let order = positions.iter().map(|&i| self.order()[i]).collect();
        MatrixRoabp::new(self.field(), self.degree, order, self.u.clone(), layers, self.t.clone())
    }
}

/// Width-`rank(M)` bivariate ROABP with coefficient matrix `M`, from the rank
/// factorization `M = A B` where `A` holds the pivot columns of `M` and `B`
/// the nonzero rows of its reduced echelon form.
pub fn roabp_from_bivariate(m: &PartialDerivMatrix) -> Result<Roabp> {
    let f = m.field();
    let d = m.degree();
    let mat = m.matrix();
    let (rref, pivots) = row_echelon(&f, mat);
    let r = pivots.len();
    if r == 0 {
        return Roabp::zero(f, 2, 1, d);
    }
    // Layer 1 entry k: g_k(x1) = sum_i A(i, k) x1^i; layer 2 entry k: h_k(x2) = sum_j B(k, j) x2^j.
    let first = (0..=d)
        .map(|i| Matrix::from_fn(1, r, |_, k| *mat.get(i, pivots[k])))
        .collect();
    let second = (0..=d).map(|j| Matrix::from_fn(r, 1, |k, _| *rref.get(k, j))).collect();
    Roabp::new(f, r, d, vec![0, 1], vec![Layer::new(first)?, Layer::new(second)?])
}
