//! Depth-3 set-multilinear circuits `sum_i prod_j l_{i,j}(x_j)`, each affine
//! form `l_{i,j}` reading only the variables of block `j`.

use super::{Layer, MatrixRoabp};
use crate::algebra::{FieldElem, MatPoly, Matrix, PrimeField, SparseMultiPoly};
use crate::error::{shape, Error, Result};

/// `constant + sum_k coeffs[k] * x_{block[k]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: FieldElem,
    pub coeffs: Vec<FieldElem>,
}

impl AffineForm {
    pub fn new(constant: FieldElem, coeffs: Vec<FieldElem>) -> Self {
        AffineForm { constant, coeffs }
    }

    fn to_poly(&self, field: PrimeField, nvars: usize, block: &[usize]) -> SparseMultiPoly {
        let mut p = SparseMultiPoly::constant(field, nvars, self.constant);
        for (&v, &c) in block.iter().zip(&self.coeffs) {
            let mut a = vec![0; nvars];
            a[v] = 1;
            p.add_term(a, c);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetMultilinearCircuit {
    field: PrimeField,
    nvars: usize,
    blocks: Vec<Vec<usize>>,
    forms: Vec<Vec<AffineForm>>,
}

impl SetMultilinearCircuit {
    /// `forms[i][j]` is `l_{i,j}`; its coefficients follow the order of `blocks[j]`.
    pub fn new(field: PrimeField, nvars: usize, blocks: Vec<Vec<usize>>, forms: Vec<Vec<AffineForm>>) -> Result<Self> {
        let mut owner = vec![None; nvars];
        for (j, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Partition(format!("block {} is empty", j + 1)));
            }
            for &v in b {
                if v >= nvars {
                    return Err(Error::Partition(format!("variable x{} out of range", v + 1)));
                }
                if let Some(other) = owner[v].replace(j) {
                    return Err(Error::Partition(format!(
                        "x{} lies in blocks {} and {}",
                        v + 1,
                        other + 1,
                        j + 1
                    )));
                }
            }
        }
        if let Some(v) = owner.iter().position(Option::is_none) {
            return Err(Error::Partition(format!("x{} is in no block", v + 1)));
        }
        if forms.is_empty() {
            return Err(shape("top fan-in must be at least 1"));
        }
        for row in &forms {
            if row.len() != blocks.len() {
                return Err(shape(format!("{} forms for {} blocks", row.len(), blocks.len())));
            }
            for (form, b) in row.iter().zip(&blocks) {
                if form.coeffs.len() != b.len() {
                    return Err(shape("affine form does not match its block size"));
                }
            }
        }
        Ok(SetMultilinearCircuit {
            field,
            nvars,
            blocks,
            forms,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Top fan-in.
    pub fn k(&self) -> usize {
        self.forms.len()
    }

    /// Number of blocks.
    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn forms(&self) -> &[Vec<AffineForm>] {
        &self.forms
    }

    /// `prod_j l_{i,j}` for one summand `i`.
    fn summand(&self, i: usize) -> SparseMultiPoly {
        self.forms[i]
            .iter()
            .zip(&self.blocks)
            .fold(SparseMultiPoly::one(self.field, self.nvars), |acc, (l, b)| {
                acc.mul(&l.to_poly(self.field, self.nvars, b))
            })
    }

    /// Direct expansion of the circuit.
    pub fn expand(&self) -> SparseMultiPoly {
        (0..self.k()).fold(SparseMultiPoly::zero(self.field, self.nvars), |acc, i| {
            acc.add(&self.summand(i))
        })
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = self.field;
        let mut total = f.zero();
        for row in &self.forms {
            let mut prod = f.one();
            for (l, b) in row.iter().zip(&self.blocks) {
                let v = b
                    .iter()
                    .zip(&l.coeffs)
                    .fold(l.constant, |acc, (&x, &c)| f.add(acc, f.mul(c, point[x])));
                prod = f.mul(prod, v);
            }
            total = f.add(total, prod);
        }
        Ok(total)
    }

    /// `D(x) = prod_j (l_{1,j}, ..., l_{k,j})` in the coordinatewise algebra,
    /// as a polynomial with `1 x k` coefficient vectors.
    pub fn coefficient_polynomial(&self) -> MatPoly<PrimeField> {
        let k = self.k();
        let parts: Vec<SparseMultiPoly> = (0..k).map(|i| self.summand(i)).collect();
        let mut out = MatPoly::zero(self.field, self.nvars, 1, k);
        for (i, p) in parts.iter().enumerate() {
            for (a, &c) in p.terms() {
                let row = Matrix::from_fn(1, k, |_, j| if j == i { c } else { self.field.zero() });
                out.add_term(a.clone(), row);
            }
        }
        out
    }

    /// The width-`k` diagonal ROABP `(1, ..., 1) D_1 ... D_q (1, ..., 1)^T`.
    ///
    /// Requires singleton blocks: an affine form in two or more variables is
    /// not a univariate layer.
    pub fn to_roabp(&self) -> Result<MatrixRoabp> {
        if let Some((j, b)) = self.blocks.iter().enumerate().find(|(_, b)| b.len() != 1) {
            return Err(Error::Partition(format!(
                "block {} has {} variables; a layered program needs singleton blocks",
                j + 1,
                b.len()
            )));
        }
        let f = self.field;
        let k = self.k();
        let diag = |vals: Vec<FieldElem>| Matrix::from_fn(k, k, |r, c| if r == c { vals[r] } else { f.zero() });
        let layers = (0..self.q())
            .map(|j| {
                let c0 = diag((0..k).map(|i| self.forms[i][j].constant).collect());
                let c1 = diag((0..k).map(|i| self.forms[i][j].coeffs[0]).collect());
                Layer::new(vec![c0, c1])
            })
            .collect::<Result<Vec<_>>>()?;
        let order = self.blocks.iter().map(|b| b[0]).collect();
        MatrixRoabp::new(f, 1, order, vec![f.one(); k], layers, vec![f.one(); k])
    }
}

/// See [`SetMultilinearCircuit::to_roabp`].
pub fn from_set_multilinear(c: &SetMultilinearCircuit) -> Result<MatrixRoabp> {
    c.to_roabp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roabp::DEFAULT_TERM_CAP;

    #[test]
    fn single_summand_is_a_product() {
        let f = PrimeField::new(7).unwrap();
        let c = SetMultilinearCircuit::new(
            f,
            2,
            vec![vec![0], vec![1]],
            vec![vec![
                AffineForm::new(f.one(), vec![f.elem(2)]),
                AffineForm::new(f.elem(3), vec![f.one()]),
            ]],
        )
        .unwrap();
        let a = c.to_roabp().unwrap();
        assert_eq!(a.width(), 1);
        assert_eq!(a.fold().unwrap().expand(DEFAULT_TERM_CAP).unwrap(), c.expand());
    }

    #[test]
    fn diagonal_import_of_x_plus_one() {
        let f = PrimeField::new(7).unwrap();
        // k = 2, one block: l1 = x1, l2 = 1, so the sum is x1 + 1.
        let c = SetMultilinearCircuit::new(
            f,
            1,
            vec![vec![0]],
            vec![
                vec![AffineForm::new(f.zero(), vec![f.one()])],
                vec![AffineForm::new(f.one(), vec![f.zero()])],
            ],
        )
        .unwrap();
        let a = c.to_roabp().unwrap();
        assert!(a.is_commutative());
        let l = &a.layers()[0];
        assert_eq!(l.entry(0, 0), vec![f.zero(), f.one()]);
        assert_eq!(l.entry(1, 1), vec![f.one(), f.zero()]);
        assert_eq!(l.entry(0, 1), vec![f.zero(), f.zero()]);
        let p = a.fold().unwrap().expand(DEFAULT_TERM_CAP).unwrap();
        assert_eq!(p, SparseMultiPoly::var(f, 1, 0).add(&SparseMultiPoly::one(f, 1)));
    }

    #[test]
    fn partition_is_checked() {
        let f = PrimeField::new(7).unwrap();
        let form = |n: usize| AffineForm::new(f.one(), vec![f.one(); n]);
        let overlap = SetMultilinearCircuit::new(f, 2, vec![vec![0, 1], vec![1]], vec![vec![form(2), form(1)]]);
        assert!(matches!(overlap, Err(Error::Partition(_))));
        let missing = SetMultilinearCircuit::new(f, 3, vec![vec![0], vec![1]], vec![vec![form(1), form(1)]]);
        assert!(matches!(missing, Err(Error::Partition(_))));
        let wide = SetMultilinearCircuit::new(f, 2, vec![vec![0, 1]], vec![vec![form(2)]]).unwrap();
        assert!(matches!(wide.to_roabp(), Err(Error::Partition(_))));
        assert_eq!(wide.expand().len(), 3);
    }
}
