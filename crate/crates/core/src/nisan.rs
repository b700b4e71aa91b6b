//! Coefficient matrices of bivariate polynomials and the binomial matrices
//! that show the bivariate map keeps a low-rank polynomial nonzero.

use crate::algebra::{rank_ff, FieldElem, FieldMatrix, Matrix, PrimeField, SparseMultiPoly};
use crate::error::{precondition, shape, Error, Result};

/// `M(i, j) = coeff of x1^i x2^j`, a `(d+1) x (d+1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialDerivMatrix {
    field: PrimeField,
    degree: usize,
    m: FieldMatrix,
}

impl PartialDerivMatrix {
    pub fn from_matrix(field: PrimeField, m: FieldMatrix) -> Result<Self> {
        let (r, c) = m.dims();
        if r != c || r == 0 {
            return Err(shape(format!(
                "coefficient matrix must be square and nonempty, got {r}x{c}"
            )));
        }
        Ok(PartialDerivMatrix {
            field,
            degree: r - 1,
            m,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        *self.m.get(i, j)
    }

    pub fn rank(&self) -> usize {
        rank_ff(&self.field, &self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.m.entries().iter().all(|c| c.is_zero())
    }

    /// The bivariate polynomial this matrix describes.
    pub fn to_poly(&self) -> SparseMultiPoly {
        let n = self.degree + 1;
        let mut p = SparseMultiPoly::zero(self.field, 2);
        for i in 0..n {
            for j in 0..n {
                p.add_term(vec![i as u32, j as u32], self.get(i, j));
            }
        }
        p
    }
}

pub fn pdm(f: &SparseMultiPoly, d: usize) -> Result<PartialDerivMatrix> {
    if f.nvars() != 2 {
        return Err(shape(format!(
            "expected a bivariate polynomial, got {} variables",
            f.nvars()
        )));
    }
    if let Some(deg) = f.individual_degree() {
        if deg as usize > d {
            return Err(shape(format!("individual degree {deg} exceeds d = {d}")));
        }
    }
    let field = f.field();
    let mut m = Matrix::zeros(&field, d + 1, d + 1);
    for (a, &c) in f.terms() {
        m.set(a[0] as usize, a[1] as usize, c);
    }
    Ok(PartialDerivMatrix { field, degree: d, m })
}

/// A cell `(i, j, M(i, j))`.
pub type Cell = (usize, usize, FieldElem);

/// `l = max{i + j : M(i, j) != 0}` and the nonzero cells on that
/// antidiagonal as `(i, j, value)`, sorted by `j`.
pub fn top_diagonal(m: &PartialDerivMatrix) -> Result<(usize, Vec<Cell>)> {
    let n = m.degree + 1;
    let ell = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !m.get(i, j).is_zero())
        .map(|(i, j)| i + j)
        .max()
        .ok_or_else(|| Error::Empty("the coefficient matrix is zero".into()))?;
    let cells = (0..n)
        .filter(|&j| j <= ell && ell - j < n)
        .map(|j| (ell - j, j, m.get(ell - j, j)))
        .filter(|c| !c.2.is_zero())
        .collect();
    Ok((ell, cells))
}

/// `C(a, b) = binom(j_a, b)` for `b < w`, reduced mod `p` after exact
/// integer computation.
pub fn binomial_matrix(field: &PrimeField, j_list: &[u64], w: usize) -> Result<FieldMatrix> {
    let mut sorted = j_list.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(precondition(format!("duplicate values in {j_list:?}")));
    }
    Ok(Matrix::from_fn(j_list.len(), w, |a, b| {
        field.binomial(j_list[a], b as u64)
    }))
}
