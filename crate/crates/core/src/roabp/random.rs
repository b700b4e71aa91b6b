//! Seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{expected_dims, AffineForm, Layer, MatrixRoabp, Roabp, SetMultilinearCircuit, DEFAULT_TERM_CAP};
use crate::algebra::{FieldElem, FieldMatrix, Matrix, PrimeField};
use crate::error::Result;

/// Evaluation attempts per candidate before it is certified or resampled.
const NONZERO_PROBES: usize = 16;

fn random_matrix<R: Rng + ?Sized>(field: &PrimeField, rows: usize, cols: usize, rng: &mut R) -> FieldMatrix {
    Matrix::from_fn(rows, cols, |_, _| field.random(rng))
}

fn sample<R: Rng + ?Sized>(field: PrimeField, n: usize, d: usize, w: usize, rng: &mut R) -> Roabp {
    let order: Vec<usize> = (0..n).collect();
    let layers = (0..n)
        .map(|i| {
            let (r, c) = expected_dims(i, n, w);
            Layer::new((0..=d).map(|_| random_matrix(&field, r, c, rng)).collect()).expect("same shape")
        })
        .collect();
    Roabp::new(field, w, d, order, layers).expect("well-formed by construction")
}

fn looks_nonzero<R: Rng + ?Sized>(a: &Roabp, rng: &mut R) -> bool {
    let f = a.field();
    for _ in 0..NONZERO_PROBES {
        let pt: Vec<FieldElem> = (0..a.nvars()).map(|_| f.random(rng)).collect();
        if !a.eval(&pt).expect("length matches").is_zero() {
            return true;
        }
    }
    a.program().expansion_size() <= DEFAULT_TERM_CAP as u128
        && !a.expand(DEFAULT_TERM_CAP).expect("within cap").is_zero()
}

/// A ROABP in the identity order with uniformly random coefficients.
///
/// With `ensure_nonzero`, candidates are resampled until one evaluates to a
/// nonzero value at a random point, or, failing that, its expansion (when
/// within the default cap) is nonzero.
pub fn random_roabp_with<R: Rng + ?Sized>(
    field: PrimeField,
    n: usize,
    d: usize,
    w: usize,
    ensure_nonzero: bool,
    rng: &mut R,
) -> Roabp {
    assert!(n >= 1 && w >= 1, "need n >= 1 and w >= 1");
    loop {
        let a = sample(field, n, d, w, rng);
        if !ensure_nonzero || looks_nonzero(&a, rng) {
            return a;
        }
    }
}

pub fn random_roabp(field: PrimeField, n: usize, d: usize, w: usize, seed: u64, ensure_nonzero: bool) -> Roabp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_roabp_with(field, n, d, w, ensure_nonzero, &mut rng)
}

/// A square-layer ROABP whose coefficient matrices are all polynomials in one
/// random matrix `A`, hence commute.
pub fn random_commutative<R: Rng + ?Sized>(
    field: PrimeField,
    n: usize,
    d: usize,
    w: usize,
    rng: &mut R,
) -> Result<MatrixRoabp> {
    let a = random_matrix(&field, w, w, rng);
    let mut powers = vec![Matrix::identity(&field, w)];
    for _ in 1..w {
        let next = powers.last().unwrap().mul(&a, &field)?;
        powers.push(next);
    }
    let poly_in_a = |rng: &mut R| {
        powers.iter().fold(Matrix::zeros(&field, w, w), |acc, p| {
            acc.add(&p.scale(&field.random(rng), &field), &field)
                .expect("same shape")
        })
    };
    let layers = (0..n)
        .map(|_| Layer::new((0..=d).map(|_| poly_in_a(rng)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let u = (0..w).map(|_| field.random(rng)).collect();
    let t = (0..w).map(|_| field.random(rng)).collect();
    MatrixRoabp::new(field, d, (0..n).collect(), u, layers, t)
}

/// A set-multilinear circuit with top fan-in `k` over the given blocks.
pub fn random_set_multilinear<R: Rng + ?Sized>(
    field: PrimeField,
    blocks: Vec<Vec<usize>>,
    k: usize,
    rng: &mut R,
) -> Result<SetMultilinearCircuit> {
    let nvars = blocks.iter().map(Vec::len).sum();
    let forms = (0..k)
        .map(|_| {
            blocks
                .iter()
                .map(|b| AffineForm::new(field.random(rng), b.iter().map(|_| field.random(rng)).collect()))
                .collect()
        })
        .collect();
    SetMultilinearCircuit::new(field, nvars, blocks, forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(random_roabp(f, 3, 2, 2, 9, true), random_roabp(f, 3, 2, 2, 9, true));
        assert_ne!(random_roabp(f, 3, 2, 2, 9, true), random_roabp(f, 3, 2, 2, 10, true));
    }

    #[test]
    fn nonzero_even_over_tiny_fields() {
        let f = PrimeField::new(2).unwrap();
        for seed in 0..50 {
            let a = random_roabp(f, 3, 1, 2, seed, true);
            assert!(!a.expand(DEFAULT_TERM_CAP).unwrap().is_zero());
        }
    }

    #[test]
    fn commutative_generator_commutes() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert!(random_commutative(f, 3, 2, 3, &mut rng).unwrap().is_commutative());
        }
    }
}
