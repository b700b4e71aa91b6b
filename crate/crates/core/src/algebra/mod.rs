//! Exact arithmetic kernels: `Z_p`, dense univariate and sparse multivariate
//! polynomials, matrices over those rings, and exact rank.

pub mod field;
pub mod matpoly;
pub mod matrix;
pub mod multipoly;
pub mod poly;
pub mod ring;

pub use field::{FieldElem, PrimeField};
pub use matpoly::MatPoly;
pub use matrix::{
    rank_ff, rank_ff_t, rank_ff_t_exact, rank_fyt, row_echelon, FieldMatrix, Matrix, RankRing, SpanBasis, UniPolyMatrix,
};
pub use multipoly::{support_size, Exponent, SparseMultiPoly};
pub use poly::UniPoly;
pub use ring::{BiPolyRing, PolyRing, Ring};
