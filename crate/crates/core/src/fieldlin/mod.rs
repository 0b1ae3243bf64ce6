//! Exact scalars over Q and GF(p), dense matrices, and canonical subspaces.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::{
    add_vectors, axpy, check_vector, dot, is_zero_vector, rref, scale_vector, sub_vectors, unit_vector,
    zero_vector, Matrix, Vector,
};
pub use scalar::{Field, Scalar, PRIME_LIMIT};
pub use subspace::{complement, contains, kernel, subspace_intersect, subspace_sum, Subspace};
