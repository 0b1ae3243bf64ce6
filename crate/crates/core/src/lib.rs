//! Exact-arithmetic toolkit for Lie algebras, Novikov products and Gel'fand-Dorfman pairs.
//!
//! A classical R-matrix `T` on a Lie algebra that also satisfies
//! `T[u,T(v)] = [u,T²(v)]` turns the product `u∘v = T([u,v]) - [T(u),v]` into a
//! Novikov product compatible with the bracket. This crate builds such operators
//! (from abelian subalgebras, by search, from root heights of `sl(n)`), checks
//! every axiom exactly over Q or GF(p), works with the tensor form of the classical
//! Yang-Baxter equation, and verifies the loop-algebra extension.
//!
//! All arithmetic is exact. Heavy loops run on rayon when the `parallel`
//! feature (on by default) is enabled.

pub mod affine;
pub mod construct;
pub mod cybe;
pub mod error;
pub mod fieldlin;
pub mod io;
pub mod liealg;
pub mod novikov;
pub mod par;
pub mod report;
mod table;

pub use error::{Error, Result};
pub use fieldlin::{Field, Matrix, Scalar, Subspace, Vector};
pub use liealg::LieAlgebra;
pub use novikov::{BilinearProduct, GDBialgebra, LinearOperator};
pub use report::{CheckReport, Witness};
