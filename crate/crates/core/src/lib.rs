//! Hermite bases of integer relations lattices.
//!
//! For a full column rank `M` and a matrix `F` with the same column count,
//! the relations lattice `R(M, F)` is the set of integer rows `p` with
//! `p F` in the row lattice of `M`. This crate computes the Hermite basis of
//! such lattices by a recursive divide-and-conquer driven by Smith
//! massagers, with every Hermite computation done modulo the square of the
//! largest invariant factor involved.
//!
//! The entry points most users want live in [`apps`]: ordinary Hermite
//! normal form, remainders, products, intersections and multivariable CRT.
//! [`oracle`] holds slow reference implementations used for testing.

pub mod apps;
pub mod error;
pub mod format;
pub mod hermite_basis;
pub mod howell;
pub mod intmat;
pub mod linmul;
pub mod massager;
pub mod modn;
pub mod options;
pub mod oracle;
pub mod relations;
pub mod structured_hermite;

pub use error::{Error, Result};
pub use intmat::{
    colmod, determinant, lattice_contains, lattice_equal, matmul, rowmod, DiagonalModulus,
    HermiteBasis, IntMat, SmithForm,
};
pub use options::Options;

pub use num_bigint::BigInt;
