//! Hückel (tight-binding) Hamiltonians with zero on-site energy: open chains,
//! cycles, bond-alternating variants and d-dimensional Kronecker-sum lattices.
//!
//! Green's functions follow the zero-energy convention G = −H⁻¹. Every closed
//! form has an independent route to check it against: exact Gauss-Jordan and
//! Bareiss elimination in [`exact`], LU and symmetric eigensolvers in
//! [`numeric`], and direct spectral sums in [`trig`] and [`lattice`].
//!
//! Site indices in the public API are 1-based; matrix storage is 0-based.

pub mod circulant;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod exact;
pub mod hamiltonian;
pub mod lattice;
pub mod numeric;
pub mod output;
pub mod summation;
pub mod tridiagonal;
pub mod trig;
pub mod vanishing;
pub mod verify;

pub use error::{Error, Result, SingularCase};
pub use exact::{ExactMatrix, Rational};
pub use numeric::FloatMatrix;
