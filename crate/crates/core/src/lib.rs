//! Fermionic multilinear algebra under the local unitary group.
//!
//! States live in the exterior power `∧^n V` of an `m`-dimensional
//! single-particle space, stored densely in lexicographic order of their
//! Slater-determinant index tuples. On top of that the crate provides
//!
//! * [`multilinear`]: wedge and partial inner products, the `∧^n U` action,
//!   reduced density matrices and the decomposability test;
//! * [`canonical`]: antisymmetric Takagi form for 2-vectors, the canonical
//!   form of 3-vectors in dimension five, and numerical reductions of
//!   3-fermion states to single occupancy and to the minimal universal
//!   subspace;
//! * [`polycert`]: exact big-integer certificates that a subspace spanned by
//!   basis 3-vectors is universal, via the Vandermonde pairing;
//! * [`states`]: single-occupancy bookkeeping, BCS states and the
//!   obstruction experiments for four or more fermions.

pub mod canonical;
pub mod error;
pub mod multilinear;
pub mod polycert;
pub mod report;
pub mod rng;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use multilinear::{Combination, FermionState, HermitianMatrix, UnitaryMatrix};

/// Complex scalar used for all amplitudes.
pub type C64 = num_complex::Complex64;
