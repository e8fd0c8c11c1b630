//! Exterior-algebra core: basis indexing, wedge and partial inner products,
//! the local unitary action, reduced density matrices and decomposability.

mod action;
pub mod combination;
mod density;
mod matrix;
mod state;

pub use action::{apply_matrix, apply_unitary, derivation};
pub use combination::{binomial, combination_masks, Combination};
pub use density::{is_decomposable, rdm1, rdm2, two_vector_coords, Decomposability, RANK_TOL};
pub use matrix::{HermitianMatrix, UnitaryMatrix, HERMITIAN_TOL, UNITARY_TOL};
pub use state::{AmpRecord, FermionState, StateFile};
