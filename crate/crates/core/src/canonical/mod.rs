//! Canonical forms and local-unitary reductions.

mod five;
mod nrep;
pub mod optimize;
mod sov;
mod takagi;

pub use five::{canonical_3in5, Canonical35};
pub use nrep::{nrep_spectrum, nrep_state, NrepSpectrum, PAIRING_TOL};
pub use sov::{
    apply_qubits, reduce_to_minimal, reduce_to_sov, sov_reduction, support_size, supported_on_bsov, weight_outside, zero_qubit_triple,
    QubitTriple, ReductionResult, SovOptions, SovProblem, DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_WINDOW, MINIMAL_SOV_TOL, DEFAULT_TOL, QUBIT_TOL,
};
pub use takagi::{takagi_2vector, AntisymMatrix, TakagiForm};
