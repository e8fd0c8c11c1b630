//! Single-occupancy bookkeeping, BCS states and obstructions beyond three fermions.

mod bcs;
mod obstruction;
mod pairs;

pub use bcs::{bcs_state, extend_modes, pair_block_unitary, sov_criterion, CRITERION_TOL};
pub use obstruction::{
    bcs_obstruction, pair_obstruction, sov_escape_experiment, EscapeResult, ObstructionResult, OBSTRUCTION_MAX_ITER,
    OBSTRUCTION_WINDOW,
};
pub use pairs::{bsov_count, bsov_enumerate, is_bsov_mask, is_sov, mask_hits_pair_twice, off_sov_weight, SovReport, StandardPair};
