//! Exact universality certificates for subspaces of `∧³ C^m` spanned by
//! basis trivectors.
//!
//! The characteristic polynomial of such a subspace is the product of
//! `x_i + x_j + x_k` over its excluded triples. Multiplied by some `μ` to
//! reach degree `m(m−1)/2`, its pairing with the Vandermonde polynomial is
//! nonzero only if it lies outside the coinvariant ideal, which certifies
//! universality. Everything here is integer arithmetic.

mod certify;
mod closed_form;
mod coeffs;
mod pairing;
mod poly;
mod subspace;

pub use certify::{
    certify, certify_with_multiplier, default_multiplier, elimination_applies, monomials_of_degree, pairing_direct, pairing_eliminated, Certificate,
    CertifyOptions, Verdict, DEFAULT_MULTIPLIER_BUDGET,
};
pub use closed_form::{closed_form_even, closed_form_odd, dims_report, DimsReport};
pub use coeffs::{coeff_table, CoeffTable};
pub use pairing::{pairing_of_factors, vandermonde_pairing, Multiplier, PairingOptions, PairingOutcome, MAX_VARS};
pub use poly::{ExponentVector, LinearForm, MultiPoly};
pub use subspace::{char_poly, non_bsov_triples, Preset, SubspaceSpec};
