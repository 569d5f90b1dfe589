//! Independent ground truth for the hyperpfaffian path: gamma-product
//! evaluations, brute-force integration of the joint density, and the
//! determinant and Pfaffian identities behind the construction.

mod closed_form;
mod direct;
mod identities;

pub use crate::special::log_gamma;
pub use closed_form::{dyson_value, mehta_value, selberg_value, uniform_selberg_value};
pub use direct::{direct_partition_function, DirectEstimate, DirectMethod, MAX_MONTE_CARLO_N, MAX_TENSOR_N};
pub use identities::{
    hyperpfaffian_sum_oracle, sign_matrix_pfaffian_check, vandermonde_identity_check, IdentityCheck,
    SignMatrixCheck, MAX_SUM_ORACLE_DIM,
};
