//! Sparse exterior algebra over `C^D`, `D <= 64`.
//!
//! Basis `k`-forms `e_{t(1)} ^ ... ^ e_{t(k)}` are indexed by [`MultiIndex`],
//! a bit set over `1..=D`. [`ExtForm`] stores a homogeneous form as a sorted
//! list of `(MultiIndex, coefficient)` pairs.

mod form;
mod matrix;
mod multi_index;

pub use form::{hyperpfaffian, wedge, wedge_power, ExtForm, DROP_TOLERANCE};
pub use matrix::{
    check_antisymmetric, form_from_matrix, matrix_from_form, pfaffian, pfaffian_elimination,
    pfaffian_expansion, SquareMatrix, ANTISYMMETRY_TOLERANCE, MAX_EXPANSION_ORDER,
};
pub use multi_index::{sign_of_concatenation, MultiIndex, MAX_DIM};
