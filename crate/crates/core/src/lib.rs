//! Partition functions of Hermitian-type and circular random matrix
//! ensembles with `beta = L^2` or `beta = L^2 + 1`, computed as
//! hyperpfaffians of forms built from Wronskians of monic polynomials.
//!
//! The crate is organised bottom-up:
//!
//! * [`exterior`]: sparse exterior algebra over `C^D` (multi-indices as bit
//!   sets, wedge products, hyperpfaffians, classical Pfaffians);
//! * [`polyfam`]: polynomials, complete monic families, modified
//!   derivatives and Wronskians;
//! * [`measures`]: weight measures with moment, incomplete-moment and
//!   skew-moment providers, quadrature rules and atomic perturbations;
//! * [`ensembles`]: assembly of the forms, partition functions, the
//!   classical Pfaffian matrices and correlation functions;
//! * [`oracle`]: independent ground truth (direct integration, Selberg,
//!   Mehta and Dyson products, determinant and Pfaffian identities);
//! * [`suites`]: the verification suites exposed by the command line.

pub mod ensembles;
pub mod error;
pub mod exterior;
pub mod measures;
pub mod oracle;
pub mod polyfam;
pub mod special;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
