//! Exact tropical admissible covers realizing the tropical Tevelev degree
//! `Tev_g = 2^g`.
//!
//! The pipeline runs bottom up: [`numeric`] linear forms and integer
//! matrices, [`graph`] metric graphs with stabilization and isomorphism,
//! [`cover`] tropical covers with their validators, [`hurwitz`] local
//! Hurwitz numbers, [`construction`] of the `2^g` covers over the
//! reference point, [`multiplicity`] certificates, and [`counting`] of the
//! total degree. [`oracle`] independently enumerates every genus-1 cover.

pub mod construction;
pub mod counting;
pub mod cover;
pub mod error;
pub mod graph;
pub mod hurwitz;
pub mod io;
pub mod multiplicity;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod perm;

pub use num_bigint::BigInt;

pub use construction::{
    build_solution, enumerate_solutions, reference_point, verify_solution, GenusWord, ReferencePoint,
    SolutionIndex,
};
pub use counting::{lemma_check, path_counts, tevelev_degree, PathTally};
pub use cover::{HurwitzData, TropicalCover};
pub use error::{Error, Result};
pub use graph::{stabilize, MetricGraph};
pub use multiplicity::{dilation_matrix, local_degree, MultiplicityCertificate};
pub use numeric::{LinForm, Param, Rational};
pub use par::ExecMode;
