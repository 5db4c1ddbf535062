//! Random assignment on the uniform weak-preference domain.
//!
//! Objects are ranked `o_1, ..., o_n` by every agent; agents differ only in
//! where their indifference classes begin and end. The crate provides the
//! extended probabilistic serial (EPS) mechanism, classical PS and a random
//! priority adaptation, exact checkers for the usual efficiency and fairness
//! axioms, a manipulation search harness, and certified reproductions of the
//! impossibility results for this domain. All arithmetic is exact.

pub mod axioms;
pub mod dominance;
pub mod error;
pub mod flownet;
pub mod limits;
pub mod lottery;
pub mod matrix;
pub mod mechanisms;
pub mod preference;
pub mod profile;
pub mod ratlp;
pub mod rational;
pub mod repro;
pub mod strategy;

pub use dominance::{
    assignments_equivalent, class_masses, class_prefix_sums, matrix_sd_dominates, sd_compare,
    SdVerdict,
};
pub use error::{Error, Result};
pub use matrix::{AssignmentMatrix, Matching};
pub use preference::{enumerate_uniform_prefs, UniformPreference};
pub use profile::Profile;
pub use rational::{rat, Rational};
