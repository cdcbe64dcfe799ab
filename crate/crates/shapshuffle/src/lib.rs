//! Score-shuffling attacks on batch scoring functions, Shapley attribution
//! engines that probe them, and group-fairness auditing of the outcome.
//!
//! The crate is organized around one adversarial scenario: a deployed model
//! scores whole batches, an adversary silently permutes the scores inside a
//! batch based on a protected column, and an auditor tries to catch the
//! manipulation with attribution methods and fairness metrics.
//!
//! - [`model`]: schemas, CSV loading, normalization, linear/logistic scoring.
//! - [`attacks`]: shuffle kernels (dominance, mixing, swapping), modifiers,
//!   hybrid composition, and the adversarial scorer wrapper.
//! - [`shapley`]: exact enumeration, closed-form linear attribution, a
//!   kernel-style estimator, and the consistency-check defense.
//! - [`fairness`]: group confusion statistics, five fairness metrics, and
//!   attack-induced metric drops.
//! - [`harness`]: synthetic data generators, experiment pipelines, and
//!   report emission (CSV/JSON/SVG).
//! - [`cli`]: the `shapshuffle` command-line front end.

pub mod attacks;
pub mod cli;
pub mod error;
pub mod fairness;
pub mod harness;
pub mod model;
pub mod seeding;
pub mod shapley;

pub use error::{Error, Result};
