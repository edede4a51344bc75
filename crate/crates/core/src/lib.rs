//! Equipoise calibration of clinical trial designs.
//!
//! Pre-study uncertainty about a design's hypotheses is modelled as a
//! Beta-Prime distribution over the odds `P(H1)/P(H0)`. Operating
//! characteristics of a trial (or of a phase-2 plus phase-3 development plan)
//! turn prior odds into post-study odds, and a design is calibrated so that
//! those odds clear a chosen percentile of the equipoise distribution.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod equipoise;
pub mod error;
pub mod gs;
pub mod numerics;
pub mod odds;
pub mod plan;
pub mod proportions;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
