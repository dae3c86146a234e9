//! Deterministic testbed for wilt-triggered ("speaking plant") fertigation
//! control.
//!
//! The pipeline mirrors a greenhouse experiment end to end:
//!
//! - [`growth`] advances plant height, canopy width and turgor minute by minute.
//! - [`render`] draws the plant against a red panel as a 640×480 RGB frame.
//! - [`vision`] segments the frame and measures height and width.
//! - [`control`] runs the wilt rule and the baseline timer.
//! - [`ledger`] turns pump commands into litres per day.
//! - [`scenario`] wires everything into the three experiments.
//! - [`config`] and [`ppm`] handle the file formats.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod control;
mod error;
pub mod exec;
pub mod growth;
pub mod ledger;
pub mod ppm;
pub mod render;
pub mod scenario;
pub mod time;
pub mod vision;

pub use error::{Error, Result};
pub use exec::Execution;
pub use time::SimTime;
