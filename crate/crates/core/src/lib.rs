//! Planning of wind-powered ammonia production across a regional network.
//!
//! Demand regions are supplied by local conversion, by electricity over the
//! grid, or by hydrogen trucked from wind regions. [`planner::solve_configuration`]
//! chooses capacities and daily transfers that meet every demand at least
//! cost.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod buffer;
pub mod cli;
pub mod data_io;
pub mod economics;
pub mod error;
pub mod grid;
pub mod hsc;
mod linalg;
pub mod lp;
pub mod planner;
pub mod wind;

pub use error::{Error, Result};
