//! Command-line front end for `planar3b-core`: configuration, CSV output,
//! the data-producing subcommands and the validation suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;
