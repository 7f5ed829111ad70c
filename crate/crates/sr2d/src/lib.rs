//! File formats, the Monte-Carlo experiment harness and batch verification
//! on top of [`sr2d_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod harness;
pub mod io;
pub mod report;
pub mod verify;

pub use sr2d_core as core;
