// Negated comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coding;
pub mod curvature;
pub mod error;
pub mod fisher;
pub mod goldens;
pub mod metriczoo;
pub mod numerics;
pub mod priors;
pub mod qstate;
pub mod table;

pub use error::{Error, Result};
