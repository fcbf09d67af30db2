//! so(2,1) spectrum generating algebra for the hypergeometric Natanzon
//! potentials: coordinate map, bound states, ladder operators, scattering
//! matrices, satellite potentials and an independent finite-difference oracle.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod coordmap;
pub mod error;
pub mod grid;
pub mod numerics;
pub mod oracle;
pub mod params;
pub mod report;
pub mod satellites;
pub mod scattering;
pub mod specfun;
pub mod spectrum;
pub mod verify;
pub mod wavefun;

pub use error::{Error, Result};
pub use params::{NatanzonParams, PtParams};
