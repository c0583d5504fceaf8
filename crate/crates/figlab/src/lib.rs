//! Exact computations with finitely generated FI_G-modules over Q or F_p:
//! shift/derivative/induction/coinduction functors, homology and degree
//! invariants, regularity, torsion and local cohomology, and depth.

#![forbid(unsafe_code)]

pub mod error;
pub mod field;
pub mod functors;
pub mod generate;
pub mod group;
pub mod homology;
pub mod io;
pub mod localcoh;
pub mod matrix;
pub mod module;
pub mod presentation;
pub mod rep;
pub mod report;

pub use error::{FigError, Result};
