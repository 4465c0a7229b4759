//! Exact and Monte Carlo tools for Dirichlet-type spaces on the unit ball of
//! `C^d`, joint m-isometries of commuting tuples, and the spherical complex
//! moment problem.

pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod exactpoly;
pub mod gramian;
pub mod linalg;
pub mod measures;
pub mod moment;
pub mod multiindex;
pub mod poisson;
pub mod scalar;
pub mod spaces;
pub mod table;
pub mod tuples;

pub use error::{Error, Result};
