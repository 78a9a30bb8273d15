//! Exact symbolic construction of the cell and minimal models of the
//! path-torsor complex of `P^1 - {0, 1, inf}` between two base points
//! `a != b`, together with the cubical cycle identities for the
//! Bloch–Totaro family.
//!
//! All arithmetic is over exact rationals.

pub mod bar;
pub mod cdga;
pub mod cubical;
pub mod emit;
pub mod integrate;
pub mod massey;
pub mod minimal;
pub mod modules;
pub mod path;

#[cfg(test)]
mod properties;

use thiserror::Error;

pub type Rational = num_rational::Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("element is not homogeneous")]
    Heterogeneous,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("no canonical Totaro bound for mixed-base subword {0}")]
    NoCanonicalBound(String),
    #[error("defining system has no bound for subword {0}")]
    IncompleteSystem(String),
    #[error("defining system fails at subword {subword}: residual {residual}")]
    InvalidSystem { subword: String, residual: String },
    #[error("input is not a cocycle: d = {0}")]
    NotCocycle(String),
    #[error("not a chain map: residual {0}")]
    NotChainMap(String),
    #[error("not a homotopy: residual {0}")]
    NotHomotopy(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("residual not in the boundary image of the Totaro catalog: {0}")]
    UnmatchedResidual(String),
    #[error("degenerate face: coordinate {0} is identically {1}")]
    DegenerateFace(usize, String),
    #[error("face equation outside the fractional-linear grammar: {0}")]
    NonLinearFace(String),
}
