//! Explicit constructions on the hyperbolic plane and its rank-one relatives:
//! the octagonal tiling group and its Fuchsian subgroups, the Bolza and
//! Fermat-Quartic fundamental-domain data, regular harmonics and their
//! finite-dimensional isometry representations, hypergeometric Green
//! functions and heat kernels, codimension-one separators, and the order-96
//! automorphism group in its six-dimensional integer representation.
//!
//! Every printed matrix, radical and relation of the underlying constructions
//! is turned into an executable check; see the `verify` module for the
//! aggregated suites.

pub mod coxeter;
pub mod error;
pub mod finitegroup;
pub mod fuchsian;
pub mod fundomain;
pub mod gridmap;
pub mod harmonics;
pub mod heatkernel;
pub mod models;
pub mod numerics;
pub mod separators;
pub mod spinor;
pub mod verify;

pub use error::Error;
pub use models::{DiskPoint, EulerPoint, GeodesicArc, HyperboloidPoint, SolvPoint, UhpPoint};
pub use numerics::{RadicalExpr, Tolerances};

/// Workspace-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
