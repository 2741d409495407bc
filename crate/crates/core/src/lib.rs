//! Lagrangian correspondences between polarized super Hilbert spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: field-generic dense kernels (SVD, generalized inverse, frames).
//! * [`super_space`]: graded spaces, the form `B(x, y) = <Γx, y>`, opposite and
//!   direct sums, Clifford actions.
//! * [`lagrangian`]: isotropic subspaces, the partial-isometry encoding and the
//!   conversions between the unitary `u` and the graph operator `T`.
//! * [`composition`]: relational (brute-force) composition and the closed-form
//!   composition through generalized inverses.
//! * [`polarization`]: closeness, polarized spaces and the two morphism types.
//! * [`clifford`]: explicit Clifford algebras, module decomposition and the
//!   index of sub-Lagrangians in `KO^{-d}` / `KU^{-d}`.
//! * [`sequence`]: exact structured operators on sequence spaces.
//! * [`field_theory`]: a truncated spectral model of the fermionic field theory
//!   on circles and cylinders.
//! * [`io`], [`random`], [`sweep`], [`cli`]: JSON schemas, reproducible random
//!   instances, property sweeps and the command-line front end.

pub mod cli;
pub mod clifford;
pub mod composition;
pub mod error;
pub mod field_theory;
pub mod io;
pub mod lagrangian;
pub mod linalg;
pub mod polarization;
pub mod random;
pub mod sequence;
pub mod super_space;
pub mod sweep;

pub use error::{Error, Result};
pub use linalg::{Field, Frame, Matrix, Tolerances, C64};
pub use super_space::SuperSpace;
