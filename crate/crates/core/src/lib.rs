//! Elastic-scattering phase shifts and Wigner time delays for slow electrons
//! on a spherical square well and a spherical shell, with the critical depths
//! at which the first s- and p-levels appear.
//!
//! All quantities are in atomic units (hartree, bohr, ħ/hartree).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod delay;
pub mod error;
pub mod levels;
pub mod model;
pub mod oracle;
pub mod phase;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{Geometry, Potential, ShellWell, SquareWell};
