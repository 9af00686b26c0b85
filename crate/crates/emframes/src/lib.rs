//! Frame-transformation toolkit for relativistic electrodynamics.
//!
//! The crate covers the augmented Lorentz group (boosts with real or complex
//! velocities, rotations and reflections, Thomas rotation, limit frames at
//! infinite rapidity), the induced transformations of charge/current,
//! electromagnetic fields and four-potentials, first-order field jets with
//! Maxwell residuals, the electromagnetic stress-energy tensor together with
//! a numerical nullspace analysis of its limit-frame constraint equations,
//! and Poynting-flux diagnostics for non-radiating configurations.
//!
//! Everything is exact double-precision complex arithmetic; identities are
//! exposed as operations with explicit residuals so they can be checked
//! rather than assumed.

pub mod constants;
pub mod error;
pub mod fields;
pub mod frame;
pub mod jet;
pub mod kinematics;
pub mod linalg;
pub mod nonradiating;
pub mod nullspace;
pub mod provider;
pub mod scenario;
pub mod stress;
pub mod verify;

pub use constants::Constants;
pub use error::{Error, Result};
pub use linalg::{CMat3, CMat4, CVec3};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
