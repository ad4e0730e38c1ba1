//! Stability analysis for abstract thermoelastic systems with Cattaneo heat
//! flux:
//!
//! ```text
//! u_tt + m A^gamma u_tt + sigma A u - A^alpha theta = 0
//! theta_t + A^alpha u_t + A^(beta/2) q = 0
//! tau q_t + q - A^(beta/2) theta = 0
//! ```
//!
//! The crate classifies `(alpha, beta, gamma)` into the stability atlas,
//! solves the per-mode quartic dispersion relation, and measures resolvent
//! growth and semigroup decay on finite sets of modes.

pub mod catalog;
mod dd;
pub mod error;
pub mod exact;
pub mod fit;
pub mod grid;
pub mod linalg;
pub mod region;
pub mod report;
pub mod resolvent;
pub mod semigroup;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{Rational, Tolerance};
pub use region::{
    classify, classify_inertial, classify_noninertial, decay_order, sample_atlas, wellposed,
    ParameterPoint, RegionLabel, StabilityVerdict, VerdictKind,
};
pub use catalog::{mu_sequence, preset, Preset, SpectralSequence};
pub use spectrum::{characteristic_coeffs, modal_block, modal_eigenvalues, solve_quartic, QuarticCoeffs, RootSet};
