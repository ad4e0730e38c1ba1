use thiserror::Error;

use crate::region::RegionLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {name} = {value} ({reason})")]
    Domain {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("cannot parse `{0}` as an exact rational")]
    ParseRational(String),

    #[error("degenerate leading coefficient: |c4| = {c4:e} relative to coefficient scale {scale:e}")]
    DegenerateLeading { c4: f64, scale: f64 },

    #[error("quartic roots and block eigenvalues disagree: deviation {deviation:e} exceeds {tolerance:e} (mu = {mu:e})")]
    CrossCheck {
        mu: f64,
        deviation: f64,
        tolerance: f64,
    },

    #[error("region {0} has no row in the asymptotic branch tables for this configuration")]
    UnsupportedRegion(RegionLabel),

    #[error("branch tables require sigma = 2, tau = 1 and m in {{0, 1}} (got sigma = {sigma}, tau = {tau}, m = {m})")]
    UnsupportedParameters { sigma: f64, tau: f64, m: f64 },

    #[error("ambiguous branch matching at mu = {mu:e}: two root assignments are equally close")]
    MatchingAmbiguity { mu: f64 },

    #[error("fit needs at least {needed} usable samples, got {got}")]
    FitDegenerate { needed: usize, got: usize },

    #[error("window [{lo:e}, {hi:e}] holds {got} samples, need at least {needed}")]
    WindowTooNarrow {
        lo: f64,
        hi: f64,
        got: usize,
        needed: usize,
    },

    #[error("i*lambda is numerically on the spectrum (lambda = {lambda:e}, mu = {mu:e}, rcond = {rcond:e})")]
    NearSingular { lambda: f64, mu: f64, rcond: f64 },

    #[error("0 is in the spectrum: beta < 2*alpha - 1, the modal block is singular")]
    SingularBlock,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid range spec `{spec}`: {reason}")]
    RangeSpec { spec: String, reason: String },

    #[error("invalid mode spec `{spec}`: {reason}")]
    ModeSpec { spec: String, reason: String },

    #[error("no critical branch: no root in the upper half plane at mu = {mu:e}")]
    NoCriticalBranch { mu: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            reason,
        }
    }
}
