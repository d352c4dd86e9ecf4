//! Error type shared by every module of the crate.
//!
//! Time and value payloads are widened to `f64` so the error type stays
//! independent of the working scalar.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("t = {t} is not a point of the time scale")]
    NotInScale { t: f64 },

    #[error("time scale has no points inside the window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("invalid time scale: {reason}")]
    InvalidScale { reason: String },

    #[error("non-regressive point: 1 + mu*p = {value} at t = {t}")]
    NonRegressivePoint { t: f64, value: f64 },

    #[error("sampled bound {sampled} exceeds analytic bound {analytic} for coefficient `{name}`")]
    InconsistentBounds {
        name: String,
        sampled: f64,
        analytic: f64,
    },

    #[error("invalid model: {reason}")]
    InvalidModel { reason: String },

    #[error("history lookup at t = {t} precedes stored history starting at {start}")]
    HistoryGap { t: f64, start: f64 },

    #[error("state component {component} exceeded 1e12 at t = {t}: blow-up")]
    BlowUp { t: f64, component: usize },

    #[error("trajectories are not on the same grid: {reason}")]
    GridMismatch { reason: String },

    #[error("H2 violated for patch {patch}: coupling ratio {ratio} >= 1")]
    H2Violated { patch: usize, ratio: f64 },

    #[error("H5 violated for patch {patch}: sum {sum} >= c_lo {c_lo}")]
    H5Violated { patch: usize, sum: f64, c_lo: f64 },

    #[error("A1 interval infeasible: lower bound {lo} >= upper bound {hi}")]
    InfeasibleA1Interval { lo: f64, hi: f64 },

    #[error("root bracketing failed for patch {patch}: {reason}")]
    RootBracketFailure { patch: usize, reason: String },

    #[error("deviation series degenerate on the fit window: {reason}")]
    DegenerateSeries { reason: String },

    #[error("insufficient overlap between trajectory and its translates")]
    InsufficientOverlap,
}

pub type Result<V> = std::result::Result<V, Error>;
