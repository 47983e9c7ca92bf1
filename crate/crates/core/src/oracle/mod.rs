//! Brute-force verification layer.
//!
//! Everything in here works from the raw parameters and the model primitives
//! (inverse demand, per-firm profit, pollution, consumer surplus) only. Best
//! responses are found by derivative-free search and the market equilibrium
//! by damped fixed-point iteration, so agreement with the closed forms is
//! independent evidence rather than the same algebra evaluated twice.

mod campaign;
mod deviation;
mod fixed_point;
pub mod search;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use campaign::{campaign_draw, run_campaign, CampaignSummary};
pub use deviation::{best_deviation_profit, deviation_check, DeviationCheck, Profile};
pub use fixed_point::{best_response, fixed_point_equilibrium, OracleEquilibrium};
pub use verify::{
    closed_forms, verify_against, verify_scenario, Check, ClosedForms, VerificationRecord, CHECK_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("fixed-point iteration did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Convergence tolerance on the best-response residual, relative to the
    /// current quantity.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial damping of the quantity update, in `(0, 1]`. Halved whenever
    /// the iteration oscillates without contracting.
    pub damping: f64,
    /// Best-response search covers `[0, search_span * a / (b n)]`; the span
    /// doubles while the maximizer sits on its upper end.
    pub search_span: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
            damping: 0.5,
            search_span: 10.0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(OracleError::InvalidConfig("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(OracleError::InvalidConfig("max_iter must be positive"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(OracleError::InvalidConfig("damping must lie in (0, 1]"));
        }
        if !(self.search_span > 0.0 && self.search_span.is_finite()) {
            return Err(OracleError::InvalidConfig("search_span must be positive"));
        }
        Ok(())
    }
}
