use crate::params::{MarketParams, SymbiosisTech};
use crate::primitives::{benchmark_profit, inverse_demand, symbiosis_profit, Regime};

use super::search::{golden_section_max, ScalarMax, SearchOptions};
use super::{OracleConfig, OracleError};

const MIN_DAMPING: f64 = 1.0 / (1u64 << 40) as f64;
const MAX_SPAN_DOUBLINGS: usize = 64;
/// Iterations without a new smallest residual before declaring a stall.
const STALL_WINDOW: usize = 50;
/// A stall is only accepted as convergence below this relative residual.
const STALL_ACCEPT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEquilibrium {
    pub regime: Regime,
    pub q: f64,
    pub p: f64,
    pub iterations: usize,
    /// Damping in force when the iteration stopped.
    pub damping: f64,
    /// Last best-response residual relative to `q`.
    pub residual: f64,
    /// Stopped because floating-point noise kept the residual above `tol`.
    pub stalled: bool,
}

fn profit(q: f64, p: f64, m: &MarketParams, t: Option<&SymbiosisTech>) -> f64 {
    match t {
        None => benchmark_profit(q, p, m),
        Some(t) => symbiosis_profit(q, p, m, t),
    }
}

/// Profit-maximizing quantity of one price taker at price `p`. `t = None`
/// means the firm does not use symbiosis.
pub fn best_response(m: &MarketParams, t: Option<&SymbiosisTech>, p: f64, cfg: &OracleConfig) -> ScalarMax {
    let opts = SearchOptions::default();
    let mut span = cfg.search_span * m.a() / (m.b() * m.n());
    let mut found = golden_section_max(|q| profit(q, p, m, t), 0.0, span, &opts);
    for _ in 0..MAX_SPAN_DOUBLINGS {
        if !found.at_upper_bound {
            break;
        }
        span *= 2.0;
        found = golden_section_max(|q| profit(q, p, m, t), 0.0, span, &opts);
    }
    found
}

fn relative(residual: f64, q: f64, br: f64) -> f64 {
    let scale = q.abs().max(br.abs());
    if scale == 0.0 {
        residual.abs()
    } else {
        residual.abs() / scale
    }
}

/// Symmetric price-taking equilibrium found by iterating
/// `q <- q + damping * (BR(a - b n q) - q)` from `q = 0`.
pub fn fixed_point_equilibrium(
    m: &MarketParams,
    t: Option<&SymbiosisTech>,
    cfg: &OracleConfig,
) -> Result<OracleEquilibrium, OracleError> {
    cfg.validate()?;
    let regime = if t.is_some() {
        Regime::Symbiosis
    } else {
        Regime::Benchmark
    };
    let n = m.n();
    let finish = |q: f64, iterations: usize, damping: f64, residual: f64, stalled: bool| OracleEquilibrium {
        regime,
        q,
        p: inverse_demand(m, n * q),
        iterations,
        damping,
        residual,
        stalled,
    };

    let mut q = 0.0_f64;
    let mut damping = cfg.damping;
    let mut prev_step: Option<f64> = None;
    let mut best = (f64::INFINITY, 0.0_f64);
    let mut since_best = 0;

    for iter in 1..=cfg.max_iter {
        let price = inverse_demand(m, n * q);
        let br = best_response(m, t, price, cfg).x;
        let step = br - q;
        let rel = relative(step, q, br);
        if rel <= cfg.tol {
            return Ok(finish(br, iter, damping, rel, false));
        }

        if rel < best.0 {
            best = (rel, br);
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW && best.0 <= STALL_ACCEPT {
                return Ok(finish(best.1, iter, damping, best.0, true));
            }
        }

        if let Some(prev) = prev_step {
            let oscillating = prev * step < 0.0;
            if oscillating && step.abs() > 0.5 * prev.abs() {
                damping = (damping * 0.5).max(MIN_DAMPING);
            }
        }
        prev_step = Some(step);
        q = (q + damping * step).max(0.0);
    }
    Err(OracleError::NoConvergence { max_iter: cfg.max_iter })
}
