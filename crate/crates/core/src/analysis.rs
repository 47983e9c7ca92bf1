//! Regime comparison: gaps between the symbiosis and benchmark equilibria,
//! the pollution sign condition, and comparative statics of both.
//!
//! Notation used below: `A = a - d g`, `G = alpha g (d + p_g)`,
//! `D = 2c + b n`. Every gap is a function of these three, which keeps the
//! expressions free of the cancellation that subtracting two equilibria
//! would introduce.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::profitability_gain;
use crate::params::{MarketParams, SymbiosisTech};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AnalysisError {
    /// `d = p_g = 0`: the regimes coincide gross of `c_g` and the pollution
    /// ratio has a zero denominator.
    #[error("degenerate profitability gain: d = 0 and p_g = 0")]
    DegenerateGain,
}

/// Gaps between the symbiosis and benchmark equilibria. Signs follow the
/// convention that every gap except `delta_p` is "symbiosis minus
/// benchmark"; `delta_p` is "benchmark minus symbiosis".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub delta_q: f64,
    pub delta_p: f64,
    pub delta_cs: f64,
    /// Gross per-firm profit gap, before the adoption cost.
    pub delta_pi: f64,
    pub delta_ts: f64,
    pub delta_poll: f64,
    pub gain_per_unit: f64,
    pub ts_sufficient_condition: bool,
    pub poll_sign_lhs: f64,
    /// `None` when the gain is degenerate.
    pub poll_sign_rhs: Option<f64>,
    pub poll_increases: bool,
    /// `delta_pi - c_g`.
    pub delta_pi_net: f64,
    pub degenerate_gain: bool,
    pub negative_symbiosis_poll: bool,
}

impl ComparisonReport {
    /// `lhs - rhs` of the pollution sign condition; positive iff pollution
    /// rises with symbiosis.
    pub fn poll_sign_margin(&self) -> Option<f64> {
        self.poll_sign_rhs.map(|rhs| self.poll_sign_lhs - rhs)
    }

    /// Exactly at the crossing where symbiosis leaves pollution unchanged.
    pub fn poll_at_boundary(&self) -> bool {
        self.poll_sign_margin() == Some(0.0) || self.delta_poll == 0.0
    }
}

struct Parts {
    margin: f64,
    gain: f64,
    denom: f64,
}

impl Parts {
    fn new(m: &MarketParams, t: &SymbiosisTech) -> Self {
        Parts {
            margin: m.viability_margin(),
            gain: profitability_gain(m, t),
            denom: m.denominator(),
        }
    }

    /// `(A + G)^2 - A^2`, written without the subtraction.
    fn square_gap(&self) -> f64 {
        self.gain * (self.gain + 2.0 * self.margin)
    }
}

/// Pollution gap `g n [(q_symb - q) - q_symb alpha (1 - k)]` with both
/// quantities substituted.
fn pollution_gap(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    let parts = Parts::new(m, t);
    let reuse = t.alpha() * (1.0 - t.k()) * (parts.margin + parts.gain);
    m.g() * m.n() / parts.denom * (parts.gain - reuse)
}

pub fn compare(m: &MarketParams, t: &SymbiosisTech) -> ComparisonReport {
    let parts = Parts::new(m, t);
    let (b, c, n) = (m.b(), m.c(), m.n());
    let denom = parts.denom;
    let sq_gap = parts.square_gap();

    let delta_q = parts.gain / denom;
    let delta_p = b * n * parts.gain / denom;
    let delta_cs = b * n * n * sq_gap / (2.0 * denom * denom);
    let delta_pi = c * sq_gap / (denom * denom);
    let delta_ts = n * sq_gap / (2.0 * denom) - n * t.c_g();
    let delta_poll = pollution_gap(m, t);

    let degenerate_gain = m.d() == 0.0 && t.p_g() == 0.0;
    let poll_sign_lhs = 1.0 / (1.0 - t.k()) - t.alpha();
    let poll_sign_rhs = (!degenerate_gain).then(|| parts.margin / (m.g() * (m.d() + t.p_g())));
    let poll_increases = match poll_sign_rhs {
        Some(rhs) => poll_sign_lhs > rhs,
        None => false,
    };

    ComparisonReport {
        delta_q,
        delta_p,
        delta_cs,
        delta_pi,
        delta_ts,
        delta_poll,
        gain_per_unit: parts.gain,
        ts_sufficient_condition: ts_sufficient_condition(m, t),
        poll_sign_lhs,
        poll_sign_rhs,
        poll_increases,
        delta_pi_net: delta_pi - t.c_g(),
        degenerate_gain,
        negative_symbiosis_poll: t.pollution_factor() < 0.0,
    }
}

/// `G c > b n (a - d g)`: together with `c_g < cutoff_star` this makes both
/// the net profit gap and the total-surplus gap positive.
pub fn ts_sufficient_condition(m: &MarketParams, t: &SymbiosisTech) -> bool {
    profitability_gain(m, t) * m.c() > m.b() * m.n() * m.viability_margin()
}

/// Whether pollution rises with symbiosis as the reuse process becomes as
/// dirty as production itself, probed at `k = 1 - 1e-3` and `k = 1 - 1e-6`.
pub fn poll_limit_k_to_one(m: &MarketParams, t: &SymbiosisTech) -> bool {
    [1e-3, 1e-6].into_iter().all(|eps| {
        let near =
            SymbiosisTech::new(t.alpha(), 1.0 - eps, t.p_g(), t.c_g()).expect("k below one keeps the technology valid");
        pollution_gap(m, &near) > 0.0
    })
}

/// Partial derivatives of the sign-condition margin
/// `M = [1/(1-k) - alpha] - (a - d g) / (g (d + p_g))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginSensitivities {
    pub g: f64,
    pub d: f64,
    pub p_g: f64,
    pub k: f64,
    pub alpha: f64,
}

pub fn poll_sign_condition_sensitivities(
    m: &MarketParams,
    t: &SymbiosisTech,
) -> Result<MarginSensitivities, AnalysisError> {
    let (a, d, g) = (m.a(), m.d(), m.g());
    let p_g = t.p_g();
    let spread = d + p_g;
    if spread == 0.0 {
        return Err(AnalysisError::DegenerateGain);
    }
    let one_minus_k = 1.0 - t.k();
    Ok(MarginSensitivities {
        g: a / (g * g * spread),
        // quotient rule on -(a - d g) / (g (d + p_g)); the d g terms cancel
        d: (a + g * p_g) / (g * spread * spread),
        p_g: m.viability_margin() / (g * spread * spread),
        k: 1.0 / (one_minus_k * one_minus_k),
        alpha: -1.0,
    })
}

/// Sensitivities of one gap with respect to the four policy/technology
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSlopes {
    pub alpha: f64,
    pub d: f64,
    pub p_g: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSensitivities {
    pub delta_q: GapSlopes,
    pub delta_p: GapSlopes,
    pub delta_cs: GapSlopes,
    pub delta_pi: GapSlopes,
    pub delta_ts: GapSlopes,
}

/// Analytic partial derivatives of every gap.
///
/// Each gap depends on the parameters only through `A` and `G`, so the table
/// is assembled from `(dA, dG)` for each direction.
pub fn delta_sensitivities(m: &MarketParams, t: &SymbiosisTech) -> DeltaSensitivities {
    let parts = Parts::new(m, t);
    let (b, c, n, d, g) = (m.b(), m.c(), m.n(), m.d(), m.g());
    let (alpha, spread) = (t.alpha(), d + t.p_g());
    let denom = parts.denom;

    // (dA, dG) along alpha, d, p_g, g
    let directions = [
        (0.0, g * spread),
        (-g, alpha * g),
        (0.0, alpha * g),
        (-d, alpha * spread),
    ];
    let slopes = |f: &dyn Fn(f64, f64) -> f64| {
        let [s_alpha, s_d, s_pg, s_g] = directions.map(|(da, dg)| f(da, dg));
        GapSlopes {
            alpha: s_alpha,
            d: s_d,
            p_g: s_pg,
            g: s_g,
        }
    };
    // derivative of (A + G)^2 - A^2
    let sq_gap_slope = |da: f64, dg: f64| 2.0 * ((parts.margin + parts.gain) * dg + da * parts.gain);

    DeltaSensitivities {
        delta_q: slopes(&|_, dg| dg / denom),
        delta_p: slopes(&|_, dg| b * n * dg / denom),
        delta_cs: slopes(&|da, dg| b * n * n * sq_gap_slope(da, dg) / (2.0 * denom * denom)),
        delta_pi: slopes(&|da, dg| c * sq_gap_slope(da, dg) / (denom * denom)),
        delta_ts: slopes(&|da, dg| n * sq_gap_slope(da, dg) / (2.0 * denom)),
    }
}

/// The closed form `2 c alpha g [(a - d g) + (d + p_g)(1 - g)] / (2c + bn)^2`
/// that circulates for the slope of the gross profit gap in `d`.
///
/// It is not the derivative of `delta_pi`: the true slope, returned by
/// [`delta_sensitivities`], is
/// `2 c alpha g [(a - d g) - (1 - alpha) g (d + p_g)] / (2c + bn)^2`, which can
/// be zero or negative. Kept so the two can be compared side by side.
pub fn reported_profit_gap_slope_in_d(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    let (c, d, g) = (m.c(), m.d(), m.g());
    let denom = m.denominator();
    2.0 * c * t.alpha() * g * (m.viability_margin() + (d + t.p_g()) * (1.0 - g)) / (denom * denom)
}
