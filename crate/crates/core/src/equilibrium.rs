//! Closed-form symmetric equilibria with and without industrial symbiosis.
//!
//! Firms are price takers with quadratic costs, so in each regime the
//! per-firm quantity solves `p - (effective unit cost) = 2 c q` together with
//! market clearing `p = a - b n q`.

use serde::{Deserialize, Serialize};

use crate::params::{MarketParams, SymbiosisTech};
pub use crate::primitives::{profit_at, Regime};

/// Equilibrium outcome of one regime. All aggregates are market totals except
/// `q` and `profit`, which are per firm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub regime: Regime,
    pub q: f64,
    pub p: f64,
    /// Per-firm profit, net of the adoption cost in the symbiosis regime.
    pub profit: f64,
    pub cs: f64,
    pub ts: f64,
    /// Total pollution. May be negative under symbiosis when `k` is very
    /// negative; it is never clamped.
    pub poll: f64,
    /// Fixed adoption cost already subtracted from `profit` (zero for the
    /// benchmark).
    pub adoption_cost: f64,
}

impl Equilibrium {
    /// Per-firm profit before the fixed adoption cost.
    pub fn gross_profit(&self) -> f64 {
        self.profit + self.adoption_cost
    }

    pub fn total_quantity(&self, m: &MarketParams) -> f64 {
        m.n() * self.q
    }
}

/// Per-unit profitability gain of symbiosis, `G = alpha g (d + p_g)`: byproduct
/// revenue plus the fine no longer paid on reused byproducts.
pub fn profitability_gain(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    t.alpha() * m.g() * (m.d() + t.p_g())
}

/// Common shape of both regimes: `shifted_margin` is `a - d g` plus whatever
/// per-unit gain the regime adds.
fn solve(
    m: &MarketParams,
    regime: Regime,
    shifted_margin: f64,
    unit_gain: f64,
    fixed: f64,
    pollution_factor: f64,
) -> Equilibrium {
    let (a, b, c, n, d, g) = (m.a(), m.b(), m.c(), m.n(), m.d(), m.g());
    let denom = m.denominator();
    let q = shifted_margin / denom;
    let p = (2.0 * a * c + b * n * (d * g - unit_gain)) / denom;
    let sq = shifted_margin * shifted_margin;
    let profit = c * sq / (denom * denom) - fixed;
    let cs = b * n * n * sq / (2.0 * denom * denom);
    let ts = n * sq / (2.0 * denom) - n * fixed;
    let poll = pollution_factor * n * g * q;
    Equilibrium {
        regime,
        q,
        p,
        profit,
        cs,
        ts,
        poll,
        adoption_cost: fixed,
    }
}

/// Equilibrium when no firm uses symbiosis.
pub fn benchmark_equilibrium(m: &MarketParams) -> Equilibrium {
    solve(m, Regime::Benchmark, m.viability_margin(), 0.0, 0.0, 1.0)
}

/// Equilibrium when every firm has adopted symbiosis.
pub fn symbiosis_equilibrium(m: &MarketParams, t: &SymbiosisTech) -> Equilibrium {
    let gain = profitability_gain(m, t);
    solve(
        m,
        Regime::Symbiosis,
        m.viability_margin() + gain,
        gain,
        t.c_g(),
        t.pollution_factor(),
    )
}

pub fn equilibrium(m: &MarketParams, t: &SymbiosisTech, regime: Regime) -> Equilibrium {
    match regime {
        Regime::Benchmark => benchmark_equilibrium(m),
        Regime::Symbiosis => symbiosis_equilibrium(m, t),
    }
}
