//! Model primitives: inverse demand, per-firm profit, pollution and surplus.
//!
//! These are the only model facts shared by the closed-form solvers and the
//! numeric oracle. Nothing here knows where an equilibrium lies.

use serde::{Deserialize, Serialize};

use crate::params::{MarketParams, SymbiosisTech};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// No firm uses industrial symbiosis.
    Benchmark,
    /// Every firm has adopted industrial symbiosis.
    Symbiosis,
}

impl Regime {
    pub fn opposite(self) -> Regime {
        match self {
            Regime::Benchmark => Regime::Symbiosis,
            Regime::Symbiosis => Regime::Benchmark,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Benchmark => "benchmark",
            Regime::Symbiosis => "symbiosis",
        }
    }
}

/// Market price `a - b Q` for total output `Q`.
pub fn inverse_demand(m: &MarketParams, total_quantity: f64) -> f64 {
    m.a() - m.b() * total_quantity
}

/// Profit of one price-taking firm producing `q` at price `p`.
///
/// Benchmark: `q (p - d g) - c q^2`. With symbiosis the firm sells
/// `alpha g q` units of byproduct at `p_g`, pays the fine only on the
/// remaining `(1 - alpha) g q`, and bears the fixed cost `c_g`.
pub fn profit_at(q: f64, p: f64, m: &MarketParams, t: &SymbiosisTech, regime: Regime) -> f64 {
    match regime {
        Regime::Benchmark => benchmark_profit(q, p, m),
        Regime::Symbiosis => symbiosis_profit(q, p, m, t),
    }
}

pub fn benchmark_profit(q: f64, p: f64, m: &MarketParams) -> f64 {
    q * (p - m.d() * m.g()) - m.c() * q * q
}

pub fn symbiosis_profit(q: f64, p: f64, m: &MarketParams, t: &SymbiosisTech) -> f64 {
    let (d, g) = (m.d(), m.g());
    let unit_margin = p - d * g * (1.0 - t.alpha()) + t.p_g() * t.alpha() * g;
    q * unit_margin - m.c() * q * q - t.c_g()
}

/// Total emissions when `total_quantity` units are produced.
pub fn total_pollution(m: &MarketParams, t: &SymbiosisTech, regime: Regime, total_quantity: f64) -> f64 {
    match regime {
        Regime::Benchmark => m.g() * total_quantity,
        Regime::Symbiosis => t.pollution_factor() * m.g() * total_quantity,
    }
}

/// Consumer surplus `Q (a - p) / 2` under linear demand.
pub fn consumer_surplus(m: &MarketParams, total_quantity: f64, price: f64) -> f64 {
    total_quantity * (m.a() - price) / 2.0
}
