//! Adoption cutoffs and classification of the symmetric adoption profiles.
//!
//! A single firm contemplating a switch holds its quantity at the equilibrium
//! quantity of the profile it deviates from. Deviating into symbiosis then
//! gains `q G - c_g`, deviating out of it gains `c_g - q_symb G`.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{benchmark_equilibrium, profitability_gain, symbiosis_equilibrium};
use crate::params::{MarketParams, SymbiosisTech};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdoptionAnalysis {
    /// Highest adoption cost at which a lone firm still wants to leave the
    /// no-adoption profile.
    pub cutoff_star: f64,
    /// Highest adoption cost at which no firm wants to leave the all-adopt
    /// profile.
    pub cutoff_prime: f64,
    pub deviation_gain_from_benchmark: f64,
    pub none_adopt_is_equilibrium: bool,
    pub all_adopt_is_equilibrium: bool,
}

impl AdoptionAnalysis {
    /// Both symmetric profiles survive: `cutoff_star <= c_g <= cutoff_prime`.
    pub fn has_multiple_equilibria(&self) -> bool {
        self.none_adopt_is_equilibrium && self.all_adopt_is_equilibrium
    }
}

pub fn cutoff_star(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    benchmark_equilibrium(m).q * profitability_gain(m, t)
}

pub fn cutoff_prime(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    symbiosis_equilibrium(m, t).q * profitability_gain(m, t)
}

/// Profit of a lone adopter at benchmark price and quantity.
pub fn deviation_profit_from_benchmark(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    let e = benchmark_equilibrium(m);
    // grouped so that c_g == cutoff_star gives back the benchmark profit exactly
    e.profit + (e.q * profitability_gain(m, t) - t.c_g())
}

/// Ties count as equilibria: an indifferent deviator has no strictly
/// profitable move.
pub fn classify_equilibria(m: &MarketParams, t: &SymbiosisTech) -> AdoptionAnalysis {
    let star = cutoff_star(m, t);
    let prime = cutoff_prime(m, t);
    let c_g = t.c_g();
    AdoptionAnalysis {
        cutoff_star: star,
        cutoff_prime: prime,
        deviation_gain_from_benchmark: star - c_g,
        none_adopt_is_equilibrium: c_g >= star,
        all_adopt_is_equilibrium: c_g <= prime,
    }
}

/// Partial derivatives of `cutoff_star` with respect to `alpha`, `p_g` and
/// `n` (the latter treating the firm count as continuous).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffSensitivities {
    pub alpha: f64,
    pub p_g: f64,
    pub n: f64,
}

pub fn cutoff_sensitivities(m: &MarketParams, t: &SymbiosisTech) -> CutoffSensitivities {
    let margin = m.viability_margin();
    let denom = m.denominator();
    let (g, d) = (m.g(), m.d());
    let spread = d + t.p_g();
    CutoffSensitivities {
        alpha: margin * g * spread / denom,
        p_g: margin * t.alpha() * g / denom,
        n: -m.b() * margin * t.alpha() * g * spread / (denom * denom),
    }
}
