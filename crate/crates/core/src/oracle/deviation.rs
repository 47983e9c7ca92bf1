use serde::{Deserialize, Serialize};

use crate::params::{MarketParams, SymbiosisTech};
use crate::primitives::{benchmark_profit, symbiosis_profit, Regime};

use super::fixed_point::{best_response, fixed_point_equilibrium};
use super::{OracleConfig, OracleError};

/// Symmetric adoption profile a lone firm may deviate from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    AllBenchmark,
    AllSymbiosis,
}

impl Profile {
    pub fn regime(self) -> Regime {
        match self {
            Profile::AllBenchmark => Regime::Benchmark,
            Profile::AllSymbiosis => Regime::Symbiosis,
        }
    }
}

/// Outcome of a unilateral switch of regime at the profile's market price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationCheck {
    pub profile: Profile,
    pub price: f64,
    pub quantity: f64,
    /// Profit of a firm that stays with the profile.
    pub profile_profit: f64,
    /// Deviator keeps the profile quantity.
    pub fixed_quantity_profit: f64,
    /// Deviator re-optimizes its quantity at the profile price.
    pub reoptimized_profit: f64,
    pub reoptimized_quantity: f64,
}

impl DeviationCheck {
    pub fn fixed_quantity_gain(&self) -> f64 {
        self.fixed_quantity_profit - self.profile_profit
    }

    pub fn reoptimized_gain(&self) -> f64 {
        self.reoptimized_profit - self.profile_profit
    }
}

pub fn deviation_check(
    m: &MarketParams,
    t: &SymbiosisTech,
    profile: Profile,
    cfg: &OracleConfig,
) -> Result<DeviationCheck, OracleError> {
    let (stay, deviate): (Option<&SymbiosisTech>, Option<&SymbiosisTech>) = match profile {
        Profile::AllBenchmark => (None, Some(t)),
        Profile::AllSymbiosis => (Some(t), None),
    };
    let eq = fixed_point_equilibrium(m, stay, cfg)?;
    let profit = |tech: Option<&SymbiosisTech>, q: f64| match tech {
        None => benchmark_profit(q, eq.p, m),
        Some(t) => symbiosis_profit(q, eq.p, m, t),
    };
    let reopt = best_response(m, deviate, eq.p, cfg);
    Ok(DeviationCheck {
        profile,
        price: eq.p,
        quantity: eq.q,
        profile_profit: profit(stay, eq.q),
        fixed_quantity_profit: profit(deviate, eq.q),
        reoptimized_profit: profit(deviate, reopt.x),
        reoptimized_quantity: reopt.x,
    })
}

/// Highest profit a lone firm can earn by switching regime while the market
/// price stays at the profile's equilibrium price.
pub fn best_deviation_profit(
    m: &MarketParams,
    t: &SymbiosisTech,
    profile: Profile,
    cfg: &OracleConfig,
) -> Result<f64, OracleError> {
    Ok(deviation_check(m, t, profile, cfg)?.reoptimized_profit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Scenario;

    fn scenario(c_g: f64) -> Scenario {
        let s = Scenario::reference();
        Scenario::new(s.market, SymbiosisTech::new(0.5, 0.0, 6.0, c_g).unwrap())
    }

    #[test]
    fn reoptimizing_beats_fixed_quantity() {
        let s = scenario(0.1);
        let cfg = OracleConfig::default();
        let dc = deviation_check(&s.market, &s.tech, Profile::AllBenchmark, &cfg).unwrap();
        // fixed-quantity deviation profit is 271/90
        assert!((dc.fixed_quantity_profit - 271.0 / 90.0).abs() < 1e-9);
        assert!(dc.reoptimized_profit >= dc.fixed_quantity_profit);
        assert!(dc.reoptimized_gain() > 0.0);
        assert_eq!(
            best_deviation_profit(&s.market, &s.tech, Profile::AllBenchmark, &cfg).unwrap(),
            dc.reoptimized_profit
        );
    }

    #[test]
    fn leaving_symbiosis_at_fixed_quantity() {
        let cfg = OracleConfig::default();
        let s = scenario(0.1);
        let dc = deviation_check(&s.market, &s.tech, Profile::AllSymbiosis, &cfg).unwrap();
        assert!(dc.fixed_quantity_gain() < 0.0);
        let s = scenario(6.0);
        let dc = deviation_check(&s.market, &s.tech, Profile::AllSymbiosis, &cfg).unwrap();
        assert!(dc.fixed_quantity_gain() > 0.0);
    }

    #[test]
    fn reoptimizing_exit_from_symbiosis_can_pay_below_cutoff_star() {
        // p_symb = 11/3 < d g = 5, so a firm dropping symbiosis shuts down
        // and earns 0, while staying earns 16/9 - c_g. For c_g = 2 < 8/3 the
        // exit is profitable even though the fixed-quantity check says stay.
        let cfg = OracleConfig::default();
        let s = scenario(2.0);
        let dc = deviation_check(&s.market, &s.tech, Profile::AllSymbiosis, &cfg).unwrap();
        assert_eq!(dc.reoptimized_quantity, 0.0);
        assert!(dc.reoptimized_gain() > 0.0);
        assert!(dc.fixed_quantity_gain() < 0.0);
    }
}
