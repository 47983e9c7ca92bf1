//! Competitive market equilibrium with and without industrial symbiosis.
//!
//! `n` identical price-taking firms face linear demand `p = a - b Q`,
//! quadratic costs `c q^2` and a pollution fine `d` per unit of emissions
//! `g q`. Adopting industrial symbiosis lets a firm sell the share `alpha` of
//! its byproducts at `p_g`, escaping the fine on them, for a fixed cost
//! `c_g`; the reuse process itself emits a share `k`.
//!
//! The crate computes both equilibria in closed form ([`equilibrium`]),
//! decides which symmetric adoption profiles are equilibria ([`adoption`]),
//! compares the regimes ([`analysis`]), checks all of it against an
//! independent numeric best-response solver ([`oracle`]) and produces
//! parameter sweeps ([`sweep`]).

pub mod adoption;
pub mod analysis;
pub mod equilibrium;
pub mod format;
pub mod oracle;
pub mod params;
pub mod primitives;
pub mod sampling;
pub mod sweep;

pub use adoption::{classify_equilibria, AdoptionAnalysis};
pub use analysis::{compare, ComparisonReport};
pub use equilibrium::{benchmark_equilibrium, symbiosis_equilibrium, Equilibrium};
pub use params::{MarketParams, Param, ParamError, RawScenario, Scenario, SymbiosisTech};
pub use primitives::Regime;
