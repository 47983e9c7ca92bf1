//! Exogenous model parameters and their validation.
//!
//! Raw values arrive as plain `f64`s (from JSON files, CLI flags or sweep
//! grids) and are turned into [`MarketParams`] / [`SymbiosisTech`] only after
//! every standing assumption of the model has been checked. Once built, the
//! validated types are immutable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be finite (got {value})")]
    NonFiniteParameter { name: &'static str, value: f64 },
    #[error("{name} must be positive (got {value})")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative (got {value})")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("n must be an integer firm count (got {0})")]
    NonIntegerFirmCount(f64),
    #[error("g must lie in the open interval (0, 1) (got {0})")]
    PollutionShareOutOfRange(f64),
    #[error("market is not viable: a - d*g must be positive (got {margin})")]
    MarketViability { margin: f64 },
    #[error("alpha must lie in the open interval (0, 1) (got {0})")]
    AlphaOutOfRange(f64),
    #[error("k must be below 1 (got {0})")]
    KOutOfRange(f64),
    #[error("p_g must be nonnegative (got {0})")]
    NegativePrice(f64),
    #[error("c_g must be nonnegative (got {0})")]
    NegativeCost(f64),
}

impl ParamError {
    /// Name of the violated invariant, stable across releases.
    pub fn invariant(&self) -> &'static str {
        match self {
            ParamError::NonFiniteParameter { .. } => "NonFiniteParameter",
            ParamError::NonPositiveParameter { .. } => "NonPositiveParameter",
            ParamError::NegativeParameter { .. } => "NegativeParameter",
            ParamError::NonIntegerFirmCount(_) => "NonIntegerFirmCount",
            ParamError::PollutionShareOutOfRange(_) => "PollutionShareOutOfRange",
            ParamError::MarketViability { .. } => "MarketViability",
            ParamError::AlphaOutOfRange(_) => "AlphaOutOfRange",
            ParamError::KOutOfRange(_) => "KOutOfRange",
            ParamError::NegativePrice(_) => "NegativePrice",
            ParamError::NegativeCost(_) => "NegativeCost",
        }
    }
}

/// Names of the ten scalar inputs of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "n")]
    N,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "k")]
    K,
    #[serde(rename = "p_g")]
    PG,
    #[serde(rename = "c_g")]
    CG,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::A,
        Param::B,
        Param::C,
        Param::N,
        Param::D,
        Param::G,
        Param::Alpha,
        Param::K,
        Param::PG,
        Param::CG,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::B => "b",
            Param::C => "c",
            Param::N => "n",
            Param::D => "d",
            Param::G => "g",
            Param::Alpha => "alpha",
            Param::K => "k",
            Param::PG => "p_g",
            Param::CG => "c_g",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown parameter `{0}` (expected one of a, b, c, n, d, g, alpha, k, p_g, c_g)")]
pub struct UnknownParam(pub String);

impl FromStr for Param {
    type Err = UnknownParam;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Param::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownParam(s.to_string()))
    }
}

/// Unvalidated market inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMarket {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: f64,
    pub d: f64,
    pub g: f64,
}

/// Unvalidated symbiosis-technology inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTech {
    pub alpha: f64,
    pub k: f64,
    pub p_g: f64,
    pub c_g: f64,
}

/// Flat key-value form of a full scenario; this is the on-disk schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: f64,
    pub d: f64,
    pub g: f64,
    pub alpha: f64,
    pub k: f64,
    pub p_g: f64,
    pub c_g: f64,
}

impl RawScenario {
    pub fn market(&self) -> RawMarket {
        RawMarket {
            a: self.a,
            b: self.b,
            c: self.c,
            n: self.n,
            d: self.d,
            g: self.g,
        }
    }

    pub fn tech(&self) -> RawTech {
        RawTech {
            alpha: self.alpha,
            k: self.k,
            p_g: self.p_g,
            c_g: self.c_g,
        }
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::A => self.a,
            Param::B => self.b,
            Param::C => self.c,
            Param::N => self.n,
            Param::D => self.d,
            Param::G => self.g,
            Param::Alpha => self.alpha,
            Param::K => self.k,
            Param::PG => self.p_g,
            Param::CG => self.c_g,
        }
    }

    pub fn set(&mut self, param: Param, value: f64) {
        let slot = match param {
            Param::A => &mut self.a,
            Param::B => &mut self.b,
            Param::C => &mut self.c,
            Param::N => &mut self.n,
            Param::D => &mut self.d,
            Param::G => &mut self.g,
            Param::Alpha => &mut self.alpha,
            Param::K => &mut self.k,
            Param::PG => &mut self.p_g,
            Param::CG => &mut self.c_g,
        };
        *slot = value;
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ParamError::NonFiniteParameter { name, value })
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(ParamError::NonPositiveParameter { name, value })
    }
}

/// Demand, cost, tax and pollution parameters of the product market.
///
/// Demand is `p = a - b Q`, each firm's production cost is `c q^2`, pollution
/// is `g` per unit of output and is fined at rate `d`. `n` is an integer firm
/// count but is stored as a real because it enters every formula as one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMarket", into = "RawMarket")]
pub struct MarketParams {
    a: f64,
    b: f64,
    c: f64,
    n: f64,
    d: f64,
    g: f64,
}

impl MarketParams {
    pub fn new(a: f64, b: f64, c: f64, n: f64, d: f64, g: f64) -> Result<Self, ParamError> {
        validate_market(&RawMarket { a, b, c, n, d, g })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// `a - d g`, positive for every valid market.
    pub fn viability_margin(&self) -> f64 {
        self.a - self.d * self.g
    }

    /// `2c + b n`, the common denominator of every equilibrium expression.
    pub fn denominator(&self) -> f64 {
        2.0 * self.c + self.b * self.n
    }

    /// Copy with a non-integer firm count `n >= 1`.
    ///
    /// Only meant for comparative statics in `n`, where the count is treated
    /// as a continuous variable.
    pub fn with_relaxed_firm_count(&self, n: f64) -> Result<Self, ParamError> {
        let n = finite("n", n)?;
        if n < 1.0 {
            return Err(ParamError::NonPositiveParameter { name: "n", value: n });
        }
        Ok(Self { n, ..*self })
    }

    pub fn to_raw(&self) -> RawMarket {
        RawMarket {
            a: self.a,
            b: self.b,
            c: self.c,
            n: self.n,
            d: self.d,
            g: self.g,
        }
    }
}

impl TryFrom<RawMarket> for MarketParams {
    type Error = ParamError;

    fn try_from(raw: RawMarket) -> Result<Self, Self::Error> {
        validate_market(&raw)
    }
}

impl From<MarketParams> for RawMarket {
    fn from(m: MarketParams) -> Self {
        m.to_raw()
    }
}

/// Validates the six market inputs, reporting the first violated invariant.
pub fn validate_market(raw: &RawMarket) -> Result<MarketParams, ParamError> {
    let a = finite("a", raw.a)?;
    let b = finite("b", raw.b)?;
    let c = finite("c", raw.c)?;
    let n = finite("n", raw.n)?;
    let d = finite("d", raw.d)?;
    let g = finite("g", raw.g)?;

    positive("a", a)?;
    positive("b", b)?;
    positive("c", c)?;
    if n < 1.0 {
        return Err(ParamError::NonPositiveParameter { name: "n", value: n });
    }
    if n.fract() != 0.0 {
        return Err(ParamError::NonIntegerFirmCount(n));
    }
    if d < 0.0 {
        return Err(ParamError::NegativeParameter { name: "d", value: d });
    }
    if !(g > 0.0 && g < 1.0) {
        return Err(ParamError::PollutionShareOutOfRange(g));
    }
    let margin = a - d * g;
    if margin <= 0.0 {
        return Err(ParamError::MarketViability { margin });
    }
    Ok(MarketParams { a, b, c, n, d, g })
}

/// Industrial-symbiosis technology: reuse share `alpha`, emission share of
/// the reuse process `k`, byproduct price `p_g` and fixed adoption cost `c_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTech", into = "RawTech")]
pub struct SymbiosisTech {
    alpha: f64,
    k: f64,
    p_g: f64,
    c_g: f64,
}

impl SymbiosisTech {
    pub fn new(alpha: f64, k: f64, p_g: f64, c_g: f64) -> Result<Self, ParamError> {
        validate_tech(&RawTech { alpha, k, p_g, c_g })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p_g(&self) -> f64 {
        self.p_g
    }

    pub fn c_g(&self) -> f64 {
        self.c_g
    }

    /// Net pollution factor `alpha k + 1 - alpha` applied to output once the
    /// technology is adopted. Negative when `k < -(1 - alpha) / alpha`.
    pub fn pollution_factor(&self) -> f64 {
        self.alpha * self.k + 1.0 - self.alpha
    }

    pub fn to_raw(&self) -> RawTech {
        RawTech {
            alpha: self.alpha,
            k: self.k,
            p_g: self.p_g,
            c_g: self.c_g,
        }
    }
}

impl TryFrom<RawTech> for SymbiosisTech {
    type Error = ParamError;

    fn try_from(raw: RawTech) -> Result<Self, Self::Error> {
        validate_tech(&raw)
    }
}

impl From<SymbiosisTech> for RawTech {
    fn from(t: SymbiosisTech) -> Self {
        t.to_raw()
    }
}

pub fn validate_tech(raw: &RawTech) -> Result<SymbiosisTech, ParamError> {
    let alpha = finite("alpha", raw.alpha)?;
    let k = finite("k", raw.k)?;
    let p_g = finite("p_g", raw.p_g)?;
    let c_g = finite("c_g", raw.c_g)?;

    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ParamError::AlphaOutOfRange(alpha));
    }
    // k is unbounded below
    if k >= 1.0 {
        return Err(ParamError::KOutOfRange(k));
    }
    if p_g < 0.0 {
        return Err(ParamError::NegativePrice(p_g));
    }
    if c_g < 0.0 {
        return Err(ParamError::NegativeCost(c_g));
    }
    Ok(SymbiosisTech { alpha, k, p_g, c_g })
}

/// A market together with the symbiosis technology available to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario", into = "RawScenario")]
pub struct Scenario {
    pub market: MarketParams,
    pub tech: SymbiosisTech,
}

impl Scenario {
    pub fn new(market: MarketParams, tech: SymbiosisTech) -> Self {
        Self { market, tech }
    }

    /// The scenario used throughout the documentation and tests:
    /// `a=9, b=1, c=1, n=4, d=10, g=0.5, alpha=0.5, k=0, p_g=6, c_g=0.1`.
    pub fn reference() -> Self {
        Self::from_raw(&RawScenario {
            a: 9.0,
            b: 1.0,
            c: 1.0,
            n: 4.0,
            d: 10.0,
            g: 0.5,
            alpha: 0.5,
            k: 0.0,
            p_g: 6.0,
            c_g: 0.1,
        })
        .expect("reference scenario is valid")
    }

    pub fn from_raw(raw: &RawScenario) -> Result<Self, ParamError> {
        Ok(Self {
            market: validate_market(&raw.market())?,
            tech: validate_tech(&raw.tech())?,
        })
    }

    pub fn to_raw(&self) -> RawScenario {
        let m = self.market;
        let t = self.tech;
        RawScenario {
            a: m.a,
            b: m.b,
            c: m.c,
            n: m.n,
            d: m.d,
            g: m.g,
            alpha: t.alpha,
            k: t.k,
            p_g: t.p_g,
            c_g: t.c_g,
        }
    }

    pub fn get(&self, param: Param) -> f64 {
        self.to_raw().get(param)
    }

    /// Copy with one parameter replaced, re-validated.
    pub fn with_param(&self, param: Param, value: f64) -> Result<Self, ParamError> {
        let mut raw = self.to_raw();
        raw.set(param, value);
        Self::from_raw(&raw)
    }
}

impl TryFrom<RawScenario> for Scenario {
    type Error = ParamError;

    fn try_from(raw: RawScenario) -> Result<Self, Self::Error> {
        Self::from_raw(&raw)
    }
}

impl From<Scenario> for RawScenario {
    fn from(s: Scenario) -> Self {
        s.to_raw()
    }
}
