use serde::{Deserialize, Serialize};

use crate::adoption::{classify_equilibria, deviation_profit_from_benchmark, AdoptionAnalysis};
use crate::equilibrium::{benchmark_equilibrium, symbiosis_equilibrium, Equilibrium};
use crate::params::{MarketParams, RawScenario, Scenario, SymbiosisTech};
use crate::primitives::{consumer_surplus, profit_at, total_pollution};

use super::deviation::{deviation_check, Profile};
use super::fixed_point::{fixed_point_equilibrium, OracleEquilibrium};
use super::{OracleConfig, OracleError};

/// Relative tolerance for every numeric comparison.
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// Closed-form results under test. Built by [`closed_forms`]; tests may
/// corrupt a field to make sure the verifier notices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForms {
    pub benchmark: Equilibrium,
    pub symbiosis: Equilibrium,
    pub adoption: AdoptionAnalysis,
    pub deviation_profit_from_benchmark: f64,
}

pub fn closed_forms(m: &MarketParams, t: &SymbiosisTech) -> ClosedForms {
    ClosedForms {
        benchmark: benchmark_equilibrium(m),
        symbiosis: symbiosis_equilibrium(m, t),
        adoption: classify_equilibria(m, t),
        deviation_profit_from_benchmark: deviation_profit_from_benchmark(m, t),
    }
}

/// One comparison. For flag checks `observed`/`expected` are 0 or 1 and
/// `abs_err` holds the oracle's deviation gain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub expected: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
}

impl Check {
    fn numeric(name: &str, observed: f64, expected: f64, scale: f64) -> Self {
        let abs_err = (observed - expected).abs();
        let rel_err = if scale > 0.0 { abs_err / scale } else { abs_err };
        Check {
            name: name.to_string(),
            passed: rel_err <= CHECK_TOLERANCE,
            observed,
            expected,
            abs_err,
            rel_err,
            tolerance: CHECK_TOLERANCE,
        }
    }

    fn relative(name: &str, observed: f64, expected: f64) -> Self {
        Self::numeric(name, observed, expected, observed.abs().max(expected.abs()))
    }

    /// Equilibrium flag from the closed forms against the sign of the
    /// oracle's deviation gain. Gains within tolerance of zero are ties and
    /// agree with either flag.
    fn flag(name: &str, closed_is_equilibrium: bool, oracle_gain: f64, scale: f64) -> Self {
        let tie = oracle_gain.abs() <= CHECK_TOLERANCE * scale;
        let oracle_is_equilibrium = oracle_gain <= 0.0;
        Check {
            name: name.to_string(),
            passed: tie || oracle_is_equilibrium == closed_is_equilibrium,
            observed: f64::from(u8::from(oracle_is_equilibrium)),
            expected: f64::from(u8::from(closed_is_equilibrium)),
            abs_err: oracle_gain,
            rel_err: if scale > 0.0 {
                oracle_gain.abs() / scale
            } else {
                oracle_gain.abs()
            },
            tolerance: CHECK_TOLERANCE,
        }
    }
}

/// One scenario's verification outcome; serialized as one JSON line in
/// campaign logs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub scenario: RawScenario,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Set when the oracle itself failed; `checks` then holds whatever ran.
    pub error: Option<String>,
}

impl VerificationRecord {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn equilibrium_checks(
    prefix: &str,
    m: &MarketParams,
    t: &SymbiosisTech,
    oracle: &OracleEquilibrium,
    closed: &Equilibrium,
    checks: &mut Vec<Check>,
) {
    let n = m.n();
    let total = n * oracle.q;
    let own = profit_at(oracle.q, oracle.p, m, t, oracle.regime);
    let cs = consumer_surplus(m, total, oracle.p);
    let poll = total_pollution(m, t, oracle.regime, total);
    let gross = own + closed.adoption_cost;

    checks.push(Check::relative(&format!("{prefix}.q"), oracle.q, closed.q));
    // the price can cross zero; errors in it are measured against the
    // demand intercept, the natural price scale
    let p_scale = oracle.p.abs().max(closed.p.abs()).max(m.a());
    checks.push(Check::numeric(&format!("{prefix}.p"), oracle.p, closed.p, p_scale));
    // net profit may sit near zero; measure against the gross scale
    let profit_scale = gross.abs().max(closed.gross_profit().abs()) + closed.adoption_cost;
    checks.push(Check::numeric(
        &format!("{prefix}.profit"),
        own,
        closed.profit,
        profit_scale,
    ));
    checks.push(Check::relative(&format!("{prefix}.cs"), cs, closed.cs));
    let ts_scale = n * profit_scale + cs.abs().max(closed.cs.abs());
    checks.push(Check::numeric(
        &format!("{prefix}.ts"),
        n * own + cs,
        closed.ts,
        ts_scale,
    ));
    // symbiosis pollution vanishes when reuse exactly offsets residual
    // pollution; measure against the untreated waste instead
    let poll_scale = poll.abs().max(closed.poll.abs()).max(n * m.g() * closed.q);
    checks.push(Check::numeric(&format!("{prefix}.poll"), poll, closed.poll, poll_scale));
}

fn run(
    m: &MarketParams,
    t: &SymbiosisTech,
    cfg: &OracleConfig,
    closed: &ClosedForms,
    checks: &mut Vec<Check>,
) -> Result<(), OracleError> {
    let bench = fixed_point_equilibrium(m, None, cfg)?;
    equilibrium_checks("benchmark", m, t, &bench, &closed.benchmark, checks);
    let symb = fixed_point_equilibrium(m, Some(t), cfg)?;
    equilibrium_checks("symbiosis", m, t, &symb, &closed.symbiosis, checks);

    let from_bench = deviation_check(m, t, Profile::AllBenchmark, cfg)?;
    let scale = from_bench.profile_profit.abs() + from_bench.fixed_quantity_profit.abs() + t.c_g();
    checks.push(Check::flag(
        "adoption.none_adopt_is_equilibrium",
        closed.adoption.none_adopt_is_equilibrium,
        from_bench.fixed_quantity_gain(),
        scale,
    ));
    // re-optimizing can only improve on the fixed-quantity deviation
    let shortfall = (closed.deviation_profit_from_benchmark - from_bench.reoptimized_profit).max(0.0);
    checks.push(Check {
        name: "adoption.reoptimized_deviation_bound".to_string(),
        passed: shortfall <= CHECK_TOLERANCE * scale,
        observed: from_bench.reoptimized_profit,
        expected: closed.deviation_profit_from_benchmark,
        abs_err: shortfall,
        rel_err: shortfall / scale,
        tolerance: CHECK_TOLERANCE,
    });

    let from_symb = deviation_check(m, t, Profile::AllSymbiosis, cfg)?;
    let scale = from_symb.profile_profit.abs() + from_symb.fixed_quantity_profit.abs() + t.c_g();
    checks.push(Check::flag(
        "adoption.all_adopt_is_equilibrium",
        closed.adoption.all_adopt_is_equilibrium,
        from_symb.fixed_quantity_gain(),
        scale,
    ));
    Ok(())
}

/// Compares the oracle against caller-supplied closed-form results.
pub fn verify_against(
    m: &MarketParams,
    t: &SymbiosisTech,
    cfg: &OracleConfig,
    closed: &ClosedForms,
) -> VerificationRecord {
    let mut checks = Vec::new();
    let error = run(m, t, cfg, closed, &mut checks).err().map(|e| e.to_string());
    VerificationRecord {
        scenario: Scenario::new(*m, *t).to_raw(),
        passed: error.is_none() && checks.iter().all(|c| c.passed),
        checks,
        error,
    }
}

/// Runs both fixed points and both deviation checks and compares them with
/// the closed-form modules.
pub fn verify_scenario(m: &MarketParams, t: &SymbiosisTech, cfg: &OracleConfig) -> VerificationRecord {
    verify_against(m, t, cfg, &closed_forms(m, t))
}
