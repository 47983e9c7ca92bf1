//! One-parameter sweeps over a base scenario, with CSV and JSON export.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adoption::classify_equilibria;
use crate::analysis::compare;
use crate::equilibrium::{benchmark_equilibrium, symbiosis_equilibrium};
use crate::format::sig12;
use crate::oracle::{verify_scenario, OracleConfig};
use crate::params::{Param, RawScenario, Scenario};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid grid point {index}: {reason}")]
    InvalidGridPoint { index: usize, reason: String },
    #[error("sweep requests no outputs")]
    NoOutputs,
    #[error("oracle verification failed at grid point {index}")]
    VerificationFailed { index: usize },
}

macro_rules! outputs {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// A column a sweep can emit. Flags are emitted as 1 or 0.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum Output {
            $(#[serde(rename = $name)] $variant,)+
        }

        impl Output {
            pub const ALL: &'static [Output] = &[$(Output::$variant,)+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(Output::$variant => $name,)+
                }
            }
        }
    };
}

outputs! {
    QBenchmark => "q_benchmark",
    PBenchmark => "p_benchmark",
    ProfitBenchmark => "profit_benchmark",
    CsBenchmark => "cs_benchmark",
    TsBenchmark => "ts_benchmark",
    PollBenchmark => "poll_benchmark",
    QSymbiosis => "q_symbiosis",
    PSymbiosis => "p_symbiosis",
    ProfitSymbiosis => "profit_symbiosis",
    CsSymbiosis => "cs_symbiosis",
    TsSymbiosis => "ts_symbiosis",
    PollSymbiosis => "poll_symbiosis",
    DeltaQ => "delta_q",
    DeltaP => "delta_p",
    DeltaCs => "delta_cs",
    DeltaPi => "delta_pi",
    DeltaPiNet => "delta_pi_net",
    DeltaTs => "delta_ts",
    DeltaPoll => "delta_poll",
    GainPerUnit => "gain_per_unit",
    CutoffStar => "cutoff_star",
    CutoffPrime => "cutoff_prime",
    PollIncreases => "poll_increases",
    TsSufficientCondition => "ts_sufficient_condition",
    NoneAdoptIsEquilibrium => "none_adopt_is_equilibrium",
    AllAdoptIsEquilibrium => "all_adopt_is_equilibrium",
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Output::ALL
            .iter()
            .copied()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| format!("unknown sweep output `{s}`"))
    }
}

/// Evaluates every requested output for one scenario.
pub fn evaluate(s: &Scenario, outputs: &[Output]) -> Vec<f64> {
    let (m, t) = (&s.market, &s.tech);
    let bench = benchmark_equilibrium(m);
    let symb = symbiosis_equilibrium(m, t);
    let cmp = compare(m, t);
    let adoption = classify_equilibria(m, t);
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    outputs
        .iter()
        .map(|o| match o {
            Output::QBenchmark => bench.q,
            Output::PBenchmark => bench.p,
            Output::ProfitBenchmark => bench.profit,
            Output::CsBenchmark => bench.cs,
            Output::TsBenchmark => bench.ts,
            Output::PollBenchmark => bench.poll,
            Output::QSymbiosis => symb.q,
            Output::PSymbiosis => symb.p,
            Output::ProfitSymbiosis => symb.profit,
            Output::CsSymbiosis => symb.cs,
            Output::TsSymbiosis => symb.ts,
            Output::PollSymbiosis => symb.poll,
            Output::DeltaQ => cmp.delta_q,
            Output::DeltaP => cmp.delta_p,
            Output::DeltaCs => cmp.delta_cs,
            Output::DeltaPi => cmp.delta_pi,
            Output::DeltaPiNet => cmp.delta_pi_net,
            Output::DeltaTs => cmp.delta_ts,
            Output::DeltaPoll => cmp.delta_poll,
            Output::GainPerUnit => cmp.gain_per_unit,
            Output::CutoffStar => adoption.cutoff_star,
            Output::CutoffPrime => adoption.cutoff_prime,
            Output::PollIncreases => flag(cmp.poll_increases),
            Output::TsSufficientCondition => flag(cmp.ts_sufficient_condition),
            Output::NoneAdoptIsEquilibrium => flag(adoption.none_adopt_is_equilibrium),
            Output::AllAdoptIsEquilibrium => flag(adoption.all_adopt_is_equilibrium),
        })
        .collect()
}

/// Grid as written in a sweep file: an explicit list or evenly spaced
/// points including both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Values(Vec<f64>),
    Linspace { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Values(v) => v.clone(),
            GridSpec::Linspace { start, stop, points } => match *points {
                0 => Vec::new(),
                1 => vec![*start],
                k => (0..k)
                    .map(|i| start + (stop - start) * i as f64 / (k - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axis: Param,
    pub grid: GridSpec,
    pub outputs: Vec<Output>,
    /// Cross-check every row against the numeric oracle.
    #[serde(default)]
    pub verify: bool,
}

impl SweepSpec {
    /// Builds the scenario of every grid point, rejecting the first bad one.
    pub fn scenarios(&self) -> Result<Vec<Scenario>, SweepError> {
        let grid = self.grid.values();
        if grid.is_empty() {
            return Err(SweepError::InvalidGridPoint {
                index: 0,
                reason: "empty grid".into(),
            });
        }
        if self.outputs.is_empty() {
            return Err(SweepError::NoOutputs);
        }
        grid.iter()
            .enumerate()
            .map(|(index, &x)| {
                if index > 0 && x <= grid[index - 1] {
                    return Err(SweepError::InvalidGridPoint {
                        index,
                        reason: "grid is not strictly increasing".into(),
                    });
                }
                self.base
                    .with_param(self.axis, x)
                    .map_err(|e| SweepError::InvalidGridPoint {
                        index,
                        reason: e.to_string(),
                    })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub base: RawScenario,
    pub axis: Param,
    pub generated_at: String,
    pub library_version: String,
    /// Rows checked against the oracle, when verification was requested.
    pub verified_rows: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Axis name followed by the output names.
    pub header: Vec<String>,
    /// Axis value followed by the outputs, in grid order.
    pub rows: Vec<Vec<f64>>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let scenarios = spec.scenarios()?;
    let grid = spec.grid.values();

    if spec.verify {
        let cfg = OracleConfig::default();
        let failed = scenarios
            .par_iter()
            .enumerate()
            .filter(|(_, s)| !verify_scenario(&s.market, &s.tech, &cfg).passed)
            .map(|(i, _)| i)
            .min();
        if let Some(index) = failed {
            return Err(SweepError::VerificationFailed { index });
        }
    }

    let rows = scenarios
        .par_iter()
        .zip(grid.par_iter())
        .map(|(s, &x)| {
            let mut row = Vec::with_capacity(spec.outputs.len() + 1);
            row.push(x);
            row.extend(evaluate(s, &spec.outputs));
            row
        })
        .collect();

    let header = std::iter::once(spec.axis.as_str().to_string())
        .chain(spec.outputs.iter().map(|o| o.as_str().to_string()))
        .collect();
    Ok(SweepResult {
        header,
        rows,
        metadata: SweepMetadata {
            base: spec.base.to_raw(),
            axis: spec.axis,
            generated_at: chrono::Utc::now().to_rfc3339(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            verified_rows: spec.verify.then_some(scenarios.len()),
        },
    })
}

/// Two-axis sweep as a sequence of single-axis sweeps, one per value of
/// `outer_axis`.
pub fn run_nested_sweep(
    spec: &SweepSpec,
    outer_axis: Param,
    outer_grid: &[f64],
) -> Result<Vec<(f64, SweepResult)>, SweepError> {
    outer_grid
        .iter()
        .enumerate()
        .map(|(index, &v)| {
            let base = spec
                .base
                .with_param(outer_axis, v)
                .map_err(|e| SweepError::InvalidGridPoint {
                    index,
                    reason: e.to_string(),
                })?;
            let inner = SweepSpec { base, ..spec.clone() };
            Ok((v, run_sweep(&inner)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

/// CSV (header plus one line per row, metadata omitted) or pretty JSON of the
/// whole result.
pub fn export(result: &SweepResult, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Csv => {
            let mut out = result.header.join(",");
            out.push('\n');
            for row in &result.rows {
                let line: Vec<String> = row.iter().map(|&x| sig12(x)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        ExportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(result).expect("sweep results are finite");
            out.push(b'\n');
            out
        }
    }
}
