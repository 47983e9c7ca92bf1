use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde_json::{Map, Value};
use symbiont::{Param, RawScenario, Scenario};

use crate::error::CliError;

/// Scenario source. Values given as flags take precedence over the file, and
/// the file takes precedence over `--reference`.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// JSON file with the keys a, b, c, n, d, g, alpha, k, p_g, c_g
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Start from the built-in reference scenario
    #[arg(long)]
    pub reference: bool,
    /// Demand intercept
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Demand slope
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Quadratic cost coefficient
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Number of firms
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    /// Pollution fine per unit of waste
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    /// Waste generated per unit of output
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Share of waste turned into byproduct
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Residual pollution of reused waste
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Byproduct price
    #[arg(long = "p-g", visible_alias = "p_g", allow_negative_numbers = true)]
    pub p_g: Option<f64>,
    /// Fixed adoption cost
    #[arg(long = "c-g", visible_alias = "c_g", allow_negative_numbers = true)]
    pub c_g: Option<f64>,
}

impl ScenarioArgs {
    fn overrides(&self) -> [(Param, Option<f64>); 10] {
        [
            (Param::A, self.a),
            (Param::B, self.b),
            (Param::C, self.c),
            (Param::N, self.n),
            (Param::D, self.d),
            (Param::G, self.g),
            (Param::Alpha, self.alpha),
            (Param::K, self.k),
            (Param::PG, self.p_g),
            (Param::CG, self.c_g),
        ]
    }

    pub fn load(&self) -> Result<Scenario, CliError> {
        let mut slots: Vec<(Param, Option<f64>)> = Param::ALL.iter().map(|&p| (p, None)).collect();
        let mut put = |param: Param, value: f64| {
            if let Some(slot) = slots.iter_mut().find(|(p, _)| *p == param) {
                slot.1 = Some(value);
            }
        };

        if self.reference {
            let raw = Scenario::reference().to_raw();
            for p in Param::ALL {
                put(p, raw.get(p));
            }
        }
        if let Some(path) = &self.scenario {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            for (param, value) in parse_file(&text, path)? {
                put(param, value);
            }
        }
        for (param, value) in self.overrides() {
            if let Some(v) = value {
                put(param, v);
            }
        }

        let mut raw = RawScenario {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            n: 0.0,
            d: 0.0,
            g: 0.0,
            alpha: 0.0,
            k: 0.0,
            p_g: 0.0,
            c_g: 0.0,
        };
        for (param, value) in slots {
            let v = value.ok_or_else(|| CliError::Validation(format!("missing scenario key `{}`", param.as_str())))?;
            raw.set(param, v);
        }
        Scenario::from_raw(&raw).map_err(|e| CliError::Validation(format!("{}: {e}", e.invariant())))
    }
}

fn parse_file(text: &str, path: &Path) -> Result<Vec<(Param, f64)>, CliError> {
    let map: Map<String, Value> = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("{}: not a JSON object of numbers: {e}", path.display())))?;
    map.into_iter()
        .map(|(key, value)| {
            let param =
                Param::from_str(&key).map_err(|_| CliError::Validation(format!("unknown scenario key `{key}`")))?;
            let v = value
                .as_f64()
                .ok_or_else(|| CliError::Validation(format!("scenario key `{key}` must be a number")))?;
            Ok((param, v))
        })
        .collect()
}
