//! Flat key/value rendering of results for the table and csv formats.

use symbiont::format::{fixed12, sig12};
use symbiont::{AdoptionAnalysis, ComparisonReport, Equilibrium};

enum Field {
    Num(f64),
    Flag(bool),
    Text(String),
}

#[derive(Default)]
pub struct Report {
    fields: Vec<(&'static str, Field)>,
}

impl Report {
    fn num(mut self, key: &'static str, x: f64) -> Self {
        self.fields.push((key, Field::Num(x)));
        self
    }

    fn flag(mut self, key: &'static str, b: bool) -> Self {
        self.fields.push((key, Field::Flag(b)));
        self
    }

    fn text(mut self, key: &'static str, s: impl Into<String>) -> Self {
        self.fields.push((key, Field::Text(s.into())));
        self
    }

    fn values(&self, num: fn(f64) -> String) -> impl Iterator<Item = (&'static str, String)> + '_ {
        self.fields.iter().map(move |(k, v)| {
            let s = match v {
                Field::Num(x) => num(*x),
                Field::Flag(b) => b.to_string(),
                Field::Text(t) => t.clone(),
            };
            (*k, s)
        })
    }

    /// One `key=value` line per field, reals with 12 decimals.
    pub fn table(&self) -> String {
        self.values(fixed12).map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Header line and one value line, reals with 12 significant digits.
    pub fn csv(&self) -> String {
        let (keys, vals): (Vec<_>, Vec<_>) = self.values(sig12).unzip();
        format!("{}\n{}\n", keys.join(","), vals.join(","))
    }
}

pub fn equilibrium(e: &Equilibrium) -> Report {
    Report::default()
        .text("regime", e.regime.as_str())
        .num("q", e.q)
        .num("p", e.p)
        .num("profit", e.profit)
        .num("cs", e.cs)
        .num("ts", e.ts)
        .num("poll", e.poll)
        .num("adoption_cost", e.adoption_cost)
}

fn poll_effect(c: &ComparisonReport) -> &'static str {
    if c.poll_at_boundary() {
        "boundary"
    } else if c.delta_poll > 0.0 {
        "increases"
    } else {
        "decreases"
    }
}

pub fn comparison(c: &ComparisonReport) -> Report {
    let rhs = match c.poll_sign_rhs {
        Some(x) => Field::Num(x),
        None => Field::Text("undefined".into()),
    };
    let mut r = Report::default()
        .num("delta_q", c.delta_q)
        .num("delta_p", c.delta_p)
        .num("delta_cs", c.delta_cs)
        .num("delta_pi", c.delta_pi)
        .num("delta_pi_net", c.delta_pi_net)
        .num("delta_ts", c.delta_ts)
        .num("delta_poll", c.delta_poll)
        .num("gain_per_unit", c.gain_per_unit)
        .flag("ts_sufficient_condition", c.ts_sufficient_condition)
        .num("poll_sign_lhs", c.poll_sign_lhs);
    r.fields.push(("poll_sign_rhs", rhs));
    r.flag("poll_increases", c.poll_increases)
        .text("poll_effect", poll_effect(c))
        .flag("degenerate_gain", c.degenerate_gain)
        .flag("negative_symbiosis_poll", c.negative_symbiosis_poll)
}

pub fn adoption(a: &AdoptionAnalysis, c_g: f64) -> Report {
    let profiles = match (a.none_adopt_is_equilibrium, a.all_adopt_is_equilibrium) {
        (true, true) => "both",
        (true, false) => "none_adopt",
        (false, true) => "all_adopt",
        (false, false) => "neither",
    };
    Report::default()
        .num("c_g", c_g)
        .num("cutoff_star", a.cutoff_star)
        .num("cutoff_prime", a.cutoff_prime)
        .num("deviation_gain_from_benchmark", a.deviation_gain_from_benchmark)
        .flag("none_adopt_is_equilibrium", a.none_adopt_is_equilibrium)
        .flag("all_adopt_is_equilibrium", a.all_adopt_is_equilibrium)
        .text("equilibria", profiles)
}
