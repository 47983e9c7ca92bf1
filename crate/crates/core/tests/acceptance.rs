//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

// `!(x > 0.0)` is deliberate throughout: a NaN must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use symbiont::adoption::{cutoff_sensitivities, cutoff_star};
use symbiont::analysis::{delta_sensitivities, poll_sign_condition_sensitivities, reported_profit_gap_slope_in_d};
use symbiont::equilibrium::profitability_gain;
use symbiont::oracle::{
    campaign_draw, deviation_check, fixed_point_equilibrium, run_campaign, OracleConfig, Profile, CHECK_TOLERANCE,
};
use symbiont::primitives::total_pollution;
use symbiont::sweep::{export, run_sweep, ExportFormat, SweepSpec};
use symbiont::{
    benchmark_equilibrium, compare, symbiosis_equilibrium, MarketParams, Param, Regime, Scenario, SymbiosisTech,
};

const SEED: u64 = 7;
const DRAWS: usize = 1000;
const FD_TOLERANCE: f64 = 1e-6;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        passed,
        detail,
    }
}

fn draws() -> Vec<Scenario> {
    (0..DRAWS).map(|i| campaign_draw(SEED, i)).collect()
}

/// One-sided five-point difference; `h` may be negative to step downwards.
fn slope(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let v: Vec<f64> = (0..5).map(|i| f(x + f64::from(i) * h)).collect();
    (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
}

fn step(x: f64) -> f64 {
    1e-3 * x.abs().max(1e-2)
}

fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

fn with_market(m: &MarketParams, n: f64, d: f64, g: f64) -> MarketParams {
    MarketParams::new(m.a(), m.b(), m.c(), 1.0, d, g)
        .unwrap()
        .with_relaxed_firm_count(n)
        .unwrap()
}

fn with_tech(t: &SymbiosisTech, alpha: f64, k: f64, p_g: f64) -> SymbiosisTech {
    SymbiosisTech::new(alpha, k, p_g, t.c_g()).unwrap()
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let summary = run_campaign(DRAWS, SEED, &OracleConfig::default());
    let elapsed = start.elapsed();
    let names = ["benchmark.q", "benchmark.p", "symbiosis.q", "symbiosis.p"];
    let mut worst = 0.0_f64;
    let mut failures = 0;
    for r in &summary.records {
        if r.error.is_some() {
            failures += 1;
            continue;
        }
        for c in r.checks.iter().filter(|c| names.contains(&c.name.as_str())) {
            worst = worst.max(c.rel_err);
            failures += usize::from(!c.passed);
        }
    }
    let passed = failures == 0 && summary.draws >= 1000 && elapsed < Duration::from_secs(10);
    outcome(
        "1",
        "closed forms match the fixed-point oracle in q and p",
        passed,
        format!(
            "{} draws, {failures} failures, max rel err {worst:.2e} (tol {CHECK_TOLERANCE:.0e}), {:.2} s",
            summary.draws,
            elapsed.as_secs_f64()
        ),
    )
}

fn adoption_deviations(draws: &[Scenario]) -> Outcome {
    let cfg = OracleConfig::default();
    let (mut eligible, mut failures, mut reopt_exits) = (0, 0, 0);
    for s in draws {
        let (m, t) = (&s.market, &s.tech);
        if t.c_g() >= cutoff_star(m, t) {
            continue;
        }
        eligible += 1;
        let from_bench = deviation_check(m, t, Profile::AllBenchmark, &cfg).unwrap();
        let from_symb = deviation_check(m, t, Profile::AllSymbiosis, &cfg).unwrap();
        let scale = from_symb.profile_profit.abs() + from_symb.fixed_quantity_profit.abs() + t.c_g();
        let stays = from_symb.fixed_quantity_gain() <= CHECK_TOLERANCE * scale;
        if !(from_bench.reoptimized_gain() > 0.0 && stays) {
            failures += 1;
        }
        reopt_exits += usize::from(from_symb.reoptimized_gain() > CHECK_TOLERANCE * scale);
    }
    outcome(
        "2a",
        "below cutoff_star adoption pays and all-adopt is stable",
        failures == 0 && eligible > 0,
        format!(
            "{eligible} draws below cutoff_star, {failures} failures; all-adopt stability uses fixed-quantity \
             deviations ({reopt_exits} draws would admit a re-optimizing exit)"
        ),
    )
}

fn cutoff_order(draws: &[Scenario]) -> Outcome {
    let bad = draws
        .iter()
        .filter(|s| {
            let a = symbiont::classify_equilibria(&s.market, &s.tech);
            !(a.cutoff_star < a.cutoff_prime)
        })
        .count();
    outcome(
        "2b",
        "cutoff_star < cutoff_prime",
        bad == 0,
        format!("{} draws, {bad} failures", draws.len()),
    )
}

fn cutoff_slopes(draws: &[Scenario]) -> Outcome {
    let (mut worst, mut sign_failures, mut fd_failures) = (0.0_f64, 0, 0);
    for s in draws {
        let (m, t) = (&s.market, &s.tech);
        let an = cutoff_sensitivities(m, t);
        let fd = [
            slope(
                |x| cutoff_star(m, &with_tech(t, x, t.k(), t.p_g())),
                t.alpha(),
                step(t.alpha()),
            ),
            slope(
                |x| cutoff_star(m, &with_tech(t, t.alpha(), t.k(), x)),
                t.p_g(),
                step(t.p_g()),
            ),
            slope(|x| cutoff_star(&with_market(m, x, m.d(), m.g()), t), m.n(), step(m.n())),
        ];
        for (a, f) in [an.alpha, an.p_g, an.n].into_iter().zip(fd) {
            let r = rel_diff(a, f);
            worst = worst.max(r);
            fd_failures += usize::from(r > FD_TOLERANCE);
        }
        sign_failures += usize::from(!(an.alpha > 0.0 && an.p_g > 0.0 && an.n < 0.0));
    }
    outcome(
        "2c",
        "cutoff slopes match finite differences, signs (+, +, -) in (alpha, p_g, n)",
        worst <= FD_TOLERANCE && sign_failures == 0,
        format!("max rel diff {worst:.2e}, {fd_failures} fd failures, {sign_failures} sign failures"),
    )
}

fn gap_signs(draws: &[Scenario]) -> Outcome {
    let mut bad = 0;
    let mut eligible = 0;
    for s in draws.iter().filter(|s| profitability_gain(&s.market, &s.tech) > 0.0) {
        eligible += 1;
        let r = compare(&s.market, &s.tech);
        bad += usize::from(!(r.delta_q > 0.0 && r.delta_p > 0.0 && r.delta_cs > 0.0));
    }
    outcome(
        "3a",
        "symbiosis raises quantity, lowers price, raises consumer surplus",
        bad == 0 && eligible > 0,
        format!("{eligible} draws with G > 0, {bad} failures"),
    )
}

/// The draw with `p_g` raised so that `G c = 2 b n (a - d g)` and `c_g` set to
/// half of `cutoff_star`, or `None` when `p_g` would have to fall.
fn steered_into_condition(s: &Scenario) -> Option<Scenario> {
    let (m, t) = (&s.market, &s.tech);
    let target_gain = 2.0 * m.b() * m.n() * m.viability_margin() / m.c();
    let p_g = target_gain / (t.alpha() * m.g()) - m.d();
    if p_g < t.p_g() {
        return None;
    }
    let s = s.with_param(Param::PG, p_g).ok()?;
    let c_g = 0.5 * cutoff_star(&s.market, &s.tech);
    s.with_param(Param::CG, c_g).ok()
}

fn net_gaps(draws: &[Scenario]) -> Outcome {
    let steered: Vec<Scenario> = draws.iter().filter_map(steered_into_condition).collect();
    let (mut eligible, mut bad) = (0, 0);
    for s in draws.iter().chain(&steered) {
        let (m, t) = (&s.market, &s.tech);
        let r = compare(m, t);
        if t.c_g() < cutoff_star(m, t) && r.ts_sufficient_condition {
            eligible += 1;
            bad += usize::from(!(r.delta_pi_net > 0.0 && r.delta_ts > 0.0));
        }
    }
    outcome(
        "3b",
        "below cutoff_star with G c > b n (a - d g), net profit and total surplus rise",
        bad == 0 && eligible > 0,
        format!(
            "{eligible} eligible scenarios ({} random draws plus draws with p_g raised into the condition), {bad} failures",
            draws.len()
        ),
    )
}

fn profit_gap_slope_in_d(draws: &[Scenario]) -> Outcome {
    let (mut mismatches, mut nonpositive, mut worst) = (0, 0, 0.0_f64);
    let mut exact_agrees = 0;
    for s in draws {
        let (m, t) = (&s.market, &s.tech);
        let fd = slope(
            |x| compare(&with_market(m, m.n(), x, m.g()), t).delta_pi,
            m.d(),
            step(m.d()),
        );
        let printed = reported_profit_gap_slope_in_d(m, t);
        let r = rel_diff(printed, fd);
        worst = worst.max(r);
        mismatches += usize::from(r > FD_TOLERANCE);
        nonpositive += usize::from(!(printed > 0.0));
        let exact = delta_sensitivities(m, t).delta_pi.d;
        // the exact slope can vanish, so allow an absolute floor
        let floor = 1e-9 * compare(m, t).delta_pi / m.d().max(1.0);
        exact_agrees += usize::from((exact - fd).abs() <= FD_TOLERANCE * exact.abs().max(fd.abs()) + floor);
    }
    outcome(
        "3c",
        "d-slope of the profit gap equals 2c alpha g[(a-dg)+(d+p_g)(1-g)]/(2c+bn)^2, is positive, matches FD",
        mismatches == 0 && nonpositive == 0,
        format!(
            "{mismatches}/{} draws disagree with FD (max rel diff {worst:.2e}), {nonpositive} nonpositive; \
             the exact slope 2c alpha g[(a-dg)-(1-alpha)g(d+p_g)]/(2c+bn)^2 agrees with FD on {exact_agrees}/{}",
            draws.len(),
            draws.len()
        ),
    )
}

fn oracle_pollution_gap(m: &MarketParams, t: &SymbiosisTech) -> f64 {
    let cfg = OracleConfig::default();
    let b = fixed_point_equilibrium(m, None, &cfg).unwrap();
    let s = fixed_point_equilibrium(m, Some(t), &cfg).unwrap();
    let n = m.n();
    total_pollution(m, t, Regime::Symbiosis, n * s.q) - total_pollution(m, t, Regime::Benchmark, n * b.q)
}

fn poll_sign(draws: &[Scenario]) -> Outcome {
    let (mut eligible, mut bad) = (0, 0);
    for s in draws.iter().filter(|s| s.market.d() + s.tech.p_g() > 0.0) {
        eligible += 1;
        let (m, t) = (&s.market, &s.tech);
        let gap = symbiosis_equilibrium(m, t).poll - benchmark_equilibrium(m).poll;
        let margin = compare(m, t).poll_sign_margin().unwrap();
        bad += usize::from(sign(gap) != sign(margin));
    }
    outcome(
        "4a",
        "sign of the pollution gap equals sign of [1/(1-k) - alpha] - (a-dg)/(g(d+p_g))",
        bad == 0 && eligible > 0,
        format!("{eligible} draws with d + p_g > 0, {bad} failures"),
    )
}

fn poll_dirty_reuse(draws: &[Scenario]) -> Outcome {
    let (mut eligible, mut bad) = (0, 0);
    for s in draws.iter().filter(|s| profitability_gain(&s.market, &s.tech) > 0.0) {
        eligible += 1;
        let m = &s.market;
        let t = with_tech(&s.tech, s.tech.alpha(), 1.0 - 1e-6, s.tech.p_g());
        let gap = symbiosis_equilibrium(m, &t).poll - benchmark_equilibrium(m).poll;
        bad += usize::from(!(gap > 0.0));
    }
    outcome(
        "4b",
        "with k = 1 - 1e-6 symbiosis raises pollution",
        bad == 0 && eligible > 0,
        format!("{eligible} draws with G > 0, {bad} failures"),
    )
}

fn margin_slopes(draws: &[Scenario]) -> Outcome {
    let mut bad = 0;
    for s in draws {
        match poll_sign_condition_sensitivities(&s.market, &s.tech) {
            Ok(d) => bad += usize::from(!(d.g > 0.0 && d.d > 0.0 && d.p_g > 0.0 && d.k > 0.0 && d.alpha < 0.0)),
            Err(_) => bad += 1,
        }
    }
    outcome(
        "4c",
        "margin slopes have signs (+, +, +, +, -) in (g, d, p_g, k, alpha)",
        bad == 0,
        format!("{} draws, {bad} failures", draws.len()),
    )
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn figure_spec(name: &str) -> SweepSpec {
    let path = root().join("../../figures").join(format!("{name}.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Closed-form pollution gaps along a figure sweep, with the number of grid
/// points where the oracle disagrees on the sign.
struct FigureRun {
    grid: Vec<f64>,
    gaps: Vec<f64>,
    oracle_disagreements: usize,
    golden_match: bool,
    elapsed: Duration,
}

fn run_figure(name: &str) -> FigureRun {
    let spec = figure_spec(name);
    let start = Instant::now();
    let result = run_sweep(&spec).unwrap();
    let elapsed = start.elapsed();
    let grid = result.column(spec.axis.as_str()).unwrap();
    let gaps = result.column("delta_poll").unwrap();

    let mut oracle_disagreements = 0;
    for (s, &gap) in spec.scenarios().unwrap().iter().zip(&gaps) {
        let (m, t) = (&s.market, &s.tech);
        let scale = m.n() * m.g() * benchmark_equilibrium(m).q;
        let oracle = oracle_pollution_gap(m, t);
        let agrees = if gap.abs() <= CHECK_TOLERANCE * scale {
            oracle.abs() <= CHECK_TOLERANCE * scale
        } else {
            sign(oracle) == sign(gap)
        };
        oracle_disagreements += usize::from(!agrees);
    }

    let golden = fs::read(root().join(format!("tests/golden/{name}.csv"))).unwrap();
    FigureRun {
        grid,
        gaps,
        oracle_disagreements,
        golden_match: export(&result, ExportFormat::Csv) == golden,
        elapsed,
    }
}

fn figure_uniform(id: &'static str, title: &'static str, name: &str, positive: bool) -> (Outcome, Duration) {
    let run = run_figure(name);
    let count = run
        .gaps
        .iter()
        .filter(|&&x| if positive { x > 0.0 } else { x < 0.0 })
        .count();
    let passed = count == run.grid.len() && run.oracle_disagreements == 0 && run.golden_match;
    let o = outcome(
        id,
        title,
        passed,
        format!(
            "{count}/{} grid points, oracle sign disagreements {}, golden csv {}",
            run.grid.len(),
            run.oracle_disagreements,
            if run.golden_match { "identical" } else { "differs" }
        ),
    );
    (o, run.elapsed)
}

fn figure_crossing() -> (Outcome, Duration) {
    let run = run_figure("fig4");
    let nonzero: Vec<(f64, f64)> = run
        .grid
        .iter()
        .copied()
        .zip(run.gaps.iter().copied())
        .filter(|&(_, y)| y != 0.0)
        .collect();
    let flips: Vec<(f64, f64)> = nonzero
        .windows(2)
        .filter(|w| sign(w[0].1) != sign(w[1].1))
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let grid_step = run.grid[1] - run.grid[0];
    let located = match flips.as_slice() {
        [(lo, hi)] => {
            let zero = run.grid.iter().zip(&run.gaps).find(|(_, &y)| y == 0.0).map(|(&x, _)| x);
            let at = zero.unwrap_or(0.5 * (lo + hi));
            Some((*lo, *hi, at))
        }
        _ => None,
    };
    let brackets = located.is_some_and(|(lo, hi, at)| lo <= 6.0 && 6.0 <= hi && (at - 6.0).abs() <= grid_step);
    let passed = flips.len() == 1 && brackets && run.oracle_disagreements == 0 && run.golden_match;
    let where_ = located.map_or("none".to_string(), |(lo, hi, at)| format!("[{lo}, {hi}], at {at}"));
    let o = outcome(
        "5c",
        "figure sweep alpha = 0.5: one sign change at p_g = 6",
        passed,
        format!(
            "{} sign change(s), bracket {where_}, oracle sign disagreements {}, golden csv {}",
            flips.len(),
            run.oracle_disagreements,
            if run.golden_match { "identical" } else { "differs" }
        ),
    );
    (o, run.elapsed)
}

fn strictly_decreasing_single_crossing(values: &[f64]) -> bool {
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    let changes = values
        .windows(2)
        .filter(|w| sign(w[0]) != sign(w[1]) && w[0] != 0.0 && w[1] != 0.0)
        .count();
    decreasing && changes <= 1
}

fn firm_count_pattern(draws: &[Scenario]) -> Outcome {
    let spec = figure_spec("fig1");
    let result = run_sweep(&spec).unwrap();
    let sym = result.column("profit_symbiosis").unwrap();
    let bench = result.column("profit_benchmark").unwrap();
    let gap: Vec<f64> = sym.iter().zip(&bench).map(|(s, b)| s - b).collect();
    let at_one = spec.base.with_param(Param::N, 1.0).unwrap();
    let c_g = spec.base.tech.c_g();
    let in_range = c_g > 0.0 && c_g < cutoff_star(&at_one.market, &at_one.tech);
    let figure_ok = in_range && strictly_decreasing_single_crossing(&gap);
    let crossing = gap.windows(2).position(|w| w[0] > 0.0 && w[1] <= 0.0).map(|i| i + 1);

    let mut bad = 0;
    for s in draws {
        let base = s.with_param(Param::N, 1.0).unwrap();
        let c_g = 0.5 * cutoff_star(&base.market, &base.tech);
        let base = base.with_param(Param::CG, c_g).unwrap();
        let gaps: Vec<f64> = (1..=30)
            .map(|n| {
                let s = base.with_param(Param::N, f64::from(n)).unwrap();
                symbiosis_equilibrium(&s.market, &s.tech).profit - benchmark_equilibrium(&s.market).profit
            })
            .collect();
        bad += usize::from(!strictly_decreasing_single_crossing(&gaps));
    }
    outcome(
        "6",
        "per-firm profit gap strictly decreasing in n with at most one sign change",
        figure_ok && bad == 0,
        format!(
            "figure sweep c_g = {c_g} in (0, cutoff_star(n=1)): {}, last positive at n = {}; {} random bases, {bad} failures",
            if figure_ok { "ok" } else { "violated" },
            crossing.map_or("-".to_string(), |n| n.to_string()),
            draws.len()
        ),
    )
}

fn consumer_surplus_bound(draws: &[Scenario]) -> Outcome {
    let (mut eligible, mut bad) = (0, 0);
    for s in draws {
        let (m, t) = (&s.market, &s.tech);
        let g = profitability_gain(m, t);
        if !(g > 0.0 && m.viability_margin() > 0.0) {
            continue;
        }
        eligible += 1;
        let lower = m.b() * (m.n() * g).powi(2) / (2.0 * m.denominator().powi(2));
        bad += usize::from(!(compare(m, t).delta_cs > lower));
    }
    outcome(
        "7",
        "consumer surplus gap exceeds b(nG)^2/(2(2c+bn)^2)",
        bad == 0 && eligible > 0,
        format!("{eligible} draws, {bad} failures"),
    )
}

fn main() -> ExitCode {
    let draws = draws();
    let mut outcomes = vec![
        oracle_equivalence(),
        adoption_deviations(&draws),
        cutoff_order(&draws),
        cutoff_slopes(&draws),
        gap_signs(&draws),
        net_gaps(&draws),
        profit_gap_slope_in_d(&draws),
        poll_sign(&draws),
        poll_dirty_reuse(&draws),
        margin_slopes(&draws),
    ];

    let (low, t1) = figure_uniform(
        "5a",
        "figure sweep alpha = 0.01: pollution gap positive everywhere",
        "fig2",
        true,
    );
    let (high, t2) = figure_uniform(
        "5b",
        "figure sweep alpha = 0.9: pollution gap negative everywhere",
        "fig3",
        false,
    );
    let (mid, t3) = figure_crossing();
    let total = t1 + t2 + t3;
    outcomes.extend([low, high, mid]);
    outcomes.push(outcome(
        "5d",
        "figure sweeps run in under 1 s",
        total < Duration::from_secs(1),
        format!("{:.3} s for three 401-point sweeps", total.as_secs_f64()),
    ));
    outcomes.push(firm_count_pattern(&draws));
    outcomes.push(consumer_surplus_bound(&draws));

    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {:<3} {}: {}", o.id, o.title, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
