//! Seeded random draws of valid scenarios.

use rand::Rng;

use crate::adoption::cutoff_prime;
use crate::params::{MarketParams, SymbiosisTech};
use crate::Scenario;

/// Draws a valid scenario covering all three adoption regions: `c_g` is
/// uniform on `[0, 2 * cutoff_prime)`.
///
/// Ranges: `a` in [1, 20), `b` and `c` in [0.1, 5), `n` in 1..=50, `g` in
/// [0.05, 0.95), `d` up to 95% of the viability bound `a / g`, `alpha` in
/// [0.01, 0.99), `k` in [-2, 0.99), `p_g` in [0, 30).
pub fn draw_scenario<R: Rng + ?Sized>(rng: &mut R) -> Scenario {
    let a = rng.gen_range(1.0..20.0);
    let b = rng.gen_range(0.1..5.0);
    let c = rng.gen_range(0.1..5.0);
    let n = f64::from(rng.gen_range(1u32..=50));
    let g = rng.gen_range(0.05..0.95);
    let d = rng.gen_range(0.0..0.95) * a / g;
    let market = MarketParams::new(a, b, c, n, d, g).expect("draw respects a - d g > 0");

    let alpha = rng.gen_range(0.01..0.99);
    let k = rng.gen_range(-2.0..0.99);
    let p_g = rng.gen_range(0.0..30.0);
    let free = SymbiosisTech::new(alpha, k, p_g, 0.0).expect("draw respects tech bounds");
    let c_g = rng.gen_range(0.0..1.0) * 2.0 * cutoff_prime(&market, &free);
    let tech = SymbiosisTech::new(alpha, k, p_g, c_g).expect("c_g is nonnegative");
    Scenario::new(market, tech)
}
