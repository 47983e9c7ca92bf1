use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sampling::draw_scenario;
use crate::Scenario;

use super::verify::{verify_scenario, VerificationRecord};
use super::OracleConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub seed: u64,
    pub draws: usize,
    pub passed: usize,
    /// In draw order.
    pub records: Vec<VerificationRecord>,
}

impl CampaignSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.draws
    }
}

/// The scenario verified as draw `index` of a campaign seeded with `seed`.
/// Every draw has its own ChaCha stream, so results do not depend on
/// scheduling.
pub fn campaign_draw(seed: u64, index: usize) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    draw_scenario(&mut rng)
}

/// Verifies `draws` random scenarios in parallel.
pub fn run_campaign(draws: usize, seed: u64, cfg: &OracleConfig) -> CampaignSummary {
    let records: Vec<VerificationRecord> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let s = campaign_draw(seed, i);
            verify_scenario(&s.market, &s.tech, cfg)
        })
        .collect();
    let passed = records.iter().filter(|r| r.passed).count();
    CampaignSummary {
        seed,
        draws,
        passed,
        records,
    }
}
