use serde::{Deserialize, Serialize};

/// One benchmark observation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub size: usize,
    pub trial: usize,
    pub seed: u64,
    pub queries: u64,
    pub steps: u64,
    pub success: bool,
    /// Wall time in milliseconds; informational only.
    pub ms: f64,
}

/// Field order of both output formats.
pub const CSV_HEADER: &str = "experiment,size,trial,seed,queries,steps,success,ms";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial, mixed from the master seed, size and trial index.
pub fn trial_seed(master: u64, size: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ size as u64) ^ trial as u64)
}
