//! Security experiments, LPN oracles, completeness oracles and the systematic
//! prefix-attack demonstration.

pub mod experiments;
pub mod games;
pub mod insecure_demo;
pub mod lpn;
pub mod schemes;
pub mod stats;

pub use experiments::{run_named, NAMES};
pub use games::{
    run_ind_cca2, run_ind_cpa, run_otsu, trial_rng, BitFlip, Cca2Adversary, CpaAdversary, DecryptionOracle,
    ExperimentReport, OracleAnswer, OtsuAdversary, Pke,
};
pub use lpn::{lpn_query, LpnOracle};
pub use stats::{exact_tail, code_sizes};
