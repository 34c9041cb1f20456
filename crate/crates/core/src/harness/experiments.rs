//! Named, seed-reproducible experiments.

use rand::Rng;

use super::games::{
    run_ind_cca2, run_ind_cpa, run_otsu, trial_rng, BitFlipForger, ExperimentReport, MaulingAdversary, NullForger,
    OracleStats, RandomGuess, ReplayForger,
};
use super::insecure_demo::{insecure_demo, PrefixAttack};
use super::lpn::{uniform_samples, ExhaustiveDistinguisher, LpnOracle};
use super::schemes::{Cca2Scheme, RandomizedMcEliece};
use crate::cca2::Cca2Config;
use crate::error::{Error, Result};
use crate::mceliece::{McElieceParams, Theta};
use crate::ots::{HashKind, OtsParams};

pub const NAMES: &[&str] = &[
    "prefix-attack-broken",
    "prefix-attack-proper",
    "cpa-random-guess",
    "cca2-maul",
    "cca2-random-guess",
    "otsu-bitflip",
    "otsu-replay",
    "otsu-null",
    "lpn-noise",
    "lpndp",
];

/// Trials used when the caller does not choose.
pub fn default_trials(name: &str) -> usize {
    match name {
        "prefix-attack-broken" | "prefix-attack-proper" | "cca2-maul" | "cca2-random-guess" => 2000,
        "lpndp" => 400,
        _ => 10_000,
    }
}

fn prefix_params() -> McElieceParams {
    McElieceParams::new(8, 10).expect("valid")
}

fn lpn_theta() -> Theta {
    Theta::new(1, 8).expect("valid")
}

/// Noise rate of `Q_{s,θ}` at l = 32: each trial is one query, a "win" is a
/// noisy answer, and the baseline is θ.
pub fn lpn_noise(trials: usize, seed: u64) -> ExperimentReport {
    let theta = lpn_theta();
    let mut r = trial_rng(seed, u64::MAX);
    let oracle = LpnOracle::random(32, theta, &mut r);
    let wins = (0..trials)
        .filter(|_| {
            let (a, b) = oracle.query(&mut r);
            b != oracle.secret().dot(&a)
        })
        .count();
    ExperimentReport {
        name: "lpn-noise".into(),
        trials,
        wins,
        invalid: 0,
        baseline: theta.value(),
        oracle: OracleStats::default(),
    }
}

/// LPNDP at l = 8 with 128 samples against the exhaustive distinguisher.
pub fn lpndp(trials: usize, seed: u64) -> ExperimentReport {
    let theta = lpn_theta();
    let d = ExhaustiveDistinguisher::for_theta(theta);
    let wins = (0..trials as u64)
        .filter(|&i| {
            let mut r = trial_rng(seed, i);
            let real: bool = r.gen();
            let samples = if real {
                let o = LpnOracle::random(8, theta, &mut r);
                (0..128).map(|_| o.query(&mut r)).collect()
            } else {
                uniform_samples(8, 128, &mut r)
            };
            d.guess(&samples) == real
        })
        .count();
    ExperimentReport {
        name: "lpndp".into(),
        trials,
        wins,
        invalid: 0,
        baseline: 0.5,
        oracle: OracleStats::default(),
    }
}

/// OTS parameters for the unforgeability runs: λ = 32, w = 128.
pub fn otsu_params() -> OtsParams {
    OtsParams::new(32, 128, HashKind::from_env()).expect("valid")
}

pub fn run_named(name: &str, trials: Option<usize>, seed: u64) -> Result<ExperimentReport> {
    let trials = trials.unwrap_or_else(|| default_trials(name));
    let report = match name {
        "prefix-attack-broken" => run_ind_cpa(name, &insecure_demo(prefix_params()), &PrefixAttack, trials, seed),
        "prefix-attack-proper" => {
            run_ind_cpa(name, &RandomizedMcEliece { params: prefix_params() }, &PrefixAttack, trials, seed)
        }
        "cpa-random-guess" => {
            let params = McElieceParams::new(4, 2).expect("valid");
            run_ind_cpa(name, &RandomizedMcEliece { params }, &RandomGuess, trials, seed)
        }
        "cca2-maul" => run_ind_cca2(name, &Cca2Scheme { config: Cca2Config::desk() }, &MaulingAdversary { queries: 4 }, trials, seed),
        "cca2-random-guess" => run_ind_cca2(name, &Cca2Scheme { config: Cca2Config::desk() }, &RandomGuess, trials, seed),
        "otsu-bitflip" => run_otsu(name, &otsu_params(), &BitFlipForger, trials, seed),
        "otsu-replay" => run_otsu(name, &otsu_params(), &ReplayForger, trials, seed),
        "otsu-null" => run_otsu(name, &otsu_params(), &NullForger, trials, seed),
        "lpn-noise" => lpn_noise(trials, seed),
        "lpndp" => lpndp(trials, seed),
        _ => return Err(Error::InvalidParams(format!("unknown experiment {name:?}"))),
    };
    Ok(report)
}
