//! IND-CPA, IND-CCA2 and one-time unforgeability experiments.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::stats::ci95;
use crate::algebra::BitVec;
use crate::error::Result;
use crate::ots::{self, OtsParams, Signature, VerifyKey};

/// Per-trial randomness: stream `i` of a ChaCha20 generator keyed by the
/// master seed, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

/// A public-key encryption scheme as the experiments see it.
pub trait Pke: Sync {
    type Pk: Send + Sync;
    type Sk: Send + Sync;
    type Ct: Clone + PartialEq + Send + Sync;

    fn msg_len(&self) -> usize;
    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(Self::Pk, Self::Sk)>;
    fn encrypt(&self, pk: &Self::Pk, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<Self::Ct>;
    fn decrypt(&self, sk: &Self::Sk, c: &Self::Ct) -> Option<BitVec>;
}

/// Ciphertexts an adversary can maul one bit at a time.
pub trait BitFlip {
    fn bit_len(&self) -> usize;
    fn flip_bit(&mut self, i: usize);
}

impl BitFlip for BitVec {
    fn bit_len(&self) -> usize {
        self.len()
    }

    fn flip_bit(&mut self, i: usize) {
        self.flip(i);
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub queries: u64,
    pub refused: u64,
    pub bottoms: u64,
}

impl OracleStats {
    fn merge(self, o: OracleStats) -> OracleStats {
        OracleStats {
            queries: self.queries + o.queries,
            refused: self.refused + o.refused,
            bottoms: self.bottoms + o.bottoms,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub trials: usize,
    pub wins: usize,
    pub invalid: usize,
    /// Win rate of a trivial adversary: ½ for indistinguishability games.
    pub baseline: f64,
    pub oracle: OracleStats,
}

impl ExperimentReport {
    pub fn advantage(&self) -> f64 {
        let valid = self.trials - self.invalid;
        if valid == 0 {
            return 0.0;
        }
        (self.wins as f64 / valid as f64 - self.baseline).abs()
    }

    pub fn ci95(&self) -> f64 {
        ci95(self.trials)
    }
}

impl fmt::Display for ExperimentReport {
    /// `name trials wins advantage ci95`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {:.6} {:.6}", self.name, self.trials, self.wins, self.advantage(), self.ci95())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Win(OracleStats),
    Loss(OracleStats),
    Invalid(OracleStats),
}

fn tally(name: &str, baseline: f64, trials: usize, outcomes: Vec<Outcome>) -> ExperimentReport {
    let mut r = ExperimentReport {
        name: name.to_string(),
        trials,
        wins: 0,
        invalid: 0,
        baseline,
        oracle: OracleStats::default(),
    };
    for o in outcomes {
        let s = match o {
            Outcome::Win(s) => {
                r.wins += 1;
                s
            }
            Outcome::Loss(s) => s,
            Outcome::Invalid(s) => {
                r.invalid += 1;
                s
            }
        };
        r.oracle = r.oracle.merge(s);
    }
    r
}

fn run_parallel<F>(trials: usize, seed: u64, f: F) -> Vec<Outcome>
where
    F: Fn(&mut ChaCha20Rng) -> Outcome + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i)))
        .collect()
}

/// Two-stage CPA adversary `(A₁, A₂)` with opaque state.
pub trait CpaAdversary<S: Pke>: Sync {
    type State: Send;

    fn find(&self, scheme: &S, pk: &S::Pk, rng: &mut ChaCha20Rng) -> (BitVec, BitVec, Self::State);
    fn guess(&self, scheme: &S, pk: &S::Pk, challenge: &S::Ct, state: Self::State, rng: &mut ChaCha20Rng) -> bool;
}

/// `Exp^{cpa}` with fresh keys per trial. Messages of unequal or wrong length
/// void the trial.
pub fn run_ind_cpa<S: Pke, A: CpaAdversary<S>>(name: &str, scheme: &S, adv: &A, trials: usize, seed: u64) -> ExperimentReport {
    let outcomes = run_parallel(trials, seed, |rng| {
        let Ok((pk, _sk)) = scheme.keygen(rng) else {
            return Outcome::Invalid(OracleStats::default());
        };
        let (m0, m1, st) = adv.find(scheme, &pk, rng);
        if m0.len() != m1.len() || m0.len() != scheme.msg_len() {
            return Outcome::Invalid(OracleStats::default());
        }
        let b: bool = rng.gen();
        let Ok(c) = scheme.encrypt(&pk, if b { &m1 } else { &m0 }, rng) else {
            return Outcome::Invalid(OracleStats::default());
        };
        if adv.guess(scheme, &pk, &c, st, rng) == b {
            Outcome::Win(OracleStats::default())
        } else {
            Outcome::Loss(OracleStats::default())
        }
    });
    tally(name, 0.5, trials, outcomes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    Plaintext(BitVec),
    Bottom,
    /// The query was the challenge ciphertext.
    Refused,
}

/// Decryption oracle that refuses the challenge verbatim.
pub struct DecryptionOracle<'a, S: Pke> {
    scheme: &'a S,
    sk: &'a S::Sk,
    challenge: Option<S::Ct>,
    stats: OracleStats,
}

impl<'a, S: Pke> DecryptionOracle<'a, S> {
    pub fn new(scheme: &'a S, sk: &'a S::Sk) -> Self {
        DecryptionOracle { scheme, sk, challenge: None, stats: OracleStats::default() }
    }

    pub fn set_challenge(&mut self, c: S::Ct) {
        self.challenge = Some(c);
    }

    pub fn query(&mut self, c: &S::Ct) -> OracleAnswer {
        self.stats.queries += 1;
        if self.challenge.as_ref() == Some(c) {
            self.stats.refused += 1;
            return OracleAnswer::Refused;
        }
        match self.scheme.decrypt(self.sk, c) {
            Some(m) => OracleAnswer::Plaintext(m),
            None => {
                self.stats.bottoms += 1;
                OracleAnswer::Bottom
            }
        }
    }

    pub fn stats(&self) -> OracleStats {
        self.stats
    }
}

pub trait Cca2Adversary<S: Pke>: Sync {
    type State: Send;

    fn find(
        &self,
        scheme: &S,
        pk: &S::Pk,
        oracle: &mut DecryptionOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> (BitVec, BitVec, Self::State);

    fn guess(
        &self,
        scheme: &S,
        pk: &S::Pk,
        challenge: &S::Ct,
        state: Self::State,
        oracle: &mut DecryptionOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> bool;
}

/// `Exp^{cca2}`: as CPA, with a decryption oracle in both stages.
pub fn run_ind_cca2<S: Pke, A: Cca2Adversary<S>>(name: &str, scheme: &S, adv: &A, trials: usize, seed: u64) -> ExperimentReport {
    let outcomes = run_parallel(trials, seed, |rng| {
        let Ok((pk, sk)) = scheme.keygen(rng) else {
            return Outcome::Invalid(OracleStats::default());
        };
        let mut oracle = DecryptionOracle::new(scheme, &sk);
        let (m0, m1, st) = adv.find(scheme, &pk, &mut oracle, rng);
        if m0.len() != m1.len() || m0.len() != scheme.msg_len() {
            return Outcome::Invalid(oracle.stats());
        }
        let b: bool = rng.gen();
        let Ok(c) = scheme.encrypt(&pk, if b { &m1 } else { &m0 }, rng) else {
            return Outcome::Invalid(oracle.stats());
        };
        oracle.set_challenge(c.clone());
        let g = adv.guess(scheme, &pk, &c, st, &mut oracle, rng);
        if g == b {
            Outcome::Win(oracle.stats())
        } else {
            Outcome::Loss(oracle.stats())
        }
    });
    tally(name, 0.5, trials, outcomes)
}

/// Flips a fair coin.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomGuess;

fn distinct_messages(len: usize, rng: &mut ChaCha20Rng) -> (BitVec, BitVec) {
    let m0 = BitVec::random(len, rng);
    let mut m1 = BitVec::random(len, rng);
    if m1 == m0 && len > 0 {
        m1.flip(0);
    }
    (m0, m1)
}

impl<S: Pke> CpaAdversary<S> for RandomGuess {
    type State = ();

    fn find(&self, scheme: &S, _pk: &S::Pk, rng: &mut ChaCha20Rng) -> (BitVec, BitVec, ()) {
        let (m0, m1) = distinct_messages(scheme.msg_len(), rng);
        (m0, m1, ())
    }

    fn guess(&self, _: &S, _: &S::Pk, _: &S::Ct, _: (), rng: &mut ChaCha20Rng) -> bool {
        rng.gen()
    }
}

impl<S: Pke> Cca2Adversary<S> for RandomGuess {
    type State = ();

    fn find(&self, scheme: &S, _: &S::Pk, _: &mut DecryptionOracle<'_, S>, rng: &mut ChaCha20Rng) -> (BitVec, BitVec, ()) {
        let (m0, m1) = distinct_messages(scheme.msg_len(), rng);
        (m0, m1, ())
    }

    fn guess(&self, _: &S, _: &S::Pk, _: &S::Ct, _: (), _: &mut DecryptionOracle<'_, S>, rng: &mut ChaCha20Rng) -> bool {
        rng.gen()
    }
}

/// Flips random bits of the challenge and asks the oracle; guesses from any
/// plaintext that comes back, otherwise at random.
#[derive(Clone, Copy, Debug)]
pub struct MaulingAdversary {
    pub queries: usize,
}

impl<S: Pke> Cca2Adversary<S> for MaulingAdversary
where
    S::Ct: BitFlip,
{
    type State = (BitVec, BitVec);

    fn find(
        &self,
        scheme: &S,
        _: &S::Pk,
        _: &mut DecryptionOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> (BitVec, BitVec, (BitVec, BitVec)) {
        let (m0, m1) = distinct_messages(scheme.msg_len(), rng);
        (m0.clone(), m1.clone(), (m0, m1))
    }

    fn guess(
        &self,
        _: &S,
        _: &S::Pk,
        challenge: &S::Ct,
        (m0, m1): (BitVec, BitVec),
        oracle: &mut DecryptionOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> bool {
        for _ in 0..self.queries {
            let mut c = challenge.clone();
            c.flip_bit(rng.gen_range(0..c.bit_len()));
            if let OracleAnswer::Plaintext(m) = oracle.query(&c) {
                if m == m0 {
                    return false;
                }
                if m == m1 {
                    return true;
                }
            }
        }
        rng.gen()
    }
}

/// Submits the challenge itself; the oracle must refuse.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChallengeReplay;

impl<S: Pke> Cca2Adversary<S> for ChallengeReplay {
    type State = (BitVec, BitVec);

    fn find(&self, scheme: &S, _: &S::Pk, _: &mut DecryptionOracle<'_, S>, rng: &mut ChaCha20Rng) -> (BitVec, BitVec, (BitVec, BitVec)) {
        let (m0, m1) = distinct_messages(scheme.msg_len(), rng);
        (m0.clone(), m1.clone(), (m0, m1))
    }

    fn guess(
        &self,
        _: &S,
        _: &S::Pk,
        challenge: &S::Ct,
        (m0, _m1): (BitVec, BitVec),
        oracle: &mut DecryptionOracle<'_, S>,
        rng: &mut ChaCha20Rng,
    ) -> bool {
        match oracle.query(challenge) {
            OracleAnswer::Plaintext(m) => m != m0,
            _ => rng.gen(),
        }
    }
}

/// One-time forger: may ask for one signature, then outputs a candidate.
pub trait OtsuAdversary: Sync {
    fn choose(&self, vk: &VerifyKey, rng: &mut ChaCha20Rng) -> Option<Vec<u8>>;
    fn forge(
        &self,
        vk: &VerifyKey,
        signed: Option<(&[u8], &Signature)>,
        rng: &mut ChaCha20Rng,
    ) -> Option<(Vec<u8>, Signature)>;
}

/// `Exp^{otsu}`: wins iff the output verifies and differs from the pair the
/// signing oracle returned. Baseline 0.
pub fn run_otsu<A: OtsuAdversary>(name: &str, params: &OtsParams, adv: &A, trials: usize, seed: u64) -> ExperimentReport {
    let outcomes = run_parallel(trials, seed, |rng| {
        let kp = ots::ots_gen(params, rng);
        let query = adv.choose(&kp.vk, rng);
        let signed = match &query {
            Some(m) => match kp.dsk.sign(m) {
                Ok(s) => Some((m.clone(), s)),
                Err(_) => return Outcome::Invalid(OracleStats::default()),
            },
            None => None,
        };
        let stats = OracleStats { queries: query.is_some() as u64, ..OracleStats::default() };
        let forged = adv.forge(&kp.vk, signed.as_ref().map(|(m, s)| (m.as_slice(), s)), rng);
        let Some((m_star, s_star)) = forged else {
            return Outcome::Loss(stats);
        };
        let fresh = signed.as_ref().is_none_or(|(m, s)| *m != m_star || *s != s_star);
        if fresh && ots::ots_verify(&kp.vk, &m_star, &s_star) {
            Outcome::Win(stats)
        } else {
            Outcome::Loss(stats)
        }
    });
    tally(name, 0.0, trials, outcomes)
}

/// Gets one signature, then flips one bit of either the message or the
/// signature.
#[derive(Clone, Copy, Debug, Default)]
pub struct BitFlipForger;

impl OtsuAdversary for BitFlipForger {
    fn choose(&self, _: &VerifyKey, rng: &mut ChaCha20Rng) -> Option<Vec<u8>> {
        let mut m = vec![0u8; 32];
        rng.fill(&mut m[..]);
        Some(m)
    }

    fn forge(&self, _: &VerifyKey, signed: Option<(&[u8], &Signature)>, rng: &mut ChaCha20Rng) -> Option<(Vec<u8>, Signature)> {
        let (m, s) = signed?;
        let (mut m, mut s) = (m.to_vec(), s.clone());
        if rng.gen() {
            let i = rng.gen_range(0..m.len() * 8);
            m[i / 8] ^= 0x80 >> (i % 8);
        } else {
            let i = rng.gen_range(0..s.lambda());
            let w = s.w();
            s.preimages_mut()[i].flip(rng.gen_range(0..w));
        }
        Some((m, s))
    }
}

/// Returns exactly the pair it was given.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReplayForger;

impl OtsuAdversary for ReplayForger {
    fn choose(&self, _: &VerifyKey, _: &mut ChaCha20Rng) -> Option<Vec<u8>> {
        Some(b"replayed".to_vec())
    }

    fn forge(&self, _: &VerifyKey, signed: Option<(&[u8], &Signature)>, _: &mut ChaCha20Rng) -> Option<(Vec<u8>, Signature)> {
        signed.map(|(m, s)| (m.to_vec(), s.clone()))
    }
}

/// Never asks for a signature and submits random preimages.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullForger;

impl OtsuAdversary for NullForger {
    fn choose(&self, _: &VerifyKey, _: &mut ChaCha20Rng) -> Option<Vec<u8>> {
        None
    }

    fn forge(&self, vk: &VerifyKey, _: Option<(&[u8], &Signature)>, rng: &mut ChaCha20Rng) -> Option<(Vec<u8>, Signature)> {
        let p = vk.params();
        let pre = (0..p.lambda).map(|_| BitVec::random(p.w, rng)).collect();
        Some((b"unsigned".to_vec(), Signature::from_preimages(p.lambda, p.w, pre).ok()?))
    }
}
