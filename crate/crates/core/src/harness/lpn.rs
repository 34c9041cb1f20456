//! Learning parity with noise: the sample oracle and the decision experiment.

use rand::Rng;

use crate::algebra::BitVec;
use crate::mceliece::{PublicKey, Theta};

/// `Q_{s,θ}`: fresh uniform `a`, `b = ⟨s, a⟩ ⊕ e` with `e ~ B_θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpnOracle {
    s: BitVec,
    theta: Theta,
}

impl LpnOracle {
    pub fn new(s: BitVec, theta: Theta) -> Self {
        LpnOracle { s, theta }
    }

    pub fn random<R: Rng + ?Sized>(l: usize, theta: Theta, rng: &mut R) -> Self {
        LpnOracle { s: BitVec::random(l, rng), theta }
    }

    pub fn secret(&self) -> &BitVec {
        &self.s
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn query<R: Rng + ?Sized>(&self, rng: &mut R) -> (BitVec, bool) {
        let a = BitVec::random(self.s.len(), rng);
        let b = self.s.dot(&a) ^ self.theta.sample(rng);
        (a, b)
    }
}

pub fn lpn_query<R: Rng + ?Sized>(oracle: &LpnOracle, rng: &mut R) -> (BitVec, bool) {
    oracle.query(rng)
}

/// Distinguishes LPN from uniform samples by exhaustive search over secrets:
/// answers "LPN" when some `s'` explains more than `threshold` of the samples.
#[derive(Clone, Copy, Debug)]
pub struct ExhaustiveDistinguisher {
    pub threshold: f64,
}

impl ExhaustiveDistinguisher {
    /// For noise θ, sits between the LPN agreement `1 - θ` and the uniform ½.
    pub fn for_theta(theta: Theta) -> Self {
        ExhaustiveDistinguisher { threshold: (1.0 - theta.value() + 0.5) / 2.0 }
    }

    /// `true` means "these are LPN samples". Only for `l ≤ 20`.
    pub fn guess(&self, samples: &[(BitVec, bool)]) -> bool {
        let Some((a0, _)) = samples.first() else {
            return false;
        };
        let l = a0.len();
        assert!(l <= 20, "exhaustive search needs a small secret");
        let best = (0u32..1 << l)
            .map(|cand| {
                let s = BitVec::from_bools(&(0..l).map(|i| cand >> i & 1 == 1).collect::<Vec<_>>());
                samples.iter().filter(|(a, b)| s.dot(a) == *b).count()
            })
            .max()
            .unwrap_or(0);
        best as f64 / samples.len() as f64 > self.threshold
    }
}

/// Uniform `(a, u)` pairs, the LPNDP alternative.
pub fn uniform_samples<R: Rng + ?Sized>(l: usize, count: usize, rng: &mut R) -> Vec<(BitVec, bool)> {
    (0..count).map(|_| (BitVec::random(l, rng), rng.gen())).collect()
}

/// Density of ones in a public matrix as a z-score against a uniform matrix.
/// A sanity screen only: real pseudorandomness is an assumption, not a test.
pub fn density_z_score(pk: &PublicKey) -> f64 {
    let g = pk.matrix();
    let cells = (g.rows() * g.cols()) as f64;
    let ones: usize = (0..g.rows()).map(|r| g.row(r).weight()).sum();
    (ones as f64 - cells / 2.0) / (cells / 4.0).sqrt()
}
