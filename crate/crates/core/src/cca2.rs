//! IND-CCA2 composition: 2k McEliece keys, a one-time signature per
//! ciphertext, and key selection by the bits of the verification key.

use rand::Rng;

use crate::algebra::BitVec;
use crate::error::{Error, Result};
use crate::mceliece::{self, McElieceParams, PublicKey, SecretKey};
use crate::ots::{self, OtsParams, Signature, VerifyKey};
use crate::repetition::{self, RepCiphertext};
use crate::wire;

/// How a verification key becomes the k selector bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VkMode {
    /// Hash of the key, truncated to k bits.
    Compressed,
    /// The key's images concatenated; requires `k = 2·λ·w`.
    Raw,
}

impl VkMode {
    pub fn code(self) -> u32 {
        match self {
            VkMode::Compressed => 0,
            VkMode::Raw => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(VkMode::Compressed),
            1 => Some(VkMode::Raw),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cca2Config {
    pub mcel: McElieceParams,
    pub k: usize,
    pub ots: OtsParams,
    pub vk_mode: VkMode,
}

impl Cca2Config {
    pub fn new(mcel: McElieceParams, k: usize, ots: OtsParams, vk_mode: VkMode) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if vk_mode == VkMode::Raw && k != 2 * ots.lambda * ots.w {
            return Err(Error::InvalidParams(format!(
                "raw verification keys need k = 2·λ·w = {}",
                2 * ots.lambda * ots.w
            )));
        }
        Ok(Cca2Config { mcel, k, ots, vk_mode })
    }

    /// Desk parameters: McEliece (4,2), k = 8, λ = 32, w = 64.
    pub fn desk() -> Self {
        let mcel = McElieceParams::new(4, 2).expect("valid desk parameters");
        Cca2Config { mcel, k: 8, ots: OtsParams::desk(), vk_mode: VkMode::Compressed }
    }

    /// The k selector bits for `vk`.
    pub fn selector(&self, vk: &VerifyKey) -> BitVec {
        match self.vk_mode {
            VkMode::Compressed => ots::vk_compress(vk, self.k),
            VkMode::Raw => vk
                .images()
                .iter()
                .fold(BitVec::zeros(0), |acc, img| acc.concat(img)),
        }
    }
}

/// Component `(i, b)` sits at index `2i + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cca2PublicKey {
    pub config: Cca2Config,
    pub pks: Vec<PublicKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cca2SecretKey {
    pub config: Cca2Config,
    pub sks: Vec<SecretKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cca2KeyPair {
    pub pk: Cca2PublicKey,
    pub sk: Cca2SecretKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cca2Ciphertext {
    pub c_prime: RepCiphertext,
    pub vk: VerifyKey,
    pub sigma: Signature,
}

/// Indices `2i + v_i` of the keys picked by selector `v`.
pub fn selected_indices(v: &BitVec) -> Vec<usize> {
    v.iter().enumerate().map(|(i, b)| 2 * i + b as usize).collect()
}

impl Cca2PublicKey {
    /// `pk^v = (pk_1^{v_1}, …, pk_k^{v_k})`.
    pub fn select(&self, v: &BitVec) -> Vec<&PublicKey> {
        selected_indices(v).into_iter().map(|j| &self.pks[j]).collect()
    }
}

impl Cca2SecretKey {
    pub fn select(&self, v: &BitVec) -> Vec<&SecretKey> {
        selected_indices(v).into_iter().map(|j| &self.sks[j]).collect()
    }
}

pub fn gen_cca2<R: Rng + ?Sized>(config: &Cca2Config, rng: &mut R) -> Result<Cca2KeyPair> {
    let (pks, sks) = (0..2 * config.k)
        .map(|_| mceliece::keygen(&config.mcel, rng))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(Cca2KeyPair {
        pk: Cca2PublicKey { config: *config, pks },
        sk: Cca2SecretKey { config: *config, sks },
    })
}

pub fn enc_cca2<R: Rng + ?Sized>(pk: &Cca2PublicKey, m: &BitVec, rng: &mut R) -> Result<Cca2Ciphertext> {
    let kp = ots::ots_gen(&pk.config.ots, rng);
    let v = pk.config.selector(&kp.vk);
    let c_prime = repetition::enc_k(&pk.select(&v), m, rng)?;
    let sigma = kp.dsk.sign(&wire::rep_ct_payload(&c_prime))?;
    Ok(Cca2Ciphertext { c_prime, vk: kp.vk, sigma })
}

/// Signature check, then k-repetition decryption under `sk^v`; any failure
/// is the same `None`.
pub fn dec_cca2(sk: &Cca2SecretKey, c: &Cca2Ciphertext) -> Option<BitVec> {
    let cfg = &sk.config;
    if *c.vk.params() != cfg.ots || c.c_prime.k() != cfg.k {
        return None;
    }
    if !ots::ots_verify(&c.vk, &wire::rep_ct_payload(&c.c_prime), &c.sigma) {
        return None;
    }
    let v = cfg.selector(&c.vk);
    repetition::dec_k(&sk.select(&v), &c.c_prime)
}
