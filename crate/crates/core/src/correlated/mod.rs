//! τ-correlated encryption: a message is Reed–Solomon encoded into k symbols,
//! component i encrypts `s | y_i`, and any τ components determine the rest.
//! The CCA2 variant spreads the verification key with a second RS code so
//! distinct keys select key sets that differ in at least τ positions.

mod rs;

pub use rs::{rs_encode, rs_erasure_decode, RsCode};

use std::borrow::Borrow;

use rand::Rng;

use crate::algebra::{BitVec, Gf};
use crate::cca2::{Cca2Ciphertext, VkMode};
use crate::error::{check_len, Error, Result};
use crate::mceliece::{self, McElieceParams, PublicKey, SecretKey};
use crate::ots::{self, OtsParams, VerifyKey};
use crate::repetition::{RepCiphertext, RepKeyPair};
use crate::wire;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatedParams {
    q: u32,
    k: usize,
    tau: usize,
    mcel: McElieceParams,
    msg_code: RsCode,
    vk_code: RsCode,
}

impl CorrelatedParams {
    /// Symbols live in GF(2^q); the McEliece plaintext splits as
    /// `l = pad_bits + q`.
    pub fn new(q: u32, k: usize, tau: usize, mcel: McElieceParams) -> Result<Self> {
        if !(2..=16).contains(&q) {
            return Err(Error::UnsupportedDegree(q));
        }
        if tau == 0 || tau > k {
            return Err(Error::InvalidParams(format!("need 1 <= tau <= k, got tau = {tau}, k = {k}")));
        }
        if k > 1 << q {
            return Err(Error::InvalidParams(format!("k = {k} exceeds 2^q = {}", 1 << q)));
        }
        if k > 2 * tau - 1 {
            return Err(Error::InvalidParams(format!(
                "k = {k} > 2·tau - 1 = {}: any tau components could not fix the rest",
                2 * tau - 1
            )));
        }
        if mcel.l() <= q as usize {
            return Err(Error::InvalidParams(format!(
                "McEliece plaintext length {} leaves no room for a pad beside a {q}-bit symbol",
                mcel.l()
            )));
        }
        let mcel = mcel.with_pad_len(mcel.l() - q as usize)?;
        Ok(CorrelatedParams {
            q,
            k,
            tau,
            mcel,
            msg_code: RsCode::new(q, k, tau)?,
            vk_code: RsCode::new(q, k, k - tau + 1)?,
        })
    }

    /// q = 3, k = 7, τ = 5 over McEliece (4,2).
    pub fn desk() -> Self {
        Self::new(3, 7, 5, McElieceParams::new(4, 2).expect("valid")).expect("valid desk parameters")
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn mcel(&self) -> &McElieceParams {
        &self.mcel
    }

    pub fn with_mcel(&self, mcel: McElieceParams) -> Result<Self> {
        Self::new(self.q, self.k, self.tau, mcel)
    }

    /// Message code dimension `τ`.
    pub fn l_msg(&self) -> usize {
        self.tau
    }

    /// Verification-key code dimension `k - τ + 1`.
    pub fn l_vk(&self) -> usize {
        self.k - self.tau + 1
    }

    pub fn pad_bits(&self) -> usize {
        self.mcel.pad_len()
    }

    /// Plaintext length in bits, `τ·q`.
    pub fn msg_bits(&self) -> usize {
        self.tau * self.q as usize
    }

    pub fn msg_code(&self) -> &RsCode {
        &self.msg_code
    }

    pub fn vk_code(&self) -> &RsCode {
        &self.vk_code
    }

    pub fn symbols_from_bits(&self, bits: &BitVec) -> Vec<Gf> {
        symbols_from_bits(bits, self.q)
    }

    pub fn bits_from_symbols(&self, symbols: &[Gf]) -> BitVec {
        bits_from_symbols(symbols, self.q)
    }
}

/// Splits into q-bit chunks, first bit most significant.
pub fn symbols_from_bits(bits: &BitVec, q: u32) -> Vec<Gf> {
    let q = q as usize;
    debug_assert_eq!(bits.len() % q, 0);
    (0..bits.len() / q)
        .map(|j| Gf((0..q).fold(0u16, |acc, b| acc << 1 | bits.get(j * q + b) as u16)))
        .collect()
}

pub fn bits_from_symbols(symbols: &[Gf], q: u32) -> BitVec {
    let q = q as usize;
    let mut out = BitVec::zeros(symbols.len() * q);
    for (j, s) in symbols.iter().enumerate() {
        for b in 0..q {
            out.set(j * q + b, s.0 >> (q - 1 - b) & 1 == 1);
        }
    }
    out
}

/// A shared pad and a codeword of the message code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatedTuple {
    pub s: BitVec,
    pub y: Vec<Gf>,
}

impl CorrelatedTuple {
    /// Component plaintexts `s | y_i`.
    pub fn plaintexts(&self, q: u32) -> Vec<BitVec> {
        self.y.iter().map(|&yi| self.s.concat(&bits_from_symbols(&[yi], q))).collect()
    }
}

pub fn encode_cor(params: &CorrelatedParams, m: &[Gf], s: &BitVec) -> Result<CorrelatedTuple> {
    check_len(params.pad_bits(), s.len())?;
    let y = params.msg_code.encode(m)?;
    Ok(CorrelatedTuple { s: s.clone(), y })
}

pub fn decode_cor(params: &CorrelatedParams, t: &CorrelatedTuple) -> Option<Vec<Gf>> {
    params.msg_code.decode(&t.y)
}

fn check_keys<K: Borrow<PublicKey>>(params: &CorrelatedParams, pks: &[K]) -> Result<()> {
    check_len(params.k, pks.len())?;
    if pks.iter().any(|pk| pk.borrow().params() != &params.mcel) {
        return Err(Error::InvalidParams("component keys disagree with correlated parameters".into()));
    }
    Ok(())
}

pub fn gen_cor<R: Rng + ?Sized>(params: &CorrelatedParams, rng: &mut R) -> Result<RepKeyPair> {
    let (pks, sks) = (0..params.k)
        .map(|_| mceliece::keygen(&params.mcel, rng))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(RepKeyPair { pks, sks })
}

/// Deterministic variant with caller-chosen pad and per-component errors.
pub fn enc_cor_with<K: Borrow<PublicKey>>(
    params: &CorrelatedParams,
    pks: &[K],
    m: &BitVec,
    s: &BitVec,
    errors: &[BitVec],
) -> Result<RepCiphertext> {
    check_keys(params, pks)?;
    check_len(params.msg_bits(), m.len())?;
    check_len(params.k, errors.len())?;
    let tuple = encode_cor(params, &params.symbols_from_bits(m), s)?;
    let comps = pks
        .iter()
        .zip(tuple.plaintexts(params.q))
        .zip(errors)
        .map(|((pk, x), e)| pk.borrow().encrypt_with(&x, e))
        .collect::<Result<_>>()?;
    Ok(RepCiphertext { comps })
}

pub fn enc_cor<K: Borrow<PublicKey>, R: Rng + ?Sized>(
    params: &CorrelatedParams,
    pks: &[K],
    m: &BitVec,
    rng: &mut R,
) -> Result<RepCiphertext> {
    let s = BitVec::random(params.pad_bits(), rng);
    let errors: Vec<BitVec> = (0..params.k)
        .map(|_| mceliece::sample_error(params.mcel.n(), params.mcel.theta(), rng))
        .collect();
    enc_cor_with(params, pks, m, &s, &errors)
}

fn split_plaintext(params: &CorrelatedParams, x: &BitVec) -> (BitVec, Gf) {
    let pad = params.pad_bits();
    (x.slice(0, pad), params.symbols_from_bits(&x.slice(pad, x.len()))[0])
}

/// Decrypts every component; `Some(m)` iff all succeed, share one pad and
/// their symbols form a codeword.
pub fn dec_cor<K: Borrow<SecretKey>>(params: &CorrelatedParams, sks: &[K], c: &RepCiphertext) -> Option<BitVec> {
    if sks.len() != params.k || c.comps.len() != params.k {
        return None;
    }
    let mut s0: Option<BitVec> = None;
    let mut y = Vec::with_capacity(params.k);
    for (sk, ci) in sks.iter().zip(&c.comps) {
        let (s, yi) = split_plaintext(params, &sk.borrow().decrypt(ci)?);
        match &s0 {
            None => s0 = Some(s),
            Some(prev) if *prev == s => {}
            Some(_) => return None,
        }
        y.push(yi);
    }
    let m = params.msg_code.decode(&y)?;
    Some(params.bits_from_symbols(&m))
}

/// τ-verification from the secret keys of the index set `subset`.
pub fn verify_tau<K: Borrow<PublicKey>, S: Borrow<SecretKey>>(
    params: &CorrelatedParams,
    c: &RepCiphertext,
    pks: &[K],
    subset: &[usize],
    sk_subset: &[S],
) -> bool {
    if c.comps.len() != params.k || pks.len() != params.k {
        return false;
    }
    if subset.len() != params.tau || sk_subset.len() != params.tau {
        return false;
    }
    let mut seen = vec![false; params.k];
    for &i in subset {
        if i >= params.k || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    let mut s0: Option<BitVec> = None;
    let mut word: Vec<Option<Gf>> = vec![None; params.k];
    for (&i, sk) in subset.iter().zip(sk_subset) {
        let Some(x) = sk.borrow().decrypt(&c.comps[i]) else {
            return false;
        };
        let (s, yi) = split_plaintext(params, &x);
        match &s0 {
            None => s0 = Some(s),
            Some(prev) if *prev == s => {}
            Some(_) => return false,
        }
        word[i] = Some(yi);
    }
    let Some(m) = params.msg_code.erasure_decode(&word) else {
        return false;
    };
    let tuple = CorrelatedTuple { s: s0.expect("tau >= 1"), y: params.msg_code.encode(&m).expect("valid") };
    let t = params.mcel.t();
    pks.iter()
        .zip(&c.comps)
        .zip(tuple.plaintexts(params.q))
        .all(|((pk, cj), xj)| matches!(pk.borrow().residual_weight(cj, &xj), Some(w) if w <= t))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorCca2Config {
    pub cor: CorrelatedParams,
    pub ots: OtsParams,
    pub vk_mode: VkMode,
}

impl CorCca2Config {
    pub fn new(cor: CorrelatedParams, ots: OtsParams, vk_mode: VkMode) -> Result<Self> {
        let need = cor.l_vk() * cor.q as usize;
        if vk_mode == VkMode::Raw && need != 2 * ots.lambda * ots.w {
            return Err(Error::InvalidParams(format!(
                "raw verification keys need q·(k - tau + 1) = 2·λ·w, got {need} vs {}",
                2 * ots.lambda * ots.w
            )));
        }
        Ok(CorCca2Config { cor, ots, vk_mode })
    }

    pub fn desk() -> Self {
        CorCca2Config { cor: CorrelatedParams::desk(), ots: OtsParams::desk(), vk_mode: VkMode::Compressed }
    }

    /// Number of component keypairs, `2^q · k`.
    pub fn key_count(&self) -> usize {
        (1usize << self.cor.q) * self.cor.k
    }

    /// `d = ECC(vk) ∈ Σ^k`.
    pub fn spread(&self, vk: &VerifyKey) -> Vec<Gf> {
        let bits = self.cor.l_vk() * self.cor.q as usize;
        let raw = match self.vk_mode {
            VkMode::Compressed => ots::vk_compress(vk, bits),
            VkMode::Raw => vk.images().iter().fold(BitVec::zeros(0), |acc, v| acc.concat(v)),
        };
        self.cor
            .vk_code
            .encode(&self.cor.symbols_from_bits(&raw))
            .expect("dimension matches")
    }
}

/// Indices `i·2^q + d_i`.
pub fn spread_indices(q: u32, d: &[Gf]) -> Vec<usize> {
    d.iter().enumerate().map(|(i, s)| (i << q) + s.0 as usize).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorPublicKey {
    pub config: CorCca2Config,
    pub pks: Vec<PublicKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorSecretKey {
    pub config: CorCca2Config,
    pub sks: Vec<SecretKey>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorKeyPair {
    pub pk: CorPublicKey,
    pub sk: CorSecretKey,
}

impl CorPublicKey {
    pub fn select(&self, d: &[Gf]) -> Vec<&PublicKey> {
        spread_indices(self.config.cor.q, d).into_iter().map(|j| &self.pks[j]).collect()
    }
}

impl CorSecretKey {
    pub fn select(&self, d: &[Gf]) -> Vec<&SecretKey> {
        spread_indices(self.config.cor.q, d).into_iter().map(|j| &self.sks[j]).collect()
    }
}

pub fn gen_cor_cca2<R: Rng + ?Sized>(config: &CorCca2Config, rng: &mut R) -> Result<CorKeyPair> {
    let (pks, sks) = (0..config.key_count())
        .map(|_| mceliece::keygen(&config.cor.mcel, rng))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(CorKeyPair {
        pk: CorPublicKey { config: config.clone(), pks },
        sk: CorSecretKey { config: config.clone(), sks },
    })
}

pub fn enc_cor_cca2<R: Rng + ?Sized>(pk: &CorPublicKey, m: &BitVec, rng: &mut R) -> Result<Cca2Ciphertext> {
    let kp = ots::ots_gen(&pk.config.ots, rng);
    let d = pk.config.spread(&kp.vk);
    let c_prime = enc_cor(&pk.config.cor, &pk.select(&d), m, rng)?;
    let sigma = kp.dsk.sign(&wire::rep_ct_payload(&c_prime))?;
    Ok(Cca2Ciphertext { c_prime, vk: kp.vk, sigma })
}

pub fn dec_cor_cca2(sk: &CorSecretKey, c: &Cca2Ciphertext) -> Option<BitVec> {
    let cfg = &sk.config;
    if *c.vk.params() != cfg.ots || c.c_prime.k() != cfg.cor.k {
        return None;
    }
    if !ots::ots_verify(&c.vk, &wire::rep_ct_payload(&c.c_prime), &c.sigma) {
        return None;
    }
    let d = cfg.spread(&c.vk);
    dec_cor(&cfg.cor, &sk.select(&d), &c.c_prime)
}
