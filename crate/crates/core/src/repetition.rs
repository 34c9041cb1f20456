//! The k-repetition scheme over randomized McEliece: one shared pad `s`, the
//! same plaintext `s | m` under k independent keys, and the single-key
//! `verify` check.

use std::borrow::Borrow;

use rand::Rng;

use crate::algebra::BitVec;
use crate::error::{check_len, Error, Result};
use crate::mceliece::{self, McElieceParams, PublicKey, SecretKey};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepKeyPair {
    pub pks: Vec<PublicKey>,
    pub sks: Vec<SecretKey>,
}

impl RepKeyPair {
    pub fn k(&self) -> usize {
        self.pks.len()
    }

    pub fn params(&self) -> &McElieceParams {
        self.pks[0].params()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepCiphertext {
    pub comps: Vec<BitVec>,
}

impl RepCiphertext {
    pub fn k(&self) -> usize {
        self.comps.len()
    }
}

pub fn gen_k<R: Rng + ?Sized>(params: &McElieceParams, k: usize, rng: &mut R) -> Result<RepKeyPair> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let (pks, sks) = (0..k)
        .map(|_| mceliece::keygen(params, rng))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    Ok(RepKeyPair { pks, sks })
}

fn shared_params<K: Borrow<PublicKey>>(pks: &[K]) -> Result<McElieceParams> {
    let first = pks
        .first()
        .ok_or_else(|| Error::InvalidParams("empty key sequence".into()))?;
    let p = *first.borrow().params();
    if pks.iter().any(|pk| *pk.borrow().params() != p) {
        return Err(Error::InvalidParams("component keys disagree on parameters".into()));
    }
    Ok(p)
}

/// Encrypts `m` with a fresh pad and independent per-component errors.
pub fn enc_k<K: Borrow<PublicKey>, R: Rng + ?Sized>(pks: &[K], m: &BitVec, rng: &mut R) -> Result<RepCiphertext> {
    let p = shared_params(pks)?;
    check_len(p.msg_len(), m.len())?;
    let s = BitVec::random(p.pad_len(), rng);
    let x = p.encode_randomized(m, &s)?;
    let comps = pks
        .iter()
        .map(|pk| pk.borrow().encrypt(&x, rng))
        .collect::<Result<_>>()?;
    Ok(RepCiphertext { comps })
}

/// Deterministic variant: caller supplies the pad and one error vector per key.
pub fn enc_k_with<K: Borrow<PublicKey>>(pks: &[K], m: &BitVec, s: &BitVec, errors: &[BitVec]) -> Result<RepCiphertext> {
    let p = shared_params(pks)?;
    check_len(pks.len(), errors.len())?;
    let x = p.encode_randomized(m, s)?;
    let comps = pks
        .iter()
        .zip(errors)
        .map(|(pk, e)| pk.borrow().encrypt_with(&x, e))
        .collect::<Result<_>>()?;
    Ok(RepCiphertext { comps })
}

/// `Some(m)` iff every component decrypts and all message parts agree.
pub fn dec_k<K: Borrow<SecretKey>>(sks: &[K], c: &RepCiphertext) -> Option<BitVec> {
    if sks.is_empty() || sks.len() != c.comps.len() {
        return None;
    }
    let mut common: Option<BitVec> = None;
    for (sk, ci) in sks.iter().zip(&c.comps) {
        let sk = sk.borrow();
        let x = sk.decrypt(ci)?;
        let m = sk.params().decode_randomized(&x).ok()?;
        match &common {
            None => common = Some(m),
            Some(prev) if *prev == m => {}
            Some(_) => return None,
        }
    }
    common
}

/// Decrypts component `i` with `sk_i`, then checks every component lies within
/// distance `t` of the re-encoding of that plaintext under its own key.
pub fn verify<K: Borrow<PublicKey>>(c: &RepCiphertext, pks: &[K], i: usize, sk_i: &SecretKey) -> bool {
    if c.comps.len() != pks.len() || i >= pks.len() {
        return false;
    }
    let Some(x) = sk_i.decrypt(&c.comps[i]) else {
        return false;
    };
    let t = sk_i.params().t();
    pks.iter()
        .zip(&c.comps)
        .all(|(pk, cj)| matches!(pk.borrow().residual_weight(cj, &x), Some(w) if w <= t))
}
