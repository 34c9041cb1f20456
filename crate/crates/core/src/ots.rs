//! Hash-then-sign Lamport one-time signatures and verification-key
//! compression.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::Rng;
use sha2::{Digest, Sha256, Sha512};

use crate::algebra::BitVec;
use crate::error::{Error, Result};

/// Environment variable that pins [`HashKind::Sha256`].
pub const DETERMINISTIC_ENV: &str = "KRMCE_DETERMINISTIC";

/// The hash behind both the one-way function `F` and the message digest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HashKind {
    Sha256,
    Sha512,
}

impl HashKind {
    /// `Sha256` when `KRMCE_DETERMINISTIC=1`, otherwise `Sha512`.
    pub fn from_env() -> Self {
        match std::env::var(DETERMINISTIC_ENV) {
            Ok(v) if v == "1" => HashKind::Sha256,
            _ => HashKind::Sha512,
        }
    }

    fn hash(self, parts: &[&[u8]]) -> Vec<u8> {
        match self {
            HashKind::Sha256 => {
                let mut h = Sha256::new();
                for p in parts {
                    h.update(p);
                }
                h.finalize().to_vec()
            }
            HashKind::Sha512 => {
                let mut h = Sha512::new();
                for p in parts {
                    h.update(p);
                }
                h.finalize().to_vec()
            }
        }
    }

    /// Counter-mode expansion of `H(domain ‖ ctr ‖ parts)` to `bits` output bits.
    fn expand(self, domain: &[u8], parts: &[&[u8]], bits: usize) -> BitVec {
        let nbytes = bits.div_ceil(8);
        let mut out = Vec::with_capacity(nbytes);
        let mut ctr = 0u32;
        while out.len() < nbytes {
            let c = ctr.to_be_bytes();
            let mut all: Vec<&[u8]> = vec![domain, &c];
            all.extend_from_slice(parts);
            out.extend(self.hash(&all));
            ctr += 1;
        }
        out.truncate(nbytes);
        if !bits.is_multiple_of(8) {
            let last = out.len() - 1;
            out[last] &= 0xFFu8 << (8 - bits % 8);
        }
        BitVec::from_bytes(&out, bits).expect("masked to length")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OtsParams {
    /// Digest length λ: one preimage pair per digest bit.
    pub lambda: usize,
    /// Preimage and image width in bits.
    pub w: usize,
    pub hash: HashKind,
}

impl OtsParams {
    pub fn new(lambda: usize, w: usize, hash: HashKind) -> Result<Self> {
        if lambda == 0 || w == 0 {
            return Err(Error::InvalidParams("OTS λ and w must be positive".into()));
        }
        Ok(OtsParams { lambda, w, hash })
    }

    pub fn desk() -> Self {
        OtsParams { lambda: 32, w: 64, hash: HashKind::from_env() }
    }

    pub fn production() -> Self {
        OtsParams { lambda: 256, w: 256, hash: HashKind::from_env() }
    }

    /// The one-way function `F: {0,1}^w → {0,1}^w`.
    pub fn owf(&self, x: &BitVec) -> BitVec {
        self.hash.expand(b"krmce/ots/F", &[&x.to_bytes()], self.w)
    }
}

/// Images `vk[b][i] = F(dsk[b][i])`, stored at index `2i + b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VerifyKey {
    params: OtsParams,
    images: Vec<BitVec>,
}

impl VerifyKey {
    pub fn from_images(params: OtsParams, images: Vec<BitVec>) -> Result<Self> {
        if images.len() != 2 * params.lambda || images.iter().any(|v| v.len() != params.w) {
            return Err(Error::InvalidParams("verification key shape mismatch".into()));
        }
        Ok(VerifyKey { params, images })
    }

    pub fn params(&self) -> &OtsParams {
        &self.params
    }

    pub fn image(&self, i: usize, b: bool) -> &BitVec {
        &self.images[2 * i + b as usize]
    }

    pub fn images(&self) -> &[BitVec] {
        &self.images
    }

    pub fn images_mut(&mut self) -> &mut [BitVec] {
        &mut self.images
    }

    /// All images in index order, each packed to `⌈w/8⌉` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.images.iter().flat_map(|v| v.to_bytes()).collect()
    }

    fn fingerprint(&self) -> Vec<u8> {
        let lw = [(self.params.lambda as u32).to_le_bytes(), (self.params.w as u32).to_le_bytes()].concat();
        self.params.hash.hash(&[b"krmce/ots/vk", &lw, &self.to_bytes()])
    }

    /// λ-bit digest of `msg`, bound to this key.
    pub fn digest(&self, msg: &[u8]) -> BitVec {
        self.params
            .hash
            .expand(b"krmce/ots/digest", &[&self.fingerprint(), msg], self.params.lambda)
    }

    /// Deterministic `k`-bit compression of the key.
    pub fn compress(&self, k: usize) -> BitVec {
        self.params.hash.expand(b"krmce/ots/compress", &[&self.to_bytes()], k)
    }
}

/// Free-function form of [`VerifyKey::compress`].
pub fn vk_compress(vk: &VerifyKey, k: usize) -> BitVec {
    vk.compress(k)
}

/// Preimages plus a consumed flag; a key signs at most once.
pub struct SigningKey {
    params: OtsParams,
    preimages: Vec<BitVec>,
    vk_fingerprint: Vec<u8>,
    consumed: AtomicBool,
}

impl fmt::Debug for SigningKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigningKey")
            .field("params", &self.params)
            .field("consumed", &self.consumed.load(Ordering::SeqCst))
            .finish_non_exhaustive()
    }
}

impl SigningKey {
    pub fn is_consumed(&self) -> bool {
        self.consumed.load(Ordering::SeqCst)
    }

    pub fn sign(&self, msg: &[u8]) -> Result<Signature> {
        if self.consumed.swap(true, Ordering::SeqCst) {
            return Err(Error::KeyReused);
        }
        let d = self
            .params
            .hash
            .expand(b"krmce/ots/digest", &[&self.vk_fingerprint, msg], self.params.lambda);
        let preimages = (0..self.params.lambda)
            .map(|i| self.preimages[2 * i + d.get(i) as usize].clone())
            .collect();
        Ok(Signature { lambda: self.params.lambda, w: self.params.w, preimages })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    lambda: usize,
    w: usize,
    preimages: Vec<BitVec>,
}

impl Signature {
    pub fn from_preimages(lambda: usize, w: usize, preimages: Vec<BitVec>) -> Result<Self> {
        if preimages.len() != lambda || preimages.iter().any(|p| p.len() != w) {
            return Err(Error::InvalidParams("signature shape mismatch".into()));
        }
        Ok(Signature { lambda, w, preimages })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn preimages(&self) -> &[BitVec] {
        &self.preimages
    }

    pub fn preimages_mut(&mut self) -> &mut [BitVec] {
        &mut self.preimages
    }

    pub fn bit_len(&self) -> usize {
        self.lambda * self.w
    }
}

pub struct OtsKeyPair {
    pub vk: VerifyKey,
    pub dsk: SigningKey,
}

pub fn ots_gen<R: Rng + ?Sized>(params: &OtsParams, rng: &mut R) -> OtsKeyPair {
    let preimages: Vec<BitVec> = (0..2 * params.lambda).map(|_| BitVec::random(params.w, rng)).collect();
    let images = preimages.iter().map(|x| params.owf(x)).collect();
    let vk = VerifyKey { params: *params, images };
    let dsk = SigningKey {
        params: *params,
        preimages,
        vk_fingerprint: vk.fingerprint(),
        consumed: AtomicBool::new(false),
    };
    OtsKeyPair { vk, dsk }
}

pub fn ots_sign(dsk: &SigningKey, msg: &[u8]) -> Result<Signature> {
    dsk.sign(msg)
}

pub fn ots_verify(vk: &VerifyKey, msg: &[u8], sig: &Signature) -> bool {
    let p = &vk.params;
    if sig.lambda != p.lambda || sig.w != p.w {
        return false;
    }
    let d = vk.digest(msg);
    sig.preimages
        .iter()
        .enumerate()
        .all(|(i, x)| p.owf(x) == *vk.image(i, d.get(i)))
}
