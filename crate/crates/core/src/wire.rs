//! Bit-exact file format for keys and ciphertexts.
//!
//! Every file starts with the magic `KRMCE1\0\0`, a little-endian u16 version
//! and kind, and six little-endian u32 header fields `m, t, k, l1, q, tau`
//! (zero when not applicable). Matrices are `rows, cols` followed by each row
//! packed MSB-first into `⌈cols/8⌉` bytes; bit vectors are a u32 length and
//! packed bytes; sequences carry a u32 count. Parsing is strict: trailing
//! bytes, nonzero padding bits and out-of-range values are all errors.

use thiserror::Error;

use crate::algebra::{BitMatrix, BitVec, FieldPoly, Gf};
use crate::cca2::{Cca2Ciphertext, Cca2Config, Cca2PublicKey, Cca2SecretKey, VkMode};
use crate::correlated::{CorCca2Config, CorPublicKey, CorSecretKey, CorrelatedParams};
use crate::goppa::GoppaCode;
use crate::mceliece::{McElieceParams, PublicKey, SecretKey};
use crate::ots::{HashKind, OtsParams, Signature, VerifyKey};
use crate::repetition::RepCiphertext;

pub const MAGIC: [u8; 8] = *b"KRMCE1\0\0";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 8 + 2 + 2 + 6 * 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    BadVersion(u16),
    #[error("unknown file kind {0}")]
    UnknownKind(u16),
    #[error("expected a {expected:?} file, found {got:?}")]
    WrongKind { expected: Kind, got: Kind },
    #[error("input truncated")]
    Truncated,
    #[error("{0} trailing bytes")]
    TrailingBytes(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type WireResult<T> = std::result::Result<T, WireError>;

fn malformed<T>(msg: impl Into<String>) -> WireResult<T> {
    Err(WireError::Malformed(msg.into()))
}

impl From<crate::Error> for WireError {
    fn from(e: crate::Error) -> Self {
        WireError::Malformed(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u16)]
pub enum Kind {
    McEliecePk = 1,
    McElieceSk = 2,
    Cca2Pk = 3,
    Cca2Sk = 4,
    RepCt = 5,
    Cca2Ct = 6,
    CorPk = 7,
    CorSk = 8,
    CorCt = 9,
}

impl Kind {
    pub fn from_u16(v: u16) -> Option<Kind> {
        use Kind::*;
        Some(match v {
            1 => McEliecePk,
            2 => McElieceSk,
            3 => Cca2Pk,
            4 => Cca2Sk,
            5 => RepCt,
            6 => Cca2Ct,
            7 => CorPk,
            8 => CorSk,
            9 => CorCt,
            _ => return None,
        })
    }
}

/// The fixed-size preamble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Header {
    pub kind: Kind,
    pub m: u32,
    pub t: u32,
    pub k: u32,
    pub l1: u32,
    pub q: u32,
    pub tau: u32,
}

impl Header {
    fn new(kind: Kind, p: &McElieceParams) -> Self {
        Header {
            kind,
            m: p.m(),
            t: p.t() as u32,
            k: 0,
            l1: p.pad_len() as u32,
            q: 0,
            tau: 0,
        }
    }

    fn cor(kind: Kind, p: &CorrelatedParams) -> Self {
        Header {
            k: p.k() as u32,
            q: p.q(),
            tau: p.tau() as u32,
            ..Header::new(kind, p.mcel())
        }
    }

    fn write(&self, w: &mut Writer) {
        w.buf.extend_from_slice(&MAGIC);
        w.buf.extend_from_slice(&VERSION.to_le_bytes());
        w.buf.extend_from_slice(&(self.kind as u16).to_le_bytes());
        for v in [self.m, self.t, self.k, self.l1, self.q, self.tau] {
            w.u32(v);
        }
    }

    fn mcel(&self) -> WireResult<McElieceParams> {
        let p = McElieceParams::new(self.m, self.t as usize)?;
        Ok(p.with_pad_len(self.l1 as usize)?)
    }

    fn cor_params(&self) -> WireResult<CorrelatedParams> {
        let base = McElieceParams::new(self.m, self.t as usize)?;
        let p = CorrelatedParams::new(self.q, self.k as usize, self.tau as usize, base)?;
        if p.pad_bits() != self.l1 as usize {
            return malformed("pad length disagrees with correlated parameters");
        }
        Ok(p)
    }

    fn require_zero(&self, fields: &[(&str, u32)]) -> WireResult<()> {
        for (name, v) in fields {
            if *v != 0 {
                return malformed(format!("header field {name} must be 0 for {:?}", self.kind));
            }
        }
        Ok(())
    }
}

/// Reads only the preamble.
pub fn read_header(bytes: &[u8]) -> WireResult<Header> {
    let mut r = Reader::new(bytes);
    r.header()
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new() -> Self {
        Writer { buf: Vec::new() }
    }

    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn len(&mut self, v: usize) {
        self.u32(u32::try_from(v).expect("length fits in u32"));
    }

    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn bitvec(&mut self, v: &BitVec) {
        self.len(v.len());
        self.buf.extend(v.to_bytes());
    }

    fn matrix(&mut self, m: &BitMatrix) {
        self.len(m.rows());
        self.len(m.cols());
        for r in 0..m.rows() {
            self.buf.extend(m.row(r).to_bytes());
        }
    }

    fn ots_params(&mut self, p: &OtsParams, mode: VkMode) {
        self.len(p.lambda);
        self.len(p.w);
        self.u32(mode.code());
    }

    fn mceliece_sk(&mut self, sk: &SecretKey) {
        let code = sk.code();
        let g = code.goppa_poly().coeffs();
        self.len(g.len());
        for c in g {
            self.u16(c.0);
        }
        self.len(code.support().len());
        for a in code.support() {
            self.u16(a.0);
        }
        self.matrix(sk.scrambler_inverse());
        self.len(sk.permutation().len());
        for &p in sk.permutation() {
            self.u32(p);
        }
    }

    fn vk(&mut self, vk: &VerifyKey) {
        self.len(vk.params().lambda);
        self.len(vk.params().w);
        for img in vk.images() {
            self.buf.extend(img.to_bytes());
        }
    }

    fn signature(&mut self, s: &Signature) {
        self.len(s.lambda());
        self.len(s.w());
        for p in s.preimages() {
            self.buf.extend(p.to_bytes());
        }
    }

    fn rep_ct(&mut self, c: &RepCiphertext) {
        self.len(c.comps.len());
        for comp in &c.comps {
            self.bitvec(comp);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> WireResult<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(WireError::Truncated);
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> WireResult<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> WireResult<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn usize(&mut self) -> WireResult<usize> {
        Ok(self.u32()? as usize)
    }

    /// A count whose items each occupy at least `min_item` bytes; rejects
    /// counts the remaining input cannot hold before allocating.
    fn count(&mut self, min_item: usize) -> WireResult<usize> {
        let n = self.usize()?;
        if n.saturating_mul(min_item.max(1)) > self.buf.len() - self.pos {
            return Err(WireError::Truncated);
        }
        Ok(n)
    }

    fn finish(&self) -> WireResult<()> {
        match self.buf.len() - self.pos {
            0 => Ok(()),
            n => Err(WireError::TrailingBytes(n)),
        }
    }

    fn header(&mut self) -> WireResult<Header> {
        if self.buf.len() < HEADER_LEN {
            return if self.buf.len() >= 8 && self.buf[..8] != MAGIC {
                Err(WireError::BadMagic)
            } else {
                Err(WireError::Truncated)
            };
        }
        if self.take(8)? != MAGIC {
            return Err(WireError::BadMagic);
        }
        let version = self.u16()?;
        if version != VERSION {
            return Err(WireError::BadVersion(version));
        }
        let raw = self.u16()?;
        let kind = Kind::from_u16(raw).ok_or(WireError::UnknownKind(raw))?;
        Ok(Header {
            kind,
            m: self.u32()?,
            t: self.u32()?,
            k: self.u32()?,
            l1: self.u32()?,
            q: self.u32()?,
            tau: self.u32()?,
        })
    }

    fn expect_header(&mut self, kind: Kind) -> WireResult<Header> {
        let h = self.header()?;
        if h.kind != kind {
            return Err(WireError::WrongKind { expected: kind, got: h.kind });
        }
        Ok(h)
    }

    fn packed(&mut self, len: usize) -> WireResult<BitVec> {
        let bytes = self.take(len.div_ceil(8))?;
        BitVec::from_bytes(bytes, len).ok_or_else(|| WireError::Malformed("nonzero padding bits".into()))
    }

    fn bitvec(&mut self) -> WireResult<BitVec> {
        let len = self.usize()?;
        self.packed(len)
    }

    fn matrix(&mut self) -> WireResult<BitMatrix> {
        let rows = self.usize()?;
        let cols = self.usize()?;
        let row_bytes = cols.div_ceil(8);
        if rows.saturating_mul(row_bytes) > self.buf.len() - self.pos {
            return Err(WireError::Truncated);
        }
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            let row = self.packed(cols)?;
            m.set_row(r, &row);
        }
        Ok(m)
    }

    fn ots_params(&mut self, hash: HashKind) -> WireResult<(OtsParams, VkMode)> {
        let lambda = self.usize()?;
        let w = self.usize()?;
        let mode = self.u32()?;
        let mode = VkMode::from_code(mode).ok_or_else(|| WireError::Malformed(format!("unknown vk mode {mode}")))?;
        Ok((OtsParams::new(lambda, w, hash)?, mode))
    }

    fn mceliece_pk(&mut self, p: &McElieceParams) -> WireResult<PublicKey> {
        Ok(PublicKey::from_matrix(self.matrix()?, *p)?)
    }

    fn mceliece_sk(&mut self, p: &McElieceParams) -> WireResult<SecretKey> {
        let ng = self.count(2)?;
        let g: Vec<Gf> = (0..ng).map(|_| self.u16().map(Gf)).collect::<WireResult<_>>()?;
        if g.last().is_some_and(|c| c.is_zero()) || g.iter().any(|c| c.0 as usize >= p.n()) {
            return malformed("Goppa polynomial coefficients out of range");
        }
        let ns = self.count(2)?;
        let support: Vec<Gf> = (0..ns).map(|_| self.u16().map(Gf)).collect::<WireResult<_>>()?;
        let code = GoppaCode::from_parts(p.m(), p.t(), FieldPoly::from_coeffs(g), support)?;
        let s_inv = self.matrix()?;
        let np = self.count(4)?;
        let perm: Vec<u32> = (0..np).map(|_| self.u32()).collect::<WireResult<_>>()?;
        Ok(SecretKey::from_parts(code, s_inv, perm, *p)?)
    }

    fn vk(&mut self, expect: &OtsParams) -> WireResult<VerifyKey> {
        let lambda = self.usize()?;
        let w = self.usize()?;
        let params = OtsParams::new(lambda, w, expect.hash)?;
        let total = lambda.saturating_mul(2).saturating_mul(w.div_ceil(8));
        if total > self.buf.len() - self.pos {
            return Err(WireError::Truncated);
        }
        let images = (0..2 * lambda).map(|_| self.packed(w)).collect::<WireResult<_>>()?;
        Ok(VerifyKey::from_images(params, images)?)
    }

    fn signature(&mut self) -> WireResult<Signature> {
        let lambda = self.usize()?;
        let w = self.usize()?;
        if lambda.saturating_mul(w.div_ceil(8)) > self.buf.len() - self.pos {
            return Err(WireError::Truncated);
        }
        let pre = (0..lambda).map(|_| self.packed(w)).collect::<WireResult<_>>()?;
        Ok(Signature::from_preimages(lambda, w, pre)?)
    }

    fn rep_ct(&mut self, n: usize, k: usize) -> WireResult<RepCiphertext> {
        let count = self.count(4)?;
        if count != k {
            return malformed(format!("expected {k} components, found {count}"));
        }
        let comps: Vec<BitVec> = (0..count).map(|_| self.bitvec()).collect::<WireResult<_>>()?;
        if comps.iter().any(|c| c.len() != n) {
            return malformed(format!("component length must be {n}"));
        }
        Ok(RepCiphertext { comps })
    }
}

/// Signing input for the CCA2 schemes: the kind-5 payload without header.
pub fn rep_ct_payload(c: &RepCiphertext) -> Vec<u8> {
    let mut w = Writer::new();
    w.rep_ct(c);
    w.buf
}

pub fn encode_mceliece_pk(pk: &PublicKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header::new(Kind::McEliecePk, pk.params()).write(&mut w);
    w.matrix(pk.matrix());
    w.buf
}

/// θ is not stored; parsed keys carry the default for their `(m, t)`.
pub fn decode_mceliece_pk(bytes: &[u8]) -> WireResult<PublicKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::McEliecePk)?;
    h.require_zero(&[("k", h.k), ("q", h.q), ("tau", h.tau)])?;
    let pk = r.mceliece_pk(&h.mcel()?)?;
    r.finish()?;
    Ok(pk)
}

pub fn encode_mceliece_sk(sk: &SecretKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header::new(Kind::McElieceSk, sk.params()).write(&mut w);
    w.mceliece_sk(sk);
    w.buf
}

pub fn decode_mceliece_sk(bytes: &[u8]) -> WireResult<SecretKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::McElieceSk)?;
    h.require_zero(&[("k", h.k), ("q", h.q), ("tau", h.tau)])?;
    let sk = r.mceliece_sk(&h.mcel()?)?;
    r.finish()?;
    Ok(sk)
}

/// A plain randomized-McEliece or k-repetition ciphertext.
pub fn encode_rep_ct(params: &McElieceParams, c: &RepCiphertext) -> Vec<u8> {
    let mut w = Writer::new();
    Header { k: c.k() as u32, ..Header::new(Kind::RepCt, params) }.write(&mut w);
    w.rep_ct(c);
    w.buf
}

pub fn decode_rep_ct(bytes: &[u8]) -> WireResult<(McElieceParams, RepCiphertext)> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::RepCt)?;
    h.require_zero(&[("q", h.q), ("tau", h.tau)])?;
    let p = h.mcel()?;
    if h.k == 0 {
        return malformed("ciphertext needs at least one component");
    }
    let c = r.rep_ct(p.n(), h.k as usize)?;
    r.finish()?;
    Ok((p, c))
}

pub fn encode_cca2_pk(pk: &Cca2PublicKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header { k: pk.config.k as u32, ..Header::new(Kind::Cca2Pk, &pk.config.mcel) }.write(&mut w);
    w.ots_params(&pk.config.ots, pk.config.vk_mode);
    w.len(pk.pks.len());
    for p in &pk.pks {
        w.matrix(p.matrix());
    }
    w.buf
}

fn cca2_config(h: &Header, r: &mut Reader, hash: HashKind) -> WireResult<Cca2Config> {
    h.require_zero(&[("q", h.q), ("tau", h.tau)])?;
    let (ots, mode) = r.ots_params(hash)?;
    Ok(Cca2Config::new(h.mcel()?, h.k as usize, ots, mode)?)
}

pub fn decode_cca2_pk(bytes: &[u8], hash: HashKind) -> WireResult<Cca2PublicKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::Cca2Pk)?;
    let config = cca2_config(&h, &mut r, hash)?;
    let count = r.count(8)?;
    if count != 2 * config.k {
        return malformed(format!("expected {} public keys, found {count}", 2 * config.k));
    }
    let pks = (0..count).map(|_| r.mceliece_pk(&config.mcel)).collect::<WireResult<_>>()?;
    r.finish()?;
    Ok(Cca2PublicKey { config, pks })
}

pub fn encode_cca2_sk(sk: &Cca2SecretKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header { k: sk.config.k as u32, ..Header::new(Kind::Cca2Sk, &sk.config.mcel) }.write(&mut w);
    w.ots_params(&sk.config.ots, sk.config.vk_mode);
    w.len(sk.sks.len());
    for s in &sk.sks {
        w.mceliece_sk(s);
    }
    w.buf
}

pub fn decode_cca2_sk(bytes: &[u8], hash: HashKind) -> WireResult<Cca2SecretKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::Cca2Sk)?;
    let config = cca2_config(&h, &mut r, hash)?;
    let count = r.count(16)?;
    if count != 2 * config.k {
        return malformed(format!("expected {} secret keys, found {count}", 2 * config.k));
    }
    let sks = (0..count).map(|_| r.mceliece_sk(&config.mcel)).collect::<WireResult<_>>()?;
    r.finish()?;
    Ok(Cca2SecretKey { config, sks })
}

fn write_cca2_ct(w: &mut Writer, c: &Cca2Ciphertext) {
    w.rep_ct(&c.c_prime);
    w.vk(&c.vk);
    w.signature(&c.sigma);
}

fn read_cca2_ct(r: &mut Reader, n: usize, k: usize, hash: HashKind) -> WireResult<Cca2Ciphertext> {
    let c_prime = r.rep_ct(n, k)?;
    let probe = OtsParams { lambda: 1, w: 1, hash };
    let vk = r.vk(&probe)?;
    let sigma = r.signature()?;
    r.finish()?;
    Ok(Cca2Ciphertext { c_prime, vk, sigma })
}

pub fn encode_cca2_ct(config: &Cca2Config, c: &Cca2Ciphertext) -> Vec<u8> {
    let mut w = Writer::new();
    Header { k: c.c_prime.k() as u32, ..Header::new(Kind::Cca2Ct, &config.mcel) }.write(&mut w);
    write_cca2_ct(&mut w, c);
    w.buf
}

/// Returns the McEliece parameters from the header alongside the ciphertext.
pub fn decode_cca2_ct(bytes: &[u8], hash: HashKind) -> WireResult<(McElieceParams, Cca2Ciphertext)> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::Cca2Ct)?;
    h.require_zero(&[("q", h.q), ("tau", h.tau)])?;
    let p = h.mcel()?;
    if h.k == 0 {
        return malformed("k must be positive");
    }
    let c = read_cca2_ct(&mut r, p.n(), h.k as usize, hash)?;
    Ok((p, c))
}

pub fn encode_cor_pk(pk: &CorPublicKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header::cor(Kind::CorPk, &pk.config.cor).write(&mut w);
    w.ots_params(&pk.config.ots, pk.config.vk_mode);
    w.len(pk.pks.len());
    for p in &pk.pks {
        w.matrix(p.matrix());
    }
    w.buf
}

fn cor_config(h: &Header, r: &mut Reader, hash: HashKind) -> WireResult<CorCca2Config> {
    let (ots, mode) = r.ots_params(hash)?;
    Ok(CorCca2Config::new(h.cor_params()?, ots, mode)?)
}

pub fn decode_cor_pk(bytes: &[u8], hash: HashKind) -> WireResult<CorPublicKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::CorPk)?;
    let config = cor_config(&h, &mut r, hash)?;
    let count = r.count(8)?;
    if count != config.key_count() {
        return malformed(format!("expected {} public keys, found {count}", config.key_count()));
    }
    let mcel = *config.cor.mcel();
    let pks = (0..count).map(|_| r.mceliece_pk(&mcel)).collect::<WireResult<_>>()?;
    r.finish()?;
    Ok(CorPublicKey { config, pks })
}

pub fn encode_cor_sk(sk: &CorSecretKey) -> Vec<u8> {
    let mut w = Writer::new();
    Header::cor(Kind::CorSk, &sk.config.cor).write(&mut w);
    w.ots_params(&sk.config.ots, sk.config.vk_mode);
    w.len(sk.sks.len());
    for s in &sk.sks {
        w.mceliece_sk(s);
    }
    w.buf
}

pub fn decode_cor_sk(bytes: &[u8], hash: HashKind) -> WireResult<CorSecretKey> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::CorSk)?;
    let config = cor_config(&h, &mut r, hash)?;
    let count = r.count(16)?;
    if count != config.key_count() {
        return malformed(format!("expected {} secret keys, found {count}", config.key_count()));
    }
    let mcel = *config.cor.mcel();
    let sks = (0..count).map(|_| r.mceliece_sk(&mcel)).collect::<WireResult<_>>()?;
    r.finish()?;
    Ok(CorSecretKey { config, sks })
}

pub fn encode_cor_ct(params: &CorrelatedParams, c: &Cca2Ciphertext) -> Vec<u8> {
    let mut w = Writer::new();
    Header::cor(Kind::CorCt, params).write(&mut w);
    write_cca2_ct(&mut w, c);
    w.buf
}

pub fn decode_cor_ct(bytes: &[u8], hash: HashKind) -> WireResult<(CorrelatedParams, Cca2Ciphertext)> {
    let mut r = Reader::new(bytes);
    let h = r.expect_header(Kind::CorCt)?;
    let p = h.cor_params()?;
    let c = read_cca2_ct(&mut r, p.mcel().n(), p.k(), hash)?;
    Ok((p, c))
}
