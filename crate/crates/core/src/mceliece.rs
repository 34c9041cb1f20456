//! Textbook McEliece over binary Goppa codes with Bernoulli-distributed
//! errors, and the randomized encoding `E(m; s) = s | m`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{random_invertible, BitMatrix, BitVec};
use crate::error::{check_len, Error, Result};
use crate::goppa::GoppaCode;

/// A Bernoulli parameter `num / den`, kept rational so sampling is exact and
/// reproducible across platforms.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Theta {
    num: u64,
    den: u64,
}

impl fmt::Debug for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Theta {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParams(format!("θ = {num}/{den} is not a probability")));
        }
        Ok(Theta { num, den })
    }

    pub const ZERO: Theta = Theta { num: 0, den: 1 };

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// One Bernoulli(θ) draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        self.num > 0 && rng.gen_range(0..self.den) < self.num
    }
}

/// McEliece parameters: code shape `(m, t)`, Bernoulli rate `θ < t/n`, and the
/// split `l = l₁ + l₂` of a plaintext into random pad and message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct McElieceParams {
    m: u32,
    t: usize,
    n: usize,
    l: usize,
    theta: Theta,
    pad_len: usize,
}

impl McElieceParams {
    /// Defaults: `θ = 3t / 4n` (ε = t / 4n) and `l₁ = ⌈l / 2⌉`.
    pub fn new(m: u32, t: usize) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let n = 1usize << m;
        if t < 2 || t * m as usize >= n - 1 {
            return Err(Error::InvalidParams(format!(
                "(m, t) = ({m}, {t}) needs t >= 2 and t·m < 2^m - 1"
            )));
        }
        let l = n - t * m as usize;
        Ok(McElieceParams {
            m,
            t,
            n,
            l,
            theta: Theta::new(3 * t as u64, 4 * n as u64)?,
            pad_len: l.div_ceil(2),
        })
    }

    pub fn with_theta(mut self, theta: Theta) -> Result<Self> {
        // 0 < θ < t/n  ⇔  0 < num·n < t·den
        if theta.num == 0 || (theta.num as u128) * (self.n as u128) >= (self.t as u128) * (theta.den as u128) {
            return Err(Error::InvalidParams(format!(
                "θ = {theta:?} must satisfy 0 < θ < t/n = {}/{}",
                self.t, self.n
            )));
        }
        self.theta = theta;
        Ok(self)
    }

    pub fn with_pad_len(mut self, pad_len: usize) -> Result<Self> {
        if pad_len == 0 || pad_len >= self.l {
            return Err(Error::InvalidParams(format!(
                "pad length {pad_len} must lie in 1..{}",
                self.l
            )));
        }
        self.pad_len = pad_len;
        Ok(self)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Code length `n = 2^m`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Plaintext length `l = n - t·m`.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    /// `l₁ = |s|`.
    pub fn pad_len(&self) -> usize {
        self.pad_len
    }

    /// `l₂ = |m| = l - l₁`.
    pub fn msg_len(&self) -> usize {
        self.l - self.pad_len
    }

    /// `E(m; s) = s | m`.
    pub fn encode_randomized(&self, m: &BitVec, s: &BitVec) -> Result<BitVec> {
        check_len(self.msg_len(), m.len())?;
        check_len(self.pad_len, s.len())?;
        Ok(s.concat(m))
    }

    /// Drops the first `l₁` bits.
    pub fn decode_randomized(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.l, x.len())?;
        Ok(x.slice(self.pad_len, self.l))
    }

    /// The pad `s` of an encoded plaintext.
    pub fn pad_of(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.l, x.len())?;
        Ok(x.slice(0, self.pad_len))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    g: BitMatrix,
    params: McElieceParams,
}

/// The decoder: Goppa code, inverse scrambler, and the column permutation
/// (`perm[j]` is the public column that holds code column `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    code: GoppaCode,
    s_inv: BitMatrix,
    perm: Vec<u32>,
    params: McElieceParams,
}

/// Each bit independently 1 with probability θ.
pub fn sample_error<R: Rng + ?Sized>(n: usize, theta: Theta, rng: &mut R) -> BitVec {
    let mut e = BitVec::zeros(n);
    for i in 0..n {
        if theta.sample(rng) {
            e.set(i, true);
        }
    }
    e
}

pub fn keygen<R: Rng + ?Sized>(params: &McElieceParams, rng: &mut R) -> Result<(PublicKey, SecretKey)> {
    let code = GoppaCode::generate(params.m, params.t, rng)?;
    debug_assert_eq!(code.dimension(), params.l);
    loop {
        let (s, s_inv) = random_invertible(params.l, rng);
        let mut perm: Vec<usize> = (0..params.n).collect();
        perm.shuffle(rng);
        let g = s.mul(code.generator()).permute_columns(&perm);
        // A systematic public matrix leaks the plaintext in its prefix.
        if g.col_range(0, params.l).is_identity() {
            continue;
        }
        let pk = PublicKey { g, params: *params };
        let sk = SecretKey {
            code,
            s_inv,
            perm: perm.into_iter().map(|p| p as u32).collect(),
            params: *params,
        };
        return Ok((pk, sk));
    }
}

impl PublicKey {
    pub fn from_matrix(g: BitMatrix, params: McElieceParams) -> Result<Self> {
        if g.rows() != params.l || g.cols() != params.n {
            return Err(Error::InvalidParams(format!(
                "public matrix is {}x{}, expected {}x{}",
                g.rows(),
                g.cols(),
                params.l,
                params.n
            )));
        }
        Ok(PublicKey { g, params })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.g
    }

    pub fn params(&self) -> &McElieceParams {
        &self.params
    }

    /// Same key, different θ (θ is not part of the serialized key).
    pub fn with_params(mut self, params: McElieceParams) -> Result<Self> {
        if (params.m, params.t, params.pad_len) != (self.params.m, self.params.t, self.params.pad_len) {
            return Err(Error::InvalidParams("parameter shape differs from key".into()));
        }
        self.params = params;
        Ok(self)
    }

    /// `x · G`.
    pub fn codeword(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.params.l, x.len())?;
        Ok(self.g.vec_mul(x))
    }

    /// `c = x·G ⊕ e` with `e ← B_θ^n`.
    pub fn encrypt<R: Rng + ?Sized>(&self, x: &BitVec, rng: &mut R) -> Result<BitVec> {
        check_len(self.params.l, x.len())?;
        let e = sample_error(self.params.n, self.params.theta, rng);
        self.encrypt_with(x, &e)
    }

    /// Deterministic encryption with a caller-chosen error vector.
    pub fn encrypt_with(&self, x: &BitVec, e: &BitVec) -> Result<BitVec> {
        check_len(self.params.n, e.len())?;
        let mut c = self.codeword(x)?;
        c.xor_assign(e);
        Ok(c)
    }

    /// Weight of `c ⊕ x·G`, the error a decryption to `x` would have to explain.
    pub fn residual_weight(&self, c: &BitVec, x: &BitVec) -> Option<usize> {
        if c.len() != self.params.n || x.len() != self.params.l {
            return None;
        }
        Some(self.g.vec_mul(x).distance(c))
    }
}

impl SecretKey {
    pub fn from_parts(
        code: GoppaCode,
        s_inv: BitMatrix,
        perm: Vec<u32>,
        params: McElieceParams,
    ) -> Result<Self> {
        if code.m() != params.m || code.t() != params.t || code.dimension() != params.l {
            return Err(Error::InvalidParams("code does not match parameters".into()));
        }
        if s_inv.rows() != params.l || s_inv.cols() != params.l || s_inv.inverse().is_none() {
            return Err(Error::InvalidParams("scrambler must be an invertible l×l matrix".into()));
        }
        let mut seen = vec![false; params.n];
        if perm.len() != params.n {
            return Err(Error::InvalidParams("permutation has wrong length".into()));
        }
        for &p in &perm {
            let p = p as usize;
            if p >= params.n || seen[p] {
                return Err(Error::InvalidParams("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(SecretKey {
            code,
            s_inv,
            perm,
            params,
        })
    }

    pub fn code(&self) -> &GoppaCode {
        &self.code
    }

    pub fn scrambler_inverse(&self) -> &BitMatrix {
        &self.s_inv
    }

    pub fn permutation(&self) -> &[u32] {
        &self.perm
    }

    pub fn params(&self) -> &McElieceParams {
        &self.params
    }

    /// Recovers the plaintext `x`, or `None` when `c` is not within distance
    /// `t` of a codeword.
    pub fn decrypt(&self, c: &BitVec) -> Option<BitVec> {
        if c.len() != self.params.n {
            return None;
        }
        let mut y = BitVec::zeros(self.params.n);
        for (j, &p) in self.perm.iter().enumerate() {
            if c.get(p as usize) {
                y.set(j, true);
            }
        }
        let e = self.code.decode(&y)?;
        y.xor_assign(&e);
        let xs = self.code.extract_message(&y);
        Some(self.s_inv.vec_mul(&xs))
    }
}
