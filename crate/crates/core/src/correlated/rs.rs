//! Reed–Solomon evaluation codes over GF(2^q) with erasure decoding by
//! Lagrange interpolation. Evaluation points are the field elements
//! `0, 1, …, k-1` in integer order.

use crate::algebra::{Field, FieldPoly, Gf};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCode {
    field: Field,
    k: usize,
    l: usize,
}

impl RsCode {
    /// Length `k`, dimension `l`, minimum distance `k - l + 1`.
    pub fn new(q: u32, k: usize, l: usize) -> Result<Self> {
        let field = Field::new(q)?;
        if l == 0 || l > k || k > field.size() {
            return Err(Error::InvalidParams(format!(
                "Reed-Solomon code needs 1 <= l <= k <= 2^q, got l = {l}, k = {k}, q = {q}"
            )));
        }
        Ok(RsCode { field, k, l })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn dimension(&self) -> usize {
        self.l
    }

    pub fn min_distance(&self) -> usize {
        self.k - self.l + 1
    }

    fn point(i: usize) -> Gf {
        Gf(i as u16)
    }

    /// Evaluations of `Σ msg_j x^j` at the k points.
    pub fn encode(&self, msg: &[Gf]) -> Result<Vec<Gf>> {
        if msg.len() != self.l {
            return Err(Error::LengthMismatch { expected: self.l, got: msg.len() });
        }
        if msg.iter().any(|s| (s.0 as usize) >= self.field.size()) {
            return Err(Error::InvalidParams("symbol outside GF(2^q)".into()));
        }
        let p = FieldPoly::from_coeffs(msg.to_vec());
        Ok((0..self.k).map(|i| p.eval(Self::point(i), &self.field)).collect())
    }

    /// Recovers the message from a word with erasures (`None`). Fails when
    /// fewer than `l` symbols survive or the survivors are not consistent with
    /// a single codeword.
    pub fn erasure_decode(&self, word: &[Option<Gf>]) -> Option<Vec<Gf>> {
        if word.len() != self.k {
            return None;
        }
        let f = &self.field;
        let survivors: Vec<(Gf, Gf)> = word
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|v| (Self::point(i), v)))
            .collect();
        if survivors.len() < self.l || survivors.iter().any(|(_, v)| v.0 as usize >= f.size()) {
            return None;
        }
        let basis = &survivors[..self.l];
        let mut p = FieldPoly::zero();
        for (i, &(xi, yi)) in basis.iter().enumerate() {
            let mut num = FieldPoly::one();
            let mut den = Gf::ONE;
            for (j, &(xj, _)) in basis.iter().enumerate() {
                if i != j {
                    num = num.mul(&FieldPoly::from_coeffs(vec![xj, Gf::ONE]), f);
                    den = f.mul(den, xi + xj);
                }
            }
            p = p.add(&num.scale(f.div(yi, den), f));
        }
        if survivors[self.l..].iter().any(|&(x, y)| p.eval(x, f) != y) {
            return None;
        }
        let mut msg = p.coeffs().to_vec();
        msg.resize(self.l, Gf::ZERO);
        Some(msg)
    }

    pub fn decode(&self, word: &[Gf]) -> Option<Vec<Gf>> {
        let w: Vec<Option<Gf>> = word.iter().copied().map(Some).collect();
        self.erasure_decode(&w)
    }

    pub fn is_codeword(&self, word: &[Gf]) -> bool {
        self.decode(word).is_some()
    }
}

/// Free-function encoder over GF(2^q).
pub fn rs_encode(q: u32, msg: &[Gf], k: usize) -> Result<Vec<Gf>> {
    RsCode::new(q, k, msg.len())?.encode(msg)
}

pub fn rs_erasure_decode(q: u32, word: &[Option<Gf>], l: usize) -> Option<Vec<Gf>> {
    RsCode::new(q, word.len(), l).ok()?.erasure_decode(word)
}
