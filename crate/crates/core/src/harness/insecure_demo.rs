//! Deliberately broken McEliece with a systematic public key and the message
//! placed in the systematic prefix. Exists only to show the prefix attack.

use rand_chacha::ChaCha20Rng;

use super::games::{CpaAdversary, Pke};
use crate::algebra::{BitMatrix, BitVec};
use crate::error::Result;
use crate::goppa::GoppaCode;
use crate::mceliece::{McElieceParams, PublicKey, SecretKey};

/// No scrambler, a permutation that moves the information set to the front,
/// and plaintext `m | s`: the first `l₂` ciphertext bits are `m ⊕ e′`.
#[derive(Clone, Copy, Debug)]
pub struct EchelonMcEliece {
    params: McElieceParams,
}

/// The only way to build the broken variant.
pub fn insecure_demo(params: McElieceParams) -> EchelonMcEliece {
    EchelonMcEliece { params }
}

impl Pke for EchelonMcEliece {
    type Pk = PublicKey;
    type Sk = SecretKey;
    type Ct = BitVec;

    fn msg_len(&self) -> usize {
        self.params.msg_len()
    }

    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(PublicKey, SecretKey)> {
        let p = &self.params;
        let code = GoppaCode::generate(p.m(), p.t(), rng)?;
        let h = code.generator();
        // For each row r, the first column equal to the unit vector e_r goes to
        // position r; the remaining columns follow in order.
        let mut unit = vec![None; p.l()];
        for j in 0..p.n() {
            let ones: Vec<usize> = (0..p.l()).filter(|&r| h.get(r, j)).collect();
            if let [r] = ones[..] {
                unit[r].get_or_insert(j);
            }
        }
        let mut perm = vec![usize::MAX; p.n()];
        for (r, j) in unit.iter().enumerate() {
            perm[j.expect("systematic generator has every unit column")] = r;
        }
        for (slot, next) in perm.iter_mut().filter(|v| **v == usize::MAX).zip(p.l()..) {
            *slot = next;
        }
        let g = h.permute_columns(&perm);
        debug_assert!(g.col_range(0, p.l()).is_identity());
        let pk = PublicKey::from_matrix(g, *p)?;
        let sk = SecretKey::from_parts(
            code,
            BitMatrix::identity(p.l()),
            perm.into_iter().map(|v| v as u32).collect(),
            *p,
        )?;
        Ok((pk, sk))
    }

    fn encrypt(&self, pk: &PublicKey, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<BitVec> {
        let s = BitVec::random(self.params.pad_len(), rng);
        pk.encrypt(&m.concat(&s), rng)
    }

    fn decrypt(&self, sk: &SecretKey, c: &BitVec) -> Option<BitVec> {
        Some(sk.decrypt(c)?.slice(0, self.params.msg_len()))
    }
}

/// Picks `0…0` and `1…1` and answers by which is closer to the first `l₂`
/// ciphertext bits.
#[derive(Clone, Copy, Debug, Default)]
pub struct PrefixAttack;

impl<S: Pke<Ct = BitVec>> CpaAdversary<S> for PrefixAttack {
    type State = (BitVec, BitVec);

    fn find(&self, scheme: &S, _: &S::Pk, _: &mut ChaCha20Rng) -> (BitVec, BitVec, (BitVec, BitVec)) {
        let l2 = scheme.msg_len();
        let (m0, m1) = (BitVec::zeros(l2), BitVec::ones(l2));
        (m0.clone(), m1.clone(), (m0, m1))
    }

    fn guess(&self, _: &S, _: &S::Pk, c: &BitVec, (m0, m1): (BitVec, BitVec), _: &mut ChaCha20Rng) -> bool {
        let prefix = c.slice(0, m0.len());
        prefix.distance(&m1) < prefix.distance(&m0)
    }
}
