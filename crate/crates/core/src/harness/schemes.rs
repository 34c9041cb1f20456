//! [`Pke`] adapters for the library's schemes.

use rand_chacha::ChaCha20Rng;

use super::games::{BitFlip, Pke};
use crate::algebra::BitVec;
use crate::cca2::{self, Cca2Ciphertext, Cca2Config, Cca2PublicKey, Cca2SecretKey};
use crate::correlated::{self, CorCca2Config, CorPublicKey, CorSecretKey};
use crate::error::Result;
use crate::mceliece::{self, McElieceParams, PublicKey, SecretKey};
use crate::repetition::{self, RepCiphertext};

fn flip_in(parts: &mut [BitVec], mut i: usize) -> std::result::Result<(), usize> {
    for p in parts {
        if i < p.len() {
            p.flip(i);
            return Ok(());
        }
        i -= p.len();
    }
    Err(i)
}

impl BitFlip for RepCiphertext {
    fn bit_len(&self) -> usize {
        self.comps.iter().map(BitVec::len).sum()
    }

    fn flip_bit(&mut self, i: usize) {
        flip_in(&mut self.comps, i).expect("bit index in range");
    }
}

/// Bits of `c′`, then the verification key images, then the signature.
impl BitFlip for Cca2Ciphertext {
    fn bit_len(&self) -> usize {
        self.c_prime.bit_len()
            + self.vk.images().iter().map(BitVec::len).sum::<usize>()
            + self.sigma.bit_len()
    }

    fn flip_bit(&mut self, i: usize) {
        let Err(i) = flip_in(&mut self.c_prime.comps, i) else { return };
        let Err(i) = flip_in(self.vk.images_mut(), i) else { return };
        flip_in(self.sigma.preimages_mut(), i).expect("bit index in range");
    }
}

/// Randomized McEliece: `Enc(pk, s | m)`.
#[derive(Clone, Copy, Debug)]
pub struct RandomizedMcEliece {
    pub params: McElieceParams,
}

impl Pke for RandomizedMcEliece {
    type Pk = PublicKey;
    type Sk = SecretKey;
    type Ct = BitVec;

    fn msg_len(&self) -> usize {
        self.params.msg_len()
    }

    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(PublicKey, SecretKey)> {
        mceliece::keygen(&self.params, rng)
    }

    fn encrypt(&self, pk: &PublicKey, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<BitVec> {
        let s = BitVec::random(self.params.pad_len(), rng);
        pk.encrypt(&self.params.encode_randomized(m, &s)?, rng)
    }

    fn decrypt(&self, sk: &SecretKey, c: &BitVec) -> Option<BitVec> {
        self.params.decode_randomized(&sk.decrypt(c)?).ok()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Repetition {
    pub params: McElieceParams,
    pub k: usize,
}

impl Pke for Repetition {
    type Pk = Vec<PublicKey>;
    type Sk = Vec<SecretKey>;
    type Ct = RepCiphertext;

    fn msg_len(&self) -> usize {
        self.params.msg_len()
    }

    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(Self::Pk, Self::Sk)> {
        let kp = repetition::gen_k(&self.params, self.k, rng)?;
        Ok((kp.pks, kp.sks))
    }

    fn encrypt(&self, pk: &Self::Pk, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<RepCiphertext> {
        repetition::enc_k(pk, m, rng)
    }

    fn decrypt(&self, sk: &Self::Sk, c: &RepCiphertext) -> Option<BitVec> {
        repetition::dec_k(sk, c)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Cca2Scheme {
    pub config: Cca2Config,
}

impl Pke for Cca2Scheme {
    type Pk = Cca2PublicKey;
    type Sk = Cca2SecretKey;
    type Ct = Cca2Ciphertext;

    fn msg_len(&self) -> usize {
        self.config.mcel.msg_len()
    }

    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(Self::Pk, Self::Sk)> {
        let kp = cca2::gen_cca2(&self.config, rng)?;
        Ok((kp.pk, kp.sk))
    }

    fn encrypt(&self, pk: &Self::Pk, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<Cca2Ciphertext> {
        cca2::enc_cca2(pk, m, rng)
    }

    fn decrypt(&self, sk: &Self::Sk, c: &Cca2Ciphertext) -> Option<BitVec> {
        cca2::dec_cca2(sk, c)
    }
}

#[derive(Clone, Debug)]
pub struct CorrelatedCca2Scheme {
    pub config: CorCca2Config,
}

impl Pke for CorrelatedCca2Scheme {
    type Pk = CorPublicKey;
    type Sk = CorSecretKey;
    type Ct = Cca2Ciphertext;

    fn msg_len(&self) -> usize {
        self.config.cor.msg_bits()
    }

    fn keygen(&self, rng: &mut ChaCha20Rng) -> Result<(Self::Pk, Self::Sk)> {
        let kp = correlated::gen_cor_cca2(&self.config, rng)?;
        Ok((kp.pk, kp.sk))
    }

    fn encrypt(&self, pk: &Self::Pk, m: &BitVec, rng: &mut ChaCha20Rng) -> Result<Cca2Ciphertext> {
        correlated::enc_cor_cca2(pk, m, rng)
    }

    fn decrypt(&self, sk: &Self::Sk, c: &Cca2Ciphertext) -> Option<BitVec> {
        correlated::dec_cor_cca2(sk, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::games::trial_rng;
    use crate::ots::{HashKind, OtsParams};
    use crate::cca2::VkMode;

    #[test]
    fn cca2_flip_positions_cover_every_part() {
        let mcel = McElieceParams::new(4, 2).unwrap();
        let cfg = Cca2Config::new(mcel, 2, OtsParams::new(2, 8, HashKind::Sha256).unwrap(), VkMode::Compressed).unwrap();
        let s = Cca2Scheme { config: cfg };
        let mut r = trial_rng(1, 0);
        let (pk, _) = s.keygen(&mut r).unwrap();
        let c = s.encrypt(&pk, &BitVec::zeros(4), &mut r).unwrap();
        assert_eq!(c.bit_len(), 32 + 32 + 16);
        for i in 0..c.bit_len() {
            let mut t = c.clone();
            t.flip_bit(i);
            assert_ne!(t, c);
            let part = usize::from(t.c_prime != c.c_prime) + usize::from(t.vk != c.vk) + usize::from(t.sigma != c.sigma);
            assert_eq!(part, 1);
            t.flip_bit(i);
            assert_eq!(t, c);
        }
    }

    #[test]
    fn adapters_round_trip() {
        let mut r = trial_rng(2, 0);
        let p = McElieceParams::new(5, 2).unwrap();
        let s = RandomizedMcEliece { params: p };
        let (pk, sk) = s.keygen(&mut r).unwrap();
        let m = BitVec::random(s.msg_len(), &mut r);
        let c = s.encrypt(&pk, &m, &mut r).unwrap();
        let e = c.xor(&pk.codeword(&sk.decrypt(&c).unwrap()).unwrap());
        assert!(e.weight() <= 2);
        assert_eq!(s.decrypt(&sk, &c), Some(m));
    }
}
