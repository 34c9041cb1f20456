//! Arithmetic in GF(2^m) for 2 ≤ m ≤ 16 via log/antilog tables.

use std::fmt;

use crate::error::{Error, Result};

/// One primitive reduction polynomial per extension degree, indexed by `m`.
/// Bit `i` is the coefficient of `x^i`.
const REDUCTION_POLYS: [u32; 17] = [
    0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// An element of GF(2^m), stored as its polynomial-basis bit pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

// Addition in characteristic two is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for Gf {
    type Output = Gf;
    fn add(self, rhs: Gf) -> Gf {
        Gf(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        self.0 ^= rhs.0;
    }
}

/// The field GF(2^m) with a fixed primitive reduction polynomial.
///
/// Elements from a different field are a contract violation: operands outside
/// `[0, 2^m)` hit the table bounds and panic.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    m: u32,
    poly: u32,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod 0x{:x}", self.m, self.poly)
    }
}

impl Field {
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        let poly = REDUCTION_POLYS[m as usize];
        let size = 1usize << m;
        let order = size - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; size];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().take(order).enumerate() {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParams(format!(
                    "reduction polynomial 0x{poly:x} is not primitive"
                )));
            }
            *slot = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Field { m, poly, exp, log })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn reduction_poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    fn order(&self) -> usize {
        self.size() - 1
    }

    /// Checked conversion from a raw value.
    pub fn elem(&self, value: u32) -> Result<Gf> {
        if (value as usize) < self.size() {
            Ok(Gf(value as u16))
        } else {
            Err(Error::InvalidParams(format!(
                "value {value} is not an element of GF(2^{})",
                self.m
            )))
        }
    }

    /// All field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.size() as u32).map(|v| Gf(v as u16))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        if a.0 == 0 || b.0 == 0 {
            Gf::ZERO
        } else {
            Gf(self.exp[la + lb])
        }
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        let la = self.log[a.0 as usize] as usize;
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(Gf(self.exp[(self.order() - la) % self.order()]))
    }

    /// `a / b`; panics on `b = 0`.
    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        self.mul(a, self.inv(b).expect("division by zero"))
    }

    pub fn square(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    /// The unique square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self, a: Gf) -> Gf {
        if a.0 == 0 {
            return a;
        }
        let la = self.log[a.0 as usize] as usize;
        let half = if la.is_multiple_of(2) {
            la / 2
        } else {
            (la + self.order()) / 2
        };
        Gf(self.exp[half])
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.0 == 0 {
            return Gf::ZERO;
        }
        let la = self.log[a.0 as usize] as u64;
        Gf(self.exp[((la * (e % self.order() as u64)) % self.order() as u64) as usize])
    }
}
