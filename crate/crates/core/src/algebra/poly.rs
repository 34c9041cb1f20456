//! Dense polynomials over GF(2^m), lowest-degree coefficient first.

use super::field::{Field, Gf};

/// A polynomial over GF(2^m). Trailing zero coefficients are never stored, so
/// the zero polynomial has no coefficients and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldPoly {
    coeffs: Vec<Gf>,
}

impl std::fmt::Debug for FieldPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl FieldPoly {
    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Gf::ONE)
    }

    pub fn constant(c: Gf) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, Gf::ONE)
    }

    pub fn monomial(degree: usize, c: Gf) -> Self {
        let mut coeffs = vec![Gf::ZERO; degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    /// True when the degree is at most `d` (the zero polynomial always is).
    pub fn degree_at_most(&self, d: usize) -> bool {
        self.degree().is_none_or(|deg| deg <= d)
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: Gf, f: &Field) -> FieldPoly {
        Self::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &FieldPoly, f: &Field) -> FieldPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += f.mul(a, b);
            }
        }
        Self::from_coeffs(out)
    }

    /// Squaring is additive in characteristic 2: only even-degree terms survive.
    pub fn square(&self, f: &Field) -> FieldPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Gf::ZERO; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[2 * i] = f.square(a);
        }
        Self::from_coeffs(out)
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &FieldPoly, f: &Field) -> (FieldPoly, FieldPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Gf::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let q = f.mul(c, lead_inv);
            quot[i - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] += f.mul(q, dc);
            }
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &FieldPoly, f: &Field) -> FieldPoly {
        self.divrem(divisor, f).1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Gf, f: &Field) -> Gf {
        self.coeffs
            .iter()
            .rev()
            .fold(Gf::ZERO, |acc, &c| f.mul(acc, x) + c)
    }

    pub fn monic(&self, f: &Field) -> FieldPoly {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(f.inv(self.leading()).expect("nonzero leading coefficient"), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &FieldPoly, f: &Field) -> FieldPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended Euclid on `(a, b)` stopped at the first remainder of degree
    /// `<= stop_degree`. Returns `(u, v, r)` with `u·a + v·b = r`.
    ///
    /// A zero `b` returns `(1, 0, a)` unchanged.
    pub fn eea_stop(
        a: &FieldPoly,
        b: &FieldPoly,
        stop_degree: usize,
        f: &Field,
    ) -> (FieldPoly, FieldPoly, FieldPoly) {
        if b.is_zero() {
            return (Self::one(), Self::zero(), a.clone());
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut u0, mut u1) = (Self::one(), Self::zero());
        let (mut v0, mut v1) = (Self::zero(), Self::one());
        while !r1.degree_at_most(stop_degree) {
            let (q, r) = r0.divrem(&r1, f);
            let u = u0.add(&q.mul(&u1, f));
            let v = v0.add(&q.mul(&v1, f));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, u);
            v0 = std::mem::replace(&mut v1, v);
        }
        (u1, v1, r1)
    }

    /// Inverse modulo `modulus`, if `gcd(self, modulus) = 1`.
    pub fn inv_mod(&self, modulus: &FieldPoly, f: &Field) -> Option<FieldPoly> {
        let reduced = self.rem(modulus, f);
        if reduced.is_zero() {
            return None;
        }
        let (_, v, r) = Self::eea_stop(modulus, &reduced, 0, f);
        if r.is_zero() {
            return None;
        }
        let c = f.inv(r.leading()).ok()?;
        Some(v.scale(c, f).rem(modulus, f))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> FieldPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { Gf::ZERO })
            .collect();
        Self::from_coeffs(coeffs)
    }
}
