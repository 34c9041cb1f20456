//! Binary irreducible Goppa codes with full support and Patterson decoding.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{BitMatrix, BitVec, Field, FieldPoly, Gf};
use crate::error::{Error, Result};

const MAX_GENERATE_ATTEMPTS: usize = 100;

/// A binary Goppa code `Γ(L, g)` of length `n = 2^m` over the full support.
///
/// `generator` is the systematic kernel basis: restricted to the columns in
/// `info_set` it is the identity, which makes message recovery a projection.
#[derive(Clone, PartialEq, Eq)]
pub struct GoppaCode {
    m: u32,
    t: usize,
    field: Field,
    g: FieldPoly,
    support: Vec<Gf>,
    generator: BitMatrix,
    info_set: Vec<usize>,
    sqrt_x: FieldPoly,
}

impl std::fmt::Debug for GoppaCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GoppaCode")
            .field("m", &self.m)
            .field("t", &self.t)
            .field("n", &self.n())
            .field("l", &self.dimension())
            .field("g", &self.g)
            .finish_non_exhaustive()
    }
}

/// Ben-Or style test: a degree-`t` polynomial is irreducible iff
/// `gcd(x^(q^i) - x, g) = 1` for every `i <= t/2`, with `q = 2^m`.
pub fn is_irreducible(g: &FieldPoly, f: &Field) -> bool {
    let Some(t) = g.degree() else {
        return false;
    };
    if t == 0 {
        return false;
    }
    let x = FieldPoly::x();
    let mut h = x.clone();
    for _ in 0..t / 2 {
        for _ in 0..f.degree() {
            h = h.square(f).rem(g, f);
        }
        if h.add(&x).gcd(g, f).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Rejection-samples a monic irreducible polynomial of degree `t` over GF(2^m).
pub fn sample_irreducible<R: Rng + ?Sized>(f: &Field, t: usize, rng: &mut R) -> FieldPoly {
    assert!(t >= 1, "degree must be positive");
    loop {
        let mut coeffs: Vec<Gf> = (0..t)
            .map(|_| Gf(rng.gen_range(0..f.size()) as u16))
            .collect();
        coeffs.push(Gf::ONE);
        let g = FieldPoly::from_coeffs(coeffs);
        if is_irreducible(&g, f) {
            return g;
        }
    }
}

fn validate_params(m: u32, t: usize) -> Result<()> {
    if !(2..=16).contains(&m) {
        return Err(Error::UnsupportedDegree(m));
    }
    let n = 1usize << m;
    if t < 2 {
        // A degree-1 Goppa polynomial has a root in GF(2^m), which the full support would contain.
        return Err(Error::InvalidParams(format!(
            "t = {t}: full-support Goppa codes need t >= 2"
        )));
    }
    if t * m as usize >= n - 1 {
        return Err(Error::InvalidParams(format!(
            "t·m = {} must be below 2^m - 1 = {}",
            t * m as usize,
            n - 1
        )));
    }
    Ok(())
}

impl GoppaCode {
    /// Samples an irreducible `g` and a uniformly shuffled full support, and
    /// derives the generator matrix.
    pub fn generate<R: Rng + ?Sized>(m: u32, t: usize, rng: &mut R) -> Result<Self> {
        validate_params(m, t)?;
        let field = Field::new(m)?;
        for _ in 0..MAX_GENERATE_ATTEMPTS {
            let g = sample_irreducible(&field, t, rng);
            let mut support: Vec<Gf> = field.elements().collect();
            support.shuffle(rng);
            if let Ok(code) = Self::build(m, t, field.clone(), g, support) {
                return Ok(code);
            }
        }
        Err(Error::GenerationFailed(MAX_GENERATE_ATTEMPTS))
    }

    /// Rebuilds a code from its secret description, validating every invariant.
    pub fn from_parts(m: u32, t: usize, g: FieldPoly, support: Vec<Gf>) -> Result<Self> {
        validate_params(m, t)?;
        let field = Field::new(m)?;
        if g.degree() != Some(t) || !is_irreducible(&g, &field) {
            return Err(Error::InvalidParams(
                "Goppa polynomial must be irreducible of degree t".into(),
            ));
        }
        let mut seen = vec![false; field.size()];
        if support.len() != field.size() {
            return Err(Error::InvalidParams("support must cover GF(2^m)".into()));
        }
        for a in &support {
            let idx = a.0 as usize;
            if idx >= field.size() || seen[idx] {
                return Err(Error::InvalidParams("support elements must be distinct field elements".into()));
            }
            seen[idx] = true;
        }
        Self::build(m, t, field, g, support)
    }

    fn build(m: u32, t: usize, field: Field, g: FieldPoly, support: Vec<Gf>) -> Result<Self> {
        let h = parity_check(&field, &g, &support)?;
        let (rref, pivots) = h.rref();
        let tm = t * m as usize;
        if pivots.len() != tm {
            return Err(Error::InvalidParams("parity check is rank deficient".into()));
        }
        let n = support.len();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_set: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut generator = BitMatrix::zeros(info_set.len(), n);
        for (row, &free) in info_set.iter().enumerate() {
            generator.set(row, free, true);
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, free) {
                    generator.set(row, p, true);
                }
            }
        }

        // sqrt(x) mod g = x^(2^(mt-1)) mod g.
        let mut sqrt_x = FieldPoly::x();
        for _ in 0..tm - 1 {
            sqrt_x = sqrt_x.square(&field).rem(&g, &field);
        }

        Ok(GoppaCode {
            m,
            t,
            field,
            g,
            support,
            generator,
            info_set,
            sqrt_x,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn dimension(&self) -> usize {
        self.info_set.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn goppa_poly(&self) -> &FieldPoly {
        &self.g
    }

    pub fn support(&self) -> &[Gf] {
        &self.support
    }

    /// The systematic `l × n` generator matrix.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// The binary-expanded `(t·m) × n` parity-check matrix.
    pub fn parity_check(&self) -> BitMatrix {
        parity_check(&self.field, &self.g, &self.support).expect("validated at construction")
    }

    /// `x · G`.
    pub fn encode(&self, x: &BitVec) -> BitVec {
        self.generator.vec_mul(x)
    }

    /// Recovers `x` from a codeword `x · G` by projecting onto the information set.
    pub fn extract_message(&self, codeword: &BitVec) -> BitVec {
        let mut x = BitVec::zeros(self.dimension());
        for (i, &c) in self.info_set.iter().enumerate() {
            if codeword.get(c) {
                x.set(i, true);
            }
        }
        x
    }

    /// `1 / (x - a) mod g` via synthetic division of `g` by `x - a`.
    fn inverse_linear(&self, a: Gf) -> Vec<Gf> {
        let f = &self.field;
        let gc = self.g.coeffs();
        let t = self.t;
        let mut q = vec![Gf::ZERO; t];
        q[t - 1] = gc[t];
        for j in (1..t).rev() {
            q[j - 1] = gc[j] + f.mul(a, q[j]);
        }
        let g_a = gc[0] + f.mul(a, q[0]);
        let scale = f.inv(g_a).expect("support element is not a root of g");
        q.iter().map(|&c| f.mul(c, scale)).collect()
    }

    /// `S(x) = Σ_{y_i = 1} 1 / (x - L_i) mod g`.
    pub fn syndrome(&self, y: &BitVec) -> FieldPoly {
        assert_eq!(y.len(), self.n(), "word length must equal code length");
        let mut acc = vec![Gf::ZERO; self.t];
        for i in y.iter_ones() {
            for (a, c) in acc.iter_mut().zip(self.inverse_linear(self.support[i])) {
                *a += c;
            }
        }
        FieldPoly::from_coeffs(acc)
    }

    fn sqrt_mod_g(&self, p: &FieldPoly) -> FieldPoly {
        let f = &self.field;
        let (mut even, mut odd) = (Vec::new(), Vec::new());
        for (i, &c) in p.coeffs().iter().enumerate() {
            let r = f.sqrt(c);
            if i % 2 == 0 {
                even.push(r);
            } else {
                odd.push(r);
            }
        }
        let even = FieldPoly::from_coeffs(even);
        let odd = FieldPoly::from_coeffs(odd);
        even.add(&odd.mul(&self.sqrt_x, f)).rem(&self.g, f)
    }

    /// Patterson decoding. Returns the error vector `e` of weight `<= t` with
    /// `y + e` a codeword, or `None` when no such vector is found.
    pub fn decode(&self, y: &BitVec) -> Option<BitVec> {
        if y.len() != self.n() {
            return None;
        }
        let f = &self.field;
        let s = self.syndrome(y);
        let mut e = BitVec::zeros(self.n());
        if s.is_zero() {
            return Some(e);
        }
        let t_poly = s.inv_mod(&self.g, f)?;
        let r = self.sqrt_mod_g(&t_poly.add(&FieldPoly::x()));
        let locator = if r.is_zero() {
            FieldPoly::x()
        } else {
            let (_, b, a) = FieldPoly::eea_stop(&self.g, &r, self.t / 2, f);
            a.square(f).add(&FieldPoly::x().mul(&b.square(f), f))
        };
        let deg = locator.degree()?;
        if deg == 0 || deg > self.t {
            return None;
        }
        let mut roots = 0;
        for (i, &a) in self.support.iter().enumerate() {
            if locator.eval(a, f).is_zero() {
                e.set(i, true);
                roots += 1;
            }
        }
        if roots != deg || self.syndrome(&e) != s {
            return None;
        }
        Some(e)
    }
}

fn parity_check(f: &Field, g: &FieldPoly, support: &[Gf]) -> Result<BitMatrix> {
    let t = g.degree().unwrap_or(0);
    let m = f.degree() as usize;
    let mut h = BitMatrix::zeros(t * m, support.len());
    for (j, &a) in support.iter().enumerate() {
        let ga = g.eval(a, f);
        let mut entry = f.inv(ga)?;
        for i in 0..t {
            for b in 0..m {
                if entry.0 >> b & 1 == 1 {
                    h.set(i * m + b, j, true);
                }
            }
            entry = f.mul(entry, a);
        }
    }
    Ok(h)
}
