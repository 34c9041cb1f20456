//! GF(2) linear algebra and GF(2^m) field and polynomial arithmetic.

mod bits;
mod field;
mod poly;

pub use bits::{random_invertible, BitMatrix, BitVec};
pub use field::{Field, Gf};
pub use poly::FieldPoly;
