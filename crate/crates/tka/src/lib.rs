//! Exact-arithmetic toolkit for knots in thickened surfaces: Alexander
//! polynomials over `Z[t^±1, x1^±1, ..., x2g^±1]`, Reidemeister-style torsion
//! of based chain complexes, and the Fox-Milnor concordance obstruction
//! `Δ(K0) = α·ᾱ·Δ(K1)`.

pub mod alexander;
pub mod cli;
pub mod diagram;
pub mod factorize;
pub mod fox;
pub mod foxmilnor;
pub mod laurent;
pub mod torsion;

pub use laurent::{ExponentVector, LaurentPoly, UnitMonomial};
