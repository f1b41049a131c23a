//! Exact verification and classification of entire solutions of the four
//! binomial differential equation shapes
//!
//! ```text
//! (eq12)  a(z) f f''  - b(z) (f')^2  = c(z) e^{2 d(z)}
//! (eq13)  a(z) f f'   - b(z) (f'')^2 = c(z) e^{2 d(z)}
//! (eq14)  a(z) f' f'' - b(z) f^2     = c(z) e^{2 d(z)}
//! ```
//!
//! (the classical `f f'' - a (f')^2 = b e^{2c}` shape enters as eq12 with unit
//! leading coefficient), over the class of exponential polynomials
//! `f(z) = Σ P_i(z) e^{Q_i(z)}` with exact scalar arithmetic in algebraic
//! extension towers of the rationals, plus a numeric Nevanlinna module for
//! growth diagnostics.

pub mod classify;
pub mod corpus;
pub mod equation;
pub mod error;
pub mod nevanlinna;
pub mod exppoly;
pub mod parse;
pub mod poly;
pub mod scalar;

pub use error::{
    ClassifyError, EquationError, NumericError, ParseError, ScalarError, TowerError,
};
pub use scalar::{ComplexBall, Rational, Scalar, Tower, UnitSym, UnitValue};
