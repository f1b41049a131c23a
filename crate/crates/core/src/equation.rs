//! The four binomial equation shapes, exact residuals, the auxiliary
//! polynomial pair (h, s), and the eq13 branch condition.
//!
//! The classical shape `f f'' - a (f')^2 = b e^{2c}` is not a separate code
//! path: it is eq12 with unit leading coefficient and relabeled slots.

use std::fmt;

use crate::error::EquationError;
use crate::exppoly::ExpPoly;
use crate::poly::Poly;
use crate::scalar::{exp_unit_scalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// a f f'' - b (f')^2 = c e^{2d}
    E12,
    /// a f f' - b (f'')^2 = c e^{2d}
    E13,
    /// a f' f'' - b f^2 = c e^{2d}
    E14,
}

impl Shape {
    pub fn code(&self) -> &'static str {
        match self {
            Shape::E12 => "eq12",
            Shape::E13 => "eq13",
            Shape::E14 => "eq14",
        }
    }

    pub fn from_code(code: &str) -> Option<Shape> {
        match code {
            // eq11 is eq12 with leading coefficient 1; the caller relabels.
            "eq12" => Some(Shape::E12),
            "eq13" => Some(Shape::E13),
            "eq14" => Some(Shape::E14),
            _ => None,
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// One of the binomial equations, with the exponent normalized to d(0) = 0.
/// The stripped factor e^{2 d(0)} lives in `rhs_unit` so residuals stay exact.
#[derive(Debug, Clone)]
pub struct BinomialEquation {
    pub shape: Shape,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub d: Poly,
    pub rhs_unit: Scalar,
    /// e^{d(0)}; `rhs_unit` is its square.
    pub exp_shift: Scalar,
    pub degenerate: bool,
}

/// h = a c' - a' c + 2 a c d' and s = b' c - b c' - 2 b c d'; both are
/// nonvanishing whenever a b c is and d is non-constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPair {
    pub h: Poly,
    pub s: Poly,
}

pub fn build_equation(
    shape: Shape,
    a: Poly,
    b: Poly,
    c: Poly,
    d_raw: Poly,
    allow_degenerate: bool,
) -> Result<BinomialEquation, EquationError> {
    if d_raw.is_constant() {
        return Err(EquationError::ConstantExponent);
    }
    let degenerate = a.is_zero() || b.is_zero() || c.is_zero();
    if degenerate && !allow_degenerate {
        return Err(EquationError::DegenerateCoefficients);
    }
    let d0 = d_raw.constant_term();
    let d = d_raw.without_constant_term();
    let exp_shift = exp_unit_scalar(&d0);
    let rhs_unit = exp_shift.pow(2);
    Ok(BinomialEquation { shape, a, b, c, d, rhs_unit, exp_shift, degenerate })
}

impl BinomialEquation {
    /// Left side applied to f.
    pub fn lhs(&self, f: &ExpPoly) -> ExpPoly {
        let fp = f.derivative();
        let fpp = fp.derivative();
        let (w1, w2) = match self.shape {
            Shape::E12 => (f * &fpp, &fp * &fp),
            Shape::E13 => (f * &fp, &fpp * &fpp),
            Shape::E14 => (&fp * &fpp, f * f),
        };
        &w1.poly_mul(&self.a) - &w2.poly_mul(&self.b)
    }

    /// Right side c * e^{2 d_raw} as an exponential polynomial.
    pub fn rhs(&self) -> ExpPoly {
        let coeff = self.c.scalar_mul(&self.rhs_unit);
        ExpPoly::term(coeff, &self.d + &self.d)
    }

    /// Exact residual LHS(f) - c e^{2d}; zero iff f solves the equation.
    pub fn residual(&self, f: &ExpPoly) -> ExpPoly {
        &self.lhs(f) - &self.rhs()
    }

    pub fn verify(&self, f: &ExpPoly) -> bool {
        self.residual(f).is_zero()
    }

    pub fn aux_pair(&self) -> Result<AuxPair, EquationError> {
        let ap = self.a.derivative();
        let bp = self.b.derivative();
        let cp = self.c.derivative();
        let dp = self.d.derivative();
        let two = Poly::from_int(2);
        let h = &(&(&self.a * &cp) - &(&ap * &self.c)) + &(&(&two * &(&self.a * &self.c)) * &dp);
        let s = &(&(&bp * &self.c) - &(&self.b * &cp)) - &(&(&two * &(&self.b * &self.c)) * &dp);
        let nondegenerate =
            !self.a.is_zero() && !self.b.is_zero() && !self.c.is_zero() && !self.d.is_constant();
        if nondegenerate {
            if h.is_zero() {
                return Err(EquationError::VanishingAux("h"));
            }
            if s.is_zero() {
                return Err(EquationError::VanishingAux("s"));
            }
        }
        Ok(AuxPair { h, s })
    }

    /// eq13 branch split: CaseI iff h f' - a c f'' vanishes identically.
    pub fn theorem1_branch(&self, f: &ExpPoly) -> Result<Theorem1Branch, EquationError> {
        assert_eq!(self.shape, Shape::E13, "branch condition is specific to eq13");
        let AuxPair { h, .. } = self.aux_pair()?;
        let fp = f.derivative();
        let fpp = fp.derivative();
        let ac = &self.a * &self.c;
        let lhs = &fp.poly_mul(&h) - &fpp.poly_mul(&ac);
        Ok(if lhs.is_zero() {
            Theorem1Branch::CaseI
        } else {
            Theorem1Branch::CaseIIOrIII
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem1Branch {
    CaseI,
    CaseIIOrIII,
}

impl fmt::Display for Theorem1Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem1Branch::CaseI => write!(f, "CaseI"),
            Theorem1Branch::CaseIIOrIII => write!(f, "CaseII_or_III"),
        }
    }
}

impl fmt::Display for BinomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: a={}; b={}; c={}; d={}",
            self.shape, self.a, self.b, self.c, self.d
        )?;
        if !self.rhs_unit.is_one() {
            write!(f, " (rhs unit {})", self.rhs_unit)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    fn e_pow(k: i64) -> ExpPoly {
        ExpPoly::exp(poly(&[0, k]))
    }

    /// 16 f f' - 2 (f'')^2 = 64 e^{2z}
    fn example_2_1() -> BinomialEquation {
        build_equation(
            Shape::E13,
            poly(&[16]),
            poly(&[2]),
            poly(&[64]),
            poly(&[0, 1]),
            false,
        )
        .unwrap()
    }

    #[test]
    fn example_2_1_verifies() {
        let eq = example_2_1();
        let f = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
        assert!(eq.residual(&f).is_zero());
        assert!(eq.verify(&f));
    }

    #[test]
    fn example_2_1_rejects_wrong_candidate() {
        let eq = example_2_1();
        assert!(!eq.verify(&e_pow(1)));
    }

    #[test]
    fn example_2_7_displayed_vs_prose() {
        // displayed: 3 f' f'' - 2 f^2 = 88 e^{4z} holds for f = 2 e^{2z}
        let displayed = build_equation(
            Shape::E14,
            poly(&[3]),
            poly(&[2]),
            poly(&[88]),
            poly(&[0, 2]),
            false,
        )
        .unwrap();
        let f = e_pow(2).scalar_mul(&Scalar::from_int(2));
        assert!(displayed.verify(&f));
        // prose coefficients b=1, c=88 leave residual exactly 4 e^{4z}
        let prose = build_equation(
            Shape::E14,
            poly(&[3]),
            poly(&[1]),
            poly(&[88]),
            poly(&[0, 2]),
            false,
        )
        .unwrap();
        let residual = prose.residual(&f);
        assert_eq!(residual, ExpPoly::term(poly(&[4]), poly(&[0, 4])));
        assert_eq!(residual.to_string(), "4*exp(4*z)");
    }

    #[test]
    fn aux_pair_examples() {
        let eq = example_2_1();
        let aux = eq.aux_pair().unwrap();
        assert_eq!(aux.h, poly(&[2048]));
        assert_eq!(aux.s, poly(&[-256]));
        // a=28, b=1, c=12, d=3z
        let eq2 = build_equation(
            Shape::E13,
            poly(&[28]),
            poly(&[1]),
            poly(&[12]),
            poly(&[0, 3]),
            false,
        )
        .unwrap();
        let aux2 = eq2.aux_pair().unwrap();
        assert_eq!(aux2.h, poly(&[2016]));
        assert_eq!(aux2.s, poly(&[-72]));
        // a=c=1, d=z gives h = 2
        let eq3 = build_equation(
            Shape::E13,
            poly(&[1]),
            poly(&[1]),
            poly(&[1]),
            poly(&[0, 1]),
            false,
        )
        .unwrap();
        assert_eq!(eq3.aux_pair().unwrap().h, poly(&[2]));
    }

    #[test]
    fn branch_condition() {
        let eq = example_2_1();
        let f = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
        assert_eq!(eq.theorem1_branch(&f).unwrap(), Theorem1Branch::CaseI);
        // Example 2.2: f = 2 e^{3z} lands in case II/III
        let eq2 = build_equation(
            Shape::E13,
            poly(&[28]),
            poly(&[1]),
            poly(&[12]),
            poly(&[0, 3]),
            false,
        )
        .unwrap();
        let f2 = e_pow(3).scalar_mul(&Scalar::from_int(2));
        assert_eq!(eq2.theorem1_branch(&f2).unwrap(), Theorem1Branch::CaseIIOrIII);
        // constants sit in case I (both sides vanish)
        let fc = ExpPoly::from_scalar(Scalar::from_int(7));
        assert_eq!(eq2.theorem1_branch(&fc).unwrap(), Theorem1Branch::CaseI);
    }

    #[test]
    fn exponent_shift_moves_into_rhs_unit() {
        // d_raw = 2z + 1 normalizes to d = 2z with rhs unit exp(1)^2
        let eq = build_equation(
            Shape::E13,
            poly(&[1]),
            poly(&[1]),
            poly(&[1]),
            poly(&[1, 2]),
            false,
        )
        .unwrap();
        assert_eq!(eq.d, poly(&[0, 2]));
        assert_eq!(eq.rhs_unit.to_string(), "exp(1)^2");
    }

    #[test]
    fn constant_exponent_rejected() {
        let err = build_equation(
            Shape::E13,
            poly(&[1]),
            poly(&[1]),
            poly(&[1]),
            poly(&[5]),
            false,
        )
        .unwrap_err();
        assert_eq!(err, EquationError::ConstantExponent);
    }

    #[test]
    fn degenerate_needs_flag() {
        let err = build_equation(
            Shape::E13,
            Poly::zero(),
            poly(&[1]),
            poly(&[1]),
            poly(&[0, 1]),
            false,
        )
        .unwrap_err();
        assert_eq!(err, EquationError::DegenerateCoefficients);
        let eq = build_equation(
            Shape::E13,
            Poly::zero(),
            poly(&[1]),
            poly(&[1]),
            poly(&[0, 1]),
            true,
        )
        .unwrap();
        assert!(eq.degenerate);
    }

    #[test]
    fn example_2_6_builds_as_given() {
        let eq = build_equation(
            Shape::E14,
            poly(&[2]),
            poly(&[7, 20, 24, 16]),
            poly(&[-9]),
            poly(&[0, 1, 1]),
            false,
        )
        .unwrap();
        let f = ExpPoly::exp(poly(&[0, 1, 1])).scalar_mul(&Scalar::from_int(3));
        assert!(eq.verify(&f));
    }
}
