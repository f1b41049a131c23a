//! Exponential polynomials f(z) = Σ P_i(z) e^{Q_i(z)} in canonical form.
//!
//! Canonical form keeps the exponent keys Q_i pairwise distinct with
//! Q_i(0) = 0 and drops zero coefficient polynomials. Any two distinct keys
//! then differ non-constantly, which is exactly the hypothesis under which a
//! vanishing exponential sum must have all coefficients zero; the zero test
//! is therefore "term map empty". A nonzero constant term q0 of an exponent
//! is stripped at construction and folded into the coefficient as the unit
//! symbol exp(q0).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{NumericError, ScalarError};
use crate::poly::Poly;
use crate::scalar::{exp_unit_scalar, ComplexBall, Scalar, UnitSym};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Poly, Poly>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::from_scalar(Scalar::one())
    }

    pub fn from_scalar(s: Scalar) -> Self {
        ExpPoly::from_poly(Poly::constant(s))
    }

    pub fn from_poly(p: Poly) -> Self {
        ExpPoly::term(p, Poly::zero())
    }

    /// e^{q}
    pub fn exp(exponent: Poly) -> Self {
        ExpPoly::term(Poly::from_int(1), exponent)
    }

    /// coeff * e^{exponent}, normalizing the exponent's constant term away.
    pub fn term(coeff: Poly, exponent: Poly) -> Self {
        let mut ep = ExpPoly::zero();
        ep.insert(coeff, exponent);
        ep
    }

    fn insert(&mut self, coeff: Poly, exponent: Poly) {
        if coeff.is_zero() {
            return;
        }
        let q0 = exponent.constant_term();
        let (coeff, exponent) = if q0.is_zero() {
            (coeff, exponent)
        } else {
            let folded = coeff.scalar_mul(&exp_unit_scalar(&q0));
            (folded, exponent.without_constant_term())
        };
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Poly, &Poly)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The Borel-type zero test: in canonical form the function vanishes
    /// identically iff no terms remain.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(s) when the function is the constant s (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (q, p) = self.terms.iter().next().unwrap();
                if q.is_zero() {
                    p.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Some(p) when the function is a plain polynomial.
    pub fn as_poly(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => {
                let (q, p) = self.terms.iter().next().unwrap();
                if q.is_zero() {
                    Some(p.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn scalar_mul(&self, s: &Scalar) -> ExpPoly {
        if s.is_zero() {
            return ExpPoly::zero();
        }
        let mut out = ExpPoly::zero();
        for (q, p) in &self.terms {
            out.insert(p.scalar_mul(s), q.clone());
        }
        out
    }

    pub fn poly_mul(&self, m: &Poly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (q, p) in &self.terms {
            out.insert(p * m, q.clone());
        }
        out
    }

    /// Growth order: the maximum exponent degree (0 for pure polynomials).
    pub fn order(&self) -> Result<usize, NumericError> {
        if self.is_zero() {
            return Err(NumericError::ZeroFunction);
        }
        Ok(self
            .terms
            .keys()
            .map(|q| q.degree().unwrap_or(0))
            .max()
            .unwrap())
    }

    /// Term-wise Leibniz rule: (P e^Q)' = (P' + P Q') e^Q.
    pub fn derivative(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (q, p) in &self.terms {
            let coeff = &p.derivative() + &(p * &q.derivative());
            out.insert(coeff, q.clone());
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> ExpPoly {
        let mut base = self.clone();
        let mut acc = ExpPoly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Interval enclosure of f(z0).
    pub fn eval(&self, z0: &ComplexBall, prec: u32) -> Result<ComplexBall, ScalarError> {
        let mut acc = ComplexBall::zero();
        for (q, p) in &self.terms {
            let pv = p.eval_ball(z0, prec)?;
            let qv = q.eval_ball(z0, prec)?;
            acc = acc.add(&pv.mul(&qv.exp(prec)));
        }
        Ok(acc)
    }

    pub fn units_occurring(&self) -> BTreeSet<UnitSym> {
        let mut set = BTreeSet::new();
        for (q, p) in &self.terms {
            set.extend(q.units_occurring());
            set.extend(p.units_occurring());
        }
        set
    }

    /// Substitute unit symbols in coefficients and exponents, re-normalizing
    /// exponent keys (substitution can introduce constant exponent terms or
    /// merge previously distinct keys).
    pub fn substitute_units(
        &self,
        bindings: &BTreeMap<UnitSym, Scalar>,
    ) -> Result<ExpPoly, ScalarError> {
        let mut out = ExpPoly::zero();
        for (q, p) in &self.terms {
            out.insert(p.substitute_units(bindings)?, q.substitute_units(bindings)?);
        }
        Ok(out)
    }
}

impl std::ops::Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (q, p) in &other.terms {
            out.insert(p.clone(), q.clone());
        }
        out
    }
}

impl std::ops::Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, other: &ExpPoly) -> ExpPoly {
        self + &(-other)
    }
}

impl std::ops::Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        let terms = self.terms.iter().map(|(q, p)| (q.clone(), -p)).collect();
        ExpPoly { terms }
    }
}

impl std::ops::Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl std::ops::Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, other: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (q1, p1) in &self.terms {
            for (q2, p2) in &other.terms {
                out.insert(p1 * p2, q1 + q2);
            }
        }
        out
    }
}

impl From<Poly> for ExpPoly {
    fn from(p: Poly) -> Self {
        ExpPoly::from_poly(p)
    }
}

impl From<Scalar> for ExpPoly {
    fn from(s: Scalar) -> Self {
        ExpPoly::from_scalar(s)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (q, p) in &self.terms {
            let ptext = p.to_string();
            let simple_neg =
                ptext.starts_with('-') && !ptext.contains(" - ") && !ptext.contains(" + ");
            let (neg, mag) = if simple_neg {
                (true, ptext[1..].to_string())
            } else {
                (false, ptext)
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if q.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            let coeff_part = if mag.contains(" + ") || mag.contains(" - ") {
                format!("({mag})")
            } else {
                mag
            };
            if coeff_part == "1" {
                write!(f, "exp({q})")?;
            } else {
                write!(f, "{coeff_part}*exp({q})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    fn e_pow(k: i64) -> ExpPoly {
        ExpPoly::exp(poly(&[0, k]))
    }

    #[test]
    fn difference_of_squares() {
        // (e^z + 1)(e^z - 1) = e^{2z} - 1
        let lhs = &(&e_pow(1) + &ExpPoly::one()) * &(&e_pow(1) - &ExpPoly::one());
        let expected = &e_pow(2) - &ExpPoly::one();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn product_from_corpus_check() {
        // (e^{2z} + 2e^{-4z}) (2e^{2z} - 8e^{-4z}) = 2e^{4z} - 4e^{-2z} - 16e^{-8z}
        let f = &e_pow(2) + &e_pow(-4).scalar_mul(&Scalar::from_int(2));
        let g = &e_pow(2).scalar_mul(&Scalar::from_int(2))
            - &e_pow(-4).scalar_mul(&Scalar::from_int(8));
        let product = &f * &g;
        let expected = &(&e_pow(4).scalar_mul(&Scalar::from_int(2))
            - &e_pow(-2).scalar_mul(&Scalar::from_int(4)))
            - &e_pow(-8).scalar_mul(&Scalar::from_int(16));
        assert_eq!(product, expected);
    }

    #[test]
    fn additive_inverse_cancels() {
        let f = &e_pow(3).poly_mul(&poly(&[1, 2])) + &ExpPoly::from_poly(poly(&[0, 0, 5]));
        assert!((&f + &f.scalar_mul(&Scalar::from_int(-1))).is_zero());
    }

    #[test]
    fn derivative_product_rule_term() {
        // ((z+1) e^{2z})' = (2z+3) e^{2z}
        let f = ExpPoly::term(poly(&[1, 1]), poly(&[0, 2]));
        let expected = ExpPoly::term(poly(&[3, 2]), poly(&[0, 2]));
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn derivative_of_gaussian_exponent() {
        // (e^{z^2})' = 2z e^{z^2}
        let f = ExpPoly::exp(poly(&[0, 0, 1]));
        let expected = ExpPoly::term(poly(&[0, 2]), poly(&[0, 0, 1]));
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(ExpPoly::from_scalar(Scalar::from_int(5)).derivative().is_zero());
    }

    #[test]
    fn zero_test_on_exp_cancellation() {
        // e^z * e^{-z} - 1 = 0
        let f = &(&e_pow(1) * &e_pow(-1)) - &ExpPoly::one();
        assert!(f.is_zero());
        let g = &e_pow(2) - &e_pow(1);
        assert!(!g.is_zero());
    }

    #[test]
    fn order_examples() {
        let f = &ExpPoly::exp(poly(&[0, 0, 1])) + &e_pow(1);
        assert_eq!(f.order().unwrap(), 2);
        assert_eq!(ExpPoly::from_poly(poly(&[1, 0, 0, 1])).order().unwrap(), 0);
        assert_eq!(
            ExpPoly::term(poly(&[2, 1]), poly(&[0, 1, 0, 7])).order().unwrap(),
            3
        );
        assert!(matches!(
            ExpPoly::zero().order(),
            Err(NumericError::ZeroFunction)
        ));
    }

    #[test]
    fn constant_exponent_terms_fold_into_units() {
        // exp(2z + 1) = exp(1) * exp(2z), and the folded unit can cancel.
        let f = ExpPoly::exp(poly(&[1, 2]));
        let (q, _p) = f.terms().next().unwrap();
        assert_eq!(q, &poly(&[0, 2]));
        // exp(z + 1) - exp(1) * exp(z) = 0
        let lhs = ExpPoly::exp(poly(&[1, 1]));
        let rhs = &ExpPoly::exp(poly(&[1])) * &ExpPoly::exp(poly(&[0, 1]));
        assert!((&lhs - &rhs).is_zero());
        // and e^{q0} with negative q0 uses the inverse power of the same base
        let a = ExpPoly::exp(poly(&[-1, 1]));
        let b = ExpPoly::exp(poly(&[1, 1]));
        let product = &a * &b;
        assert_eq!(product, ExpPoly::exp(poly(&[0, 2])));
    }

    #[test]
    fn eval_examples() {
        use num_traits::ToPrimitive;
        // (e^{2z} + 2) at 0 -> 3
        let f = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
        let v = f.eval(&ComplexBall::zero(), 53).unwrap();
        assert!((v.to_c64().re - 3.0).abs() < 1e-12);
        // at 1/2 -> e + 2 (floating oracle)
        let z = ComplexBall::from_rational(rat(1, 2));
        let v = f.eval(&z, 53).unwrap();
        let oracle = 1f64.exp() + 2.0;
        assert!((v.to_c64().re - oracle).abs() < 1e-10);
        assert!(v.rad.to_f64().unwrap() < 1e-10);
        // e^{z^2} at i -> e^{-1}
        let g = ExpPoly::exp(poly(&[0, 0, 1]));
        let i = ComplexBall::from_f64(0.0, 1.0, 0.0).unwrap();
        let v = g.eval(&i, 53).unwrap();
        assert!((v.to_c64().re - (-1f64).exp()).abs() < 1e-12);
        assert!(v.to_c64().im.abs() < 1e-12);
    }

    #[test]
    fn display_canonical() {
        let f = &ExpPoly::term(poly(&[1, 1]), poly(&[0, 2]))
            + &ExpPoly::from_scalar(Scalar::from_int(2));
        assert_eq!(f.to_string(), "2 + (z + 1)*exp(2*z)");
        assert_eq!(ExpPoly::zero().to_string(), "0");
        let r = ExpPoly::term(poly(&[4]), poly(&[0, 4]));
        assert_eq!(r.to_string(), "4*exp(4*z)");
    }
}
