//! Univariate polynomials in z over exact scalars.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::ScalarError;
use crate::scalar::{ComplexBall, Scalar, Tower, UnitSym};

/// Dense polynomial; the coefficient list never ends in a zero, and the empty
/// list is the zero polynomial (degree "-infinity", reported as `None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(s: Scalar) -> Self {
        Poly::from_coeffs(vec![s])
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(Scalar::from_int(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Poly::constant(Scalar::from_rational(q))
    }

    /// The variable z.
    pub fn z() -> Self {
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// s * z^k
    pub fn monomial(s: Scalar, k: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.push(s);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Some(constant value) when degree <= 0 (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    /// p - p(0)
    pub fn without_constant_term(&self) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Scalar::zero();
        Poly::from_coeffs(coeffs)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| &Scalar::from_int(k as i64) * c)
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scalar_mul(&self, s: &Scalar) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::from_int(1);
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

    pub fn eval_scalar(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_ball(&self, z: &ComplexBall, prec: u32) -> Result<ComplexBall, ScalarError> {
        let mut acc = ComplexBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&c.embed(prec)?);
        }
        Ok(acc)
    }

    /// Exact quotient; None when the divisor's leading coefficient is not
    /// invertible or a nonzero remainder survives.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ScalarError> {
        let dd = match divisor.degree() {
            None => return Err(ScalarError::DivisionByZero),
            Some(d) => d,
        };
        let lead_inv = divisor.leading().unwrap().invert()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let factor = &rem[k] * &lead_inv;
            if !factor.is_zero() {
                let shift = k - dd;
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    let sub = c * &factor;
                    rem[shift + j] = &rem[shift + j] - &sub;
                }
                quot[shift] = factor;
            }
            rem.pop();
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, ScalarError> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lead_inv = a.leading().unwrap().invert()?;
        Ok(a.scalar_mul(&lead_inv))
    }

    /// Quotient q = c / μ when self = μ * other for a constant scalar μ.
    pub fn constant_ratio_to(&self, other: &Poly) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        let q = self.div_exact(other)?;
        q.as_constant().filter(|c| !c.is_zero())
    }

    pub fn units_occurring(&self) -> std::collections::BTreeSet<UnitSym> {
        let mut set = std::collections::BTreeSet::new();
        for c in &self.coeffs {
            set.extend(c.units_occurring());
        }
        set
    }

    pub fn substitute_unit(&self, sym: &UnitSym, value: &Scalar) -> Result<Poly, ScalarError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute_unit(sym, value))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }

    pub fn substitute_units(
        &self,
        bindings: &BTreeMap<UnitSym, Scalar>,
    ) -> Result<Poly, ScalarError> {
        let mut p = self.clone();
        for (sym, value) in bindings {
            p = p.substitute_unit(sym, value)?;
        }
        Ok(p)
    }

    pub fn lift_to(&self, tower: &Arc<Tower>) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.lift_to(tower)).collect() }
    }

    /// True when printing needs parentheses inside a product.
    fn needs_parens(&self) -> bool {
        match self.coeffs.iter().filter(|c| !c.is_zero()).count() {
            0 => false,
            1 => {
                let (_, c) = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .find(|(_, c)| !c.is_zero())
                    .unwrap();
                c.to_string().contains(['+', '-', ' '])
            }
            _ => true,
        }
    }

    pub fn to_factor_string(&self) -> String {
        if self.needs_parens() {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &other.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        self + &(-other)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical ordering: by degree, then coefficient-wise.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let ctext = c.to_string();
            let simple_neg = ctext.starts_with('-') && !ctext.contains(" - ") && !ctext.contains(" + ");
            let (sign_neg, mag_text) = if simple_neg {
                (true, ctext[1..].to_string())
            } else {
                (false, ctext)
            };
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let needs_parens = mag_text.contains(" + ") || mag_text.contains(" - ");
            let coeff_part = if needs_parens {
                format!("({mag_text})")
            } else {
                mag_text
            };
            match (k, coeff_part.as_str()) {
                (0, _) => write!(f, "{coeff_part}")?,
                (1, "1") => write!(f, "z")?,
                (1, _) => write!(f, "{coeff_part}*z")?,
                (_, "1") => write!(f, "z^{k}")?,
                (_, _) => write!(f, "{coeff_part}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    #[test]
    fn derivative_examples() {
        // z^2 + 3z -> 2z + 3
        assert_eq!(p(&[0, 3, 1]).derivative(), p(&[3, 2]));
        // constants die
        assert_eq!(p(&[7]).derivative(), Poly::zero());
        // d = l2 z^2 + l1 z -> 2 l2 z + l1
        let d = Poly::from_coeffs(vec![
            Scalar::zero(),
            Scalar::from_rational(rat(5, 1)),
            Scalar::from_rational(rat(3, 1)),
        ]);
        assert_eq!(
            d.derivative(),
            Poly::from_coeffs(vec![
                Scalar::from_rational(rat(5, 1)),
                Scalar::from_rational(rat(6, 1))
            ])
        );
    }

    #[test]
    fn zero_polynomial_degree_is_none() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(p(&[0]).degree(), None);
        assert_eq!(p(&[1]).degree(), Some(0));
    }

    #[test]
    fn division_round_trips() {
        let a = p(&[2, 0, 1]); // z^2 + 2
        let b = p(&[1, 1]); // z + 1
        let (q, r) = (&(&a * &b) + &p(&[5])).div_rem(&b).unwrap();
        assert_eq!(q, a);
        assert_eq!(r, p(&[5]));
        assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_finds_common_factor() {
        let g = p(&[1, 1]);
        let a = &g * &p(&[3, 1]);
        let b = &g * &p(&[-2, 0, 1]);
        assert_eq!(a.gcd(&b).unwrap(), g);
    }

    #[test]
    fn display_descending() {
        assert_eq!(p(&[7, 20, 24, 16]).to_string(), "16*z^3 + 24*z^2 + 20*z + 7");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
