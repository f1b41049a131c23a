//! Complex disk arithmetic over exact rationals.
//!
//! A [`ComplexBall`] is a closed disk `{ z : |z - center| <= rad }` with
//! rational center components and a rational radius. Addition, subtraction,
//! multiplication and inversion of disks are computed exactly (inversion maps
//! a zero-free disk onto a disk with rational data, so no rounding enters
//! except where [`ComplexBall::compress`] is called to keep denominators
//! small).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Floor of sqrt(q) for q >= 0.
fn sqrt_lower(q: &BigRational) -> BigRational {
    debug_assert!(!q.is_negative());
    let n = q.numer() * q.denom();
    BigRational::new(n.sqrt(), q.denom().clone())
}

/// Upper bound on sqrt(q) for q >= 0, exact on perfect squares.
fn sqrt_upper(q: &BigRational) -> BigRational {
    debug_assert!(!q.is_negative());
    let n = q.numer() * q.denom();
    let s = n.sqrt();
    if &s * &s == n {
        BigRational::new(s, q.denom().clone())
    } else {
        BigRational::new(s + 1, q.denom().clone())
    }
}

/// Round q to a dyadic rational with denominator 2^bits; |error| <= 2^-(bits+1).
fn dyadic_round(q: &BigRational, bits: u32) -> BigRational {
    let scaled = q * BigRational::from_integer(BigInt::one() << bits);
    let rounded = scaled.round();
    BigRational::new(rounded.to_integer(), BigInt::one() << bits)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBall {
    pub re: BigRational,
    pub im: BigRational,
    pub rad: BigRational,
}

impl ComplexBall {
    pub fn new(re: BigRational, im: BigRational, rad: BigRational) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad }
    }

    pub fn zero() -> Self {
        ComplexBall::new(BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        ComplexBall::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        ComplexBall::new(q, BigRational::zero(), BigRational::zero())
    }

    pub fn from_f64(re: f64, im: f64, rad: f64) -> Option<Self> {
        Some(ComplexBall::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
            BigRational::from_float(rad.abs())?,
        ))
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// |center|^2, exact.
    pub fn center_norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Rational upper bound on |center|.
    pub fn center_abs_upper(&self) -> BigRational {
        sqrt_upper(&self.center_norm_sq())
    }

    /// Rational lower bound on |center|.
    pub fn center_abs_lower(&self) -> BigRational {
        sqrt_lower(&self.center_norm_sq())
    }

    /// Upper bound on |z| over the disk.
    pub fn abs_upper(&self) -> BigRational {
        self.center_abs_upper() + &self.rad
    }

    /// Lower bound on |z| over the disk (0 if the disk contains 0).
    pub fn abs_lower(&self) -> BigRational {
        let l = self.center_abs_lower() - &self.rad;
        if l.is_negative() {
            BigRational::zero()
        } else {
            l
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.center_norm_sq() <= &self.rad * &self.rad
    }

    /// True when `other` lies strictly inside `self`.
    pub fn strictly_contains(&self, other: &ComplexBall) -> bool {
        let dre = &self.re - &other.re;
        let dim = &self.im - &other.im;
        let dist_sq = &dre * &dre + &dim * &dim;
        let slack = &self.rad - &other.rad;
        if slack.is_negative() || slack.is_zero() {
            return false;
        }
        dist_sq < &slack * &slack
    }

    pub fn add(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall::new(
            &self.re + &other.re,
            &self.im + &other.im,
            &self.rad + &other.rad,
        )
    }

    pub fn sub(&self, other: &ComplexBall) -> ComplexBall {
        ComplexBall::new(
            &self.re - &other.re,
            &self.im - &other.im,
            &self.rad + &other.rad,
        )
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall::new(-self.re.clone(), -self.im.clone(), self.rad.clone())
    }

    pub fn mul(&self, other: &ComplexBall) -> ComplexBall {
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        // |a*e_b + b*e_a + e_a*e_b| <= |a| r_b + |b| r_a + r_a r_b
        let rad = self.center_abs_upper() * &other.rad
            + other.center_abs_upper() * &self.rad
            + &self.rad * &other.rad;
        ComplexBall::new(re, im, rad)
    }

    pub fn scale(&self, q: &BigRational) -> ComplexBall {
        ComplexBall::new(&self.re * q, &self.im * q, &self.rad * q.abs())
    }

    /// Exact image of the disk under z -> 1/z. Fails when the disk contains 0.
    pub fn inv(&self) -> Option<ComplexBall> {
        let norm = self.center_norm_sq();
        let r_sq = &self.rad * &self.rad;
        if norm <= r_sq {
            return None;
        }
        let denom = norm - r_sq;
        Some(ComplexBall::new(
            &self.re / &denom,
            -(&self.im / &denom),
            &self.rad / &denom,
        ))
    }

    pub fn div(&self, other: &ComplexBall) -> Option<ComplexBall> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut n: u64) -> ComplexBall {
        let mut base = self.clone();
        let mut acc = ComplexBall::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Round center components to dyadics with `bits` fractional bits, folding
    /// the rounding error into the radius.
    pub fn compress(&self, bits: u32) -> ComplexBall {
        let re = dyadic_round(&self.re, bits);
        let im = dyadic_round(&self.im, bits);
        let err_re = (&re - &self.re).abs();
        let err_im = (&im - &self.im).abs();
        let rad = dyadic_round(&(&self.rad + err_re + err_im), bits)
            + BigRational::new(BigInt::one(), BigInt::one() << bits);
        ComplexBall::new(re, im, rad)
    }

    /// Rigorous enclosure of exp over the disk, targeting roughly `prec`
    /// significant bits. Argument reduction exp(w) = exp(w/2^k)^(2^k) keeps the
    /// Taylor series short; the tail bound is folded into the radius.
    pub fn exp(&self, prec: u32) -> ComplexBall {
        // exp(center + e) = exp(center) * exp(e), |exp(e)-1| <= r*e^r <= 2r for r <= 1/2.
        let center = ComplexBall::new(self.re.clone(), self.im.clone(), BigRational::zero());
        let mag = center.center_abs_upper();
        let mut k = 0u32;
        let mut bound = mag;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        while bound > half {
            bound = bound / big(2);
            k += 1;
        }
        let work_bits = prec + k + 24;
        let scale = BigRational::new(BigInt::one(), BigInt::one() << k);
        let w = center.scale(&scale);

        // Taylor sum with explicit tail bound: once |w| <= 1/2 the terms at
        // least halve, so the tail after term t_n is bounded by 2*|t_{n+1}|.
        let target = BigRational::new(BigInt::one(), BigInt::one() << (work_bits + 8));
        let mut sum = ComplexBall::one();
        let mut term = ComplexBall::one();
        let mut n: u64 = 0;
        loop {
            n += 1;
            term = term.mul(&w).scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
            sum = sum.add(&term);
            let t_mag = term.abs_upper();
            if t_mag < target || n > 4 * (work_bits as u64) {
                sum.rad += t_mag * big(2);
                break;
            }
        }
        let mut result = sum;
        for _ in 0..k {
            result = result.mul(&result).compress(work_bits);
        }
        // Widen for the original radius: |exp(e) - 1| <= rad * e^rad.
        if !self.rad.is_zero() {
            let r = &self.rad;
            let widen = if *r <= half {
                r * big(2)
            } else {
                // crude but safe: e^r <= 4^r <= 4^ceil(r)
                let mut factor = BigRational::one();
                let mut left = r.clone();
                while left.is_positive() {
                    factor = factor * big(4);
                    left = left - BigRational::one();
                }
                r * factor
            };
            let extra = result.abs_upper() * widen;
            result.rad += extra;
        }
        result.compress(work_bits)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the radius is at most 2^-prec times the center magnitude.
    pub fn meets_relative_precision(&self, prec: u32) -> bool {
        if self.rad.is_zero() {
            return true;
        }
        let bound = self.center_abs_lower() * BigRational::new(BigInt::one(), BigInt::one() << prec);
        self.rad <= bound
    }
}

impl std::fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = self.to_c64();
        write!(f, "({} + {}i ± {:.3e})", c.re, c.im, self.rad.to_f64().unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inversion_is_exact_on_real_disk() {
        // 1/[1,3] = [1/3,1]: disk center 2/3, radius 1/3
        let b = ComplexBall::new(rat(2, 1), rat(0, 1), rat(1, 1));
        let inv = b.inv().unwrap();
        assert_eq!(inv.re, rat(2, 3));
        assert_eq!(inv.rad, rat(1, 3));
    }

    #[test]
    fn disk_containing_zero_has_no_inverse() {
        let b = ComplexBall::new(rat(1, 2), rat(0, 1), rat(1, 1));
        assert!(b.inv().is_none());
    }

    #[test]
    fn exp_of_one_matches_e() {
        let b = ComplexBall::from_rational(rat(1, 1));
        let e = b.exp(64);
        let expected = std::f64::consts::E;
        assert!((e.to_c64().re - expected).abs() < 1e-12);
        assert!(e.rad < rat(1, 1u64 as i64) * rat(1, 1 << 40));
    }

    #[test]
    fn exp_of_large_argument_stays_tight() {
        let b = ComplexBall::from_rational(rat(20, 1));
        let e = b.exp(64);
        assert!(e.meets_relative_precision(40));
        let ratio = e.to_c64().re / 20f64.exp();
        assert!((ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn multiplication_encloses_product() {
        let a = ComplexBall::new(rat(3, 2), rat(1, 3), rat(1, 100));
        let b = ComplexBall::new(rat(-2, 5), rat(7, 4), rat(1, 50));
        let p = a.mul(&b);
        let exact = a.to_c64() * b.to_c64();
        let diff = (p.to_c64() - exact).norm();
        assert!(BigRational::from_float(diff).unwrap() <= p.rad + rat(1, 1_000_000_000));
    }
}
