//! Triangular towers of algebraic generators over the rationals.
//!
//! Each generator is a root of a monic polynomial whose coefficients live in
//! the tower below it, pinned down by a certified isolating disk. Reduction
//! order is insertion order; because every relation is monic and triangular
//! the rewriting below is confluent and the normal-form monomials are a free
//! module basis. Defining polynomials are not required to be irreducible;
//! inverting a zero divisor reports `ZeroDivisor` instead.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{ScalarError, TowerError};

use super::ball::ComplexBall;
use super::Scalar;

#[derive(Debug, Clone)]
pub struct TowerGenerator {
    name: String,
    /// Coefficients c_0..c_{deg-1} of the monic defining polynomial
    /// t^deg + c_{deg-1} t^{deg-1} + ... + c_0, over the prefix tower.
    lower_coeffs: Vec<Scalar>,
    /// Certified isolating disk: the interval Newton operator contracts on it.
    embedding: ComplexBall,
}

impl TowerGenerator {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.lower_coeffs.len()
    }

    pub fn lower_coeffs(&self) -> &[Scalar] {
        &self.lower_coeffs
    }

    pub fn embedding(&self) -> &ComplexBall {
        &self.embedding
    }

    fn structurally_eq(&self, other: &TowerGenerator) -> bool {
        self.name == other.name
            && self.lower_coeffs == other.lower_coeffs
            && self.embedding == other.embedding
    }
}

#[derive(Debug)]
pub struct Tower {
    gens: Vec<TowerGenerator>,
}

impl Tower {
    pub fn empty() -> Arc<Tower> {
        Arc::new(Tower { gens: Vec::new() })
    }

    pub fn gens(&self) -> &[TowerGenerator] {
        &self.gens
    }

    pub fn height(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.gens.len() <= other.gens.len()
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| a.structurally_eq(b))
    }

    /// The deeper of two compatible towers; `None` when neither is a prefix
    /// of the other.
    pub fn unify(a: &Arc<Tower>, b: &Arc<Tower>) -> Option<Arc<Tower>> {
        if Arc::ptr_eq(a, b) {
            return Some(a.clone());
        }
        if a.is_prefix_of(b) {
            Some(b.clone())
        } else if b.is_prefix_of(a) {
            Some(a.clone())
        } else {
            None
        }
    }

    /// Append a generator with defining polynomial
    /// t^deg + tail[deg-1] t^(deg-1) + ... + tail[0]
    /// after certifying that `hint` isolates exactly one of its roots.
    pub fn extend(
        self: &Arc<Tower>,
        name: impl Into<String>,
        tail: Vec<Scalar>,
        hint: &ComplexBall,
    ) -> Result<Arc<Tower>, TowerError> {
        if tail.len() < 2 {
            return Err(TowerError::NonMonic);
        }
        for c in &tail {
            assert!(
                c.tower().is_prefix_of(self),
                "defining coefficients must reduce over the existing tower"
            );
        }
        let name = name.into();
        assert!(
            self.generator_index(&name).is_none(),
            "generator name `{name}` already in tower"
        );
        let coeff_balls = embed_tail(&tail, 128)
            .map_err(|e| TowerError::NonIsolating(format!("coefficients not embeddable: {e}")))?;

        let count = count_roots_in_disk(&coeff_balls, hint)
            .ok_or_else(|| TowerError::NonIsolating("root count did not converge".into()))?;
        if count == 0 {
            return Err(TowerError::NonIsolating("hint disk contains no root".into()));
        }
        if count > 1 {
            return Err(TowerError::NonIsolating(format!(
                "hint disk contains {count} roots"
            )));
        }

        let certified = certify_root(&coeff_balls, hint)?;
        let mut gens = self.gens.clone();
        gens.push(TowerGenerator {
            name,
            lower_coeffs: tail,
            embedding: certified,
        });
        Ok(Arc::new(Tower { gens }))
    }

    /// Refine the idx-th generator's enclosure to roughly `prec` relative bits
    /// by interval Newton steps from the certified disk.
    pub fn refine_embedding(&self, idx: usize, prec: u32) -> Result<ComplexBall, ScalarError> {
        let gen = &self.gens[idx];
        let mut x = gen.embedding.clone();
        if x.meets_relative_precision(prec) {
            return Ok(x);
        }
        let work = prec + 32;
        let coeff_balls = embed_tail(&gen.lower_coeffs, work)?;
        for _ in 0..64 {
            let mid = ComplexBall::new(x.re.clone(), x.im.clone(), BigRational::zero());
            let fm = eval_monic(&coeff_balls, &mid);
            let fpx = eval_monic_derivative(&coeff_balls, &x);
            let Some(step) = fm.div(&fpx) else { break };
            let n = mid.sub(&step).compress(work);
            if x.strictly_contains(&n) || n.rad < x.rad {
                x = n;
            } else {
                break;
            }
            if x.meets_relative_precision(prec) {
                return Ok(x);
            }
        }
        Ok(x)
    }
}

fn embed_tail(tail: &[Scalar], prec: u32) -> Result<Vec<ComplexBall>, ScalarError> {
    tail.iter().map(|c| c.embed(prec)).collect()
}

/// Evaluate the monic polynomial with the given tail at x by Horner's rule.
fn eval_monic(tail: &[ComplexBall], x: &ComplexBall) -> ComplexBall {
    let mut acc = ComplexBall::one();
    for c in tail.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

/// Derivative of the monic polynomial evaluated at x.
fn eval_monic_derivative(tail: &[ComplexBall], x: &ComplexBall) -> ComplexBall {
    let deg = tail.len();
    let mut acc = ComplexBall::from_rational(BigRational::from_integer(BigInt::from(deg as i64)));
    for j in (1..deg).rev() {
        let cj = tail[j].scale(&BigRational::from_integer(BigInt::from(j as i64)));
        acc = acc.mul(x).add(&cj);
    }
    acc
}

fn certify_root(tail: &[ComplexBall], hint: &ComplexBall) -> Result<ComplexBall, TowerError> {
    // Polish the hint center by Newton iteration on exact midpoints.
    let mut m = ComplexBall::new(hint.re.clone(), hint.im.clone(), BigRational::zero());
    let scale = {
        let s = hint.center_abs_upper() + &hint.rad;
        if s.is_zero() {
            BigRational::new(BigInt::from(1), BigInt::from(1))
        } else {
            s
        }
    };
    let mut last_step = scale.clone();
    for _ in 0..80 {
        let fm = eval_monic(tail, &m);
        let fpm = eval_monic_derivative(tail, &m);
        let Some(step) = fm.div(&fpm) else { break };
        last_step = step.center_abs_upper();
        m = m.sub(&step).compress(192);
        m.rad = BigRational::zero();
        if last_step < &scale * BigRational::new(BigInt::from(1), BigInt::from(1u64 << 60)) {
            break;
        }
    }
    let dist = m.sub(hint).center_abs_upper();
    if dist > hint.rad.clone() + &hint.rad * BigRational::new(BigInt::from(1), BigInt::from(100)) {
        return Err(TowerError::NonIsolating(
            "Newton polishing converged outside the hint disk".into(),
        ));
    }
    // Grow a disk around the polished point until interval Newton contracts.
    let mut r = (&last_step * BigRational::from_integer(BigInt::from(16)))
        .max(&scale * BigRational::new(BigInt::from(1), BigInt::from(1u64 << 55)));
    for _ in 0..40 {
        let x = ComplexBall::new(m.re.clone(), m.im.clone(), r.clone());
        let fpx = eval_monic_derivative(tail, &x);
        if !fpx.contains_zero() {
            let mid = ComplexBall::new(x.re.clone(), x.im.clone(), BigRational::zero());
            let fm = eval_monic(tail, &mid);
            if let Some(step) = fm.div(&fpx) {
                let n = mid.sub(&step);
                if x.strictly_contains(&n) {
                    return Ok(n.compress(192));
                }
            }
        }
        r = &r * BigRational::from_integer(BigInt::from(8));
        if r > hint.rad.clone() + hint.rad.clone() {
            break;
        }
    }
    Err(TowerError::NonIsolating(
        "interval Newton failed to certify a unique root near the hint".into(),
    ))
}

/// Count roots of the monic polynomial inside the disk by the argument
/// principle in f64 arithmetic. Returns None when the integral refuses to
/// settle near an integer.
fn count_roots_in_disk(tail: &[ComplexBall], disk: &ComplexBall) -> Option<usize> {
    let center = disk.to_c64();
    let base_r = disk.rad.to_f64()?;
    if !base_r.is_finite() || base_r <= 0.0 {
        return None;
    }
    let coeffs: Vec<Complex64> = tail.iter().map(|c| c.to_c64()).collect();
    let deg = coeffs.len();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(deg as f64, 0.0);
        for j in (1..deg).rev() {
            p = p * z + coeffs[j];
            dp = dp * z + coeffs[j] * (j as f64);
        }
        p = p * z + coeffs[0];
        (p, dp)
    };
    for dilation in [1.0, 1.0037, 0.9953, 1.011] {
        let r = base_r * dilation;
        let mut nodes = 1024usize;
        while nodes <= 1 << 15 {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut hit_zero = false;
            for k in 0..nodes {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
                let dir = Complex64::from_polar(r, theta);
                let z = center + dir;
                let (p, dp) = eval(z);
                if p.norm() < 1e-140 {
                    hit_zero = true;
                    break;
                }
                sum += dp / p * dir;
            }
            if hit_zero {
                break;
            }
            let integral = sum / (nodes as f64);
            let count = integral.re.round();
            if (integral.re - count).abs() < 0.1 && integral.im.abs() < 0.1 && count >= 0.0 {
                return Some(count as usize);
            }
            nodes *= 2;
        }
    }
    None
}
