//! Numeric Nevanlinna functionals for exponential polynomials: proximity
//! m(r, .), zero counting by the argument principle, the characteristic
//! T = m + N, and growth-order / zero-exponent estimation by log-log slopes.
//!
//! Nothing here is interval-certified; values are f64 with the quadrature's
//! last refinement difference reported as `error_bound`. Exponential overflow
//! is avoided by working with per-term logarithms throughout (log |P e^Q| =
//! log |P| + Re Q), so radii like r = 50 with Q = z^2 are fine.

use num_complex::Complex64;

use crate::equation::BinomialEquation;
use crate::error::NumericError;
use crate::exppoly::ExpPoly;
use crate::scalar::Scalar;

const NODE_CAP: usize = 1 << 16;
const REL_TOL: f64 = 1e-4;

/// (r, m, N, T) data at one radius. For entire functions the pole-counting
/// term N(r, f) is identically zero, so T = m + N holds exactly by
/// construction; zero-counting data N(r, 1/f) is reported separately by
/// [`n_of`] and [`estimate_growth`].
#[derive(Debug, Clone)]
pub struct CharacteristicSample {
    pub r: f64,
    pub m: f64,
    pub n: f64,
    pub t: f64,
    pub quad_nodes: usize,
    pub error_bound: f64,
}

#[derive(Debug, Clone)]
pub struct GrowthFit {
    pub rho_hat: f64,
    pub lambda_hat: f64,
    pub r_grid: Vec<f64>,
    pub residual: f64,
}

/// Geometric default grid: 8 radii from 2 to 50.
pub fn default_r_grid() -> Vec<f64> {
    let (lo, hi, n) = (2.0f64, 50.0f64, 8);
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    coeff: Vec<Complex64>,
    expo: Vec<Complex64>,
}

/// f64-compiled exponential polynomial evaluated through per-term logs.
#[derive(Debug, Clone)]
pub struct Compiled {
    terms: Vec<CompiledTerm>,
}

fn poly_c64(p: &crate::poly::Poly) -> Result<Vec<Complex64>, NumericError> {
    p.coeffs()
        .iter()
        .map(|s| {
            s.embed(53)
                .map(|b| b.to_c64())
                .map_err(|e| match e {
                    crate::error::ScalarError::UnboundUnit(name) => NumericError::UnboundUnit(name),
                    other => NumericError::UnboundUnit(other.to_string()),
                })
        })
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

impl Compiled {
    pub fn new(f: &ExpPoly) -> Result<Self, NumericError> {
        let mut terms = Vec::new();
        for (q, p) in f.terms() {
            terms.push(CompiledTerm { coeff: poly_c64(p)?, expo: poly_c64(q)? });
        }
        Ok(Compiled { terms })
    }

    pub fn derivative(f: &ExpPoly) -> Result<Self, NumericError> {
        Compiled::new(&f.derivative())
    }

    /// Per-term complex logs log P_i(z) + Q_i(z); None for vanishing P_i(z).
    fn term_logs(&self, z: Complex64) -> Vec<Option<Complex64>> {
        self.terms
            .iter()
            .map(|t| {
                let p = horner(&t.coeff, z);
                if p.norm() == 0.0 {
                    None
                } else {
                    Some(p.ln() + horner(&t.expo, z))
                }
            })
            .collect()
    }

    fn max_log_re(&self, z: Complex64) -> f64 {
        self.term_logs(z)
            .into_iter()
            .flatten()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sum of exp(log_i - shift) for a caller-chosen shift.
    fn shifted_sum(&self, z: Complex64, shift: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in self.term_logs(z).into_iter().flatten() {
            acc += (l - shift).exp();
        }
        acc
    }

    /// log |f(z)|, or -inf at a zero of f.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        let shift = self.max_log_re(z);
        if !shift.is_finite() {
            return f64::NEG_INFINITY;
        }
        let s = self.shifted_sum(z, shift);
        if s.norm() == 0.0 {
            f64::NEG_INFINITY
        } else {
            shift + s.norm().ln()
        }
    }
}

/// log |num(z)/den(z)| through the shared-shift trick; +inf over a zero of
/// the denominator.
fn log_abs_ratio(num: &Compiled, den: &Compiled, z: Complex64) -> f64 {
    num.log_abs(z) - den.log_abs(z)
}

/// num(z)/den(z) computed stably against overflow.
fn eval_ratio(num: &Compiled, den: &Compiled, z: Complex64) -> Complex64 {
    let shift = num.max_log_re(z).max(den.max_log_re(z));
    if !shift.is_finite() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    let n = num.shifted_sum(z, shift);
    let d = den.shifted_sum(z, shift);
    n / d
}

fn circle(r: f64, k: usize, nodes: usize) -> Complex64 {
    let theta = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
    Complex64::from_polar(r, theta)
}

/// Composite trapezoid (periodic: the node mean) with doubling until the
/// successive difference drops below REL_TOL relatively, or the node cap.
fn periodic_mean<F: Fn(Complex64) -> f64>(
    r: f64,
    start_nodes: usize,
    f: F,
) -> (f64, usize, f64) {
    let mut nodes = start_nodes.max(64).next_power_of_two();
    let mut prev: Option<f64> = None;
    let mut err = f64::INFINITY;
    loop {
        let mut sum = 0.0;
        for k in 0..nodes {
            sum += f(circle(r, k, nodes));
        }
        let value = sum / nodes as f64;
        if let Some(p) = prev {
            err = (value - p).abs();
            let scale = value.abs().max(1.0);
            if err < REL_TOL * scale || nodes >= NODE_CAP {
                return (value, nodes, err);
            }
        }
        prev = Some(value);
        if nodes >= NODE_CAP {
            return (value, nodes, err);
        }
        nodes *= 2;
    }
}

/// Proximity function m(r, num/den) =
/// (1/2pi) ∫ log+ |num/den|(r e^{i theta}) d theta.
/// A denominator zero on the circle retries with a perturbed radius.
pub fn proximity(
    num: &ExpPoly,
    den: Option<&ExpPoly>,
    r: f64,
    nodes: usize,
) -> Result<(f64, usize, f64), NumericError> {
    let cnum = Compiled::new(num)?;
    let one = ExpPoly::one();
    let cden = Compiled::new(den.unwrap_or(&one))?;
    let mut radius = r;
    for attempt in 0..4 {
        // Detect denominator zeros on the circle at a coarse sample first.
        let probe_nodes = 512;
        let mut hit = false;
        for k in 0..probe_nodes {
            let z = circle(radius, k, probe_nodes);
            let shift = cden.max_log_re(z);
            if !shift.is_finite() || cden.shifted_sum(z, shift).norm() < 1e-13 {
                hit = true;
                break;
            }
        }
        if hit {
            radius = r * (1.0 + 3e-4 * (attempt + 1) as f64);
            continue;
        }
        let (value, used, err) = periodic_mean(radius, nodes, |z| {
            let l = log_abs_ratio(&cnum, &cden, z);
            if l.is_finite() {
                l.max(0.0)
            } else if l == f64::NEG_INFINITY {
                0.0
            } else {
                // num and den both vanished; measure-zero event, clamp.
                0.0
            }
        });
        return Ok((value.max(0.0), used, err));
    }
    Err(NumericError::PoleOnCircle(3))
}

/// Zero count n(r) of f on |z| <= r by the argument principle:
/// (1/2pi) ∫ Re[z f'(z)/f(z)] d theta.
pub fn count_zeros(f: &ExpPoly, r: f64) -> Result<usize, NumericError> {
    if f.is_zero() {
        return Err(NumericError::ZeroFunction);
    }
    let cf = Compiled::new(f)?;
    let cfp = Compiled::derivative(f)?;
    let mut radius = r;
    for attempt in 0..4 {
        match try_count(&cf, &cfp, radius) {
            Ok(n) => return Ok(n),
            Err(NumericError::ContourThroughZero) => {
                radius = r * (1.0 + 1e-5 * (attempt + 1) as f64);
            }
            Err(e) => return Err(e),
        }
    }
    Err(NumericError::ContourThroughZero)
}

fn try_count(cf: &Compiled, cfp: &Compiled, r: f64) -> Result<usize, NumericError> {
    let mut nodes = 512usize;
    let mut prev: Option<f64> = None;
    loop {
        let mut sum = 0.0;
        for k in 0..nodes {
            let z = circle(r, k, nodes);
            let shift = cf.max_log_re(z);
            if !shift.is_finite() {
                return Err(NumericError::ContourThroughZero);
            }
            let fv = cf.shifted_sum(z, shift);
            if fv.norm() < 1e-12 {
                return Err(NumericError::ContourThroughZero);
            }
            let ratio = cfp.shifted_sum(z, shift) / fv;
            sum += (ratio * z).re;
        }
        let integral = sum / nodes as f64;
        let rounded = integral.round();
        let settled = prev.map(|p| (integral - p).abs() < 0.05).unwrap_or(false);
        if (integral - rounded).abs() < 0.1 && settled && rounded >= -0.001 {
            return Ok(rounded.max(0.0) as usize);
        }
        prev = Some(integral);
        if nodes >= NODE_CAP {
            return Err(NumericError::NonConvergent((integral - rounded).abs()));
        }
        nodes *= 2;
    }
}

/// Exact order of vanishing at the origin together with the leading Taylor
/// coefficient (f(z) ~ c z^k near 0), computed symbolically.
pub fn origin_order(f: &ExpPoly) -> Result<(usize, Scalar), NumericError> {
    if f.is_zero() {
        return Err(NumericError::ZeroFunction);
    }
    let mut g = f.clone();
    let mut factorial = 1u64;
    for k in 0..64 {
        let v = value_at_origin(&g);
        if !v.is_zero() {
            let c = &v * &Scalar::from_rational(crate::scalar::rat(1, factorial as i64));
            return Ok((k, c));
        }
        g = g.derivative();
        factorial = factorial.saturating_mul((k + 1) as u64);
    }
    Err(NumericError::NonConvergent(64.0))
}

fn value_at_origin(f: &ExpPoly) -> Scalar {
    // Q(0) = 0 for every canonical key, so f(0) = sum of P_i(0).
    let mut acc = Scalar::zero();
    for (_, p) in f.terms() {
        acc = &acc + &p.constant_term();
    }
    acc
}

/// Integrated zero-counting function N(r, 1/f) =
/// ∫_0^r (n(t) - n(0)) dt/t + n(0) log r, with n sampled on a log grid.
pub fn n_of(f: &ExpPoly, r: f64) -> Result<f64, NumericError> {
    let (n0, _) = origin_order(f)?;
    let grid_points = 28usize;
    let r_min = r * 1e-3;
    let mut acc = 0.0;
    let mut prev_t = r_min;
    let mut prev_n = count_zeros(f, r_min)?;
    for j in 1..=grid_points {
        let t = r_min * (r / r_min).powf(j as f64 / grid_points as f64);
        let n_t = count_zeros(f, t)?;
        // n is right-continuous and increasing; the left value integrates the
        // step function one subinterval late at worst.
        acc += (prev_n as f64 - n0 as f64) * (t / prev_t).ln();
        prev_t = t;
        prev_n = n_t;
    }
    let _ = prev_n;
    Ok(acc + n0 as f64 * r.ln().max(0.0))
}

/// Characteristic sample for an entire function: T = m + N with N(r, f) = 0.
pub fn characteristic(
    f: &ExpPoly,
    r: f64,
    nodes: usize,
) -> Result<CharacteristicSample, NumericError> {
    let (m, used, err) = proximity(f, None, r, nodes)?;
    Ok(CharacteristicSample { r, m, n: 0.0, t: m, quad_nodes: used, error_bound: err })
}

/// Least-squares slope of y against x, fitted on the upper half of the grid
/// where additive lower-order terms have died off.
fn tail_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let keep = (xs.len() / 2).max(3).min(xs.len());
    let start = xs.len() - keep;
    slope(&xs[start..], &ys[start..])
}

/// Least-squares slope of y against x.
fn slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    let k = num / den;
    let b = my - k * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (k * x + b)).abs())
        .fold(0.0, f64::max);
    (k, residual)
}

/// Growth estimation: rho_hat from log T vs log r, lambda_hat from
/// log N(r, 1/f) vs log r (0 when only finitely many zeros are detected).
pub fn estimate_growth(f: &ExpPoly, r_grid: &[f64]) -> Result<GrowthFit, NumericError> {
    assert!(r_grid.len() >= 5, "growth estimation needs at least 5 radii");
    let mut log_r = Vec::new();
    let mut log_t = Vec::new();
    for &r in r_grid {
        let sample = characteristic(f, r, 256)?;
        if sample.t > 1e-9 {
            log_r.push(r.ln());
            log_t.push(sample.t.ln());
        }
    }
    if log_r.len() < 3 {
        return Err(NumericError::NonConvergent(log_r.len() as f64));
    }
    let (rho_hat, residual) = tail_slope(&log_r, &log_t);

    // Zero side: count on the grid; a stagnant count means finitely many.
    let mut counts = Vec::new();
    for &r in r_grid {
        counts.push(count_zeros(f, r)?);
    }
    let last = *counts.last().unwrap();
    let mid = counts[(counts.len() * 3) / 5];
    let lambda_hat = if last == mid || last == 0 {
        0.0
    } else {
        let mut lx = Vec::new();
        let mut ly = Vec::new();
        for &r in r_grid {
            let nv = n_of(f, r)?;
            if nv > 1e-9 {
                lx.push(r.ln());
                ly.push(nv.ln());
            }
        }
        if lx.len() < 3 {
            0.0
        } else {
            tail_slope(&lx, &ly).0
        }
    };
    Ok(GrowthFit { rho_hat, lambda_hat, r_grid: r_grid.to_vec(), residual })
}

/// Numeric estimate of the eq13 case-(iii) proximity condition
/// m(r, f' / (h f' - a c f'')) against T(r, f) on a grid. A ratio well below
/// 1 is consistent with the S(r, f) side; this is a score, never a verdict.
#[derive(Debug, Clone)]
pub struct Case3Score {
    pub samples: Vec<(f64, f64, f64)>,
    pub ratio: f64,
}

pub fn theorem1_case3_score(
    eq: &BinomialEquation,
    f: &ExpPoly,
    r_grid: &[f64],
) -> Result<Case3Score, NumericError> {
    let aux = eq
        .aux_pair()
        .map_err(|e| NumericError::UnboundUnit(e.to_string()))?;
    let fp = f.derivative();
    let fpp = fp.derivative();
    let ac = &eq.a * &eq.c;
    let den = &fp.poly_mul(&aux.h) - &fpp.poly_mul(&ac);
    if den.is_zero() {
        // Case (i) branch; the score does not apply.
        return Ok(Case3Score { samples: Vec::new(), ratio: 0.0 });
    }
    let mut samples = Vec::new();
    let mut worst = 0.0f64;
    for &r in r_grid {
        let (m, _, _) = proximity(&fp, Some(&den), r, 256)?;
        let t = characteristic(f, r, 256)?.t;
        if t > 1e-9 {
            worst = worst.max(m / t);
        }
        samples.push((r, m, t));
    }
    Ok(Case3Score { samples, ratio: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    fn e_pow(k: i64) -> ExpPoly {
        ExpPoly::exp(poly(&[0, k]))
    }

    #[test]
    fn proximity_of_exponential_closed_form() {
        // m(r, e^z) = r/pi
        let (m, nodes, _) = proximity(&e_pow(1), None, 20.0, 2048).unwrap();
        assert!(nodes >= 2048);
        assert!((m * std::f64::consts::PI / 20.0 - 1.0).abs() < 1e-3, "m = {m}");
        // m(5, e^{z^2}) = 25/pi
        let g = ExpPoly::exp(poly(&[0, 0, 1]));
        let (m2, _, _) = proximity(&g, None, 5.0, 2048).unwrap();
        assert!((m2 - 25.0 / std::f64::consts::PI).abs() < 1e-2, "m2 = {m2}");
        // constants: log+ 1 = 0
        let (m3, _, _) = proximity(&ExpPoly::one(), None, 10.0, 64).unwrap();
        assert_eq!(m3, 0.0);
    }

    #[test]
    fn count_zeros_examples() {
        // e^z - 1 has zeros 2 pi i k: |k| <= 3 inside r = 20, so 7 zeros.
        let f = &e_pow(1) - &ExpPoly::one();
        assert_eq!(count_zeros(&f, 20.0).unwrap(), 7);
        // e^z is zero-free
        assert_eq!(count_zeros(&e_pow(1), 11.3).unwrap(), 0);
        // e^{2z} + 2 e^{-4z} vanishes along a vertical line
        let g = &e_pow(2) + &e_pow(-4).scalar_mul(&Scalar::from_int(2));
        assert!(count_zeros(&g, 10.0).unwrap() > 0);
    }

    #[test]
    fn characteristic_examples() {
        let s = characteristic(&e_pow(1), 20.0, 2048).unwrap();
        assert!((s.t - 20.0 / std::f64::consts::PI).abs() < 1e-2);
        assert_eq!(s.t, s.m + s.n);
        // z^3 at r = e: T = 3 log r = 3
        let cubic = ExpPoly::from_poly(poly(&[0, 0, 0, 1]));
        let s2 = characteristic(&cubic, std::f64::consts::E, 512).unwrap();
        assert!((s2.t - 3.0).abs() < 2e-2, "t = {}", s2.t);
        // e^{2z} + 2 at r = 10: e^{2z} dominates the right half circle and the
        // constant the left, so T = 20/pi + (ln 2)/2 + o(1).
        let f = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
        let s3 = characteristic(&f, 10.0, 1024).unwrap();
        let dominant = 20.0 / std::f64::consts::PI;
        let oracle = dominant + 0.5 * 2f64.ln();
        assert!((s3.t - oracle).abs() < 0.05, "t = {}", s3.t);
        assert!((s3.t - dominant).abs() < 0.06 * dominant, "t = {}", s3.t);
    }

    #[test]
    fn growth_estimates() {
        let grid = default_r_grid();
        // rho(e^{z^2}) = 2
        let g = ExpPoly::exp(poly(&[0, 0, 1]));
        let fit = estimate_growth(&g, &grid).unwrap();
        assert!(fit.rho_hat > 1.95 && fit.rho_hat < 2.05, "rho = {}", fit.rho_hat);
        // e^{2z} + 2: order 1 and zeros on a line (lambda = 1)
        let f = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
        let fit2 = estimate_growth(&f, &grid).unwrap();
        assert!(fit2.rho_hat > 0.95 && fit2.rho_hat < 1.05, "rho = {}", fit2.rho_hat);
        assert!(fit2.lambda_hat > 0.9 && fit2.lambda_hat < 1.1, "lambda = {}", fit2.lambda_hat);
        // (z+1) e^{2z}: a single zero, lambda_hat = 0
        let h = ExpPoly::term(poly(&[1, 1]), poly(&[0, 2]));
        let fit3 = estimate_growth(&h, &grid).unwrap();
        assert!(fit3.lambda_hat.abs() < 0.05, "lambda = {}", fit3.lambda_hat);
        assert!(fit3.rho_hat >= fit3.lambda_hat - 0.1);
    }

    #[test]
    fn origin_order_exact() {
        // f = z^3: order 3, leading coefficient 1
        let f = ExpPoly::from_poly(poly(&[0, 0, 0, 1]));
        let (k, c) = origin_order(&f).unwrap();
        assert_eq!(k, 3);
        assert!(c.is_one());
        // e^z - 1 = z + ...: order 1
        let g = &e_pow(1) - &ExpPoly::one();
        let (k2, c2) = origin_order(&g).unwrap();
        assert_eq!(k2, 1);
        assert!(c2.is_one());
    }
}
