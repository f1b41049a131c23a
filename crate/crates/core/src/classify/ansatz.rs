//! Polynomial ansatz solving: substitute f = p e^{d} (p of bounded degree
//! with unknown coefficients) into an equation, match coefficients of the
//! resulting polynomial constraint, and solve the system by triangular
//! elimination with back-substitution.

use std::sync::Arc;

use crate::equation::{BinomialEquation, Shape};
use crate::error::ClassifyError;
use crate::exppoly::ExpPoly;
use crate::poly::Poly;
use crate::scalar::{Scalar, Tower, UnitSym};

use super::solve::solve_triangular;
use super::default_tower;

#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub poly: Poly,
    pub tower: Arc<Tower>,
}

/// The e^d-coefficient of (p e^d)'': p'' + 2 p' d' + p d'' + p (d')^2.
pub(crate) fn second_derivative_factor(p: &Poly, d: &Poly) -> Poly {
    let dp = d.derivative();
    let dpp = dp.derivative();
    let two = Poly::from_int(2);
    &(&p.derivative().derivative() + &(&(&two * &p.derivative()) * &dp))
        + &(&(p * &dpp) + &(p * &(&dp * &dp)))
}

/// The polynomial constraint C(p) with f = p e^{d}: LHS(f) = C(p) e^{2d}.
pub(crate) fn exponential_ansatz_constraint(eq: &BinomialEquation, p: &Poly) -> Poly {
    let d = &eq.d;
    let dp = d.derivative();
    let first = &p.derivative() + &(p * &dp); // e^d-coefficient of (p e^d)'
    let second = second_derivative_factor(p, d);
    match eq.shape {
        // a p (p'' + ...) - b (p' + p d')^2
        Shape::E12 => &(&eq.a * &(p * &second)) - &(&eq.b * &(&first * &first)),
        // a p p' + a p^2 d' - b (p'' + ...)^2
        Shape::E13 => &(&eq.a * &(p * &first)) - &(&eq.b * &(&second * &second)),
        // (a p' + a p d')(p'' + ...) - b p^2
        Shape::E14 => &(&(&eq.a * &first) * &second) - &(&eq.b * &(p * p)),
    }
}

/// Generic polynomial of the given degree with fresh unknown coefficients;
/// when `monic`, the leading coefficient is pinned to 1.
pub(crate) fn symbolic_poly(degree: usize, monic: bool, stem: &str) -> (Poly, Vec<UnitSym>) {
    let mut unknowns = Vec::new();
    let mut coeffs = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        if monic && j == degree {
            coeffs.push(Scalar::one());
        } else {
            let sym = UnitSym::free(format!("_{stem}{j}"));
            coeffs.push(Scalar::unit(&sym));
            unknowns.push(sym);
        }
    }
    (Poly::from_coeffs(coeffs), unknowns)
}

/// Solve `constraint(p) == 0` for a polynomial p of exactly the given degree.
pub(crate) fn solve_poly_constraint(
    tower: &Arc<Tower>,
    constraint: &dyn Fn(&Poly) -> Poly,
    degree: usize,
    monic: bool,
) -> Result<Vec<(Arc<Tower>, Poly)>, ClassifyError> {
    let (p_sym, unknowns) = symbolic_poly(degree, monic, "q");
    let cpoly = constraint(&p_sym);
    let equations: Vec<Scalar> = cpoly.coeffs().to_vec();
    let mut nonzero = vec![false; unknowns.len()];
    if !monic && !unknowns.is_empty() {
        *nonzero.last_mut().unwrap() = true; // leading coefficient
    }
    let assignments = solve_triangular(tower, &equations, &unknowns, &nonzero)?;
    let mut out = Vec::new();
    for (new_tower, env) in assignments {
        let coeffs: Vec<Scalar> = (0..=degree)
            .map(|j| {
                if monic && j == degree {
                    Scalar::one()
                } else {
                    env.get(&format!("_q{j}")).cloned().unwrap_or_else(Scalar::zero)
                }
            })
            .collect();
        let p = Poly::from_coeffs(coeffs);
        if p.degree() == Some(degree) || (degree == 0 && !monic && !p.is_zero()) || monic {
            if !out.iter().any(|(_, q)| *q == p) {
                out.push((new_tower, p));
            }
        }
    }
    Ok(out)
}

/// All polynomial p with deg p <= degree_bound such that f = p e^{d} solves
/// the equation exactly. `Empty` signals that no candidate degree survives
/// degree balancing at all.
pub fn polynomial_ansatz(
    eq: &BinomialEquation,
    degree_bound: usize,
) -> Result<Vec<AnsatzSolution>, ClassifyError> {
    let tower = default_tower(eq);
    let mut any_balanced = false;
    let mut out: Vec<AnsatzSolution> = Vec::new();
    for m in 0..=degree_bound {
        // Degree balance: the symbolic constraint bounds the reachable degree
        // from above, so deg c beyond it can never be matched.
        let (p_sym, _) = symbolic_poly(m, false, "bal");
        let lhs_generic = exponential_ansatz_constraint(eq, &p_sym);
        let lhs_deg = lhs_generic.degree().map(|d| d as i64).unwrap_or(-1);
        let c_deg = eq.c.degree().map(|d| d as i64).unwrap_or(-1);
        if c_deg > lhs_deg {
            continue;
        }
        any_balanced = true;
        let constraint = |p: &Poly| &exponential_ansatz_constraint(eq, p) - &eq.c;
        for (new_tower, p) in solve_poly_constraint(&tower, &constraint, m, false)? {
            if p.is_zero() {
                continue;
            }
            let f = ExpPoly::term(p.scalar_mul(&eq.exp_shift), eq.d.clone());
            if eq.residual(&f).is_zero() && !out.iter().any(|s| s.poly == p) {
                out.push(AnsatzSolution { poly: p, tower: new_tower });
            }
        }
    }
    if !any_balanced {
        return Err(ClassifyError::Empty);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::build_equation;

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    /// (3z+4) f' f'' - 8(3z+4) f^2 = 4(3z+4)^2 e^{4z}
    #[test]
    fn example_2_4_recovers_z_plus_one() {
        let a = poly(&[4, 3]);
        let b = &poly(&[8]) * &a;
        let c = &(&a * &a) * &poly(&[4]);
        let eq = build_equation(Shape::E14, a, b, c, poly(&[0, 2]), false).unwrap();
        let sols = polynomial_ansatz(&eq, 3).unwrap();
        let ps: Vec<String> = sols.iter().map(|s| s.poly.to_string()).collect();
        assert!(ps.contains(&"z + 1".to_string()), "{ps:?}");
        assert!(ps.contains(&"-z - 1".to_string()), "{ps:?}");
        assert_eq!(sols.len(), 2);
    }

    /// f' f'' - 2z f^2 = (8z^3 + 2z) e^{2 z^2}
    #[test]
    fn example_2_5_recovers_constants() {
        let eq = build_equation(
            Shape::E14,
            poly(&[1]),
            poly(&[0, 2]),
            poly(&[0, 2, 0, 8]),
            poly(&[0, 0, 1]),
            false,
        )
        .unwrap();
        let sols = polynomial_ansatz(&eq, 2).unwrap();
        let ps: Vec<String> = sols.iter().map(|s| s.poly.to_string()).collect();
        assert!(ps.contains(&"1".to_string()), "{ps:?}");
        assert!(ps.contains(&"-1".to_string()), "{ps:?}");
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn unbalanced_degree_is_empty() {
        // deg c = 3 cannot balance with bound 0 here: generic constant p gives
        // constraint degree 1 for these coefficients.
        let eq = build_equation(
            Shape::E14,
            poly(&[1]),
            poly(&[1]),
            poly(&[0, 0, 0, 1]),
            poly(&[0, 1]),
            false,
        )
        .unwrap();
        assert!(matches!(polynomial_ansatz(&eq, 0), Err(ClassifyError::Empty)));
    }
}
