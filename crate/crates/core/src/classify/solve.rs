//! Exact constraint solving: square roots over the tower and triangular
//! elimination for polynomial coefficient systems.
//!
//! Everything here solves one symbol at a time. A step must be a univariate
//! polynomial of degree at most two in the chosen unknown; anything else is
//! reported as `CapabilityExceeded` rather than approximated.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::ClassifyError;
use crate::scalar::{ComplexBall, Scalar, Tower, UnitSym};

/// Square roots of `x`, extending the tower when needed. The unit-symbol part
/// of `x` must have even exponents (it is halved); the tower part either is a
/// rational perfect square or becomes a fresh generator of `t^2 - x0`.
pub fn sqrt_scalar(
    x: &Scalar,
    tower: &Arc<Tower>,
) -> Result<(Arc<Tower>, Vec<Scalar>), ClassifyError> {
    if x.is_zero() {
        return Ok((tower.clone(), vec![Scalar::zero()]));
    }
    let (units, core) = x.split_unit_monomial().ok_or_else(|| {
        ClassifyError::CapabilityExceeded(format!(
            "cannot take a square root of a sum mixing unit monomials: {x}"
        ))
    })?;
    let mut half = Vec::with_capacity(units.len());
    for (sym, e) in &units {
        if e % 2 != 0 {
            return Err(ClassifyError::CapabilityExceeded(format!(
                "odd power of unit symbol {} under a square root",
                sym.name()
            )));
        }
        half.push((sym.clone(), e / 2));
    }
    let half_mon = Scalar::unit_monomial(&half);
    if let Some(q) = core.as_rational() {
        if let Some(r) = rational_sqrt_exact(&q) {
            let root = &Scalar::from_rational(r) * &half_mon;
            return Ok((tower.clone(), vec![root.clone(), -&root]));
        }
    }
    // Adjoin a fresh square root generator.
    let core = core.lift_to(tower);
    let name = fresh_generator_name(tower, "r");
    let hint = sqrt_hint(&core)?;
    let extended = tower.extend(&name, vec![-&core, Scalar::zero()], &hint)?;
    let root = &Scalar::generator_by_name(&extended, &name).unwrap() * &half_mon;
    Ok((extended, vec![root.clone(), -&root]))
}

/// Exact rational square root for non-negative perfect squares.
fn rational_sqrt_exact(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let sn = q.numer().sqrt();
    let sd = q.denom().sqrt();
    if &sn * &sn == *q.numer() && &sd * &sd == *q.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn fresh_generator_name(tower: &Arc<Tower>, stem: &str) -> String {
    let mut k = tower.height() + 1;
    loop {
        let name = format!("{stem}{k}");
        if tower.generator_index(&name).is_none() {
            return name;
        }
        k += 1;
    }
}

/// Principal-square-root hint disk for certifying t^2 - x0.
fn sqrt_hint(x0: &Scalar) -> Result<ComplexBall, ClassifyError> {
    let ball = x0.embed(60)?;
    let c = ball.to_c64();
    let root = c.sqrt();
    let scale = root.norm().max(1e-30);
    ComplexBall::from_f64(root.re, root.im, scale * 1e-5 + 1e-25).ok_or_else(|| {
        ClassifyError::CapabilityExceeded("square-root hint is not representable".into())
    })
}

/// Adjoin the primitive cube root of unity unless it is already present.
pub fn ensure_omega(tower: &Arc<Tower>) -> Result<(Arc<Tower>, Scalar), ClassifyError> {
    for (i, gen) in tower.gens().iter().enumerate() {
        if gen.name() == "w"
            && gen.lower_coeffs() == [Scalar::one(), Scalar::one()]
        {
            return Ok((tower.clone(), Scalar::generator(tower, i)));
        }
    }
    let hint = ComplexBall::from_f64(-0.5, 0.866_025_403_784_438_6, 0.01).unwrap();
    let extended = tower.extend("w", vec![Scalar::one(), Scalar::one()], &hint)?;
    let w = Scalar::generator_by_name(&extended, "w").unwrap();
    Ok((extended, w))
}

/// One solved assignment of the unknowns, possibly over an extended tower.
pub type Assignment = (Arc<Tower>, BTreeMap<String, Scalar>);

/// Solve a system of scalar equations (each must vanish) for the given
/// unknown unit symbols by constraint propagation: repeatedly pick an
/// equation mentioning exactly one unsolved unknown, solve it (degree <= 2,
/// adjoining square roots as needed), branch on the roots and substitute.
pub fn solve_triangular(
    tower: &Arc<Tower>,
    equations: &[Scalar],
    unknowns: &[UnitSym],
    nonzero: &[bool],
) -> Result<Vec<Assignment>, ClassifyError> {
    assert_eq!(unknowns.len(), nonzero.len());
    struct State {
        tower: Arc<Tower>,
        eqs: Vec<Scalar>,
        env: BTreeMap<String, Scalar>,
        remaining: Vec<usize>,
    }
    let mut stack = vec![State {
        tower: tower.clone(),
        eqs: equations.to_vec(),
        env: BTreeMap::new(),
        remaining: (0..unknowns.len()).collect(),
    }];
    let mut results: Vec<Assignment> = Vec::new();

    while let Some(mut state) = stack.pop() {
        state.eqs.retain(|e| !e.is_zero());
        if state.eqs.is_empty() {
            if !state.remaining.is_empty() {
                return Err(ClassifyError::CapabilityExceeded(
                    "underdetermined coefficient system".into(),
                ));
            }
            if !results.iter().any(|(_, env)| *env == state.env) {
                results.push((state.tower, state.env));
            }
            continue;
        }
        // Dead branch: an unsatisfiable equation with no unknowns left in it.
        let mentions = |eq: &Scalar, idx: usize| eq.contains_unit(&unknowns[idx]);
        if let Some(_dead) = state.eqs.iter().find(|eq| {
            state.remaining.iter().all(|&i| !mentions(eq, i))
        }) {
            // Nonzero residual equation that no unknown can influence.
            continue;
        }
        // Pick an equation that mentions exactly one unsolved unknown.
        let picked = state.eqs.iter().enumerate().find_map(|(ei, eq)| {
            let mentioned: Vec<usize> = state
                .remaining
                .iter()
                .copied()
                .filter(|&i| mentions(eq, i))
                .collect();
            if mentioned.len() == 1 {
                Some((ei, mentioned[0]))
            } else {
                None
            }
        });
        let Some((ei, ui)) = picked else {
            return Err(ClassifyError::CapabilityExceeded(
                "no equation is univariate in a single remaining unknown".into(),
            ));
        };
        let sym = &unknowns[ui];
        let eq = state.eqs[ei].clone();
        let (lo, hi) = eq.unit_exponent_range(sym).unwrap();
        if lo < 0 {
            return Err(ClassifyError::CapabilityExceeded(
                "negative power of an unknown in a constraint".into(),
            ));
        }
        let roots: Vec<(Arc<Tower>, Scalar)> = match hi {
            0 => unreachable!("equation mentions the unknown"),
            1 => {
                let a1 = eq.coefficient_of_unit(sym, 1);
                let a0 = eq.coefficient_of_unit(sym, 0);
                match a1.invert() {
                    Ok(inv) => vec![(state.tower.clone(), -&(&a0 * &inv))],
                    Err(_) => {
                        return Err(ClassifyError::CapabilityExceeded(format!(
                            "leading coefficient {a1} of a linear step is not invertible"
                        )))
                    }
                }
            }
            2 => {
                let a2 = eq.coefficient_of_unit(sym, 2);
                let a1 = eq.coefficient_of_unit(sym, 1);
                let a0 = eq.coefficient_of_unit(sym, 0);
                solve_quadratic(&state.tower, &a2, &a1, &a0)?
            }
            _ => {
                return Err(ClassifyError::CapabilityExceeded(format!(
                    "constraint of degree {hi} in one unknown"
                )))
            }
        };
        for (new_tower, root) in roots {
            if nonzero[ui] && root.is_zero() {
                continue;
            }
            let mut eqs = Vec::with_capacity(state.eqs.len());
            let mut ok = true;
            for (j, e) in state.eqs.iter().enumerate() {
                if j == ei {
                    continue;
                }
                match e.substitute_unit(sym, &root) {
                    Ok(s) => eqs.push(s),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let mut env = state.env.clone();
            for v in env.values_mut() {
                if let Ok(s) = v.substitute_unit(sym, &root) {
                    *v = s;
                }
            }
            env.insert(sym.name().to_string(), root);
            let remaining = state.remaining.iter().copied().filter(|&i| i != ui).collect();
            stack.push(State { tower: new_tower, eqs, env, remaining });
        }
    }
    Ok(results)
}

/// Roots of a2 x^2 + a1 x + a0 over the tower (a2 invertible), with square
/// roots adjoined when the discriminant is not a rational perfect square.
fn solve_quadratic(
    tower: &Arc<Tower>,
    a2: &Scalar,
    a1: &Scalar,
    a0: &Scalar,
) -> Result<Vec<(Arc<Tower>, Scalar)>, ClassifyError> {
    let inv2a = (&Scalar::from_int(2) * a2).invert().map_err(|_| {
        ClassifyError::CapabilityExceeded(format!(
            "quadratic leading coefficient {a2} is not invertible"
        ))
    })?;
    let four = Scalar::from_int(4);
    let disc = &(a1 * a1) - &(&(&four * a2) * a0);
    let (new_tower, sqrts) = sqrt_scalar(&disc, tower)?;
    let mut roots = Vec::new();
    for s in sqrts {
        let root = &(&s - a1) * &inv2a.lift_to(&new_tower);
        if !roots.iter().any(|(_, r): &(Arc<Tower>, Scalar)| *r == root) {
            roots.push((new_tower.clone(), root));
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let (tower, roots) = sqrt_scalar(&Scalar::from_int(4), &Tower::empty()).unwrap();
        assert_eq!(tower.height(), 0);
        assert!(roots.contains(&Scalar::from_int(2)));
        assert!(roots.contains(&Scalar::from_int(-2)));
    }

    #[test]
    fn sqrt_of_two_extends_tower() {
        let (tower, roots) = sqrt_scalar(&Scalar::from_int(2), &Tower::empty()).unwrap();
        assert_eq!(tower.height(), 1);
        let r = &roots[0];
        assert_eq!(&(r * r), &Scalar::from_int(2).lift_to(&tower));
        let b = r.embed(40).unwrap().to_c64();
        assert!((b.re.abs() - std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn sqrt_of_negative_rational_is_imaginary() {
        let (tower, roots) = sqrt_scalar(&Scalar::from_int(-4), &Tower::empty()).unwrap();
        assert_eq!(tower.height(), 1);
        let b = roots[0].embed(40).unwrap().to_c64();
        assert!(b.re.abs() < 1e-9);
        assert!((b.im.abs() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sqrt_halves_even_unit_powers() {
        let u = UnitSym::free("u");
        let x = &Scalar::from_int(9) * &Scalar::unit_pow(&u, 2);
        let (_, roots) = sqrt_scalar(&x, &Tower::empty()).unwrap();
        let expected = &Scalar::from_int(3) * &Scalar::unit(&u);
        assert!(roots.contains(&expected));
    }

    #[test]
    fn sqrt_rejects_odd_unit_powers() {
        let u = UnitSym::free("u");
        let x = Scalar::unit_pow(&u, 3);
        assert!(matches!(
            sqrt_scalar(&x, &Tower::empty()),
            Err(ClassifyError::CapabilityExceeded(_))
        ));
    }

    #[test]
    fn triangular_solver_handles_branching() {
        // x^2 = 4, then y + x = 1: two branches.
        let x = UnitSym::free("x");
        let y = UnitSym::free("y");
        let eq1 = &(&Scalar::unit(&x) * &Scalar::unit(&x)) - &Scalar::from_int(4);
        let eq2 = &(&Scalar::unit(&y) + &Scalar::unit(&x)) - &Scalar::from_int(1);
        let solutions = solve_triangular(
            &Tower::empty(),
            &[eq1, eq2],
            &[x.clone(), y.clone()],
            &[true, false],
        )
        .unwrap();
        assert_eq!(solutions.len(), 2);
        for (_, env) in &solutions {
            let xv = env.get("x").unwrap().as_rational().unwrap();
            let yv = env.get("y").unwrap().as_rational().unwrap();
            assert_eq!(&xv * &xv, rat(4, 1));
            assert_eq!(yv, rat(1, 1) - xv);
        }
    }

    #[test]
    fn contradictory_system_has_no_solutions() {
        let x = UnitSym::free("x");
        let eq1 = &Scalar::unit(&x) - &Scalar::from_int(1);
        let eq2 = &Scalar::unit(&x) - &Scalar::from_int(2);
        let solutions =
            solve_triangular(&Tower::empty(), &[eq1, eq2], &[x.clone()], &[false]).unwrap();
        assert!(solutions.is_empty());
    }

    #[test]
    fn omega_adjoined_once() {
        let (t1, w1) = ensure_omega(&Tower::empty()).unwrap();
        let (t2, w2) = ensure_omega(&t1).unwrap();
        assert_eq!(t1.height(), 1);
        assert_eq!(t2.height(), 1);
        assert_eq!(w1, w2);
        let w3 = &(&w1 * &w1) * &w1;
        assert!(w3.is_one());
    }
}
