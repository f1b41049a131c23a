//! Remark cases: classification when exactly one of a, b, c vanishes.
//!
//! These cases pin down f, f' or f'' as R e^{d} (or f = R e^{P} with P
//! unknown, where only the shape is emitted; the finite-order argument behind
//! it is trusted, not re-proved).

use crate::equation::{BinomialEquation, Shape};
use crate::error::ClassifyError;
use crate::exppoly::ExpPoly;
use crate::poly::Poly;
use crate::scalar::{Scalar, Tower};
use std::sync::Arc;

use super::ansatz::solve_poly_constraint;
use super::{
    default_tower, param_unit, Classification, Diagnostic, FamilyStatus, ParamSpec,
    SolutionFamily, Subject,
};

const DEFAULT_DEGENERATE_BOUND: usize = 2;

pub fn degenerate_classify(eq: &BinomialEquation) -> Result<Classification, ClassifyError> {
    degenerate_classify_with(eq, DEFAULT_DEGENERATE_BOUND)
}

pub fn degenerate_classify_with(
    eq: &BinomialEquation,
    degree_bound: usize,
) -> Result<Classification, ClassifyError> {
    let zero_count = [&eq.a, &eq.b, &eq.c].iter().filter(|p| p.is_zero()).count();
    if zero_count == 0 {
        return Err(ClassifyError::NotDegenerate);
    }
    if zero_count > 1 {
        return Err(ClassifyError::MultipleDegeneracies);
    }
    let mut cls = Classification::default();
    match eq.shape {
        Shape::E13 => {
            if eq.a.is_zero() {
                // -b (f'')^2 = c e^{2d}: f'' = R e^d with R^2 = -c/b.
                square_family(eq, &mut cls, Subject::FPrimePrime, "Rem1.2-1", degree_bound)?;
            } else if eq.b.is_zero() {
                // f f' = (c/a) e^{2d}: f = R e^d with R (R' + R d') = c/a.
                product_family(eq, &mut cls, Subject::F, "Rem1.2-2", degree_bound)?;
            } else {
                ansatz_only_family(eq, &mut cls, "Rem1.2-3");
            }
        }
        Shape::E14 => {
            if eq.a.is_zero() {
                // -b f^2 = c e^{2d}: f = R e^d with R^2 = -c/b.
                square_family(eq, &mut cls, Subject::F, "Rem1.5-1", degree_bound)?;
            } else if eq.b.is_zero() {
                // f' f'' = (c/a) e^{2d}: f' = R e^d with R (R' + R d') = c/a.
                product_family(eq, &mut cls, Subject::FPrime, "Rem1.5-2", degree_bound)?;
            } else {
                ansatz_only_family(eq, &mut cls, "Rem1.5-3");
            }
        }
        Shape::E12 => {
            cls.notes.push(
                "Degenerate eq12 instances are outside the remark coverage; no families \
                 emitted."
                    .into(),
            );
        }
    }
    Ok(cls)
}

/// Residual for the subject function g: what must vanish for g to satisfy
/// the degenerate equation.
fn subject_residual(eq: &BinomialEquation, subject: Subject, g: &ExpPoly) -> ExpPoly {
    let rhs = eq.rhs();
    match (eq.shape, subject) {
        // a = 0: -b (f'')^2 = c e^{2d} with g = f''.
        (Shape::E13, Subject::FPrimePrime) => &-&(g * g).poly_mul(&eq.b) - &rhs,
        // b = 0: a f f' = c e^{2d} with g = f.
        (Shape::E13, Subject::F) => &(g * &g.derivative()).poly_mul(&eq.a) - &rhs,
        // a = 0: -b f^2 = c e^{2d} with g = f.
        (Shape::E14, Subject::F) => &-&(g * g).poly_mul(&eq.b) - &rhs,
        // b = 0: a f' f'' = c e^{2d} with g = f'.
        (Shape::E14, Subject::FPrime) => &(g * &g.derivative()).poly_mul(&eq.a) - &rhs,
        _ => unreachable!("unsupported degenerate subject"),
    }
}

/// Cases reducing to R^2 = -c/b: solve for polynomial R, extending the tower
/// when -c/b is a constant that is not a perfect square.
fn square_family(
    eq: &BinomialEquation,
    cls: &mut Classification,
    subject: Subject,
    provenance: &str,
    degree_bound: usize,
) -> Result<(), ClassifyError> {
    let Some(target) = (-&eq.c).div_exact(&eq.b) else {
        cls.diagnostics.push(Diagnostic::skipped(
            provenance,
            "-c/b is not a polynomial; no entire solution of this form",
        ));
        return Ok(());
    };
    let constraint = |r: &Poly| &(r * r) - &target;
    solve_r_family(eq, cls, subject, provenance, &constraint, degree_bound)
}

/// Cases reducing to R (R' + R d') = c/a.
fn product_family(
    eq: &BinomialEquation,
    cls: &mut Classification,
    subject: Subject,
    provenance: &str,
    degree_bound: usize,
) -> Result<(), ClassifyError> {
    let Some(target) = eq.c.div_exact(&eq.a) else {
        cls.diagnostics.push(Diagnostic::skipped(
            provenance,
            "c/a is not a polynomial; no entire solution of this form",
        ));
        return Ok(());
    };
    let dp = eq.d.derivative();
    let constraint = move |r: &Poly| &(r * &(&r.derivative() + &(r * &dp))) - &target;
    solve_r_family(eq, cls, subject, provenance, &constraint, degree_bound)
}

fn solve_r_family(
    eq: &BinomialEquation,
    cls: &mut Classification,
    subject: Subject,
    provenance: &str,
    constraint: &dyn Fn(&Poly) -> Poly,
    degree_bound: usize,
) -> Result<(), ClassifyError> {
    let tower = default_tower(eq);
    let mut found = false;
    for m in 0..=degree_bound {
        let solutions = match solve_poly_constraint(&tower, constraint, m, false) {
            Ok(s) => s,
            Err(ClassifyError::CapabilityExceeded(_)) => continue,
            Err(e) => return Err(e),
        };
        for (new_tower, r) in solutions {
            if r.is_zero() {
                continue;
            }
            let g = ExpPoly::term(r.scalar_mul(&eq.exp_shift), eq.d.clone());
            if !subject_residual(eq, subject, &g).is_zero() {
                continue;
            }
            found = true;
            cls.families.push(SolutionFamily {
                provenance: provenance.into(),
                status: FamilyStatus::VerifiedExact,
                subject,
                form: g,
                params: Vec::new(),
                tower: new_tower,
                suggested: Vec::new(),
                notes: vec![format!("{subject} = ({r}) e^d")],
            });
        }
    }
    if !found {
        cls.diagnostics.push(Diagnostic::skipped(
            provenance,
            format!("no polynomial R of degree <= {degree_bound} satisfies the reduced constraint"),
        ));
    }
    Ok(())
}

/// c = 0 cases: f = R e^P with both R and P unknown polynomials. The shape is
/// emitted without solving.
fn ansatz_only_family(eq: &BinomialEquation, cls: &mut Classification, provenance: &str) {
    let r = param_unit("R");
    let tower: Arc<Tower> = default_tower(eq);
    let form = ExpPoly::from_scalar(Scalar::unit(&r));
    cls.families.push(SolutionFamily {
        provenance: provenance.into(),
        status: FamilyStatus::AnsatzOnly,
        subject: Subject::F,
        form,
        params: vec![ParamSpec::free("R", r, true)],
        tower,
        suggested: Vec::new(),
        notes: vec![
            "c = 0: any entire solution has the form f = R e^{P} with R, P polynomials \
             (finite order via the central-index argument, which is trusted here); the \
             defining identity in (R, P) is not solved."
                .into(),
        ],
    });
    cls.diagnostics.push(Diagnostic::skipped(
        provenance,
        "f = R e^P emitted as shape only",
    ));
}
