//! Classification of entire solutions: the complete case trees for the four
//! equation shapes, with constants solved exactly over the scalar tower and
//! every emitted family re-verified by exact residual.
//!
//! Free parameters of a family (c1, c2, exp(c2), ...) are represented as unit
//! symbols inside the family's `form`, so a family can be verified once,
//! symbolically, for all admissible parameter values.

pub mod ansatz;
pub mod checks;
pub mod degenerate;
mod eq12;
mod eq13;
mod eq14;
pub mod solve;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::equation::{BinomialEquation, Shape};
use crate::error::ClassifyError;
use crate::exppoly::ExpPoly;
use crate::scalar::{Scalar, Tower, UnitSym};

pub use ansatz::{polynomial_ansatz, AnsatzSolution};
pub use checks::structural_checks;
pub use degenerate::degenerate_classify;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyStatus {
    /// All parameters pinned; the concrete solutions were verified exactly.
    VerifiedExact,
    /// Verified exactly with the free parameters left symbolic.
    ParametricVerified,
    /// Solution shape emitted without the defining system being solved.
    AnsatzOnly,
}

impl fmt::Display for FamilyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyStatus::VerifiedExact => write!(f, "VerifiedExact"),
            FamilyStatus::ParametricVerified => write!(f, "ParametricVerified"),
            FamilyStatus::AnsatzOnly => write!(f, "AnsatzOnly"),
        }
    }
}

/// Which function the family's form describes. The degenerate remark cases
/// pin down f' or f'' rather than f itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    F,
    FPrime,
    FPrimePrime,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::F => write!(f, "f"),
            Subject::FPrime => write!(f, "f'"),
            Subject::FPrimePrime => write!(f, "f''"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: String,
    pub unit: UnitSym,
    /// Defining relation (a scalar expression in the parameters and equation
    /// data that must reduce to zero), or None for a free parameter.
    pub relation: Option<Scalar>,
    pub nonzero: bool,
    /// Expressions that must stay nonzero after binding (extra admissibility
    /// constraints such as gamma(2*lambda - gamma) != 0).
    pub avoid: Vec<Scalar>,
}

impl ParamSpec {
    pub fn free(name: &str, unit: UnitSym, nonzero: bool) -> Self {
        ParamSpec { name: name.into(), unit, relation: None, nonzero, avoid: Vec::new() }
    }

    pub fn bound(name: &str, unit: UnitSym, relation: Scalar, nonzero: bool) -> Self {
        ParamSpec { name: name.into(), unit, relation: Some(relation), nonzero, avoid: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct SolutionFamily {
    /// Theorem + case label, e.g. "Thm1.ii32".
    pub provenance: String,
    pub status: FamilyStatus,
    pub subject: Subject,
    /// Solution form with parameters as unit symbols.
    pub form: ExpPoly,
    pub params: Vec<ParamSpec>,
    pub tower: Arc<Tower>,
    /// Solved instantiations of the pinned parameters (free ones excluded).
    pub suggested: Vec<BTreeMap<String, Scalar>>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for DiagStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagStatus::Pass => write!(f, "pass"),
            DiagStatus::Fail => write!(f, "fail"),
            DiagStatus::Skipped => write!(f, "skipped"),
        }
    }
}

/// A structural check: an expected relation, what was observed, pass/fail.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub status: DiagStatus,
}

impl Diagnostic {
    pub fn new(name: &str, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        Diagnostic {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            status: if pass { DiagStatus::Pass } else { DiagStatus::Fail },
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Diagnostic {
            name: name.into(),
            expected: reason.into(),
            observed: String::new(),
            status: DiagStatus::Skipped,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Classification {
    pub families: Vec<SolutionFamily>,
    pub diagnostics: Vec<Diagnostic>,
    pub notes: Vec<String>,
}

/// Dispatch on the equation shape; degenerate equations route through the
/// remark cases.
pub fn classify(eq: &BinomialEquation) -> Result<Classification, ClassifyError> {
    if eq.degenerate {
        return degenerate_classify(eq);
    }
    let mut cls = match eq.shape {
        Shape::E12 => eq12::classify(eq)?,
        Shape::E13 => eq13::classify(eq)?,
        Shape::E14 => eq14::classify(eq)?,
    };
    cls.diagnostics.extend(structural_checks(eq));
    Ok(cls)
}

/// Substitute concrete parameter values into a family, checking the defining
/// relations exactly.
pub fn instantiate_family(
    family: &SolutionFamily,
    bindings: &BTreeMap<String, Scalar>,
) -> Result<ExpPoly, ClassifyError> {
    let mut unit_bindings: BTreeMap<UnitSym, Scalar> = BTreeMap::new();
    for param in &family.params {
        let value = bindings
            .get(&param.name)
            .ok_or_else(|| ClassifyError::MissingBinding(param.name.clone()))?;
        if param.nonzero && value.is_zero() {
            return Err(ClassifyError::RelationViolated(format!(
                "parameter {} must be nonzero",
                param.name
            )));
        }
        unit_bindings.insert(param.unit.clone(), value.clone());
    }
    let substitute = |expr: &Scalar| -> Result<Scalar, ClassifyError> {
        let mut acc = expr.clone();
        for (sym, value) in &unit_bindings {
            acc = acc.substitute_unit(sym, value)?;
        }
        Ok(acc)
    };
    for param in &family.params {
        if let Some(rel) = &param.relation {
            let value = substitute(rel)?;
            if !value.is_zero() {
                return Err(ClassifyError::RelationViolated(format!(
                    "relation for {} leaves {}",
                    param.name, value
                )));
            }
        }
        for avoid in &param.avoid {
            if substitute(avoid)?.is_zero() {
                return Err(ClassifyError::RelationViolated(format!(
                    "binding for {} hits an excluded value",
                    param.name
                )));
            }
        }
    }
    Ok(family.form.substitute_units(&unit_bindings)?)
}

impl SolutionFamily {
    /// Names of parameters that stay free (no defining relation).
    pub fn free_params(&self) -> Vec<&str> {
        self.params
            .iter()
            .filter(|p| p.relation.is_none())
            .map(|p| p.name.as_str())
            .collect()
    }
}

/// Verify a candidate family against a residual function: every suggested
/// instantiation of the pinned parameters must leave an identically zero
/// residual with the free parameters still symbolic. Returns the resulting
/// status, or None when verification fails.
pub(crate) fn verify_family(
    family: &SolutionFamily,
    residual: &dyn Fn(&ExpPoly) -> ExpPoly,
) -> Option<FamilyStatus> {
    let pinned: Vec<&ParamSpec> = family.params.iter().filter(|p| p.relation.is_some()).collect();
    let has_free = family.params.len() > pinned.len();
    if family.suggested.is_empty() {
        if !pinned.is_empty() {
            return None;
        }
        if residual(&family.form).is_zero() {
            return Some(if has_free {
                FamilyStatus::ParametricVerified
            } else {
                FamilyStatus::VerifiedExact
            });
        }
        return None;
    }
    for suggestion in &family.suggested {
        let mut unit_bindings = BTreeMap::new();
        for p in &pinned {
            let value = suggestion.get(&p.name)?;
            unit_bindings.insert(p.unit.clone(), value.clone());
        }
        let substituted = family.form.substitute_units(&unit_bindings).ok()?;
        if !residual(&substituted).is_zero() {
            return None;
        }
    }
    Some(if has_free {
        FamilyStatus::ParametricVerified
    } else {
        FamilyStatus::VerifiedExact
    })
}

/// Residual-verify and push the family; on failure record a diagnostic
/// instead of emitting an unsound family.
pub(crate) fn emit_verified(
    cls: &mut Classification,
    mut family: SolutionFamily,
    residual: &dyn Fn(&ExpPoly) -> ExpPoly,
) {
    match verify_family(&family, residual) {
        Some(status) => {
            family.status = status;
            cls.families.push(family);
        }
        None => {
            cls.diagnostics.push(Diagnostic::new(
                &format!("{} residual check", family.provenance),
                "residual must vanish identically",
                "nonzero residual; family withheld",
                false,
            ));
        }
    }
}

/// Fresh parameter symbol names are plain identifiers; the value bound to an
/// exponent-shift parameter like exp(c2) is the value of the exponential.
pub(crate) fn param_unit(name: &str) -> UnitSym {
    UnitSym::free(name)
}

/// λ for equations with deg d = 1 (d is normalized, so d = λ z).
pub(crate) fn linear_exponent_slope(eq: &BinomialEquation) -> Option<Scalar> {
    if eq.d.degree() == Some(1) {
        Some(eq.d.coeff(1))
    } else {
        None
    }
}

pub(crate) fn all_constant_nonzero(polys: &[&crate::poly::Poly]) -> bool {
    polys.iter().all(|p| {
        p.as_constant()
            .map(|s| !s.is_zero())
            .unwrap_or(false)
    })
}

pub(crate) fn default_tower(eq: &BinomialEquation) -> Arc<Tower> {
    // All coefficient scalars share one compatible chain; take the deepest.
    let mut tower = Tower::empty();
    for p in [&eq.a, &eq.b, &eq.c, &eq.d] {
        for c in p.coeffs() {
            if tower.is_prefix_of(c.tower()) {
                tower = c.tower().clone();
            }
        }
    }
    tower
}
