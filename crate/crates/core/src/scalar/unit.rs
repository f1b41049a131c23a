//! Formal unit symbols: invertible constants standing for exponentials of
//! free parameters (e^{c2}, e^{2c3}, ...). They are pairwise distinct and
//! algebraically independent of the tower; no relations are imposed.

use std::cmp::Ordering;
use std::sync::Arc;

use super::ball::ComplexBall;
use super::Scalar;

#[derive(Debug, Clone)]
pub enum UnitValue {
    /// No numeric value; embedding a scalar containing this symbol fails.
    Free,
    /// A fixed numeric enclosure.
    Ball(ComplexBall),
    /// exp of an embeddable scalar, refinable to any precision.
    ExpOf(Box<Scalar>),
}

#[derive(Debug)]
pub struct UnitDef {
    pub name: String,
    pub value: UnitValue,
}

/// Interned unit symbol. Identity (equality, ordering, hashing) is by name.
#[derive(Debug, Clone)]
pub struct UnitSym(pub Arc<UnitDef>);

impl UnitSym {
    pub fn free(name: impl Into<String>) -> Self {
        UnitSym(Arc::new(UnitDef { name: name.into(), value: UnitValue::Free }))
    }

    pub fn with_value(name: impl Into<String>, value: ComplexBall) -> Self {
        UnitSym(Arc::new(UnitDef { name: name.into(), value: UnitValue::Ball(value) }))
    }

    /// Symbol standing for exp of the given scalar; its numeric value can be
    /// refined to arbitrary precision as long as the argument is embeddable.
    pub fn exp_of(argument: Scalar) -> Self {
        let name = format!("exp({})", argument);
        UnitSym(Arc::new(UnitDef { name, value: UnitValue::ExpOf(Box::new(argument)) }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn value(&self) -> &UnitValue {
        &self.0.value
    }
}

impl PartialEq for UnitSym {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.name == other.0.name
    }
}
impl Eq for UnitSym {}

impl PartialOrd for UnitSym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for UnitSym {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.name.cmp(&other.0.name)
    }
}

impl std::hash::Hash for UnitSym {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.name.hash(state);
    }
}
