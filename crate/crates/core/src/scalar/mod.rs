//! Exact scalars: elements of a triangular algebraic extension tower over the
//! rationals, times a Laurent monomial in formal unit symbols.
//!
//! A scalar is a finite sum of terms `q * g1^e1 * ... * gk^ek * u1^n1 * ...`
//! where `q` is rational, the `gi` are tower generators with exponents kept
//! below their defining degrees, and the `uj` are unit symbols with integer
//! (possibly negative) exponents. Normal form is canonical: the zero test is
//! "term map empty".

pub mod ball;
pub mod tower;
pub mod unit;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ScalarError;

pub use ball::ComplexBall;
pub use tower::{Tower, TowerGenerator};
pub use unit::{UnitSym, UnitValue};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Monomial part of a scalar term: tower-generator exponents (indexed by
/// position in the tower, trailing zeros trimmed) and unit-symbol exponents
/// (sorted by symbol, zero entries dropped). Ordering puts unit-free terms
/// first so a scalar prints as rational part, then generators, then units.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    units: Vec<(UnitSym, i64)>,
    gens: Vec<u32>,
}

impl Monomial {
    fn empty() -> Self {
        Monomial::default()
    }

    fn is_empty(&self) -> bool {
        self.gens.is_empty() && self.units.is_empty()
    }

    fn trim(&mut self) {
        while self.gens.last() == Some(&0) {
            self.gens.pop();
        }
        self.units.retain(|(_, e)| *e != 0);
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut gens = vec![0u32; self.gens.len().max(other.gens.len())];
        for (i, g) in self.gens.iter().enumerate() {
            gens[i] += g;
        }
        for (i, g) in other.gens.iter().enumerate() {
            gens[i] += g;
        }
        let mut units = self.units.clone();
        for (sym, e) in &other.units {
            match units.binary_search_by(|(s, _)| s.cmp(sym)) {
                Ok(pos) => units[pos].1 += e,
                Err(pos) => units.insert(pos, (sym.clone(), *e)),
            }
        }
        let mut m = Monomial { gens, units };
        m.trim();
        m
    }

    fn unit_exp(&self, sym: &UnitSym) -> i64 {
        self.units
            .binary_search_by(|(s, _)| s.cmp(sym))
            .map(|pos| self.units[pos].1)
            .unwrap_or(0)
    }

    fn without_unit(&self, sym: &UnitSym) -> Monomial {
        let mut m = self.clone();
        m.units.retain(|(s, _)| s != sym);
        m
    }

    fn is_unit_free(&self) -> bool {
        self.units.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Scalar {
    tower: Arc<Tower>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { tower: Tower::empty(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::empty(), q);
        }
        Scalar { tower: Tower::empty(), terms }
    }

    /// The idx-th tower generator as a scalar.
    pub fn generator(tower: &Arc<Tower>, idx: usize) -> Self {
        assert!(idx < tower.height());
        let mut gens = vec![0u32; idx + 1];
        gens[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial { gens, units: Vec::new() }, BigRational::one());
        Scalar { tower: tower.clone(), terms }
    }

    pub fn generator_by_name(tower: &Arc<Tower>, name: &str) -> Option<Self> {
        tower.generator_index(name).map(|i| Scalar::generator(tower, i))
    }

    pub fn unit(sym: &UnitSym) -> Self {
        Scalar::unit_pow(sym, 1)
    }

    pub fn unit_pow(sym: &UnitSym, e: i64) -> Self {
        if e == 0 {
            return Scalar::one();
        }
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial { gens: Vec::new(), units: vec![(sym.clone(), e)] },
            BigRational::one(),
        );
        Scalar { tower: Tower::empty(), terms }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    /// Some(q) when the scalar is a plain rational (including zero).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, q) = self.terms.iter().next().unwrap();
                if m.is_empty() {
                    Some(q.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_unit_free(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit_free())
    }

    /// All unit symbols occurring with nonzero exponent.
    pub fn units_occurring(&self) -> BTreeSet<UnitSym> {
        let mut set = BTreeSet::new();
        for m in self.terms.keys() {
            for (sym, _) in &m.units {
                set.insert(sym.clone());
            }
        }
        set
    }

    pub fn contains_unit(&self, sym: &UnitSym) -> bool {
        self.terms.keys().any(|m| m.unit_exp(sym) != 0)
    }

    /// Move the scalar to a deeper compatible tower.
    pub fn lift_to(&self, tower: &Arc<Tower>) -> Scalar {
        assert!(
            self.tower.is_prefix_of(tower),
            "cannot lift scalar to an incompatible tower"
        );
        Scalar { tower: tower.clone(), terms: self.terms.clone() }
    }

    fn unified_tower(&self, other: &Scalar) -> Arc<Tower> {
        Tower::unify(&self.tower, &other.tower)
            .expect("scalar operands live in incompatible towers")
    }

    fn add_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, q: BigRational) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Rewrite generator powers below the defining degrees. Terminates because
    /// each rewrite strictly lowers the exponent of the highest overflowing
    /// generator while touching only lower ones.
    fn reduce(tower: &Arc<Tower>, terms: &mut BTreeMap<Monomial, BigRational>) {
        loop {
            let mut found: Option<(Monomial, usize)> = None;
            'scan: for m in terms.keys() {
                for i in (0..m.gens.len()).rev() {
                    if (m.gens[i] as usize) >= tower.gens()[i].degree() {
                        found = Some((m.clone(), i));
                        break 'scan;
                    }
                }
            }
            let Some((key, idx)) = found else { break };
            let coeff = terms.remove(&key).unwrap();
            let gen = &tower.gens()[idx];
            let deg = gen.degree();
            // t^p = t^(p-deg) * (-(c_0 + c_1 t + ... + c_{deg-1} t^{deg-1}))
            for (j, cj) in gen.lower_coeffs().iter().enumerate() {
                for (m2, r2) in &cj.terms {
                    let mut base = key.clone();
                    base.gens[idx] = base.gens[idx] - deg as u32 + j as u32;
                    base.trim();
                    let nk = base.mul(m2);
                    Scalar::add_term(terms, nk, -(&coeff) * r2);
                }
            }
        }
    }

    pub fn pow(&self, mut n: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
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

    pub fn pow_i64(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.invert()?.pow((-e) as u64))
        }
    }

    /// Two-sided inverse. An element is invertible exactly when it is a unit
    /// monomial times an invertible tower element; mixed unit sums and zero
    /// divisors of reducible relations report `ZeroDivisor`.
    pub fn invert(&self) -> Result<Scalar, ScalarError> {
        if self.terms.is_empty() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Scalar::from_rational(q.recip()));
        }
        // Factor out the common unit monomial.
        let syms = self.units_occurring();
        let mut common: Vec<(UnitSym, i64)> = Vec::new();
        for sym in &syms {
            let min = self.terms.keys().map(|m| m.unit_exp(sym)).min().unwrap();
            if min != 0 {
                common.push((sym.clone(), min));
            }
        }
        let mut shifted_terms = BTreeMap::new();
        for (m, q) in &self.terms {
            let mut nm = m.clone();
            for (sym, e) in &common {
                match nm.units.binary_search_by(|(s, _)| s.cmp(sym)) {
                    Ok(pos) => nm.units[pos].1 -= e,
                    Err(pos) => nm.units.insert(pos, (sym.clone(), -e)),
                }
            }
            nm.trim();
            shifted_terms.insert(nm, q.clone());
        }
        let shifted = Scalar { tower: self.tower.clone(), terms: shifted_terms };
        if !shifted.is_unit_free() {
            return Err(ScalarError::ZeroDivisor(
                "sum mixing distinct unit monomials is not invertible".into(),
            ));
        }
        let inv_core = shifted.invert_tower_element()?;
        // self = U * t  =>  self^-1 = t^-1 * U^-1
        let mut inv_mono = Monomial::empty();
        for (sym, e) in &common {
            inv_mono.units.push((sym.clone(), -e));
        }
        inv_mono.units.sort_by(|a, b| a.0.cmp(&b.0));
        inv_mono.trim();
        let mut unit_terms = BTreeMap::new();
        unit_terms.insert(inv_mono, BigRational::one());
        let unit_inv = Scalar { tower: Tower::empty(), terms: unit_terms };
        Ok(&inv_core * &unit_inv)
    }

    /// Invert a unit-free element by solving the multiplication-by-self linear
    /// system on the normal-form basis.
    fn invert_tower_element(&self) -> Result<Scalar, ScalarError> {
        debug_assert!(self.is_unit_free());
        let basis = basis_monomials(&self.tower);
        let dim = basis.len();
        let index_of = |m: &Monomial| -> usize {
            basis.binary_search(m).expect("reduced monomial must be in basis")
        };
        let mut mat = vec![vec![BigRational::zero(); dim]; dim];
        for (j, bm) in basis.iter().enumerate() {
            let mut col = BTreeMap::new();
            for (m, q) in &self.terms {
                Scalar::add_term(&mut col, m.mul(bm), q.clone());
            }
            Scalar::reduce(&self.tower, &mut col);
            for (m, q) in col {
                mat[index_of(&m)][j] = q;
            }
        }
        let mut rhs = vec![BigRational::zero(); dim];
        rhs[index_of(&Monomial::empty())] = BigRational::one();
        let x = solve_linear(mat, rhs).ok_or_else(|| {
            ScalarError::ZeroDivisor(format!("{self} is a zero divisor in its tower"))
        })?;
        let mut terms = BTreeMap::new();
        for (j, q) in x.into_iter().enumerate() {
            Scalar::add_term(&mut terms, basis[j].clone(), q);
        }
        Ok(Scalar { tower: self.tower.clone(), terms })
    }

    /// Replace a unit symbol by a concrete scalar value everywhere.
    pub fn substitute_unit(&self, sym: &UnitSym, value: &Scalar) -> Result<Scalar, ScalarError> {
        let mut acc = Scalar::zero();
        for (m, q) in &self.terms {
            let e = m.unit_exp(sym);
            let mut term_terms = BTreeMap::new();
            term_terms.insert(m.without_unit(sym), q.clone());
            let base = Scalar { tower: self.tower.clone(), terms: term_terms };
            let factor = if e == 0 { Scalar::one() } else { value.pow_i64(e)? };
            acc = &acc + &(&base * &factor);
        }
        Ok(acc)
    }

    /// Numeric enclosure with radius at most 2^-prec times the midpoint
    /// magnitude (best effort after four refinement rounds; exact zero gives
    /// the zero ball).
    pub fn embed(&self, prec: u32) -> Result<ComplexBall, ScalarError> {
        if self.terms.is_empty() {
            return Ok(ComplexBall::zero());
        }
        let mut work = prec + 16;
        let mut best: Option<ComplexBall> = None;
        for _ in 0..4 {
            let acc = self.embed_at(work)?;
            if acc.meets_relative_precision(prec) {
                return Ok(acc);
            }
            best = Some(acc);
            work *= 2;
        }
        Ok(best.unwrap())
    }

    fn embed_at(&self, work: u32) -> Result<ComplexBall, ScalarError> {
        let mut acc = ComplexBall::zero();
        for (m, q) in &self.terms {
            let mut term = ComplexBall::from_rational(q.clone());
            for (i, &p) in m.gens.iter().enumerate() {
                if p > 0 {
                    let g = self.tower.refine_embedding(i, work)?;
                    term = term.mul(&g.pow(p as u64));
                }
            }
            for (sym, e) in &m.units {
                let v = match sym.value() {
                    UnitValue::Free => {
                        return Err(ScalarError::UnboundUnit(sym.name().to_string()))
                    }
                    UnitValue::Ball(b) => b.clone(),
                    UnitValue::ExpOf(s) => s.embed(work)?.exp(work),
                };
                let powed = if *e >= 0 {
                    v.pow(*e as u64)
                } else {
                    v.inv()
                        .ok_or_else(|| {
                            ScalarError::ZeroDivisor(format!(
                                "numeric value of unit `{}` contains zero",
                                sym.name()
                            ))
                        })?
                        .pow((-e) as u64)
                };
                term = term.mul(&powed);
            }
            acc = acc.add(&term).compress(work + 16);
        }
        Ok(acc)
    }

    /// Sign of the leading (order-least) term's rational coefficient; used to
    /// pick a canonical base when folding exponentials of constants.
    pub fn leading_sign_negative(&self) -> bool {
        self.terms
            .values()
            .next()
            .map(|q| q.is_negative())
            .unwrap_or(false)
    }

    /// A pure unit monomial with coefficient 1.
    pub fn unit_monomial(units: &[(UnitSym, i64)]) -> Scalar {
        let mut acc = Scalar::one();
        for (sym, e) in units {
            acc = &acc * &Scalar::unit_pow(sym, *e);
        }
        acc
    }

    /// Split into (common unit monomial, unit-free remainder) when every term
    /// carries the same unit exponents; None otherwise (and for zero).
    pub fn split_unit_monomial(&self) -> Option<(Vec<(UnitSym, i64)>, Scalar)> {
        let first = self.terms.keys().next()?;
        let units = first.units.clone();
        for m in self.terms.keys() {
            if m.units != units {
                return None;
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, q)| {
                let mut nm = m.clone();
                nm.units.clear();
                (nm, q.clone())
            })
            .collect();
        Some((units, Scalar { tower: self.tower.clone(), terms }))
    }

    /// (min, max) exponent of the symbol over the terms; None for zero.
    pub fn unit_exponent_range(&self, sym: &UnitSym) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for m in self.terms.keys() {
            let e = m.unit_exp(sym);
            range = Some(match range {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        range
    }

    /// The coefficient of sym^k, with the symbol removed: viewing the scalar
    /// as a Laurent polynomial in one unit symbol.
    pub fn coefficient_of_unit(&self, sym: &UnitSym, k: i64) -> Scalar {
        let mut terms = BTreeMap::new();
        for (m, q) in &self.terms {
            if m.unit_exp(sym) == k {
                Scalar::add_term(&mut terms, m.without_unit(sym), q.clone());
            }
        }
        Scalar { tower: self.tower.clone(), terms }
    }
}

/// All normal-form monomials of the tower (generator exponents below the
/// defining degrees), in canonical order.
fn basis_monomials(tower: &Arc<Tower>) -> Vec<Monomial> {
    let mut result = vec![Monomial::empty()];
    for (i, gen) in tower.gens().iter().enumerate() {
        let mut next = Vec::with_capacity(result.len() * gen.degree());
        for m in &result {
            for p in 0..gen.degree() as u32 {
                let mut gens = m.gens.clone();
                if p > 0 {
                    gens.resize(i + 1, 0);
                    gens[i] = p;
                }
                let mut nm = Monomial { gens, units: Vec::new() };
                nm.trim();
                next.push(nm);
            }
        }
        result = next;
    }
    result.sort();
    result
}

/// Gaussian elimination over the rationals; None when the system has no
/// solution.
fn solve_linear(
    mut mat: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
) -> Option<Vec<BigRational>> {
    let n = mat.len();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        rhs.swap(row, p);
        let inv = mat[row][col].clone().recip();
        for c in col..n {
            mat[row][c] = &mat[row][c] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..n {
            if r != row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..n {
                    let sub = &mat[row][c] * &f;
                    mat[r][c] = &mat[r][c] - &sub;
                }
                let sub = &rhs[row] * &f;
                rhs[r] = &rhs[r] - &sub;
            }
        }
        pivot_cols.push((row, col));
        row += 1;
        if row == n {
            break;
        }
    }
    // Consistency: remaining rows must have zero rhs.
    for r in row..n {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, c) in pivot_cols {
        x[c] = rhs[r].clone();
    }
    Some(x)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, q) in &self.terms {
            m.hash(state);
            q.hash(state);
        }
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        let tower = self.unified_tower(other);
        let mut terms = self.terms.clone();
        for (m, q) in &other.terms {
            Scalar::add_term(&mut terms, m.clone(), q.clone());
        }
        Scalar { tower, terms }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let terms = self
            .terms
            .iter()
            .map(|(m, q)| (m.clone(), -q.clone()))
            .collect();
        Scalar { tower: self.tower.clone(), terms }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        let tower = self.unified_tower(other);
        let mut terms = BTreeMap::new();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                Scalar::add_term(&mut terms, m1.mul(m2), q1 * q2);
            }
        }
        Scalar::reduce(&tower, &mut terms);
        Scalar { tower, terms }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, q) in &self.terms {
            let neg = q.is_negative();
            let mag = q.abs();
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
            let mut pieces: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_empty() {
                pieces.push(mag.to_string());
            }
            for (i, &p) in m.gens.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let name = self.tower.gens()[i].name();
                if p == 1 {
                    pieces.push(name.to_string());
                } else {
                    pieces.push(format!("{name}^{p}"));
                }
            }
            for (sym, e) in &m.units {
                if *e == 1 {
                    pieces.push(sym.name().to_string());
                } else {
                    pieces.push(format!("{}^{}", sym.name(), e));
                }
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

/// exp of a constant scalar as a unit-symbol power with a canonical base:
/// e^{q} = exp(q̂)^{±1} where q̂ is the sign-canonical representative of ±q.
pub fn exp_unit_scalar(q0: &Scalar) -> Scalar {
    if q0.is_zero() {
        return Scalar::one();
    }
    let (base, exp) = if q0.leading_sign_negative() {
        ((-q0).clone(), -1)
    } else {
        (q0.clone(), 1)
    };
    let sym = UnitSym::exp_of(base);
    Scalar::unit_pow(&sym, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_tower() -> Arc<Tower> {
        // t^2 + t + 1, root near -1/2 + 0.866i
        let hint = ComplexBall::from_f64(-0.5, 0.8660254, 0.01).unwrap();
        Tower::empty()
            .extend("w", vec![Scalar::one(), Scalar::one()], &hint)
            .unwrap()
    }

    #[test]
    fn omega_square_reduces() {
        let t = omega_tower();
        let w = Scalar::generator(&t, 0);
        let w2 = &w * &w;
        let expected = &(-&w) - &Scalar::one();
        assert_eq!(w2, expected);
    }

    #[test]
    fn one_plus_omega_times_minus_omega_is_one() {
        let t = omega_tower();
        let w = Scalar::generator(&t, 0);
        let lhs = &(&Scalar::one() + &w) * &(-&w);
        assert!(lhs.is_one());
    }

    #[test]
    fn unit_times_inverse_is_one() {
        let u = UnitSym::free("u");
        let s = &Scalar::unit(&u) * &Scalar::unit_pow(&u, -1);
        assert!(s.is_one());
    }

    #[test]
    fn invert_rational() {
        let s = Scalar::from_rational(rat(2, 3));
        assert_eq!(s.invert().unwrap(), Scalar::from_rational(rat(3, 2)));
    }

    #[test]
    fn invert_one_plus_omega() {
        let t = omega_tower();
        let w = Scalar::generator(&t, 0);
        let s = &Scalar::one() + &w;
        let inv = s.invert().unwrap();
        assert_eq!(inv, -&w);
        assert!((&s * &inv).is_one());
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(Scalar::zero().invert(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn invert_mixed_units_fails() {
        let u = UnitSym::free("u");
        let s = &Scalar::one() + &Scalar::unit(&u);
        assert!(matches!(s.invert(), Err(ScalarError::ZeroDivisor(_))));
    }

    #[test]
    fn zero_divisor_detected_in_reducible_tower() {
        // t^2 - 1 with root at 1: (t - 1) is a zero divisor.
        let hint = ComplexBall::from_f64(1.0, 0.0, 0.1).unwrap();
        let tower = Tower::empty()
            .extend("t", vec![-Scalar::one(), Scalar::zero()], &hint)
            .unwrap();
        let t = Scalar::generator(&tower, 0);
        let s = &t - &Scalar::one();
        assert!(matches!(s.invert(), Err(ScalarError::ZeroDivisor(_))));
    }

    #[test]
    fn embed_omega_40_bits() {
        let t = omega_tower();
        let w = Scalar::generator(&t, 0);
        let b = w.embed(40).unwrap();
        assert!(b.meets_relative_precision(40));
        let c = b.to_c64();
        assert!((c.re + 0.5).abs() < 1e-10);
        assert!((c.im - 0.86602540378).abs() < 1e-10);
    }

    #[test]
    fn embed_real_cube_root_of_two_thirds() {
        // r^3 = 2/3; bisection oracle value 0.8735804647...
        let hint = ComplexBall::from_f64(0.8736, 0.0, 0.01).unwrap();
        let tower = Tower::empty()
            .extend(
                "r",
                vec![
                    Scalar::from_rational(rat(-2, 3)),
                    Scalar::zero(),
                    Scalar::zero(),
                ],
                &hint,
            )
            .unwrap();
        let r = Scalar::generator(&tower, 0);
        let b = r.embed(40).unwrap();
        // Independent oracle: rational bisection on x^3 - 2/3.
        let mut lo = rat(0, 1);
        let mut hi = rat(1, 1);
        for _ in 0..60 {
            let mid = (&lo + &hi) / rat(2, 1);
            if &mid * &mid * &mid < rat(2, 3) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = b.to_c64().re;
        use num_traits::ToPrimitive;
        assert!((mid - lo.to_f64().unwrap()).abs() < 1e-9);
        assert!(b.to_c64().im.abs() < 1e-12);
    }

    #[test]
    fn embed_unbound_unit_fails() {
        let u = UnitSym::free("u");
        let s = Scalar::unit(&u);
        assert_eq!(s.embed(20), Err(ScalarError::UnboundUnit("u".into())));
    }

    #[test]
    fn display_form() {
        let t = omega_tower();
        let w = Scalar::generator(&t, 0);
        let u = UnitSym::free("u");
        let s = &(&Scalar::from_rational(rat(3, 2)) + &(&Scalar::from_int(2) * &w))
            - &Scalar::unit_pow(&u, -1);
        assert_eq!(s.to_string(), "3/2 + 2*w - u^-1");
    }
}
