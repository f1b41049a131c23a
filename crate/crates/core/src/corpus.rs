//! The golden example corpus: line-delimited records with an equation, a
//! candidate solution, and the expected verification outcome. The eight
//! source examples ship with the crate, with the documented coefficient
//! discrepancy encoded as a ninth, expectedly-invalid record.

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::parse::{parse_equation, parse_expression, ParseEnv};
use crate::poly::Poly;
use crate::scalar::{ComplexBall, Scalar, Tower};

pub const BUILTIN_CORPUS: &str = include_str!("../data/corpus.jsonl");

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerGenSpec {
    pub name: String,
    /// Monic defining polynomial in z over the tower built so far.
    pub poly: String,
    pub mid: [f64; 2],
    pub rad: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    #[serde(default)]
    pub tower: Vec<TowerGenSpec>,
    pub equation: String,
    pub candidate: String,
    pub expected: Expected,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RecordOutcome {
    pub id: String,
    pub verified: bool,
    pub matched: bool,
    pub residual: String,
    pub note: Option<String>,
}

pub fn load_corpus(text: &str) -> Result<Vec<CorpusRecord>, String> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rec: CorpusRecord = serde_json::from_str(line)
            .map_err(|e| format!("corpus line {}: {e}", lineno + 1))?;
        out.push(rec);
    }
    let mut ids: Vec<&str> = out.iter().map(|r| r.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != out.len() {
        return Err("corpus ids are not unique".into());
    }
    Ok(out)
}

/// Build a parse environment from tower generator specs, extending in order.
pub fn build_env(specs: &[TowerGenSpec]) -> Result<ParseEnv, ParseError> {
    let mut env = ParseEnv::default();
    for spec in specs {
        let poly = crate::parse::parse_poly(&spec.poly, &env)?;
        let deg = poly.degree().ok_or_else(|| ParseError::SyntaxError {
            span: (0, 0),
            msg: format!("tower generator `{}` has zero defining polynomial", spec.name),
        })?;
        if deg < 2 || !poly.leading().map(Scalar::is_one).unwrap_or(false) {
            return Err(ParseError::SyntaxError {
                span: (0, 0),
                msg: format!("tower generator `{}` must be monic of degree >= 2", spec.name),
            });
        }
        let tail: Vec<Scalar> = (0..deg).map(|j| poly.coeff(j)).collect();
        let hint = ComplexBall::from_f64(spec.mid[0], spec.mid[1], spec.rad).ok_or_else(|| {
            ParseError::SyntaxError {
                span: (0, 0),
                msg: "embedding hint is not finite".into(),
            }
        })?;
        env.tower = env
            .tower
            .extend(&spec.name, tail, &hint)
            .map_err(|e| ParseError::SyntaxError { span: (0, 0), msg: e.to_string() })?;
    }
    Ok(env)
}

pub fn run_record(rec: &CorpusRecord) -> Result<RecordOutcome, ParseError> {
    let env = build_env(&rec.tower)?;
    let eq = parse_equation(&rec.equation, &env)?;
    let candidate = parse_expression(&rec.candidate, &env)?;
    let residual = eq.residual(&candidate);
    let verified = residual.is_zero();
    let matched = verified == (rec.expected == Expected::Valid);
    Ok(RecordOutcome {
        id: rec.id.clone(),
        verified,
        matched,
        residual: residual.to_string(),
        note: rec.note.clone(),
    })
}

/// Serialize a tower into (name, defining polynomial, embedding) descriptors.
pub fn describe_tower(tower: &Tower) -> Vec<TowerGenSpec> {
    tower
        .gens()
        .iter()
        .map(|g| {
            let mut coeffs: Vec<Scalar> = g.lower_coeffs().to_vec();
            coeffs.push(Scalar::one());
            let c = g.embedding().to_c64();
            use num_traits::ToPrimitive;
            TowerGenSpec {
                name: g.name().to_string(),
                poly: Poly::from_coeffs(coeffs).to_string(),
                mid: [c.re, c.im],
                rad: g.embedding().rad.to_f64().unwrap_or(f64::NAN),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_loads_and_matches() {
        let records = load_corpus(BUILTIN_CORPUS).unwrap();
        assert_eq!(records.len(), 9);
        for rec in &records {
            let outcome = run_record(rec).unwrap();
            assert!(outcome.matched, "{}: residual {}", rec.id, outcome.residual);
        }
    }

    #[test]
    fn prose_record_has_the_documented_residual() {
        let records = load_corpus(BUILTIN_CORPUS).unwrap();
        let prose = records.iter().find(|r| r.id == "example-2.7-prose").unwrap();
        let outcome = run_record(prose).unwrap();
        assert!(!outcome.verified);
        assert_eq!(outcome.residual, "4*exp(4*z)");
    }
}
