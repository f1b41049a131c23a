//! Classifier behavior on the worked examples and the case-gating rules.

use std::collections::BTreeMap;

use binode_core::classify::{
    classify, degenerate_classify, instantiate_family, structural_checks, DiagStatus,
    FamilyStatus, SolutionFamily, Subject,
};
use binode_core::equation::{build_equation, BinomialEquation, Shape};
use binode_core::error::ClassifyError;
use binode_core::exppoly::ExpPoly;
use binode_core::poly::Poly;
use binode_core::scalar::{rat, Scalar};

fn poly(coeffs: &[i64]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&n| Scalar::from_int(n)).collect())
}

fn e_pow(k: i64) -> ExpPoly {
    ExpPoly::exp(poly(&[0, k]))
}

fn find<'a>(families: &'a [SolutionFamily], label: &str) -> &'a SolutionFamily {
    families
        .iter()
        .find(|f| f.provenance.contains(label))
        .unwrap_or_else(|| {
            panic!(
                "no family labeled {label}; got {:?}",
                families.iter().map(|f| f.provenance.clone()).collect::<Vec<_>>()
            )
        })
}

fn bind(pairs: &[(&str, Scalar)]) -> BTreeMap<String, Scalar> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Example 2.7 (displayed): 3 f' f'' - 2 f^2 = 88 e^{4z}.
#[test]
fn classify_example_2_7_displayed() {
    let eq = build_equation(Shape::E14, poly(&[3]), poly(&[2]), poly(&[88]), poly(&[0, 2]), false)
        .unwrap();
    let cls = classify(&eq).unwrap();
    assert_eq!(cls.families.len(), 1, "exactly one family; ii2/ii3 rejected");
    let fam = find(&cls.families, "Thm2.ii1");
    assert_eq!(fam.status, FamilyStatus::VerifiedExact);
    // relation c1^2 (a lambda^3 - b) = 88, i.e. c1^2 = 4: both signs suggested
    let roots: Vec<Scalar> = fam.suggested.iter().map(|s| s["c1"].clone()).collect();
    assert!(roots.contains(&Scalar::from_int(2)));
    assert!(roots.contains(&Scalar::from_int(-2)));
    // instantiating c1 = 2 gives the paper's f = 2 e^{2z}
    let f = instantiate_family(fam, &bind(&[("c1", Scalar::from_int(2))])).unwrap();
    assert_eq!(f, e_pow(2).scalar_mul(&Scalar::from_int(2)));
    assert!(eq.verify(&f));
    // ii2 and ii3 are skipped with their precondition diagnostics
    let skipped: Vec<&str> = cls
        .diagnostics
        .iter()
        .filter(|d| d.status == DiagStatus::Skipped)
        .map(|d| d.name.as_str())
        .collect();
    assert!(skipped.iter().any(|n| n.contains("Thm2.ii2")));
    assert!(skipped.iter().any(|n| n.contains("Thm2.ii3")));
}

/// Example 2.1: 16 f f' - 2 (f'')^2 = 64 e^{2z} sits in Thm1 case (i).
#[test]
fn classify_example_2_1_case_i() {
    let eq = build_equation(Shape::E13, poly(&[16]), poly(&[2]), poly(&[64]), poly(&[0, 1]), false)
        .unwrap();
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm1.i");
    assert_eq!(fam.status, FamilyStatus::ParametricVerified);
    assert_eq!(fam.free_params(), vec!["c1", "exp(c2)"]);
    // at exp(c2) = 2, c1 = 1 this is the paper's f = e^{2z} + 2
    let f = instantiate_family(
        fam,
        &bind(&[("c1", Scalar::from_int(1)), ("exp(c2)", Scalar::from_int(2))]),
    )
    .unwrap();
    let expected = &e_pow(2) + &ExpPoly::from_scalar(Scalar::from_int(2));
    assert_eq!(f, expected);
    // the stated constant-c check a = 8b passes here
    let diag = cls
        .diagnostics
        .iter()
        .find(|d| d.name.contains("a = 8b (as stated)"))
        .unwrap();
    assert_eq!(diag.status, DiagStatus::Pass);
    // ii31 also fires: c1^2 * 1 * (16 - 2) = 64 -> c1^2 = 32/7, tower extended
    let fam31 = find(&cls.families, "Thm1.ii31");
    let root = fam31.suggested[0]["c1"].clone();
    let f31 = instantiate_family(fam31, &bind(&[("c1", root)])).unwrap();
    assert!(eq.verify(&f31));
}

/// Example 2.3: -128 f f' - 2 (f'')^2 = -288 e^{4z}, Thm1 case (ii32).
#[test]
fn classify_example_2_3_ii32() {
    let eq = build_equation(
        Shape::E13,
        poly(&[-128]),
        poly(&[2]),
        poly(&[-288]),
        poly(&[0, 2]),
        false,
    )
    .unwrap();
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm1.ii32");
    assert_eq!(fam.status, FamilyStatus::ParametricVerified);
    // -9 b c1^2 lambda^4 = -288 with b=2, lambda=2: c1^2 = 1
    let roots: Vec<Scalar> = fam.suggested.iter().map(|s| s["c1"].clone()).collect();
    assert!(roots.contains(&Scalar::from_int(1)));
    assert!(roots.contains(&Scalar::from_int(-1)));
    // c1 = 1, c2 = 2 reproduces the paper's solution e^{2z} + 2 e^{-4z}
    let f = instantiate_family(
        fam,
        &bind(&[("c1", Scalar::from_int(1)), ("c2", Scalar::from_int(2))]),
    )
    .unwrap();
    let expected = &e_pow(2) + &e_pow(-4).scalar_mul(&Scalar::from_int(2));
    assert_eq!(f, expected);
    assert!(eq.verify(&f));
    // the companion ii33 family over the omega tower also verifies
    let fam33 = find(&cls.families, "Thm1.ii33");
    let c2v = fam33.suggested[0]["c2"]
        .substitute_unit(&fam33.params[0].unit, &Scalar::from_int(1))
        .unwrap();
    let f33 = instantiate_family(fam33, &bind(&[("c1", Scalar::from_int(1)), ("c2", c2v)]))
        .unwrap();
    assert!(eq.verify(&f33));
}

/// Example 2.2: 28 f f' - (f'')^2 = 12 e^{6z}, Thm1 case (ii31) only.
#[test]
fn classify_example_2_2_ii31() {
    let eq = build_equation(Shape::E13, poly(&[28]), poly(&[1]), poly(&[12]), poly(&[0, 3]), false)
        .unwrap();
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm1.ii31");
    // c1^2 lambda (a - b lambda^3) = 12: 3 (28 - 27) c1^2 = 12 -> c1 = ±2
    let roots: Vec<Scalar> = fam.suggested.iter().map(|s| s["c1"].clone()).collect();
    assert!(roots.contains(&Scalar::from_int(2)));
    let f = instantiate_family(fam, &bind(&[("c1", Scalar::from_int(2))])).unwrap();
    assert_eq!(f, e_pow(3).scalar_mul(&Scalar::from_int(2)));
    // ii32/ii33 preconditions fail (a != -8 b lambda^3 = -216)
    assert!(cls.families.iter().all(|f| !f.provenance.contains("ii32")));
    assert!(cls.families.iter().all(|f| !f.provenance.contains("ii33")));
    // case (i) does not solve this equation: withheld with a skip marker
    assert!(cls.families.iter().all(|f| f.provenance != "Thm1.i"));
}

/// Example 2.8 family: f' f'' - f^2 = -3 e^{(1+w) z} over the Q(w) tower.
#[test]
fn classify_example_2_8_ii3() {
    use binode_core::scalar::{ComplexBall, Tower};
    let hint = ComplexBall::from_f64(-0.5, 0.8660254, 0.01).unwrap();
    let tower = Tower::empty()
        .extend("w", vec![Scalar::one(), Scalar::one()], &hint)
        .unwrap();
    let w = Scalar::generator(&tower, 0);
    // d = (1 + w)/2 z, c = (w - 1)(2 + w) = -3
    let half = Scalar::from_rational(rat(1, 2));
    let lam = &half * &(&Scalar::one() + &w);
    let c = &(&w - &Scalar::one()) * &(&Scalar::from_int(2) + &w);
    assert_eq!(c, Scalar::from_int(-3));
    let eq = build_equation(
        Shape::E14,
        poly(&[1]),
        poly(&[1]),
        Poly::constant(c),
        Poly::monomial(lam, 1),
        false,
    )
    .unwrap();
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm2.ii3");
    // t1 = 1, t2 = w: binding c1 = 1 forces c2 = 1 and recovers e^z + e^{wz}
    let c2v = fam.suggested[0]["c2"]
        .substitute_unit(&fam.params[0].unit, &Scalar::one())
        .unwrap();
    assert!(c2v.is_one());
    let f = instantiate_family(fam, &bind(&[("c1", Scalar::one()), ("c2", c2v)])).unwrap();
    // t1 = 1 and t2 = w: the instantiated solution is e^z + e^{wz}
    let expected = &ExpPoly::exp(Poly::monomial(Scalar::one(), 1))
        + &ExpPoly::exp(Poly::monomial(w.clone(), 1));
    assert_eq!(f, expected);
    assert!(eq.verify(&f));
}

#[test]
fn instantiate_rejects_zero_where_nonzero_required() {
    let eq = build_equation(Shape::E14, poly(&[3]), poly(&[2]), poly(&[88]), poly(&[0, 2]), false)
        .unwrap();
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm2.ii1");
    let err = instantiate_family(fam, &bind(&[("c1", Scalar::zero())])).unwrap_err();
    assert!(matches!(err, ClassifyError::RelationViolated(_)));
    // and a value violating the defining relation is rejected too
    let err = instantiate_family(fam, &bind(&[("c1", Scalar::from_int(3))])).unwrap_err();
    assert!(matches!(err, ClassifyError::RelationViolated(_)));
    // missing binding
    let err = instantiate_family(fam, &BTreeMap::new()).unwrap_err();
    assert!(matches!(err, ClassifyError::MissingBinding(_)));
}

#[test]
fn structural_checks_example_2_6_m_orientation() {
    let eq = build_equation(
        Shape::E14,
        poly(&[2]),
        poly(&[7, 20, 24, 16]),
        poly(&[-9]),
        poly(&[0, 1, 1]),
        false,
    )
    .unwrap();
    let diags = structural_checks(&eq);
    let proof = diags.iter().find(|d| d.name.contains("proof orientation")).unwrap();
    assert_eq!(proof.status, DiagStatus::Pass);
    assert!(proof.expected.contains("P^2 = 9"), "{}", proof.expected);
    assert!(proof.expected.contains("M1 = -1"), "{}", proof.expected);
    let theorem = diags.iter().find(|d| d.name.contains("theorem orientation")).unwrap();
    assert_eq!(theorem.status, DiagStatus::Fail);
    // and the classifier solves P = ±3
    let cls = classify(&eq).unwrap();
    let fam = find(&cls.families, "Thm2.i22-1");
    let roots: Vec<Scalar> = fam.suggested.iter().map(|s| s["P"].clone()).collect();
    assert!(roots.contains(&Scalar::from_int(3)));
    assert!(roots.contains(&Scalar::from_int(-3)));
    let f = instantiate_family(fam, &bind(&[("P", Scalar::from_int(3))])).unwrap();
    assert!(eq.verify(&f));
}

#[test]
fn structural_checks_skip_when_c_nonconstant() {
    let eq = build_equation(
        Shape::E14,
        poly(&[1]),
        poly(&[0, 2]),
        poly(&[0, 2, 0, 8]),
        poly(&[0, 0, 1]),
        false,
    )
    .unwrap();
    let diags = structural_checks(&eq);
    let skip = diags.iter().find(|d| d.name.contains("M checks")).unwrap();
    assert_eq!(skip.status, DiagStatus::Skipped);
    assert!(skip.expected.contains("c non-constant"));
}

#[test]
fn hypothesis_check_on_pole_free_ratio() {
    // a = z, b = z^3 - z: b/a = z^2 - 1 has no pole at all.
    let eq = build_equation(
        Shape::E12,
        poly(&[0, 1]),
        poly(&[0, -1, 0, 1]),
        poly(&[1]),
        poly(&[0, 1]),
        false,
    )
    .unwrap();
    let cls = classify(&eq).unwrap();
    let diag = cls
        .diagnostics
        .iter()
        .find(|d| d.name.contains("simple pole"))
        .unwrap();
    assert_eq!(diag.status, DiagStatus::Fail);
    assert!(cls.notes.iter().any(|n| n.contains("HypothesisUnmet")));
}

mod degenerate {
    use super::*;

    /// (eq14, a=1, b=0, c=1, d=z): f' = R e^z with R(R' + R) = 1 at degree 0.
    #[test]
    fn eq14_b_zero() {
        let eq = build_equation(Shape::E14, poly(&[1]), Poly::zero(), poly(&[1]), poly(&[0, 1]), true)
            .unwrap();
        let cls = degenerate_classify(&eq).unwrap();
        let fams: Vec<_> = cls.families.iter().filter(|f| f.subject == Subject::FPrime).collect();
        assert_eq!(fams.len(), 2, "R = 1 and R = -1");
        for fam in &fams {
            assert_eq!(fam.status, FamilyStatus::VerifiedExact);
        }
        assert!(fams.iter().any(|f| f.form == e_pow(1)));
    }

    /// (eq13, a=1, b=0, c=2, d=z): f = R e^z with R^2 = 2, tower extended.
    #[test]
    fn eq13_b_zero_extends_tower() {
        let eq = build_equation(Shape::E13, poly(&[1]), Poly::zero(), poly(&[2]), poly(&[0, 1]), true)
            .unwrap();
        let cls = degenerate_classify(&eq).unwrap();
        assert_eq!(cls.families.len(), 2);
        for fam in &cls.families {
            assert_eq!(fam.subject, Subject::F);
            assert_eq!(fam.tower.height(), 1, "sqrt(2) adjoined");
            // R^2 = 2 exactly
            let r = fam.form.terms().next().unwrap().1.as_constant().unwrap();
            assert_eq!(&r * &r, Scalar::from_int(2).lift_to(&fam.tower));
        }
    }

    /// (eq13, a=0, b=1, c=-1, d=z): f'' = R e^z with R^2 = 1.
    #[test]
    fn eq13_a_zero() {
        let eq = build_equation(
            Shape::E13,
            Poly::zero(),
            poly(&[1]),
            poly(&[-1]),
            poly(&[0, 1]),
            true,
        )
        .unwrap();
        let cls = degenerate_classify(&eq).unwrap();
        let fams: Vec<_> = cls
            .families
            .iter()
            .filter(|f| f.subject == Subject::FPrimePrime)
            .collect();
        assert_eq!(fams.len(), 2);
        assert!(fams.iter().any(|f| f.form == e_pow(1)));
        assert!(fams.iter().any(|f| f.form == e_pow(1).scalar_mul(&Scalar::from_int(-1))));
    }

    #[test]
    fn multiple_degeneracies_rejected() {
        let eq = build_equation(Shape::E13, Poly::zero(), Poly::zero(), poly(&[1]), poly(&[0, 1]), true)
            .unwrap();
        assert!(matches!(
            degenerate_classify(&eq),
            Err(ClassifyError::MultipleDegeneracies)
        ));
    }

    #[test]
    fn c_zero_emits_shape_only() {
        let eq = build_equation(Shape::E14, poly(&[1]), poly(&[1]), Poly::zero(), poly(&[0, 1]), true)
            .unwrap();
        let cls = degenerate_classify(&eq).unwrap();
        assert_eq!(cls.families.len(), 1);
        assert_eq!(cls.families[0].status, FamilyStatus::AnsatzOnly);
    }
}
