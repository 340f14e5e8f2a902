use std::f64::consts::PI;

use lieflow::catalog::get_entry;
use lieflow::config::ToleranceConfig;
use lieflow::liealg::AlgebraVector;
use lieflow::matrix::QMatrix;
use lieflow::periodicity::{
    classify_flow, classify_invariant_flow, classify_linear_flow, Classification, FlowVerdict, NoPeriodReason,
    PeriodicityError, VerdictDocument,
};
use lieflow::rational::{frac, int};
use lieflow::spectral::spectrum;
use proptest::prelude::*;

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn linear(entry: &str, param: Option<i64>, d: &[i64]) -> Result<Classification, PeriodicityError> {
    let e = get_entry(entry, param.map(int)).unwrap();
    let n = e.dim();
    classify_linear_flow(&e.structure, &QMatrix::from_i64(n, n, d), &cfg())
}

fn reason(c: &Classification) -> Option<NoPeriodReason> {
    match c.verdict {
        FlowVerdict::NoPeriodicOrbits { reason } => Some(reason),
        _ => None,
    }
}

fn period_of(c: &Classification) -> f64 {
    c.verdict.period().unwrap_or_else(|| panic!("not periodic: {:?}", c.verdict)).value
}

#[test]
fn sl2_inner_derivation_has_period_pi() {
    let e = get_entry("sl2", None).unwrap();
    let d = lieflow::dersolve::inner_derivation(&e.structure, &AlgebraVector::from_i64(&[1, 0, 0])).unwrap();
    let c = classify_linear_flow(&e.structure, d.matrix(), &cfg()).unwrap();
    assert!((period_of(&c) - PI).abs() < 1e-14);
    assert_eq!(c.verdict.period().unwrap().symbolic.as_ref().unwrap().to_string(), "pi");
    assert!(!c.caveats.is_empty());
}

#[test]
fn two_dimensional_examples() {
    let c = linear("aff2", None, &[0, 0, 0, 1]).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::RealNonzeroEigenvalue));
    let c = linear("aff2", None, &[0, 0, 1, 0]).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::NonSemisimpleEigenvalue));
    let c = linear("aff2", None, &[0, 0, 0, 0]).unwrap();
    assert_eq!(c.verdict, FlowVerdict::IdentityFlow);

    let c = linear("abelian2", None, &[0, 1, -1, 0]).unwrap();
    assert!((period_of(&c) - 2.0 * PI).abs() < 1e-14);
    let c = linear("abelian2", None, &[1, 0, 0, -1]).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::RealNonzeroEigenvalue));
}

#[test]
fn heisenberg_rotation_and_shear() {
    // Rotation of the E2, E3 plane: D(E2) = -E3, D(E3) = E2.
    let c = linear("g31_heisenberg", None, &[0, 0, 0, 0, 0, 1, 0, -1, 0]).unwrap();
    assert!((period_of(&c) - 2.0 * PI).abs() < 1e-14);
    // D(E2) = -E3, D(E3) = E1 is nilpotent.
    let c = linear("g31_heisenberg", None, &[0, 0, 1, 0, 0, 0, 0, -1, 0]).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::NonSemisimpleEigenvalue));
    // Same rotation with an unbalanced trace fails Leibniz.
    let err = linear("g31_heisenberg", None, &[1, 0, 0, 0, 0, 1, 0, -1, 0]).unwrap_err();
    assert!(matches!(err, PeriodicityError::NotADerivation { .. }));
}

#[test]
fn g34_with_parameter_two() {
    let c = linear("g34_a", Some(2), &[0, 1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::RealNonzeroEigenvalue));
    // A lone diagonal entry in the second slot is not a derivation.
    let err = linear("g34_a", Some(2), &[0, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap_err();
    assert!(matches!(err, PeriodicityError::NotADerivation { .. }));
}

#[test]
fn g35_has_periodic_derivations() {
    for a in [frac(1, 2), int(2), int(3)] {
        let e = get_entry("g35_a", Some(a)).unwrap();
        let d = QMatrix::from_i64(3, 3, &[0, 2, -1, -2, 0, -1, 0, 0, 0]);
        let c = classify_linear_flow(&e.structure, &d, &cfg()).unwrap();
        assert!((period_of(&c) - PI).abs() < 1e-14);
    }
}

#[test]
fn g32_derivations_are_never_periodic() {
    for d in [[0, 1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 2, 0, 0, 3, 0, 0, 0], [1, 0, 0, 0, 1, 0, 0, 0, 0]] {
        let c = linear("g32", None, &d).unwrap();
        assert!(reason(&c).is_some(), "{d:?}");
    }
}

#[test]
fn irrational_and_commensurable_frequencies() {
    let blocks = |w: &[i64]| {
        let mut m = QMatrix::zeros(2 * w.len(), 2 * w.len());
        for (b, &s) in w.iter().enumerate() {
            // [[0, -s], [1, 0]] has frequency √s.
            m.set(2 * b, 2 * b + 1, int(-s));
            m.set(2 * b + 1, 2 * b, int(1));
        }
        m
    };
    let v = |m: &QMatrix| classify_flow(&spectrum(m, 1e-9).unwrap(), &cfg()).unwrap();
    assert_eq!(v(&blocks(&[1, 2])), FlowVerdict::NoPeriodicOrbits { reason: NoPeriodReason::IrrationalRatio });
    // √2 and √8 = 2√2.
    match v(&blocks(&[2, 8])) {
        FlowVerdict::PeriodicFlow { period, profile } => {
            assert_eq!(period.symbolic.unwrap().to_string(), "sqrt(2)*pi");
            assert_eq!(profile.ratios[1], (2.into(), 1.into()));
        }
        other => panic!("{other:?}"),
    }
    // Frequencies 2 and 3.
    match v(&blocks(&[4, 9])) {
        FlowVerdict::PeriodicFlow { period, .. } => assert!((period.value - 2.0 * PI).abs() < 1e-14),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invariant_flows() {
    let abelian = get_entry("abelian3", None).unwrap();
    let c = classify_invariant_flow(&abelian.structure, &AlgebraVector::from_i64(&[1, 2, 3]), &cfg()).unwrap();
    assert_eq!(c.verdict.tag(), "SpectralPeriodicInconclusive");

    let heis = get_entry("g31_heisenberg", None).unwrap();
    let center = heis.structure.center();
    assert_eq!(center.len(), 1);
    let c = classify_invariant_flow(&heis.structure, &center[0], &cfg()).unwrap();
    assert_eq!(c.verdict.tag(), "SpectralPeriodicInconclusive");

    let sl2 = get_entry("sl2", None).unwrap();
    let c = classify_invariant_flow(&sl2.structure, &AlgebraVector::from_i64(&[1, 0, 0]), &cfg()).unwrap();
    assert!((period_of(&c) - PI).abs() < 1e-14);
    assert!(c.caveats.iter().any(|s| s.contains("multiple")));
    let c = classify_invariant_flow(&sl2.structure, &AlgebraVector::from_i64(&[0, 1, 0]), &cfg()).unwrap();
    assert_eq!(reason(&c), Some(NoPeriodReason::RealNonzeroEigenvalue));
}

#[test]
fn verdict_documents_round_trip() {
    let cases = [
        linear("sl2", None, &[0, -2, 0, 0, 0, 1, 0, -4, 0]).unwrap(),
        linear("aff2", None, &[0, 0, 0, 1]).unwrap(),
        linear("aff2", None, &[0, 0, 0, 0]).unwrap(),
        classify_invariant_flow(&get_entry("abelian2", None).unwrap().structure, &AlgebraVector::from_i64(&[1, 0]), &cfg())
            .unwrap(),
    ];
    for c in cases {
        let json = serde_json::to_string(&c.to_document()).unwrap();
        let doc: VerdictDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(Classification::from_document(&doc).unwrap(), c);
    }
    let bad = VerdictDocument { tag: "Sometimes".into(), ..linear("aff2", None, &[0, 0, 0, 0]).unwrap().to_document() };
    assert!(Classification::from_document(&bad).is_err());
}

fn rotation(freqs: &[i64], scale: (i64, i64)) -> QMatrix {
    let n = 2 * freqs.len();
    let mut m = QMatrix::zeros(n, n);
    let s = frac(scale.0, scale.1);
    for (b, &w) in freqs.iter().enumerate() {
        m.set(2 * b, 2 * b + 1, -int(w) * &s);
        m.set(2 * b + 1, 2 * b, int(w) * &s);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_divides_the_period(freqs in prop::collection::vec(1i64..=6, 1..=3), p in 1i64..=5, q in 1i64..=5) {
        let v = |m: &QMatrix| classify_flow(&spectrum(m, 1e-9).unwrap(), &cfg()).unwrap();
        let base = v(&rotation(&freqs, (1, 1))).period().unwrap().value;
        let scaled = v(&rotation(&freqs, (p, q))).period().unwrap().value;
        prop_assert!((scaled - base * q as f64 / p as f64).abs() < 1e-12 * base.max(1.0));
    }

    #[test]
    fn negation_preserves_the_verdict(freqs in prop::collection::vec(1i64..=6, 1..=3)) {
        let v = |m: &QMatrix| classify_flow(&spectrum(m, 1e-9).unwrap(), &cfg()).unwrap();
        prop_assert_eq!(v(&rotation(&freqs, (1, 1))), v(&rotation(&freqs, (-1, 1))));
    }
}
