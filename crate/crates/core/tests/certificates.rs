use phin_core::certify::{certify_with_sweep, evaluate_constraint, Sweep, Variant, GAMMA_RELATION};
use phin_core::{
    certify, verify_certificate, Certificate, Evidence, FockVector, GammaPoly, PartitionState,
    Scalar, StructureConstants, VerifyError,
};

#[test]
fn branches_for_small_degrees() {
    assert_eq!(certify(0).variant(), Variant::NoObstruction);
    assert_eq!(certify(1).variant(), Variant::UniqueCandidateContradiction);
    for n in 2..=6 {
        let cert = certify(n);
        assert_eq!(cert.variant(), Variant::NullLevelTwo, "n = {n}");
        assert!(cert.level_two_gram.is_zero());
    }
    for n in 1..=6 {
        assert!(certify(n).is_obstruction());
    }
}

#[test]
fn json_round_trip_and_replay() {
    for n in 0..=6 {
        let cert = certify(n);
        let json = serde_json::to_string_pretty(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cert);
        verify_certificate(&back).unwrap();
    }
    let json = serde_json::to_string(&certify(1)).unwrap();
    assert!(json.contains(GAMMA_RELATION));
}

fn tamper(cert: &Certificate, path: &[&str], value: serde_json::Value) -> Certificate {
    let mut json = serde_json::to_value(cert).unwrap();
    let mut slot = &mut json;
    for key in path {
        slot = match key.parse::<usize>() {
            Ok(i) => &mut slot[i],
            Err(_) => &mut slot[*key],
        };
    }
    *slot = value;
    serde_json::from_value(json).unwrap()
}

fn failing_field(cert: &Certificate) -> String {
    match verify_certificate(cert).unwrap_err() {
        VerifyError::Mismatch { field, .. } | VerifyError::Invalid { field, .. } => field,
    }
}

#[test]
fn tampering_names_the_field() {
    let one = certify(1);
    assert_eq!(
        failing_field(&tamper(&one, &["evidence", "mismatch"], "47".into())),
        "evidence.mismatch"
    );
    assert_eq!(
        failing_field(&tamper(&one, &["evidence", "witness_norm"], "7".into())),
        "evidence.witness_norm"
    );
    assert_eq!(
        failing_field(&tamper(&one, &["evidence", "relation"], "c|γ|² = 6".into())),
        "evidence.relation"
    );
    assert_eq!(
        failing_field(&tamper(&one, &["level_two_gram", "0", "0"], "5".into())),
        "level_two_gram"
    );
    assert_eq!(
        failing_field(&tamper(&one, &["degree"], 2.into())),
        "level_two_gram"
    );

    let two = certify(2);
    assert_eq!(
        failing_field(&tamper(&two, &["evidence", "central_charge"], "1".into())),
        "evidence.central_charge"
    );
    let zero = certify(0);
    assert_eq!(
        failing_field(&tamper(
            &zero,
            &["evidence", "effective_dimension"],
            3.into()
        )),
        "evidence.effective_dimension"
    );
    assert_eq!(
        failing_field(&tamper(&zero, &["effective_dimension"], 1.into())),
        "effective_dimension"
    );
}

#[test]
fn contradiction_is_gamma_independent() {
    let Evidence::UniqueCandidateContradiction {
        required,
        actual,
        mismatch,
        ..
    } = certify(1).evidence
    else {
        panic!("expected the contradiction branch");
    };
    for (p, q) in [(1, 1), (1, 7), (12, 5), (3, 1000)] {
        let x = Scalar::ratio(p, q);
        assert_eq!(required.eval(&x) - actual.eval(&x), mismatch);
    }
}

#[test]
fn gap_is_homogeneous_under_rescaling() {
    let c = StructureConstants::new(1);
    let psi = FockVector::basis(PartitionState::new(vec![2]).unwrap());
    let base = evaluate_constraint(&c, 2, &psi, &Scalar::from(12)).unwrap();
    assert_eq!(base.mismatch, GammaPoly::constant(Scalar::from(48)));
    for t in [Scalar::from(2), Scalar::ratio(-3, 7), Scalar::ratio(5, 2)] {
        let scaled = evaluate_constraint(&c, 2, &psi.scale(&t), &Scalar::from(12)).unwrap();
        let t2 = &t * &t;
        assert_eq!(scaled.required, base.required.scale(&t2));
        assert_eq!(scaled.actual, base.actual.scale(&t2));
        assert_eq!(scaled.mismatch, base.mismatch.scale(&t2));
        // 4 · level · ‖ψ‖²
        assert_eq!(
            scaled.mismatch.coefficient(0),
            Scalar::from(8) * &scaled.witness_norm
        );
    }
}

#[test]
fn mixed_witnesses_obey_the_same_gap_law() {
    let c = StructureConstants::new(1);
    let psi = FockVector::from_terms([
        (PartitionState::new(vec![4]).unwrap(), Scalar::from(1)),
        (
            PartitionState::new(vec![2, 2]).unwrap(),
            Scalar::ratio(-1, 3),
        ),
        (PartitionState::new(vec![3, 1]).unwrap(), Scalar::from(2)),
    ]);
    for m in 2..=5 {
        let check = evaluate_constraint(&c, m, &psi, &Scalar::from(12)).unwrap();
        let expected = Scalar::from(2 * m * 4) * &check.witness_norm;
        assert_eq!(check.mismatch, GammaPoly::constant(expected), "m = {m}");
    }
}

#[test]
fn sweep_replays() {
    let cert = certify_with_sweep(
        1,
        Some(Sweep {
            max_mode: 5,
            max_level: 4,
        }),
    );
    verify_certificate(&cert).unwrap();
    let tampered = tamper(
        &cert,
        &["evidence", "sweep", "3", "actual", "coefficients", "1"],
        "1".into(),
    );
    assert!(failing_field(&tampered).starts_with("evidence.sweep[3]."));
}
