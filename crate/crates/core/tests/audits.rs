use harmanlab::ideals::{self, IdealTable};
use harmanlab::weights::{self, AuditParams, Enumeration, WeightSpec};
use harmanlab::{AlgInt, Error, FieldSpec};

fn gauss() -> FieldSpec {
    FieldSpec::new(-1).unwrap()
}

#[test]
fn keycond_with_characteristic_weight_is_the_prime_count() {
    let k = gauss();
    let w = WeightSpec::characteristic(50_000.0).unwrap();
    let rep = weights::audit_keycond(&k, &w, (AlgInt::ONE, 1), &AuditParams::default()).unwrap();
    let count = ideals::pi_k(&k, 50_000.0).unwrap().count as f64;
    assert_eq!(rep.lhs, count);
    let y: f64 = 50_000.0;
    assert!((rep.ratio - count * y.ln() / y).abs() < 1e-12);
}

#[test]
fn keycond_with_multiplier_counts_primes_below_n_over_r() {
    let k = gauss();
    let w = WeightSpec::characteristic(20_000.0).unwrap();
    let r = AlgInt::new(2, 1);
    let rep = weights::audit_keycond(&k, &w, (r, 5), &AuditParams::default()).unwrap();
    assert_eq!(rep.lhs, ideals::pi_k(&k, 4_000.0).unwrap().count as f64);
    assert!(weights::audit_keycond(&k, &w, (AlgInt::new(100, 100), 20_000), &AuditParams::default()).is_err());
}

/// The sweep agrees with the largest single-rank report.
#[test]
fn finitecond_sweep_matches_rank_by_rank() {
    let k = FieldSpec::new(3).unwrap();
    let w = WeightSpec::real_product(&k, 2_000.0, 2).unwrap();
    let p = AuditParams::default();
    let primes = ideals::enumerate_prime_ideals(&k, w.norm_budget(&k)).unwrap();
    let worst = weights::audit_finitecond_worst(&k, &primes, &w, (AlgInt::ONE, 1), &p).unwrap();
    let mut best = f64::MIN;
    for rank in 0..primes.len() {
        if let Ok(rep) = weights::audit_finitecond(&k, &primes, &w, (AlgInt::ONE, 1), rank, &p) {
            best = best.max(rep.ratio);
        }
    }
    assert!((worst.ratio - best).abs() <= 1e-12 * best);
    assert!(worst.pass);
}

#[test]
fn xcond_holds_with_slack_and_agrees_with_table_sum() {
    let k = gauss();
    let w = WeightSpec::gaussian(&k, 10_000.0).unwrap();
    let p = AuditParams::default();
    let by_norm = weights::audit_xcond(&Enumeration { field: &k, table: None }, &w, &p).unwrap();
    assert!(by_norm.pass && by_norm.ratio < 0.05);
    let t = IdealTable::build(&k, w.norm_budget(&k).ceil() as u64).unwrap();
    let by_table = weights::audit_xcond(&Enumeration { field: &k, table: Some(&t) }, &w, &p).unwrap();
    assert!((by_norm.lhs - by_table.lhs).abs() <= 1e-9 * by_norm.lhs);
}

#[test]
fn tailcond_gaussian_meets_stronger_bound() {
    let k = gauss();
    let w = WeightSpec::gaussian(&k, 100_000.0).unwrap();
    let rep = weights::audit_tailcond(&Enumeration { field: &k, table: None }, &w, (AlgInt::ONE, 1), &AuditParams::default())
        .unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn generator_dependent_weights_need_a_table() {
    let k = FieldSpec::new(3).unwrap();
    let w = WeightSpec::real_product(&k, 1_000.0, 2).unwrap();
    let err = weights::audit_xcond(&Enumeration { field: &k, table: None }, &w, &AuditParams::default()).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    let small = IdealTable::build(&k, 100).unwrap();
    let err = weights::audit_xcond(&Enumeration { field: &k, table: Some(&small) }, &w, &AuditParams::default())
        .unwrap_err();
    assert!(matches!(err, Error::Budget { .. }));
    assert_eq!(err.exit_code(), 3);
}

/// With every ideal sampled the audit is the plain maximum of `W · x`.
#[test]
fn needed_wbound_is_the_maximum_over_the_range() {
    let k = FieldSpec::new(3).unwrap();
    let w = WeightSpec::real_product(&k, 5_000.0, 25).unwrap();
    let p = AuditParams::default();
    let x = weights::x_of(5_000.0, p.epsilon);
    let top = x.powf(1.0 - 2.0 * p.epsilon);
    let t = IdealTable::build(&k, top.ceil() as u64).unwrap();
    let rep = weights::audit_needed_wbound(&t, &w, usize::MAX, &p).unwrap();
    let direct = t
        .up_to(top)
        .iter()
        .map(|&i| w.eval(&k, t.generator(i), t.norm(i)) * x)
        .fold(0.0, f64::max);
    assert_eq!(rep.ratio, direct);
}

#[test]
fn newsmallandlarge_reports_its_parameters() {
    let k = gauss();
    let w = WeightSpec::omega(&k, 5_000.0, 2, 0.25).unwrap();
    let lambda = match &w {
        WeightSpec::Omega { lambda, .. } => *lambda,
        _ => unreachable!(),
    };
    let rep =
        weights::audit_newsmallandlarge(&Enumeration { field: &k, table: None }, &w, lambda, &AuditParams::default())
            .unwrap();
    assert_eq!(rep.parameters["iota"], 0.1);
    assert_eq!(rep.parameters["lambda"], lambda);
    assert!(rep.ratio.is_finite() && rep.lhs > 0.0);
}
