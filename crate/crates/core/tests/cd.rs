use labs_core::cd::{build_o1, oracle_gammas, CdClosedForm, FieldConfig};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn closed_forms_match_commutator_oracle() {
    for n in 3..=10 {
        let f = FieldConfig::uniform(n);
        let cf = CdClosedForm::new(n, &f).unwrap();
        for step in 0..=10 {
            let lambda = step as f64 / 10.0;
            let o = oracle_gammas(n, &f, lambda).unwrap();
            let g2 = cf.gamma2(lambda);
            assert!(rel(cf.gamma1, o.gamma1) <= 1e-9, "gamma1 n={n} lambda={lambda}");
            assert!(rel(g2, o.gamma2) <= 1e-9, "gamma2 n={n} lambda={lambda}");
            let a = cf.alpha1(lambda).unwrap().alpha1;
            assert!(rel(a, -o.gamma1 / o.gamma2) <= 1e-9, "alpha1 n={n} lambda={lambda}");
        }
    }
}

#[test]
fn first_order_term_matches_oracle_and_is_lambda_independent() {
    for n in 3..=10 {
        let f = FieldConfig::uniform(n);
        let closed = build_o1(n, &f).unwrap();
        let early = oracle_gammas(n, &f, 0.25).unwrap().o1;
        let late = oracle_gammas(n, &f, 0.75).unwrap().o1;
        for oracle in [&early, &late] {
            assert_eq!(oracle.len(), closed.len(), "n={n}");
            for (word, c) in closed.iter() {
                assert!((oracle.coefficient(word) - c).norm() <= 1e-12, "n={n}");
            }
        }
    }
}
