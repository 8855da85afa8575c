use num_bigint::BigInt;
use qlat::equivalence::BasisChange;
use qlat::selfsim::{
    cassini_residual, catalog, count_selfsame, enumerate_selfsame, inflate_params, irreducible_count,
    irreducible_count_mobius, n_s, scale_families, MAX_S,
};
use qlat::{Error, QuadraticNumber as Q};

#[test]
fn cycle_counts_are_integral_to_max_depth() {
    for (_, tau) in scale_families() {
        for s in 1..=MAX_S {
            let c = count_selfsame(&tau, s).unwrap();
            assert_eq!(&c.cycles * BigInt::from(s), c.irreducible);
        }
        assert!(matches!(count_selfsame(&tau, MAX_S + 1), Err(Error::InflationTooDeep(_))));
    }
}

#[test]
fn mobius_and_recursive_counts_agree() {
    for (_, tau) in scale_families() {
        for s in 1..=40 {
            assert_eq!(irreducible_count(&tau, s), irreducible_count_mobius(&tau, s));
        }
    }
}

#[test]
fn cassini_identity() {
    for (_, tau) in scale_families() {
        for s in 1..=30 {
            let want = if tau.det() < 0 && s % 2 == 0 { -1 } else { 1 };
            assert_eq!(cassini_residual(&tau, s, 1), BigInt::from(want));
        }
    }
}

#[test]
fn fibonacci_cycles_match_known_sequence() {
    // necklace-style counts of periodic orbits of the golden toral map
    let tau = BasisChange::from([[0, 1], [1, 1]]);
    let got: Vec<i64> = (1..=12).map(|s| count_selfsame(&tau, s).unwrap().cycles.try_into().unwrap()).collect();
    assert_eq!(got, [0, 1, 1, 1, 2, 2, 4, 5, 8, 11, 18, 25]);
}

#[test]
fn enumerated_classes_are_self_same() {
    for entry in catalog() {
        let spec = entry.spec(Q::zero(), Q::ratio(1, 3));
        for s in 1..=3 {
            let classes = enumerate_selfsame(&spec, &entry.tau, s).unwrap();
            for class in &classes {
                if class.signs.is_some() {
                    continue;
                }
                let inflated = inflate_params(&class.spec, &entry.tau, s).unwrap();
                assert!(class.spec.solve_umklaap(&inflated).is_some(), "{} s={s}", entry.case_id);
            }
            let n = n_s(&entry.tau, s);
            let found = BigInt::from(classes.len());
            if entry.tau.det() < 0 {
                assert_eq!(found, n, "{} s={s}", entry.case_id);
            } else {
                assert_eq!(found, n + 1, "{} s={s}", entry.case_id);
            }
        }
    }
}
