use proptest::prelude::*;

use symcat::catbounds::{
    cup_length, describe, ganea_upper, tabulated, Bound, Coefficients, GradedAlgebraSpec, Params,
    SymmetricFamily,
};

fn parameter_grid(family: SymmetricFamily) -> Vec<Params> {
    let ranks = |from: u64| (from..=12).map(Params::Rank).collect::<Vec<_>>();
    let pairs = |min_q: u64| {
        let mut v = Vec::new();
        for p in 1..=8 {
            for q in min_q..=p {
                v.push(Params::Pair(p, q));
            }
        }
        v
    };
    use SymmetricFamily::*;
    match family {
        AI => ranks(3),
        AII => ranks(2),
        AIII | CII => pairs(1),
        BDI => pairs(2)
            .into_iter()
            .filter(|p| *p != Params::Pair(2, 2))
            .collect(),
        BDII => ranks(2),
        DIII => ranks(4),
        CI => ranks(3),
    }
}

#[test]
fn recomputed_table_matches_the_tabulated_values() {
    for family in SymmetricFamily::ALL {
        for params in parameter_grid(family) {
            let d = describe(family, params).unwrap();
            let (dimension, cat) = tabulated(family, params).unwrap();
            assert_eq!(d.dimension, dimension, "{family} {params:?}");
            assert_eq!(d.cat_exact, cat, "{family} {params:?}");
            if let Bound::Known(v) = cat {
                assert_eq!(d.cat_lower, Bound::Known(v), "{family} {params:?}");
                assert_eq!(d.cat_upper, Bound::Known(v), "{family} {params:?}");
            }
        }
    }
}

#[test]
fn bounds_are_ordered_when_known() {
    for family in SymmetricFamily::ALL {
        for params in parameter_grid(family) {
            let d = describe(family, params).unwrap();
            if let (Some(lo), Some(hi)) = (d.cat_lower.known(), d.cat_upper.known()) {
                assert!(lo <= hi, "{family} {params:?}");
                // category never exceeds dimension
                assert!(hi <= d.dimension, "{family} {params:?}");
            }
        }
    }
}

#[test]
fn ai_and_aii_rows_are_n_minus_one() {
    for n in 3..=8u32 {
        for family in [SymmetricFamily::AI, SymmetricFamily::AII] {
            let d = describe(family, Params::Rank(n as u64)).unwrap();
            assert_eq!(d.cat_exact, Bound::Known(n as u64 - 1));
        }
        assert_eq!(cup_length(&GradedAlgebraSpec::type_ai(n)), n as usize - 1);
        assert_eq!(cup_length(&GradedAlgebraSpec::type_aii(n)), n as usize - 1);
    }
}

proptest! {
    #[test]
    fn cup_length_counts_generators(
        degrees in proptest::collection::vec(1u32..20, 0..40),
        integral in any::<bool>(),
    ) {
        let coefficients = if integral { Coefficients::Integer } else { Coefficients::Mod2 };
        let spec = GradedAlgebraSpec::exterior(degrees.clone(), coefficients);
        prop_assert_eq!(cup_length(&spec), degrees.len());
    }

    #[test]
    fn ganea_is_floor_division(dimension in 0u64..10_000, r in 1i64..64) {
        let v = ganea_upper(dimension, r).unwrap();
        prop_assert!(v * r as u64 <= dimension);
        prop_assert!((v + 1) * r as u64 > dimension);
    }

    #[test]
    fn ganea_rejects_nonpositive_connectivity(r in -50i64..1) {
        prop_assert!(ganea_upper(10, r).is_err());
    }
}
