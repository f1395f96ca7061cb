mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use iface_core::similarity::{ic_score, is_score};
use iface_core::ExclusionPolicy;
use proptest::prelude::*;

fn check(result: Result<(), String>) -> Result<(), TestCaseError> {
    result.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pair_laws(a in id_set(), b in id_set()) {
        check(check_pair_laws(&a, &b))?;
    }

    #[test]
    fn system_laws(model in model_strategy()) {
        check(check_system_laws(&model))?;
    }

    #[test]
    fn filter_is_idempotent(model in model_strategy(), tests in any::<bool>(), markers in any::<bool>()) {
        let policy = ExclusionPolicy { exclude_tests: tests, exclude_markers: markers, ..ExclusionPolicy::default() };
        check(check_filter_idempotent(&model, &policy))?;
    }

    #[test]
    fn rename_invariance(model in model_strategy(), salt in 0u32..1000) {
        check(check_rename_invariance(&model, salt))?;
    }

    #[test]
    fn json_round_trip(model in model_strategy()) {
        check(check_json_round_trip(&model))?;
    }
}

#[test]
fn identical_and_contained_sets_hit_one() {
    let sets: SetModel = BTreeMap::from([
        ("x.A".to_string(), BTreeSet::from([1, 2])),
        ("x.B".to_string(), BTreeSet::from([2, 1])),
        ("x.C".to_string(), BTreeSet::from([1, 2, 3])),
    ]);
    let model = to_code_model(&sets);
    assert_eq!(is_score(&model, &tn("x.A"), &tn("x.B")).unwrap(), 1.0);
    assert_eq!(ic_score(&model, &tn("x.A"), &tn("x.C")).unwrap(), 1.0);
    assert!(ic_score(&model, &tn("x.C"), &tn("x.A")).unwrap() < 1.0);
}
