mod common;

use common::props::{self, repos, repos_and_order, CASES};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn curves_are_monotone_and_capped(repos in repos(10, 12)) {
        props::curves_are_monotone_and_capped(&repos)?;
    }

    #[test]
    fn offset_sign_follows_release_date(repos in repos(10, 12)) {
        props::offset_sign_follows_release_date(&repos)?;
    }

    #[test]
    fn curves_equal_brute_force_recount(repos in repos(10, 8)) {
        props::curves_equal_brute_force_recount(&repos)?;
    }

    #[test]
    fn groups_ignore_repository_order((repos, order) in repos_and_order(40, 4)) {
        props::groups_ignore_repository_order(&repos, &order)?;
    }
}
