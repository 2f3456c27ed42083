mod common;

use proptest::prelude::*;

use common::*;
use multidil::chain_lemma::{lemma6, BetweenCounts, Lemma6Outcome};
use multidil::decomposition::{erdos_szekeres, longest_chain, mirsky, Direction};
use multidil::driver::{theorem1, theorem2, Branch, Mode};
use multidil::format::{parse_poset, poset_to_json};
use multidil::genlab::{generate, GenSpec, Model};
use multidil::Poset;

fn random_poset() -> impl Strategy<Value = Poset> {
    (1usize..70, 0.0f64..0.5, any::<u64>()).prop_map(|(n, p, seed)| {
        generate(&GenSpec::new(Model::RandomDag { n, p }, seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_strict_order(p in random_poset()) {
        let n = p.len();
        for x in 0..n {
            prop_assert!(!p.less(x, x));
            for y in 0..n {
                if p.less(x, y) {
                    prop_assert!(!p.less(y, x));
                    for z in 0..n {
                        if p.less(y, z) {
                            prop_assert!(p.less(x, z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip(p in random_poset()) {
        prop_assert_eq!(parse_poset(&poset_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn dual_reverses(p in random_poset()) {
        let d = p.dual();
        for (x, y) in p.relations() {
            prop_assert!(d.less(y, x));
        }
        prop_assert_eq!(d.dual(), p);
    }

    #[test]
    fn mirsky_levels_are_antichains_covering_a_longest_chain(p in random_poset()) {
        let m = mirsky(&p);
        for level in &m.levels {
            for &a in level {
                for &b in level {
                    prop_assert!(!p.less(a, b));
                }
            }
        }
        let chain = longest_chain(&p, &m);
        prop_assert_eq!(chain.len(), m.height());
        prop_assert!(chain.windows(2).all(|w| p.less(w[0], w[1])));
    }

    #[test]
    fn shifted_order_is_a_suborder(p in random_poset(), ell in 1usize..4) {
        let shifted = BetweenCounts::new(&p).ell_order(ell);
        for x in 0..p.len() {
            for y in 0..p.len() {
                let between = (0..p.len()).filter(|&z| p.less(x, z) && p.less(z, y)).count();
                prop_assert_eq!(shifted.less(x, y), between >= ell);
            }
        }
    }

    #[test]
    fn lemma_outcomes_hold(p in random_poset(), k in 2usize..5, ell in 1usize..6) {
        prop_assume!(ell * k < p.len());
        match lemma6(&p, k, ell).unwrap() {
            Lemma6Outcome::SetChain { sets, .. } => {
                prop_assert!(disjoint_in_range(p.len(), &sets));
                prop_assert!(ascending(&p, &sets));
                prop_assert!(sets.iter().all(|s| s.len() == ell));
            }
            Lemma6Outcome::SparseDown(core) | Lemma6Outcome::SparseUp(core) => {
                prop_assert!(16 * k * core.members.len() >= 7 * p.len());
                prop_assert!((core.max_degree as f64) < core.degree_bound);
            }
        }
    }

    #[test]
    fn relaxed_drivers_return_valid_families(p in random_poset(), k in 2usize..4) {
        prop_assume!(p.len() > k);
        for r in [theorem1(&p, k, Mode::Relaxed), theorem2(&p, k, Mode::Relaxed)] {
            let r = r.unwrap();
            let sets = &r.sets.sets;
            prop_assert_eq!(sets.len(), k);
            prop_assert!(disjoint_in_range(p.len(), sets));
            match r.branch {
                Branch::DescendingSetChain => prop_assert!(descending(&p, sets)),
                Branch::TotallyIncomparable => prop_assert!(totally_incomparable(&p, sets)),
            }
        }
    }

    #[test]
    fn monotone_subsequence_bound(
        items in (0usize..300).prop_flat_map(|m| Just((0..m as u32).collect::<Vec<_>>()).prop_shuffle())
    ) {
        let run = erdos_szekeres(&items, |a, b| a < b);
        let len = run.indices.len();
        prop_assert!(len * len >= items.len());
        let picked: Vec<u32> = run.indices.iter().map(|&i| items[i]).collect();
        prop_assert!(run.indices.windows(2).all(|w| w[0] < w[1]));
        match run.direction {
            Direction::Increasing => prop_assert!(picked.windows(2).all(|w| w[0] < w[1])),
            Direction::Decreasing => prop_assert!(picked.windows(2).all(|w| w[0] > w[1])),
        }
    }
}
