//! Library outputs against exhaustive or hand-derived answers.

mod common;

use common::*;
use multidil::chain_lemma::{between_count, ell_order, lemma6, Lemma6Outcome};
use multidil::decomposition::{erdos_szekeres, largest_level, mirsky};
use multidil::driver::{mk_bounds, theorem1, theorem2, Branch, Mode};
use multidil::genlab::{all_labeled_posets, generate, oracle_tiny_best, GenSpec, Model, SplitMix64, Target};
use multidil::incomparable::{extract_incomparable, select, BoundProfile};
use multidil::{Claim, Error, Poset, Real, SubsetFamily};

#[test]
fn between_counts_on_every_small_poset() {
    for n in 0..=4 {
        for p in all_labeled_posets(n).unwrap() {
            for x in 0..n {
                for y in 0..n {
                    let brute = (0..n).filter(|&z| p.less(x, z) && p.less(z, y)).count();
                    assert_eq!(between_count(&p, x, y).unwrap(), brute);
                }
            }
        }
    }
    assert!(matches!(
        between_count(&Poset::chain(2), 0, 2),
        Err(Error::Range { .. })
    ));
}

#[test]
fn shifted_order_on_a_chain() {
    let chain = Poset::chain(5);
    for ell in 1..=2 {
        let s = ell_order(&chain, ell);
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(s.less(x, y), y >= x + ell + 1);
            }
        }
    }
}

#[test]
fn mirsky_height_is_the_longest_chain() {
    let mut rng = SplitMix64::new(11);
    for _ in 0..200 {
        let n = uniform(&mut rng, 1, 10);
        let p = generate(&GenSpec::new(Model::RandomDag { n, p: 0.35 }, rng.next_u64())).unwrap();
        // Longest chain by subset enumeration.
        let mut best = 0;
        for mask in 1u32..1 << n {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if members
                .iter()
                .all(|&a| members.iter().all(|&b| a == b || p.comparable(a, b)))
            {
                best = best.max(members.len());
            }
        }
        let m = mirsky(&p);
        assert_eq!(m.height(), best);
        let level = largest_level(&p).unwrap();
        assert!(level.len() * best >= n);
    }
}

#[test]
fn boolean_lattice_levels() {
    let p = Poset::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let sizes: Vec<usize> = mirsky(&p).levels.iter().map(Vec::len).collect();
    assert_eq!(sizes, vec![1, 2, 1]);
    assert_eq!(largest_level(&p).unwrap(), vec![1, 2]);
}

/// Longest strictly increasing subsequence by patience sorting.
fn lis(items: &[i64]) -> usize {
    let mut tails: Vec<i64> = Vec::new();
    for &x in items {
        match tails.binary_search(&x) {
            Ok(_) => {}
            Err(i) if i == tails.len() => tails.push(x),
            Err(i) => tails[i] = x,
        }
    }
    tails.len()
}

#[test]
fn monotone_run_is_longest() {
    let mut rng = SplitMix64::new(12);
    for _ in 0..300 {
        let m = uniform(&mut rng, 0, 400);
        let items: Vec<i64> = permutation(m, &mut rng).into_iter().map(|x| x as i64).collect();
        let negated: Vec<i64> = items.iter().map(|x| -x).collect();
        let run = erdos_szekeres(&items, |a, b| a < b);
        assert_eq!(run.indices.len(), lis(&items).max(lis(&negated)));
    }
    assert_eq!(erdos_szekeres(&[2, 4, 1, 3], |a, b| a < b).indices.len(), 2);
}

#[test]
fn lemma_examples() {
    let chain = Poset::chain(9);
    match lemma6(&chain, 2, 2).unwrap() {
        Lemma6Outcome::SetChain { sets, .. } => {
            let fam = SubsetFamily::new(9, sets);
            assert!(chain.verify_structure(&fam, Claim::AscendingChain).unwrap().holds);
        }
        other => panic!("expected a set chain, got {other:?}"),
    }
    match lemma6(&Poset::antichain(16), 2, 1).unwrap() {
        Lemma6Outcome::SparseDown(core) => {
            assert_eq!(core.members.len(), 16);
            assert_eq!(core.max_degree, 0);
        }
        other => panic!("expected a sparse core, got {other:?}"),
    }
}

#[test]
fn select_and_extract_on_antichains() {
    let sets = select(&Poset::antichain(32), 2, &Real::int(2), &Real::int(0)).unwrap();
    let mut sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![16, 16]);

    let q = Poset::antichain(16);
    let family =
        extract_incomparable(&q, 2, &Real::int(1), &Real::int(0), &BoundProfile::thm1(), true).unwrap();
    let mut sizes: Vec<usize> = family.sets.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![8, 8]);
    assert!(totally_incomparable(&q, &family.sets));

    let too_big = extract_incomparable(&q, 2, &Real::int(5), &Real::int(0), &BoundProfile::thm1(), true);
    match too_big {
        Err(Error::Precondition(v)) => assert!(v.iter().any(|s| s.contains("|Q|/f(k)"))),
        other => panic!("expected a precondition error, got {other:?}"),
    }
}

#[test]
fn drivers_on_chains_and_antichains() {
    let r = theorem2(&Poset::chain(1000), 4, Mode::Relaxed).unwrap();
    assert_eq!(r.branch, Branch::DescendingSetChain);
    assert!(descending(&Poset::chain(1000), &r.sets.sets));

    let anti = Poset::antichain(60);
    let r = theorem1(&anti, 3, Mode::Relaxed).unwrap();
    assert_eq!(r.branch, Branch::TotallyIncomparable);
    assert_eq!(r.sets.len(), 3);
    assert!(totally_incomparable(&anti, &r.sets.sets));
}

#[test]
fn drivers_never_beat_the_exhaustive_optimum() {
    let mut rng = SplitMix64::new(13);
    for _ in 0..150 {
        let n = uniform(&mut rng, 3, 9);
        let p = generate(&GenSpec::new(Model::RandomDag { n, p: 0.4 }, rng.next_u64())).unwrap();
        let Ok(r) = theorem1(&p, 2, Mode::Relaxed) else {
            continue;
        };
        let target = match r.branch {
            Branch::DescendingSetChain => Target::SetChain,
            Branch::TotallyIncomparable => Target::Incomparable,
        };
        assert!(r.achieved_size <= oracle_tiny_best(&p, 2, target).unwrap());
    }
}

#[test]
fn strict_mode_rejects_small_instances() {
    let p = Poset::chain(100);
    assert!(matches!(
        theorem1(&p, 2, Mode::Strict),
        Err(Error::Precondition(_)) | Err(Error::InstanceTooSmall { .. })
    ));
}

#[test]
fn bounds_at_a_trillion() {
    let report = mk_bounds(1_000_000_000_000, 2).unwrap();
    let expected = 1e12 / (160.0 * (1e12f64).ln());
    assert!((report.lower - expected).abs() / expected < 1e-9);
    assert!(report.lower_valid);
}
