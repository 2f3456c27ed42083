#![allow(dead_code)]

use multidil::genlab::{generate, GenSpec, Model, SplitMix64};
use multidil::Poset;

/// Element-wise check that `sets[0] < sets[1] < ...`.
pub fn ascending(p: &Poset, sets: &[Vec<usize>]) -> bool {
    sets.windows(2)
        .all(|w| w[0].iter().all(|&a| w[1].iter().all(|&b| p.less(a, b))))
}

pub fn descending(p: &Poset, sets: &[Vec<usize>]) -> bool {
    sets.windows(2)
        .all(|w| w[0].iter().all(|&a| w[1].iter().all(|&b| p.less(b, a))))
}

pub fn totally_incomparable(p: &Poset, sets: &[Vec<usize>]) -> bool {
    (0..sets.len()).all(|i| {
        (i + 1..sets.len()).all(|j| {
            sets[i]
                .iter()
                .all(|&a| sets[j].iter().all(|&b| a != b && !p.comparable(a, b)))
        })
    })
}

pub fn disjoint_in_range(n: usize, sets: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n];
    for set in sets {
        for &x in set {
            if x >= n || seen[x] {
                return false;
            }
            seen[x] = true;
        }
    }
    true
}

/// Same order with ids permuted: `x` becomes `perm[x]`.
pub fn relabel(p: &Poset, perm: &[usize]) -> Poset {
    let pairs: Vec<(usize, usize)> = p
        .relations()
        .into_iter()
        .map(|(u, v)| (perm[u], perm[v]))
        .collect();
    Poset::new(p.len(), &pairs).unwrap()
}

pub fn permutation(n: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    perm
}

pub fn uniform(rng: &mut SplitMix64, lo: usize, hi: usize) -> usize {
    lo + rng.below((hi - lo + 1) as u64) as usize
}

/// One labelled instance of an ensemble.
pub struct Instance {
    pub name: String,
    pub poset: Poset,
}

/// A model of roughly `n` elements drawn from the family rotation `i`.
pub fn model_for(i: usize, n: usize, rng: &mut SplitMix64) -> (String, Model) {
    match i % 7 {
        0 => ("random-dag(0.02)".into(), Model::RandomDag { n, p: 0.02 }),
        1 => ("random-dag(0.1)".into(), Model::RandomDag { n, p: 0.1 }),
        2 => ("random-dag(0.3)".into(), Model::RandomDag { n, p: 0.3 }),
        3 => {
            let layers = uniform(rng, 2, 12);
            let widths: Vec<usize> = (0..layers).map(|_| (n / layers).max(1)).collect();
            let p = [0.05, 0.2, 0.5][uniform(rng, 0, 2)];
            ("layered".into(), Model::Layered { widths, p })
        }
        4 => {
            let d1 = uniform(rng, 2, 12);
            ("grid".into(), Model::Grid { d1, d2: (n / d1).max(1) })
        }
        5 => {
            let copies = uniform(rng, 2, 8);
            let m = (n / copies).max(1);
            (
                "stacked".into(),
                Model::Stacked {
                    base: Box::new(Model::RandomDag { n: m, p: 0.02 }),
                    copies,
                },
            )
        }
        _ => {
            let copies = uniform(rng, 2, 6);
            (
                "stacked-antichain".into(),
                Model::Stacked {
                    base: Box::new(Model::Antichain { n: (n / copies).max(1) }),
                    copies,
                },
            )
        }
    }
}

/// Deterministic ensemble of `count` posets; every tenth has `n` in
/// `[1000, 2000]`, the rest `[40, 600]`.
pub fn ensemble(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|i| {
            let n = if i % 10 == 9 {
                uniform(&mut rng, 1000, 2000)
            } else {
                uniform(&mut rng, 40, 600)
            };
            let (name, model) = model_for(i, n, &mut rng);
            let poset = generate(&GenSpec::new(model, rng.next_u64())).unwrap();
            Instance {
                name: format!("#{i} {name} n={}", poset.len()),
                poset,
            }
        })
        .collect()
}

/// Longest monotone subsequence length by subset enumeration (`m <= 16`).
pub fn brute_monotone(items: &[u64]) -> usize {
    let m = items.len();
    let mut best = 0;
    for mask in 0u32..1 << m {
        let picked: Vec<u64> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| items[i]).collect();
        let inc = picked.windows(2).all(|w| w[0] < w[1]);
        let dec = picked.windows(2).all(|w| w[0] > w[1]);
        if inc || dec {
            best = best.max(picked.len());
        }
    }
    best
}
