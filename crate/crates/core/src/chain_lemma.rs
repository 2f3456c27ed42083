//! Chains of sets from the shifted order, or a sparse core.
//!
//! For `l >= 1` the shifted order puts `x <_l y` when at least `l` elements
//! lie strictly between `x` and `y`. A `(k+1)`-chain in it yields `k`
//! ascending sets of size `l`; otherwise its largest Mirsky level contains
//! a large set whose down-degrees (or up-degrees) are all small.

use rayon::prelude::*;

use crate::bitset::{self, words_for, BitSet, Ones};
use crate::decomposition::{self, mirsky};
use crate::error::{Error, Result};
use crate::poset::{ElementId, Poset};

/// `|{z : x < z < y}|`; zero unless `x < y`.
pub fn between_count(poset: &Poset, x: ElementId, y: ElementId) -> Result<usize> {
    for id in [x, y] {
        if id >= poset.len() {
            return Err(Error::Range { id, n: poset.len() });
        }
    }
    Ok(bitset::and_count(poset.up_row(x), poset.down_row(y)))
}

/// Between-counts for every pair, computed by row intersections.
#[derive(Clone)]
pub struct BetweenCounts {
    n: usize,
    counts: Vec<u16>,
}

impl BetweenCounts {
    pub fn new(poset: &Poset) -> Self {
        let n = poset.len();
        assert!(n <= u16::MAX as usize + 2, "between-counts need n <= 65537");
        let mut counts = vec![0u16; n * n];
        if n > 0 {
            counts.par_chunks_mut(n).enumerate().for_each(|(x, row)| {
                let up = poset.up_row(x);
                for y in Ones::new(up) {
                    row[y] = bitset::and_count(up, poset.down_row(y)) as u16;
                }
            });
        }
        BetweenCounts { n, counts }
    }

    pub fn get(&self, x: ElementId, y: ElementId) -> usize {
        self.counts[x * self.n + y] as usize
    }

    /// Rows of the relation `count >= ell`.
    fn threshold_rows(&self, ell: usize) -> Vec<u64> {
        let stride = words_for(self.n);
        let mut up = vec![0u64; self.n * stride];
        if self.n == 0 {
            return up;
        }
        up.par_chunks_mut(stride).enumerate().for_each(|(x, row)| {
            for (y, &c) in self.counts[x * self.n..(x + 1) * self.n].iter().enumerate() {
                if c as usize >= ell {
                    bitset::row_insert(row, y);
                }
            }
        });
        up
    }

    /// The shifted order `<_ell`, with its order axioms checked.
    pub fn ell_order(&self, ell: usize) -> Poset {
        assert!(ell >= 1, "shifted order needs ell >= 1");
        match Poset::from_up_rows(self.n, self.threshold_rows(ell)) {
            Ok(p) => p,
            Err(violation) => panic!("shifted order is not a strict order: {violation:?}"),
        }
    }
}

/// The shifted order `x <_ell y` iff `between_count(x, y) >= ell`.
pub fn ell_order(poset: &Poset, ell: usize) -> Poset {
    BetweenCounts::new(poset).ell_order(ell)
}

/// Sparse subposet found when no `(k+1)`-chain exists in `<_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCore {
    /// Members of `Q`, ascending.
    pub members: Vec<ElementId>,
    /// Size of the shifted-order antichain `Q` was cut from.
    pub antichain_size: usize,
    /// Largest `|D_Q(x)|` (or `|U_Q(x)|` for the up side) over `x` in `Q`.
    pub max_degree: usize,
    /// `4 sqrt(|Q| l)`.
    pub degree_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lemma6Outcome {
    /// `sets[0] < sets[1] < ... < sets[k-1]`, each of size `l`, witnessed by
    /// the shifted-order chain `chain[0] <_l ... <_l chain[k]`.
    SetChain {
        sets: Vec<Vec<ElementId>>,
        chain: Vec<ElementId>,
    },
    SparseDown(SparseCore),
    SparseUp(SparseCore),
}

/// Either `k` ascending sets of size `ell`, or a subset `Q` with
/// `|Q| >= ceil(7n / 16k)` whose down-degrees (or up-degrees) inside `Q`
/// are below `4 sqrt(|Q| ell)`.
pub fn lemma6(poset: &Poset, k: usize, ell: usize) -> Result<Lemma6Outcome> {
    check_lemma6_args(poset.len(), k, ell)?;
    Ok(lemma6_with_counts(
        poset,
        &BetweenCounts::new(poset),
        k,
        ell,
    ))
}

fn check_lemma6_args(n: usize, k: usize, ell: usize) -> Result<()> {
    let mut violated = Vec::new();
    if k < 1 {
        violated.push("k >= 1".to_string());
    }
    if ell < 1 {
        violated.push("l >= 1".to_string());
    }
    if ell.saturating_mul(k) >= n {
        violated.push(format!("l < |P|/k (l = {ell}, |P| = {n}, k = {k})"));
    }
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(violated))
    }
}

pub(crate) fn lemma6_with_counts(
    poset: &Poset,
    counts: &BetweenCounts,
    k: usize,
    ell: usize,
) -> Lemma6Outcome {
    let n = poset.len();
    let shifted = counts.ell_order(ell);
    let levels = mirsky(&shifted);

    if levels.height() > k {
        let full = decomposition::longest_chain(&shifted, &levels);
        let chain = full[..=k].to_vec();
        let sets: Vec<Vec<ElementId>> = chain
            .windows(2)
            .map(|w| {
                Ones::new(poset.up_row(w[0]))
                    .filter(|&z| poset.less(z, w[1]))
                    .take(ell)
                    .collect()
            })
            .collect();
        let mut seen = BitSet::new(n);
        for set in &sets {
            assert_eq!(set.len(), ell, "shifted-order chain lacks witnesses");
            for &z in set {
                assert!(!seen.contains(z), "set-chain blocks overlap at {z}");
                seen.insert(z);
            }
        }
        return Lemma6Outcome::SetChain { sets, chain };
    }

    let (antichain, _) =
        levels
            .levels
            .iter()
            .enumerate()
            .fold((&levels.levels[0], 0), |best, (i, level)| {
                if level.len() > best.0.len() {
                    (level, i)
                } else {
                    best
                }
            });
    let n_prime = antichain.len();
    let mask = BitSet::from_ids(n, antichain.iter().copied());
    let down: Vec<usize> = antichain
        .iter()
        .map(|&x| bitset::and_count(poset.down_row(x), mask.words()))
        .collect();
    let up: Vec<usize> = antichain
        .iter()
        .map(|&x| bitset::and_count(poset.up_row(x), mask.words()))
        .collect();

    let triples: u128 = down.iter().zip(&up).map(|(&d, &u)| (d * u) as u128).sum();
    let n_prime_sq_ell = (n_prime as u128).pow(2) * ell as u128;
    assert!(
        2 * triples < n_prime_sq_ell,
        "triple count {triples} not below n'^2 l / 2 on the shifted antichain"
    );

    // d < 2 sqrt(n' l)  <=>  d^2 < 4 n' l
    let limit = 4 * n_prime as u128 * ell as u128;
    let pick = |degrees: &[usize]| -> Vec<ElementId> {
        antichain
            .iter()
            .zip(degrees)
            .filter(|(_, &d)| (d as u128).pow(2) < limit)
            .map(|(&x, _)| x)
            .collect()
    };
    let low_down = pick(&down);
    let low_up = pick(&up);
    let (members, downward) = if low_down.len() >= low_up.len() {
        (low_down, true)
    } else {
        (low_up, false)
    };

    let q = BitSet::from_ids(n, members.iter().copied());
    let max_degree = members
        .iter()
        .map(|&x| {
            let row = if downward {
                poset.down_row(x)
            } else {
                poset.up_row(x)
            };
            bitset::and_count(row, q.words())
        })
        .max()
        .unwrap_or(0);
    let q_len = members.len();
    assert!(
        16 * k * q_len >= 7 * n,
        "sparse core of size {q_len} below 7n/16k for n = {n}, k = {k}"
    );
    assert!(
        (max_degree as u128).pow(2) < 16 * q_len as u128 * ell as u128,
        "sparse core degree {max_degree} not below 4 sqrt(|Q| l)"
    );
    let core = SparseCore {
        members,
        antichain_size: n_prime,
        max_degree,
        degree_bound: 4.0 * ((q_len * ell) as f64).sqrt(),
    };
    if downward {
        Lemma6Outcome::SparseDown(core)
    } else {
        Lemma6Outcome::SparseUp(core)
    }
}

/// Largest `ell` in `[lo, hi]` whose shifted order has a `(k+1)`-chain.
///
/// Chain length in `<_ell` is nonincreasing in `ell`, so this bisects.
pub(crate) fn largest_chain_ell(
    counts: &BetweenCounts,
    k: usize,
    lo: usize,
    hi: usize,
) -> Option<usize> {
    let has_chain = |ell: usize| mirsky(&counts.ell_order(ell)).height() > k;
    if lo > hi || !has_chain(lo) {
        return None;
    }
    let (mut good, mut bad) = (lo, hi + 1);
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if has_chain(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Some(good)
}
