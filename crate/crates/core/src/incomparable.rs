//! Pairwise totally incomparable families in posets of small down-degree.
//!
//! [`condense`] repeatedly splits a set `B` into `k` near-equal blocks and
//! keeps, for each block, the elements below it and below no other block;
//! a block whose private down-set is too small is discarded and the rest is
//! retried. [`select`] halves a poset along a linear extension and either
//! condenses the top half or recurses on the top half and on what lies
//! neither in nor below it.

use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::poset::{ElementId, Poset, SubsetFamily};
use crate::real::Real;

pub type BoundFn = Arc<dyn Fn(usize) -> Real + Send + Sync>;

/// The pair `(f, g)` trading chain-branch size against incomparable-branch
/// size.
#[derive(Clone)]
pub struct BoundProfile {
    pub name: String,
    f: BoundFn,
    g: BoundFn,
    /// Largest `k` the profile is validated for.
    pub kmax: usize,
}

impl BoundProfile {
    pub fn new(name: impl Into<String>, f: BoundFn, g: BoundFn, kmax: usize) -> Self {
        BoundProfile {
            name: name.into(),
            f,
            g,
            kmax,
        }
    }

    /// `f(k) = 16(k - 1)`, `g(k) = 1/k`.
    pub fn thm1() -> Self {
        BoundProfile::new(
            "thm1",
            Arc::new(|k| Real::int(16 * (k as i64 - 1))),
            Arc::new(|k| Real::ratio(1, k as i64)),
            1024,
        )
    }

    /// `f(k) = 8k log2 k` (so `f(1) = 0`, `f(2) = 16`), `g(k) = 1/2`.
    pub fn thm2() -> Self {
        BoundProfile::new(
            "thm2",
            Arc::new(|k| {
                if k <= 1 {
                    Real::int(0)
                } else if k.is_power_of_two() {
                    Real::int(8 * k as i64 * k.trailing_zeros() as i64)
                } else {
                    Real::Float(8.0 * k as f64 * (k as f64).log2())
                }
            }),
            Arc::new(|_| Real::ratio(1, 2)),
            1024,
        )
    }

    pub fn f(&self, k: usize) -> Real {
        (self.f)(k)
    }

    pub fn g(&self, k: usize) -> Real {
        (self.g)(k)
    }
}

impl fmt::Debug for BoundProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundProfile")
            .field("name", &self.name)
            .field("kmax", &self.kmax)
            .finish()
    }
}

/// Checks every profile condition for `2 <= k <= kmax`; returns the
/// violated ones.
pub fn validate_profile(profile: &BoundProfile) -> std::result::Result<(), Vec<String>> {
    let f = |k| profile.f(k);
    let g = |k| profile.g(k);
    let two = Real::int(2);
    let mut violations = Vec::new();

    if !f(2).ge(&Real::int(16)) {
        violations.push(format!("f(2) ≥ 16 (f(2) = {})", f(2)));
    }
    if !g(2).le(&Real::ratio(1, 2)) {
        violations.push(format!("g(2) ≤ 1/2 (g(2) = {})", g(2)));
    }
    for k in 1..=profile.kmax {
        if !g(k).gt(&Real::int(0)) {
            violations.push(format!("g({k}) > 0"));
        }
        if f(k).is_negative() {
            violations.push(format!("f({k}) ≥ 0"));
        }
        if k < profile.kmax {
            if !f(k + 1).gt(&f(k)) {
                violations.push(format!("f increasing at k = {k}"));
            }
            if !g(k + 1).le(&g(k)) {
                violations.push(format!("g decreasing at k = {k}"));
            }
        }
        if k < 2 {
            continue;
        }
        let (lo, hi) = (k / 2, k.div_ceil(2));
        let f_lo = f(lo);
        if !f(k).gt(&(&(&two * &f_lo) + &Real::int(6))) {
            violations.push(format!("f(k) > 2f(⌊k/2⌋) + 6 at k = {k}"));
        }
        if !f(k).ge(&(&two * &f(hi))) {
            violations.push(format!("f(k) ≥ 2f(⌈k/2⌉) at k = {k}"));
        }
        let slack = &(&(&f(k) / &two) - &f_lo) - &Real::int(3);
        if !g(k).le(&(&slack / &Real::count(2 * k))) {
            violations.push(format!("g(k) ≤ (f(k)/2 − f(⌊k/2⌋) − 3)/(2k) at k = {k}"));
        }
        if !f(k).ge(&Real::count(8 * k)) {
            violations.push(format!("f(k) ≥ 8k at k = {k}"));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// One pass of [`condense`] that did not stop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondenseStep {
    /// The working set `B^(j)`, ascending.
    pub working: Vec<ElementId>,
    pub block_sizes: Vec<usize>,
    pub candidate_sizes: Vec<usize>,
    /// Smallest block whose candidate set fell below the threshold.
    pub removed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondenseTrace {
    /// `gamma / (k ln |Q|)`.
    pub threshold: f64,
    pub steps: Vec<CondenseStep>,
    /// Working set at termination.
    pub final_working: Vec<ElementId>,
    /// True when the output sets passed the threshold; false when the
    /// working set dropped below `k` and `k` empty sets were returned.
    pub succeeded: bool,
}

/// Condense on the whole of `q`. Output sets avoid `b` and are pairwise
/// disjoint and totally incomparable whatever the inputs.
pub fn condense(
    q: &Poset,
    b: &[ElementId],
    k: usize,
    gamma: &Real,
) -> Result<(Vec<Vec<ElementId>>, CondenseTrace)> {
    for &x in b {
        if x >= q.len() {
            return Err(Error::Range { id: x, n: q.len() });
        }
    }
    check_params(k, gamma, &Real::int(0))?;
    if q.len() < 2 {
        return Err(Error::Degenerate(format!(
            "condense needs |Q| >= 2 so ln|Q| > 0, got |Q| = {}",
            q.len()
        )));
    }
    let domain = BitSet::full(q.len());
    let b = BitSet::from_ids(q.len(), b.iter().copied());
    Ok(condense_within(q, &domain, b, k, gamma))
}

fn check_params(k: usize, gamma: &Real, lambda: &Real) -> Result<()> {
    let mut violated = Vec::new();
    if k < 1 {
        violated.push("k ≥ 1".to_string());
    }
    if !gamma.ge(&Real::int(1)) {
        violated.push(format!("γ ≥ 1 (γ = {gamma})"));
    }
    if lambda.is_negative() {
        violated.push(format!("λ ≥ 0 (λ = {lambda})"));
    }
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(violated))
    }
}

/// Condense restricted to the subposet on `domain`; `b` must lie in it.
fn condense_within(
    q: &Poset,
    domain: &BitSet,
    mut working: BitSet,
    k: usize,
    gamma: &Real,
) -> (Vec<Vec<ElementId>>, CondenseTrace) {
    let size = domain.count();
    let threshold = gamma.to_f64() / (k as f64 * (size as f64).ln());
    let mut steps = Vec::new();
    loop {
        let members = working.to_vec();
        if members.len() < k {
            let trace = CondenseTrace {
                threshold,
                steps,
                final_working: members,
                succeeded: false,
            };
            return (vec![Vec::new(); k], trace);
        }

        let blocks = equitable_blocks(&members, k);
        let below: Vec<BitSet> = blocks
            .iter()
            .map(|block| {
                let mut d = BitSet::new(q.len());
                for &x in *block {
                    d.union_with(q.down_row(x));
                }
                d.intersect_with(domain.words());
                d
            })
            .collect();
        let mut suffix = vec![BitSet::new(q.len()); k + 1];
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1].clone();
            suffix[i].union_with(below[i].words());
        }
        let mut prefix = BitSet::new(q.len());
        let mut candidates = Vec::with_capacity(k);
        for i in 0..k {
            let mut c = below[i].clone();
            c.difference_with(prefix.words());
            c.difference_with(suffix[i + 1].words());
            c.difference_with(working.words());
            candidates.push(c);
            prefix.union_with(below[i].words());
        }
        let sizes: Vec<usize> = candidates.iter().map(BitSet::count).collect();

        match sizes.iter().position(|&s| (s as f64) < threshold) {
            None => {
                let trace = CondenseTrace {
                    threshold,
                    steps,
                    final_working: members,
                    succeeded: true,
                };
                return (candidates.iter().map(BitSet::to_vec).collect(), trace);
            }
            Some(i) => {
                for &x in blocks[i] {
                    working.remove(x);
                }
                steps.push(CondenseStep {
                    working: members.clone(),
                    block_sizes: blocks.iter().map(|b| b.len()).collect(),
                    candidate_sizes: sizes,
                    removed: i,
                });
            }
        }
    }
}

/// Contiguous blocks of `members`; the first `len % k` get one extra element.
fn equitable_blocks(members: &[ElementId], k: usize) -> Vec<&[ElementId]> {
    let base = members.len() / k;
    let extra = members.len() % k;
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        blocks.push(&members[start..start + len]);
        start += len;
    }
    blocks
}

/// A split performed by [`select`]: `top` is `T`, `rest` is `Q \ (T ∪ D(T))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub top: Vec<ElementId>,
    pub rest: Vec<ElementId>,
    pub k_top: usize,
    pub k_rest: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectTrace {
    pub splits: Vec<Split>,
    pub condensed: Vec<CondenseTrace>,
}

/// `k` pairwise totally incomparable sets of `q`, in `q`'s ids.
pub fn select(q: &Poset, k: usize, gamma: &Real, lambda: &Real) -> Result<Vec<Vec<ElementId>>> {
    select_traced(q, k, gamma, lambda).map(|(sets, _)| sets)
}

pub fn select_traced(
    q: &Poset,
    k: usize,
    gamma: &Real,
    lambda: &Real,
) -> Result<(Vec<Vec<ElementId>>, SelectTrace)> {
    check_params(k, gamma, lambda)?;
    if k >= 2 && q.len() < 2 {
        return Err(Error::Degenerate(format!(
            "select with k = {k} needs |Q| >= 2, got |Q| = {}",
            q.len()
        )));
    }

    struct Task {
        domain: BitSet,
        k: usize,
        offset: usize,
    }

    let mut out: Vec<Vec<ElementId>> = vec![Vec::new(); k];
    let mut trace = SelectTrace::default();
    let mut queue = vec![Task {
        domain: BitSet::full(q.len()),
        k,
        offset: 0,
    }];
    let two = Real::int(2);
    while let Some(task) = queue.pop() {
        if task.k == 1 {
            out[task.offset] = task.domain.to_vec();
            continue;
        }
        let order = q.linear_extension_within(&task.domain);
        let top_len = order.len().div_ceil(2);
        let top = BitSet::from_ids(q.len(), order[order.len() - top_len..].iter().copied());
        let mut below = BitSet::new(q.len());
        for t in top.iter() {
            below.union_with(q.down_row(t));
        }
        below.intersect_with(task.domain.words());
        below.difference_with(top.words());

        let k_real = Real::count(task.k);
        let needed = &two * &(&(&k_real * lambda) + gamma);
        if Real::count(below.count()).ge(&needed) {
            let (sets, ct) = condense_within(q, &task.domain, top, task.k, gamma);
            for (i, set) in sets.into_iter().enumerate() {
                out[task.offset + i] = set;
            }
            trace.condensed.push(ct);
        } else {
            let mut rest = task.domain.clone();
            rest.difference_with(top.words());
            rest.difference_with(below.words());
            let k_top = task.k.div_ceil(2);
            let k_rest = task.k / 2;
            trace.splits.push(Split {
                top: top.to_vec(),
                rest: rest.to_vec(),
                k_top,
                k_rest,
            });
            queue.push(Task {
                domain: rest,
                k: k_rest,
                offset: task.offset + k_top,
            });
            queue.push(Task {
                domain: top,
                k: k_top,
                offset: task.offset,
            });
        }
    }
    Ok((out, trace))
}

/// The names of every violated hypothesis for the guaranteed extraction.
pub fn incomparable_preconditions(
    q: &Poset,
    k: usize,
    gamma: &Real,
    lambda: &Real,
    profile: &BoundProfile,
) -> Vec<String> {
    let mut violated = Vec::new();
    let n = q.len();
    if k < 2 {
        violated.push("k ≥ 2".to_string());
    }
    if n < 2 {
        violated.push(format!("|Q| ≥ 2 (|Q| = {n})"));
    }
    if !gamma.ge(&Real::int(1)) {
        violated.push(format!("γ ≥ 1 (γ = {gamma})"));
    }
    let max_down = (0..n).map(|x| q.down_degree(x)).max().unwrap_or(0);
    if !Real::count(max_down).le(lambda) {
        violated.push(format!("max |D_Q(x)| ≤ λ (max = {max_down}, λ = {lambda})"));
    }
    let cap = &Real::count(n) / &profile.f(k);
    if !gamma.le(&cap) {
        violated.push(format!("γ ≤ |Q|/f(k) (γ = {gamma}, |Q|/f(k) = {cap})"));
    }
    let lambda_cap = &profile.g(k) * gamma;
    if !lambda.le(&lambda_cap) {
        violated.push(format!("λ ≤ g(k)γ (λ = {lambda}, g(k)γ = {lambda_cap})"));
    }
    violated
}

/// `gamma / (k ln |Q|)`.
pub fn incomparable_bound(q_len: usize, k: usize, gamma: &Real) -> f64 {
    gamma.to_f64() / (k as f64 * (q_len as f64).ln())
}

/// `k` disjoint pairwise totally incomparable subsets of `q`.
///
/// In strict mode every hypothesis is checked first and each output set is
/// guaranteed at least `gamma / (k ln |Q|)` elements.
pub fn extract_incomparable(
    q: &Poset,
    k: usize,
    gamma: &Real,
    lambda: &Real,
    profile: &BoundProfile,
    strict: bool,
) -> Result<SubsetFamily> {
    if strict {
        let violated = incomparable_preconditions(q, k, gamma, lambda, profile);
        if !violated.is_empty() {
            return Err(Error::Precondition(violated));
        }
    } else if k < 2 {
        return Err(Error::Precondition(vec!["k ≥ 2".to_string()]));
    }
    let sets = select(q, k, gamma, lambda)?;
    if strict {
        let bound = incomparable_bound(q.len(), k, gamma);
        for set in &sets {
            assert!(
                set.len() as f64 >= bound,
                "set of size {} below guaranteed {bound}",
                set.len()
            );
        }
    }
    Ok(SubsetFamily::new(q.len(), sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Claim;

    #[test]
    fn thm1_profile_is_valid() {
        let mut p = BoundProfile::thm1();
        p.kmax = 64;
        assert_eq!(validate_profile(&p), Ok(()));
    }

    #[test]
    fn thm2_profile_is_valid() {
        let mut p = BoundProfile::thm2();
        p.kmax = 64;
        assert_eq!(validate_profile(&p), Ok(()));
    }

    #[test]
    fn small_f2_flagged() {
        let p = BoundProfile::new(
            "bad",
            Arc::new(|k| Real::int(5 * k as i64)),
            Arc::new(|_| Real::ratio(1, 2)),
            8,
        );
        let violations = validate_profile(&p).unwrap_err();
        assert!(violations.iter().any(|v| v.starts_with("f(2) ≥ 16")));
    }

    #[test]
    fn blocks_are_equitable_and_front_loaded() {
        let members: Vec<usize> = (0..7).collect();
        let blocks = equitable_blocks(&members, 3);
        assert_eq!(blocks, vec![&[0, 1, 2][..], &[3, 4][..], &[5, 6][..]]);
    }

    #[test]
    fn condense_short_working_set_gives_empty_sets() {
        let q = Poset::antichain(10);
        let (sets, trace) = condense(&q, &[0, 1], 3, &Real::int(1)).unwrap();
        assert_eq!(sets, vec![Vec::<usize>::new(); 3]);
        assert!(!trace.succeeded);
    }

    #[test]
    fn condense_rejects_tiny_q() {
        assert!(matches!(
            condense(&Poset::antichain(1), &[0], 1, &Real::int(1)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn select_k1_returns_ground() {
        let q = Poset::chain(5);
        let sets = select(&q, 1, &Real::int(1), &Real::int(0)).unwrap();
        assert_eq!(sets, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn select_splits_antichain_in_halves() {
        let q = Poset::antichain(32);
        let (sets, trace) = select_traced(&q, 2, &Real::int(2), &Real::int(0)).unwrap();
        assert_eq!(sets[0], (16..32).collect::<Vec<_>>());
        assert_eq!(sets[1], (0..16).collect::<Vec<_>>());
        assert_eq!(trace.splits.len(), 1);
        let fam = SubsetFamily::new(32, sets);
        assert!(
            q.verify_structure(&fam, Claim::TotallyIncomparable)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn strict_extraction_names_violation() {
        let q = Poset::antichain(16);
        let err = extract_incomparable(
            &q,
            2,
            &Real::int(2),
            &Real::int(0),
            &BoundProfile::thm1(),
            true,
        )
        .unwrap_err();
        match err {
            Error::Precondition(v) => assert!(v.iter().any(|s| s.starts_with("γ ≤ |Q|/f(k)"))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strict_extraction_on_antichain() {
        let q = Poset::antichain(16);
        let fam = extract_incomparable(
            &q,
            2,
            &Real::int(1),
            &Real::int(0),
            &BoundProfile::thm1(),
            true,
        )
        .unwrap();
        assert_eq!(
            fam.sets.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![8, 8]
        );
    }
}
