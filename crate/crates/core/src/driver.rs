//! The general extraction theorem and its two instantiations.
//!
//! Pick `l = ceil(g(k)^2 n / (37 k f(k)^2))`, run the chain lemma, and either
//! return its set chain (reversed, so `A_1 > ... > A_k`) or hand the sparse
//! core to the incomparable extractor.

use crate::chain_lemma::{lemma6_with_counts, BetweenCounts, Lemma6Outcome, SparseCore};
use crate::error::{Error, Result};
use crate::incomparable::{
    extract_incomparable, incomparable_bound, incomparable_preconditions, BoundProfile,
};
use crate::poset::{Claim, ElementId, Poset, SubsetFamily};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every hypothesis checked; size guarantees asserted.
    Strict,
    /// Same algorithm with `l` clamped to at least 1 and `γ` to at least 1;
    /// only structure is guaranteed.
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    DescendingSetChain,
    TotallyIncomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Down,
    Up,
}

/// What the sparse branch passed to the incomparable extractor.
#[derive(Debug, Clone, PartialEq)]
pub struct Delegation {
    pub side: Side,
    pub core_size: usize,
    /// Largest in-core down-degree (up-degree for [`Side::Up`]).
    pub max_degree: usize,
    pub gamma: Real,
    pub lambda: Real,
    /// Violated extractor hypotheses; empty when all held.
    pub violated: Vec<String>,
    /// `γ / (k ln |Q|)`.
    pub lemma_bound: f64,
}

impl Delegation {
    pub fn preconditions_held(&self) -> bool {
        self.violated.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionResult {
    pub branch: Branch,
    pub sets: SubsetFamily,
    pub ell: usize,
    pub gamma: Option<Real>,
    pub lambda: Option<Real>,
    /// Size every set is proved to reach; only in strict mode.
    pub guaranteed_size: Option<f64>,
    pub achieved_size: usize,
    pub delegation: Option<Delegation>,
}

/// `g(k)^2 n / (37 k f(k)^2)`.
fn ell_formula(n: usize, k: usize, profile: &BoundProfile) -> Real {
    let f = profile.f(k);
    let num = &profile.g(k).square() * &Real::count(n);
    let den = &Real::count(37 * k) * &f.square();
    &num / &den
}

/// The `l` the driver uses for `mode`, without running anything.
pub fn choose_ell(n: usize, k: usize, profile: &BoundProfile, mode: Mode) -> Result<usize> {
    let mut violated = Vec::new();
    if k < 2 {
        violated.push("k ≥ 2".to_string());
    }
    if mode == Mode::Strict && k >= 2 {
        let f = profile.f(k);
        let lhs = &profile.g(k).square() * &Real::count(n);
        let rhs = &Real::count(100_000 * k) * &f.square();
        if !lhs.ge(&rhs) {
            violated.push(format!(
                "g(k)² n ≥ 10⁵ k f(k)² (g(k)² n = {lhs}, 10⁵ k f(k)² = {rhs})"
            ));
        }
    }
    if !violated.is_empty() {
        return Err(Error::Precondition(violated));
    }
    let ell = (ell_formula(n, k, profile).ceil_u64().max(1)).min(usize::MAX as u64) as usize;
    if ell.saturating_mul(k) >= n {
        return Err(Error::InstanceTooSmall {
            level: None,
            detail: format!("l = {ell} needs l < n/k (n = {n}, k = {k})"),
        });
    }
    Ok(ell)
}

pub fn theorem_general(
    poset: &Poset,
    k: usize,
    profile: &BoundProfile,
    mode: Mode,
) -> Result<ExtractionResult> {
    let ell = choose_ell(poset.len(), k, profile, mode)?;
    run(poset, &BetweenCounts::new(poset), k, profile, ell, mode)
}

/// Relaxed run with a caller-chosen `l`.
pub fn theorem_with_ell(
    poset: &Poset,
    k: usize,
    profile: &BoundProfile,
    ell: usize,
) -> Result<ExtractionResult> {
    check_ell(poset.len(), k, ell)?;
    run(
        poset,
        &BetweenCounts::new(poset),
        k,
        profile,
        ell,
        Mode::Relaxed,
    )
}

fn check_ell(n: usize, k: usize, ell: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Precondition(vec!["k ≥ 2".to_string()]));
    }
    if ell == 0 || ell.saturating_mul(k) >= n {
        return Err(Error::InstanceTooSmall {
            level: None,
            detail: format!("l = {ell} needs 1 ≤ l < n/k (n = {n}, k = {k})"),
        });
    }
    Ok(())
}

/// `f(k) = 16(k - 1)`, `g(k) = 1/k`; strict mode also needs `n ≥ (100k)^5`.
pub fn theorem1(poset: &Poset, k: usize, mode: Mode) -> Result<ExtractionResult> {
    if mode == Mode::Strict {
        let profile = BoundProfile::thm1();
        entry_check(
            poset.len(),
            k,
            &profile,
            theorem1_threshold(k),
            "n ≥ (100k)⁵",
        )?;
    }
    theorem_general(poset, k, &BoundProfile::thm1(), mode)
}

/// `f(k) = 8k log2 k`, `g(k) = 1/2`; strict mode also needs
/// `n ≥ 10^10 k^3 (ln k)^2`.
pub fn theorem2(poset: &Poset, k: usize, mode: Mode) -> Result<ExtractionResult> {
    if mode == Mode::Strict {
        let ln = (k.max(1) as f64).ln();
        let threshold = 1e10 * (k as f64).powi(3) * ln * ln;
        entry_check(
            poset.len(),
            k,
            &BoundProfile::thm2(),
            threshold,
            "n ≥ 10¹⁰ k³ (ln k)²",
        )?;
    }
    theorem_general(poset, k, &BoundProfile::thm2(), mode)
}

fn theorem1_threshold(k: usize) -> f64 {
    (100.0 * k as f64).powi(5)
}

/// Reports the entry condition together with the general one, so callers
/// see every violated inequality at once.
fn entry_check(
    n: usize,
    k: usize,
    profile: &BoundProfile,
    threshold: f64,
    name: &str,
) -> Result<()> {
    if (n as f64) >= threshold {
        return Ok(());
    }
    let mut violated = vec![format!("{name} (n = {n}, threshold = {threshold:e})")];
    if let Err(Error::Precondition(more)) = choose_ell(n, k, profile, Mode::Strict) {
        violated.extend(more.into_iter().filter(|v| v.starts_with("g(k)")));
    }
    Err(Error::Precondition(violated))
}

pub(crate) fn run(
    poset: &Poset,
    counts: &BetweenCounts,
    k: usize,
    profile: &BoundProfile,
    ell: usize,
    mode: Mode,
) -> Result<ExtractionResult> {
    let n = poset.len();
    let result = match lemma6_with_counts(poset, counts, k, ell) {
        Lemma6Outcome::SetChain { mut sets, .. } => {
            sets.reverse();
            let family = SubsetFamily::new(n, sets);
            let achieved = family.min_size();
            assert!(achieved >= ell, "chain branch set below l");
            ExtractionResult {
                branch: Branch::DescendingSetChain,
                sets: family,
                ell,
                gamma: None,
                lambda: None,
                guaranteed_size: (mode == Mode::Strict)
                    .then(|| ell_formula(n, k, profile).to_f64()),
                achieved_size: achieved,
                delegation: None,
            }
        }
        Lemma6Outcome::SparseDown(core) => {
            sparse_branch(poset, &core, Side::Down, k, profile, ell, mode)?
        }
        Lemma6Outcome::SparseUp(core) => {
            sparse_branch(poset, &core, Side::Up, k, profile, ell, mode)?
        }
    };
    let claim = match result.branch {
        Branch::DescendingSetChain => Claim::DescendingChain,
        Branch::TotallyIncomparable => Claim::TotallyIncomparable,
    };
    let check = poset.verify_structure(&result.sets, claim)?;
    assert!(
        check.holds,
        "extraction failed its own verification at {:?}",
        check.counterexample
    );
    Ok(result)
}

fn sparse_branch(
    poset: &Poset,
    core: &SparseCore,
    side: Side,
    k: usize,
    profile: &BoundProfile,
    ell: usize,
    mode: Mode,
) -> Result<ExtractionResult> {
    let n = poset.len();
    let (sets, delegation) = extract_from_core(poset, &core.members, side, k, profile, mode)?;
    let family = SubsetFamily::new(n, sets);
    let guaranteed_size = (mode == Mode::Strict).then(|| {
        // |Q| ≥ 7n/16k and each set has ≥ |Q| / (f(k) k ln |Q|).
        let f = profile.f(k).to_f64();
        7.0 * n as f64 / (16.0 * (k * k) as f64 * f * (n as f64).ln())
    });
    if let Some(bound) = guaranteed_size {
        assert!(
            family.min_size() as f64 >= bound * (1.0 - 1e-9),
            "incomparable branch below its strict guarantee"
        );
    }
    Ok(ExtractionResult {
        branch: Branch::TotallyIncomparable,
        achieved_size: family.min_size(),
        sets: family,
        ell,
        gamma: Some(delegation.gamma.clone()),
        lambda: Some(delegation.lambda.clone()),
        guaranteed_size,
        delegation: Some(delegation),
    })
}

/// Runs the incomparable extractor on the core `members` of `poset`, on the
/// dual when `side` is [`Side::Up`]; returned ids are in `poset`.
pub fn extract_from_core(
    poset: &Poset,
    members: &[ElementId],
    side: Side,
    k: usize,
    profile: &BoundProfile,
    mode: Mode,
) -> Result<(Vec<Vec<ElementId>>, Delegation)> {
    let (induced, map) = poset.induced(members)?;
    let sub = match side {
        Side::Down => induced,
        Side::Up => induced.dual(),
    };
    let q_len = sub.len();
    let mut gamma = &Real::count(q_len) / &profile.f(k);
    if mode == Mode::Relaxed && !gamma.ge(&Real::int(1)) {
        gamma = Real::int(1);
    }
    let lambda = &profile.g(k) * &gamma;
    let violated = incomparable_preconditions(&sub, k, &gamma, &lambda, profile);
    let max_degree = (0..q_len).map(|x| sub.down_degree(x)).max().unwrap_or(0);
    let family = extract_incomparable(&sub, k, &gamma, &lambda, profile, mode == Mode::Strict)?;
    let lemma_bound = incomparable_bound(q_len, k, &gamma);
    Ok((
        map.lift(&family.sets),
        Delegation {
            side,
            core_size: q_len,
            max_degree,
            gamma,
            lambda,
            violated,
            lemma_bound,
        },
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub n: u64,
    pub k: u64,
    /// `n / (40 k^2 ln n)`.
    pub lower: f64,
    /// False when `n < (100k)^5`, outside the range the lower bound is
    /// proved for.
    pub lower_valid: bool,
    /// `200 n / (k^2 log2 n)`.
    pub upper: f64,
}

pub fn mk_bounds(n: u64, k: u64) -> Result<BoundsReport> {
    let mut violated = Vec::new();
    if n < 3 {
        violated.push(format!("n ≥ 3 (n = {n})"));
    }
    if k < 2 {
        violated.push(format!("k ≥ 2 (k = {k})"));
    }
    if !violated.is_empty() {
        return Err(Error::Argument(violated.join("; ")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let lower_valid = (100u128 * k as u128)
        .checked_pow(5)
        .is_some_and(|t| n as u128 >= t);
    Ok(BoundsReport {
        n,
        k,
        lower: nf / (40.0 * kf * kf * nf.ln()),
        lower_valid,
        upper: 200.0 * nf / (kf * kf * nf.log2()),
    })
}
