//! Families homogeneous for several orders on one ground set at once.
//!
//! Level 1 extracts `k_1` sets from the first order. Level `l` takes the
//! union of the current blocks, extracts `3 k_l^2` sets from order `l`
//! restricted to it, cuts them against the blocks with [`partition_select`]
//! and keeps `k_l` of the pieces (monotone ones, in the chain case).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::chain_lemma::{largest_chain_ell, BetweenCounts};
use crate::decomposition::{erdos_szekeres, Direction};
use crate::driver::{self, choose_ell, Branch, ExtractionResult, Mode};
use crate::error::{Error, Result};
use crate::fair_division::partition_select;
use crate::incomparable::BoundProfile;
use crate::poset::{Claim, ElementId, Poset, SubsetFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    /// `k_{l-1} = (10 k_l)^12 ln n`, kept symbolic.
    Paper,
    /// `k_{l-1} = 3 k_l^2 + 1`.
    Practical,
}

/// `coeff * n^n_power * (ln n)^log_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogMonomial {
    pub coeff: BigRational,
    pub n_power: i32,
    pub log_power: i32,
}

impl LogMonomial {
    pub fn constant(c: usize) -> Self {
        LogMonomial {
            coeff: BigRational::from_integer(BigInt::from(c)),
            n_power: 0,
            log_power: 0,
        }
    }

    fn times(&self, other: &LogMonomial) -> LogMonomial {
        LogMonomial {
            coeff: &self.coeff * &other.coeff,
            n_power: self.n_power + other.n_power,
            log_power: self.log_power + other.log_power,
        }
    }

    fn pow(&self, e: i32) -> LogMonomial {
        LogMonomial {
            coeff: num_traits::pow(self.coeff.clone(), e as usize),
            n_power: self.n_power * e,
            log_power: self.log_power * e,
        }
    }

    fn recip(&self) -> LogMonomial {
        LogMonomial {
            coeff: self.coeff.recip(),
            n_power: -self.n_power,
            log_power: -self.log_power,
        }
    }

    /// `log10` of the value at `n`, finite even when the value overflows.
    pub fn log10_at(&self, n: f64) -> f64 {
        let c = big_log10(&self.coeff);
        c + self.n_power as f64 * n.log10() + self.log_power as f64 * n.ln().log10()
    }

    pub fn eval(&self, n: f64) -> f64 {
        10f64.powf(self.log10_at(n))
    }
}

fn big_log10(r: &BigRational) -> f64 {
    let digits = |v: &BigInt| {
        let s = v.to_string();
        let lead: f64 = s[..s.len().min(17)].parse().unwrap_or(1.0);
        lead.log10() + (s.len() - s.len().min(17)) as f64
    };
    digits(r.numer()) - digits(r.denom())
}

impl fmt::Display for LogMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        match self.n_power {
            0 => {}
            1 => write!(f, "·n")?,
            p => write!(f, "·n^{p}")?,
        }
        match self.log_power {
            0 => Ok(()),
            1 => write!(f, "·ln n"),
            p => write!(f, "·(ln n)^{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelTarget {
    Count(usize),
    Formula(LogMonomial),
}

impl fmt::Display for LevelTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelTarget::Count(c) => write!(f, "{c}"),
            LevelTarget::Formula(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub mode: ScheduleMode,
    pub h: usize,
    pub k: usize,
    pub n: usize,
    /// `targets[l - 1]` is `k_l`; `k_h = k`.
    pub targets: Vec<LevelTarget>,
    /// `floors[l - 1]` is `n_l`; paper mode only.
    pub floors: Option<Vec<LogMonomial>>,
}

pub fn build_schedule(h: usize, k: usize, n: usize, mode: ScheduleMode) -> Result<Schedule> {
    let mut violated = Vec::new();
    if h < 1 {
        violated.push("h ≥ 1".to_string());
    }
    if k < 2 {
        violated.push(format!("k ≥ 2 (k = {k})"));
    }
    if n < 3 {
        violated.push(format!("n ≥ 3 (n = {n})"));
    }
    if !violated.is_empty() {
        return Err(Error::Argument(violated.join("; ")));
    }
    match mode {
        ScheduleMode::Practical => {
            let mut targets = vec![k];
            for _ in 1..h {
                let next = targets.last().unwrap();
                let prev = next
                    .checked_mul(*next)
                    .and_then(|v| v.checked_mul(3))
                    .and_then(|v| v.checked_add(1))
                    .ok_or_else(|| Error::Argument(format!("schedule overflows for h = {h}")))?;
                targets.push(prev);
            }
            targets.reverse();
            Ok(Schedule {
                mode,
                h,
                k,
                n,
                targets: targets.into_iter().map(LevelTarget::Count).collect(),
                floors: None,
            })
        }
        ScheduleMode::Paper => {
            let ln = LogMonomial {
                coeff: BigRational::one(),
                n_power: 0,
                log_power: 1,
            };
            // (10 k_l)^12
            let twelfth = |m: &LogMonomial| LogMonomial::constant(10).times(m).pow(12);
            let mut ks = vec![LogMonomial::constant(k)];
            for _ in 1..h {
                let next = twelfth(ks.last().unwrap()).times(&ln);
                ks.push(next);
            }
            ks.reverse();
            let n_mono = LogMonomial {
                coeff: BigRational::one(),
                n_power: 1,
                log_power: 0,
            };
            let mut floors = vec![n_mono.times(
                &LogMonomial::constant(10_000)
                    .times(&ks[0].pow(2))
                    .times(&ln)
                    .recip(),
            )];
            for l in 1..h {
                let prev = floors.last().unwrap();
                let next = ks[l - 1]
                    .times(prev)
                    .times(&twelfth(&ks[l]).times(&ln).recip());
                floors.push(next);
            }
            Ok(Schedule {
                mode,
                h,
                k,
                n,
                targets: ks.into_iter().map(LevelTarget::Formula).collect(),
                floors: Some(floors),
            })
        }
    }
}

impl Schedule {
    /// `k_level` as a set count for this `n`.
    pub fn level_count(&self, level: usize) -> Result<usize> {
        match &self.targets[level - 1] {
            LevelTarget::Count(c) => Ok(*c),
            LevelTarget::Formula(m) => {
                let log = m.log10_at(self.n as f64);
                if log > (self.n as f64).log10() {
                    return Err(Error::InstanceTooSmall {
                        level: Some(level),
                        detail: format!("k_{level} = {m} ≈ 10^{log:.1} exceeds n = {}", self.n),
                    });
                }
                Ok(m.eval(self.n as f64).ceil() as usize)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ascending,
    Descending,
    Incomparable,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Ascending => "ascending",
            Relation::Descending => "descending",
            Relation::Incomparable => "incomparable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderCheck {
    Holds(Relation),
    /// No relation holds; `a` and `b` lie in different sets and are
    /// comparable in `order`.
    Violated {
        order: usize,
        a: ElementId,
        b: ElementId,
    },
}

/// The relation each order satisfies on `family`, first of ascending,
/// descending, incomparable.
pub fn verify_homogeneous(orders: &[Poset], family: &SubsetFamily) -> Result<Vec<OrderCheck>> {
    family.check_disjoint()?;
    let mut out = Vec::with_capacity(orders.len());
    for (i, order) in orders.iter().enumerate() {
        if order.len() != family.ground {
            return Err(Error::GroundMismatch {
                index: i,
                expected: family.ground,
                found: order.len(),
            });
        }
        let mut check = None;
        for (claim, relation) in [
            (Claim::AscendingChain, Relation::Ascending),
            (Claim::DescendingChain, Relation::Descending),
            (Claim::TotallyIncomparable, Relation::Incomparable),
        ] {
            let v = order.verify_structure(family, claim)?;
            if v.holds {
                check = Some(OrderCheck::Holds(relation));
                break;
            }
            if claim == Claim::TotallyIncomparable {
                let (a, b) = v.counterexample.expect("failed check names a pair");
                check = Some(OrderCheck::Violated { order: i, a, b });
            }
        }
        out.push(check.unwrap());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub level: usize,
    pub target: usize,
    /// Sets requested from the extractor at this level.
    pub requested: usize,
    pub ell: usize,
    pub branch: Branch,
    /// Common set size after trimming.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousResult {
    pub sets: SubsetFamily,
    pub relations: Vec<Relation>,
    pub levels: Vec<LevelReport>,
}

/// Keeps the `size` smallest ids of every set.
fn trim(sets: &mut [Vec<ElementId>], size: usize) {
    for set in sets {
        set.sort_unstable();
        set.truncate(size);
    }
}

fn too_small(level: usize, detail: String) -> Error {
    Error::InstanceTooSmall {
        level: Some(level),
        detail,
    }
}

/// Relaxed thm1 extraction of `k` sets; the practical schedule raises `l`
/// to the largest value (at least `min_ell`) that still yields a set chain.
fn extract(
    poset: &Poset,
    k: usize,
    min_ell: usize,
    mode: ScheduleMode,
    level: usize,
) -> Result<ExtractionResult> {
    let profile = BoundProfile::thm1();
    let n = poset.len();
    let base = choose_ell(n, k, &profile, Mode::Relaxed).map_err(|e| match e {
        Error::InstanceTooSmall { detail, .. } => too_small(level, detail),
        other => other,
    })?;
    let counts = BetweenCounts::new(poset);
    let ell = match mode {
        ScheduleMode::Practical => {
            largest_chain_ell(&counts, k, base.max(min_ell), (n - 1) / k).unwrap_or(base)
        }
        ScheduleMode::Paper => base,
    };
    driver::run(poset, &counts, k, &profile, ell, Mode::Relaxed)
}

pub fn theorem_multiple(
    orders: &[Poset],
    k: usize,
    schedule: &Schedule,
) -> Result<HomogeneousResult> {
    let Some(first) = orders.first() else {
        return Err(Error::Argument("at least one order".into()));
    };
    let n = first.len();
    for (i, order) in orders.iter().enumerate() {
        if order.len() != n {
            return Err(Error::GroundMismatch {
                index: i,
                expected: n,
                found: order.len(),
            });
        }
    }
    if schedule.h != orders.len() || schedule.k != k || schedule.n != n {
        return Err(Error::Precondition(vec![format!(
            "schedule built for (h, k, n) = ({}, {}, {}), called with ({}, {k}, {n})",
            schedule.h,
            schedule.k,
            schedule.n,
            orders.len()
        )]));
    }

    let k1 = schedule.level_count(1)?;
    let first_run = extract(first, k1, 1, schedule.mode, 1)?;
    let mut relations = vec![match first_run.branch {
        Branch::DescendingSetChain => Relation::Descending,
        Branch::TotallyIncomparable => Relation::Incomparable,
    }];
    let mut family = first_run.sets.sets;
    let size = family.iter().map(Vec::len).min().unwrap_or(0);
    if size == 0 {
        return Err(too_small(1, format!("k_1 = {k1} sets leave an empty set")));
    }
    trim(&mut family, size);
    let mut levels = vec![LevelReport {
        level: 1,
        target: k1,
        requested: k1,
        ell: first_run.ell,
        branch: first_run.branch,
        size,
    }];
    check_level(orders, n, &family, &relations);

    for level in 2..=orders.len() {
        let target = schedule.level_count(level)?;
        let requested = 3 * target * target;
        if requested >= family.len() {
            return Err(too_small(
                level,
                format!(
                    "{} blocks cannot host 3k_{level}² = {requested} sets",
                    family.len()
                ),
            ));
        }
        let a = family[0].len();
        let mut union: Vec<ElementId> = family.iter().flatten().copied().collect();
        union.sort_unstable();
        let (sub, map) = orders[level - 1].induced(&union)?;
        let run = extract(&sub, requested, a, schedule.mode, level)?;
        let mut b_sets = map.lift(&run.sets.sets);
        let b = b_sets.iter().map(Vec::len).min().unwrap_or(0);
        if b < a {
            return Err(too_small(
                level,
                format!("extracted sets of size {b} below block size {a}"),
            ));
        }
        trim(&mut b_sets, b);
        let selection = partition_select(&family, &b_sets)?;
        let pieces = selection.pieces(&family, &b_sets);
        let (chosen, relation) = match run.branch {
            Branch::TotallyIncomparable => {
                ((0..target).collect::<Vec<_>>(), Relation::Incomparable)
            }
            Branch::DescendingSetChain => {
                // B_1 > B_2 > ..., so C_j < C_j' exactly when t_j > t_j'.
                let ts: Vec<usize> = selection.selections.iter().map(|s| s.t).collect();
                let monotone = erdos_szekeres(&ts, |x, y| x > y);
                let relation = match monotone.direction {
                    Direction::Increasing => Relation::Ascending,
                    Direction::Decreasing => Relation::Descending,
                };
                (monotone.indices, relation)
            }
        };
        if chosen.len() < target || pieces.len() < target {
            return Err(too_small(
                level,
                format!(
                    "{} usable pieces for k_{level} = {target}",
                    chosen.len().min(pieces.len())
                ),
            ));
        }
        family = chosen[..target]
            .iter()
            .map(|&j| pieces[j].clone())
            .collect();
        let size = family.iter().map(Vec::len).min().unwrap_or(0);
        if size == 0 {
            return Err(too_small(level, format!("k_{level} = {target} pieces leave an empty set")));
        }
        trim(&mut family, size);
        relations.push(relation);
        levels.push(LevelReport {
            level,
            target,
            requested,
            ell: run.ell,
            branch: run.branch,
            size,
        });
        check_level(orders, n, &family, &relations);
    }

    Ok(HomogeneousResult {
        sets: SubsetFamily::new(n, family),
        relations,
        levels,
    })
}

/// The family must satisfy the recorded relation for every order handled.
fn check_level(orders: &[Poset], n: usize, family: &[Vec<ElementId>], relations: &[Relation]) {
    let fam = SubsetFamily::new(n, family.to_vec());
    let checks = verify_homogeneous(&orders[..relations.len()], &fam)
        .expect("levels produce disjoint in-range sets");
    for (i, (check, &want)) in checks.iter().zip(relations).enumerate() {
        assert!(
            matches!(check, OrderCheck::Holds(r) if *r == want),
            "order {i} lost homogeneity: {check:?}, expected {want:?}"
        );
    }
}

/// Paper-mode size floor `n / (10 k ln n)^(12^(h+1))` as a base-10 log.
pub fn paper_size_floor_log10(n: usize, k: usize, h: usize) -> f64 {
    let exponent = 12f64.powi(h as i32 + 1);
    (n as f64).log10() - exponent * (10.0 * k as f64 * (n as f64).ln()).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn practical_schedule() {
        let s = build_schedule(3, 2, 1000, ScheduleMode::Practical).unwrap();
        assert_eq!(
            s.targets,
            vec![
                LevelTarget::Count(508),
                LevelTarget::Count(13),
                LevelTarget::Count(2)
            ]
        );
        let s = build_schedule(1, 5, 1000, ScheduleMode::Practical).unwrap();
        assert_eq!(s.targets, vec![LevelTarget::Count(5)]);
    }

    #[test]
    fn paper_schedule_h2() {
        let s = build_schedule(2, 2, 1000, ScheduleMode::Paper).unwrap();
        let k1 = LogMonomial {
            coeff: BigRational::from_integer(BigInt::from(20u64).pow(12)),
            n_power: 0,
            log_power: 1,
        };
        assert_eq!(s.targets[0], LevelTarget::Formula(k1));
        assert_eq!(s.targets[1], LevelTarget::Formula(LogMonomial::constant(2)));
        let floors = s.floors.clone().unwrap();
        // n / (10^4 (20^12)^2 (ln n)^3)
        let want = BigRational::new(
            BigInt::from(1),
            BigInt::from(10_000) * BigInt::from(20u64).pow(24),
        );
        assert_eq!(floors[0].coeff, want);
        assert_eq!((floors[0].n_power, floors[0].log_power), (1, -3));
        assert!(matches!(
            s.level_count(1),
            Err(Error::InstanceTooSmall { level: Some(1), .. })
        ));
    }

    #[test]
    fn schedule_rejects_bad_args() {
        assert!(matches!(
            build_schedule(0, 2, 100, ScheduleMode::Practical),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn verify_chain_singletons() {
        let p = Poset::chain(4);
        let fam = SubsetFamily::new(4, vec![vec![0], vec![2]]);
        let checks = verify_homogeneous(&[p.clone(), p.dual()], &fam).unwrap();
        assert_eq!(
            checks,
            vec![
                OrderCheck::Holds(Relation::Ascending),
                OrderCheck::Holds(Relation::Descending)
            ]
        );
        let bad = SubsetFamily::new(4, vec![vec![0, 3], vec![2]]);
        assert!(matches!(
            verify_homogeneous(&[p], &bad).unwrap()[0],
            OrderCheck::Violated { order: 0, .. }
        ));
    }

    #[test]
    fn chain_and_dual() {
        let p = Poset::chain(200);
        let orders = vec![p.clone(), p.dual()];
        let schedule = build_schedule(2, 2, 200, ScheduleMode::Practical).unwrap();
        let result = theorem_multiple(&orders, 2, &schedule).unwrap();
        assert_eq!(result.sets.len(), 2);
        assert_eq!(result.levels[0].ell, 14);
        let (r1, r2) = (result.relations[0], result.relations[1]);
        assert!(matches!(
            (r1, r2),
            (Relation::Ascending, Relation::Descending)
                | (Relation::Descending, Relation::Ascending)
        ));
        let checks = verify_homogeneous(&orders, &result.sets).unwrap();
        assert_eq!(checks, vec![OrderCheck::Holds(r1), OrderCheck::Holds(r2)]);
    }

    #[test]
    fn single_order_matches_driver_branch() {
        let p = Poset::antichain(80);
        let schedule = build_schedule(1, 3, 80, ScheduleMode::Practical).unwrap();
        let result = theorem_multiple(&[p.clone()], 3, &schedule).unwrap();
        let direct = driver::theorem1(&p, 3, Mode::Relaxed).unwrap();
        assert_eq!(result.levels[0].branch, direct.branch);
        assert_eq!(result.relations, vec![Relation::Incomparable]);
    }

    #[test]
    fn mismatched_ground() {
        let schedule = build_schedule(2, 2, 5, ScheduleMode::Practical).unwrap();
        assert!(matches!(
            theorem_multiple(&[Poset::chain(5), Poset::chain(6)], 2, &schedule),
            Err(Error::GroundMismatch { index: 1, .. })
        ));
    }
}
