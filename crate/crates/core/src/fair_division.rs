//! Cake cutting on `[0, k]` and the block selection built on it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poset::ElementId;

fn rat(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Piecewise-linear measure on `[0, k]`: cumulative values at the integers,
/// linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct PlMeasure {
    values: Vec<BigRational>,
}

impl PlMeasure {
    /// `values[i] = μ([0, i])`; needs `values[0] = 0` and nondecreasing.
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() || !values[0].is_zero() {
            return Err(Error::Precondition(vec!["v₀ = 0".into()]));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Precondition(vec!["v nondecreasing".into()]));
        }
        Ok(PlMeasure { values })
    }

    /// From per-unit masses `masses[i] = μ((i, i + 1])`.
    pub fn from_masses(masses: &[usize]) -> Self {
        let mut values = Vec::with_capacity(masses.len() + 1);
        let mut acc = 0;
        values.push(rat(0));
        for &m in masses {
            acc += m;
            values.push(rat(acc));
        }
        PlMeasure { values }
    }

    /// Length `k` of the domain.
    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    pub fn total(&self) -> &BigRational {
        self.values.last().unwrap()
    }

    /// `μ([0, r])` for `0 <= r <= k`.
    pub fn cumulative(&self, r: &BigRational) -> BigRational {
        let i = r.floor().to_integer().to_usize().unwrap_or(0).min(self.k());
        if i == self.k() {
            return self.values[i].clone();
        }
        let slope = &self.values[i + 1] - &self.values[i];
        &self.values[i] + (r - rat(i)) * slope
    }

    /// `μ((a, b])`.
    pub fn mass(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.cumulative(b) - self.cumulative(a)
    }

    /// Largest `c` in `[0, right]` with `μ([0, c]) <= level`; needs
    /// `level >= 0`.
    fn last_at_most(&self, level: &BigRational, right: &BigRational) -> BigRational {
        if self.cumulative(right) <= *level {
            return right.clone();
        }
        let top = right
            .floor()
            .to_integer()
            .to_usize()
            .unwrap_or(0)
            .min(self.k());
        let i = (0..=top)
            .rev()
            .find(|&i| self.values[i] <= *level)
            .expect("μ([0, 0]) = 0 is below any nonnegative level");
        // μ exceeds `level` somewhere in (i, right], so the slope is positive.
        let slope = &self.values[i + 1] - &self.values[i];
        rat(i) + (level - &self.values[i]) / slope
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CakeCut {
    /// `0 = r_0 <= r_1 <= ... <= r_s = k`.
    pub cuts: Vec<BigRational>,
    /// `assignment[i]`: the measure receiving `(r_i, r_{i+1}]`.
    pub assignment: Vec<usize>,
}

impl CakeCut {
    pub fn interval(&self, i: usize) -> (&BigRational, &BigRational) {
        (&self.cuts[i], &self.cuts[i + 1])
    }
}

/// Splits `[0, k]` so the measure assigned to each interval gets at least
/// `1/s` of its total.
///
/// Scans from the right: with `t` live measures on `[0, R]`, every live
/// measure marks the latest point `c` leaving `(c, R]` with a `1/t` share;
/// the latest mark wins (smallest index on ties) and takes `(c, R]`.
/// Zero-total measures receive empty intervals at the left end.
pub fn cake_cut(measures: &[PlMeasure]) -> Result<CakeCut> {
    let s = measures.len();
    if s == 0 {
        return Err(Error::Precondition(vec!["s ≥ 1".into()]));
    }
    let k = measures[0].k();
    if measures.iter().any(|m| m.k() != k) {
        return Err(Error::Precondition(vec![
            "all measures on the same [0, k]".into()
        ]));
    }
    let end = rat(k);
    if s == 1 {
        return Ok(CakeCut {
            cuts: vec![rat(0), end],
            assignment: vec![0],
        });
    }
    let (mut live, zero): (Vec<usize>, Vec<usize>) =
        (0..s).partition(|&j| measures[j].total().is_positive());
    if live.is_empty() {
        return Err(Error::Degenerate("every measure has total 0".into()));
    }

    let mut right = end.clone();
    // (left end, owner), rightmost interval first.
    let mut taken: Vec<(BigRational, usize)> = Vec::with_capacity(live.len());
    while !live.is_empty() {
        let t = live.len();
        let mut best: Option<(BigRational, usize)> = None;
        for &j in &live {
            let c = if t == 1 {
                rat(0)
            } else {
                let here = measures[j].cumulative(&right);
                let level = &here - &here / rat(t);
                measures[j].last_at_most(&level, &right)
            };
            if best.as_ref().map_or(true, |(b, _)| c > *b) {
                best = Some((c, j));
            }
        }
        let (c, j) = best.unwrap();
        live.retain(|&x| x != j);
        right = c.clone();
        taken.push((c, j));
    }

    let mut cuts = vec![rat(0); zero.len()];
    let mut assignment = zero;
    for (c, j) in taken.iter().rev() {
        cuts.push(c.clone());
        assignment.push(*j);
    }
    cuts.push(end);
    let cut = CakeCut { cuts, assignment };
    for (i, &j) in cut.assignment.iter().enumerate() {
        let (a, b) = cut.interval(i);
        assert!(
            measures[j].mass(a, b) * rat(s) >= *measures[j].total(),
            "measure {j} short-changed on interval {i}"
        );
    }
    Ok(cut)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAssignment {
    /// `0 = h_0 <= h_1 <= ... <= h_s = k`; interval `j` covers blocks
    /// `h_j .. h_{j+1}` (0-based, half open).
    pub cuts: Vec<usize>,
    /// `assignment[j]`: index of the `B` set given interval `j`.
    pub assignment: Vec<usize>,
}

/// Element to block index, rejecting overlaps.
fn block_index(a_sets: &[Vec<ElementId>]) -> Result<HashMap<ElementId, usize>> {
    let mut owner = HashMap::new();
    for (i, set) in a_sets.iter().enumerate() {
        for &x in set {
            if let Some(first) = owner.insert(x, i) {
                return Err(Error::Partition(format!(
                    "element {x} lies in blocks {first} and {i}"
                )));
            }
        }
    }
    Ok(owner)
}

/// Assigns to each `B_j` a run of consecutive `A` blocks holding at least
/// `ceil(|B_j| / s) - max |A_i|` of its elements.
pub fn discrete_blocks(
    a_sets: &[Vec<ElementId>],
    b_sets: &[Vec<ElementId>],
) -> Result<BlockAssignment> {
    let k = a_sets.len();
    let s = b_sets.len();
    if k == 0 || s == 0 {
        return Err(Error::Precondition(vec!["k ≥ 1 and s ≥ 1".into()]));
    }
    let owner = block_index(a_sets)?;
    let mut measures = Vec::with_capacity(s);
    for (j, set) in b_sets.iter().enumerate() {
        let mut masses = vec![0usize; k];
        for x in set {
            match owner.get(x) {
                Some(&i) => masses[i] += 1,
                None => {
                    return Err(Error::Partition(format!(
                        "element {x} of B_{j} is outside the blocks"
                    )))
                }
            }
        }
        measures.push(PlMeasure::from_masses(&masses));
    }
    let assignment = match cake_cut(&measures) {
        Ok(cut) => BlockAssignment {
            cuts: cut
                .cuts
                .iter()
                .map(|r| r.ceil().to_integer().to_usize().expect("cut inside [0, k]"))
                .collect(),
            assignment: cut.assignment,
        },
        // Every B is empty: any cuts meet the bound.
        Err(Error::Degenerate(_)) => BlockAssignment {
            cuts: (0..=s).map(|j| j * k / s).collect(),
            assignment: (0..s).collect(),
        },
        Err(e) => return Err(e),
    };
    let widest = a_sets.iter().map(Vec::len).max().unwrap_or(0);
    for (j, &b) in assignment.assignment.iter().enumerate() {
        let got = b_sets[b]
            .iter()
            .filter(|x| (assignment.cuts[j]..assignment.cuts[j + 1]).contains(&owner[*x]))
            .count();
        assert!(
            got + widest >= b_sets[b].len().div_ceil(s),
            "B_{b} gets {got} elements from its blocks"
        );
    }
    Ok(assignment)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    /// Index into the `B` family.
    pub t: usize,
    /// Blocks `previous h .. h` (0-based, half open) belong to this step.
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSelection {
    pub selections: Vec<Selection>,
    /// `|U_{j,k}| - |U_{j+1,k}|` per step.
    pub losses: Vec<usize>,
}

impl PartitionSelection {
    /// Block range of selection `j`.
    pub fn blocks(&self, j: usize) -> std::ops::Range<usize> {
        let start = if j == 0 { 0 } else { self.selections[j - 1].h };
        start..self.selections[j].h
    }

    /// `C_j = B_{t_j} ∩ (A_i for i in blocks(j))`, ascending ids.
    pub fn pieces(
        &self,
        a_sets: &[Vec<ElementId>],
        b_sets: &[Vec<ElementId>],
    ) -> Vec<Vec<ElementId>> {
        (0..self.selections.len())
            .map(|j| {
                let mut piece: Vec<ElementId> = self
                    .blocks(j)
                    .flat_map(|i| a_sets[i].iter().copied())
                    .filter(|x| b_sets[self.selections[j].t].contains(x))
                    .collect();
                piece.sort_unstable();
                piece
            })
            .collect()
    }
}

/// For equal blocks `A_1..A_k` (size `a`) and disjoint equal `B_1..B_k'`
/// (size `b >= a`) inside them, at least `floor(k'/3)` pairs `(t_j, h_j)`
/// with `|B_{t_j} ∩ (A_i : h_{j-1} <= i < h_j)| >= b/k'`.
pub fn partition_select(
    a_sets: &[Vec<ElementId>],
    b_sets: &[Vec<ElementId>],
) -> Result<PartitionSelection> {
    let k = a_sets.len();
    let kp = b_sets.len();
    let a = a_sets.first().map_or(0, Vec::len);
    let b = b_sets.first().map_or(0, Vec::len);
    let mut violated = Vec::new();
    if !(k > kp && kp >= 1) {
        violated.push(format!("k > k' ≥ 1 (k = {k}, k' = {kp})"));
    }
    if a_sets.iter().any(|s| s.len() != a) {
        violated.push("A blocks of equal size".into());
    }
    if b_sets.iter().any(|s| s.len() != b) {
        violated.push("B sets of equal size".into());
    }
    if b < a || b == 0 {
        violated.push(format!("b ≥ a and b ≥ 1 (a = {a}, b = {b})"));
    }
    if !violated.is_empty() {
        return Err(Error::Precondition(violated));
    }
    let block_of = block_index(a_sets).map_err(|e| Error::Precondition(vec![e.to_string()]))?;
    let mut b_of: HashMap<ElementId, usize> = HashMap::new();
    for (j, set) in b_sets.iter().enumerate() {
        for &x in set {
            if !block_of.contains_key(&x) {
                return Err(Error::Precondition(vec![format!(
                    "B_{j} inside the blocks (element {x})"
                )]));
            }
            if let Some(first) = b_of.insert(x, j) {
                return Err(Error::Precondition(vec![format!(
                    "B sets disjoint (element {x} in B_{first} and B_{j})"
                )]));
            }
        }
    }

    // A_i^0 = A_i ∩ ⋃B
    let mut alive: Vec<Vec<ElementId>> = a_sets
        .iter()
        .map(|set| {
            set.iter()
                .copied()
                .filter(|x| b_of.contains_key(x))
                .collect()
        })
        .collect();
    let mut total: usize = alive.iter().map(Vec::len).sum();
    let mut used = vec![false; kp];
    let r = b;
    let mut selections = Vec::new();
    let mut losses = Vec::new();
    while total >= r {
        let mut h = 0;
        let mut prefix = 0;
        while prefix < r {
            prefix += alive[h].len();
            h += 1;
        }
        let mut tally = vec![0usize; kp];
        for x in alive[..h].iter().flatten() {
            tally[b_of[x]] += 1;
        }
        let t = (0..kp)
            .filter(|&t| !used[t])
            .fold(None, |best: Option<usize>, t| match best {
                Some(bt) if tally[bt] >= tally[t] => Some(bt),
                _ => Some(t),
            })
            .expect("an unused B meets the prefix");
        used[t] = true;
        for block in alive[..h].iter_mut() {
            block.clear();
        }
        for block in alive[h..].iter_mut() {
            block.retain(|x| b_of[x] != t);
        }
        let after: usize = alive.iter().map(Vec::len).sum();
        let loss = total - after;
        assert!(loss <= r + a + b, "step lost {loss} > r + a + b");
        losses.push(loss);
        total = after;
        selections.push(Selection { t, h });
    }

    let result = PartitionSelection { selections, losses };
    assert!(
        result.selections.len() >= kp / 3,
        "only {} selections for k' = {kp}",
        result.selections.len()
    );
    for (j, piece) in result.pieces(a_sets, b_sets).iter().enumerate() {
        assert!(
            piece.len() * kp >= b,
            "piece {j} of size {} below b/k'",
            piece.len()
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn interpolation() {
        let m = PlMeasure::from_masses(&[2, 0, 4]);
        assert_eq!(m.cumulative(&r(1, 2)), r(1, 1));
        assert_eq!(m.cumulative(&r(3, 2)), r(2, 1));
        assert_eq!(m.cumulative(&r(5, 2)), r(4, 1));
        assert_eq!(m.mass(&r(1, 1), &r(3, 1)), r(4, 1));
    }

    #[test]
    fn single_measure_gets_everything() {
        let cut = cake_cut(&[PlMeasure::from_masses(&[0, 0, 0])]).unwrap();
        assert_eq!(cut.cuts, vec![r(0, 1), r(3, 1)]);
        assert_eq!(cut.assignment, vec![0]);
    }

    #[test]
    fn two_uniform_measures_split_in_half() {
        let m = PlMeasure::from_masses(&[1, 1]);
        let cut = cake_cut(&[m.clone(), m]).unwrap();
        assert_eq!(cut.cuts, vec![r(0, 1), r(1, 1), r(2, 1)]);
        assert_eq!(cut.assignment, vec![1, 0]);
    }

    #[test]
    fn zero_measures_go_left() {
        let cut = cake_cut(&[
            PlMeasure::from_masses(&[0, 0]),
            PlMeasure::from_masses(&[1, 3]),
        ])
        .unwrap();
        assert_eq!(cut.assignment, vec![0, 1]);
        assert_eq!(cut.cuts, vec![r(0, 1), r(0, 1), r(2, 1)]);
        assert!(matches!(
            cake_cut(&[PlMeasure::from_masses(&[0]), PlMeasure::from_masses(&[0])]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn halves_go_to_their_own_b() {
        let a: Vec<Vec<usize>> = (0..4).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let b = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]];
        let assignment = discrete_blocks(&a, &b).unwrap();
        // B_1 marks 3, B_0 marks 1: B_1 takes the last block only.
        assert_eq!(assignment.cuts, vec![0, 3, 4]);
        assert_eq!(assignment.assignment, vec![0, 1]);
    }

    #[test]
    fn discrete_blocks_single_b() {
        let a = vec![vec![0], vec![1, 2]];
        let assignment = discrete_blocks(&a, &[vec![2]]).unwrap();
        assert_eq!(assignment.cuts, vec![0, 2]);
        assert!(matches!(
            discrete_blocks(&a, &[vec![7]]),
            Err(Error::Partition(_))
        ));
        assert!(matches!(
            discrete_blocks(&[vec![0], vec![0]], &[vec![0]]),
            Err(Error::Partition(_))
        ));
    }

    #[test]
    fn partition_select_hand_run() {
        let a: Vec<Vec<usize>> = (0..6).map(|i| vec![2 * i, 2 * i + 1]).collect();
        let b = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]];
        let sel = partition_select(&a, &b).unwrap();
        assert!(!sel.selections.is_empty());
        assert_eq!(sel.selections[0], Selection { t: 0, h: 2 });
        let pieces = sel.pieces(&a, &b);
        assert!(pieces.iter().all(|p| p.len() * 3 >= 4));
        for w in sel.selections.windows(2) {
            assert!(w[0].h < w[1].h);
        }
    }

    #[test]
    fn partition_select_single_b() {
        let a = vec![vec![0], vec![1]];
        let sel = partition_select(&a, &[vec![0, 1]]).unwrap();
        assert_eq!(sel.selections.len(), 1);
    }

    #[test]
    fn partition_select_rejects_shapes() {
        let a = vec![vec![0, 1], vec![2]];
        assert!(matches!(
            partition_select(&a, &[vec![0, 1]]),
            Err(Error::Precondition(_))
        ));
        let a = vec![vec![0], vec![1]];
        assert!(matches!(
            partition_select(&a, &[vec![0], vec![1]]),
            Err(Error::Precondition(_))
        ));
    }
}
