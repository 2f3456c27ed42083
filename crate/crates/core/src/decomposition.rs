//! Mirsky antichain levels and monotone subsequences.

use crate::bitset::Ones;
use crate::error::{Error, Result};
use crate::poset::{ElementId, Poset};

/// Partition into antichains by longest-chain length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirskyDecomposition {
    /// `levels[i]`: elements whose longest chain ending at them has `i + 1`
    /// elements, ascending ids.
    pub levels: Vec<Vec<ElementId>>,
    /// `level_of[x]` is the index of the level holding `x`.
    pub level_of: Vec<usize>,
}

impl MirskyDecomposition {
    pub fn height(&self) -> usize {
        self.levels.len()
    }
}

pub fn mirsky(poset: &Poset) -> MirskyDecomposition {
    let n = poset.len();
    let mut level_of = vec![0usize; n];
    let mut height = 0;
    for x in poset.linear_extension() {
        let level = Ones::new(poset.down_row(x))
            .map(|y| level_of[y] + 1)
            .max()
            .unwrap_or(0);
        level_of[x] = level;
        height = height.max(level + 1);
    }
    let mut levels = vec![Vec::new(); height];
    for (x, &l) in level_of.iter().enumerate() {
        levels[l].push(x);
    }
    MirskyDecomposition { levels, level_of }
}

/// The largest Mirsky level; the lowest level wins ties.
pub fn largest_level(poset: &Poset) -> Result<Vec<ElementId>> {
    if poset.is_empty() {
        return Err(Error::Empty);
    }
    let decomposition = mirsky(poset);
    let mut best = 0;
    for (i, level) in decomposition.levels.iter().enumerate() {
        if level.len() > decomposition.levels[best].len() {
            best = i;
        }
    }
    Ok(decomposition.levels.into_iter().nth(best).unwrap())
}

/// A longest chain `x_1 < ... < x_h`, chosen greedily from the top level
/// down with smallest ids.
pub fn longest_chain(poset: &Poset, decomposition: &MirskyDecomposition) -> Vec<ElementId> {
    let Some(top) = decomposition.levels.last() else {
        return Vec::new();
    };
    let mut chain = vec![top[0]];
    for level in (0..decomposition.height() - 1).rev() {
        let above = *chain.last().unwrap();
        let next = decomposition.levels[level]
            .iter()
            .copied()
            .find(|&y| poset.less(y, above))
            .expect("every element above level 0 has a predecessor one level down");
        chain.push(next);
    }
    chain.reverse();
    chain
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Positions of a monotone subsequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneRun {
    pub direction: Direction,
    pub indices: Vec<usize>,
}

/// Longest monotone subsequence of `items` under the strict total order
/// `less`.
///
/// Increasing wins when both directions reach the same length; among
/// longest runs the lexicographically smallest index sequence is returned.
/// The length is always at least `ceil(sqrt(items.len()))`.
pub fn erdos_szekeres<T, F>(items: &[T], less: F) -> MonotoneRun
where
    F: Fn(&T, &T) -> bool,
{
    let increasing = lexmin_longest(items, &less);
    let decreasing = lexmin_longest(items, &|a: &T, b: &T| less(b, a));
    if increasing.len() >= decreasing.len() {
        MonotoneRun {
            direction: Direction::Increasing,
            indices: increasing,
        }
    } else {
        MonotoneRun {
            direction: Direction::Decreasing,
            indices: decreasing,
        }
    }
}

/// Lexicographically first longest increasing subsequence, O(m log m).
fn lexmin_longest<T, F>(items: &[T], less: &F) -> Vec<usize>
where
    F: Fn(&T, &T) -> bool,
{
    let m = items.len();
    // from_here[i]: longest increasing run starting at i.
    let mut from_here = vec![0usize; m];
    // heads[len - 1]: index of the largest first item over runs of that
    // length in the suffix scanned so far; decreasing in len.
    let mut heads: Vec<usize> = Vec::new();
    for i in (0..m).rev() {
        let longer = heads.partition_point(|&h| less(&items[i], &items[h]));
        from_here[i] = longer + 1;
        if longer == heads.len() {
            heads.push(i);
        } else {
            heads[longer] = i;
        }
    }
    let best = heads.len();
    let mut run = Vec::with_capacity(best);
    let mut need = best;
    for i in 0..m {
        if need == 0 {
            break;
        }
        if from_here[i] == need && run.last().map_or(true, |&p| less(&items[p], &items[i])) {
            run.push(i);
            need -= 1;
        }
    }
    run
}
