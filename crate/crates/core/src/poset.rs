//! Dense strict partial orders.
//!
//! A [`Poset`] stores the transitive closure of its order as two bit
//! matrices: row `x` of `up` is `U(x) = {y : x < y}` and row `x` of `down`
//! is `D(x) = {y : y < x}`. Every query used by the extraction algorithms
//! reduces to row unions, intersections and popcounts.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use crate::bitset::{self, words_for, BitSet, Ones};
use crate::error::{Error, Result};

pub type ElementId = usize;

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    stride: usize,
    up: Vec<u64>,
    down: Vec<u64>,
}

/// Which neighborhood [`Poset::neighborhood`] should return.
#[derive(Debug, Clone, Copy)]
pub enum Neighborhood<'a> {
    /// `D(x)`: elements strictly below `x`.
    Down(ElementId),
    /// `U(x)`: elements strictly above `x`.
    Up(ElementId),
    /// `D(S)`: elements outside `S` strictly below some member of `S`.
    DownSet(&'a [ElementId]),
}

/// Bijection between a subset of a ground set and `[0, |subset|)`.
///
/// New ids follow ascending old ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdMap {
    to_old: Vec<ElementId>,
    to_new: Vec<Option<ElementId>>,
}

impl IdMap {
    fn new(ground: usize, mut members: Vec<ElementId>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut to_new = vec![None; ground];
        for (new, &old) in members.iter().enumerate() {
            to_new[old] = Some(new);
        }
        IdMap {
            to_old: members,
            to_new,
        }
    }

    pub fn len(&self) -> usize {
        self.to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_old.is_empty()
    }

    pub fn old(&self, new: ElementId) -> ElementId {
        self.to_old[new]
    }

    pub fn new_id(&self, old: ElementId) -> Option<ElementId> {
        self.to_new.get(old).copied().flatten()
    }

    pub fn old_ids(&self) -> &[ElementId] {
        &self.to_old
    }

    /// Translates sets of new ids back to sorted sets of old ids.
    pub fn lift(&self, sets: &[Vec<ElementId>]) -> Vec<Vec<ElementId>> {
        sets.iter()
            .map(|s| {
                let mut lifted: Vec<_> = s.iter().map(|&x| self.to_old[x]).collect();
                lifted.sort_unstable();
                lifted
            })
            .collect()
    }
}

/// An ordered list of element subsets over a ground set of size `ground`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    pub ground: usize,
    pub sets: Vec<Vec<ElementId>>,
}

impl SubsetFamily {
    /// Members of each set are sorted; set order is kept.
    pub fn new(ground: usize, sets: Vec<Vec<ElementId>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        SubsetFamily { ground, sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn min_size(&self) -> usize {
        self.sets.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Range-checks every id and rejects intersecting sets.
    pub fn check_disjoint(&self) -> Result<()> {
        let mut owner: Vec<Option<usize>> = vec![None; self.ground];
        for (i, set) in self.sets.iter().enumerate() {
            for &x in set {
                if x >= self.ground {
                    return Err(Error::Range {
                        id: x,
                        n: self.ground,
                    });
                }
                match owner[x] {
                    Some(first) => {
                        return Err(Error::Overlap {
                            element: x,
                            first,
                            second: i,
                        })
                    }
                    None => owner[x] = Some(i),
                }
            }
        }
        Ok(())
    }

    pub(crate) fn bitsets(&self) -> Vec<BitSet> {
        self.sets
            .iter()
            .map(|s| BitSet::from_ids(self.ground, s.iter().copied()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    AscendingChain,
    DescendingChain,
    TotallyIncomparable,
}

/// Outcome of an exhaustive structure check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// First offending pair `(a, b)` with `a` from the earlier set.
    pub counterexample: Option<(ElementId, ElementId)>,
}

impl Verification {
    fn ok() -> Self {
        Verification {
            holds: true,
            counterexample: None,
        }
    }

    fn fail(a: ElementId, b: ElementId) -> Self {
        Verification {
            holds: false,
            counterexample: Some((a, b)),
        }
    }
}

/// Found when rows handed to [`Poset::from_up_rows`] are not a strict order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AxiomViolation {
    Reflexive(ElementId),
    /// `x < y`, `y < z` but not `x < z`.
    Intransitive(ElementId, ElementId, ElementId),
}

impl Poset {
    /// Builds the transitive closure of `relations`, where `(u, v)` means `u < v`.
    pub fn new(n: usize, relations: &[(ElementId, ElementId)]) -> Result<Poset> {
        let mut succ: Vec<Vec<ElementId>> = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(u, v) in relations {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::Range { id, n });
                }
            }
            if u == v {
                return Err(Error::Cycle { u, v });
            }
            succ[u].push(v);
            indegree[v] += 1;
        }

        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<ElementId> = (0..n).filter(|&x| indegree[x] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if order.len() < n {
            let &(u, v) = relations
                .iter()
                .find(|&&(u, v)| indegree[u] > 0 && indegree[v] > 0)
                .expect("a cycle leaves relations among unprocessed elements");
            return Err(Error::Cycle { u, v });
        }

        let stride = words_for(n);
        let mut up = vec![0u64; n * stride];
        let mut row = vec![0u64; stride];
        for &x in order.iter().rev() {
            row.iter_mut().for_each(|w| *w = 0);
            for &y in &succ[x] {
                bitset::row_insert(&mut row, y);
                for (a, b) in row.iter_mut().zip(&up[y * stride..(y + 1) * stride]) {
                    *a |= b;
                }
            }
            up[x * stride..(x + 1) * stride].copy_from_slice(&row);
        }
        Ok(Poset::from_closed(n, up))
    }

    /// The `n`-element antichain.
    pub fn antichain(n: usize) -> Poset {
        Poset::from_closed(n, vec![0; n * words_for(n)])
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Poset {
        let stride = words_for(n);
        let mut up = vec![0u64; n * stride];
        for x in 0..n {
            for y in x + 1..n {
                bitset::row_insert(&mut up[x * stride..(x + 1) * stride], y);
            }
        }
        Poset::from_closed(n, up)
    }

    /// Wraps rows already known to be a strict order.
    fn from_closed(n: usize, up: Vec<u64>) -> Poset {
        let stride = words_for(n);
        let mut down = vec![0u64; n * stride];
        for x in 0..n {
            for y in Ones::new(&up[x * stride..(x + 1) * stride]) {
                bitset::row_insert(&mut down[y * stride..(y + 1) * stride], x);
            }
        }
        Poset {
            n,
            stride,
            up,
            down,
        }
    }

    /// Checks irreflexivity and transitivity of `up` (row `x` = elements above
    /// `x`) before accepting it. Antisymmetry follows from the two.
    pub(crate) fn from_up_rows(
        n: usize,
        up: Vec<u64>,
    ) -> std::result::Result<Poset, AxiomViolation> {
        let stride = words_for(n);
        assert_eq!(up.len(), n * stride);
        for x in 0..n {
            let row_x = &up[x * stride..(x + 1) * stride];
            if bitset::row_contains(row_x, x) {
                return Err(AxiomViolation::Reflexive(x));
            }
            for y in Ones::new(row_x) {
                let row_y = &up[y * stride..(y + 1) * stride];
                if let Some((w, bits)) = row_y
                    .iter()
                    .zip(row_x)
                    .enumerate()
                    .map(|(w, (b, a))| (w, b & !a))
                    .find(|&(_, bits)| bits != 0)
                {
                    let z = w * bitset::WORD_BITS + bits.trailing_zeros() as usize;
                    return Err(AxiomViolation::Intransitive(x, y, z));
                }
            }
        }
        Ok(Poset::from_closed(n, up))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check(&self, x: ElementId) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::Range { id: x, n: self.n })
        }
    }

    /// `x < y`. Panics on out-of-range ids.
    #[inline]
    pub fn less(&self, x: ElementId, y: ElementId) -> bool {
        assert!(x < self.n && y < self.n);
        bitset::row_contains(self.up_row(x), y)
    }

    #[inline]
    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        self.less(x, y) || self.less(y, x)
    }

    #[inline]
    pub(crate) fn up_row(&self, x: ElementId) -> &[u64] {
        &self.up[x * self.stride..(x + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn down_row(&self, x: ElementId) -> &[u64] {
        &self.down[x * self.stride..(x + 1) * self.stride]
    }

    pub fn up_set(&self, x: ElementId) -> BitSet {
        BitSet::from_words(self.n, self.up_row(x).to_vec())
    }

    pub fn down_set(&self, x: ElementId) -> BitSet {
        BitSet::from_words(self.n, self.down_row(x).to_vec())
    }

    pub fn down_degree(&self, x: ElementId) -> usize {
        bitset::row_count(self.down_row(x))
    }

    pub fn up_degree(&self, x: ElementId) -> usize {
        bitset::row_count(self.up_row(x))
    }

    pub fn incomparable_count(&self, x: ElementId) -> usize {
        self.n - 1 - self.down_degree(x) - self.up_degree(x)
    }

    /// `D(S)`: elements outside `S` strictly below some member of `S`.
    pub fn down_of_set(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.n);
        for s in set.iter() {
            out.union_with(self.down_row(s));
        }
        out.difference_with(set.words());
        out
    }

    pub fn neighborhood(&self, query: Neighborhood<'_>) -> Result<Vec<ElementId>> {
        match query {
            Neighborhood::Down(x) => {
                self.check(x)?;
                Ok(Ones::new(self.down_row(x)).collect())
            }
            Neighborhood::Up(x) => {
                self.check(x)?;
                Ok(Ones::new(self.up_row(x)).collect())
            }
            Neighborhood::DownSet(members) => {
                for &x in members {
                    self.check(x)?;
                }
                let set = BitSet::from_ids(self.n, members.iter().copied());
                Ok(self.down_of_set(&set).to_vec())
            }
        }
    }

    /// The order restricted to `subset`, relabelled by ascending old id.
    pub fn induced(&self, subset: &[ElementId]) -> Result<(Poset, IdMap)> {
        for &x in subset {
            self.check(x)?;
        }
        let map = IdMap::new(self.n, subset.to_vec());
        Ok((self.induced_by_map(&map), map))
    }

    pub(crate) fn induced_by_map(&self, map: &IdMap) -> Poset {
        let m = map.len();
        let stride = words_for(m);
        let mut up = vec![0u64; m * stride];
        for (new_x, &old_x) in map.old_ids().iter().enumerate() {
            let row = &mut up[new_x * stride..(new_x + 1) * stride];
            for old_y in Ones::new(self.up_row(old_x)) {
                if let Some(new_y) = map.new_id(old_y) {
                    bitset::row_insert(row, new_y);
                }
            }
        }
        Poset::from_closed(m, up)
    }

    /// The reversed order: `x < y` in the dual iff `y < x` here.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            stride: self.stride,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Topological order, smallest ready id first.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        self.linear_extension_within(&BitSet::full(self.n))
    }

    /// Linear extension of the subposet on `mask`. Equals the linear
    /// extension of `induced(mask)` mapped back, since relabelling keeps id order.
    pub(crate) fn linear_extension_within(&self, mask: &BitSet) -> Vec<ElementId> {
        let mut pending = vec![0usize; self.n];
        let mut ready = BinaryHeap::new();
        for x in mask.iter() {
            pending[x] = bitset::and_count(self.down_row(x), mask.words());
            if pending[x] == 0 {
                ready.push(Reverse(x));
            }
        }
        let mut order = Vec::with_capacity(mask.count());
        while let Some(Reverse(x)) = ready.pop() {
            order.push(x);
            for (w, (&u, &m)) in self.up_row(x).iter().zip(mask.words()).enumerate() {
                let mut bits = u & m;
                while bits != 0 {
                    let y = w * bitset::WORD_BITS + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    pending[y] -= 1;
                    if pending[y] == 0 {
                        ready.push(Reverse(y));
                    }
                }
            }
        }
        order
    }

    /// Exhaustive elementwise check of `claim` over every pair of sets.
    pub fn verify_structure(&self, family: &SubsetFamily, claim: Claim) -> Result<Verification> {
        if family.ground != self.n {
            return Err(Error::GroundMismatch {
                index: 0,
                expected: self.n,
                found: family.ground,
            });
        }
        family.check_disjoint()?;
        let sets = family.bitsets();
        match claim {
            Claim::AscendingChain | Claim::DescendingChain => {
                let mut later = BitSet::new(self.n);
                let mut suffix = vec![BitSet::new(self.n); sets.len()];
                for i in (0..sets.len()).rev() {
                    suffix[i] = later.clone();
                    later.union_with(sets[i].words());
                }
                for (i, set) in family.sets.iter().enumerate() {
                    for &a in set {
                        let row = if claim == Claim::AscendingChain {
                            self.up_row(a)
                        } else {
                            self.down_row(a)
                        };
                        let mut missing = suffix[i].clone();
                        missing.difference_with(row);
                        let first = missing.iter().next();
                        if let Some(b) = first {
                            return Ok(Verification::fail(a, b));
                        }
                    }
                }
            }
            Claim::TotallyIncomparable => {
                let mut all = BitSet::new(self.n);
                for s in &sets {
                    all.union_with(s.words());
                }
                for (i, set) in family.sets.iter().enumerate() {
                    let mut others = all.clone();
                    others.difference_with(sets[i].words());
                    for &a in set {
                        let hit = bitset::first_common(self.up_row(a), others.words())
                            .into_iter()
                            .chain(bitset::first_common(self.down_row(a), others.words()))
                            .min();
                        if let Some(b) = hit {
                            return Ok(Verification::fail(a, b));
                        }
                    }
                }
            }
        }
        Ok(Verification::ok())
    }

    /// Hasse edges `(x, y)`: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut edges = Vec::new();
        for x in 0..self.n {
            for y in Ones::new(self.up_row(x)) {
                if !bitset::intersects(self.up_row(x), self.down_row(y)) {
                    edges.push((x, y));
                }
            }
        }
        edges
    }

    /// Hasse diagram in DOT syntax, one node per element.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n");
        for x in 0..self.n {
            let _ = writeln!(out, "  {x};");
        }
        for (x, y) in self.covers() {
            let _ = writeln!(out, "  {x} -> {y};");
        }
        out.push_str("}\n");
        out
    }

    /// All pairs `(x, y)` with `x < y`, row-major.
    pub fn relations(&self) -> Vec<(ElementId, ElementId)> {
        (0..self.n)
            .flat_map(|x| Ones::new(self.up_row(x)).map(move |y| (x, y)))
            .collect()
    }
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("relations", &self.relations())
            .finish()
    }
}
