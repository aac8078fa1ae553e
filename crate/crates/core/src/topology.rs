//! Noetherian closed-set calculus on finite universes, where every
//! topological claim is brute-force checkable.
//!
//! A family of "basic" closed subsets of a finite universe — containing
//! the universe and closed under pairwise intersection — generates a
//! topology whose closed sets are the finite unions of members.  The
//! irreducible closed sets of that topology are exactly the irreducible
//! members, so components, foundational rank, and degree reduce to
//! computations over the stored family.  Subsets are bitmasks, capping
//! universes at 32 points (far beyond what exhaustive checks can visit).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Rank value of the foundational recursion: `−∞` for the empty set,
/// finite otherwise (finite universes never reach limit ordinals).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RankValue {
    MinusInfinity,
    Finite(u32),
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::MinusInfinity => write!(f, "-inf"),
            RankValue::Finite(n) => write!(f, "{n}"),
        }
    }
}

/// An intersection-closed family of subsets containing the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteClosedFamily {
    labels: Vec<String>,
    closed: Vec<u32>,
}

impl FiniteClosedFamily {
    /// Builds the family from labels and member subsets (as bitmasks).
    /// The universe is added and the collection is closed under pairwise
    /// intersection; members are stored sorted, so the construction does
    /// not depend on input order.
    pub fn from_masks(labels: &[&str], masks: &[u32]) -> Result<FiniteClosedFamily> {
        if labels.is_empty() || labels.len() > 32 {
            return Err(Error::Invalid("universe must have between 1 and 32 points".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in labels {
            if !seen.insert(*l) {
                return Err(Error::Invalid(format!("duplicate point label {l}")));
            }
        }
        let full = full_mask(labels.len());
        for &m in masks {
            if m & !full != 0 {
                return Err(Error::Invalid("subset mentions points outside the universe".into()));
            }
        }
        let mut closed: Vec<u32> = masks.to_vec();
        closed.push(full);
        closed.sort_unstable();
        closed.dedup();
        // close under pairwise intersection
        loop {
            let mut added = false;
            let snapshot = closed.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let c = a & b;
                    if closed.binary_search(&c).is_err() {
                        let pos = closed.binary_search(&c).unwrap_err();
                        closed.insert(pos, c);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Ok(FiniteClosedFamily { labels: labels.iter().map(|s| s.to_string()).collect(), closed })
    }

    /// Convenience constructor from labeled subsets.
    pub fn from_labeled(labels: &[&str], sets: &[&[&str]]) -> Result<FiniteClosedFamily> {
        let probe = FiniteClosedFamily {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            closed: Vec::new(),
        };
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            masks.push(probe.mask_of(s)?);
        }
        FiniteClosedFamily::from_masks(labels, &masks)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    pub fn full(&self) -> u32 {
        full_mask(self.labels.len())
    }

    /// The stored members, sorted ascending as bitmasks.
    pub fn members(&self) -> &[u32] {
        &self.closed
    }

    pub fn is_member(&self, c: u32) -> bool {
        self.closed.binary_search(&c).is_ok()
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mask_of(&self, set: &[&str]) -> Result<u32> {
        let mut m = 0u32;
        for s in set {
            let i = self
                .point_index(s)
                .ok_or_else(|| Error::OutsideUniverse(s.to_string()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    pub fn labels_of(&self, mask: u32) -> Vec<&str> {
        (0..self.labels.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// The smallest member containing the point: the intersection of all
    /// members that contain it (the family is intersection-closed).
    pub fn minimal_closed_containing(&self, point: usize) -> Result<u32> {
        if point >= self.labels.len() {
            return Err(Error::OutsideUniverse(format!("point #{point}")));
        }
        let bit = 1u32 << point;
        let mut acc = self.full();
        for &c in &self.closed {
            if c & bit != 0 {
                acc &= c;
            }
        }
        Ok(acc)
    }

    /// Closure in the generated topology: the union of the per-point
    /// minimal closed supersets (equivalently, the smallest finite union
    /// of members containing the set).
    pub fn closure(&self, mask: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..self.labels.len() {
            if mask & (1 << i) != 0 {
                acc |= self.minimal_closed_containing(i).expect("point in range");
            }
        }
        acc
    }

    /// Whether the set is closed in the generated topology (a finite
    /// union of members).
    pub fn is_topology_closed(&self, mask: u32) -> bool {
        self.closure(mask) == mask
    }

    /// Irreducibility of a member: nonempty and not the union of its
    /// proper closed subsets.  (An irreducible closed set of the
    /// generated topology is always a member.)
    pub fn is_irreducible(&self, c: u32) -> Result<bool> {
        if !self.is_member(c) {
            return Err(Error::NotInFamily);
        }
        if c == 0 {
            return Ok(false);
        }
        let mut union = 0u32;
        for &d in &self.closed {
            if d & !c == 0 && d != c {
                union |= d;
            }
        }
        Ok(union != c)
    }

    /// All irreducible members, sorted ascending.
    pub fn irreducibles(&self) -> Vec<u32> {
        self.closed
            .iter()
            .copied()
            .filter(|&c| self.is_irreducible(c).expect("member"))
            .collect()
    }

    /// The irredundant decomposition of a topology-closed set into
    /// maximal irreducible closed subsets.  The empty set decomposes into
    /// nothing.
    pub fn irreducible_components(&self, c: u32) -> Result<Vec<u32>> {
        if c == 0 {
            return Ok(Vec::new());
        }
        if !self.is_topology_closed(c) {
            return Err(Error::NotInFamily);
        }
        let inside: Vec<u32> = self.irreducibles().into_iter().filter(|&d| d & !c == 0).collect();
        let mut comps: Vec<u32> = inside
            .iter()
            .copied()
            .filter(|&d| !inside.iter().any(|&e| e != d && d & !e == 0))
            .collect();
        comps.sort_unstable();
        // the union of components must recover the whole set
        let union = comps.iter().fold(0u32, |a, &b| a | b);
        debug_assert_eq!(union, c, "components cover the closed set");
        Ok(comps)
    }

    /// Foundational rank of every irreducible member, memoized:
    /// `rank(C) = 1 + max{rank(D) : D ⊊ C irreducible}` (0 when none).
    fn irreducible_ranks(&self) -> HashMap<u32, u32> {
        let mut irr = self.irreducibles();
        irr.sort_by_key(|c| c.count_ones());
        let mut ranks: HashMap<u32, u32> = HashMap::new();
        for &c in &irr {
            let sub = irr
                .iter()
                .filter(|&&d| d != c && d & !c == 0)
                .map(|d| ranks[d])
                .max();
            ranks.insert(c, sub.map_or(0, |r| r + 1));
        }
        ranks
    }

    /// Rank of an arbitrary subset: the rank of its closure, which is the
    /// largest rank of an irreducible member inside the closure.
    pub fn rank_of_subset(&self, mask: u32) -> RankValue {
        let closure = self.closure(mask);
        if closure == 0 {
            return RankValue::MinusInfinity;
        }
        let ranks = self.irreducible_ranks();
        let best = self
            .irreducibles()
            .into_iter()
            .filter(|&d| d & !closure == 0 && d != 0)
            .map(|d| ranks[&d])
            .max();
        match best {
            Some(r) => RankValue::Finite(r),
            None => RankValue::MinusInfinity,
        }
    }
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A constructible set in normalized form: a union of pieces
/// `C_i ∩ O_i` with `C_i` an irreducible member, `O_i` open in the
/// generated topology, and every piece nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructibleSet {
    pieces: Vec<(u32, u32)>,
}

impl ConstructibleSet {
    /// Builds from raw pairs `(C, B)` describing pieces `C ∖ B`, where
    /// `C` is a member and `B` is closed in the generated topology.
    /// Reducible `C` are split into components; empty pieces are dropped;
    /// pieces with the same component are merged.
    pub fn build(family: &FiniteClosedFamily, parts: &[(u32, u32)]) -> Result<ConstructibleSet> {
        let full = family.full();
        let mut by_component: HashMap<u32, u32> = HashMap::new();
        for &(c, b) in parts {
            if !family.is_topology_closed(c & full) || c & !full != 0 {
                return Err(Error::NotInFamily);
            }
            if !family.is_topology_closed(b & full) || b & !full != 0 {
                return Err(Error::Invalid(
                    "the open constraint must be the complement of a closed set".into(),
                ));
            }
            let open = full & !b;
            for comp in family.irreducible_components(c)? {
                if comp & open != 0 {
                    *by_component.entry(comp).or_insert(0) |= open;
                }
            }
        }
        let mut pieces: Vec<(u32, u32)> = by_component.into_iter().collect();
        pieces.sort_unstable();
        Ok(ConstructibleSet { pieces })
    }

    /// The constructible set of a single topology-closed set.
    pub fn from_closed(family: &FiniteClosedFamily, c: u32) -> Result<ConstructibleSet> {
        ConstructibleSet::build(family, &[(c, 0)])
    }

    /// Normalized pieces `(C_i, O_i)`.
    pub fn pieces(&self) -> &[(u32, u32)] {
        &self.pieces
    }

    /// The underlying point set.
    pub fn points(&self) -> u32 {
        self.pieces.iter().fold(0, |a, &(c, o)| a | (c & o))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Union of the component closures.
    pub fn closure(&self) -> u32 {
        self.pieces.iter().fold(0, |a, &(c, _)| a | c)
    }

    pub fn union(&self, other: &ConstructibleSet) -> ConstructibleSet {
        let mut by_component: HashMap<u32, u32> = HashMap::new();
        for &(c, o) in self.pieces.iter().chain(&other.pieces) {
            *by_component.entry(c).or_insert(0) |= o;
        }
        let mut pieces: Vec<(u32, u32)> = by_component.into_iter().collect();
        pieces.sort_unstable();
        ConstructibleSet { pieces }
    }
}

/// Foundational rank of a constructible set: the maximum rank of the
/// component closures of its nonempty pieces (their closures), `−∞` when
/// empty.  Agrees with the rank of the underlying point set.
pub fn rirr_rank(family: &FiniteClosedFamily, y: &ConstructibleSet) -> RankValue {
    let ranks = family.irreducible_ranks();
    y.pieces
        .iter()
        .map(|(c, _)| RankValue::Finite(ranks[c]))
        .max()
        .unwrap_or(RankValue::MinusInfinity)
}

/// Degree of a nonempty constructible set: the number of distinct
/// components of maximal rank among its pieces.
pub fn degree(family: &FiniteClosedFamily, y: &ConstructibleSet) -> Result<u32> {
    if y.is_empty() {
        return Err(Error::EmptyDegree);
    }
    let ranks = family.irreducible_ranks();
    let max = y.pieces.iter().map(|(c, _)| ranks[c]).max().expect("nonempty");
    Ok(y.pieces.iter().filter(|(c, _)| ranks[c] == max).count() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_family() -> FiniteClosedFamily {
        // universe {1,2,3}; members X, {1}, {1,2}, ∅
        FiniteClosedFamily::from_labeled(
            &["1", "2", "3"],
            &[&[], &["1"], &["1", "2"]],
        )
        .unwrap()
    }

    fn split_family() -> FiniteClosedFamily {
        // universe {1,2,3}; members X, {1}, {2}, {1,2}, ∅
        FiniteClosedFamily::from_labeled(
            &["1", "2", "3"],
            &[&[], &["1"], &["2"], &["1", "2"]],
        )
        .unwrap()
    }

    #[test]
    fn minimal_closed_supersets() {
        let f = chain_family();
        assert_eq!(f.minimal_closed_containing(0).unwrap(), 0b001);
        assert_eq!(f.minimal_closed_containing(1).unwrap(), 0b011);
        assert_eq!(f.minimal_closed_containing(2).unwrap(), 0b111);
        assert!(f.minimal_closed_containing(3).is_err());
    }

    #[test]
    fn irreducibility() {
        let f = chain_family();
        assert!(f.is_irreducible(0b011).unwrap());
        assert!(!f.is_irreducible(0b000).unwrap());
        let g = split_family();
        assert!(!g.is_irreducible(0b011).unwrap()); // {1,2} = {1} ∪ {2}
        assert!(matches!(g.is_irreducible(0b101), Err(Error::NotInFamily)));
    }

    #[test]
    fn components() {
        let g = split_family();
        assert_eq!(g.irreducible_components(0b011).unwrap(), vec![0b001, 0b010]);
        let f = chain_family();
        assert_eq!(f.irreducible_components(0b011).unwrap(), vec![0b011]);
        assert_eq!(f.irreducible_components(0).unwrap(), Vec::<u32>::new());
    }

    #[test]
    fn worked_rank_chain() {
        let f = chain_family();
        assert_eq!(f.rank_of_subset(0b001), RankValue::Finite(0));
        assert_eq!(f.rank_of_subset(0b011), RankValue::Finite(1));
        assert_eq!(f.rank_of_subset(0b111), RankValue::Finite(2));
        assert_eq!(f.rank_of_subset(0), RankValue::MinusInfinity);
        assert!(RankValue::MinusInfinity < RankValue::Finite(0));
    }

    #[test]
    fn construction_is_order_independent() {
        let a = FiniteClosedFamily::from_masks(&["a", "b", "c"], &[0b011, 0b110, 0b001]).unwrap();
        let b = FiniteClosedFamily::from_masks(&["a", "b", "c"], &[0b001, 0b110, 0b011]).unwrap();
        assert_eq!(a, b);
        // intersection {b} = {a,b} ∩ {b,c} was added automatically
        assert!(a.is_member(0b010));
    }

    #[test]
    fn constructible_rank_and_degree() {
        let g = split_family();
        // Y = {1,2} as a closed set: two rank-0 components
        let y = ConstructibleSet::from_closed(&g, 0b011).unwrap();
        assert_eq!(rirr_rank(&g, &y), RankValue::Finite(0));
        assert_eq!(degree(&g, &y).unwrap(), 2);

        // empty set: rank −∞, degree undefined
        let empty = ConstructibleSet::build(&g, &[]).unwrap();
        assert_eq!(rirr_rank(&g, &empty), RankValue::MinusInfinity);
        assert!(matches!(degree(&g, &empty), Err(Error::EmptyDegree)));

        // irreducible piece: degree 1
        let single = ConstructibleSet::from_closed(&g, 0b001).unwrap();
        assert_eq!(degree(&g, &single).unwrap(), 1);

        // union with a higher-rank piece: only the max-rank component counts
        let top = ConstructibleSet::from_closed(&g, g.full()).unwrap();
        assert_eq!(rirr_rank(&g, &top), RankValue::Finite(1));
        assert_eq!(degree(&g, &top).unwrap(), 1);
        let mixed = top.union(&single);
        assert_eq!(degree(&g, &mixed).unwrap(), 1);
    }

    #[test]
    fn union_rank_is_max() {
        let f = chain_family();
        let y1 = ConstructibleSet::from_closed(&f, 0b001).unwrap();
        let y2 = ConstructibleSet::from_closed(&f, 0b011).unwrap();
        let u = y1.union(&y2);
        assert_eq!(
            rirr_rank(&f, &u),
            rirr_rank(&f, &y1).max(rirr_rank(&f, &y2))
        );
        // rank through pieces agrees with rank through the point set
        assert_eq!(rirr_rank(&f, &u), f.rank_of_subset(u.points()));
    }

    #[test]
    fn boundary_rank_drops() {
        let f = chain_family();
        // Y = X ∖ {1}: closure is X (rank 2), boundary is {1} (rank 0)
        let y = ConstructibleSet::build(&f, &[(f.full(), 0b001)]).unwrap();
        assert!(!y.is_empty());
        let boundary = f.closure(y.points()) & !y.points();
        assert!(f.rank_of_subset(boundary) < rirr_rank(&f, &y));
    }

    #[test]
    fn degree_additivity_on_disjoint_equal_rank() {
        let g = split_family();
        let y1 = ConstructibleSet::from_closed(&g, 0b001).unwrap();
        let y2 = ConstructibleSet::from_closed(&g, 0b010).unwrap();
        assert_eq!(y1.points() & y2.points(), 0);
        assert_eq!(rirr_rank(&g, &y1), rirr_rank(&g, &y2));
        assert_eq!(
            degree(&g, &y1.union(&y2)).unwrap(),
            degree(&g, &y1).unwrap() + degree(&g, &y2).unwrap()
        );
    }

    #[test]
    fn finite_unions_are_intersection_closed() {
        let f = chain_family();
        // closed sets of the generated topology: all unions of members
        let mut unions = std::collections::HashSet::new();
        let members = f.members().to_vec();
        for i in 0..1u32 << members.len() {
            let mut u = 0;
            for (k, &m) in members.iter().enumerate() {
                if i & (1 << k) != 0 {
                    u |= m;
                }
            }
            unions.insert(u);
        }
        for &a in &unions {
            for &b in &unions {
                assert!(unions.contains(&(a & b)));
            }
        }
    }

    #[test]
    fn constructible_normalization() {
        let g = split_family();
        // piece on reducible {1,2} splits into components, empty pieces vanish
        let y = ConstructibleSet::build(&g, &[(0b011, 0b010)]).unwrap();
        // {1,2} ∖ {2} = {1}: only the component {1} survives
        assert_eq!(y.pieces().len(), 1);
        assert_eq!(y.pieces()[0].0, 0b001);
        assert_eq!(y.points(), 0b001);
        // the open constraint must be topology-closed
        assert!(ConstructibleSet::build(&g, &[(0b011, 0b100)]).is_err());
    }
}
