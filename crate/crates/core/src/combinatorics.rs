//! Subset families over the encoder index set `{1..L}`.
//!
//! Every family is returned in lexicographic order of the sorted member
//! lists, which is also the `Ord` of [`EncoderSet`].

use std::fmt;

use itertools::Itertools;

use crate::error::{invalid, Result};

/// Largest ground set for which full subset families may be enumerated.
pub const MAX_ENUMERATION: usize = 24;

/// A subset of encoders `{1..L}`: sorted members plus a bit mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncoderSet {
    members: Vec<usize>,
    ground: usize,
    mask: Vec<u64>,
}

fn mask_for(members: &[usize], ground: usize) -> Vec<u64> {
    let mut mask = vec![0u64; ground.div_ceil(64).max(1)];
    for &m in members {
        mask[(m - 1) / 64] |= 1 << ((m - 1) % 64);
    }
    mask
}

impl EncoderSet {
    /// Builds a set from arbitrary (possibly unsorted) indices in `1..=ground`.
    pub fn new(members: impl IntoIterator<Item = usize>, ground: usize) -> Result<Self> {
        if ground == 0 {
            return invalid("ground set size must be positive");
        }
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > ground) {
            return invalid(format!("encoder index {bad} outside 1..={ground}"));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return invalid("repeated encoder index");
        }
        Ok(Self::from_sorted(members, ground))
    }

    pub(crate) fn from_sorted(members: Vec<usize>, ground: usize) -> Self {
        let mask = mask_for(&members, ground);
        Self { members, ground, mask }
    }

    pub fn empty(ground: usize) -> Self {
        Self::from_sorted(Vec::new(), ground)
    }

    pub fn full(ground: usize) -> Self {
        Self::from_sorted((1..=ground).collect(), ground)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        index >= 1 && index <= self.ground && self.mask[(index - 1) / 64] & (1 << ((index - 1) % 64)) != 0
    }

    pub fn is_subset_of(&self, other: &EncoderSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &EncoderSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & b == 0)
    }

    /// The set with `index` removed (unchanged if absent).
    pub fn without(&self, index: usize) -> EncoderSet {
        Self::from_sorted(self.members.iter().copied().filter(|&m| m != index).collect(), self.ground)
    }

    /// The set with `index` added.
    pub fn with(&self, index: usize) -> EncoderSet {
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&index) {
            members.insert(pos, index);
        }
        Self::from_sorted(members, self.ground)
    }

    pub fn union(&self, other: &EncoderSet) -> EncoderSet {
        let members = self.members.iter().chain(&other.members).copied().sorted().dedup().collect();
        Self::from_sorted(members, self.ground.max(other.ground))
    }

    pub fn complement(&self) -> EncoderSet {
        Self::from_sorted((1..=self.ground).filter(|&m| !self.contains(m)).collect(), self.ground)
    }

    /// Bit mask restricted to the first 64 encoders; used for table lookups
    /// on small ground sets.
    pub fn small_mask(&self) -> u64 {
        self.mask[0]
    }

    /// Comma-joined member list, e.g. `1,3`.
    pub fn to_text(&self) -> String {
        self.members.iter().join(",")
    }

    pub fn parse_text(text: &str, ground: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "-" {
            return Ok(Self::empty(ground));
        }
        let mut members = Vec::new();
        for part in text.split(',') {
            match part.trim().parse::<usize>() {
                Ok(v) => members.push(v),
                Err(_) => return Err(crate::Error::Format(format!("bad encoder index {part:?}"))),
            }
        }
        Self::new(members, ground)
    }
}

impl fmt::Debug for EncoderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.iter().join(","))
    }
}

impl fmt::Display for EncoderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The window `{⟨start⟩, …, ⟨start+length−1⟩}` on a circle of `ground` encoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlidingWindow {
    pub start: usize,
    pub length: usize,
    pub ground: usize,
}

impl SlidingWindow {
    pub fn to_set(&self) -> EncoderSet {
        let members = (0..self.length).map(|k| wrap(self.start + k, self.ground)).sorted().collect();
        EncoderSet::from_sorted(members, self.ground)
    }
}

/// 1-based wrap: `⟨l⟩ = ((l − 1) mod L) + 1`.
pub fn wrap(index: usize, ground: usize) -> usize {
    (index + ground - 1) % ground + 1
}

fn check_level(ground: usize, size: usize) -> Result<()> {
    if ground == 0 || ground > MAX_ENUMERATION {
        return invalid(format!("L = {ground} outside 1..={MAX_ENUMERATION}"));
    }
    if size == 0 || size > ground {
        return invalid(format!("α = {size} outside 1..={ground}"));
    }
    Ok(())
}

/// `Ω_L^(α)`: all `α`-subsets of `{1..L}` in lexicographic order.
pub fn subsets_of_size(ground: usize, size: usize) -> Result<Vec<EncoderSet>> {
    check_level(ground, size)?;
    Ok(combinations_of(&(1..=ground).collect::<Vec<_>>(), size, ground))
}

/// All `size`-subsets of the given labels (size 0 yields the empty set).
pub(crate) fn combinations_of(labels: &[usize], size: usize, ground: usize) -> Vec<EncoderSet> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    sorted.into_iter().combinations(size).map(|members| EncoderSet::from_sorted(members, ground)).collect()
}

/// `W_l^(α)` as a set.
pub fn window(start: usize, length: usize, ground: usize) -> Result<EncoderSet> {
    if ground == 0 || start == 0 || start > ground || length == 0 || length > ground {
        return invalid(format!("window ({start}, {length}) invalid for L = {ground}"));
    }
    Ok(SlidingWindow { start, length, ground }.to_set())
}

/// Subsets of `U` with one element removed, in lexicographic order.
pub fn children(set: &EncoderSet) -> Result<Vec<EncoderSet>> {
    if set.len() < 2 {
        return invalid(format!("{set} has fewer than two elements"));
    }
    Ok(set.members().iter().rev().map(|&m| set.without(m)).collect())
}

/// Supersets of `V` with one extra element, in lexicographic order.
pub fn parents(set: &EncoderSet) -> Result<Vec<EncoderSet>> {
    if set.len() >= set.ground_size() {
        return invalid(format!("{set} is already the full ground set"));
    }
    let mut out: Vec<EncoderSet> = (1..=set.ground_size()).filter(|&m| !set.contains(m)).map(|m| set.with(m)).collect();
    out.sort();
    Ok(out)
}
