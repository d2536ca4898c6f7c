//! Subset lattice, set partitions, counting sequences and the symmetry group
//! of the n-cube.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest `n` for which [`cube_group`] will materialize the group.
pub const MAX_GROUP_N: usize = 6;

/// A subset of `[n]` stored as a little-endian bitmask: element `i` (1-based)
/// lives in bit `i - 1`.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(pub u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The ground set `[n]`.
    pub fn full(n: usize) -> SubsetMask {
        assert!(n < 32, "ground sets are limited to 31 elements");
        SubsetMask((1u32 << n) - 1)
    }

    /// `{i}` for a 1-based element `i`.
    pub fn singleton(i: usize) -> SubsetMask {
        assert!((1..=32).contains(&i), "elements are 1-based and at most 32");
        SubsetMask(1 << (i - 1))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> SubsetMask {
        elements
            .into_iter()
            .fold(SubsetMask::EMPTY, |acc, i| acc.union(SubsetMask::singleton(i)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= 32 && self.0 & (1 << (i - 1)) != 0
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn minus(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn sym_diff(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 ^ other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: SubsetMask) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest element, 1-based.
    pub fn min_element(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i as usize + 1)
            }
        })
    }

    /// All subsets of `self`, in increasing mask order, `EMPTY` and `self` included.
    pub fn subsets(self) -> impl Iterator<Item = SubsetMask> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(SubsetMask(cur))
        })
    }

    /// Digit string such as `"134"`; the empty set gives `""`.
    pub fn key(self) -> String {
        self.elements().map(|i| i.to_string()).collect()
    }

    /// Parses a digit key (`""` is the empty set). Digits must be strictly
    /// increasing and lie in `1..=n`.
    pub fn parse_key(s: &str, n: usize) -> Result<SubsetMask> {
        let mut mask = SubsetMask::EMPTY;
        let mut last = 0usize;
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("invalid subset key `{s}`")))?
                as usize;
            if d == 0 || d > n {
                return Err(Error::Parse(format!(
                    "subset key `{s}` mentions element {d} outside 1..={n}"
                )));
            }
            if d <= last {
                return Err(Error::Parse(format!(
                    "subset key `{s}` must list elements in increasing order"
                )));
            }
            last = d;
            mask = mask.union(SubsetMask::singleton(d));
        }
        Ok(mask)
    }

    /// Like [`SubsetMask::parse_key`] but also accepts `{}` for the empty set.
    pub fn parse_label(s: &str, n: usize) -> Result<SubsetMask> {
        let s = s.trim();
        if s == "{}" || s == "∅" {
            Ok(SubsetMask::EMPTY)
        } else {
            SubsetMask::parse_key(s, n)
        }
    }

    /// Human-readable label: the digit key, or `{}` for the empty set.
    pub fn label(self) -> String {
        if self.is_empty() {
            "{}".to_string()
        } else {
            self.key()
        }
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({})", self.label())
    }
}

/// All subsets of `[n]` with at least `min_size` elements, ordered by size and
/// then lexicographically by their element lists (`12 < 13 < ... < 123`).
pub fn subsets_by_size(n: usize, min_size: usize) -> Vec<SubsetMask> {
    let mut out: Vec<SubsetMask> = SubsetMask::full(n)
        .subsets()
        .filter(|s| s.len() >= min_size)
        .collect();
    out.sort_by_key(|s| (s.len(), s.elements().collect::<Vec<_>>()));
    out
}

/// A set partition. Blocks are nonempty, pairwise disjoint and sorted by their
/// minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<SubsetMask>,
}

impl SetPartition {
    /// Validates and canonicalizes a list of blocks covering `ground`.
    pub fn new(mut blocks: Vec<SubsetMask>, ground: SubsetMask) -> Result<SetPartition> {
        let mut seen = SubsetMask::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidArgument("blocks overlap".into()));
            }
            seen = seen.union(*b);
        }
        if seen != ground {
            return Err(Error::InvalidArgument(
                "blocks do not cover the ground set".into(),
            ));
        }
        blocks.sort_by_key(|b| b.min_element());
        Ok(SetPartition { blocks })
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground(&self) -> SubsetMask {
        self.blocks
            .iter()
            .fold(SubsetMask::EMPTY, |acc, b| acc.union(*b))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.key()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// Iterator over the set partitions of a ground set, driven by restricted
/// growth strings in lexicographic order.
pub struct SetPartitions {
    elements: Vec<SubsetMask>,
    rgs: Vec<usize>,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let nblocks = self.rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![SubsetMask::EMPTY; nblocks];
        for (e, &b) in self.elements.iter().zip(&self.rgs) {
            blocks[b] = blocks[b].union(*e);
        }
        // rgs blocks are already ordered by minimum element
        let item = SetPartition { blocks };

        // advance: rightmost position that may grow
        let len = self.rgs.len();
        let mut advanced = false;
        for j in (1..len).rev() {
            let prefix_max = self.rgs[..j].iter().copied().max().unwrap_or(0);
            if self.rgs[j] <= prefix_max {
                self.rgs[j] += 1;
                for r in &mut self.rgs[j + 1..] {
                    *r = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.done = true;
        }
        Some(item)
    }
}

/// All set partitions of `ground`, each exactly once. The empty ground set has
/// exactly one partition, the empty one.
pub fn set_partitions(ground: SubsetMask) -> SetPartitions {
    let elements: Vec<SubsetMask> = ground.elements().map(SubsetMask::singleton).collect();
    let rgs = vec![0; elements.len()];
    SetPartitions {
        elements,
        rgs,
        done: false,
    }
}

/// Stirling number of the second kind `S(nu, i)`; zero outside `0 <= i <= nu`.
pub fn stirling2(nu: usize, i: usize) -> u128 {
    if i > nu {
        return 0;
    }
    let mut row = vec![0u128; nu + 1];
    row[0] = 1;
    for m in 1..=nu {
        for k in (1..=m.min(nu)).rev() {
            row[k] = k as u128 * row[k] + row[k - 1];
        }
        row[0] = 0;
    }
    row[i]
}

/// Bell number: total number of set partitions of a `nu`-set.
pub fn bell(nu: usize) -> u128 {
    (0..=nu).map(|i| stirling2(nu, i)).sum()
}

pub fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

/// Number of cyclically ordered set partitions of a `nu`-set into `i` blocks,
/// `(i - 1)! * S(nu, i)`.
pub fn necklace_count(nu: usize, i: usize) -> u128 {
    if i == 0 {
        return 0;
    }
    factorial(i - 1) * stirling2(nu, i)
}

/// An element of the hyperoctahedral group: a coordinate permutation followed
/// by a 0/1 swap on the coordinates in `flip`.
///
/// `perm[i] = j` sends element `i + 1` to element `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flip: SubsetMask,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flip: SubsetMask) -> Result<CubeSymmetry> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation of 0..{n}"
                )));
            }
            seen[p] = true;
        }
        if !flip.is_subset_of(SubsetMask::full(n)) {
            return Err(Error::InvalidArgument(format!(
                "flip {flip} is not a subset of [{n}]"
            )));
        }
        Ok(CubeSymmetry { perm, flip })
    }

    pub fn identity(n: usize) -> CubeSymmetry {
        CubeSymmetry {
            perm: (0..n).collect(),
            flip: SubsetMask::EMPTY,
        }
    }

    /// The pure swap `rho_J`.
    pub fn flip(n: usize, flip: SubsetMask) -> CubeSymmetry {
        CubeSymmetry {
            perm: (0..n).collect(),
            flip,
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn flip_set(&self) -> SubsetMask {
        self.flip
    }

    pub fn permute(&self, s: SubsetMask) -> SubsetMask {
        let mut out = 0u32;
        for i in s.elements() {
            out |= 1 << self.perm[i - 1];
        }
        SubsetMask(out)
    }

    /// `sigma(I) Δ J`.
    pub fn apply(&self, s: SubsetMask) -> SubsetMask {
        self.permute(s).sym_diff(self.flip)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CubeSymmetry) -> CubeSymmetry {
        assert_eq!(self.n(), other.n());
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        CubeSymmetry {
            perm,
            flip: self.permute(other.flip).sym_diff(self.flip),
        }
    }

    pub fn inverse(&self) -> CubeSymmetry {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        let inv = CubeSymmetry {
            perm: inv,
            flip: SubsetMask::EMPTY,
        };
        let flip = inv.permute(self.flip);
        CubeSymmetry {
            perm: inv.perm,
            flip,
        }
    }

    /// Image of every subset of `[n]`, indexed by mask.
    pub fn subset_table(&self) -> Vec<SubsetMask> {
        SubsetMask::full(self.n())
            .subsets()
            .map(|s| self.apply(s))
            .collect()
    }
}

/// All `n! * 2^n` symmetries of the n-cube, permutations in lexicographic
/// order, flips in mask order within each permutation.
pub fn cube_group(n: usize) -> Result<Vec<CubeSymmetry>> {
    if !(1..=MAX_GROUP_N).contains(&n) {
        return Err(Error::Unsupported(format!(
            "cube group is materialized for 1 <= n <= {MAX_GROUP_N}, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(factorial(n) as usize * (1 << n));
    for perm in (0..n).permutations(n) {
        for flip in SubsetMask::full(n).subsets() {
            out.push(CubeSymmetry {
                perm: perm.clone(),
                flip,
            });
        }
    }
    Ok(out)
}

/// `g(I)`: permute first, then take the symmetric difference with the flip set.
pub fn act_on_subset(g: &CubeSymmetry, s: SubsetMask) -> SubsetMask {
    g.apply(s)
}
