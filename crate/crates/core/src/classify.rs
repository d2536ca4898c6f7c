//! Orbit classification of hidden subset models under the symmetry group of
//! the n-cube.
//!
//! A collection `A ⊆ 2^[n]` is stored as a bitmask over subset indices
//! ([`Collection`]), so `n <= 4` fits in a `u64` (in fact 16 bits at n = 4).
//! Orbits are keyed by the numerically smallest image under the group.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::combinatorics::{cube_group, CubeSymmetry, SubsetMask};
use crate::error::{Error, Result};
use crate::models::{hsm_to_csi, model_codimension, CsiSplitModel, HiddenSubsetModel};

/// Largest n whose collection space can be enumerated.
pub const MAX_CLASSIFY_N: usize = 4;

/// Bit `I` set iff subset `I` belongs to the collection.
pub type Collection = u64;

pub fn is_nondegenerate(h: &HiddenSubsetModel) -> bool {
    (1..=h.n()).all(|i| {
        h.subsets().iter().any(|s| s.contains(i)) && h.subsets().iter().any(|s| !s.contains(i))
    })
}

pub fn satisfies_a1_a2(c: &CsiSplitModel) -> bool {
    c.satisfies_a1() && c.satisfies_a2()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    None,
    Nondegenerate,
    A1A2,
}

impl std::str::FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Filter> {
        match s {
            "none" | "all" => Ok(Filter::None),
            "nondeg" => Ok(Filter::Nondegenerate),
            "a1a2" => Ok(Filter::A1A2),
            other => Err(Error::Parse(format!("unknown filter `{other}`"))),
        }
    }
}

impl std::fmt::Display for Filter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Filter::None => "none",
            Filter::Nondegenerate => "nondeg",
            Filter::A1A2 => "a1a2",
        })
    }
}

pub fn to_collection(h: &HiddenSubsetModel) -> Collection {
    h.subsets().iter().fold(0, |acc, s| acc | 1 << s.index())
}

/// The model whose subsets are the members of `c`, in increasing mask order.
pub fn from_collection(n: usize, c: Collection) -> Result<HiddenSubsetModel> {
    let subsets = (0..1u32 << n).filter(|&i| c >> i & 1 == 1).map(SubsetMask).collect();
    HiddenSubsetModel::new(n, subsets)
}

/// The group acting on collections through precomputed byte lookup tables.
struct CollectionAction {
    n: usize,
    // per group element, per input byte position, the image bits of each byte value
    tables: Vec<Vec<[Collection; 256]>>,
}

impl CollectionAction {
    fn new(n: usize) -> Result<CollectionAction> {
        let group = cube_group(n)?;
        let bytes = ((1usize << n) + 7) / 8;
        let tables = group
            .iter()
            .map(|g| {
                let image = g.subset_table();
                (0..bytes)
                    .map(|b| {
                        let mut t = [0; 256];
                        for (v, slot) in t.iter_mut().enumerate() {
                            for bit in 0..8 {
                                let idx = 8 * b + bit;
                                if v >> bit & 1 == 1 && idx < image.len() {
                                    *slot |= 1 << image[idx].index();
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Ok(CollectionAction { n, tables })
    }

    fn apply(&self, g: usize, c: Collection) -> Collection {
        self.tables[g]
            .iter()
            .enumerate()
            .fold(0, |acc, (b, t)| acc | t[(c >> (8 * b) & 0xff) as usize])
    }

    fn images(&self, c: Collection) -> impl Iterator<Item = Collection> + '_ {
        (0..self.tables.len()).map(move |g| self.apply(g, c))
    }

    fn canonical_key(&self, c: Collection) -> Collection {
        self.images(c).min().unwrap_or(c)
    }
}

/// Image of a model under one symmetry, subsets in the original order.
pub fn act_on_model(g: &CubeSymmetry, h: &HiddenSubsetModel) -> Result<HiddenSubsetModel> {
    if g.n() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), found: g.n() });
    }
    HiddenSubsetModel::new(h.n(), h.subsets().iter().map(|&s| g.apply(s)).collect())
}

/// Smallest collection (as a bitmask over subset indices) in the orbit of `h`,
/// with its subsets sorted by mask. Equal for two models iff they lie in one orbit.
pub fn canonical_form(h: &HiddenSubsetModel) -> Result<HiddenSubsetModel> {
    if h.n() > 5 {
        return Err(Error::Unsupported(format!("canonical forms for n = {}", h.n())));
    }
    let action = CollectionAction::new(h.n())?;
    from_collection(h.n(), action.canonical_key(to_collection(h)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEntry {
    pub representative: HiddenSubsetModel,
    pub orbit_size: usize,
    pub codimension: Option<usize>,
}

impl OrbitEntry {
    pub fn m(&self) -> usize {
        self.representative.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub n: usize,
    pub filter: Filter,
    pub m_range: RangeInclusive<usize>,
    /// Orbit representatives sorted by `(m, canonical key)`.
    pub orbits: Vec<OrbitEntry>,
    /// Number of filtered collections before taking orbits.
    pub collections: usize,
}

impl Census {
    /// Orbit counts for `m = 1 ..= 2^n`.
    pub fn counts_by_m(&self) -> Vec<usize> {
        let mut counts = vec![0; 1 << self.n];
        for o in &self.orbits {
            counts[o.m() - 1] += 1;
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.orbits.len()
    }

    /// Fills in `model_codimension` for every representative with at most `max_m` subsets.
    pub fn with_codimensions(mut self, max_m: usize, seed: u64) -> Result<Census> {
        let codims: Vec<Option<usize>> = self
            .orbits
            .par_iter()
            .map(|o| {
                if o.m() <= max_m {
                    model_codimension(&o.representative, seed).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        for (o, c) in self.orbits.iter_mut().zip(codims) {
            o.codimension = c;
        }
        Ok(self)
    }
}

fn passes(n: usize, c: Collection, filter: Filter) -> bool {
    let h = match from_collection(n, c) {
        Ok(h) => h,
        Err(_) => return false,
    };
    match filter {
        Filter::None => true,
        Filter::Nondegenerate => is_nondegenerate(&h),
        Filter::A1A2 => satisfies_a1_a2(&hsm_to_csi(&h)),
    }
}

/// Enumerates every nonempty collection `A ⊆ 2^[n]` with `|A|` in `m_range`,
/// applies `filter` and groups the survivors into orbits.
pub fn classify(n: usize, m_range: Option<RangeInclusive<usize>>, filter: Filter) -> Result<Census> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > MAX_CLASSIFY_N {
        return Err(Error::Unsupported(format!(
            "classification for n = {n} (2^{} collections)",
            1usize << n
        )));
    }
    let m_range = m_range.unwrap_or(1..=1 << n);
    let action = CollectionAction::new(n)?;
    let count: Collection = 1 << (1 << n);
    let keys: Vec<Option<Collection>> = (1..count)
        .into_par_iter()
        .map(|c| {
            let m = c.count_ones() as usize;
            (m_range.contains(&m) && passes(n, c, filter)).then(|| action.canonical_key(c))
        })
        .collect();
    let collections = keys.iter().flatten().count();
    let mut reps: Vec<Collection> = keys.into_iter().flatten().collect();
    reps.sort_unstable_by_key(|&c| (c.count_ones(), c));
    reps.dedup();
    let orbits = reps
        .into_iter()
        .map(|rep| {
            let mut images: Vec<Collection> = action.images(rep).collect();
            images.sort_unstable();
            images.dedup();
            Ok(OrbitEntry {
                representative: from_collection(action.n, rep)?,
                orbit_size: images.len(),
                codimension: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Census { n, filter, m_range, orbits, collections })
}
