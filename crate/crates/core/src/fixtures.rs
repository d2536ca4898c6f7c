//! Published generator lists and the catalogue of small split models, kept as
//! source strings so they can be parsed into any cumulant ring.

use std::sync::Arc;

use crate::algebra::{PolyRing, SparsePoly};
use crate::error::Result;

/// Binomial quadrics vanishing on the secant variety, `n = 4`.
pub const SECANT_QUADRICS_N4: [&str; 10] = [
    "k12*k34 - k14*k23",
    "k13*k24 - k14*k23",
    "k12*k134 - k14*k123",
    "k13*k124 - k14*k123",
    "k12*k234 - k24*k123",
    "k23*k124 - k24*k123",
    "k13*k234 - k34*k123",
    "k23*k134 - k34*k123",
    "k14*k234 - k34*k124",
    "k24*k134 - k34*k124",
];

/// The quadric `L` shared by the secant cubics.
pub const SECANT_L: &str = "k1234 + 6*k14*k23";

/// The bracketed cubics `c` of the secant cubics `k_ij L - c`, as printed.
pub const SECANT_CUBIC_BRACKETS_N4: [(&str, &str); 6] = [
    ("k12", "k123*k124 + 4*k12*k14*k23"),
    ("k13", "k123*k134 + 4*k13*k14*k23"),
    ("k14", "k124*k134 + 4*k14*k14*k23"),
    ("k23", "k123*k234 + 4*k23*k14*k23"),
    ("k24", "k124*k234 + 4*k24*k14*k23"),
    ("k34", "k134*k234 + 4*k34*k14*k23"),
];

/// `2x2x2` hyperdeterminants of the four three-way margins.
pub const SUBTENSOR_HYPERDETS_N4: [&str; 4] = [
    "k234^2 + 4*k23*k24*k34",
    "k134^2 + 4*k13*k14*k34",
    "k124^2 + 4*k12*k14*k24",
    "k123^2 + 4*k12*k13*k23",
];

/// Relations among the cumulants of principal minors of a symmetric `4x4` matrix.
pub const PRINCIPAL_MINOR_GENERATORS_N4: [&str; 20] = [
    "4*k12*k13*k23 + k123^2",
    "4*k12*k14*k24 + k124^2",
    "4*k13*k14*k34 + k134^2",
    "4*k23*k24*k34 + k234^2",
    "4*k12*k13*k14*k234 + k123*k124*k134",
    "4*k12*k23*k24*k134 + k123*k124*k234",
    "4*k13*k23*k34*k124 + k123*k134*k234",
    "4*k14*k24*k34*k123 + k124*k134*k234",
    "2*k12*k13*k234 + 2*k12*k23*k134 + 2*k13*k23*k124 + k123*k1234",
    "2*k12*k14*k234 + 2*k12*k24*k134 + 2*k14*k24*k123 + k124*k1234",
    "2*k13*k14*k234 + 2*k13*k34*k124 + 2*k14*k34*k123 + k134*k1234",
    "2*k23*k24*k134 + 2*k23*k34*k124 + 2*k24*k34*k123 + k234*k1234",
    "-2*k12*k13*k14*k1234 + k12*k13*k124*k134 + k12*k14*k123*k134 + k13*k14*k123*k124",
    "-2*k12*k23*k24*k1234 + k12*k23*k124*k234 + k12*k24*k123*k234 + k23*k24*k123*k124",
    "-2*k13*k23*k34*k1234 + k13*k23*k134*k234 + k13*k34*k123*k234 + k23*k34*k123*k134",
    "-2*k14*k24*k34*k1234 + k14*k24*k134*k234 + k14*k34*k124*k234 + k24*k34*k124*k134",
    "k14*k123*k234 - k23*k124*k134",
    "k13*k124*k234 - k24*k123*k134",
    "k12*k134*k234 - k34*k123*k124",
    "4*(k12*k13*k24*k34 + k12*k14*k23*k34 + k13*k14*k23*k24) \
     - 2*(k14*k123*k234 + k24*k123*k134 + k34*k123*k124) - k1234^2",
];

/// Printed ideal of the split model `{{}, 12, 34, 1234}`.
pub const SPLIT_MODEL_EXAMPLE_GENERATORS: [&str; 9] = [
    "k13*k24 - k14*k23",
    "k13*k124 - k14*k123",
    "k13*k234 - k23*k134",
    "k14*k234 - k24*k134",
    "k23*k124 - k24*k123",
    "k23*k1234 - k234*k123 + 2*k14*k23^2",
    "k13*k1234 - k134*k123 + 2*k14*k13*k23",
    "k23*k1234 - k234*k124 + 2*k14*k24*k23",
    "k14*k1234 - k134*k124 + 2*k14^2*k23",
];

/// Hidden subsets of the split model with printed ideal.
pub const SPLIT_MODEL_EXAMPLE_SUBSETS: &str = "{},12,34,1234";

/// One row of the catalogue of non-degenerate split models on four variables
/// with at most four hidden classes: hidden subsets, split form, codimension.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SplitModelRow {
    pub subsets: &'static str,
    pub splits: &'static str,
    pub codim: usize,
}

const fn row(subsets: &'static str, splits: &'static str, codim: usize) -> SplitModelRow {
    SplitModelRow { subsets, splits, codim }
}

pub const SPLIT_MODELS_N4: [SplitModelRow; 17] = [
    row("{},12,13,14", "1|234,2|134,3|124,4|123", 7),
    row("{},12,13,4", "14|23,2|134,3|124,4|123", 6),
    row("{},1,2,34", "2|134,3|124,4|123,4|123", 6),
    row("{},1,23,234", "2|134,34|12,34|12,4|123", 6),
    row("{},1,234,1234", "24|13,34|12,34|12,34|123", 6),
    row("{},1,2,134", "13|24,3|124,4|123,4|123", 5),
    row("{},1,12,234", "23|14,34|12,4|123,4|123", 5),
    row("{},1,123,234", "23|14,34|12,34|12,4|123", 5),
    row("{},1,23,124", "24|13,34|12,3|124,4|123", 5),
    row("{},12,134,234", "23|14,24|13,34|12,34|12", 5),
    row("{},12,13,24", "14|23,13|24,3|124,4|123", 4),
    row("{},13,23,124", "13|24,12|34,14|23,4|123", 4),
    row("{},12,34,1234", "24|13,24|13,34|12,34|12", 4),
    row("{},1,234", "2|13,3|12,3|12,3|12", 6),
    row("{},12,134", "1|23,2|13,3|12,3|12", 6),
    row("{},12,34", "2|13,2|13,3|12,3|12", 5),
    row("{},1234", "1|2,1|2,1|2,1|2", 6),
];

/// Per-`m` counts of split models on four variables satisfying (A1), (A2)
/// up to symmetry, `m = 1..=16`.
pub const SPLIT_MODEL_COUNTS_N4: [usize; 16] = [0, 1, 3, 13, 24, 47, 55, 73, 56, 50, 27, 19, 6, 4, 1, 1];

pub fn parse_all(ring: &Arc<PolyRing>, sources: &[&str]) -> Result<Vec<SparsePoly>> {
    sources.iter().map(|s| ring.parse(s)).collect()
}

/// The six secant cubics `k_ij L - (...)`.
pub fn secant_cubics_n4(ring: &Arc<PolyRing>) -> Result<Vec<SparsePoly>> {
    let l = ring.parse(SECANT_L)?;
    SECANT_CUBIC_BRACKETS_N4
        .iter()
        .map(|(v, c)| Ok(ring.var(v)?.mul(&l).sub(&ring.parse(c)?)))
        .collect()
}

/// Ten quadrics followed by six cubics.
pub fn secant_generators_n4(ring: &Arc<PolyRing>) -> Result<Vec<SparsePoly>> {
    let mut out = parse_all(ring, &SECANT_QUADRICS_N4)?;
    out.extend(secant_cubics_n4(ring)?);
    Ok(out)
}

/// The 21 listed generators of the tangential variety for `n = 4`: ten
/// quadrics, `L`, the six bracketed cubics and four subtensor hyperdeterminants.
pub fn tangential_generators_n4(ring: &Arc<PolyRing>) -> Result<Vec<SparsePoly>> {
    let mut out = parse_all(ring, &SECANT_QUADRICS_N4)?;
    out.push(ring.parse(SECANT_L)?);
    for (_, c) in SECANT_CUBIC_BRACKETS_N4 {
        out.push(ring.parse(c)?);
    }
    out.extend(parse_all(ring, &SUBTENSOR_HYPERDETS_N4)?);
    Ok(out)
}
