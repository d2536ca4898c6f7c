//! Exact arithmetic toolkit for binary `2 x 2 x ... x 2` tensors.
//!
//! Tables are indexed by subsets of `[n] = {1, ..., n}` encoded as bitmasks
//! ([`SubsetMask`]). The crate converts between probability, moment and
//! cumulant coordinates, expands hyperdeterminants in cumulants, builds the
//! cumulant parametrizations of hidden subset models, classifies those models
//! up to the symmetry group of the n-cube, and describes the space of
//! cumulants of probability distributions.
//!
//! Everything except [`cumulant_space::maximize_top_cumulant`] runs in exact
//! rational arithmetic.

pub mod algebra;
pub mod classify;
pub mod combinatorics;
pub mod cumulant_space;
pub mod error;
pub mod fixtures;
pub mod hyperdet;
pub mod models;
pub mod transforms;

pub use algebra::{CommRing, MultilinearPoly, PolyRing, Rational, SparsePoly};
pub use combinatorics::{CubeSymmetry, SetPartition, SubsetMask};
pub use error::{Error, Result};


pub use classify::{Census, Filter};
pub use cumulant_space::CumulantPoint;
pub use models::{CsiSplitModel, HiddenSubsetModel, ModelParametrization};
pub use transforms::{BinaryTable, Coords};
