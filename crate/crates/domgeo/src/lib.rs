//! Nearest dominating point queries.
//!
//! Points live in two paired spaces: a *real* space (1-D or 2-D locations,
//! where distances are measured) and a *feature* space (rating vectors of
//! any dimension, where dominance is evaluated — strictly greater in every
//! coordinate). For each point the task is to find the geometrically
//! closest point among those whose features dominate its features.
//!
//! The crate ships three index-based algorithms plus a quadratic baseline,
//! all guaranteed to produce bit-identical results (distance ties broken by
//! smaller index):
//!
//! * [`engine::nearest_dominator_sweep`] — two priority-search-tree sweeps
//!   for 1-D locations with 2-D features,
//! * [`engine::nearest_dominator_rangetree`] — a multi-level range tree
//!   over feature space whose last-level nodes carry exact planar
//!   nearest-neighbor indexes,
//! * [`engine::nearest_dominator_offline`] — a descending-rating sweep with
//!   insertion-only dynamized nearest-neighbor structures,
//! * [`oracle::brute_nearest_dominator`] — the O(n²) reference.

pub mod dataset;
pub mod delaunay;
pub mod dynamic_nn;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod oracle;
mod parallel;
pub mod predicates;
pub mod pst;
pub mod range_tree;
mod segtree;
pub mod static_nn;

pub use error::{Error, Result};
pub use geometry::{
    dominates, rect_contains, squared_distance, Dataset, FeaturePoint, QueryRect, RealPoint,
};
pub use predicates::{in_circle, orientation};
