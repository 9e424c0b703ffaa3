//! Immutable exact nearest-site indexes over 1-D and 2-D locations.
//!
//! The builder inspects the site set and picks the cheapest representation
//! that answers queries exactly: a sorted coordinate array for 1-D, a sorted
//! site list for planar inputs that are too degenerate to triangulate, and a
//! Delaunay triangulation otherwise. All three agree bit-for-bit with a
//! linear scan minimizing (squared distance, id).

use std::collections::HashSet;

use crate::delaunay::DelaunayTriangulation;
use crate::error::{Error, Result};
use crate::geometry::{sq_dist_slices, RealPoint};
use crate::predicates::orient2d_sign;

/// Which representation [`StaticNNIndex::build`] chose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// 1-D sites, sorted by coordinate.
    Line,
    /// 2-D sites that admit no triangulation (≤ 2 distinct, or collinear),
    /// kept as a list sorted along their common line.
    Degenerate,
    /// General-position 2-D sites behind a Delaunay triangulation.
    Planar,
}

#[derive(Debug, Clone)]
enum Rep {
    Line { coords: Vec<f64>, ids: Vec<u32> },
    Degenerate { pts: Vec<([f64; 2], u32)> },
    Planar(DelaunayTriangulation),
}

/// Immutable nearest-site index; see the module docs for the exactness
/// contract.
#[derive(Debug, Clone)]
pub struct StaticNNIndex {
    d_real: usize,
    n_sites: usize,
    rep: Rep,
}

/// Nearest entry of a 1-D site array under the (squared distance, id) order.
///
/// Precondition: entries sorted by (coordinate, id); duplicates allowed.
/// Scans outward from the insertion point one equal-coordinate group at a
/// time. On each side the rounded squared distance is a monotone rounding of
/// a monotone true value, hence nondecreasing, so the scan stops at the
/// first group strictly worse than the running best; groups tying it are
/// checked for a smaller id.
pub(crate) fn line_nearest(coords: &[f64], ids: &[u32], q: f64) -> (u32, f64) {
    debug_assert_eq!(coords.len(), ids.len());
    debug_assert!(!coords.is_empty());
    let pos = coords.partition_point(|&c| c < q);
    let mut best: Option<(f64, u32)> = None;

    let mut i = pos;
    while i < coords.len() {
        let c = coords[i];
        let cand = (sq_dist_slices(&[c], &[q]), ids[i]);
        match best {
            None => best = Some(cand),
            Some(b) => {
                if cand.0 > b.0 {
                    break;
                }
                if cand.0 < b.0 || cand.1 < b.1 {
                    best = Some(cand);
                }
            }
        }
        i += coords[i..].partition_point(|&x| x <= c);
    }

    let mut j = pos;
    while j > 0 {
        let c = coords[j - 1];
        let start = coords[..j].partition_point(|&x| x < c);
        let cand = (sq_dist_slices(&[c], &[q]), ids[start]);
        match best {
            None => best = Some(cand),
            Some(b) => {
                if cand.0 > b.0 {
                    break;
                }
                if cand.0 < b.0 || cand.1 < b.1 {
                    best = Some(cand);
                }
            }
        }
        j = start;
    }

    let (sq, id) = best.expect("at least one side of the insertion point is non-empty");
    (id, sq)
}

impl StaticNNIndex {
    /// Builds an index over `(location, id)` sites.
    ///
    /// Errors on an empty set, mixed dimensions, unsupported dimensions, or
    /// repeated ids. Duplicate coordinates are fine: queries landing on them
    /// report the smallest id.
    pub fn build(sites: &[(RealPoint, u32)]) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::EmptyInput("nearest-site index"));
        }
        let d = sites[0].0.dim();
        for (p, _) in sites {
            if p.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.dim(),
                });
            }
        }
        let mut seen = HashSet::with_capacity(sites.len());
        for &(_, id) in sites {
            if !seen.insert(id) {
                return Err(Error::DuplicateId(id));
            }
        }
        match d {
            1 => {
                let mut pairs: Vec<(f64, u32)> = sites
                    .iter()
                    .map(|(p, id)| (p.coords()[0], *id))
                    .collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                Ok(Self {
                    d_real: 1,
                    n_sites: sites.len(),
                    rep: Rep::Line {
                        coords: pairs.iter().map(|p| p.0).collect(),
                        ids: pairs.iter().map(|p| p.1).collect(),
                    },
                })
            }
            2 => {
                let pts = sites
                    .iter()
                    .map(|(p, id)| ([p.coords()[0], p.coords()[1]], *id))
                    .collect();
                Ok(Self::from_sites_2d(pts, sites.len()))
            }
            other => Err(Error::UnsupportedRealDimension(other)),
        }
    }

    /// 2-D construction over raw coordinate pairs; ids must be distinct and
    /// coordinates free of NaN/±∞/-0.0 (guaranteed by `RealPoint`).
    pub(crate) fn from_sites_2d(mut pts: Vec<([f64; 2], u32)>, n_sites: usize) -> Self {
        debug_assert!(!pts.is_empty());
        pts.sort_by(|a, b| {
            a.0[0]
                .total_cmp(&b.0[0])
                .then(a.0[1].total_cmp(&b.0[1]))
                .then(a.1.cmp(&b.1))
        });
        // One vertex per distinct coordinate; the smallest id represents the
        // group, which is exactly the tie rule's pick among zero-distance
        // duplicates.
        pts.dedup_by(|a, b| a.0 == b.0);
        let collinear = pts.len() < 3
            || pts[2..]
                .iter()
                .all(|p| orient2d_sign(pts[0].0, pts[1].0, p.0) == 0);
        let rep = if collinear {
            // Lexicographic (x, y) order is monotone along any fixed line,
            // so the list is "sorted along the line" without computing
            // projections.
            Rep::Degenerate { pts }
        } else {
            let (verts, ids): (Vec<_>, Vec<_>) = pts.into_iter().unzip();
            Rep::Planar(DelaunayTriangulation::build(verts, ids))
        };
        Self {
            d_real: 2,
            n_sites,
            rep,
        }
    }

    pub fn kind(&self) -> IndexKind {
        match self.rep {
            Rep::Line { .. } => IndexKind::Line,
            Rep::Degenerate { .. } => IndexKind::Degenerate,
            Rep::Planar(_) => IndexKind::Planar,
        }
    }

    /// Number of sites supplied at build time (duplicates included).
    pub fn site_count(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.d_real
    }

    /// The triangulation backing a planar index, if that is the chosen
    /// representation.
    pub fn triangulation(&self) -> Option<&DelaunayTriangulation> {
        match &self.rep {
            Rep::Planar(t) => Some(t),
            _ => None,
        }
    }

    /// Site minimizing (squared distance to `query`, id).
    pub fn nearest_site(&self, query: &RealPoint) -> Result<(u32, f64)> {
        if query.dim() != self.d_real {
            return Err(Error::DimensionMismatch {
                expected: self.d_real,
                got: query.dim(),
            });
        }
        Ok(self.nearest_slice(query.coords()))
    }

    /// Internal query entry point over a raw coordinate slice of the right
    /// dimension.
    pub(crate) fn nearest_slice(&self, q: &[f64]) -> (u32, f64) {
        debug_assert_eq!(q.len(), self.d_real);
        match &self.rep {
            Rep::Line { coords, ids } => line_nearest(coords, ids, q[0]),
            Rep::Degenerate { pts } => {
                let mut best = (sq_dist_slices(&pts[0].0, q), pts[0].1);
                for (c, id) in &pts[1..] {
                    let cand = (sq_dist_slices(c, q), *id);
                    if cand.0 < best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                        best = cand;
                    }
                }
                (best.1, best.0)
            }
            Rep::Planar(t) => t.nearest(q),
        }
    }
}
