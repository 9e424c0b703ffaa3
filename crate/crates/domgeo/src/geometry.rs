//! Core value types: points in real (location) space, points in feature
//! (rating) space, axis-aligned query rectangles, and paired datasets.

use std::ops::Bound;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Highest supported real-space dimension.
pub const MAX_REAL_DIM: usize = 2;

fn check_finite(coords: &[f64]) -> Result<()> {
    for &c in coords {
        if !c.is_finite() {
            return Err(Error::NonFiniteCoordinate(format!("{c}")));
        }
    }
    Ok(())
}

/// Collapses -0.0 to +0.0 so that numerically equal coordinates are also
/// bitwise equal; deduplication and total-order sorting then agree with
/// ordinary `==` on coordinates.
fn normalize_zeros(coords: &mut [f64]) {
    for c in coords.iter_mut() {
        if *c == 0.0 {
            *c = 0.0;
        }
    }
}

/// A location in real space (1-D or 2-D), the space distances live in.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoint {
    coords: SmallVec<[f64; 2]>,
}

impl RealPoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_REAL_DIM {
            return Err(Error::UnsupportedRealDimension(coords.len()));
        }
        check_finite(coords)?;
        let mut coords = SmallVec::from_slice(coords);
        normalize_zeros(&mut coords);
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A rating vector in feature space (any dimension ≥ 1), the space
/// dominance lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePoint {
    coords: SmallVec<[f64; 4]>,
}

impl FeaturePoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::UnsupportedFeatureDimension(0));
        }
        check_finite(coords)?;
        let mut coords = SmallVec::from_slice(coords);
        normalize_zeros(&mut coords);
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Squared Euclidean distance over raw coordinate slices.
///
/// Every distance comparison in the crate goes through this one function so
/// that candidates are ranked by bit-identical values everywhere.
#[inline]
pub(crate) fn sq_dist_slices(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Squared Euclidean distance between two locations.
///
/// All candidate ranking is done on squared distances; no square root ever
/// enters a comparison.
pub fn squared_distance(a: &RealPoint, b: &RealPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(sq_dist_slices(a.coords(), b.coords()))
}

#[inline]
pub(crate) fn dominates_slices(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(&x, &y)| x > y)
}

/// Strict dominance: true iff `a` is strictly greater than `b` in every
/// coordinate. No point dominates itself.
pub fn dominates(a: &FeaturePoint, b: &FeaturePoint) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(dominates_slices(a.coords(), b.coords()))
}

/// An axis-aligned box in feature space. Each dimension carries a lower and
/// an upper [`Bound`]; `Unbounded` stands for −∞ below and +∞ above and
/// finite bound values must be finite floats.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRect {
    dims: Vec<(Bound<f64>, Bound<f64>)>,
}

fn bound_value(b: &Bound<f64>) -> Option<f64> {
    match *b {
        Bound::Included(v) | Bound::Excluded(v) => Some(v),
        Bound::Unbounded => None,
    }
}

impl QueryRect {
    pub fn new(dims: Vec<(Bound<f64>, Bound<f64>)>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidRect("zero dimensions".into()));
        }
        for (k, (lo, hi)) in dims.iter().enumerate() {
            for b in [lo, hi] {
                if let Some(v) = bound_value(b) {
                    if !v.is_finite() {
                        return Err(Error::InvalidRect(format!(
                            "non-finite bound {v} in dimension {k}; use Unbounded for infinite sides"
                        )));
                    }
                }
            }
            if let (Some(l), Some(h)) = (bound_value(lo), bound_value(hi)) {
                if l > h {
                    return Err(Error::InvalidRect(format!(
                        "lower bound {l} exceeds upper bound {h} in dimension {k}"
                    )));
                }
                let both_inclusive =
                    matches!(lo, Bound::Included(_)) && matches!(hi, Bound::Included(_));
                if l == h && !both_inclusive {
                    return Err(Error::InvalidRect(format!(
                        "degenerate interval at {l} in dimension {k} needs inclusive bounds on both sides"
                    )));
                }
            }
        }
        Ok(Self { dims })
    }

    /// The whole feature space: every dimension unbounded on both sides.
    pub fn full_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRect("zero dimensions".into()));
        }
        Ok(Self {
            dims: vec![(Bound::Unbounded, Bound::Unbounded); dim],
        })
    }

    /// The open upper quadrant of `q`: everything that strictly dominates
    /// `q`, i.e. (q₁, ∞) × … × (q_d, ∞).
    pub fn dominating_quadrant(q: &FeaturePoint) -> Self {
        Self {
            dims: q
                .coords()
                .iter()
                .map(|&c| (Bound::Excluded(c), Bound::Unbounded))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn bounds(&self, k: usize) -> (Bound<f64>, Bound<f64>) {
        self.dims[k]
    }

    /// Membership test with the per-side inclusivity flags applied.
    pub fn contains(&self, q: &FeaturePoint) -> Result<bool> {
        if self.dim() != q.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: q.dim(),
            });
        }
        for (&c, (lo, hi)) in q.coords().iter().zip(&self.dims) {
            let lo_ok = match *lo {
                Bound::Unbounded => true,
                Bound::Included(v) => c >= v,
                Bound::Excluded(v) => c > v,
            };
            let hi_ok = match *hi {
                Bound::Unbounded => true,
                Bound::Included(v) => c <= v,
                Bound::Excluded(v) => c < v,
            };
            if !(lo_ok && hi_ok) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Convenience alias for [`QueryRect::contains`].
pub fn rect_contains(r: &QueryRect, q: &FeaturePoint) -> Result<bool> {
    r.contains(q)
}

/// A paired input instance: location `p_i` and rating vector `q_i` share the
/// index `i`, and indices are stable across every algorithm in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    reals: Vec<RealPoint>,
    feats: Vec<FeaturePoint>,
}

impl Dataset {
    pub fn new(reals: Vec<RealPoint>, feats: Vec<FeaturePoint>) -> Result<Self> {
        if reals.len() != feats.len() {
            return Err(Error::PointCountMismatch {
                reals: reals.len(),
                feats: feats.len(),
            });
        }
        if reals.is_empty() {
            return Err(Error::EmptyInput("dataset has no points"));
        }
        let d_real = reals[0].dim();
        let d_feat = feats[0].dim();
        for p in &reals {
            if p.dim() != d_real {
                return Err(Error::DimensionMismatch {
                    expected: d_real,
                    got: p.dim(),
                });
            }
        }
        for q in &feats {
            if q.dim() != d_feat {
                return Err(Error::DimensionMismatch {
                    expected: d_feat,
                    got: q.dim(),
                });
            }
        }
        Ok(Self { reals, feats })
    }

    /// Builds a dataset from flat coordinate rows.
    pub fn from_rows(reals: &[Vec<f64>], feats: &[Vec<f64>]) -> Result<Self> {
        let rp = reals
            .iter()
            .map(|r| RealPoint::new(r))
            .collect::<Result<Vec<_>>>()?;
        let fp = feats
            .iter()
            .map(|f| FeaturePoint::new(f))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rp, fp)
    }

    pub fn len(&self) -> usize {
        self.reals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reals.is_empty()
    }

    pub fn d_real(&self) -> usize {
        self.reals[0].dim()
    }

    pub fn d_feat(&self) -> usize {
        self.feats[0].dim()
    }

    pub fn real(&self, i: usize) -> &RealPoint {
        &self.reals[i]
    }

    pub fn feat(&self, i: usize) -> &FeaturePoint {
        &self.feats[i]
    }

    pub fn reals(&self) -> &[RealPoint] {
        &self.reals
    }

    pub fn feats(&self) -> &[FeaturePoint] {
        &self.feats
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(c: &[f64]) -> RealPoint {
        RealPoint::new(c).unwrap()
    }

    fn fp(c: &[f64]) -> FeaturePoint {
        FeaturePoint::new(c).unwrap()
    }

    #[test]
    fn squared_distance_basics() {
        assert_eq!(squared_distance(&rp(&[0.0]), &rp(&[3.0])).unwrap(), 9.0);
        assert_eq!(
            squared_distance(&rp(&[0.0, 0.0]), &rp(&[3.0, 4.0])).unwrap(),
            25.0
        );
        assert_eq!(
            squared_distance(&rp(&[1.5, -2.0]), &rp(&[1.5, -2.0])).unwrap(),
            0.0
        );
        assert!(matches!(
            squared_distance(&rp(&[0.0]), &rp(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dominance_is_strict_in_every_coordinate() {
        assert!(dominates(&fp(&[2.0, 2.0]), &fp(&[1.0, 1.0])).unwrap());
        assert!(!dominates(&fp(&[1.0, 2.0]), &fp(&[1.0, 1.0])).unwrap());
        assert!(!dominates(&fp(&[1.0, 1.0]), &fp(&[1.0, 1.0])).unwrap());
        assert!(matches!(
            dominates(&fp(&[1.0]), &fp(&[1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quadrant_rect_is_lower_exclusive() {
        let r = QueryRect::dominating_quadrant(&fp(&[5.0, 7.0]));
        assert!(r.contains(&fp(&[6.0, 8.0])).unwrap());
        assert!(!r.contains(&fp(&[5.0, 9.0])).unwrap());
        let full = QueryRect::full_space(2).unwrap();
        assert!(full.contains(&fp(&[-1e300, 1e300])).unwrap());
        assert!(full.contains(&fp(&[0.0, 0.0])).unwrap());
    }

    #[test]
    fn rect_inclusivity_flags() {
        let r = QueryRect::new(vec![
            (Bound::Included(1.0), Bound::Excluded(2.0)),
            (Bound::Excluded(0.0), Bound::Included(5.0)),
        ])
        .unwrap();
        assert!(r.contains(&fp(&[1.0, 5.0])).unwrap());
        assert!(!r.contains(&fp(&[2.0, 5.0])).unwrap());
        assert!(!r.contains(&fp(&[1.0, 0.0])).unwrap());
        assert!(rect_contains(&r, &fp(&[1.5, 0.1])).unwrap());
    }

    #[test]
    fn rect_validation() {
        // Degenerate interval needs inclusive bounds on both sides.
        assert!(QueryRect::new(vec![(Bound::Included(1.0), Bound::Included(1.0))]).is_ok());
        assert!(QueryRect::new(vec![(Bound::Included(1.0), Bound::Excluded(1.0))]).is_err());
        assert!(QueryRect::new(vec![(Bound::Included(2.0), Bound::Included(1.0))]).is_err());
        // Infinite sides must be expressed as Unbounded, never as a value.
        assert!(QueryRect::new(vec![(Bound::Included(f64::NEG_INFINITY), Bound::Unbounded)])
            .is_err());
    }

    #[test]
    fn point_validation() {
        assert!(RealPoint::new(&[]).is_err());
        assert!(RealPoint::new(&[1.0, 2.0, 3.0]).is_err());
        assert!(RealPoint::new(&[f64::NAN]).is_err());
        assert!(FeaturePoint::new(&[1.0, f64::INFINITY]).is_err());
        assert!(FeaturePoint::new(&[1.0; 7]).is_ok());
    }

    #[test]
    fn dataset_validation() {
        let ds = Dataset::from_rows(
            &[vec![0.0], vec![1.0]],
            &[vec![1.0, 2.0], vec![3.0, 4.0]],
        )
        .unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.d_real(), 1);
        assert_eq!(ds.d_feat(), 2);

        assert!(Dataset::from_rows(&[vec![0.0]], &[]).is_err());
        assert!(Dataset::from_rows(&[], &[]).is_err());
        assert!(Dataset::from_rows(
            &[vec![0.0], vec![1.0, 2.0]],
            &[vec![1.0], vec![1.0]]
        )
        .is_err());
    }

    #[test]
    fn dominance_is_a_strict_partial_order() {
        // Irreflexivity, antisymmetry, transitivity over a random triple pool.
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<FeaturePoint> = (0..64)
            .map(|_| {
                fp(&[
                    (rng.random_range(0..4u32)) as f64,
                    (rng.random_range(0..4u32)) as f64,
                ])
            })
            .collect();
        for a in &pts {
            assert!(!dominates(a, a).unwrap());
        }
        for a in &pts {
            for b in &pts {
                if dominates(a, b).unwrap() {
                    assert!(!dominates(b, a).unwrap());
                }
                for c in &pts {
                    if dominates(a, b).unwrap() && dominates(b, c).unwrap() {
                        assert!(dominates(a, c).unwrap());
                    }
                }
            }
        }
    }
}
