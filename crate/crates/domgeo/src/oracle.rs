//! Brute-force reference implementations. These are the ground truth the
//! fast structures are tested against, and the honest quadratic baseline for
//! the scaling benchmarks. They share the crate-wide candidate order —
//! lexicographic (squared distance, id) — so equivalence checks are exact
//! equality, never tolerance-based.

use crate::engine::{DominatorMatch, DominatorResult};
use crate::error::{Error, Result};
use crate::geometry::{dominates_slices, sq_dist_slices, Dataset, QueryRect, RealPoint};
use crate::parallel::map_indexed;

/// Per-point nearest dominator by exhaustive pair enumeration; works for any
/// dimensions.
pub fn brute_nearest_dominator(ds: &Dataset) -> DominatorResult {
    let matches = map_indexed(ds.len(), |i| {
        let qi = ds.feat(i).coords();
        let pi = ds.real(i).coords();
        let mut best: Option<DominatorMatch> = None;
        for j in 0..ds.len() {
            if j == i || !dominates_slices(ds.feat(j).coords(), qi) {
                continue;
            }
            let sq = sq_dist_slices(ds.real(j).coords(), pi);
            let better = match best {
                None => true,
                Some(b) => sq < b.sqdist || (sq == b.sqdist && (j as u32) < b.dominator),
            };
            if better {
                best = Some(DominatorMatch {
                    dominator: j as u32,
                    sqdist: sq,
                });
            }
        }
        best
    });
    DominatorResult::new(matches)
}

/// Filter-then-argmin reference for rectangle-restricted nearest neighbor.
pub fn brute_rect_query(
    ds: &Dataset,
    p: &RealPoint,
    rect: &QueryRect,
) -> Result<Option<(u32, f64)>> {
    if p.dim() != ds.d_real() {
        return Err(Error::DimensionMismatch {
            expected: ds.d_real(),
            got: p.dim(),
        });
    }
    let mut best: Option<(f64, u32)> = None;
    for i in 0..ds.len() {
        if !rect.contains(ds.feat(i))? {
            continue;
        }
        let sq = sq_dist_slices(ds.real(i).coords(), p.coords());
        if best.is_none_or(|b| sq < b.0 || (sq == b.0 && (i as u32) < b.1)) {
            best = Some((sq, i as u32));
        }
    }
    Ok(best.map(|(sq, id)| (id, sq)))
}

/// Linear-scan nearest site.
pub fn brute_nn(sites: &[(RealPoint, u32)], query: &RealPoint) -> Result<(u32, f64)> {
    if sites.is_empty() {
        return Err(Error::EmptyInput("nearest-site scan"));
    }
    let mut best: Option<(f64, u32)> = None;
    for (p, id) in sites {
        if p.dim() != query.dim() {
            return Err(Error::DimensionMismatch {
                expected: query.dim(),
                got: p.dim(),
            });
        }
        let sq = sq_dist_slices(p.coords(), query.coords());
        if best.is_none_or(|b| sq < b.0 || (sq == b.0 && *id < b.1)) {
            best = Some((sq, *id));
        }
    }
    let (sq, id) = best.expect("non-empty");
    Ok((id, sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dominates;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_point_instance() {
        let ds = Dataset::from_rows(
            &[vec![0.0], vec![1.0], vec![5.0]],
            &[vec![0.0, 0.0], vec![2.0, 2.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let res = brute_nearest_dominator(&ds);
        assert_eq!(
            res.get(0),
            Some(DominatorMatch {
                dominator: 1,
                sqdist: 1.0
            })
        );
        assert_eq!(res.get(1), None);
        assert_eq!(
            res.get(2),
            Some(DominatorMatch {
                dominator: 1,
                sqdist: 16.0
            })
        );
    }

    #[test]
    fn reported_dominators_always_dominate() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..20 {
            let n = 1 + rng.random_range(0..64usize);
            let reals: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![(rng.random::<f64>() * 10.0).round()])
                .collect();
            let feats: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![(rng.random::<f64>() * 6.0).round(), (rng.random::<f64>() * 6.0).round()])
                .collect();
            let ds = Dataset::from_rows(&reals, &feats).unwrap();
            let res = brute_nearest_dominator(&ds);
            for i in 0..n {
                if let Some(m) = res.get(i) {
                    assert!(dominates(ds.feat(m.dominator as usize), ds.feat(i)).unwrap());
                    assert_eq!(
                        m.sqdist,
                        sq_dist_slices(
                            ds.real(m.dominator as usize).coords(),
                            ds.real(i).coords()
                        )
                    );
                }
            }
        }
    }

    #[test]
    fn brute_nn_basics() {
        assert!(matches!(
            brute_nn(&[], &RealPoint::new(&[0.0]).unwrap()),
            Err(Error::EmptyInput(_))
        ));
        let sites = vec![
            (RealPoint::new(&[1.0, 1.0]).unwrap(), 5),
            (RealPoint::new(&[1.0, 1.0]).unwrap(), 2),
        ];
        let q = RealPoint::new(&[1.0, 1.0]).unwrap();
        assert_eq!(brute_nn(&sites, &q).unwrap(), (2, 0.0));
    }
}
