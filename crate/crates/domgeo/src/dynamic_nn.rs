//! Insertion-only dynamization of the static nearest-site index via the
//! logarithmic method: sites live in buckets whose sizes are distinct powers
//! of two (the binary representation of the current count). An insertion
//! adds a singleton bucket and cascade-merges equal-sized buckets, rebuilding
//! one static index per merge; a query takes the best answer across buckets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::RealPoint;
use crate::static_nn::StaticNNIndex;

struct Bucket {
    sites: Vec<(RealPoint, u32)>,
    index: StaticNNIndex,
}

/// Growable exact nearest-site index; see the module docs.
pub struct DynamicNNIndex {
    d_real: usize,
    ids: HashSet<u32>,
    /// Strictly decreasing power-of-two sizes.
    buckets: Vec<Bucket>,
    rebuilt_sites: u64,
    indexes_built: u64,
}

impl DynamicNNIndex {
    pub fn new(d_real: usize) -> Result<Self> {
        if d_real == 0 || d_real > crate::geometry::MAX_REAL_DIM {
            return Err(Error::UnsupportedRealDimension(d_real));
        }
        Ok(Self {
            d_real,
            ids: HashSet::new(),
            buckets: Vec::new(),
            rebuilt_sites: 0,
            indexes_built: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Current bucket sizes, largest first.
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(|b| b.sites.len()).collect()
    }

    /// Whether a site with this id has been inserted.
    pub fn contains_id(&self, id: u32) -> bool {
        self.ids.contains(&id)
    }

    /// Total sites passed through index rebuilds so far; a work counter for
    /// the amortized-cost experiments.
    pub fn rebuilt_sites(&self) -> u64 {
        self.rebuilt_sites
    }

    /// How many static indexes have been constructed, counting the singleton
    /// built on each insertion and every merge.
    pub fn indexes_built(&self) -> u64 {
        self.indexes_built
    }

    pub fn insert(&mut self, site: (RealPoint, u32)) -> Result<()> {
        if site.0.dim() != self.d_real {
            return Err(Error::DimensionMismatch {
                expected: self.d_real,
                got: site.0.dim(),
            });
        }
        if !self.ids.insert(site.1) {
            return Err(Error::DuplicateId(site.1));
        }
        let sites = vec![site];
        let index = StaticNNIndex::build(&sites)?;
        self.rebuilt_sites += 1;
        self.indexes_built += 1;
        self.buckets.push(Bucket { sites, index });
        while self.buckets.len() >= 2
            && self.buckets[self.buckets.len() - 1].sites.len()
                == self.buckets[self.buckets.len() - 2].sites.len()
        {
            let hi = self.buckets.pop().expect("checked above");
            let lo = self.buckets.pop().expect("checked above");
            let mut sites = lo.sites;
            sites.extend(hi.sites);
            let index = StaticNNIndex::build(&sites)?;
            self.rebuilt_sites += sites.len() as u64;
            self.indexes_built += 1;
            self.buckets.push(Bucket { sites, index });
        }
        Ok(())
    }

    /// Nearest inserted site under the (squared distance, id) order, or
    /// `None` while empty.
    pub fn nearest(&self, query: &RealPoint) -> Result<Option<(u32, f64)>> {
        if query.dim() != self.d_real {
            return Err(Error::DimensionMismatch {
                expected: self.d_real,
                got: query.dim(),
            });
        }
        let mut best: Option<(f64, u32)> = None;
        for b in &self.buckets {
            let (id, sq) = b.index.nearest_slice(query.coords());
            if best.is_none_or(|x| sq < x.0 || (sq == x.0 && id < x.1)) {
                best = Some((sq, id));
            }
        }
        Ok(best.map(|(sq, id)| (id, sq)))
    }

    /// Structural self-check for tests: bucket sizes are strictly decreasing
    /// powers of two, every bucket's index covers exactly its sites, and the
    /// buckets partition the inserted id set.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut prev: Option<usize> = None;
        let mut seen = HashSet::new();
        for b in &self.buckets {
            let s = b.sites.len();
            if !s.is_power_of_two() {
                return Err(format!("bucket size {s} is not a power of two"));
            }
            if let Some(p) = prev {
                if s >= p {
                    return Err(format!("bucket sizes not strictly decreasing: {p} then {s}"));
                }
            }
            prev = Some(s);
            if b.index.site_count() != s {
                return Err(format!(
                    "index covers {} sites but the bucket holds {s}",
                    b.index.site_count()
                ));
            }
            for &(_, id) in &b.sites {
                if !seen.insert(id) {
                    return Err(format!("id {id} appears in two buckets"));
                }
            }
        }
        if seen != self.ids {
            return Err("bucket contents do not match the inserted id set".into());
        }
        let cap = usize::try_from((self.ids.len() + 1).next_power_of_two().trailing_zeros())
            .expect("small") + 1;
        if self.buckets.len() > cap {
            return Err(format!("{} buckets exceeds the bound {cap}", self.buckets.len()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sq_dist_slices;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p2(x: f64, y: f64) -> RealPoint {
        RealPoint::new(&[x, y]).unwrap()
    }

    #[test]
    fn empty_index_answers_none() {
        let idx = DynamicNNIndex::new(2).unwrap();
        assert_eq!(idx.nearest(&p2(0.0, 0.0)).unwrap(), None);
        assert!(idx.is_empty());
    }

    #[test]
    fn bucket_sizes_follow_binary_representation() {
        let mut idx = DynamicNNIndex::new(2).unwrap();
        idx.insert((p2(0.0, 0.0), 0)).unwrap();
        assert_eq!(idx.bucket_sizes(), vec![1]);
        for i in 1..7u32 {
            idx.insert((p2(i as f64, 0.0), i)).unwrap();
        }
        assert_eq!(idx.bucket_sizes(), vec![4, 2, 1]);
        idx.check_invariants().unwrap();
    }

    #[test]
    fn single_site_and_duplicates() {
        let mut idx = DynamicNNIndex::new(2).unwrap();
        idx.insert((p2(3.0, 4.0), 9)).unwrap();
        assert_eq!(idx.nearest(&p2(0.0, 0.0)).unwrap(), Some((9, 25.0)));
        assert!(matches!(
            idx.insert((p2(1.0, 1.0), 9)),
            Err(Error::DuplicateId(9))
        ));
        assert!(matches!(
            idx.insert((RealPoint::new(&[1.0]).unwrap(), 10)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn interleaved_inserts_and_queries_match_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for d in [1usize, 2] {
            let mut idx = DynamicNNIndex::new(d).unwrap();
            let mut sites: Vec<(RealPoint, u32)> = Vec::new();
            for i in 0..1024u32 {
                let c: Vec<f64> = (0..d)
                    .map(|_| (rng.random::<f64>() * 50.0).round() / 2.0)
                    .collect();
                let site = (RealPoint::new(&c).unwrap(), i);
                idx.insert(site.clone()).unwrap();
                sites.push(site);
                idx.check_invariants().unwrap();
                let qc: Vec<f64> = (0..d)
                    .map(|_| (rng.random::<f64>() * 54.0 - 2.0).round() / 2.0)
                    .collect();
                let q = RealPoint::new(&qc).unwrap();
                let want = sites
                    .iter()
                    .map(|(p, id)| (sq_dist_slices(p.coords(), q.coords()), *id))
                    .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                    .map(|(sq, id)| (id, sq));
                assert_eq!(idx.nearest(&q).unwrap(), want, "d={d} i={i}");
            }
            idx.check_invariants().unwrap();
        }
    }
}
