//! The end-to-end nearest-dominating-point algorithms.
//!
//! Given paired datasets (locations `p_i`, ratings `q_i`), each algorithm
//! reports, per point, the closest location whose rating vector strictly
//! dominates that point's rating vector — or nothing when no such point
//! exists. Three interchangeable strategies are provided:
//!
//! * [`nearest_dominator_sweep`] — 1-D locations, 2-D ratings: two ordered
//!   passes over a priority search tree with claim-and-delete reporting.
//! * [`nearest_dominator_rangetree`] — general dimensions: one open-quadrant
//!   query against a multi-level range tree per point.
//! * [`nearest_dominator_offline`] — 2-D locations, 2-D ratings: a
//!   descending sweep over one rating coordinate with growable nearest-site
//!   structures on a 1-D tree over the other.
//!
//! All three rank candidates by (squared distance, id) and agree exactly
//! with each other and with the brute-force reference.

use crate::dynamic_nn::DynamicNNIndex;
use crate::error::{Error, Result};
use crate::geometry::{sq_dist_slices, Dataset, QueryRect};
use crate::parallel::map_indexed;
use crate::pst::{PrioritySearchTree, PstEntry};
use crate::range_tree::RangeTree;
use crate::segtree::Skeleton;

/// A single point's answer: who dominates it from the nearest location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominatorMatch {
    pub dominator: u32,
    pub sqdist: f64,
}

/// Per-point answers, indexed like the dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatorResult {
    matches: Vec<Option<DominatorMatch>>,
}

impl DominatorResult {
    pub(crate) fn new(matches: Vec<Option<DominatorMatch>>) -> Self {
        Self { matches }
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<DominatorMatch> {
        self.matches[i]
    }

    pub fn matches(&self) -> &[Option<DominatorMatch>] {
        &self.matches
    }
}

/// Work counters reported by the `_with_stats` entry points. `node_visits`
/// counts structure nodes touched by queries (priority-search-tree visits
/// for the sweep, canonical nodes for the tree algorithms); `built_points`
/// counts site memberships created in index builds and rebuilds;
/// `indexes_built` counts distinct search structures constructed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    pub n: usize,
    pub queries: u64,
    pub node_visits: u64,
    pub built_points: u64,
    pub indexes_built: u64,
}

fn combine(slot: &mut Option<DominatorMatch>, cand: DominatorMatch) {
    let replace = match slot {
        None => true,
        Some(cur) => {
            cand.sqdist < cur.sqdist
                || (cand.sqdist == cur.sqdist && cand.dominator < cur.dominator)
        }
    };
    if replace {
        *slot = Some(cand);
    }
}

/// One directional pass of the 1-D sweep: process points in `order`; each
/// point claims (and removes) every still-unclaimed point it dominates, then
/// enters the tree. Because location gaps only grow as the pass advances,
/// the first claimant is that side's closest dominator; among equal-gap
/// claimants (a tied location group), ascending id order makes the smallest
/// id claim first. Points sharing one location are batched — all queries,
/// then all insertions — so the tree only ever resolves cross-location
/// pairs; same-location dominance is handled separately.
fn sweep_pass(
    ds: &Dataset,
    order: &[u32],
    out: &mut [Option<DominatorMatch>],
) -> Result<u64> {
    let n = ds.len();
    let keys: Vec<(f64, u32)> = (0..n).map(|i| (ds.feat(i).coords()[0], i as u32)).collect();
    let mut pst = PrioritySearchTree::new(keys)?;
    let mut s = 0;
    while s < n {
        let x = ds.real(order[s] as usize).coords()[0];
        let mut e = s + 1;
        while e < n && ds.real(order[e] as usize).coords()[0] == x {
            e += 1;
        }
        for &i in &order[s..e] {
            let q = ds.feat(i as usize).coords();
            for j in pst.query_dominated(q[0], q[1]) {
                let sq =
                    sq_dist_slices(ds.real(i as usize).coords(), ds.real(j as usize).coords());
                combine(
                    &mut out[j as usize],
                    DominatorMatch {
                        dominator: i,
                        sqdist: sq,
                    },
                );
                pst.delete(j)?;
            }
        }
        for &i in &order[s..e] {
            let q = ds.feat(i as usize).coords();
            pst.insert(PstEntry {
                x: q[0],
                y: q[1],
                id: i,
            })?;
        }
        s = e;
    }
    Ok(pst.nodes_visited())
}

/// Same-location dominance: every such dominator is at squared distance 0,
/// which beats any other candidate, so each point simply takes the smallest
/// dominating id within its location group.
fn resolve_tied_locations(ds: &Dataset, order: &[u32], out: &mut [Option<DominatorMatch>]) {
    let n = ds.len();
    let mut s = 0;
    while s < n {
        let x = ds.real(order[s] as usize).coords()[0];
        let mut e = s + 1;
        while e < n && ds.real(order[e] as usize).coords()[0] == x {
            e += 1;
        }
        if e - s > 1 {
            // `order` is ascending by id within the group, so the first hit
            // is the smallest dominating id.
            for &j in &order[s..e] {
                let qj = ds.feat(j as usize).coords();
                for &i in &order[s..e] {
                    if i != j && crate::geometry::dominates_slices(ds.feat(i as usize).coords(), qj)
                    {
                        combine(
                            &mut out[j as usize],
                            DominatorMatch {
                                dominator: i,
                                sqdist: 0.0,
                            },
                        );
                        break;
                    }
                }
            }
        }
        s = e;
    }
}

/// Sweep algorithm for 1-D locations and 2-D ratings.
pub fn nearest_dominator_sweep(ds: &Dataset) -> Result<DominatorResult> {
    Ok(nearest_dominator_sweep_with_stats(ds)?.0)
}

pub fn nearest_dominator_sweep_with_stats(ds: &Dataset) -> Result<(DominatorResult, RunStats)> {
    if ds.d_real() != 1 {
        return Err(Error::AlgorithmMismatch {
            algo: "sweep",
            requirement: "1-D locations",
        });
    }
    if ds.d_feat() != 2 {
        return Err(Error::AlgorithmMismatch {
            algo: "sweep",
            requirement: "2-D ratings",
        });
    }
    let n = ds.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (xa, xb) = (ds.real(a as usize).coords()[0], ds.real(b as usize).coords()[0]);
        xa.total_cmp(&xb).then(a.cmp(&b))
    });
    let mut out = vec![None; n];
    let mut visits = sweep_pass(ds, &order, &mut out)?;
    resolve_tied_locations(ds, &order, &mut out);
    order.reverse();
    // Equal locations should still be claimed smallest-id-first, so restore
    // ascending ids within each tied group after the reversal.
    let mut s = 0;
    while s < n {
        let x = ds.real(order[s] as usize).coords()[0];
        let mut e = s + 1;
        while e < n && ds.real(order[e] as usize).coords()[0] == x {
            e += 1;
        }
        order[s..e].sort_unstable();
        s = e;
    }
    visits += sweep_pass(ds, &order, &mut out)?;
    let stats = RunStats {
        n,
        queries: 2 * n as u64,
        node_visits: visits,
        built_points: 2 * n as u64,
        indexes_built: 2,
    };
    Ok((DominatorResult::new(out), stats))
}

/// Range-tree algorithm: works for 1-D or 2-D locations and any rating
/// dimension ≥ 2. Queries are independent, so they run in parallel when the
/// `parallel` feature is active.
pub fn nearest_dominator_rangetree(ds: &Dataset) -> Result<DominatorResult> {
    Ok(nearest_dominator_rangetree_with_stats(ds)?.0)
}

pub fn nearest_dominator_rangetree_with_stats(
    ds: &Dataset,
) -> Result<(DominatorResult, RunStats)> {
    if ds.d_feat() < 2 {
        return Err(Error::AlgorithmMismatch {
            algo: "rangetree",
            requirement: "ratings of dimension at least 2",
        });
    }
    let n = ds.len();
    let tree = RangeTree::build(ds)?;
    let per_point: Vec<(Option<DominatorMatch>, u64)> = map_indexed(n, |i| {
        let rect = QueryRect::dominating_quadrant(ds.feat(i));
        let set = tree
            .canonical_nodes(&rect)
            .expect("quadrant dimension matches the tree");
        let m = set
            .nearest_slice(ds.real(i).coords())
            .map(|(id, sq)| DominatorMatch {
                dominator: id,
                sqdist: sq,
            });
        (m, set.len() as u64)
    });
    let mut out = Vec::with_capacity(n);
    let mut canonical = 0;
    for (m, c) in per_point {
        out.push(m);
        canonical += c;
    }
    let stats = RunStats {
        n,
        queries: n as u64,
        node_visits: canonical,
        built_points: tree.total_indexed_points(),
        indexes_built: tree.indexes_built(),
    };
    Ok((DominatorResult::new(out), stats))
}

/// Offline sweep for 2-D locations and 2-D ratings.
pub fn nearest_dominator_offline(ds: &Dataset) -> Result<DominatorResult> {
    Ok(offline_impl(ds, None)?.0)
}

pub fn nearest_dominator_offline_with_stats(
    ds: &Dataset,
) -> Result<(DominatorResult, RunStats)> {
    offline_impl(ds, None)
}

/// Offline sweep with an observation hook: immediately before each point's
/// query, `inspect` receives the point's index and the root-level
/// nearest-site structure, whose contents are exactly the locations of
/// points with a strictly larger second rating coordinate.
pub fn nearest_dominator_offline_inspect(
    ds: &Dataset,
    inspect: &mut dyn FnMut(u32, &DynamicNNIndex),
) -> Result<(DominatorResult, RunStats)> {
    offline_impl(ds, Some(inspect))
}

fn offline_impl(
    ds: &Dataset,
    mut inspect: Option<&mut dyn FnMut(u32, &DynamicNNIndex)>,
) -> Result<(DominatorResult, RunStats)> {
    if ds.d_real() != 2 {
        return Err(Error::AlgorithmMismatch {
            algo: "offline",
            requirement: "2-D locations",
        });
    }
    if ds.d_feat() != 2 {
        return Err(Error::AlgorithmMismatch {
            algo: "offline",
            requirement: "2-D ratings",
        });
    }
    let n = ds.len();

    // 1-D tree over the first rating coordinate, one growable nearest-site
    // structure per node.
    let mut keys: Vec<(f64, u32)> = (0..n as u32)
        .map(|i| (ds.feat(i as usize).coords()[0], i))
        .collect();
    keys.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let key_coords: Vec<f64> = keys.iter().map(|k| k.0).collect();
    let mut pos_of = vec![0u32; n];
    for (pos, &(_, id)) in keys.iter().enumerate() {
        pos_of[id as usize] = pos as u32;
    }
    let skel = Skeleton::build(n);
    let mut nn: Vec<DynamicNNIndex> = (0..skel.nodes.len())
        .map(|_| DynamicNNIndex::new(2))
        .collect::<Result<_>>()?;

    // Process by strictly decreasing second rating coordinate; points tied
    // on it form a batch that is fully queried before any of it is inserted,
    // because ties never dominate each other.
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (ya, yb) = (ds.feat(a as usize).coords()[1], ds.feat(b as usize).coords()[1]);
        yb.total_cmp(&ya).then(a.cmp(&b))
    });

    let mut out = vec![None; n];
    let mut canonical = 0u64;
    let mut queries = 0u64;
    let mut s = 0usize;
    while s < n {
        let y = ds.feat(order[s] as usize).coords()[1];
        let mut e = s + 1;
        while e < n && ds.feat(order[e] as usize).coords()[1] == y {
            e += 1;
        }
        for &i in &order[s..e] {
            if let Some(hook) = inspect.as_deref_mut() {
                hook(i, &nn[skel.root as usize]);
            }
            let x = ds.feat(i as usize).coords()[0];
            let p = ds.real(i as usize);
            // Strictly-greater x-range, decomposed into canonical nodes.
            let i0 = key_coords.partition_point(|&c| c <= x) as u32;
            let mut best: Option<DominatorMatch> = None;
            let mut err = None;
            canonical += skel_decompose_count(&skel, i0, n as u32, |node| {
                match nn[node as usize].nearest(p) {
                    Ok(Some((id, sq))) => combine(
                        &mut best,
                        DominatorMatch {
                            dominator: id,
                            sqdist: sq,
                        },
                    ),
                    Ok(None) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            queries += 1;
            out[i as usize] = best;
        }
        for &i in &order[s..e] {
            let site = (ds.real(i as usize).clone(), i);
            for node in skel.path_to(pos_of[i as usize]) {
                nn[node as usize].insert(site.clone())?;
            }
        }
        s = e;
    }

    let built: u64 = nn.iter().map(|x| x.rebuilt_sites()).sum();
    let indexes: u64 = nn.iter().map(|x| x.indexes_built()).sum();
    let stats = RunStats {
        n,
        queries,
        node_visits: canonical,
        built_points: built,
        indexes_built: indexes,
    };
    Ok((DominatorResult::new(out), stats))
}

/// Canonical-node count wrapper: forwards each canonical node to `f` and
/// returns how many there were.
fn skel_decompose_count(skel: &Skeleton, i0: u32, i1: u32, mut f: impl FnMut(u32)) -> u64 {
    let mut count = 0;
    skel.decompose(i0, i1, &mut |node| {
        count += 1;
        f(node);
    });
    count
}

/// Sorts distinct floats by the dominator reduction: embed each value `x` as
/// location `x` with rating `(x, x)`, find every point's nearest dominator
/// (its successor), then walk the chain from the minimum.
pub fn sort_via_dominators(xs: &[f64]) -> Result<Vec<f64>> {
    for &x in xs {
        if !x.is_finite() {
            return Err(Error::NonFiniteCoordinate(format!("{x}")));
        }
    }
    let mut sorted_check: Vec<f64> = xs.to_vec();
    sorted_check.sort_by(f64::total_cmp);
    if sorted_check.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateValue);
    }
    if xs.is_empty() {
        return Ok(Vec::new());
    }

    let reals: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    let feats: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, x]).collect();
    let ds = Dataset::from_rows(&reals, &feats)?;
    let result = nearest_dominator_sweep(&ds)?;

    let start = xs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty");
    let mut out = Vec::with_capacity(xs.len());
    let mut cur = start;
    loop {
        out.push(xs[cur]);
        match result.get(cur) {
            Some(m) => cur = m.dominator as usize,
            None => break,
        }
    }
    debug_assert_eq!(out.len(), xs.len(), "dominator chain must visit every value");
    Ok(out)
}
