//! Multi-level orthogonal range tree over the feature space.
//!
//! Level ℓ is a balanced static tree over feature coordinate ℓ; every node
//! of a level-ℓ tree (ℓ < d_feat − 1) owns an associated level-(ℓ+1) tree
//! over its subtree's points, and every node of a last-level tree owns an
//! exact nearest-site structure over the corresponding real points. A
//! rectangle query decomposes into canonical last-level nodes whose subtrees
//! tile the matching points exactly; a nearest-in-rectangle query then takes
//! the best nearest-site answer across those nodes.

use std::ops::Bound;

use crate::error::{Error, Result};
use crate::geometry::{Dataset, QueryRect, RealPoint};
use crate::segtree::Skeleton;
use crate::static_nn::{line_nearest, StaticNNIndex};

enum NodePayload {
    /// Associated tree on the next feature coordinate.
    Sub(Box<Tree>),
    /// Last level, 1-D reals: slice of the shared arena, sorted by
    /// (coordinate, id).
    Line { off: u32, len: u32 },
    /// Last level, 2-D reals.
    Nn(Box<StaticNNIndex>),
}

struct Tree {
    skel: Skeleton,
    /// Feature coordinate of this tree's level, sorted ascending (ties by id).
    key_coords: Vec<f64>,
    /// Point ids in `key_coords` order; a node's member set is the slice
    /// `key_ids[node.lo..node.hi]`.
    key_ids: Vec<u32>,
    /// Per skeleton node, same indexing as `skel.nodes`.
    payload: Vec<NodePayload>,
}

/// Immutable range tree; see the module docs.
pub struct RangeTree {
    d_feat: usize,
    d_real: usize,
    n: usize,
    root: Tree,
    line_coords: Vec<f64>,
    line_ids: Vec<u32>,
    indexes_built: u64,
    total_indexed_points: u64,
}

/// One canonical node of a rectangle decomposition.
pub struct CanonicalNode<'a> {
    member_ids: &'a [u32],
    payload: PayloadRef<'a>,
}

enum PayloadRef<'a> {
    Line { coords: &'a [f64], ids: &'a [u32] },
    Nn(&'a StaticNNIndex),
}

impl CanonicalNode<'_> {
    /// Ids of the points this node stands for (sorted by the last feature
    /// coordinate, then id).
    pub fn member_ids(&self) -> &[u32] {
        self.member_ids
    }

    pub fn len(&self) -> usize {
        self.member_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_ids.is_empty()
    }

    pub(crate) fn nearest_slice(&self, q: &[f64]) -> (u32, f64) {
        match self.payload {
            PayloadRef::Line { coords, ids } => line_nearest(coords, ids, q[0]),
            PayloadRef::Nn(idx) => idx.nearest_slice(q),
        }
    }

    /// Nearest member site to `q` under the (squared distance, id) order.
    pub fn nearest_site(&self, q: &RealPoint) -> (u32, f64) {
        self.nearest_slice(q.coords())
    }
}

/// Canonical nodes whose member sets partition the points matching a query
/// rectangle.
pub struct CanonicalSet<'a> {
    nodes: Vec<CanonicalNode<'a>>,
}

impl<'a> CanonicalSet<'a> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CanonicalNode<'a>> {
        self.nodes.iter()
    }

    pub(crate) fn nearest_slice(&self, q: &[f64]) -> Option<(u32, f64)> {
        let mut best: Option<(f64, u32)> = None;
        for node in &self.nodes {
            let (id, sq) = node.nearest_slice(q);
            if best.is_none_or(|b| sq < b.0 || (sq == b.0 && id < b.1)) {
                best = Some((sq, id));
            }
        }
        best.map(|(sq, id)| (id, sq))
    }
}

struct BuildCtx<'a> {
    ds: &'a Dataset,
    d_feat: usize,
    d_real: usize,
    line_coords: Vec<f64>,
    line_ids: Vec<u32>,
    indexes_built: u64,
    total_indexed_points: u64,
    merge_scratch: Vec<(f64, u32)>,
}

fn build_tree(ctx: &mut BuildCtx<'_>, mut ids: Vec<u32>, level: usize) -> Tree {
    ids.sort_unstable_by(|&a, &b| {
        let (ca, cb) = (
            ctx.ds.feat(a as usize).coords()[level],
            ctx.ds.feat(b as usize).coords()[level],
        );
        ca.total_cmp(&cb).then(a.cmp(&b))
    });
    let key_coords: Vec<f64> = ids
        .iter()
        .map(|&i| ctx.ds.feat(i as usize).coords()[level])
        .collect();
    let key_ids = ids;
    let skel = Skeleton::build(key_ids.len());
    let n_nodes = skel.nodes.len();

    let payload: Vec<NodePayload> = if level + 1 < ctx.d_feat {
        (0..n_nodes)
            .map(|i| {
                let node = skel.nodes[i];
                let subset = key_ids[node.lo as usize..node.hi as usize].to_vec();
                NodePayload::Sub(Box::new(build_tree(ctx, subset, level + 1)))
            })
            .collect()
    } else if ctx.d_real == 1 {
        // Bottom-up merge: children precede their parent when iterating node
        // indices in reverse, so a parent's sorted member list is the merge
        // of two finished arena slices.
        let mut spans = vec![(0u32, 0u32); n_nodes];
        for i in (0..n_nodes).rev() {
            let node = skel.nodes[i];
            let off = ctx.line_coords.len() as u32;
            if node.is_leaf() {
                let id = key_ids[node.lo as usize];
                ctx.line_coords.push(ctx.ds.real(id as usize).coords()[0]);
                ctx.line_ids.push(id);
            } else {
                let (lo, ll) = spans[node.left as usize];
                let (ro, rl) = spans[node.right as usize];
                ctx.merge_scratch.clear();
                let (mut a, mut b) = (lo as usize, ro as usize);
                let (ae, be) = (lo as usize + ll as usize, ro as usize + rl as usize);
                while a < ae && b < be {
                    let ka = (ctx.line_coords[a], ctx.line_ids[a]);
                    let kb = (ctx.line_coords[b], ctx.line_ids[b]);
                    if ka.0 < kb.0 || (ka.0 == kb.0 && ka.1 <= kb.1) {
                        ctx.merge_scratch.push(ka);
                        a += 1;
                    } else {
                        ctx.merge_scratch.push(kb);
                        b += 1;
                    }
                }
                for k in a..ae {
                    ctx.merge_scratch.push((ctx.line_coords[k], ctx.line_ids[k]));
                }
                for k in b..be {
                    ctx.merge_scratch.push((ctx.line_coords[k], ctx.line_ids[k]));
                }
                for &(c, id) in &ctx.merge_scratch {
                    ctx.line_coords.push(c);
                    ctx.line_ids.push(id);
                }
            }
            let len = ctx.line_coords.len() as u32 - off;
            spans[i] = (off, len);
            ctx.indexes_built += 1;
            ctx.total_indexed_points += u64::from(len);
        }
        spans
            .into_iter()
            .map(|(off, len)| NodePayload::Line { off, len })
            .collect()
    } else {
        (0..n_nodes)
            .map(|i| {
                let node = skel.nodes[i];
                let members = &key_ids[node.lo as usize..node.hi as usize];
                let pts: Vec<([f64; 2], u32)> = members
                    .iter()
                    .map(|&id| {
                        let c = ctx.ds.real(id as usize).coords();
                        ([c[0], c[1]], id)
                    })
                    .collect();
                ctx.indexes_built += 1;
                ctx.total_indexed_points += members.len() as u64;
                NodePayload::Nn(Box::new(StaticNNIndex::from_sites_2d(pts, members.len())))
            })
            .collect()
    };

    Tree {
        skel,
        key_coords,
        key_ids,
        payload,
    }
}

impl RangeTree {
    /// Builds the full structure over a dataset. Deterministic: the same
    /// dataset yields the same trees, payloads, and counters.
    pub fn build(ds: &Dataset) -> Result<Self> {
        if ds.is_empty() {
            return Err(Error::EmptyInput("range tree"));
        }
        let mut ctx = BuildCtx {
            ds,
            d_feat: ds.d_feat(),
            d_real: ds.d_real(),
            line_coords: Vec::new(),
            line_ids: Vec::new(),
            indexes_built: 0,
            total_indexed_points: 0,
            merge_scratch: Vec::new(),
        };
        let root = build_tree(&mut ctx, (0..ds.len() as u32).collect(), 0);
        Ok(Self {
            d_feat: ctx.d_feat,
            d_real: ctx.d_real,
            n: ds.len(),
            root,
            line_coords: ctx.line_coords,
            line_ids: ctx.line_ids,
            indexes_built: ctx.indexes_built,
            total_indexed_points: ctx.total_indexed_points,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty datasets
    }

    pub fn d_feat(&self) -> usize {
        self.d_feat
    }

    pub fn d_real(&self) -> usize {
        self.d_real
    }

    /// Number of last-level nearest-site structures built.
    pub fn indexes_built(&self) -> u64 {
        self.indexes_built
    }

    /// Total site memberships across those structures; each point is counted
    /// once per last-level node containing it.
    pub fn total_indexed_points(&self) -> u64 {
        self.total_indexed_points
    }

    /// Canonical decomposition of `rect`: last-level nodes whose member sets
    /// are disjoint and together contain exactly the points inside `rect`.
    pub fn canonical_nodes(&self, rect: &QueryRect) -> Result<CanonicalSet<'_>> {
        if rect.dim() != self.d_feat {
            return Err(Error::DimensionMismatch {
                expected: self.d_feat,
                got: rect.dim(),
            });
        }
        let mut nodes = Vec::new();
        self.collect(&self.root, rect, 0, &mut nodes);
        Ok(CanonicalSet { nodes })
    }

    fn collect<'a>(
        &'a self,
        tree: &'a Tree,
        rect: &QueryRect,
        level: usize,
        out: &mut Vec<CanonicalNode<'a>>,
    ) {
        let len = tree.key_coords.len();
        let (lo_b, hi_b) = rect.bounds(level);
        let i0 = match lo_b {
            Bound::Unbounded => 0,
            Bound::Included(v) => tree.key_coords.partition_point(|&c| c < v),
            Bound::Excluded(v) => tree.key_coords.partition_point(|&c| c <= v),
        };
        let i1 = match hi_b {
            Bound::Unbounded => len,
            Bound::Included(v) => tree.key_coords.partition_point(|&c| c <= v),
            Bound::Excluded(v) => tree.key_coords.partition_point(|&c| c < v),
        };
        if i0 >= i1 {
            return;
        }
        tree.skel.decompose(i0 as u32, i1 as u32, &mut |idx| {
            let node = tree.skel.nodes[idx as usize];
            let members = &tree.key_ids[node.lo as usize..node.hi as usize];
            match &tree.payload[idx as usize] {
                NodePayload::Sub(sub) => self.collect(sub, rect, level + 1, out),
                NodePayload::Line { off, len } => out.push(CanonicalNode {
                    member_ids: members,
                    payload: PayloadRef::Line {
                        coords: &self.line_coords[*off as usize..(*off + *len) as usize],
                        ids: &self.line_ids[*off as usize..(*off + *len) as usize],
                    },
                }),
                NodePayload::Nn(nn) => out.push(CanonicalNode {
                    member_ids: members,
                    payload: PayloadRef::Nn(nn),
                }),
            }
        });
    }

    /// Nearest real point to `p` among points whose feature vector lies in
    /// `rect`, under the (squared distance, id) order; `None` when the
    /// rectangle matches nothing.
    pub fn query_nearest_in_rect(
        &self,
        p: &RealPoint,
        rect: &QueryRect,
    ) -> Result<Option<(u32, f64)>> {
        if p.dim() != self.d_real {
            return Err(Error::DimensionMismatch {
                expected: self.d_real,
                got: p.dim(),
            });
        }
        Ok(self.canonical_nodes(rect)?.nearest_slice(p.coords()))
    }
}
