//! Incremental Delaunay triangulation with exact predicates, used as the
//! planar exact nearest-neighbor index.
//!
//! The triangulation is maintained on the compactified plane: one virtual
//! vertex "at infinity" closes the outside, so every hull edge is backed by
//! a ghost triangle and all cavity operations are uniform, with no special
//! boundary cases. Degenerate in-circle ties are broken by the symbolic
//! perturbation in [`crate::predicates`], keyed by site id, which makes the
//! result independent of insertion order and reproducible across runs.

use std::collections::HashMap;

use crate::geometry::sq_dist_slices;
use crate::predicates::{incircle_perturbed, incircle_sign, orient2d_sign};

/// Virtual vertex index closing the outer face.
pub(crate) const GHOST: u32 = u32::MAX;

/// An immutable planar triangulation over deduplicated sites.
///
/// `triangles` and `neighbors` include ghost triangles (one vertex equal to
/// the virtual outer vertex) so that the link of every vertex is a closed
/// cycle; [`DelaunayTriangulation::triangles`] filters them out.
#[derive(Debug, Clone)]
pub struct DelaunayTriangulation {
    verts: Vec<[f64; 2]>,
    site_ids: Vec<u32>,
    tris: Vec<[u32; 3]>,
    nbrs: Vec<[u32; 3]>,
    vert_tri: Vec<u32>,
    sample: Vec<u32>,
    n_solid: usize,
}

#[inline]
fn is_ghost_triple(t: [u32; 3]) -> bool {
    t[0] == GHOST || t[1] == GHOST || t[2] == GHOST
}

/// Strict openness test for a point known to be collinear with a, b.
fn strictly_between(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    let axis = usize::from(a[0] == b[0]);
    let (lo, hi) = if a[axis] < b[axis] {
        (a[axis], b[axis])
    } else {
        (b[axis], a[axis])
    };
    lo < p[axis] && p[axis] < hi
}

struct Builder {
    verts: Vec<[f64; 2]>,
    site_ids: Vec<u32>,
    tris: Vec<[u32; 3]>,
    nbrs: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    live: usize,
    last_solid: u32,
    seen_stamp: Vec<u32>,
    dead_stamp: Vec<u32>,
    generation: u32,
    dead: Vec<u32>,
    boundary: HashMap<u32, (u32, u32, u32)>,
}

impl Builder {
    fn new(verts: Vec<[f64; 2]>, site_ids: Vec<u32>) -> Self {
        Self {
            verts,
            site_ids,
            tris: Vec::new(),
            nbrs: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            live: 0,
            last_solid: 0,
            seen_stamp: Vec::new(),
            dead_stamp: Vec::new(),
            generation: 0,
            dead: Vec::new(),
            boundary: HashMap::new(),
        }
    }

    fn alloc(&mut self, v: [u32; 3]) -> u32 {
        self.live += 1;
        if let Some(t) = self.free.pop() {
            self.tris[t as usize] = v;
            self.alive[t as usize] = true;
            t
        } else {
            self.tris.push(v);
            self.nbrs.push([0; 3]);
            self.alive.push(true);
            self.seen_stamp.push(0);
            self.dead_stamp.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    fn kill(&mut self, t: u32) {
        debug_assert!(self.alive[t as usize]);
        self.alive[t as usize] = false;
        self.free.push(t);
        self.live -= 1;
    }

    /// Does inserting vertex `v` invalidate triangle `t`? Solid triangles
    /// test the (perturbed) circumdisk; a ghost triangle is invalidated when
    /// `v` lies strictly outside its hull edge, or on the open segment of it.
    fn in_disk(&self, t: u32, v: u32) -> bool {
        let tv = self.tris[t as usize];
        let p = self.verts[v as usize];
        if let Some(g) = tv.iter().position(|&x| x == GHOST) {
            let a = tv[(g + 1) % 3] as usize;
            let b = tv[(g + 2) % 3] as usize;
            match orient2d_sign(self.verts[a], self.verts[b], p) {
                1 => true,
                -1 => false,
                _ => strictly_between(self.verts[a], self.verts[b], p),
            }
        } else {
            let sid = |i: u32| (self.verts[i as usize], self.site_ids[i as usize]);
            incircle_perturbed(sid(tv[0]), sid(tv[1]), sid(tv[2]), (p, self.site_ids[v as usize]))
                > 0
        }
    }

    /// Visibility walk from the last created solid triangle to a triangle
    /// whose disk contains `v`.
    fn locate(&self, v: u32) -> u32 {
        let p = self.verts[v as usize];
        let mut cur = self.last_solid;
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.live + 32 {
                break; // fall back to exhaustive scan below
            }
            let tv = self.tris[cur as usize];
            debug_assert!(!is_ghost_triple(tv));
            for k in 0..3 {
                let u = tv[(k + 1) % 3] as usize;
                let w = tv[(k + 2) % 3] as usize;
                if orient2d_sign(self.verts[u], self.verts[w], p) < 0 {
                    let next = self.nbrs[cur as usize][k];
                    if is_ghost_triple(self.tris[next as usize]) {
                        return next;
                    }
                    cur = next;
                    continue 'walk;
                }
            }
            return cur; // inside or on the boundary of cur
        }
        (0..self.tris.len() as u32)
            .find(|&t| self.alive[t as usize] && self.in_disk(t, v))
            .expect("some live triangle must contain the new vertex")
    }

    fn insert(&mut self, v: u32) {
        let seed = self.locate(v);
        debug_assert!(self.in_disk(seed, v));

        // Grow the dead region: all live triangles whose disk contains v.
        self.generation += 1;
        let generation = self.generation;
        self.dead.clear();
        self.dead.push(seed);
        self.seen_stamp[seed as usize] = generation;
        self.dead_stamp[seed as usize] = generation;
        let mut i = 0;
        while i < self.dead.len() {
            let t = self.dead[i];
            i += 1;
            for k in 0..3 {
                let nb = self.nbrs[t as usize][k];
                if self.seen_stamp[nb as usize] != generation {
                    self.seen_stamp[nb as usize] = generation;
                    if self.in_disk(nb, v) {
                        self.dead_stamp[nb as usize] = generation;
                        self.dead.push(nb);
                    }
                }
            }
        }

        // Collect the directed boundary cycle of the dead region, keyed by
        // source vertex (the cavity is a topological disk, so the cycle is
        // simple).
        self.boundary.clear();
        for di in 0..self.dead.len() {
            let t = self.dead[di];
            let tv = self.tris[t as usize];
            for k in 0..3 {
                let nb = self.nbrs[t as usize][k];
                if self.dead_stamp[nb as usize] != generation {
                    let from = tv[(k + 1) % 3];
                    let to = tv[(k + 2) % 3];
                    let back = self.nbrs[nb as usize]
                        .iter()
                        .position(|&x| x == t)
                        .expect("adjacency must be reciprocal") as u32;
                    let prev = self.boundary.insert(from, (to, nb, back));
                    debug_assert!(prev.is_none(), "cavity boundary revisited a vertex");
                }
            }
        }
        let cycle_start = {
            let t = self.dead[0];
            let tv = self.tris[t as usize];
            (0..3)
                .map(|k| tv[(k + 1) % 3])
                .find(|from| self.boundary.contains_key(from))
        };
        // The dead region never covers the whole sphere (a far-away ghost
        // survives), so a boundary always exists.
        let mut from = cycle_start.expect("dead region has no boundary");
        let first = from;

        for i in 0..self.dead.len() {
            let t = self.dead[i];
            self.kill(t);
        }

        // Re-triangulate: fan every boundary edge (u, w) to the new vertex.
        let mut new_tris: Vec<(u32, u32, u32, u32)> = Vec::with_capacity(self.boundary.len());
        loop {
            let (to, nb, back) = self.boundary[&from];
            let t = self.alloc([from, to, v]);
            new_tris.push((t, nb, back, from));
            from = to;
            if from == first {
                break;
            }
        }
        debug_assert_eq!(new_tris.len(), self.boundary.len());

        // Wire adjacency: slot 2 faces the surviving neighbor, slots 0/1
        // link consecutive fan triangles.
        let m = new_tris.len();
        self.last_solid = GHOST;
        for (i, &(t, nb, back, _)) in new_tris.iter().enumerate() {
            let next_t = new_tris[(i + 1) % m].0;
            self.nbrs[t as usize][2] = nb;
            self.nbrs[nb as usize][back as usize] = t;
            self.nbrs[t as usize][0] = next_t;
            self.nbrs[next_t as usize][1] = t;
            if !is_ghost_triple(self.tris[t as usize]) {
                self.last_solid = t;
            }
        }
        debug_assert!(self.last_solid != GHOST, "insertion created no solid triangle");
    }

    fn seed_triangle(&mut self, order: &mut [u32]) {
        // order[0], order[1] are distinct points; find the first point not
        // collinear with them and move it to position 2.
        let a = order[0];
        let b = order[1];
        let j = (2..order.len())
            .find(|&j| {
                orient2d_sign(
                    self.verts[a as usize],
                    self.verts[b as usize],
                    self.verts[order[j] as usize],
                ) != 0
            })
            .expect("caller guarantees a non-collinear triple");
        order.swap(2, j);
        if orient2d_sign(
            self.verts[order[0] as usize],
            self.verts[order[1] as usize],
            self.verts[order[2] as usize],
        ) < 0
        {
            order.swap(0, 1);
        }
        let (a, b, c) = (order[0], order[1], order[2]);
        let t0 = self.alloc([a, b, c]);
        let g_ab = self.alloc([b, a, GHOST]);
        let g_bc = self.alloc([c, b, GHOST]);
        let g_ca = self.alloc([a, c, GHOST]);
        self.nbrs[t0 as usize] = [g_bc, g_ca, g_ab];
        self.nbrs[g_ab as usize] = [g_ca, g_bc, t0];
        self.nbrs[g_bc as usize] = [g_ab, g_ca, t0];
        self.nbrs[g_ca as usize] = [g_bc, g_ab, t0];
        self.last_solid = t0;
    }

    fn finish(self) -> DelaunayTriangulation {
        let nv = self.verts.len();
        let mut remap = vec![GHOST; self.tris.len()];
        let mut tris = Vec::with_capacity(self.live);
        let mut nbrs = Vec::with_capacity(self.live);
        for (t, &a) in self.alive.iter().enumerate() {
            if a {
                remap[t] = tris.len() as u32;
                tris.push(self.tris[t]);
                nbrs.push(self.nbrs[t]);
            }
        }
        for nb in &mut nbrs {
            for x in nb.iter_mut() {
                *x = remap[*x as usize];
                debug_assert!(*x != GHOST, "live triangle adjacent to a dead one");
            }
        }
        let mut vert_tri = vec![GHOST; nv];
        let mut n_solid = 0;
        for (t, tv) in tris.iter().enumerate() {
            if !is_ghost_triple(*tv) {
                n_solid += 1;
                for &v in tv {
                    vert_tri[v as usize] = t as u32;
                }
            }
        }
        debug_assert!(vert_tri.iter().all(|&t| t != GHOST));
        // Deterministic start candidates for nearest-site descent: roughly
        // √nv vertices at a fixed stride.
        let stride = ((nv as f64).sqrt().ceil() as usize).max(1);
        let sample: Vec<u32> = (0..nv as u32).step_by(stride).collect();
        DelaunayTriangulation {
            verts: self.verts,
            site_ids: self.site_ids,
            tris,
            nbrs,
            vert_tri,
            sample,
            n_solid,
        }
    }
}

impl DelaunayTriangulation {
    /// Builds the triangulation over deduplicated sites.
    ///
    /// Preconditions (enforced by the caller, see the static index builder):
    /// coordinates pairwise distinct and not all collinear, ids distinct,
    /// `verts.len() == site_ids.len() >= 3`.
    pub(crate) fn build(verts: Vec<[f64; 2]>, site_ids: Vec<u32>) -> Self {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        assert!(verts.len() >= 3);
        let nv = verts.len();
        let mut builder = Builder::new(verts, site_ids);
        // Randomized insertion order for the expected O(n log n) build; the
        // fixed seed keeps builds reproducible, and the symbolic tie rule
        // makes the final triangulation independent of this order anyway.
        let mut order: Vec<u32> = (0..nv as u32).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
        order.shuffle(&mut rng);
        builder.seed_triangle(&mut order);
        for i in 3..nv {
            builder.insert(order[i]);
            debug_assert_eq!(builder.live, 2 * (i + 1) - 2);
        }
        assert_eq!(builder.live, 2 * nv - 2);
        builder.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn solid_triangle_count(&self) -> usize {
        self.n_solid
    }

    /// Deduplicated site coordinates; `triangles` indexes into this.
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.verts
    }

    /// Original input id represented by each vertex (the smallest id among
    /// coordinate duplicates).
    pub fn site_id(&self, vertex: u32) -> u32 {
        self.site_ids[vertex as usize]
    }

    /// Solid triangles as vertex-index triples, positively oriented.
    pub fn triangles(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        self.tris.iter().copied().filter(|t| !is_ghost_triple(*t))
    }

    fn vertex_link(&self, v: u32, mut f: impl FnMut(u32)) {
        let start = self.vert_tri[v as usize];
        let mut t = start;
        let mut guard = 0usize;
        loop {
            let tv = self.tris[t as usize];
            let s = tv.iter().position(|&x| x == v).expect("vertex not in its triangle");
            for off in [1, 2] {
                let w = tv[(s + off) % 3];
                if w != GHOST {
                    f(w);
                }
            }
            t = self.nbrs[t as usize][(s + 1) % 3];
            guard += 1;
            assert!(guard <= self.tris.len(), "vertex link is not a closed cycle");
            if t == start {
                break;
            }
        }
    }

    /// Exact nearest site to `q` under the (squared distance, id) order:
    /// greedy descent over the vertex adjacency graph, with breadth-first
    /// exploration of equal-distance plateaus.
    ///
    /// Correctness sketch: from any non-nearest vertex some Delaunay
    /// neighbor is strictly closer (in true distance), so true distances
    /// along that path are decreasing and their rounded values never rise;
    /// all globally minimal-rounded-distance vertices are therefore
    /// connected through the plateau the descent ends on, and the smallest
    /// id in that plateau is the global answer.
    pub fn nearest(&self, q: &[f64]) -> (u32, f64) {
        debug_assert_eq!(q.len(), 2);
        let key = |v: u32| {
            (
                sq_dist_slices(&self.verts[v as usize], q),
                self.site_ids[v as usize],
            )
        };
        let mut best = self.sample[0];
        let mut best_key = key(best);
        for &v in &self.sample[1..] {
            let k = key(v);
            if k < best_key {
                best = v;
                best_key = k;
            }
        }
        loop {
            // Greedy: move to the strictly closer neighbor with the smallest
            // key, if any.
            let mut next: Option<(f64, u32, u32)> = None;
            self.vertex_link(best, |w| {
                let (sq, id) = key(w);
                if sq < best_key.0 {
                    let cand = (sq, id, w);
                    if next.is_none_or(|n| (cand.0, cand.1) < (n.0, n.1)) {
                        next = Some(cand);
                    }
                }
            });
            if let Some((sq, id, w)) = next {
                best = w;
                best_key = (sq, id);
                continue;
            }
            // Plateau: explore the connected component of equal distance,
            // escaping if a strictly closer vertex appears on its fringe.
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![best];
            seen.insert(best);
            let mut escape: Option<(f64, u32, u32)> = None;
            while let Some(v) = stack.pop() {
                let k = key(v);
                if (k, v) < (best_key, best) {
                    best_key = k;
                    best = v;
                }
                self.vertex_link(v, |w| {
                    if seen.contains(&w) {
                        return;
                    }
                    let (sq, id) = key(w);
                    if sq == best_key.0 {
                        seen.insert(w);
                        stack.push(w);
                    } else if sq < best_key.0 {
                        let cand = (sq, id, w);
                        if escape.is_none_or(|e| (cand.0, cand.1) < (e.0, e.1)) {
                            escape = Some(cand);
                        }
                    }
                });
            }
            match escape {
                Some((sq, id, w)) => {
                    best = w;
                    best_key = (sq, id);
                }
                None => return (best_key.1, best_key.0),
            }
        }
    }

    /// Exhaustive structural validation: orientation, reciprocity, Euler
    /// count, and the empty-circumcircle property against every vertex.
    /// O(triangles · vertices); test support.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let nv = self.verts.len();
        if self.tris.len() != 2 * nv - 2 {
            return Err(format!(
                "expected {} triangles on the closed surface, found {}",
                2 * nv - 2,
                self.tris.len()
            ));
        }
        for (t, tv) in self.tris.iter().enumerate() {
            for k in 0..3 {
                let nb = self.nbrs[t][k];
                let back = self.nbrs[nb as usize].iter().filter(|&&x| x == t as u32).count();
                if back == 0 {
                    return Err(format!("adjacency not reciprocal at triangle {t} edge {k}"));
                }
                let (u, w) = (tv[(k + 1) % 3], tv[(k + 2) % 3]);
                let nbv = self.tris[nb as usize];
                if !(nbv.contains(&u) && nbv.contains(&w)) {
                    return Err(format!("neighbor {nb} does not share edge {u}-{w}"));
                }
            }
            if !is_ghost_triple(*tv) {
                let (a, b, c) = (tv[0] as usize, tv[1] as usize, tv[2] as usize);
                if orient2d_sign(self.verts[a], self.verts[b], self.verts[c]) != 1 {
                    return Err(format!("triangle {t} is not positively oriented"));
                }
                for v in 0..nv {
                    let v32 = v as u32;
                    if tv.contains(&v32) {
                        continue;
                    }
                    if incircle_sign(self.verts[a], self.verts[b], self.verts[c], self.verts[v])
                        > 0
                    {
                        return Err(format!(
                            "vertex {v} strictly inside the circumcircle of triangle {t}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
