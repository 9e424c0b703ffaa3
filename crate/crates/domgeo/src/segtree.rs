//! Static balanced-tree skeleton over a sorted array, shared by the
//! priority search tree and the offline sweep's coordinate tree.
//!
//! Nodes cover half-open position ranges `[lo, hi)` of the underlying
//! sorted key array and split at the positional median, so the shape is
//! determined by the length alone and the height is ⌈log₂ len⌉ + 1.

pub(crate) const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SegNode {
    pub lo: u32,
    pub hi: u32,
    pub left: u32,
    pub right: u32,
}

impl SegNode {
    pub fn is_leaf(&self) -> bool {
        self.left == NO_NODE
    }

    pub fn mid(&self) -> u32 {
        self.lo + (self.hi - self.lo) / 2
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Skeleton {
    pub nodes: Vec<SegNode>,
    pub root: u32,
}

impl Skeleton {
    pub fn build(len: usize) -> Self {
        if len == 0 {
            return Self {
                nodes: Vec::new(),
                root: NO_NODE,
            };
        }
        let mut nodes = Vec::with_capacity(2 * len - 1);
        let root = build_rec(&mut nodes, 0, len as u32);
        Self { nodes, root }
    }

    /// Nodes on the root-to-leaf path of `pos`, top down.
    pub fn path_to(&self, pos: u32) -> PathIter<'_> {
        debug_assert!(self.root != NO_NODE);
        PathIter {
            skeleton: self,
            cur: self.root,
            pos,
        }
    }

    /// Canonical decomposition of the position range `[i0, i1)`: calls `f`
    /// for every maximal node fully inside the range. Returns the number of
    /// nodes visited.
    pub fn decompose(&self, i0: u32, i1: u32, f: &mut impl FnMut(u32)) -> u64 {
        if self.root == NO_NODE || i0 >= i1 {
            return 0;
        }
        let mut visited = 0;
        self.decompose_rec(self.root, i0, i1, f, &mut visited);
        visited
    }

    fn decompose_rec(&self, idx: u32, i0: u32, i1: u32, f: &mut impl FnMut(u32), visited: &mut u64) {
        *visited += 1;
        let node = self.nodes[idx as usize];
        if i0 <= node.lo && node.hi <= i1 {
            f(idx);
            return;
        }
        debug_assert!(!node.is_leaf());
        let mid = node.mid();
        if i0 < mid {
            self.decompose_rec(node.left, i0, i1, f, visited);
        }
        if i1 > mid {
            self.decompose_rec(node.right, i0, i1, f, visited);
        }
    }
}

fn build_rec(nodes: &mut Vec<SegNode>, lo: u32, hi: u32) -> u32 {
    let idx = nodes.len() as u32;
    nodes.push(SegNode {
        lo,
        hi,
        left: NO_NODE,
        right: NO_NODE,
    });
    if hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let left = build_rec(nodes, lo, mid);
        let right = build_rec(nodes, mid, hi);
        nodes[idx as usize].left = left;
        nodes[idx as usize].right = right;
    }
    idx
}

pub(crate) struct PathIter<'a> {
    skeleton: &'a Skeleton,
    cur: u32,
    pos: u32,
}

impl Iterator for PathIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.cur == NO_NODE {
            return None;
        }
        let idx = self.cur;
        let node = self.skeleton.nodes[idx as usize];
        debug_assert!(node.lo <= self.pos && self.pos < node.hi);
        self.cur = if node.is_leaf() {
            NO_NODE
        } else if self.pos < node.mid() {
            node.left
        } else {
            node.right
        };
        Some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_ranges() {
        for len in [1usize, 2, 3, 7, 8, 64, 1000] {
            let sk = Skeleton::build(len);
            assert_eq!(sk.nodes.len(), 2 * len - 1);
            for n in &sk.nodes {
                if n.is_leaf() {
                    assert_eq!(n.hi - n.lo, 1);
                } else {
                    let (l, r) = (sk.nodes[n.left as usize], sk.nodes[n.right as usize]);
                    assert_eq!((l.lo, l.hi), (n.lo, n.mid()));
                    assert_eq!((r.lo, r.hi), (n.mid(), n.hi));
                }
            }
        }
        assert_eq!(Skeleton::build(0).root, NO_NODE);
    }

    #[test]
    fn decompose_tiles_ranges_disjointly() {
        let len = 37u32;
        let sk = Skeleton::build(len as usize);
        for i0 in 0..=len {
            for i1 in i0..=len {
                let mut covered = vec![false; len as usize];
                let mut count = 0u32;
                sk.decompose(i0, i1, &mut |idx| {
                    count += 1;
                    let n = sk.nodes[idx as usize];
                    for p in n.lo..n.hi {
                        assert!(!covered[p as usize], "overlap at {p}");
                        covered[p as usize] = true;
                    }
                });
                for p in 0..len {
                    assert_eq!(covered[p as usize], i0 <= p && p < i1);
                }
                // Canonical count bound for a 1-D tree.
                assert!(count <= 2 * (len as f64 + 2.0).log2().ceil() as u32 + 2);
            }
        }
    }

    #[test]
    fn paths_end_at_the_right_leaf() {
        let sk = Skeleton::build(19);
        for pos in 0..19u32 {
            let path: Vec<u32> = sk.path_to(pos).collect();
            assert_eq!(path[0], sk.root);
            let last = sk.nodes[*path.last().unwrap() as usize];
            assert!(last.is_leaf());
            assert_eq!(last.lo, pos);
        }
    }
}
