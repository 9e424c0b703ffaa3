//! Priority search tree over 2-D feature points: a balanced search tree on
//! the x-coordinate whose stored entries additionally satisfy a min-heap
//! property on y, supporting insert, delete, and reporting of all entries
//! strictly below-left of a query corner in O(log n + k) node visits.
//!
//! The tree is built over a declared key universe: every (x, id) pair that
//! may ever be inserted is supplied up front, which fixes a static balanced
//! skeleton (the sweep that drives this structure always knows all keys).
//! Entries live in per-node slots and trickle along the search path of
//! their key, so an empty slot implies an empty subtree.

use std::cell::Cell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::segtree::{Skeleton, NO_NODE};

/// A stored point: rating coordinates plus its dataset index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PstEntry {
    pub x: f64,
    pub y: f64,
    pub id: u32,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    y: f64,
    id: u32,
    pos: u32,
}

/// Declared multiplier for the per-query node-visit bound
/// `QUERY_VISIT_FACTOR · (log₂(size + 2) + k)`.
///
/// A query enters at most 2·(h+1) nodes along the boundary path of its
/// x-threshold plus at most 3 per reported entry, where h ≤ 33 for any
/// u32-indexable universe; since stored entries sit within depth `size` of
/// the root, the boundary-path term is also at most 2·(size+1), and the
/// factor 16 dominates both regimes.
pub const QUERY_VISIT_FACTOR: u64 = 16;

/// Priority search tree with a fixed key universe.
#[derive(Debug, Clone)]
pub struct PrioritySearchTree {
    skeleton: Skeleton,
    /// (x, id) pairs sorted lexicographically; position = leaf index.
    keys: Vec<(f64, u32)>,
    slots: Vec<Option<Slot>>,
    pos_of_id: HashMap<u32, u32>,
    stored: Vec<bool>,
    size: usize,
    nodes_visited: Cell<u64>,
}

impl PrioritySearchTree {
    /// Declares the key universe: every (x, id) pair insertable later.
    /// Ids must be distinct; x-ties are disambiguated by id so all keys are
    /// distinct.
    pub fn new(keys: impl IntoIterator<Item = (f64, u32)>) -> Result<Self> {
        let mut keys: Vec<(f64, u32)> = keys.into_iter().collect();
        for &(x, _) in &keys {
            if !x.is_finite() {
                return Err(Error::NonFiniteCoordinate(format!("{x}")));
            }
        }
        keys.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut pos_of_id = HashMap::with_capacity(keys.len());
        for (pos, &(_, id)) in keys.iter().enumerate() {
            if pos_of_id.insert(id, pos as u32).is_some() {
                return Err(Error::DuplicateId(id));
            }
        }
        let skeleton = Skeleton::build(keys.len());
        let slots = vec![None; skeleton.nodes.len()];
        let stored = vec![false; keys.len()];
        Ok(Self {
            skeleton,
            keys,
            slots,
            pos_of_id,
            stored,
            size: 0,
            nodes_visited: Cell::new(0),
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Total node visits across all operations so far.
    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited.get()
    }

    /// The stored entry with the lexicographically smallest (y, id), i.e.
    /// the root slot.
    pub fn peek_min_y(&self) -> Option<PstEntry> {
        if self.skeleton.root == NO_NODE {
            return None;
        }
        self.slots[self.skeleton.root as usize].map(|s| PstEntry {
            x: self.keys[s.pos as usize].0,
            y: s.y,
            id: s.id,
        })
    }

    #[inline]
    fn visit(&self) {
        self.nodes_visited.set(self.nodes_visited.get() + 1);
    }

    pub fn insert(&mut self, e: PstEntry) -> Result<()> {
        if !e.y.is_finite() {
            return Err(Error::NonFiniteCoordinate(format!("{}", e.y)));
        }
        let pos = *self.pos_of_id.get(&e.id).ok_or(Error::UnknownId(e.id))?;
        if self.keys[pos as usize].0.to_bits() != e.x.to_bits() {
            return Err(Error::InvalidParameter(format!(
                "entry x {} differs from the declared key x {} for id {}",
                e.x, self.keys[pos as usize].0, e.id
            )));
        }
        if self.stored[pos as usize] {
            return Err(Error::DuplicateId(e.id));
        }
        let mut carry = Slot {
            y: e.y,
            id: e.id,
            pos,
        };
        let mut cur = self.skeleton.root;
        loop {
            self.visit();
            let slot = &mut self.slots[cur as usize];
            match slot {
                None => {
                    *slot = Some(carry);
                    break;
                }
                Some(s) => {
                    if (carry.y, carry.id) < (s.y, s.id) {
                        std::mem::swap(s, &mut carry);
                    }
                }
            }
            let node = self.skeleton.nodes[cur as usize];
            debug_assert!(!node.is_leaf(), "leaf slot was occupied by its own key");
            cur = if carry.pos < node.mid() {
                node.left
            } else {
                node.right
            };
        }
        self.stored[pos as usize] = true;
        self.size += 1;
        Ok(())
    }

    pub fn delete(&mut self, id: u32) -> Result<()> {
        let pos = *self.pos_of_id.get(&id).ok_or(Error::UnknownId(id))?;
        if !self.stored[pos as usize] {
            return Err(Error::IdNotStored(id));
        }
        // The entry rests somewhere on the search path of its key.
        let mut hole = NO_NODE;
        for idx in self.skeleton.path_to(pos) {
            self.visit();
            if matches!(self.slots[idx as usize], Some(s) if s.pos == pos) {
                hole = idx;
                break;
            }
        }
        debug_assert!(hole != NO_NODE, "stored entry missing from its path");
        self.slots[hole as usize] = None;
        // Pull the (y, id)-smaller child up into the hole until the hole
        // reaches an empty frontier.
        let mut cur = hole;
        loop {
            let node = self.skeleton.nodes[cur as usize];
            if node.is_leaf() {
                break;
            }
            let pick = match (
                self.slots[node.left as usize],
                self.slots[node.right as usize],
            ) {
                (None, None) => break,
                (Some(_), None) => node.left,
                (None, Some(_)) => node.right,
                (Some(l), Some(r)) => {
                    if (l.y, l.id) <= (r.y, r.id) {
                        node.left
                    } else {
                        node.right
                    }
                }
            };
            self.visit();
            self.slots[cur as usize] = self.slots[pick as usize].take();
            cur = pick;
        }
        self.stored[pos as usize] = false;
        self.size -= 1;
        Ok(())
    }

    /// Ids of all stored entries with x < x0 and y < y0 (both strict).
    pub fn query_dominated(&self, x0: f64, y0: f64) -> Vec<u32> {
        let mut out = Vec::new();
        if self.skeleton.root == NO_NODE {
            return out;
        }
        let i0 = self.keys.partition_point(|k| k.0 < x0) as u32;
        if i0 == 0 {
            return out;
        }
        self.query_rec(self.skeleton.root, i0, y0, &mut out);
        out
    }

    fn query_rec(&self, idx: u32, i0: u32, y0: f64, out: &mut Vec<u32>) {
        self.visit();
        let Some(slot) = self.slots[idx as usize] else {
            return; // empty slot ⇒ empty subtree
        };
        if slot.y >= y0 {
            return; // heap on y ⇒ whole subtree is too high
        }
        if slot.pos < i0 {
            out.push(slot.id);
        }
        let node = self.skeleton.nodes[idx as usize];
        if node.is_leaf() {
            return;
        }
        // Callers guarantee node.lo < i0, so the left child always overlaps
        // the reported position range [0, i0).
        self.query_rec(node.left, i0, y0, out);
        if node.mid() < i0 {
            self.query_rec(node.right, i0, y0, out);
        }
    }

    /// Full-tree walk asserting the structural invariants; test support.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut count = 0usize;
        if self.skeleton.root != NO_NODE {
            self.check_rec(self.skeleton.root, None, &mut count)?;
        }
        if count != self.size {
            return Err(format!("size {} but {} slots occupied", self.size, count));
        }
        let stored_count = self.stored.iter().filter(|&&s| s).count();
        if stored_count != self.size {
            return Err(format!(
                "size {} but {} keys marked stored",
                self.size, stored_count
            ));
        }
        Ok(())
    }

    fn check_rec(
        &self,
        idx: u32,
        min_key: Option<(f64, u32)>,
        count: &mut usize,
    ) -> std::result::Result<(), String> {
        let node = self.skeleton.nodes[idx as usize];
        match self.slots[idx as usize] {
            None => {
                // Empty slot must mean an entirely empty subtree.
                if !node.is_leaf() {
                    for child in [node.left, node.right] {
                        self.check_rec(child, None, count)?;
                        if self.slots[child as usize].is_some() {
                            return Err(format!("occupied child {child} under empty node {idx}"));
                        }
                    }
                }
                Ok(())
            }
            Some(s) => {
                *count += 1;
                if s.pos < node.lo || s.pos >= node.hi {
                    return Err(format!(
                        "slot pos {} outside node range [{}, {})",
                        s.pos, node.lo, node.hi
                    ));
                }
                if !self.stored[s.pos as usize] {
                    return Err(format!("slot holds unstored key position {}", s.pos));
                }
                if let Some(mk) = min_key {
                    if (s.y, s.id) < mk {
                        return Err(format!(
                            "heap violation: child ({}, {}) below parent ({}, {})",
                            s.y, s.id, mk.0, mk.1
                        ));
                    }
                }
                if !node.is_leaf() {
                    self.check_rec(node.left, Some((s.y, s.id)), count)?;
                    self.check_rec(node.right, Some((s.y, s.id)), count)?;
                }
                Ok(())
            }
        }
    }
}
