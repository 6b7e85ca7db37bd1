//! Red-black tree keyed map with separate key and element types.
//!
//! Nodes live in an arena and link to each other by index; index 0 is a
//! shared black sentinel standing in for every leaf, so rotations and the
//! delete fixup never branch on "is this a leaf". Removed slots are
//! recycled through a free list.
//!
//! The element-level contract matters more than the key-level one here:
//! after `add(k, e)` on a fresh `k`, the stored elements are exactly the
//! previous elements plus `e`, and `remove(k)` takes out exactly the element
//! stored at `k`. Adding an existing key is rejected rather than treated as
//! an overwrite.

use std::cell::Cell;
use std::cmp::Ordering;

use thiserror::Error;

const NIL: u32 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Color {
    Red,
    Black,
}

// Descents only touch keys and links, so those share one array; elements
// live apart and are read only once a node is found. Keys are stored bare
// to keep links small: the sentinel and freed slots hold stale copies that
// are never compared against.
#[derive(Debug, Clone)]
struct Link<K> {
    key: K,
    parent: u32,
    left: u32,
    right: u32,
    color: Color,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("key is already present in the map")]
pub struct DuplicateKey;

/// Work counters. `calls` counts public map operations; `steps` counts
/// nodes visited during descents plus fixup iterations, which is the
/// quantity that scales with tree height.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpStats {
    pub calls: u64,
    pub steps: u64,
}

impl std::ops::Add for OpStats {
    type Output = OpStats;

    fn add(self, rhs: OpStats) -> OpStats {
        OpStats {
            calls: self.calls + rhs.calls,
            steps: self.steps + rhs.steps,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderedMap<K, E> {
    links: Vec<Link<K>>,
    slots: Vec<Option<E>>,
    free: Vec<u32>,
    root: u32,
    // Cached minimum; saves the left-spine walk on every peek and extract.
    leftmost: u32,
    len: usize,
    calls: Cell<u64>,
    steps: Cell<u64>,
}

impl<K: Ord + Clone, E> Default for OrderedMap<K, E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, E> OrderedMap<K, E> {
    pub fn new() -> Self {
        OrderedMap {
            // The sentinel is pushed by the first `add`, once a key exists
            // to fill it with.
            links: Vec::new(),
            slots: Vec::new(),
            free: Vec::new(),
            root: NIL,
            leftmost: NIL,
            len: 0,
            calls: Cell::new(0),
            steps: Cell::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn stats(&self) -> OpStats {
        OpStats {
            calls: self.calls.get(),
            steps: self.steps.get(),
        }
    }

    pub fn reset_stats(&self) {
        self.calls.set(0);
        self.steps.set(0);
    }

    /// Inserts `element` under a key not yet present.
    pub fn add(&mut self, key: K, element: E) -> Result<(), DuplicateKey> {
        self.tick_call();
        let mut parent = NIL;
        let mut cur = self.root;
        let mut went_left = false;
        let mut all_left = true;
        let mut visited = 0;
        while cur != NIL {
            visited += 1;
            parent = cur;
            let link = &self.links[cur as usize];
            match key.cmp(&link.key) {
                Ordering::Less => {
                    went_left = true;
                    cur = link.left;
                }
                Ordering::Greater => {
                    went_left = false;
                    all_left = false;
                    cur = link.right;
                }
                Ordering::Equal => {
                    self.add_steps(visited);
                    return Err(DuplicateKey);
                }
            }
        }
        self.add_steps(visited);

        let node = self.alloc(key, element, parent);
        if parent == NIL {
            self.root = node;
        } else if went_left {
            self.links[parent as usize].left = node;
        } else {
            self.links[parent as usize].right = node;
        }
        if all_left {
            self.leftmost = node;
        }
        self.len += 1;
        self.insert_fixup(node);
        Ok(())
    }

    /// Removes and returns the element stored at `key`, if any.
    pub fn remove(&mut self, key: &K) -> Option<E> {
        self.tick_call();
        let node = self.locate(key);
        if node == NIL {
            return None;
        }
        Some(self.delete_node(node).1)
    }

    pub fn find(&self, key: &K) -> Option<&E> {
        self.tick_call();
        let node = self.locate(key);
        if node == NIL {
            None
        } else {
            self.slots[node as usize].as_ref()
        }
    }

    pub fn contains_key(&self, key: &K) -> bool {
        self.find(key).is_some()
    }

    /// Smallest entry without removing it.
    pub fn min(&self) -> Option<(&K, &E)> {
        self.tick_call();
        if self.root == NIL {
            return None;
        }
        self.tick_step();
        let node = self.leftmost;
        Some((self.key(node), self.slots[node as usize].as_ref()?))
    }

    pub fn extract_min(&mut self) -> Option<(K, E)> {
        self.tick_call();
        if self.root == NIL {
            return None;
        }
        self.tick_step();
        Some(self.delete_node(self.leftmost))
    }

    /// In-order (ascending key) list of the stored elements.
    pub fn elements(&self) -> Vec<&E> {
        self.entries().into_iter().map(|(_, e)| e).collect()
    }

    /// In-order list of the stored keys.
    pub fn keys(&self) -> Vec<&K> {
        self.entries().into_iter().map(|(k, _)| k).collect()
    }

    pub fn entries(&self) -> Vec<(&K, &E)> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = Vec::new();
        let mut cur = self.root;
        while cur != NIL || !stack.is_empty() {
            while cur != NIL {
                stack.push(cur);
                cur = self.links[cur as usize].left;
            }
            let node = stack.pop().expect("stack is nonempty");
            if let Some(e) = self.slots[node as usize].as_ref() {
                out.push((&self.links[node as usize].key, e));
            }
            cur = self.links[node as usize].right;
        }
        out
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            if node == NIL {
                best = best.max(depth);
                continue;
            }
            let l = &self.links[node as usize];
            stack.push((l.left, depth + 1));
            stack.push((l.right, depth + 1));
        }
        best
    }

    /// Checks strict key order, parent links, the red-red rule, equal black
    /// height on every path, a black root and the cached length.
    pub fn validate(&self) -> bool {
        if self.links.is_empty() {
            return self.len == 0 && self.root == NIL && self.leftmost == NIL;
        }
        if self.links[NIL as usize].color != Color::Black {
            return false;
        }
        if self.root == NIL {
            return self.len == 0 && self.leftmost == NIL;
        }
        if self.leftmost != self.subtree_min_quiet(self.root) {
            return false;
        }
        if self.links[self.root as usize].color != Color::Black
            || self.links[self.root as usize].parent != NIL
        {
            return false;
        }
        let mut count = 0usize;
        if self.check_subtree(self.root, None, None, &mut count).is_none() {
            return false;
        }
        count == self.len
    }

    // Returns the black height of the subtree, or None on any violation.
    fn check_subtree(
        &self,
        node: u32,
        lower: Option<&K>,
        upper: Option<&K>,
        count: &mut usize,
    ) -> Option<usize> {
        if node == NIL {
            return Some(1);
        }
        let link = &self.links[node as usize];
        let key = &link.key;
        self.slots[node as usize].as_ref()?;
        if lower.is_some_and(|lo| key <= lo) || upper.is_some_and(|hi| key >= hi) {
            return None;
        }
        for child in [link.left, link.right] {
            if child != NIL {
                let c = &self.links[child as usize];
                if c.parent != node || (link.color == Color::Red && c.color == Color::Red) {
                    return None;
                }
            }
        }
        *count += 1;
        let lh = self.check_subtree(link.left, lower, Some(key), count)?;
        let rh = self.check_subtree(link.right, Some(key), upper, count)?;
        if lh != rh {
            return None;
        }
        Some(lh + usize::from(link.color == Color::Black))
    }

    fn tick_call(&self) {
        self.calls.set(self.calls.get() + 1);
    }

    fn tick_step(&self) {
        self.add_steps(1);
    }

    fn add_steps(&self, n: u64) {
        self.steps.set(self.steps.get() + n);
    }

    fn key(&self, node: u32) -> &K {
        &self.links[node as usize].key
    }

    fn color(&self, node: u32) -> Color {
        self.links[node as usize].color
    }

    fn set_color(&mut self, node: u32, color: Color) {
        self.links[node as usize].color = color;
    }

    fn left(&self, node: u32) -> u32 {
        self.links[node as usize].left
    }

    fn right(&self, node: u32) -> u32 {
        self.links[node as usize].right
    }

    fn parent(&self, node: u32) -> u32 {
        self.links[node as usize].parent
    }

    fn alloc(&mut self, key: K, element: E, parent: u32) -> u32 {
        if self.links.is_empty() {
            self.links.push(Link {
                key: key.clone(),
                parent: NIL,
                left: NIL,
                right: NIL,
                color: Color::Black,
            });
            self.slots.push(None);
        }
        let link = Link {
            key,
            parent,
            left: NIL,
            right: NIL,
            color: Color::Red,
        };
        match self.free.pop() {
            Some(idx) => {
                self.links[idx as usize] = link;
                self.slots[idx as usize] = Some(element);
                idx
            }
            None => {
                let idx = u32::try_from(self.links.len()).expect("arena exceeds u32 indices");
                self.links.push(link);
                self.slots.push(Some(element));
                idx
            }
        }
    }

    fn locate(&self, key: &K) -> u32 {
        let mut cur = self.root;
        let mut visited = 0;
        while cur != NIL {
            visited += 1;
            let link = &self.links[cur as usize];
            match key.cmp(&link.key) {
                Ordering::Less => cur = link.left,
                Ordering::Greater => cur = link.right,
                Ordering::Equal => break,
            }
        }
        self.add_steps(visited);
        cur
    }

    fn subtree_min_quiet(&self, mut node: u32) -> u32 {
        while self.left(node) != NIL {
            node = self.left(node);
        }
        node
    }

    fn subtree_min(&self, mut node: u32) -> u32 {
        let mut visited = 1;
        loop {
            let left = self.left(node);
            if left == NIL {
                break;
            }
            visited += 1;
            node = left;
        }
        self.add_steps(visited);
        node
    }

    fn rotate_left(&mut self, x: u32) {
        let y = self.right(x);
        let y_left = self.left(y);
        self.links[x as usize].right = y_left;
        if y_left != NIL {
            self.links[y_left as usize].parent = x;
        }
        let xp = self.parent(x);
        self.links[y as usize].parent = xp;
        if xp == NIL {
            self.root = y;
        } else if x == self.left(xp) {
            self.links[xp as usize].left = y;
        } else {
            self.links[xp as usize].right = y;
        }
        self.links[y as usize].left = x;
        self.links[x as usize].parent = y;
    }

    fn rotate_right(&mut self, x: u32) {
        let y = self.left(x);
        let y_right = self.right(y);
        self.links[x as usize].left = y_right;
        if y_right != NIL {
            self.links[y_right as usize].parent = x;
        }
        let xp = self.parent(x);
        self.links[y as usize].parent = xp;
        if xp == NIL {
            self.root = y;
        } else if x == self.right(xp) {
            self.links[xp as usize].right = y;
        } else {
            self.links[xp as usize].left = y;
        }
        self.links[y as usize].right = x;
        self.links[x as usize].parent = y;
    }

    fn insert_fixup(&mut self, mut z: u32) {
        while self.color(self.parent(z)) == Color::Red {
            self.tick_step();
            let p = self.parent(z);
            let g = self.parent(p);
            if p == self.left(g) {
                let uncle = self.right(g);
                if self.color(uncle) == Color::Red {
                    self.set_color(p, Color::Black);
                    self.set_color(uncle, Color::Black);
                    self.set_color(g, Color::Red);
                    z = g;
                } else {
                    if z == self.right(p) {
                        z = p;
                        self.rotate_left(z);
                    }
                    let p = self.parent(z);
                    let g = self.parent(p);
                    self.set_color(p, Color::Black);
                    self.set_color(g, Color::Red);
                    self.rotate_right(g);
                }
            } else {
                let uncle = self.left(g);
                if self.color(uncle) == Color::Red {
                    self.set_color(p, Color::Black);
                    self.set_color(uncle, Color::Black);
                    self.set_color(g, Color::Red);
                    z = g;
                } else {
                    if z == self.left(p) {
                        z = p;
                        self.rotate_right(z);
                    }
                    let p = self.parent(z);
                    let g = self.parent(p);
                    self.set_color(p, Color::Black);
                    self.set_color(g, Color::Red);
                    self.rotate_left(g);
                }
            }
        }
        let root = self.root;
        self.set_color(root, Color::Black);
    }

    // Replaces the subtree at `u` with the one at `v`. Writes v's parent
    // even when v is the sentinel; the delete fixup reads it back.
    fn transplant(&mut self, u: u32, v: u32) {
        let up = self.parent(u);
        if up == NIL {
            self.root = v;
        } else if u == self.left(up) {
            self.links[up as usize].left = v;
        } else {
            self.links[up as usize].right = v;
        }
        self.links[v as usize].parent = up;
    }

    fn delete_node(&mut self, z: u32) -> (K, E) {
        if z == self.leftmost {
            // The minimum has no left child: its successor is the leftmost
            // node of its right subtree, or else its parent.
            let r = self.right(z);
            self.leftmost = if r != NIL { self.subtree_min(r) } else { self.parent(z) };
        }
        let mut removed_color = self.color(z);
        let x;
        if self.left(z) == NIL {
            x = self.right(z);
            self.transplant(z, x);
        } else if self.right(z) == NIL {
            x = self.left(z);
            self.transplant(z, x);
        } else {
            let y = self.subtree_min(self.right(z));
            removed_color = self.color(y);
            x = self.right(y);
            if self.parent(y) == z {
                self.links[x as usize].parent = y;
            } else {
                self.transplant(y, x);
                let zr = self.right(z);
                self.links[y as usize].right = zr;
                self.links[zr as usize].parent = y;
            }
            self.transplant(z, y);
            let zl = self.left(z);
            self.links[y as usize].left = zl;
            self.links[zl as usize].parent = y;
            let zc = self.color(z);
            self.set_color(y, zc);
        }
        if removed_color == Color::Black {
            self.delete_fixup(x);
        }
        self.links[NIL as usize].parent = NIL;
        self.len -= 1;
        self.free.push(z);
        let key = self.links[z as usize].key.clone();
        let element = self.slots[z as usize].take().expect("deleted node has an element");
        (key, element)
    }

    fn delete_fixup(&mut self, mut x: u32) {
        while x != self.root && self.color(x) == Color::Black {
            self.tick_step();
            let p = self.parent(x);
            if x == self.left(p) {
                let mut w = self.right(p);
                if self.color(w) == Color::Red {
                    self.set_color(w, Color::Black);
                    self.set_color(p, Color::Red);
                    self.rotate_left(p);
                    w = self.right(self.parent(x));
                }
                if self.color(self.left(w)) == Color::Black
                    && self.color(self.right(w)) == Color::Black
                {
                    self.set_color(w, Color::Red);
                    x = self.parent(x);
                } else {
                    if self.color(self.right(w)) == Color::Black {
                        let wl = self.left(w);
                        self.set_color(wl, Color::Black);
                        self.set_color(w, Color::Red);
                        self.rotate_right(w);
                        w = self.right(self.parent(x));
                    }
                    let p = self.parent(x);
                    let pc = self.color(p);
                    self.set_color(w, pc);
                    self.set_color(p, Color::Black);
                    let wr = self.right(w);
                    self.set_color(wr, Color::Black);
                    self.rotate_left(p);
                    x = self.root;
                }
            } else {
                let mut w = self.left(p);
                if self.color(w) == Color::Red {
                    self.set_color(w, Color::Black);
                    self.set_color(p, Color::Red);
                    self.rotate_right(p);
                    w = self.left(self.parent(x));
                }
                if self.color(self.right(w)) == Color::Black
                    && self.color(self.left(w)) == Color::Black
                {
                    self.set_color(w, Color::Red);
                    x = self.parent(x);
                } else {
                    if self.color(self.left(w)) == Color::Black {
                        let wr = self.right(w);
                        self.set_color(wr, Color::Black);
                        self.set_color(w, Color::Red);
                        self.rotate_left(w);
                        w = self.left(self.parent(x));
                    }
                    let p = self.parent(x);
                    let pc = self.color(p);
                    self.set_color(w, pc);
                    self.set_color(p, Color::Black);
                    let wl = self.left(w);
                    self.set_color(wl, Color::Black);
                    self.rotate_right(p);
                    x = self.root;
                }
            }
        }
        self.set_color(x, Color::Black);
    }
}
