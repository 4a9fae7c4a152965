//! Rooted plane trees, protection numbers, and exhaustive enumeration.
//!
//! Trees are stored as a preorder arena: vertex `0` is the root, every vertex
//! has a larger index than its parent, and siblings appear in left-to-right
//! order. The canonical text form is the balanced-parenthesis string in which
//! a vertex is `(` followed by its children followed by `)`, so the single
//! vertex is `()` and the three-vertex path is `((()))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive enumeration; `Catalan(13) = 742 900` trees.
pub const DEFAULT_ORACLE_BOUND: usize = 14;

const NO_PARENT: u32 = u32::MAX;

/// A finite rooted tree whose children are ordered.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    parent: Vec<u32>,
    offsets: Vec<u32>,
    children: Vec<u32>,
}

impl PlaneTree {
    pub fn single_vertex() -> Self {
        Self::from_parents(vec![NO_PARENT])
    }

    /// Root with the given subtrees attached left to right.
    pub fn node(subtrees: &[PlaneTree]) -> Self {
        let mut parents = vec![NO_PARENT];
        for sub in subtrees {
            let base = parents.len() as u32;
            parents.extend(sub.parent.iter().map(|&p| if p == NO_PARENT { 0 } else { p + base }));
        }
        Self::from_parents(parents)
    }

    /// The path on `n` vertices (every vertex has at most one child).
    pub fn path(n: usize) -> Self {
        assert!(n >= 1, "a tree has at least one vertex");
        Self::from_parents((0..n as u32).map(|v| if v == 0 { NO_PARENT } else { v - 1 }).collect())
    }

    /// Builds a tree from the Dyck path of its non-root vertices: `true` is a
    /// step down into a new child, `false` a step back up. The path must be
    /// balanced and never go above the root.
    pub fn from_dyck_steps(steps: &[bool]) -> Result<Self> {
        let mut parents = Vec::with_capacity(steps.len() / 2 + 1);
        parents.push(NO_PARENT);
        let mut stack: Vec<u32> = vec![0];
        for (pos, &down) in steps.iter().enumerate() {
            if down {
                let v = parents.len() as u32;
                parents.push(*stack.last().expect("stack holds the root"));
                stack.push(v);
            } else {
                if stack.len() == 1 {
                    return Err(Error::MalformedTree(format!("step {pos} climbs above the root")));
                }
                stack.pop();
            }
        }
        if stack.len() != 1 {
            return Err(Error::MalformedTree("unbalanced step sequence".into()));
        }
        Ok(Self::from_parents(parents))
    }

    fn from_parents(parent: Vec<u32>) -> Self {
        let n = parent.len();
        let mut offsets = vec![0u32; n + 1];
        for &p in &parent[1..] {
            offsets[p as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut children = vec![0u32; n.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate().skip(1) {
            let slot = &mut fill[p as usize];
            children[*slot as usize] = v as u32;
            *slot += 1;
        }
        Self { parent, offsets, children }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v] {
            NO_PARENT => None,
            p => Some(p as usize),
        }
    }

    /// Children of `v` in left-to-right order.
    pub fn children(&self, v: usize) -> &[u32] {
        &self.children[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.offsets[v] == self.offsets[v + 1]
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.len()).filter(|&v| self.is_leaf(v)).count()
    }

    /// Protection number of every vertex, indexed in preorder.
    pub fn protection_numbers(&self) -> Vec<u32> {
        let n = self.len();
        let mut min_child = vec![u32::MAX; n];
        let mut pi = vec![0u32; n];
        for v in (0..n).rev() {
            pi[v] = match min_child[v] {
                u32::MAX => 0,
                m => m + 1,
            };
            if let Some(p) = self.parent(v) {
                min_child[p] = min_child[p].min(pi[v]);
            }
        }
        pi
    }

    /// Protection number of the root.
    pub fn protection_number(&self) -> u32 {
        self.protection_numbers()[0]
    }

    pub fn protection_profile(&self) -> ProtectionProfile {
        ProtectionProfile::from_values(&self.protection_numbers())
    }

    pub fn to_parens(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut stack: Vec<u32> = Vec::new();
        for v in 0..self.len() {
            let p = self.parent[v];
            while stack.last().is_some_and(|&top| top != p) {
                stack.pop();
                out.push(')');
            }
            out.push('(');
            stack.push(v as u32);
        }
        out.extend(std::iter::repeat_n(')', stack.len()));
        out
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bytes = s.as_bytes();
        if bytes.len() < 2 || bytes[0] != b'(' || bytes[bytes.len() - 1] != b')' {
            return Err(Error::MalformedTree(format!("{s:?} is not wrapped in a root pair")));
        }
        let mut steps = Vec::with_capacity(bytes.len() - 2);
        for (i, &b) in bytes[1..bytes.len() - 1].iter().enumerate() {
            match b {
                b'(' => steps.push(true),
                b')' => steps.push(false),
                other => {
                    return Err(Error::MalformedTree(format!(
                        "unexpected character {:?} at offset {}",
                        other as char,
                        i + 1
                    )))
                }
            }
        }
        Self::from_dyck_steps(&steps)
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_parens())
    }
}

impl fmt::Debug for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneTree({})", self.to_parens())
    }
}

/// Number of vertices of a tree that are `k`-protected, for every `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtectionProfile {
    pub n: usize,
    /// `counts[k]` vertices have protection number at least `k`; entries past
    /// the end are zero.
    pub counts: Vec<u64>,
}

impl ProtectionProfile {
    fn from_values(pi: &[u32]) -> Self {
        let max = pi.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; max + 1];
        for &p in pi {
            counts[p as usize] += 1;
        }
        for k in (0..max).rev() {
            counts[k] += counts[k + 1];
        }
        Self { n: pi.len(), counts }
    }

    pub fn at_least(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }
}

/// Every plane tree with a fixed number of vertices, in lexicographic order of
/// the parenthesis string (`(` sorts before `)`).
pub struct TreeEnumerator {
    pairs: usize,
    current: Option<Vec<bool>>,
}

impl TreeEnumerator {
    fn new(n: usize) -> Self {
        let pairs = n - 1;
        let first = (0..2 * pairs).map(|i| i < pairs).collect();
        Self { pairs, current: Some(first) }
    }
}

/// Moves `seq` to its lexicographic successor among balanced sequences with
/// `pairs` opening steps; returns false at the last one.
fn advance(seq: &mut [bool], pairs: usize) -> bool {
    let mut opens_before = Vec::with_capacity(seq.len());
    let mut balance_before = Vec::with_capacity(seq.len());
    let (mut opens, mut balance) = (0usize, 0i64);
    for &s in seq.iter() {
        opens_before.push(opens);
        balance_before.push(balance);
        if s {
            opens += 1;
            balance += 1;
        } else {
            balance -= 1;
        }
    }
    for i in (0..seq.len()).rev() {
        if seq[i] && balance_before[i] >= 1 {
            seq[i] = false;
            let remaining = pairs - opens_before[i];
            for (j, slot) in seq[i + 1..].iter_mut().enumerate() {
                *slot = j < remaining;
            }
            return true;
        }
    }
    false
}

impl Iterator for TreeEnumerator {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        let seq = self.current.as_mut()?;
        let tree = PlaneTree::from_dyck_steps(seq).expect("enumerated sequences are balanced");
        if !advance(seq, self.pairs) {
            self.current = None;
        }
        Some(tree)
    }
}

/// Per-size totals gathered in a single pass over all trees of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTally {
    pub n: usize,
    pub trees: u64,
    /// `r[k]`: trees whose root is `k`-protected.
    pub r: Vec<u64>,
    /// `s[k]`: `k`-protected vertices summed over all trees.
    pub s: Vec<u64>,
    /// `leaf_histogram[l]`: trees with exactly `l` leaves.
    pub leaf_histogram: Vec<u64>,
    pub total_leaves: u64,
}

impl OracleTally {
    pub fn r(&self, k: usize) -> u64 {
        self.r.get(k).copied().unwrap_or(0)
    }

    pub fn s(&self, k: usize) -> u64 {
        self.s.get(k).copied().unwrap_or(0)
    }
}

/// Brute-force ground truth, limited to sizes where enumeration is cheap.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    bound: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { bound: DEFAULT_ORACLE_BOUND }
    }
}

impl Oracle {
    pub fn with_bound(bound: usize) -> Self {
        Self { bound }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument("tree size must be positive".into()));
        }
        if n > self.bound {
            return Err(Error::OracleBoundExceeded { n, bound: self.bound });
        }
        Ok(())
    }

    pub fn enumerate(&self, n: usize) -> Result<TreeEnumerator> {
        self.check(n)?;
        Ok(TreeEnumerator::new(n))
    }

    pub fn tally(&self, n: usize) -> Result<OracleTally> {
        let mut tally = OracleTally {
            n,
            trees: 0,
            r: vec![0; n],
            s: vec![0; n],
            leaf_histogram: vec![0; n + 1],
            total_leaves: 0,
        };
        for tree in self.enumerate(n)? {
            let pi = tree.protection_numbers();
            tally.trees += 1;
            for k in 0..=pi[0] as usize {
                tally.r[k] += 1;
            }
            for &p in &pi {
                for k in 0..=p as usize {
                    tally.s[k] += 1;
                }
            }
            let leaves = tree.leaf_count();
            tally.leaf_histogram[leaves] += 1;
            tally.total_leaves += leaves as u64;
        }
        Ok(tally)
    }

    /// Number of `n`-vertex trees whose root is `k`-protected.
    pub fn r(&self, n: usize, k: usize) -> Result<u64> {
        Ok(self.tally(n)?.r(k))
    }

    /// Number of `k`-protected vertices summed over all `n`-vertex trees.
    pub fn s(&self, n: usize, k: usize) -> Result<u64> {
        Ok(self.tally(n)?.s(k))
    }
}

pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator> {
    Oracle::default().enumerate(n)
}

pub fn oracle_r(n: usize, k: usize) -> Result<u64> {
    Oracle::default().r(n, k)
}

pub fn oracle_s(n: usize, k: usize) -> Result<u64> {
    Oracle::default().s(n, k)
}
