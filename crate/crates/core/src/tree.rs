//! The CGR-tree: a quaternary digital search tree fed with the reversed
//! prefixes `W(n) = U_n U_{n-1} ... U_1` of a sequence.
//!
//! Exactly one node is created per letter, so node `n` (in storage order) is
//! the node that received `W(n)`; the root is node 0. Along any branch the
//! insertion indices increase with depth, which lets every past tree `T_m`
//! (`m <= n`) be read off the current one.

use std::io::{self, Write};

use rand::Rng;

use crate::alphabet::{letters_to_string, Nucleotide};
use crate::error::{Error, Result};
use crate::pattern::Pattern;

const VACANT: u32 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    children: [u32; 4],
    depth: u32,
}

impl Node {
    fn leaf(depth: u32) -> Self {
        Node { children: [VACANT; 4], depth }
    }
}

/// Outcome of one insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertionRecord {
    /// Insertion index `n`.
    pub n: usize,
    /// `D_n`, in edges from the root.
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct CgrTree {
    letters: Vec<Nucleotide>,
    nodes: Vec<Node>,
    /// `vacant[d]`: empty child slots at depth `d` whose parent exists.
    vacant: Vec<u64>,
    min_vacant_depth: usize,
    longest: usize,
    profile: Vec<u64>,
}

impl Default for CgrTree {
    fn default() -> Self {
        Self::new()
    }
}

impl CgrTree {
    pub fn new() -> Self {
        CgrTree {
            letters: Vec::new(),
            nodes: vec![Node::leaf(0)],
            vacant: vec![0, 4],
            min_vacant_depth: 1,
            longest: 0,
            profile: vec![0],
        }
    }

    pub fn with_capacity(n: usize) -> Self {
        let mut t = Self::new();
        t.letters.reserve(n);
        t.nodes.reserve(n);
        t
    }

    pub fn from_letters(letters: &[Nucleotide]) -> Self {
        let mut t = Self::with_capacity(letters.len());
        for &u in letters {
            t.insert_letter(u);
        }
        t
    }

    /// Consumes `U_n = u` and inserts `W(n)`.
    pub fn insert_letter(&mut self, u: Nucleotide) -> InsertionRecord {
        self.letters.push(u);
        let n = self.letters.len();

        let mut node = 0usize;
        let mut pos = n;
        let (parent, slot) = loop {
            // depth k of the walk reads U_{n-k+1}; pos >= 1 because depth <= n
            let c = self.letters[pos - 1].index();
            let child = self.nodes[node].children[c];
            if child == VACANT {
                break (node, c);
            }
            node = child as usize;
            pos -= 1;
        };

        let depth = self.nodes[parent].depth as usize + 1;
        self.nodes[parent].children[slot] = n as u32;
        self.nodes.push(Node::leaf(depth as u32));

        self.vacant[depth] -= 1;
        if self.vacant.len() <= depth + 1 {
            self.vacant.push(0);
        }
        self.vacant[depth + 1] += 4;
        while self.vacant[self.min_vacant_depth] == 0 {
            self.min_vacant_depth += 1;
        }
        if depth > self.longest {
            self.longest = depth;
        }
        if self.profile.len() <= depth {
            self.profile.resize(depth + 1, 0);
        }
        self.profile[depth] += 1;

        InsertionRecord { n, depth }
    }

    pub fn extend<I: IntoIterator<Item = Nucleotide>>(&mut self, letters: I) {
        for u in letters {
            self.insert_letter(u);
        }
    }

    /// Number of non-root nodes, equal to the number of letters consumed.
    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Nucleotide] {
        &self.letters
    }

    /// `l_n`: one less than the smallest depth of a vacant slot.
    pub fn shortest(&self) -> usize {
        self.min_vacant_depth - 1
    }

    /// `L_n`: the maximum node depth.
    pub fn longest(&self) -> usize {
        self.longest
    }

    /// `profile[d]` = number of nodes at depth `d` (`profile[0] = 0`, root not counted).
    pub fn depth_profile(&self) -> &[u64] {
        &self.profile
    }

    /// Depth of node `n`, i.e. the past insertion depth `D_n`. Panics if `n` is 0 or too large.
    pub fn insertion_depth(&self, n: usize) -> usize {
        assert!(n >= 1 && n <= self.size(), "no insertion with index {n}");
        self.nodes[n].depth as usize
    }

    /// Last insertion depth `D_n`, or `None` for an empty tree.
    pub fn last_depth(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.insertion_depth(self.size()))
    }

    /// Child of node `node` along `letter`, if present.
    pub fn child(&self, node: usize, letter: Nucleotide) -> Option<usize> {
        match self.nodes[node].children[letter.index()] {
            VACANT => None,
            c => Some(c as usize),
        }
    }

    /// Letters from the root to node `n`: `U_n U_{n-1} ... U_{n-d+1}`.
    pub fn node_path(&self, n: usize) -> Vec<Nucleotide> {
        let d = self.insertion_depth(n);
        self.letters[n - d..n].iter().rev().copied().collect()
    }

    /// `X_m(s)` for a past tree `T_m`, `m <= size`.
    ///
    /// A finite pattern is enough when the walk stops inside it, or when its
    /// last node has no children in `T_m` (every extension then gives the same
    /// value). Otherwise the result would depend on letters the pattern does
    /// not provide and [`Error::PatternTooShort`] is returned.
    pub fn branch_length_at(&self, m: usize, s: &Pattern) -> Result<usize> {
        assert!(m <= self.size(), "tree has only {} nodes", self.size());
        let mut node = 0usize;
        let mut k = 0usize;
        loop {
            let Some(letter) = s.letter(k) else {
                let has_child = self.nodes[node].children.iter().any(|&c| c != VACANT && c as usize <= m);
                return if has_child { Err(Error::PatternTooShort { available: k }) } else { Ok(k) };
            };
            let child = self.nodes[node].children[letter.index()];
            if child == VACANT || child as usize > m {
                return Ok(k);
            }
            node = child as usize;
            k += 1;
        }
    }

    /// `X_n(s)`: length of the branch along `s` in the current tree.
    pub fn branch_length(&self, s: &Pattern) -> Result<usize> {
        self.branch_length_at(self.size(), s)
    }

    /// `T_k(s)`: size of the first tree containing `s^(k)`; `Ok(None)` when the
    /// sequence consumed so far is too short to reach level `k`.
    pub fn first_tree_size(&self, s: &Pattern, k: usize) -> Result<Option<usize>> {
        let mut node = 0usize;
        for i in 0..k {
            let letter = s.letter(i).ok_or(Error::PatternTooShort { available: i })?;
            match self.nodes[node].children[letter.index()] {
                VACANT => return Ok(None),
                c => node = c as usize,
            }
        }
        Ok(Some(node))
    }

    /// `M_n`: depth of a node drawn uniformly among the `n` inserted nodes.
    pub fn random_path_length<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyTree);
        }
        let n = rng.gen_range(1..=self.size());
        Ok(self.insertion_depth(n))
    }

    /// Writes `insertion_index,depth,path`, one node per line in insertion order.
    pub fn write_dump<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "insertion_index,depth,path")?;
        for n in 1..=self.size() {
            writeln!(out, "{},{},{}", n, self.insertion_depth(n), letters_to_string(&self.node_path(n)))?;
        }
        Ok(())
    }
}

/// `T_k(s)` for the tree grown from `letters`.
pub fn first_tree_size(s: &Pattern, letters: &[Nucleotide], k: usize) -> Result<Option<usize>> {
    CgrTree::from_letters(letters).first_tree_size(s, k)
}

/// Length of the longest run of `v` in `letters`, by direct scan.
pub fn longest_run(letters: &[Nucleotide], v: Nucleotide) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &u in letters {
        if u == v {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// One row of the statistics snapshot `n,shortest,longest,depth_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub n: usize,
    pub shortest: usize,
    pub longest: usize,
    pub depth: usize,
}

impl Snapshot {
    pub const CSV_HEADER: &'static str = "n,shortest,longest,depth_n";

    pub fn of(tree: &CgrTree) -> Option<Snapshot> {
        Some(Snapshot { n: tree.size(), shortest: tree.shortest(), longest: tree.longest(), depth: tree.last_depth()? })
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.n, self.shortest, self.longest, self.depth)
    }
}
