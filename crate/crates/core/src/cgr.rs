//! The dyadic CGR map on the unit square.
//!
//! Vertices: `A = (0,0)`, `C = (0,1)`, `G = (1,1)`, `T = (1,0)`. Each step moves
//! halfway from the current point toward the vertex of the next letter, so
//! after `n` letters
//!
//! ```text
//! X(n) = sum_{k=1..n} l(U_k) / 2^(n-k+1) + X(0) / 2^n
//! ```

use crate::alphabet::{Nucleotide, Word};
use crate::tree::CgrTree;

pub type Point = (f64, f64);

pub const CENTER: Point = (0.5, 0.5);

#[inline]
pub fn vertex(n: Nucleotide) -> Point {
    match n {
        Nucleotide::A => (0.0, 0.0),
        Nucleotide::C => (0.0, 1.0),
        Nucleotide::G => (1.0, 1.0),
        Nucleotide::T => (1.0, 0.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgrPoint {
    pub x: f64,
    pub y: f64,
    /// 1-based position in the sequence.
    pub index: usize,
}

/// Half-open subsquare `Sw = sum l(w_k)/2^(m-k+1) + [0, 2^-m)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Subsquare {
    pub word: Word,
    /// Lower-left corner.
    pub corner: Point,
    pub side: f64,
}

impl Subsquare {
    pub fn of(word: &[Nucleotide]) -> Self {
        let corner = dyadic_sum(word, (0.0, 0.0));
        Subsquare { word: Word::from(word), corner, side: 0.5f64.powi(word.len() as i32) }
    }

    pub fn center(&self) -> Point {
        (self.corner.0 + self.side / 2.0, self.corner.1 + self.side / 2.0)
    }

    /// Lower edges inclusive, upper edges exclusive.
    pub fn contains(&self, (x, y): Point) -> bool {
        x >= self.corner.0 && x < self.corner.0 + self.side && y >= self.corner.1 && y < self.corner.1 + self.side
    }

    /// The four subsquares of the next level: `u w` for each letter `u`.
    ///
    /// Prepending a letter halves the weight of every existing letter, so the
    /// children of `Sw` are `S(uw)`, not `S(wu)`.
    pub fn children(&self) -> [Subsquare; 4] {
        Nucleotide::ALL.map(|u| {
            let mut w = Vec::with_capacity(self.word.len() + 1);
            w.push(u);
            w.extend_from_slice(&self.word);
            Subsquare::of(&w)
        })
    }
}

/// `sum_{k=1..m} l(w_k) / 2^(m-k+1) + origin / 2^m`, evaluated by the midpoint
/// recursion.
pub fn dyadic_sum(word: &[Nucleotide], origin: Point) -> Point {
    word.iter().fold(origin, |(x, y), &u| {
        let (vx, vy) = vertex(u);
        ((x + vx) / 2.0, (y + vy) / 2.0)
    })
}

/// The CGR points `X(1) ... X(n)`.
///
/// Panics if `start` lies outside the unit square.
pub fn cgr_trajectory(letters: &[Nucleotide], start: Point) -> Vec<CgrPoint> {
    assert!(
        (0.0..=1.0).contains(&start.0) && (0.0..=1.0).contains(&start.1),
        "start point {start:?} outside the unit square"
    );
    let mut out = Vec::with_capacity(letters.len());
    let (mut x, mut y) = start;
    for (i, &u) in letters.iter().enumerate() {
        let (vx, vy) = vertex(u);
        x = (x + vx) / 2.0;
        y = (y + vy) / 2.0;
        out.push(CgrPoint { x, y, index: i + 1 });
    }
    out
}

/// Recovers `X(n-1) = 2 X(n) - l(U_n)`.
pub fn previous_point(p: Point, letter: Nucleotide) -> Point {
    let (vx, vy) = vertex(letter);
    (2.0 * p.0 - vx, 2.0 * p.1 - vy)
}

/// `#{i >= |w| : X(i) in Sw}`, the number of occurrences of `w` in the sequence.
pub fn count_in_subsquare(points: &[CgrPoint], w: &[Nucleotide]) -> usize {
    assert!(!w.is_empty(), "word must be non-empty");
    let square = Subsquare::of(w);
    points
        .iter()
        .filter(|p| p.index >= w.len() && square.contains((p.x, p.y)))
        .count()
}

/// One point per tree node: the center of the node's subsquare with `X(0) = (1/2, 1/2)`.
///
/// Node words are read from the root, `W1 ... Wd`, with `W1` carrying the
/// smallest weight.
pub fn historyless_points(tree: &CgrTree) -> Vec<(Word, Point)> {
    (1..=tree.size())
        .map(|n| {
            let path = tree.node_path(n);
            let point = dyadic_sum(&path, CENTER);
            (Word::from(path), point)
        })
        .collect()
}
