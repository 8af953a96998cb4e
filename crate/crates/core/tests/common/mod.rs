//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use cgrdst::sequence::{rng_from_seed, Rng as SeqRng};
use cgrdst::{CgrTree, Nucleotide, SequenceModel};
use rand::Rng;

pub const SKEWED: [f64; 4] = [0.6, 0.1, 0.1, 0.2];

pub fn letters(s: &str) -> Vec<Nucleotide> {
    s.chars().map(|c| Nucleotide::try_from(c).unwrap()).collect()
}

pub fn sticky() -> SequenceModel {
    SequenceModel::symmetric_markov(0.7).unwrap()
}

/// Markov model with every transition bounded away from zero.
pub fn random_markov<R: Rng>(rng: &mut R) -> SequenceModel {
    let mut q = [[0.0; 4]; 4];
    for row in q.iter_mut() {
        for x in row.iter_mut() {
            *x = rng.gen_range(0.05..1.0);
        }
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= s);
        // exact row sums
        let rest: f64 = row[..3].iter().sum();
        row[3] = 1.0 - rest;
    }
    SequenceModel::markov(q).unwrap()
}

pub fn random_iid<R: Rng>(rng: &mut R) -> SequenceModel {
    let mut p = [0.0; 4];
    for x in p.iter_mut() {
        *x = rng.gen_range(0.05..1.0);
    }
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p[3] = 1.0 - p[..3].iter().sum::<f64>();
    SequenceModel::iid(p).unwrap()
}

/// Uniform, skewed i.i.d., sticky Markov, one random Markov and one random i.i.d. model.
pub fn model_zoo(seed: u64) -> Vec<SequenceModel> {
    let mut rng = rng_from_seed(seed);
    vec![
        SequenceModel::uniform(),
        SequenceModel::iid(SKEWED).unwrap(),
        sticky(),
        random_markov(&mut rng),
        random_iid(&mut rng),
    ]
}

pub fn sample(model: &SequenceModel, n: usize, rng: &mut SeqRng) -> Vec<Nucleotide> {
    cgrdst::sequence::generate_with(model, n, rng)
}

/// Digital search tree rebuilt from scratch by inserting `W(1) ... W(n)` one
/// after the other into a map keyed by node word.
pub struct NaiveTree {
    /// node word (root to node) -> insertion index
    pub nodes: HashMap<Vec<Nucleotide>, usize>,
    pub paths: Vec<Vec<Nucleotide>>,
}

impl NaiveTree {
    pub fn build(letters: &[Nucleotide]) -> Self {
        let mut nodes = HashMap::new();
        let mut paths = Vec::new();
        for n in 1..=letters.len() {
            let w: Vec<Nucleotide> = letters[..n].iter().rev().copied().collect();
            let k = (1..=n).find(|&k| !nodes.contains_key(&w[..k])).expect("a vacant level exists");
            nodes.insert(w[..k].to_vec(), n);
            paths.push(w[..k].to_vec());
        }
        NaiveTree { nodes, paths }
    }

    pub fn longest(&self) -> usize {
        self.nodes.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Smallest depth of a missing child of an existing node (root included), minus one.
    pub fn shortest(&self) -> usize {
        let mut best = usize::MAX;
        let mut check = |parent: &[Nucleotide]| {
            for u in Nucleotide::ALL {
                let mut child = parent.to_vec();
                child.push(u);
                if !self.nodes.contains_key(&child) {
                    best = best.min(child.len() - 1);
                }
            }
        };
        check(&[]);
        for k in self.nodes.keys() {
            check(k);
        }
        best
    }
}

/// Full comparison of a tree against the naive reference; returns a description of the first mismatch.
pub fn compare_with_naive(letters: &[Nucleotide]) -> Result<(), String> {
    let tree = CgrTree::from_letters(letters);
    let naive = NaiveTree::build(letters);
    if tree.size() != naive.paths.len() {
        return Err(format!("size {} vs {}", tree.size(), naive.paths.len()));
    }
    for n in 1..=tree.size() {
        if tree.node_path(n) != naive.paths[n - 1] {
            return Err(format!("node {n}: path {:?} vs {:?}", tree.node_path(n), naive.paths[n - 1]));
        }
    }
    // child links, including the root
    let mut parents: Vec<(usize, Vec<Nucleotide>)> = vec![(0, Vec::new())];
    parents.extend((1..=tree.size()).map(|n| (n, tree.node_path(n))));
    for (id, path) in parents {
        for u in Nucleotide::ALL {
            let mut child = path.clone();
            child.push(u);
            if tree.child(id, u) != naive.nodes.get(&child).copied() {
                return Err(format!("child {u} of node {id}"));
            }
        }
    }
    if tree.shortest() != naive.shortest() || tree.longest() != naive.longest() {
        return Err(format!(
            "shortest/longest {}/{} vs {}/{}",
            tree.shortest(),
            tree.longest(),
            naive.shortest(),
            naive.longest()
        ));
    }
    Ok(())
}

/// Occurrences of `w` ending at positions `>= |w|` in `text`, by sliding window.
pub fn substring_count(text: &[Nucleotide], w: &[Nucleotide]) -> usize {
    if w.len() > text.len() {
        return 0;
    }
    text.windows(w.len()).filter(|win| *win == w).count()
}

/// `Y_r`: first `n` with `U_n U_{n-1} ... U_{n-r+1} = s1 ... sr`, on a fresh stationary chain.
pub fn simulate_y(model: &SequenceModel, s: &[Nucleotide], rng: &mut SeqRng) -> usize {
    let r = s.len();
    let target: Vec<Nucleotide> = s.iter().rev().copied().collect();
    let mut window: Vec<Nucleotide> = Vec::with_capacity(r);
    let mut prev = None;
    let mut n = 0;
    loop {
        let u = model.sample_next(prev, rng);
        prev = Some(u);
        n += 1;
        if window.len() == r {
            window.remove(0);
        }
        window.push(u);
        if window == target {
            return n;
        }
    }
}

/// `(T_{r-1}(s), T_r(s))` from a growing tree fed by a fresh stationary chain.
pub fn simulate_branch_times(model: &SequenceModel, s: &[Nucleotide], rng: &mut SeqRng) -> (usize, usize) {
    let r = s.len();
    let mut tree = CgrTree::new();
    let mut prev = None;
    let mut node = 0usize;
    let mut times = vec![0usize; r + 1];
    let mut level = 0usize;
    while level < r {
        let u = model.sample_next(prev, rng);
        prev = Some(u);
        let rec = tree.insert_letter(u);
        // at most one level is gained per insertion
        if let Some(child) = tree.child(node, s[level]) {
            node = child;
            level += 1;
            times[level] = rec.n;
        }
    }
    (times[r - 1], times[r])
}

/// Exact law of `Y_r` on `1..=horizon` by dynamic programming over
/// (matched length of the reversed word, last letter).
pub fn exact_y_law(model: &SequenceModel, s: &[Nucleotide], horizon: usize) -> Vec<f64> {
    let r = s.len();
    let w: Vec<usize> = s.iter().rev().map(|u| u.index()).collect();
    // next[j][c]: matched length after reading c in state j (j < r)
    let mut next = vec![[0usize; 4]; r];
    for j in 0..r {
        for c in 0..4 {
            let mut seen: Vec<usize> = w[..j].to_vec();
            seen.push(c);
            let k = (0..=seen.len().min(r))
                .rev()
                .find(|&k| seen[seen.len() - k..] == w[..k])
                .unwrap();
            next[j][c] = k;
        }
    }
    let q = model.transition_matrix();
    let p = model.stationary();
    let mut law = vec![0.0; horizon + 1];
    // mass[j][u]: not yet stopped, matched length j, last letter u
    let mut mass = vec![[0.0f64; 4]; r];
    for c in 0..4 {
        let j = next[0][c];
        if j == r {
            law[1] += p[c];
        } else {
            mass[j][c] += p[c];
        }
    }
    for n in 2..=horizon {
        let mut fresh = vec![[0.0f64; 4]; r];
        for j in 0..r {
            for u in 0..4 {
                let m = mass[j][u];
                if m == 0.0 {
                    continue;
                }
                for c in 0..4 {
                    let k = next[j][c];
                    let x = m * q[u][c];
                    if k == r {
                        law[n] += x;
                    } else {
                        fresh[k][c] += x;
                    }
                }
            }
        }
        mass = fresh;
    }
    law
}

/// Extremes and mean of `(1/n) ln(1/p(s^(n)))` over all `4^n` words.
pub fn brute_force_rates(model: &SequenceModel, n: usize) -> (f64, f64, f64) {
    fn walk(
        model: &SequenceModel,
        depth: usize,
        n: usize,
        last: Nucleotide,
        logp: f64,
        acc: &mut (f64, f64, f64),
    ) {
        if depth == n {
            let rate = -logp / n as f64;
            acc.0 = acc.0.min(rate);
            acc.1 = acc.1.max(rate);
            acc.2 += logp.exp() * rate;
            return;
        }
        // the word is spelled from s_n down to s_1, which follows the chain forward
        for u in Nucleotide::ALL {
            let q = model.transition(last, u);
            if q > 0.0 {
                walk(model, depth + 1, n, u, logp + q.ln(), acc);
            }
        }
    }
    let mut acc = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for v in Nucleotide::ALL {
        let p = model.letter_probability(v);
        if p > 0.0 {
            walk(model, 1, n, v, p.ln(), &mut acc);
        }
    }
    acc
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[usize], b: &[usize]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

pub fn seeded(seed: u64) -> SeqRng {
    rng_from_seed(seed)
}
