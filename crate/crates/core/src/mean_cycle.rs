//! Karp's minimum mean-weight cycle on a small dense digraph.
//!
//! `weights[u][v] = None` means there is no edge `u -> v`.

/// A cycle `nodes[0] -> nodes[1] -> ... -> nodes[k-1] -> nodes[0]` and its mean weight.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCycle {
    pub nodes: Vec<usize>,
    pub mean: f64,
}

pub fn cycle_mean(weights: &[Vec<Option<f64>>], nodes: &[usize]) -> Option<f64> {
    let k = nodes.len();
    let mut total = 0.0;
    for i in 0..k {
        total += weights[nodes[i]][nodes[(i + 1) % k]]?;
    }
    Some(total / k as f64)
}

/// Minimum mean cycle, or `None` for an acyclic graph.
///
/// Distances are taken from a virtual source joined to every vertex, so the
/// graph need not be strongly connected.
pub fn min_mean_cycle(weights: &[Vec<Option<f64>>]) -> Option<MeanCycle> {
    let n = weights.len();
    if n == 0 {
        return None;
    }
    // dist[k][v]: minimum weight of a k-edge walk ending at v
    let mut dist = vec![vec![f64::INFINITY; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    dist[0].iter_mut().for_each(|d| *d = 0.0);
    for k in 1..=n {
        for u in 0..n {
            if !dist[k - 1][u].is_finite() {
                continue;
            }
            for v in 0..n {
                if let Some(w) = weights[u][v] {
                    let cand = dist[k - 1][u] + w;
                    if cand < dist[k][v] {
                        dist[k][v] = cand;
                        pred[k][v] = u;
                    }
                }
            }
        }
    }

    let mut best: Option<(usize, f64)> = None;
    for v in 0..n {
        if !dist[n][v].is_finite() {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| dist[k][v].is_finite())
            .map(|k| (dist[n][v] - dist[k][v]) / (n - k) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        if best.is_none_or(|(_, b)| worst < b) {
            best = Some((v, worst));
        }
    }
    let (target, _) = best?;

    // The n-edge walk to the critical vertex repeats a vertex; every cycle on
    // it has the optimal mean.
    let mut walk = vec![target];
    let mut v = target;
    for k in (1..=n).rev() {
        v = pred[k][v];
        walk.push(v);
    }
    walk.reverse();
    let mut last_seen = vec![usize::MAX; n];
    let mut found = None;
    for (i, &node) in walk.iter().enumerate() {
        if last_seen[node] != usize::MAX {
            found = Some(walk[last_seen[node]..i].to_vec());
            break;
        }
        last_seen[node] = i;
    }
    let nodes = found.expect("an n-edge walk on n vertices contains a cycle");
    let mean = cycle_mean(weights, &nodes).expect("cycle edges exist");
    Some(MeanCycle { nodes, mean })
}

/// Maximum mean cycle, via negated weights.
pub fn max_mean_cycle(weights: &[Vec<Option<f64>>]) -> Option<MeanCycle> {
    let negated: Vec<Vec<Option<f64>>> =
        weights.iter().map(|row| row.iter().map(|w| w.map(|x| -x)).collect()).collect();
    let c = min_mean_cycle(&negated)?;
    let mean = cycle_mean(weights, &c.nodes).expect("cycle edges exist");
    Some(MeanCycle { nodes: c.nodes, mean })
}
