//! Order-1 Markov sources over {A, C, G, T}, with i.i.d. as the degenerate case.
//!
//! Word probabilities follow the reversed-word convention used throughout the
//! crate: for `s = s1 ... sm`,
//!
//! ```text
//! p(s) = P(U1 = sm, U2 = sm-1, ..., Um = s1)
//!      = p(sm) Q(sm, sm-1) Q(sm-1, sm-2) ... Q(s2, s1)
//! ```
//!
//! [`SequenceModel::word_probability`] is the only place that evaluates it.

use nalgebra::{Matrix4, Vector4};
use rand::Rng;

use crate::alphabet::Nucleotide;
use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-10;
const POWER_ITER_TOL: f64 = 1e-13;
const POWER_ITER_MAX: usize = 1_000_000;

pub type TransitionMatrix = [[f64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Iid,
    Markov,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Iid => "iid",
            ModelKind::Markov => "markov",
        }
    }
}

/// Immutable order-1 Markov source started from its stationary law.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceModel {
    kind: ModelKind,
    q: TransitionMatrix,
    p: [f64; 4],
    /// Modulus of the second-largest eigenvalue of `q`.
    gamma: f64,
}

fn check_distribution(p: &[f64; 4]) -> Result<()> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidDistribution(format!("{p:?} has a negative or non-finite entry")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOL {
        return Err(Error::InvalidDistribution(format!("{p:?} sums to {sum}")));
    }
    Ok(())
}

fn check_stochastic(q: &TransitionMatrix) -> Result<()> {
    for (row, entries) in q.iter().enumerate() {
        let sum: f64 = entries.iter().sum();
        if entries.iter().any(|x| !x.is_finite() || *x < 0.0) || (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::NonStochastic { row, sum });
        }
    }
    Ok(())
}

fn left_multiply(p: &[f64; 4], q: &TransitionMatrix) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (u, pu) in p.iter().enumerate() {
        for (v, o) in out.iter_mut().enumerate() {
            *o += pu * q[u][v];
        }
    }
    out
}

fn strongly_connected(q: &TransitionMatrix) -> bool {
    let reach_all = |forward: bool| {
        let mut seen = [false; 4];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..4 {
                let w = if forward { q[u][v] } else { q[v][u] };
                if w > 0.0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|s| *s)
    };
    reach_all(true) && reach_all(false)
}

/// Stationary vector of an irreducible row-stochastic matrix.
///
/// Power iteration runs on the lazy chain `(Q + I) / 2`, which has the same
/// stationary vector and is aperiodic.
pub fn stationary_of(q: &TransitionMatrix) -> Result<[f64; 4]> {
    check_stochastic(q)?;
    if !strongly_connected(q) {
        return Err(Error::Reducible { iterations: 0 });
    }
    let mut lazy = *q;
    for (u, row) in lazy.iter_mut().enumerate() {
        row.iter_mut().for_each(|x| *x *= 0.5);
        row[u] += 0.5;
    }
    let mut p = [0.25; 4];
    for _ in 0..POWER_ITER_MAX {
        let next = left_multiply(&p, &lazy);
        let diff = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        p = next;
        if diff < POWER_ITER_TOL {
            let sum: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= sum);
            return Ok(polish_stationary(q, p));
        }
    }
    Err(Error::Reducible { iterations: POWER_ITER_MAX })
}

/// One step of iterative refinement on `p (Q - I) = 0, sum p = 1`, which takes
/// the power-iteration answer down to rounding level.
fn polish_stationary(q: &TransitionMatrix, p: [f64; 4]) -> [f64; 4] {
    let m = Matrix4::from_fn(|i, j| if i == 3 { 1.0 } else { q[j][i] - if i == j { 1.0 } else { 0.0 } });
    let x = Vector4::from(p);
    let residual = Vector4::new(0.0, 0.0, 0.0, 1.0) - m * x;
    match m.lu().solve(&residual) {
        Some(dx) if (x + dx).iter().all(|v| *v > 0.0) => (x + dx).into(),
        _ => p,
    }
}

/// `Q - 1 p^T`; its powers are `Q^m - 1 p^T` for `m >= 1`.
pub(crate) fn deflated(q: &TransitionMatrix, p: &[f64; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| q[i][j] - p[j])
}

fn second_eigenvalue_modulus(q: &TransitionMatrix, p: &[f64; 4]) -> f64 {
    let d = deflated(q, p);
    if d.iter().all(|x| *x == 0.0) {
        return 0.0;
    }
    d.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl SequenceModel {
    /// I.i.d. letters with law `p`; every row of `Q` equals `p`.
    pub fn iid(p: [f64; 4]) -> Result<Self> {
        check_distribution(&p)?;
        Ok(SequenceModel { kind: ModelKind::Iid, q: [p; 4], p, gamma: 0.0 })
    }

    pub fn uniform() -> Self {
        Self::iid([0.25; 4]).expect("uniform law is valid")
    }

    /// Markov chain with transition matrix `q`; `p` is computed.
    pub fn markov(q: TransitionMatrix) -> Result<Self> {
        let p = stationary_of(&q)?;
        Ok(Self::build_markov(q, p))
    }

    /// Markov chain with a user-supplied stationary vector, validated against `q`.
    pub fn markov_with_stationary(q: TransitionMatrix, p: [f64; 4]) -> Result<Self> {
        check_stochastic(&q)?;
        check_distribution(&p)?;
        let pq = left_multiply(&p, &q);
        let deviation = pq.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if deviation > STATIONARY_TOL {
            return Err(Error::NotStationary { deviation });
        }
        Ok(Self::build_markov(q, p))
    }

    fn build_markov(q: TransitionMatrix, p: [f64; 4]) -> Self {
        let gamma = second_eigenvalue_modulus(&q, &p);
        SequenceModel { kind: ModelKind::Markov, q, p, gamma }
    }

    /// `Q(u,u) = stay`, `Q(u,v) = (1 - stay) / 3` otherwise. Doubly stochastic.
    pub fn symmetric_markov(stay: f64) -> Result<Self> {
        let off = (1.0 - stay) / 3.0;
        let mut q = [[off; 4]; 4];
        for (u, row) in q.iter_mut().enumerate() {
            row[u] = stay;
        }
        Self::markov_with_stationary(q, [0.25; 4])
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn transition_matrix(&self) -> &TransitionMatrix {
        &self.q
    }

    pub fn stationary(&self) -> &[f64; 4] {
        &self.p
    }

    #[inline]
    pub fn transition(&self, from: Nucleotide, to: Nucleotide) -> f64 {
        self.q[from.index()][to.index()]
    }

    #[inline]
    pub fn letter_probability(&self, v: Nucleotide) -> f64 {
        self.p[v.index()]
    }

    /// Modulus of the second-largest eigenvalue of `Q` (0 for i.i.d. models).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn min_letter_probability(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Reversed-word probability `p(s1...sm) = P(U1 = sm, ..., Um = s1)`.
    ///
    /// Returns 1 for the empty word.
    pub fn word_probability(&self, w: &[Nucleotide]) -> f64 {
        let Some((&last, _)) = w.split_last() else {
            return 1.0;
        };
        let mut prob = self.letter_probability(last);
        for pair in w.windows(2).rev() {
            // chain steps from s_{i+1} to s_i
            prob *= self.transition(pair[1], pair[0]);
        }
        prob
    }

    /// Draws one letter from a row of `Q` (or from `p` when `prev` is `None`).
    pub fn sample_next<R: Rng + ?Sized>(&self, prev: Option<Nucleotide>, rng: &mut R) -> Nucleotide {
        let row = match prev {
            Some(u) => &self.q[u.index()],
            None => &self.p,
        };
        let x: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, w) in row.iter().enumerate() {
            acc += w;
            if x < acc {
                return Nucleotide::from_index(i);
            }
        }
        // x landed in the rounding gap above the last cumulative sum
        let last = row.iter().rposition(|w| *w > 0.0).unwrap_or(3);
        Nucleotide::from_index(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn stationary_of_uniform_and_doubly_stochastic() {
        let p = stationary_of(&[[0.25; 4]; 4]).unwrap();
        assert!(p.iter().all(|x| (x - 0.25).abs() < 1e-15));
        let m = SequenceModel::symmetric_markov(0.7).unwrap();
        let p = stationary_of(m.transition_matrix()).unwrap();
        assert!(p.iter().all(|x| (x - 0.25).abs() < 1e-12));
    }

    #[test]
    fn non_stochastic_rows_are_rejected() {
        let mut q = [[0.25; 4]; 4];
        q[2][1] = 0.3;
        assert!(matches!(stationary_of(&q), Err(Error::NonStochastic { row: 2, .. })));
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let q = [
            [0.5, 0.5, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.5],
            [0.0, 0.0, 0.5, 0.5],
        ];
        assert!(matches!(stationary_of(&q), Err(Error::Reducible { .. })));
    }

    #[test]
    fn periodic_irreducible_chain_still_has_its_stationary_vector() {
        let q = [
            [0.0, 0.3, 0.0, 0.7],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        let p = stationary_of(&q).unwrap();
        let pq = left_multiply(&p, &q);
        for (a, b) in pq.iter().zip(&p) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_supplied_by_user_is_validated() {
        let m = SequenceModel::symmetric_markov(0.7).unwrap();
        let q = *m.transition_matrix();
        assert!(SequenceModel::markov_with_stationary(q, [0.25; 4]).is_ok());
        assert!(matches!(
            SequenceModel::markov_with_stationary(q, [0.4, 0.2, 0.2, 0.2]),
            Err(Error::NotStationary { .. })
        ));
    }

    #[test]
    fn gamma_of_symmetric_markov() {
        let m = SequenceModel::symmetric_markov(0.7).unwrap();
        assert!((m.gamma() - 0.6).abs() < 1e-10);
        assert_eq!(SequenceModel::uniform().gamma(), 0.0);
    }

    #[test]
    fn gamma_of_block_chain_matches_closed_form() {
        // Two weakly coupled blocks; eigenvalues 1, 1 - 2e, and block-internal ones.
        let e = 0.05;
        let q = [
            [0.5 - e, 0.5, e, 0.0],
            [0.5, 0.5 - e, 0.0, e],
            [e, 0.0, 0.5 - e, 0.5],
            [0.0, e, 0.5, 0.5 - e],
        ];
        let m = SequenceModel::markov(q).unwrap();
        // symmetric matrix: eigenvalues 1, 1-2e, -2e, -2e... second modulus is 1 - 2e
        assert!((m.gamma() - (1.0 - 2.0 * e)).abs() < 1e-10, "gamma = {}", m.gamma());
    }

    #[test]
    fn word_probability_examples() {
        let iid = SequenceModel::iid([0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!((iid.word_probability(&w("AC")) - 0.12).abs() < 1e-15);
        let mk = SequenceModel::symmetric_markov(0.7).unwrap();
        assert!((mk.word_probability(&w("AA")) - 0.175).abs() < 1e-15);
        for v in Nucleotide::ALL {
            assert_eq!(iid.word_probability(&[v]), iid.letter_probability(v));
        }
    }

    #[test]
    fn word_probability_reads_right_to_left() {
        let q = [
            [0.1, 0.2, 0.3, 0.4],
            [0.4, 0.3, 0.2, 0.1],
            [0.25, 0.25, 0.25, 0.25],
            [0.7, 0.1, 0.1, 0.1],
        ];
        let m = SequenceModel::markov(q).unwrap();
        // "AC": U1 = C, U2 = A
        let expected = m.stationary()[1] * q[1][0];
        assert!((m.word_probability(&w("AC")) - expected).abs() < 1e-15);
    }
}
