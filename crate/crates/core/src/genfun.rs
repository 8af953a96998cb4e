//! Waiting-time generating functions for a word `s = s1 ... sr`.
//!
//! `Y_r` is the first `n` with `U_n U_{n-1} ... U_{n-r+1} = s1 ... sr` and
//! `Z_r = T_r - T_{r-1}` is the time the branch along `s` needs to grow from
//! level `r-1` to level `r`. With `Q~ = Q - 1 p^T`,
//!
//! ```text
//! Phi(t)     = E[t^Y_r] = 1 / (gamma_r(t) + (1 - t) delta_r(1/t))
//! gamma_r(t) = 1 + (1 - t)/p(s_r) [Q~ (I - t Q~)^-1](s1, s_r)
//! delta_r(1/t) = sum over overlaps m of 1 / (t^m p(s^(m)))
//! E[t^Z_r]   = 1 - (1 - t) Phi(t) / (t^r p(s^(r)))
//! ```
//!
//! The resolvent form of `gamma_r` is the summed series `sum_m Q^m(s1,s_r) t^m`
//! with its stationary part taken out, and stays finite for `|t| < 1/gamma`.

use nalgebra::{Matrix4, Vector4};

use crate::alphabet::{letters_to_string, Nucleotide, Word};
use crate::error::{Error, Result};
use crate::model::{deflated, SequenceModel};
use crate::output::fmt_f64;

/// Scan/bisection tolerance on the root, relative to `t* - 1`.
const ROOT_REL_TOL: f64 = 1e-14;
/// First scan point for `t* - 1`, relative to `p(s^(r)) / r`.
const ROOT_SCAN_START: f64 = 1e-3;
const ROOT_SCAN_FACTOR: f64 = 1.2;
const ROOT_SCAN_LIMIT: f64 = 1e6;
/// Differentiation step relative to `1 / E[.]`.
const DIFF_STEP: f64 = 1e-4;
/// `K` is a supremum over `m`; it is estimated on `1..=BOUND_TERMS`.
pub const BOUND_TERMS: usize = 200;

/// `{m in 1..=r : s_{r-m+1} ... s_r = s_1 ... s_m}`: the lengths at which the
/// word's suffix equals its prefix. Always contains `r`.
pub fn overlap_set(w: &[Nucleotide]) -> Vec<usize> {
    let r = w.len();
    (1..=r).filter(|&m| w[r - m..] == w[..m]).collect()
}

/// Outcome of the search for the smallest real zero `t* > 1` of the denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootSearch {
    Found {
        t: f64,
        /// `t* - 1`, kept separately since it can be far below the resolution of `t`.
        excess: f64,
    },
    /// No sign change below `searched_to` (the resolvent domain edge or the scan limit).
    NotFound { searched_to: f64 },
}

impl RootSearch {
    pub fn value(&self) -> f64 {
        match *self {
            RootSearch::Found { t, .. } => t,
            RootSearch::NotFound { .. } => f64::INFINITY,
        }
    }
}

/// A word together with everything its generating functions need.
#[derive(Clone, Debug)]
pub struct WordAnalysis {
    model: SequenceModel,
    word: Word,
    /// `probs[m-1] = p(s^(m))`.
    probs: Vec<f64>,
    overlaps: Vec<usize>,
    qt: Matrix4<f64>,
    first: usize,
    last: usize,
    root: RootSearch,
}

impl WordAnalysis {
    pub fn new(model: &SequenceModel, word: impl Into<Word>) -> Result<Self> {
        let word = word.into();
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let probs: Vec<f64> = (1..=word.len()).map(|m| model.word_probability(&word[..m])).collect();
        if probs.last().is_some_and(|&p| p <= 0.0) {
            return Err(Error::ZeroProbability(word.to_string()));
        }
        let overlaps = overlap_set(&word);
        let mut analysis = WordAnalysis {
            model: model.clone(),
            first: word[0].index(),
            last: word[word.len() - 1].index(),
            qt: deflated(model.transition_matrix(), model.stationary()),
            word,
            probs,
            overlaps,
            root: RootSearch::NotFound { searched_to: 1.0 },
        };
        analysis.root = analysis.search_root();
        Ok(analysis)
    }

    pub fn model(&self) -> &SequenceModel {
        &self.model
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn r(&self) -> usize {
        self.word.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `p(s^(r))`.
    pub fn word_probability(&self) -> f64 {
        self.probs[self.r() - 1]
    }

    pub fn overlaps(&self) -> &[usize] {
        &self.overlaps
    }

    pub fn root(&self) -> RootSearch {
        self.root
    }

    fn check_resolvent_domain(&self, t: f64) -> Result<()> {
        if !t.is_finite() || self.model.gamma() * t.abs() >= 1.0 {
            return Err(Error::OutOfDomain { t, reason: "|t| must be below 1/gamma" });
        }
        Ok(())
    }

    /// `[Q~ (I - t Q~)^-1](s1, s_r)`.
    fn resolvent_entry(&self, t: f64) -> Result<f64> {
        self.check_resolvent_domain(t)?;
        let m = Matrix4::identity() - self.qt * t;
        let lu = m.lu();
        if lu.determinant().abs() < 1e-14 {
            return Err(Error::SingularResolvent { t });
        }
        let mut e = Vector4::zeros();
        e[self.last] = 1.0;
        let y = lu.solve(&e).ok_or(Error::SingularResolvent { t })?;
        Ok(self.qt.row(self.first).transpose().dot(&y))
    }

    /// `delta_r(1/t) = sum over overlaps m of 1/(t^m p(s^(m)))`.
    pub fn delta(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Err(Error::OutOfDomain { t, reason: "delta_r(1/t) needs t != 0" });
        }
        Ok(self.overlaps.iter().map(|&m| 1.0 / (t.powi(m as i32) * self.probs[m - 1])).sum())
    }

    pub fn gamma_r(&self, t: f64) -> Result<f64> {
        let a = self.resolvent_entry(t)?;
        let p_last = self.model.stationary()[self.last];
        Ok(1.0 + (1.0 - t) * a / p_last)
    }

    /// `gamma_r(t) + (1 - t) delta_r(1/t)`.
    pub fn denominator(&self, t: f64) -> Result<f64> {
        Ok(self.gamma_r(t)? + (1.0 - t) * self.delta(t)?)
    }

    fn check_phi_domain(&self, t: f64) -> Result<()> {
        if t < 0.0 {
            return Err(Error::OutOfDomain { t, reason: "t must be non-negative" });
        }
        self.check_resolvent_domain(t)?;
        match self.root {
            RootSearch::Found { t: root, .. } if t >= root => {
                Err(Error::OutOfDomain { t, reason: "t must stay below the first root of the denominator" })
            }
            RootSearch::NotFound { searched_to } if t >= searched_to => {
                Err(Error::OutOfDomain { t, reason: "t is beyond the searched root range" })
            }
            _ => Ok(()),
        }
    }

    /// `Phi(t) = E[t^Y_r]`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        if t == 1.0 {
            return Ok(1.0);
        }
        self.check_phi_domain(t)?;
        Ok(1.0 / self.denominator(t)?)
    }

    /// `1 - E[t^Z_r] = (1 - t) / (t^r p(s^(r)) D(t))`, computed without cancellation.
    fn z_tail(&self, t: f64) -> Result<f64> {
        let d = self.denominator(t)?;
        Ok((1.0 - t) / (t.powi(self.r() as i32) * self.word_probability() * d))
    }

    /// `E[t^Z_r]` for `0 < t < 1`.
    pub fn genfun_z(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::OutOfDomain { t, reason: "E[t^Z] is evaluated on 0 < t < 1" });
        }
        Ok(1.0 - self.z_tail(t)?)
    }

    /// `E[Y_r] = Phi'(1) = delta_r(1) + [Q~ (I - Q~)^-1](s1, s_r) / p(s_r)`.
    pub fn mean_waiting_time(&self) -> Result<f64> {
        let a = self.resolvent_entry(1.0)?;
        Ok(self.delta(1.0)? + a / self.model.stationary()[self.last])
    }

    /// Mean and variance of `Y_r` from one-sided numerical derivatives of `Phi` at 1.
    pub fn moments_y(&self) -> Result<Moments> {
        let scale = self.mean_waiting_time()?;
        moments_at_one(|t| self.phi(t), DIFF_STEP / scale)
    }

    /// Mean and variance of `Z_r` from one-sided numerical derivatives of `E[t^Z_r]` at 1.
    pub fn moments_z(&self) -> Result<Moments> {
        let h = DIFF_STEP * self.word_probability();
        moments_at_one(|t| if t == 1.0 { Ok(1.0) } else { self.genfun_z(t) }, h)
    }

    /// `(t* - 1) / p(s^(r))`, the root margin in units of the word probability.
    pub fn root_margin(&self) -> Option<f64> {
        match self.root {
            RootSearch::Found { excess, .. } => Some(excess / self.word_probability()),
            RootSearch::NotFound { .. } => None,
        }
    }

    /// `t^r p(s^(r)) D(t)` at `t = 1 + e`, rewritten so every term stays O(1)
    /// even when `e` is of the order of `p(s^(r))`.
    fn scaled_denominator(&self, e: f64) -> Result<f64> {
        let t = 1.0 + e;
        let r = self.r() as i32;
        let pr = self.word_probability();
        let a = self.resolvent_entry(t)?;
        let p_last = self.model.stationary()[self.last];
        let b: f64 = self.overlaps.iter().map(|&m| t.powi(r - m as i32) * pr / self.probs[m - 1]).sum();
        Ok(t.powi(r) * pr * (1.0 - e * a / p_last) - e * b)
    }

    fn search_root(&self) -> RootSearch {
        let gamma = self.model.gamma();
        let edge = if gamma > 0.0 { (1.0 / gamma - 1.0) * (1.0 - 1e-9) } else { f64::INFINITY };
        let limit = edge.min(ROOT_SCAN_LIMIT);
        let searched_to = 1.0 + limit;

        let mut lo = 0.0;
        let mut e = ROOT_SCAN_START * self.word_probability() / self.r() as f64;
        let mut hi = loop {
            if e >= limit {
                e = limit;
            }
            match self.scaled_denominator(e) {
                Ok(v) if v <= 0.0 => break e,
                Ok(_) => {}
                Err(_) => return RootSearch::NotFound { searched_to: 1.0 + lo },
            }
            if e >= limit {
                return RootSearch::NotFound { searched_to };
            }
            lo = e;
            e *= ROOT_SCAN_FACTOR;
        };
        while hi - lo > ROOT_REL_TOL * hi {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.scaled_denominator(mid) {
                Ok(v) if v > 0.0 => lo = mid,
                _ => hi = mid,
            }
        }
        let excess = 0.5 * (lo + hi);
        RootSearch::Found { t: 1.0 + excess, excess }
    }

    pub fn evaluate(&self, t: f64) -> Result<GenFunEval> {
        Ok(GenFunEval {
            t,
            phi: self.phi(t)?,
            gamma_r: self.gamma_r(t)?,
            delta_r: self.delta(t)?,
            z_gf: self.genfun_z(t).ok(),
            root: self.root.value(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// One-sided first and second derivatives at 1 with one Richardson step
/// (steps `h` and `h/2`).
fn moments_at_one(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<Moments> {
    // a power of two keeps 1 - h, 1 - h/2 and 1 - 2h exact
    let h = 2f64.powi(h.log2().floor() as i32);
    let f1 = f(1.0)?;
    let d1 = |h: f64| -> Result<f64> { Ok((f1 - f(1.0 - h)?) / h) };
    let d2 = |h: f64| -> Result<f64> { Ok((f1 - 2.0 * f(1.0 - h)? + f(1.0 - 2.0 * h)?) / (h * h)) };
    let mean = 2.0 * d1(h / 2.0)? - d1(h)?;
    let second = 2.0 * d2(h / 2.0)? - d2(h)?;
    Ok(Moments { mean, variance: second + mean - mean * mean })
}

/// Values at one evaluation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenFunEval {
    pub t: f64,
    pub phi: f64,
    pub gamma_r: f64,
    pub delta_r: f64,
    /// `E[t^Z_r]`, defined for `0 < t < 1` only.
    pub z_gf: Option<f64>,
    /// Smallest real root `t* > 1` of the denominator, `inf` if none was found.
    pub root: f64,
}

impl GenFunEval {
    pub const CSV_HEADER: &'static str = "word,t,phi,gamma_r,delta_r,z_gf,root";

    pub fn csv_row(&self, word: &Word) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            word,
            fmt_f64(self.t),
            fmt_f64(self.phi),
            fmt_f64(self.gamma_r),
            fmt_f64(self.delta_r),
            fmt_f64(self.z_gf.unwrap_or(f64::NAN)),
            fmt_f64(self.root),
        )
    }
}

/// Model-wide constants of the bound `|gamma_r(t) - 1| <= |1 - t| kappa' / (1 - gamma |t|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub gamma: f64,
    /// `max_{m <= truncation, u, v} |Q~^m(u,v)| / gamma^m`.
    pub k_est: f64,
    /// `gamma K / min_u p(u)`.
    pub kappa_prime: f64,
    pub truncation: usize,
    /// `4 gamma^(truncation+1) K`, a bound on the neglected terms.
    pub tail_bound: f64,
}

pub fn bound_constants(model: &SequenceModel) -> BoundConstants {
    let gamma = model.gamma();
    if gamma == 0.0 {
        return BoundConstants { gamma, k_est: 0.0, kappa_prime: 0.0, truncation: 0, tail_bound: 0.0 };
    }
    let qt = deflated(model.transition_matrix(), model.stationary());
    let mut power = qt;
    let mut k_est: f64 = 0.0;
    let mut truncation = 0;
    for m in 1..=BOUND_TERMS {
        let scale = gamma.powi(m as i32);
        if scale < 1e-290 {
            break;
        }
        k_est = k_est.max(power.abs().max() / scale);
        truncation = m;
        power *= qt;
    }
    BoundConstants {
        gamma,
        k_est,
        kappa_prime: gamma * k_est / model.min_letter_probability(),
        truncation,
        tail_bound: 4.0 * gamma.powi(truncation as i32 + 1) * k_est,
    }
}

/// `n` evenly spaced points on `[-0.9/gamma, 0.9/gamma]` (on `[-2, 2]` when `gamma = 0`).
pub fn bound_grid(model: &SequenceModel, n: usize) -> Vec<f64> {
    let gamma = model.gamma();
    let edge = if gamma > 0.0 { 0.9 / gamma } else { 2.0 };
    (0..n).map(|i| -edge + 2.0 * edge * i as f64 / (n - 1).max(1) as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub word: String,
    pub constants: BoundConstants,
    pub points: usize,
    /// `min over the grid of rhs - lhs`.
    pub min_slack: f64,
    pub worst_t: f64,
    pub ok: bool,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "word,gamma,k_est,kappa_prime,truncation,tail_bound,points,min_slack,worst_t,ok";

    pub fn csv_row(&self) -> String {
        let c = &self.constants;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.word,
            fmt_f64(c.gamma),
            fmt_f64(c.k_est),
            fmt_f64(c.kappa_prime),
            c.truncation,
            fmt_f64(c.tail_bound),
            self.points,
            fmt_f64(self.min_slack),
            fmt_f64(self.worst_t),
            self.ok,
        )
    }
}

/// Checks `|gamma_r(t) - 1| <= |1 - t| kappa' / (1 - gamma |t|)` on `grid`.
pub fn gamma_bound_check(analysis: &WordAnalysis, grid: &[f64]) -> Result<BoundReport> {
    let constants = bound_constants(analysis.model());
    let mut min_slack = f64::INFINITY;
    let mut worst_t = f64::NAN;
    let mut ok = true;
    for &t in grid {
        let lhs = (analysis.gamma_r(t)? - 1.0).abs();
        let rhs = (1.0 - t).abs() * constants.kappa_prime / (1.0 - constants.gamma * t.abs());
        let slack = rhs - lhs;
        if slack < min_slack {
            min_slack = slack;
            worst_t = t;
        }
        // rounding in gamma_r is relative to 1
        if slack < -1e-12 * (1.0 + rhs) {
            ok = false;
        }
    }
    Ok(BoundReport {
        word: letters_to_string(analysis.word()),
        constants,
        points: grid.len(),
        min_slack,
        worst_t,
        ok,
    })
}

/// `min over words of (t* - 1) / p(s^(r))`, or `None` if some word has no root.
pub fn kappa_estimate<'a>(model: &SequenceModel, words: impl IntoIterator<Item = &'a Word>) -> Result<Option<f64>> {
    let mut kappa = f64::INFINITY;
    for w in words {
        match WordAnalysis::new(model, w.clone())?.root_margin() {
            Some(k) => kappa = kappa.min(k),
            None => return Ok(None),
        }
    }
    Ok(Some(kappa))
}
