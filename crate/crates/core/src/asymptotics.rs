//! Growth constants of the CGR-tree.
//!
//! `h` is the entropy rate of the source. `h+` and `h-` are the largest and
//! smallest per-letter rates `lim (1/n) ln(1/p(s^(n)))` over infinite words.
//! Since `p(s^(n))` is a product of transitions read along the reversed word,
//! these are the extreme mean cycles of the letter graph weighted by `-ln Q`.

use std::fmt::Write as _;

use crate::alphabet::{letters_to_string, Nucleotide};
use crate::error::{Error, Result};
use crate::mean_cycle::{max_mean_cycle, min_mean_cycle};
use crate::model::SequenceModel;
use crate::output::fmt_f64;
use crate::pattern::Pattern;

#[derive(Clone, Debug, PartialEq)]
pub struct RateConstants {
    pub h_plus: f64,
    pub h_minus: f64,
    pub h: f64,
    /// Purely periodic pattern with rate `h_plus`.
    pub s_plus: Pattern,
    /// Purely periodic pattern with rate `h_minus`.
    pub s_minus: Pattern,
}

impl RateConstants {
    pub const CSV_HEADER: &'static str = "h_plus,h,h_minus,inv_h_plus,inv_h,inv_h_minus,s_plus_cycle,s_minus_cycle";

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(self.h_plus),
            fmt_f64(self.h),
            fmt_f64(self.h_minus),
            fmt_f64(1.0 / self.h_plus),
            fmt_f64(1.0 / self.h),
            fmt_f64(1.0 / self.h_minus),
            letters_to_string(self.s_plus.cycle()),
            letters_to_string(self.s_minus.cycle()),
        );
        row
    }
}

/// Limit slopes of `l_n`, `D_n` and `L_n` against `ln n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSummary {
    pub inv_h_plus: f64,
    pub inv_h: f64,
    pub inv_h_minus: f64,
}

impl LimitSummary {
    /// `(ln n / h+, ln n / h, ln n / h-)`.
    pub fn expected_at(&self, n: usize) -> (f64, f64, f64) {
        let ln = (n as f64).ln();
        (ln * self.inv_h_plus, ln * self.inv_h, ln * self.inv_h_minus)
    }
}

/// `-sum_u p(u) sum_v Q(u,v) ln Q(u,v)`.
pub fn entropy_rate(model: &SequenceModel) -> f64 {
    let q = model.transition_matrix();
    let p = model.stationary();
    let mut h = 0.0;
    for u in 0..4 {
        for v in 0..4 {
            if q[u][v] > 0.0 {
                h -= p[u] * q[u][v] * q[u][v].ln();
            }
        }
    }
    h
}

fn cost_graph(model: &SequenceModel) -> Vec<Vec<Option<f64>>> {
    let q = model.transition_matrix();
    (0..4)
        .map(|u| (0..4).map(|v| (q[u][v] > 0.0).then(|| -q[u][v].ln())).collect())
        .collect()
}

/// A graph cycle `c0 -> c1 -> ... -> c0` becomes the pattern `(c_{L-1} ... c1 c0)`,
/// because consecutive pattern letters `s_i s_{i+1}` use the transition `s_{i+1} -> s_i`.
fn pattern_of_cycle(nodes: &[usize]) -> Pattern {
    let cycle = nodes.iter().rev().map(|&i| Nucleotide::from_index(i)).collect();
    Pattern::periodic(Vec::new(), cycle).expect("cycle is non-empty")
}

fn step_cost(model: &SequenceModel, from: Nucleotide, to: Nucleotide) -> Result<f64> {
    let q = model.transition(from, to);
    if q > 0.0 {
        Ok(-q.ln())
    } else {
        Err(Error::UnsupportedTransition { from: from.to_char(), to: to.to_char() })
    }
}

/// `h(s) = lim (1/n) ln(1/p(s^(n)))` for an eventually periodic pattern.
///
/// The prefix does not change the limit but must still have positive
/// probability.
pub fn rate_of_pattern(model: &SequenceModel, s: &Pattern) -> Result<f64> {
    if s.is_finite() {
        return Err(Error::InvalidPattern(format!("{s} is finite; a rate needs a periodic tail")));
    }
    let cycle = s.cycle();
    let span = s.prefix().len() + cycle.len();
    for i in 0..span {
        let (a, b) = (s.letter(i).unwrap(), s.letter(i + 1).unwrap());
        step_cost(model, b, a)?;
    }
    let l = cycle.len();
    let mut total = 0.0;
    for i in 0..l {
        total += step_cost(model, cycle[(i + 1) % l], cycle[i])?;
    }
    Ok(total / l as f64)
}

pub fn rate_constants(model: &SequenceModel) -> Result<RateConstants> {
    let graph = cost_graph(model);
    let max = max_mean_cycle(&graph).ok_or(Error::NoSupportedCycle)?;
    let min = min_mean_cycle(&graph).ok_or(Error::NoSupportedCycle)?;
    let s_plus = pattern_of_cycle(&max.nodes);
    let s_minus = pattern_of_cycle(&min.nodes);
    Ok(RateConstants {
        h_plus: rate_of_pattern(model, &s_plus)?,
        h_minus: rate_of_pattern(model, &s_minus)?,
        h: entropy_rate(model),
        s_plus,
        s_minus,
    })
}

pub fn limit_summary(model: &SequenceModel) -> Result<LimitSummary> {
    let c = rate_constants(model)?;
    Ok(LimitSummary { inv_h_plus: 1.0 / c.h_plus, inv_h: 1.0 / c.h, inv_h_minus: 1.0 / c.h_minus })
}
