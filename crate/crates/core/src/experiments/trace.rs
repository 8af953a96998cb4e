use std::io::Write;

use super::ExperimentConfig;
use crate::asymptotics::{limit_summary, LimitSummary};
use crate::error::Result;
use crate::output::{fmt_f64, open_output};
use crate::sequence::{rng_from_seed, RNG_ALGORITHM};
use crate::tree::CgrTree;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub ell: usize,
    pub longest: usize,
    pub depth: usize,
}

impl TraceRow {
    pub const CSV_HEADER: &'static str = "n,ell_norm,L_norm,D_norm";

    fn ln_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    pub fn ell_norm(&self) -> f64 {
        self.ell as f64 / self.ln_n()
    }

    pub fn longest_norm(&self) -> f64 {
        self.longest as f64 / self.ln_n()
    }

    pub fn depth_norm(&self) -> f64 {
        self.depth as f64 / self.ln_n()
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.n, fmt_f64(self.ell_norm()), fmt_f64(self.longest_norm()), fmt_f64(self.depth_norm()))
    }
}

#[derive(Clone, Debug)]
pub struct TraceReport {
    pub rows: Vec<TraceRow>,
    pub limits: LimitSummary,
    pub seed: u64,
    pub rng: &'static str,
}

impl TraceReport {
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", TraceRow::CSV_HEADER)?;
        for row in &self.rows {
            writeln!(out, "{}", row.csv_row())?;
        }
        Ok(())
    }

    pub fn write_meta<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "key,value")?;
        writeln!(out, "rng,{}", self.rng)?;
        writeln!(out, "seed,{}", self.seed)?;
        writeln!(out, "inv_h_plus,{}", fmt_f64(self.limits.inv_h_plus))?;
        writeln!(out, "inv_h,{}", fmt_f64(self.limits.inv_h))?;
        writeln!(out, "inv_h_minus,{}", fmt_f64(self.limits.inv_h_minus))
    }
}

/// Grows one tree from `n` generated letters and calls `visit` after every
/// insertion with `n >= 2`.
pub fn trace_with(config: &ExperimentConfig, mut visit: impl FnMut(&TraceRow)) -> Result<()> {
    config.validate()?;
    let mut rng = rng_from_seed(config.seed);
    let mut tree = CgrTree::with_capacity(config.n);
    let mut prev = None;
    for _ in 0..config.n {
        let u = config.model.sample_next(prev, &mut rng);
        prev = Some(u);
        let rec = tree.insert_letter(u);
        if rec.n >= 2 {
            visit(&TraceRow { n: rec.n, ell: tree.shortest(), longest: tree.longest(), depth: rec.depth });
        }
    }
    Ok(())
}

/// Rows at `n = 2, 2 + stride, 2 + 2 stride, ...` plus the final insertion.
pub fn run_trace(config: &ExperimentConfig) -> Result<TraceReport> {
    let limits = limit_summary(&config.model)?;
    let mut rows = Vec::new();
    let stride = config.trace_stride;
    let n = config.n;
    trace_with(config, |row| {
        if (row.n - 2) % stride == 0 || row.n == n {
            rows.push(*row);
        }
    })?;
    let report = TraceReport { rows, limits, seed: config.seed, rng: RNG_ALGORITHM };
    if let Some(dir) = &config.out {
        report.write_csv(&mut open_output(Some(dir), "trace.csv")?)?;
        report.write_meta(&mut open_output(Some(dir), "trace_meta.csv")?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SequenceModel;

    fn config(n: usize, stride: usize) -> ExperimentConfig {
        ExperimentConfig { trace_stride: stride, n, ..ExperimentConfig::desk_scale(SequenceModel::uniform(), 3) }
    }

    #[test]
    fn small_trace_rows() {
        for (stride, expected) in [(1, 9), (2, 5), (3, 4), (4, 3), (5, 3), (9, 2), (20, 2)] {
            let r = run_trace(&config(10, stride)).unwrap();
            assert_eq!(r.rows.len(), expected, "stride {stride}");
            assert_eq!(r.rows[0].n, 2);
            assert_eq!(r.last().unwrap().n, 10);
            for row in &r.rows {
                assert!(row.ell_norm().is_finite() && row.longest_norm().is_finite() && row.depth_norm().is_finite());
            }
        }
    }

    #[test]
    fn single_letter_trace_is_empty() {
        assert!(run_trace(&config(1, 1)).unwrap().rows.is_empty());
    }

    #[test]
    fn rows_are_ordered() {
        let r = run_trace(&config(5000, 1)).unwrap();
        for row in &r.rows {
            assert!(row.ell <= row.depth && row.depth <= row.longest);
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let render = || {
            let mut buf = Vec::new();
            run_trace(&config(500, 7)).unwrap().write_csv(&mut buf).unwrap();
            buf
        };
        let a = render();
        assert_eq!(a, render());
        assert!(String::from_utf8(a).unwrap().starts_with("n,ell_norm,L_norm,D_norm\n2,"));
    }
}
