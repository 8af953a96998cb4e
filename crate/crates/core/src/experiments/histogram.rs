use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use super::{replicate_seed, ExperimentConfig};
use crate::asymptotics::{limit_summary, LimitSummary};
use crate::error::Result;
use crate::model::SequenceModel;
use crate::output::{fmt_f64, open_output};
use crate::sequence::{rng_from_seed, RNG_ALGORITHM};
use crate::tree::CgrTree;

/// Terminal statistics of one replicate tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplicateRow {
    pub replicate: usize,
    pub seed: u64,
    pub ell: usize,
    pub depth: usize,
    pub longest: usize,
    pub random_path: usize,
}

impl ReplicateRow {
    pub const CSV_HEADER: &'static str = "replicate,ell,D,L,M";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.replicate, self.ell, self.depth, self.longest, self.random_path)
    }
}

/// Generates `n` letters from `seed`, builds the tree, then draws `M_n` from the same stream.
pub fn run_replicate(model: &SequenceModel, n: usize, replicate: usize, seed: u64) -> ReplicateRow {
    let mut rng = rng_from_seed(seed);
    let mut tree = CgrTree::with_capacity(n);
    let mut prev = None;
    for _ in 0..n {
        let u = model.sample_next(prev, &mut rng);
        prev = Some(u);
        tree.insert_letter(u);
    }
    ReplicateRow {
        replicate,
        seed,
        ell: tree.shortest(),
        depth: tree.last_depth().unwrap_or(0),
        longest: tree.longest(),
        random_path: tree.random_path_length(&mut rng).unwrap_or(0),
    }
}

#[derive(Clone, Debug)]
pub struct HistogramReport {
    pub n: usize,
    pub base_seed: u64,
    pub rng: &'static str,
    pub rows: Vec<ReplicateRow>,
    pub limits: LimitSummary,
}

fn mean(values: impl Iterator<Item = usize>) -> f64 {
    let (sum, count) = values.fold((0usize, 0usize), |(s, c), v| (s + v, c + 1));
    sum as f64 / count as f64
}

impl HistogramReport {
    /// `ln n` times `(1/h+, 1/h, 1/h-)`.
    pub fn markers(&self) -> (f64, f64, f64) {
        self.limits.expected_at(self.n)
    }

    pub fn mean_ell(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.ell))
    }

    pub fn mean_depth(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.depth))
    }

    pub fn mean_longest(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.longest))
    }

    pub fn mean_random_path(&self) -> f64 {
        mean(self.rows.iter().map(|r| r.random_path))
    }

    /// Unit-width bin counts per statistic.
    pub fn bins(&self) -> BTreeMap<(&'static str, usize), usize> {
        let mut bins = BTreeMap::new();
        for r in &self.rows {
            for (stat, v) in [("ell", r.ell), ("D", r.depth), ("L", r.longest), ("M", r.random_path)] {
                *bins.entry((stat, v)).or_insert(0) += 1;
            }
        }
        bins
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", ReplicateRow::CSV_HEADER)?;
        for row in &self.rows {
            writeln!(out, "{}", row.csv_row())?;
        }
        Ok(())
    }

    pub fn write_bins<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "stat,value,count")?;
        for ((stat, value), count) in self.bins() {
            writeln!(out, "{stat},{value},{count}")?;
        }
        Ok(())
    }

    pub fn write_meta<W: Write + ?Sized>(&self, out: &mut W) -> std::io::Result<()> {
        let (ell, d, big_l) = self.markers();
        writeln!(out, "key,value")?;
        writeln!(out, "rng,{}", self.rng)?;
        writeln!(out, "base_seed,{}", self.base_seed)?;
        writeln!(out, "seed_rule,base_seed xor splitmix64(replicate)")?;
        writeln!(out, "n,{}", self.n)?;
        writeln!(out, "replicates,{}", self.rows.len())?;
        writeln!(out, "inv_h_plus,{}", fmt_f64(self.limits.inv_h_plus))?;
        writeln!(out, "inv_h,{}", fmt_f64(self.limits.inv_h))?;
        writeln!(out, "inv_h_minus,{}", fmt_f64(self.limits.inv_h_minus))?;
        writeln!(out, "marker_ell,{}", fmt_f64(ell))?;
        writeln!(out, "marker_D,{}", fmt_f64(d))?;
        writeln!(out, "marker_L,{}", fmt_f64(big_l))?;
        writeln!(out, "mean_ell,{}", fmt_f64(self.mean_ell()))?;
        writeln!(out, "mean_D,{}", fmt_f64(self.mean_depth()))?;
        writeln!(out, "mean_L,{}", fmt_f64(self.mean_longest()))?;
        writeln!(out, "mean_M,{}", fmt_f64(self.mean_random_path()))
    }
}

/// Independent replicates, merged in replicate order.
pub fn run_histogram(config: &ExperimentConfig) -> Result<HistogramReport> {
    config.validate()?;
    let limits = limit_summary(&config.model)?;
    let one = |r: usize| run_replicate(&config.model, config.n, r, replicate_seed(config.seed, r));
    let rows: Vec<ReplicateRow> = if config.parallel {
        (0..config.replicates).into_par_iter().map(one).collect()
    } else {
        (0..config.replicates).map(one).collect()
    };
    let report = HistogramReport { n: config.n, base_seed: config.seed, rng: RNG_ALGORITHM, rows, limits };
    if let Some(dir) = &config.out {
        report.write_csv(&mut open_output(Some(dir), "histogram.csv")?)?;
        report.write_bins(&mut open_output(Some(dir), "histogram_bins.csv")?)?;
        report.write_meta(&mut open_output(Some(dir), "histogram_meta.csv")?)?;
    }
    Ok(report)
}
