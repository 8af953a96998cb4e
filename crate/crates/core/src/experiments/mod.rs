//! Monte Carlo harness: convergence traces, replicate histograms and the
//! worked-example regression.

mod histogram;
mod regression;
mod trace;

use std::path::PathBuf;

pub use histogram::{run_histogram, run_replicate, HistogramReport, ReplicateRow};
pub use regression::{regression_on, worked_example_regression, Check, RegressionReport, WORKED_EXAMPLE};
pub use trace::{run_trace, trace_with, TraceReport, TraceRow};

use crate::error::{Error, Result};
use crate::model::SequenceModel;

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub model: SequenceModel,
    /// Letters per sequence.
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Trace rows are emitted every `trace_stride` insertions.
    pub trace_stride: usize,
    /// Output directory; `None` writes nothing.
    pub out: Option<PathBuf>,
    /// Run replicates on the rayon pool.
    pub parallel: bool,
}

impl ExperimentConfig {
    /// 200 replicates of 10^5 letters.
    pub fn desk_scale(model: SequenceModel, seed: u64) -> Self {
        ExperimentConfig { model, n: 100_000, replicates: 200, seed, trace_stride: 100, out: None, parallel: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if self.trace_stride == 0 {
            return Err(Error::Config("trace stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `r`: `base ^ splitmix64(r)`.
pub fn replicate_seed(base: u64, r: usize) -> u64 {
    base ^ splitmix64(r as u64)
}
