//! Chaos Game Representation trees.
//!
//! A DNA sequence `U1 U2 ...` is turned into a quaternary digital search tree
//! by inserting its reversed prefixes `U_n ... U_1`. This crate builds those
//! trees, tracks their branch and depth statistics, computes the entropy-type
//! constants that govern their logarithmic growth under Markov sources, and
//! evaluates the word waiting-time generating functions behind those limits.
//!
//! Modules:
//! - [`model`], [`sequence`], [`config`]: sources, sequences, FASTA and model files
//! - [`cgr`]: the CGR map, subsquares and the historyless representation
//! - [`tree`], [`pattern`]: the CGR-tree and its branch variables
//! - [`asymptotics`]: `h`, `h+`, `h-` and the limit lines
//! - [`genfun`]: waiting-time generating functions and their domain
//! - [`experiments`]: Monte Carlo traces, histograms and the worked example

pub mod alphabet;
pub mod asymptotics;
pub mod cgr;
pub mod config;
pub mod error;
pub mod experiments;
pub mod genfun;
pub mod mean_cycle;
pub mod model;
pub mod output;
pub mod pattern;
pub mod sequence;
pub mod tree;

pub use alphabet::{Nucleotide, Word};
pub use asymptotics::{limit_summary, rate_constants, rate_of_pattern, LimitSummary, RateConstants};
pub use cgr::{cgr_trajectory, count_in_subsquare, historyless_points, CgrPoint, Subsquare};
pub use error::{Error, Result};
pub use genfun::{gamma_bound_check, overlap_set, BoundReport, GenFunEval, RootSearch, WordAnalysis};
pub use model::{stationary_of, ModelKind, SequenceModel};
pub use pattern::Pattern;
pub use sequence::{generate, read_fasta, Origin, Sequence};
pub use tree::{longest_run, CgrTree, InsertionRecord};
