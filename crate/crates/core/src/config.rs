//! Flat key-value model files.
//!
//! ```text
//! # comment
//! kind = markov
//! Q = 0.7 0.1 0.1 0.1, 0.1 0.7 0.1 0.1, 0.1 0.1 0.7 0.1, 0.1 0.1 0.1 0.7
//! seed = 42
//! ```
//!
//! `p` (4 floats) is required for `iid` and optional for `markov`, where it is
//! validated instead of recomputed. Numbers may be separated by commas or
//! whitespace. Keys other than `kind`, `p`, `Q` and `seed` are kept verbatim
//! in [`ModelConfig::extra`] (the CLI reads `n`, `replicates`, `stride` from there).

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{SequenceModel, TransitionMatrix};

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub model: SequenceModel,
    pub seed: Option<u64>,
    pub extra: BTreeMap<String, String>,
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| Error::Config(format!("bad number {t:?}: {e}"))))
        .collect()
}

pub fn probs_from(values: &[f64]) -> Result<[f64; 4]> {
    values
        .try_into()
        .map_err(|_| Error::Config(format!("expected 4 probabilities, got {}", values.len())))
}

pub fn matrix_from(values: &[f64]) -> Result<TransitionMatrix> {
    if values.len() != 16 {
        return Err(Error::Config(format!("expected 16 transition entries, got {}", values.len())));
    }
    let mut q = [[0.0; 4]; 4];
    for (i, v) in values.iter().enumerate() {
        q[i / 4][i % 4] = *v;
    }
    Ok(q)
}

/// Builds a model from its kind and optional `p` / `Q` lists.
pub fn build_model(kind: &str, p: Option<&[f64]>, q: Option<&[f64]>) -> Result<SequenceModel> {
    match kind {
        "iid" => {
            let p = p.ok_or_else(|| Error::Config("iid model needs `p`".into()))?;
            SequenceModel::iid(probs_from(p)?)
        }
        "markov" => {
            let q = matrix_from(q.ok_or_else(|| Error::Config("markov model needs `Q`".into()))?)?;
            match p {
                Some(p) => SequenceModel::markov_with_stationary(q, probs_from(p)?),
                None => SequenceModel::markov(q),
            }
        }
        other => Err(Error::Config(format!("unknown model kind {other:?} (expected iid or markov)"))),
    }
}

pub fn parse_model_config(text: &str) -> Result<ModelConfig> {
    let mut entries = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        entries.insert(key.trim().to_string(), value.trim().to_string());
    }

    let kind = entries.remove("kind").unwrap_or_else(|| "iid".to_string());
    let p = entries.remove("p").map(|v| parse_floats(&v)).transpose()?;
    let q = entries.remove("Q").map(|v| parse_floats(&v)).transpose()?;
    let seed = entries
        .remove("seed")
        .map(|v| v.parse::<u64>().map_err(|e| Error::Config(format!("bad seed {v:?}: {e}"))))
        .transpose()?;
    let model = build_model(&kind, p.as_deref(), q.as_deref())?;
    Ok(ModelConfig { model, seed, extra: entries })
}

pub fn read_model_config(path: impl AsRef<Path>) -> Result<ModelConfig> {
    parse_model_config(&std::fs::read_to_string(path)?)
}
