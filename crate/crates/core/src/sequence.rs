//! Sequences: generation from a model and FASTA ingestion.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{letters_to_string, Nucleotide};
use crate::error::{Error, Result};
use crate::model::SequenceModel;

/// Name of the generator behind every seeded draw in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Generated { seed: u64 },
    File { path: PathBuf, record_id: String, skipped: usize },
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    letters: Vec<Nucleotide>,
    origin: Origin,
}

impl Sequence {
    pub fn new(letters: Vec<Nucleotide>, origin: Origin) -> Self {
        Sequence { letters, origin }
    }

    pub fn letters(&self) -> &[Nucleotide] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn into_letters(self) -> Vec<Nucleotide> {
        self.letters
    }
}

impl std::str::FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s.trim().chars().map(Nucleotide::try_from).collect::<Result<Vec<_>>>()?;
        Ok(Sequence::new(letters, Origin::Literal))
    }
}

/// Draws `n` letters: `U1 ~ p`, then `U(k+1) ~ Q(U(k), .)`.
pub fn generate(model: &SequenceModel, n: usize, seed: u64) -> Sequence {
    let mut rng = rng_from_seed(seed);
    let letters = generate_with(model, n, &mut rng);
    Sequence::new(letters, Origin::Generated { seed })
}

pub fn generate_with<R: rand::Rng + ?Sized>(model: &SequenceModel, n: usize, rng: &mut R) -> Vec<Nucleotide> {
    let mut letters = Vec::with_capacity(n);
    let mut prev = None;
    for _ in 0..n {
        let u = model.sample_next(prev, rng);
        letters.push(u);
        prev = Some(u);
    }
    letters
}

/// Reads every record of a FASTA file.
///
/// Letters outside ACGT (e.g. `N`) are skipped and counted in the record's origin.
pub fn read_fasta(path: impl AsRef<Path>) -> Result<Vec<Sequence>> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    let mut current: Option<(String, Vec<Nucleotide>, usize)> = None;
    let mut saw_content = false;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        saw_content = true;
        if let Some(header) = line.strip_prefix('>') {
            if let Some(done) = current.take() {
                records.push(finish_record(path, done));
            }
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some((id, Vec::new(), 0));
            continue;
        }
        let Some((_, letters, skipped)) = current.as_mut() else {
            return Err(Error::MalformedHeader { path: path.to_path_buf(), line: lineno + 1 });
        };
        for b in line.bytes().filter(|b| !b.is_ascii_whitespace()) {
            match Nucleotide::from_byte(b) {
                Some(n) => letters.push(n),
                None => *skipped += 1,
            }
        }
    }
    if let Some(done) = current.take() {
        records.push(finish_record(path, done));
    }
    if !saw_content || records.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    Ok(records)
}

fn finish_record(path: &Path, (record_id, letters, skipped): (String, Vec<Nucleotide>, usize)) -> Sequence {
    Sequence::new(letters, Origin::File { path: path.to_path_buf(), record_id, skipped })
}

pub fn write_fasta<W: Write>(out: &mut W, id: &str, seq: &Sequence) -> std::io::Result<()> {
    writeln!(out, ">{id}")?;
    for chunk in seq.letters().chunks(70) {
        writeln!(out, "{}", letters_to_string(chunk))?;
    }
    Ok(())
}
