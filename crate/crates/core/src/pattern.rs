//! Deterministic directions in the infinite quaternary tree.
//!
//! A pattern is either a finite word or an eventually periodic sequence
//! `prefix cycle cycle cycle ...`, written `AC(GT)` in text form.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{letters_to_string, Nucleotide, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    prefix: Vec<Nucleotide>,
    cycle: Vec<Nucleotide>,
}

impl Pattern {
    pub fn finite(word: impl Into<Word>) -> Self {
        Pattern { prefix: word.into().into_letters(), cycle: Vec::new() }
    }

    pub fn periodic(prefix: Vec<Nucleotide>, cycle: Vec<Nucleotide>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidPattern("cycle must be non-empty".into()));
        }
        Ok(Pattern { prefix, cycle })
    }

    /// `v v v ...`
    pub fn constant(v: Nucleotide) -> Self {
        Pattern { prefix: Vec::new(), cycle: vec![v] }
    }

    pub fn prefix(&self) -> &[Nucleotide] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Nucleotide] {
        &self.cycle
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Number of letters available, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.cycle.is_empty()
    }

    /// The `i`-th letter, 0-based (`s_{i+1}`).
    #[inline]
    pub fn letter(&self, i: usize) -> Option<Nucleotide> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle[(i - self.prefix.len()) % self.cycle.len()])
        }
    }

    /// `s^(k) = s1 ... sk`, or `None` if the pattern is shorter.
    pub fn head(&self, k: usize) -> Option<Word> {
        (0..k).map(|i| self.letter(i)).collect::<Option<Vec<_>>>().map(Word::new)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", letters_to_string(&self.prefix))?;
        if !self.cycle.is_empty() {
            write!(f, "({})", letters_to_string(&self.cycle))?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('(') {
            None => Ok(Pattern::finite(s.parse::<Word>()?)),
            Some((prefix, rest)) => {
                let cycle = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidPattern(format!("{s:?}: missing closing ')'")))?;
                Pattern::periodic(
                    prefix.parse::<Word>()?.into_letters(),
                    cycle.parse::<Word>()?.into_letters(),
                )
            }
        }
    }
}
