//! The four-letter nucleotide alphabet and finite words over it.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A nucleotide, ordered (A, C, G, T).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Panics if `i > 3`.
    #[inline]
    pub fn from_index(i: usize) -> Nucleotide {
        Self::ALL[i]
    }

    /// Case-insensitive; anything outside ACGT yields `None`.
    #[inline]
    pub fn from_byte(b: u8) -> Option<Nucleotide> {
        match b {
            b'A' | b'a' => Some(Nucleotide::A),
            b'C' | b'c' => Some(Nucleotide::C),
            b'G' | b'g' => Some(Nucleotide::G),
            b'T' | b't' => Some(Nucleotide::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
            Nucleotide::T => 'T',
        }
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl TryFrom<char> for Nucleotide {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        if c.is_ascii() {
            Nucleotide::from_byte(c as u8).ok_or(Error::InvalidLetter(c))
        } else {
            Err(Error::InvalidLetter(c))
        }
    }
}

/// A finite word `s1 ... sm` over the nucleotide alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Nucleotide>);

impl Word {
    pub fn new(letters: Vec<Nucleotide>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Nucleotide] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Nucleotide> {
        self.0
    }

    /// Every word of length `m`, in lexicographic (A, C, G, T) order.
    pub fn all_of_length(m: usize) -> impl Iterator<Item = Word> {
        let total = 4usize.pow(m as u32);
        (0..total).map(move |mut code| {
            let mut letters = vec![Nucleotide::A; m];
            for slot in letters.iter_mut().rev() {
                *slot = Nucleotide::from_index(code % 4);
                code /= 4;
            }
            Word(letters)
        })
    }
}

impl Deref for Word {
    type Target = [Nucleotide];

    fn deref(&self) -> &[Nucleotide] {
        &self.0
    }
}

impl From<Vec<Nucleotide>> for Word {
    fn from(v: Vec<Nucleotide>) -> Self {
        Word(v)
    }
}

impl From<&[Nucleotide]> for Word {
    fn from(v: &[Nucleotide]) -> Self {
        Word(v.to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(Nucleotide::try_from)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.0 {
            write!(f, "{}", n.to_char())?;
        }
        Ok(())
    }
}

/// Renders a letter slice as a string.
pub fn letters_to_string(letters: &[Nucleotide]) -> String {
    letters.iter().map(|n| n.to_char()).collect()
}
