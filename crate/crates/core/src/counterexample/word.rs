use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A binary string of length at most 64. The first symbol is the most
/// significant of the `len` low bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

pub const MAX_WORD_LEN: usize = 64;

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len > MAX_WORD_LEN || (len < 64 && bits >> len != 0) {
            return Err(Error::Precondition(format!("{bits:#x} does not fit in {len} bits")));
        }
        Ok(Word { len: len as u8, bits })
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_WORD_LEN);
        Word { len: len as u8, bits: 0 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.bits >> (self.len() - 1 - i) & 1 == 1
    }

    pub fn push(&self, b: bool) -> Word {
        assert!(self.len() < MAX_WORD_LEN);
        Word {
            len: self.len + 1,
            bits: self.bits << 1 | b as u64,
        }
    }

    /// The first `k` symbols.
    pub fn prefix(&self, k: usize) -> Word {
        assert!(k <= self.len());
        let bits = if k == 0 { 0 } else { self.bits >> (self.len() - k) };
        Word { len: k as u8, bits }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len <= other.len && other.prefix(self.len()) == *self
    }

    pub fn compatible(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Right-padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Word {
        assert!(self.len() <= len && len <= MAX_WORD_LEN);
        let shift = len - self.len();
        Word {
            len: len as u8,
            bits: if shift == 64 { 0 } else { self.bits << shift },
        }
    }

    /// All words of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < MAX_WORD_LEN);
        (0..1u64 << len).map(move |bits| Word { len: len as u8, bits })
    }

    /// Successor in length-lexicographic order.
    pub fn next_shortlex(&self) -> Word {
        if self.len() == 0 || self.bits == (u64::MAX >> (64 - self.len())) {
            Word::zeros(self.len() + 1)
        } else {
            Word {
                len: self.len,
                bits: self.bits + 1,
            }
        }
    }
}

/// Length first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len, self.bits).cmp(&(other.len, other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "-" {
            return Ok(Word::EMPTY);
        }
        if s.is_empty() || s.len() > MAX_WORD_LEN {
            return Err(Error::parse(1, 1, format!("bad binary word {s:?}")));
        }
        let mut w = Word::EMPTY;
        for (i, c) in s.chars().enumerate() {
            w = w.push(match c {
                '0' => false,
                '1' => true,
                _ => return Err(Error::parse(1, i + 1, format!("bad symbol {c:?}"))),
            });
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn roundtrip_and_prefixes() {
        assert_eq!(Word::EMPTY.to_string(), "-");
        assert_eq!(w("0110").to_string(), "0110");
        assert_eq!(w("0110").prefix(2), w("01"));
        assert!(w("01").is_prefix_of(&w("0110")));
        assert!(!w("00").is_prefix_of(&w("0110")));
        assert_eq!(w("1").padded(4), w("1000"));
        assert!(w("0").compatible(&w("01")) && !w("0").compatible(&w("1")));
    }

    #[test]
    fn shortlex_walk() {
        let mut x = Word::EMPTY;
        let mut seen = Vec::new();
        for _ in 0..7 {
            seen.push(x.to_string());
            x = x.next_shortlex();
        }
        assert_eq!(seen, ["-", "0", "1", "00", "01", "10", "11"]);
        assert!(w("11") < w("000"));
    }
}
