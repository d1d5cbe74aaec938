//! Fixed-length bit strings, the search space `{0,1}^s` of every algorithm.
//!
//! Genes are stored packed into 64-bit words, least significant bit first.
//! Index `i` (0-based) corresponds to gene `i + 1` in the usual 1-based
//! notation of the benchmark definitions; that is the only place where the
//! mapping between the two conventions happens.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::rng::Rng;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Self {
            words: vec![u64::MAX; len.div_ceil(WORD)],
            len,
        };
        b.clear_tail();
        b
    }

    /// Uniformly random string of the given length.
    pub fn random(rng: &mut Rng, len: usize) -> Self {
        let mut b = Self {
            words: (0..len.div_ceil(WORD))
                .map(|_| rng.random::<u64>())
                .collect(),
            len,
        };
        b.clear_tail();
        b
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = Self::zeros(bits.len());
        for (i, &v) in bits.iter().enumerate() {
            b.set(i, v);
        }
        b
    }

    /// Builds a string whose gene `i` is bit `i` of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 genes");
        let mut b = Self::zeros(len);
        if len > 0 {
            b.words[0] = value;
            b.clear_tail();
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if v {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Number of one-bits, `|x|_1`.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complement(&self) -> Self {
        let mut b = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        b.clear_tail();
        b
    }

    /// Number of positions in which the two strings differ.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        if self.len != other.len {
            return invalid(format!(
                "hamming distance of strings with lengths {} and {}",
                self.len, other.len
            ));
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of all one-bits, ascending.
    pub fn ones_indices(&self) -> impl Iterator<Item = usize> + '_ {
        set_bits(&self.words)
    }

    /// Indices at which `self` and `other` differ, ascending. Both strings
    /// must have the same length.
    pub(crate) fn diff_indices<'a>(&'a self, other: &'a Self) -> impl Iterator<Item = usize> + 'a {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .flat_map(|(k, (a, b))| WordBits(a ^ b).map(move |j| k * WORD + j))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words
        .iter()
        .enumerate()
        .flat_map(|(k, &w)| WordBits(w).map(move |j| k * WORD + j))
}

struct WordBits(u64);

impl Iterator for WordBits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let j = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(j)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Parses strings of `0` and `1`, first character is gene 0.
impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => invalid(format!("not a binary digit: {other:?}")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}
