//! Frequency fitness: the encounter count of an objective value.
//!
//! Before each selection, every member of the population increments the
//! counter of its objective value. The counter then replaces the objective
//! value in every comparison and is minimized, so a never-seen value enters
//! selection with the best possible fitness, 1.

use std::io::Write;

use crate::error::{Error, Result};

/// Dense counters for the objective values `0..=UB` of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn new(upper_bound: u64) -> Self {
        let len = usize::try_from(upper_bound)
            .ok()
            .and_then(|ub| ub.checked_add(1))
            .expect("upper bound too large for a dense frequency table");
        Self {
            counts: vec![0; len],
            total: 0,
        }
    }

    pub fn upper_bound(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn total_increments(&self) -> u64 {
        self.total
    }

    fn slot(&self, y: u64) -> Result<usize> {
        if y > self.upper_bound() {
            Err(Error::OutOfRange {
                value: y,
                upper_bound: self.upper_bound(),
            })
        } else {
            Ok(y as usize)
        }
    }

    pub fn increment(&mut self, y: u64) -> Result<()> {
        let i = self.slot(y)?;
        self.counts[i] += 1;
        self.total += 1;
        Ok(())
    }

    pub fn fitness(&self, y: u64) -> Result<u64> {
        Ok(self.counts[self.slot(y)?])
    }

    /// `increment` for callers holding values produced by a problem with a
    /// correct upper bound; a violation is a bug in that problem.
    #[inline]
    pub(crate) fn bump(&mut self, y: u64) {
        if let Err(e) = self.increment(y) {
            panic!("{e}");
        }
    }

    #[inline]
    pub(crate) fn get(&self, y: u64) -> u64 {
        match self.counts.get(y as usize) {
            Some(&c) => c,
            None => panic!(
                "objective value {y} exceeds upper bound {}",
                self.upper_bound()
            ),
        }
    }

    /// Writes `value,count` rows for every value seen at least once.
    pub fn dump_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "value,count")?;
        for (y, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                writeln!(out, "{y},{c}")?;
            }
        }
        Ok(())
    }
}
