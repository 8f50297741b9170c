//! Partition-structured random restrictions, exact forcing tests for
//! threshold gates, and circuit simplification under a restriction.

mod forcing;
mod simplify;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub use forcing::{
    forced_constant, forced_single_input, CompiledGate, ConstantOutcome, ForcingOutcome,
    MAX_FREE_INPUTS,
};
pub use simplify::{apply_restriction, bottom_fates, BottomLayer, GateFate, Restricted};

/// A partition of `0..n` into disjoint parts whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
            return Err(Error::invalid("partition parts must be nonempty"));
        }
        let mut seen = vec![false; n];
        for &j in parts.iter().flatten() {
            if j >= n {
                return Err(Error::invalid(format!("partition index {j} out of range for n={n}")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::invalid(format!("index {j} appears in two parts")));
            }
        }
        if let Some(j) = seen.iter().position(|&s| !s) {
            return Err(Error::invalid(format!("index {j} is not covered")));
        }
        let min = parts.iter().map(Vec::len).min().unwrap();
        let max = parts.iter().map(Vec::len).max().unwrap();
        if max - min > 1 {
            return Err(Error::invalid(format!("part sizes range from {min} to {max}")));
        }
        Ok(Partition { n, parts })
    }

    /// `count` contiguous parts; the first `n mod count` get one extra index.
    pub fn equal(n: usize, count: usize) -> Result<Self> {
        if count == 0 || count > n {
            return Err(Error::invalid(format!("cannot split {n} indices into {count} parts")));
        }
        let base = n / count;
        let extra = n % count;
        let mut parts = Vec::with_capacity(count);
        let mut start = 0;
        for i in 0..count {
            let len = base + usize::from(i < extra);
            parts.push((start..start + len).collect());
            start += len;
        }
        Ok(Partition { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Number of parts, `|P|`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// A partial assignment `[n] -> {0, 1, *}` stored as two bitsets.
/// Value bits are always clear at star positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    n: usize,
    ones: Vec<u64>,
    stars: Vec<u64>,
}

impl Restriction {
    /// Every coordinate free.
    pub fn all_stars(n: usize) -> Self {
        let mut r = Restriction::from_values(&vec![None; n]);
        for j in 0..n {
            r.stars[j / 64] |= 1 << (j % 64);
        }
        r
    }

    pub fn from_values(values: &[Option<bool>]) -> Self {
        let words = values.len().div_ceil(64);
        let mut r = Restriction {
            n: values.len(),
            ones: vec![0; words],
            stars: vec![0; words],
        };
        for (j, v) in values.iter().enumerate() {
            match v {
                None => r.stars[j / 64] |= 1 << (j % 64),
                Some(true) => r.ones[j / 64] |= 1 << (j % 64),
                Some(false) => {}
            }
        }
        r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` for a star.
    pub fn value(&self, j: usize) -> Option<bool> {
        let bit = 1u64 << (j % 64);
        if self.stars[j / 64] & bit != 0 {
            None
        } else {
            Some(self.ones[j / 64] & bit != 0)
        }
    }

    pub fn is_star(&self, j: usize) -> bool {
        self.stars[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn values(&self) -> Vec<Option<bool>> {
        (0..self.n).map(|j| self.value(j)).collect()
    }

    /// Free coordinates in increasing order.
    pub fn free(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.is_star(j)).collect()
    }

    pub fn free_count(&self) -> usize {
        self.stars.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Packed bits of the coordinates fixed to 1.
    pub fn ones_words(&self) -> &[u64] {
        &self.ones
    }

    /// Packed bits of the free coordinates.
    pub fn star_words(&self) -> &[u64] {
        &self.stars
    }

    /// Full assignment: free coordinate `free()[i]` takes bit `i` of `bits`.
    pub fn complete(&self, bits: u64) -> Vec<bool> {
        let mut i = 0;
        (0..self.n)
            .map(|j| match self.value(j) {
                Some(v) => v,
                None => {
                    let v = (bits >> i) & 1 == 1;
                    i += 1;
                    v
                }
            })
            .collect()
    }

    /// True if every fixed coordinate of `self` is fixed the same way in `other`.
    pub fn is_extended_by(&self, other: &Restriction) -> bool {
        self.n == other.n
            && (0..self.n).all(|j| match self.value(j) {
                None => true,
                v => other.value(j) == v,
            })
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n)
            .map(|j| match self.value(j) {
                None => '*',
                Some(true) => '1',
                Some(false) => '0',
            })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(Error::Parse {
                    line: 1,
                    message: format!("restriction symbol {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Restriction::from_values(&values))
    }
}

/// Generator for trial `index` of an experiment seeded with `seed`; each
/// index gets its own ChaCha stream, so trials are order-independent.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random restriction across `partition`: one uniform star per part and
/// independent fair bits elsewhere, determined by `(seed, index)`.
pub fn sample_restriction(partition: &Partition, seed: u64, index: u64) -> Restriction {
    let mut rng = trial_rng(seed, index);
    sample_with(partition, &mut rng)
}

/// As [`sample_restriction`], drawing from `rng`.
pub fn sample_with(partition: &Partition, rng: &mut impl RngCore) -> Restriction {
    let n = partition.n;
    let words = n.div_ceil(64);
    let mut ones: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
    if !n.is_multiple_of(64) {
        ones[words - 1] &= (1u64 << (n % 64)) - 1;
    }
    let mut stars = vec![0u64; words];
    for part in &partition.parts {
        let j = part[rng.random_range(0..part.len())];
        stars[j / 64] |= 1 << (j % 64);
    }
    for (o, s) in ones.iter_mut().zip(&stars) {
        *o &= !s;
    }
    Restriction { n, ones, stars }
}
