use std::io::Write;

use num_rational::Ratio;
use rand::{Rng, RngCore};

use crate::codes::BinaryField;
use crate::restrictions::trial_rng;
use crate::{par, Error, Result};

/// Largest column count for exhaustive bias and profile computations.
pub const MAX_EXHAUSTIVE_COLUMNS: usize = 20;
/// Largest number of packed words materialized for a matrix.
pub const MAX_MATRIX_WORDS: u64 = 1 << 24;

/// The `m x t` powering matrix over GF(2) with `m = 2^{2r}`: row
/// `alpha * 2^r + beta` has column `i` equal to `<alpha^i, beta>`, the
/// inner product of bit representations.
///
/// Rows are computed on demand; [`BiasedMatrix::rows`] materializes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasedMatrix {
    t: usize,
    field: BinaryField,
}

/// Search over the nonzero test vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

pub fn build_biased_matrix(t: usize, r: u32) -> Result<BiasedMatrix> {
    if t == 0 {
        return Err(Error::invalid("matrix needs at least one column"));
    }
    Ok(BiasedMatrix {
        t,
        field: BinaryField::new(r)?,
    })
}

impl BiasedMatrix {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> u32 {
        self.field.degree()
    }

    /// Number of rows, `2^{2r}`.
    pub fn m(&self) -> u64 {
        1 << (2 * self.r())
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    /// Declared bias bound `(t - 1) / 2^r`.
    pub fn epsilon(&self) -> Ratio<u64> {
        Ratio::new(self.t as u64 - 1, self.field.order())
    }

    /// Words per packed row.
    pub fn row_words(&self) -> usize {
        self.t.div_ceil(64)
    }

    /// Packed row `index` (column `i` is bit `i % 64` of word `i / 64`).
    pub fn row(&self, index: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.row_words()];
        self.row_into(index, &mut out);
        out
    }

    fn row_into(&self, index: u64, out: &mut [u64]) {
        let r = self.r();
        let alpha = (index >> r) as u32;
        let beta = (index & ((1 << r) - 1)) as u32;
        out.fill(0);
        let mut p = 1u32;
        for i in 0..self.t {
            if (p & beta).count_ones() & 1 == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
            p = self.field.mul(p, alpha);
        }
    }

    /// All rows, packed back to back.
    pub fn rows(&self) -> Result<Vec<u64>> {
        let words = self.m() * self.row_words() as u64;
        if words > MAX_MATRIX_WORDS {
            return Err(Error::capacity("matrix words", words, MAX_MATRIX_WORDS));
        }
        let wpr = self.row_words();
        let mut out = vec![0u64; words as usize];
        par::for_each_chunk_mut(&mut out, wpr * 256, |chunk, data| {
            for (k, row) in data.chunks_mut(wpr).enumerate() {
                self.row_into((chunk * 256 + k) as u64, row);
            }
        });
        Ok(out)
    }

    /// Row values as integers (requires `t <= 64`).
    fn row_values(&self) -> Result<Vec<u64>> {
        if self.t > 64 {
            return Err(Error::capacity("columns", self.t as u64, 64));
        }
        self.rows()
    }

    /// Bit `row` of the codeword `A x`; `x` packed like a row.
    pub fn codeword_bit(&self, row: u64, x: &[u64]) -> bool {
        inner(&self.row(row), x)
    }

    /// The codeword `A x` as `m` packed bits, row 0 first.
    pub fn codeword(&self, x: &[u64]) -> Result<Vec<u64>> {
        let rows = self.rows()?;
        let wpr = self.row_words();
        let mut out = vec![0u64; (self.m() as usize).div_ceil(64)];
        for (i, row) in rows.chunks(wpr).enumerate() {
            if inner(row, x) {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(out)
    }

    /// Text export: header line, then one hex row per line. Hex digit `d`
    /// holds columns `4d..4d+3`, column `4d` in its least significant bit.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::invalid(format!("write failed: {e}"));
        writeln!(
            out,
            "biased t={} r={} m={} poly={:x}",
            self.t,
            self.r(),
            self.m(),
            self.field.modulus()
        )
        .map_err(io)?;
        let rows = self.rows()?;
        let digits = self.t.div_ceil(4);
        let mut line = String::with_capacity(digits + 1);
        for row in rows.chunks(self.row_words()) {
            line.clear();
            for d in 0..digits {
                let nibble = (row[d / 16] >> (4 * (d % 16))) & 0xF;
                line.push(char::from_digit(nibble as u32, 16).unwrap());
            }
            line.push('\n');
            out.write_all(line.as_bytes()).map_err(io)?;
        }
        Ok(())
    }
}

fn inner(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum::<u32>() & 1 == 1
}

/// In-place Walsh-Hadamard transform.
pub fn fwht(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        for i in (0..a.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
        h *= 2;
    }
}

/// Largest bias found, `|#{rows : <row, v> = 1} / m - 1/2|`, with the
/// test vector attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bias {
    pub value: Ratio<u64>,
    pub witness: u64,
}

impl Bias {
    pub fn as_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

fn bias_from_sum(sum: i64, m: u64) -> Ratio<u64> {
    Ratio::new(sum.unsigned_abs(), 2 * m)
}

/// Maximum bias over all nonzero `v in F_2^t` (via the Walsh-Hadamard
/// transform of the row histogram) or over sampled nonzero `v`.
pub fn bias_of(matrix: &BiasedMatrix, search: Search) -> Result<Bias> {
    let rows = matrix.row_values()?;
    bias_of_rows(&rows, matrix.t(), search)
}

/// [`bias_of`] for an explicit list of `t`-bit rows (`t <= 64`).
pub fn bias_of_rows(rows: &[u64], t: usize, search: Search) -> Result<Bias> {
    let m = rows.len() as u64;
    let mut best = Bias {
        value: Ratio::new(0, 1),
        witness: 0,
    };
    match search {
        Search::Exhaustive => {
            if t > MAX_EXHAUSTIVE_COLUMNS {
                return Err(Error::capacity(
                    "exhaustive columns",
                    t as u64,
                    MAX_EXHAUSTIVE_COLUMNS as u64,
                ));
            }
            let mut hist = vec![0i64; 1 << t];
            for &r in rows {
                hist[r as usize] += 1;
            }
            fwht(&mut hist);
            for (v, &s) in hist.iter().enumerate().skip(1) {
                let b = bias_from_sum(s, m);
                if b > best.value {
                    best = Bias {
                        value: b,
                        witness: v as u64,
                    };
                }
            }
        }
        Search::Sampled { count, seed } => {
            let mask = if t == 64 { !0 } else { (1u64 << t) - 1 };
            for i in 0..count {
                let mut rng = trial_rng(seed, i);
                let v = loop {
                    let v = rng.next_u64() & mask;
                    if v != 0 {
                        break v;
                    }
                };
                let b = bias_from_sum(walsh_at(rows, v), m);
                if b > best.value {
                    best = Bias { value: b, witness: v };
                }
            }
        }
    }
    Ok(best)
}

/// `sum_rows (-1)^{<row, v>}` by direct summation.
pub fn walsh_at(rows: &[u64], v: u64) -> i64 {
    rows.iter()
        .map(|r| if (r & v).count_ones() & 1 == 1 { -1 } else { 1 })
        .sum()
}

/// Outcome of [`correlation_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Profile {
    /// Codewords found with `|rh(T, Ax) - 1/2| > theta`.
    pub exceeders: u64,
    /// Nonzero `x` examined.
    pub examined: u64,
    /// Number of nonzero `x`, `2^t - 1`.
    pub total: u64,
}

impl Profile {
    /// `exceeders` scaled to all nonzero `x`.
    pub fn estimated_count(&self) -> f64 {
        self.exceeders as f64 * self.total as f64 / self.examined as f64
    }
}

/// Counts nonzero `x` whose codeword `A x` has relative agreement with
/// `target` (`m` packed bits) further than `theta` from `1/2`.
pub fn correlation_profile(
    matrix: &BiasedMatrix,
    target: &[u64],
    theta: f64,
    search: Search,
) -> Result<Profile> {
    let m = matrix.m();
    if target.len() as u64 != m.div_ceil(64) {
        return Err(Error::Dimension {
            what: "target words",
            expected: m.div_ceil(64) as usize,
            found: target.len(),
        });
    }
    let rows = matrix.row_values()?;
    let t = matrix.t();
    let signed = |i: usize| if target[i / 64] >> (i % 64) & 1 == 1 { -1 } else { 1 };
    let exceeds = |w: i64| w.unsigned_abs() as f64 > 2.0 * m as f64 * theta;
    let total = (1u64 << t) - 1;
    match search {
        Search::Exhaustive => {
            if t > MAX_EXHAUSTIVE_COLUMNS {
                return Err(Error::capacity(
                    "exhaustive columns",
                    t as u64,
                    MAX_EXHAUSTIVE_COLUMNS as u64,
                ));
            }
            let mut g = vec![0i64; 1 << t];
            for (i, &r) in rows.iter().enumerate() {
                g[r as usize] += signed(i);
            }
            fwht(&mut g);
            let exceeders = g.iter().skip(1).filter(|&&w| exceeds(w)).count() as u64;
            Ok(Profile {
                exceeders,
                examined: total,
                total,
            })
        }
        Search::Sampled { count, seed } => {
            let mask = if t == 64 { !0 } else { (1u64 << t) - 1 };
            let mut exceeders = 0;
            for k in 0..count {
                let mut rng = trial_rng(seed, k);
                let x = loop {
                    let x = rng.random::<u64>() & mask;
                    if x != 0 {
                        break x;
                    }
                };
                let w: i64 = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| signed(i) * if (r & x).count_ones() & 1 == 1 { -1 } else { 1 })
                    .sum();
                exceeders += u64::from(exceeds(w));
            }
            Ok(Profile {
                exceeders,
                examined: count,
                total,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_column_is_balanced() {
        for r in 2..=5 {
            let a = build_biased_matrix(1, r).unwrap();
            let b = bias_of(&a, Search::Exhaustive).unwrap();
            assert_eq!(b.value, Ratio::new(0, 1));
        }
    }

    #[test]
    fn zero_matrix_has_full_bias() {
        let b = bias_of_rows(&[0; 16], 2, Search::Exhaustive).unwrap();
        assert_eq!(b.value, Ratio::new(1, 2));
    }

    #[test]
    fn transform_matches_direct_sums() {
        let a = build_biased_matrix(5, 3).unwrap();
        let rows = a.row_values().unwrap();
        let mut h = vec![0i64; 32];
        for &r in &rows {
            h[r as usize] += 1;
        }
        fwht(&mut h);
        for v in 0..32u64 {
            assert_eq!(h[v as usize], walsh_at(&rows, v));
        }
    }

    #[test]
    fn sampled_never_exceeds_exhaustive() {
        let a = build_biased_matrix(6, 4).unwrap();
        let full = bias_of(&a, Search::Exhaustive).unwrap();
        let some = bias_of(&a, Search::Sampled { count: 20, seed: 3 }).unwrap();
        assert!(some.value <= full.value);
        assert!(full.value <= a.epsilon());
    }

    #[test]
    fn row_layout() {
        let a = build_biased_matrix(3, 2).unwrap();
        // alpha = 0: columns <1, beta>, <0, beta>, <0, beta>
        assert_eq!(a.row(0b0001)[0], 0b001);
        assert_eq!(a.row(0b0010)[0], 0);
        // alpha = 1, beta = 1: every power is 1
        assert_eq!(a.row(0b0101)[0], 0b111);
        assert_eq!(a.m(), 16);
    }

    #[test]
    fn export_format() {
        let a = build_biased_matrix(4, 2).unwrap();
        let mut buf = Vec::new();
        a.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "biased t=4 r=2 m=16 poly=7");
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[1 + 0b0101], "f");
    }

    #[test]
    fn profile_self_and_complement() {
        let a = build_biased_matrix(4, 3).unwrap();
        let x = [0b1011u64];
        let cw = a.codeword(&x).unwrap();
        let p = correlation_profile(&a, &cw, 0.49, Search::Exhaustive).unwrap();
        assert!(p.exceeders >= 1);
        let comp: Vec<u64> = cw.iter().map(|w| !w).collect();
        let p = correlation_profile(&a, &comp, 0.49, Search::Exhaustive).unwrap();
        assert!(p.exceeders >= 1);
    }
}
