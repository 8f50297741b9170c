use num_bigint::BigInt;
use num_traits::Zero;

use super::{Circuit, GateOp, Wire};
use crate::{par, Error, Result};

/// Largest supported table arity (2^28 rows, 32 MiB).
pub const MAX_TABLE_INPUTS: usize = 28;

/// Masks of the variables living inside one 64-row word.
pub(crate) const COLUMN: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Words per parallel work item when tabulating circuits.
const BLOCK_WORDS: usize = 64;

/// Packed output bits of a function on `num_inputs` variables.
///
/// Row `i` is the input whose bit `j` is `x_j` (so `x_0` is the least
/// significant bit). Bits past the last row are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    num_inputs: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

fn last_word_mask(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Word `word` of the column of variable `j`.
#[inline]
pub(crate) fn input_word(j: usize, word: usize) -> u64 {
    if j < 6 {
        COLUMN[j]
    } else if (word >> (j - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

impl TruthTable {
    fn check_arity(n: usize) -> Result<()> {
        if n > MAX_TABLE_INPUTS {
            return Err(Error::capacity("truth table inputs", n as u64, MAX_TABLE_INPUTS as u64));
        }
        Ok(())
    }

    pub fn zeros(num_inputs: usize) -> Result<Self> {
        Self::check_arity(num_inputs)?;
        Ok(TruthTable {
            num_inputs,
            words: vec![0; word_count(num_inputs)],
        })
    }

    /// Tabulates `f` over every row.
    pub fn from_fn(num_inputs: usize, f: impl Fn(u64) -> bool + Sync + Send) -> Result<Self> {
        let mut t = Self::zeros(num_inputs)?;
        let rows = t.rows();
        par::for_each_chunk_mut(&mut t.words, BLOCK_WORDS, |chunk, words| {
            for (k, w) in words.iter_mut().enumerate() {
                let base = ((chunk * BLOCK_WORDS + k) as u64) << 6;
                let mut acc = 0u64;
                for lane in 0..64u64 {
                    let row = base + lane;
                    if row < rows && f(row) {
                        acc |= 1 << lane;
                    }
                }
                *w = acc;
            }
        });
        Ok(t)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if !bits.len().is_power_of_two() {
            return Err(Error::invalid(format!("{} rows is not a power of two", bits.len())));
        }
        let n = bits.len().trailing_zeros() as usize;
        Self::from_fn(n, |r| bits[r as usize])
    }

    /// Wraps raw words; bits past the last row must be zero.
    pub fn from_words(num_inputs: usize, words: Vec<u64>) -> Result<Self> {
        Self::check_arity(num_inputs)?;
        if words.len() != word_count(num_inputs) {
            return Err(Error::Dimension {
                what: "truth table words",
                expected: word_count(num_inputs),
                found: words.len(),
            });
        }
        if words[words.len() - 1] & !last_word_mask(num_inputs) != 0 {
            return Err(Error::invalid("bits set beyond the last row"));
        }
        Ok(TruthTable { num_inputs, words })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn rows(&self) -> u64 {
        1u64 << self.num_inputs
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, row: u64) -> bool {
        (self.words[(row >> 6) as usize] >> (row & 63)) & 1 == 1
    }

    pub fn set(&mut self, row: u64, value: bool) {
        let w = &mut self.words[(row >> 6) as usize];
        if value {
            *w |= 1 << (row & 63);
        } else {
            *w &= !(1 << (row & 63));
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of rows on which the two tables agree.
    pub fn agreement(&self, other: &TruthTable) -> Result<u64> {
        self.same_arity(other)?;
        let differ: u64 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum();
        Ok(self.rows() - differ)
    }

    fn same_arity(&self, other: &TruthTable) -> Result<()> {
        if self.num_inputs != other.num_inputs {
            return Err(Error::Dimension {
                what: "truth table inputs",
                expected: self.num_inputs,
                found: other.num_inputs,
            });
        }
        Ok(())
    }

    pub fn complement(&self) -> TruthTable {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= last_word_mask(self.num_inputs);
        TruthTable {
            num_inputs: self.num_inputs,
            words,
        }
    }

    /// `Some(c)` when the table is the constant `c`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            k if k == self.rows() => Some(true),
            _ => None,
        }
    }

    /// Whether flipping `x_j` changes the output on some row.
    pub fn depends_on(&self, j: usize) -> bool {
        if j >= self.num_inputs {
            return false;
        }
        if j < 6 {
            let s = 1 << j;
            self.words
                .iter()
                .any(|&w| ((w & COLUMN[j]) >> s) != (w & !COLUMN[j]))
        } else {
            let stride = 1usize << (j - 6);
            (0..self.words.len())
                .filter(|i| i & stride == 0)
                .any(|i| self.words[i] != self.words[i + stride])
        }
    }

    /// Variables the function actually depends on.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_inputs).filter(|&j| self.depends_on(j)).collect()
    }

    /// Lowercase hex, row 0 first: digit `d` holds rows `4d..4d+3`, with
    /// row `4d` in its least significant bit. Tables with fewer than four
    /// rows use a single digit.
    pub fn to_hex(&self) -> String {
        let digits = ((self.rows() as usize) / 4).max(1);
        (0..digits)
            .map(|d| {
                let nib = (self.words[d / 16] >> ((d % 16) * 4)) & 0xF;
                char::from_digit(nib as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(num_inputs: usize, hex: &str) -> Result<Self> {
        let mut t = Self::zeros(num_inputs)?;
        let digits = ((t.rows() as usize) / 4).max(1);
        let hex = hex.trim();
        if hex.len() != digits {
            return Err(Error::Dimension {
                what: "hex digits",
                expected: digits,
                found: hex.len(),
            });
        }
        for (d, c) in hex.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::invalid(format!("bad hex digit {c:?}")))?;
            t.words[d / 16] |= (nib as u64) << ((d % 16) * 4);
        }
        if t.words[t.words.len() - 1] & !last_word_mask(num_inputs) != 0 {
            return Err(Error::invalid("hex sets bits beyond the last row"));
        }
        Ok(t)
    }

    /// Rows as '0'/'1' characters, row 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.rows()).map(|r| if self.get(r) { '1' } else { '0' }).collect()
    }
}

impl Circuit {
    /// Tabulates the circuit 64 rows per machine word.
    ///
    /// AND, OR, parity and constants are evaluated with word operations;
    /// threshold and MOD3 gates accumulate per-lane sums over the set bits
    /// of each input word.
    pub fn truth_table(&self) -> Result<TruthTable> {
        let n = self.num_inputs;
        let mut table = TruthTable::zeros(n)?;
        par::for_each_chunk_mut(&mut table.words, BLOCK_WORDS, |chunk, out| {
            self.eval_block(chunk * BLOCK_WORDS, out);
        });
        let last = table.words.len() - 1;
        table.words[last] &= last_word_mask(n);
        Ok(table)
    }

    fn eval_block(&self, first_word: usize, out: &mut [u64]) {
        let len = out.len();
        let mut signals = vec![0u64; self.gates.len() * len];
        for (gi, gate) in self.gates.iter().enumerate() {
            let (done, rest) = signals.split_at_mut(gi * len);
            let dst = &mut rest[..len];
            let source = |w: Wire, k: usize| -> u64 {
                match w {
                    Wire::Input(j) => input_word(j, first_word + k),
                    Wire::Gate(g) => done[g * len + k],
                }
            };
            eval_gate_words(&gate.op, source, dst);
        }
        out.copy_from_slice(&signals[self.output * len..(self.output + 1) * len]);
    }
}

fn eval_gate_words(op: &GateOp, source: impl Fn(Wire, usize) -> u64, dst: &mut [u64]) {
    match op {
        GateOp::Const(b) => dst.fill(if *b { !0 } else { 0 }),
        GateOp::And(ws) => {
            for (k, d) in dst.iter_mut().enumerate() {
                *d = ws.iter().fold(!0, |acc, w| acc & source(*w, k));
            }
        }
        GateOp::Or(ws) => {
            for (k, d) in dst.iter_mut().enumerate() {
                *d = ws.iter().fold(0, |acc, w| acc | source(*w, k));
            }
        }
        GateOp::Mod(m) if m.modulus() == 2 => {
            let odd = m.accepts(1);
            let even = m.accepts(0);
            for (k, d) in dst.iter_mut().enumerate() {
                let x = m.terms().iter().fold(0, |acc, (w, _)| acc ^ source(*w, k));
                *d = match (even, odd) {
                    (true, true) => !0,
                    (false, true) => x,
                    (true, false) => !x,
                    (false, false) => 0,
                };
            }
        }
        GateOp::Mod(m) => {
            let p = m.modulus();
            for (k, d) in dst.iter_mut().enumerate() {
                let mut acc = [0u32; 64];
                for &(w, r) in m.terms() {
                    add_lanes(&mut acc, source(w, k), r);
                }
                *d = lanes_to_word(|l| m.accepts(acc[l] % p));
            }
        }
        GateOp::Ltf(g) | GateOp::Maj(g) => match g.small() {
            Some(s) => {
                for (k, d) in dst.iter_mut().enumerate() {
                    let mut acc = [0i64; 64];
                    for ((w, _), &wt) in g.terms().iter().zip(&s.weights) {
                        add_lanes(&mut acc, source(*w, k), wt);
                    }
                    *d = lanes_to_word(|l| acc[l] >= s.threshold);
                }
            }
            None => {
                for (k, d) in dst.iter_mut().enumerate() {
                    let words: Vec<u64> = g.terms().iter().map(|(w, _)| source(*w, k)).collect();
                    *d = lanes_to_word(|l| {
                        let mut sum = BigInt::zero();
                        for (i, (_, wt)) in g.terms().iter().enumerate() {
                            if (words[i] >> l) & 1 == 1 {
                                sum += wt;
                            }
                        }
                        sum >= *g.threshold()
                    });
                }
            }
        },
    }
}

#[inline]
fn add_lanes<T: Copy + std::ops::AddAssign>(acc: &mut [T; 64], mut bits: u64, w: T) {
    if bits == !0 {
        acc.iter_mut().for_each(|a| *a += w);
        return;
    }
    while bits != 0 {
        let l = bits.trailing_zeros() as usize;
        acc[l] += w;
        bits &= bits - 1;
    }
}

#[inline]
fn lanes_to_word(f: impl Fn(usize) -> bool) -> u64 {
    (0..64).fold(0u64, |acc, l| if f(l) { acc | (1 << l) } else { acc })
}
