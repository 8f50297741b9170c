use std::ops::Range;

use crate::{Error, Result};

/// Position selected by the multiplexer for address bits `a`
/// (`a[0]` most significant), as a 0-based index into `x`.
pub fn mux_index(a: &[bool]) -> usize {
    a.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// `M(x, a) = x_{bin(a)}` with `bin(a_1..a_k) = 1 + sum a_i 2^(k-i)`:
/// `a_1` is the most significant address bit and the all-zero address
/// selects the first entry of `x`.
pub fn multiplexer_eval(x: &[bool], a: &[bool]) -> Result<bool> {
    if a.len() >= usize::BITS as usize || x.len() != 1usize << a.len() {
        return Err(Error::Dimension {
            what: "multiplexer data length",
            expected: 1usize.checked_shl(a.len() as u32).unwrap_or(0),
            found: x.len(),
        });
    }
    Ok(x[mux_index(a)])
}

/// Input layout of Andreev's function on `n = 2 * 2^k` bits: the data
/// block `x` occupies positions `0..2^k`, followed by the `k` address
/// blocks whose parities form the multiplexer address.
///
/// When `k` divides `2^k` every block has `2^k / k` bits. Otherwise the
/// first `2^k mod k` blocks carry one extra bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AndreevLayout {
    n: usize,
    k: usize,
    blocks: Vec<Range<usize>>,
}

impl AndreevLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() || n > 1 << 30 {
            return Err(Error::invalid(format!(
                "Andreev size {n} must be 2 * 2^k with k >= 1"
            )));
        }
        let k = n.trailing_zeros() as usize - 1;
        let half = n / 2;
        let base = half / k;
        let extra = half % k;
        let mut blocks = Vec::with_capacity(k);
        let mut start = half;
        for i in 0..k {
            let len = base + usize::from(i < extra);
            blocks.push(start..start + len);
            start += len;
        }
        Ok(AndreevLayout { n, k, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of address blocks (and address bits).
    pub fn k(&self) -> usize {
        self.k
    }

    /// Length of the data block `x`.
    pub fn data_len(&self) -> usize {
        self.n / 2
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Address bit `i` of data position `s` (`i = 0` is most significant).
    pub fn address_bit(&self, s: usize, i: usize) -> bool {
        (s >> (self.k - 1 - i)) & 1 == 1
    }

    pub fn eval(&self, input: &[bool]) -> Result<bool> {
        if input.len() != self.n {
            return Err(Error::Dimension {
                what: "Andreev input length",
                expected: self.n,
                found: input.len(),
            });
        }
        let z: Vec<bool> = self
            .blocks
            .iter()
            .map(|b| input[b.clone()].iter().filter(|&&v| v).count() % 2 == 1)
            .collect();
        multiplexer_eval(&input[..self.data_len()], &z)
    }

    /// Evaluates on row index `row` (bit `j` is input `j`); `n <= 64`.
    pub fn eval_row(&self, row: u64) -> bool {
        let mut s = 0usize;
        for b in &self.blocks {
            let mask = ((1u64 << b.len()) - 1) << b.start;
            s = (s << 1) | ((row & mask).count_ones() as usize & 1);
        }
        (row >> s) & 1 == 1
    }
}

/// Andreev's function `A_n`.
pub fn andreev_eval(n: usize, input: &[bool]) -> Result<bool> {
    AndreevLayout::new(n)?.eval(input)
}

/// Parity of the set bits.
pub fn parity(input: &[bool]) -> bool {
    input.iter().filter(|&&b| b).count() % 2 == 1
}
