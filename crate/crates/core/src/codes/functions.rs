use crate::codes::{build_biased_matrix, BiasedMatrix};
use crate::constructions::mux_index;
use crate::{Error, Result};

fn pack(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        out[i / 64] |= 1 << (i % 64);
    }
    out
}

/// `F(z, x) = M(A x, z)`: bit `bin(z)` of the codeword of `x`, with `z_1`
/// the most significant address bit. Only that one row is computed.
pub fn f_eval(matrix: &BiasedMatrix, z: &[bool], x: &[bool]) -> Result<bool> {
    if x.len() != matrix.t() {
        return Err(Error::Dimension {
            what: "message length",
            expected: matrix.t(),
            found: x.len(),
        });
    }
    let address_bits = 2 * matrix.r() as usize;
    if z.len() != address_bits {
        return Err(Error::Dimension {
            what: "address length",
            expected: address_bits,
            found: z.len(),
        });
    }
    Ok(matrix.codeword_bit(mux_index(z) as u64, &pack(x)))
}

/// The function `B_{n,k}(x, a) = F(z, x)` where `z_i` is the parity of the
/// `i`-th block of `n/k` consecutive bits of `a`, and the matrix has
/// `t = n` columns over GF(2^{k/2}).
#[derive(Debug, Clone)]
pub struct BFunction {
    n: usize,
    k: usize,
    matrix: BiasedMatrix,
}

impl BFunction {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || !n.is_multiple_of(k) || !k.is_multiple_of(2) {
            return Err(Error::invalid(format!("B needs k even and dividing n (n={n}, k={k})")));
        }
        let matrix = build_biased_matrix(n, (k / 2) as u32)?;
        Ok(BFunction { n, k, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &BiasedMatrix {
        &self.matrix
    }

    /// Block parities of `a`.
    pub fn address(&self, a: &[bool]) -> Vec<bool> {
        a.chunks(self.n / self.k)
            .map(|block| block.iter().filter(|&&b| b).count() % 2 == 1)
            .collect()
    }

    pub fn eval(&self, x: &[bool], a: &[bool]) -> Result<bool> {
        if a.len() != self.n {
            return Err(Error::Dimension {
                what: "address block length",
                expected: self.n,
                found: a.len(),
            });
        }
        f_eval(&self.matrix, &self.address(a), x)
    }
}

/// `B_{n,k}(x, a)`.
pub fn b_eval(n: usize, k: usize, x: &[bool], a: &[bool]) -> Result<bool> {
    BFunction::new(n, k)?.eval(x, a)
}
