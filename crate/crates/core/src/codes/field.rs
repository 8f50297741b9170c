use crate::{Error, Result};

/// Irreducible polynomials over GF(2) for degrees 2 through 16, bit `i`
/// being the coefficient of `x^i`.
const MODULI: [u32; 15] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1002B,
];

fn degree(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Remainder of `a` modulo `m` in GF(2)[x].
fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let d = degree(p);
    (2u32..1 << (d / 2 + 1)).all(|q| poly_rem(p, q) != 0)
}

/// The field GF(2^r), elements being bit vectors of polynomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryField {
    r: u32,
    modulus: u32,
}

impl BinaryField {
    pub fn new(r: u32) -> Result<Self> {
        if !(2..=16).contains(&r) {
            return Err(Error::invalid(format!("field degree {r} outside 2..=16")));
        }
        let modulus = MODULI[r as usize - 2];
        if degree(modulus) != r || !is_irreducible(modulus) {
            return Err(Error::structural(format!("modulus {modulus:#x} is not irreducible")));
        }
        Ok(BinaryField { r, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^r`.
    pub fn order(&self) -> u64 {
        1 << self.r
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    /// Carry-less product reduced modulo the field polynomial.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut prod: u64 = 0;
        let (a, mut b) = (a as u64, b);
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                prod ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        let m = self.modulus as u64;
        for bit in (self.r as u64..2 * self.r as u64).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= m << (bit - self.r as u64);
            }
        }
        prod as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^r - 2)`; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.order() - 2))
    }
}
