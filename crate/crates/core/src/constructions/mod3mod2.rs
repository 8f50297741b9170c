use std::collections::BTreeMap;

use crate::circuit::{Circuit, CircuitBuilder, GateOp, ModGate, Wire};
use crate::constructions::AndreevLayout;
use crate::Result;

/// Multilinear polynomial over GF(3) in variables `y_j in {-1, 1}`.
/// A monomial is the sorted list of its variables (`y_j^2 = 1`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct F3Poly {
    terms: BTreeMap<Vec<usize>, u8>,
}

/// `1/2` in GF(3).
const HALF: u8 = 2;

fn reduce(c: i64) -> u8 {
    c.rem_euclid(3) as u8
}

fn monomial_product(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl F3Poly {
    pub fn constant(c: i64) -> Self {
        let mut p = F3Poly::default();
        p.add_term(Vec::new(), c);
        p
    }

    /// `c * prod_{j in vars} y_j`.
    pub fn monomial(vars: impl IntoIterator<Item = usize>, c: i64) -> Self {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        vars.sort_unstable();
        let mut reduced: Vec<usize> = Vec::with_capacity(vars.len());
        for v in vars {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        let mut p = F3Poly::default();
        p.add_term(reduced, c);
        p
    }

    fn add_term(&mut self, mono: Vec<usize>, c: i64) {
        let c = reduce(c);
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(mono).or_insert(0);
        *entry = (*entry + c) % 3;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn add(&self, other: &F3Poly) -> F3Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c as i64);
        }
        out
    }

    pub fn mul(&self, other: &F3Poly) -> F3Poly {
        let mut out = F3Poly::default();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(monomial_product(a, b), (ca * cb) as i64);
            }
        }
        out
    }

    /// Coefficient of the monomial over `vars` (sorted, distinct).
    pub fn coefficient(&self, vars: &[usize]) -> u8 {
        self.terms.get(vars).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], u8)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    /// Number of monomials with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value in GF(3) at the {0,1} input `x`, with `y_j = (-1)^{x_j}`.
    pub fn eval(&self, x: &[bool]) -> u8 {
        let mut acc = 0u32;
        for (m, &c) in &self.terms {
            let neg = m.iter().filter(|&&j| x[j]).count() % 2 == 1;
            acc += if neg { (3 - c as u32) % 3 } else { c as u32 };
        }
        (acc % 3) as u8
    }
}

/// `A_n` as a GF(3) polynomial in `y = (-1)^x`:
/// `sum_s (1 - y_s)/2 * prod_i (1 + tau_i(s) Z_i)/2`, where `Z_i` is the
/// product of block `i` and `tau_i(s) = (-1)^{bit_i(s)}`. Takes values in
/// {0, 1} and equals `A_n` pointwise.
pub fn andreev_f3_polynomial(n: usize) -> Result<F3Poly> {
    let layout = AndreevLayout::new(n)?;
    let mut total = F3Poly::default();
    for s in 0..layout.data_len() {
        let mut term = F3Poly::constant(HALF as i64).add(&F3Poly::monomial([s], -(HALF as i64)));
        for (i, block) in layout.blocks().iter().enumerate() {
            let tau = if layout.address_bit(s, i) { -1 } else { 1 };
            let factor = F3Poly::constant(HALF as i64)
                .add(&F3Poly::monomial(block.clone(), tau * HALF as i64));
            term = term.mul(&factor);
        }
        total = total.add(&term);
    }
    Ok(total)
}

/// MOD3 of MOD2 gates computing `A_n`.
///
/// Each nonconstant monomial `chi_V` of the polynomial becomes a parity
/// gate `q_V`, using `chi_V = 1 + q_V (mod 3)`. The top MOD3 gate accepts
/// residue 0 of `p + 2`; the constant part enters through a CONST-1 gate.
pub fn andreev_mod3mod2(n: usize) -> Result<Circuit> {
    let poly = andreev_f3_polynomial(n)?;
    let mut b = CircuitBuilder::new(format!("andreev-mod3mod2-n{n}"), n);
    let mut constant = 2i64;
    let mut top: Vec<(Wire, i64)> = Vec::new();
    for (mono, c) in poly.terms() {
        constant += c as i64;
        if mono.is_empty() {
            continue;
        }
        let g = ModGate::parity(mono.iter().map(|&j| Wire::Input(j)))?;
        top.push((b.add(GateOp::Mod(g))?, c as i64));
    }
    if reduce(constant) != 0 {
        let one = b.add_named("one", GateOp::Const(true))?;
        top.push((one, constant));
    }
    let out = b.add_named("top", GateOp::Mod(ModGate::new(3, [0], top)?))?;
    b.finish(out)
}
