//! Chow parameters, exact LTF recognition, exhaustive enumeration of small
//! LTFs, and the depth-two signature `(|S(g)|, Sigma(g))`.
//!
//! Fourier convention: `F = 1 - 2f` and `chi_i = 1 - 2x_i`; coefficients are
//! stored multiplied by `2^n`, which makes them exact integers.

mod feasibility;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::circuit::{input_word, LinearThresholdGate, TruthTable, Wire};
use crate::{par, Error, Result};

use feasibility::{solve, to_integers, Feasibility};

/// Largest arity for [`chow_vector`].
pub const MAX_CHOW_INPUTS: usize = 20;
/// Largest arity for exact LTF recognition.
pub const MAX_LTF_INPUTS: usize = 4;
/// Largest arity and bottom fan-in for [`depth2_signature`].
pub const MAX_SIGNATURE_INPUTS: usize = 16;

/// `2^n` times the degree-0 and degree-1 Fourier coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChowVector {
    pub n: usize,
    /// `[2^n f^(empty), 2^n f^(1), ..., 2^n f^(n)]`.
    pub scaled: Vec<i64>,
}

/// Rows of `table` with `x_j = 1` that evaluate to 1.
fn ones_with(table: &TruthTable, j: usize) -> u64 {
    table
        .words()
        .iter()
        .enumerate()
        .map(|(w, &bits)| (bits & input_word(j, w)).count_ones() as u64)
        .sum()
}

pub fn chow_vector(table: &TruthTable) -> Result<ChowVector> {
    let n = table.num_inputs();
    if n > MAX_CHOW_INPUTS {
        return Err(Error::capacity("Chow inputs", n as u64, MAX_CHOW_INPUTS as u64));
    }
    let ones = table.count_ones() as i64;
    let mut scaled = Vec::with_capacity(n + 1);
    scaled.push((1i64 << n) - 2 * ones);
    for j in 0..n {
        let on = ones_with(table, j) as i64;
        scaled.push(2 * (on - (ones - on)));
    }
    Ok(ChowVector { n, scaled })
}

/// Multipliers proving that no `(w, t)` realizes a table: nonnegative
/// `y_r` per row such that `sum_r y_r s_r (x_r, -1) = 0` while
/// `sum_{r : f(r) = 0} y_r > 0`, where `s_r = +1` on 1-rows and `-1` on
/// 0-rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfeasibilityCertificate {
    /// `(row, y_row)` for the rows with a nonzero multiplier.
    pub multipliers: Vec<(u64, BigRational)>,
}

impl InfeasibilityCertificate {
    /// Checks the Farkas conditions against `table`.
    pub fn verify(&self, table: &TruthTable) -> bool {
        let n = table.num_inputs();
        let mut combo = vec![BigRational::zero(); n + 1];
        let mut rhs = BigRational::zero();
        for (row, y) in &self.multipliers {
            if y.is_negative() || *row >= table.rows() {
                return false;
            }
            let (coefs, b) = constraint(table, *row);
            for (c, a) in combo.iter_mut().zip(coefs) {
                *c += y * BigRational::from_integer(a);
            }
            rhs += y * BigRational::from_integer(b);
        }
        combo.iter().all(Zero::is_zero) && rhs.is_positive()
    }
}

/// Answer of [`is_ltf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtfDecision {
    Realized(LinearThresholdGate),
    NotLtf(InfeasibilityCertificate),
}

impl LtfDecision {
    pub fn gate(&self) -> Option<&LinearThresholdGate> {
        match self {
            LtfDecision::Realized(g) => Some(g),
            LtfDecision::NotLtf(_) => None,
        }
    }
}

/// Inequality of row `row` over `(w_1, ..., w_n, t)`: `sum w_i x_i - t >= 0`
/// for 1-rows and `-sum w_i x_i + t >= 1` for 0-rows.
fn constraint(table: &TruthTable, row: u64) -> (Vec<BigInt>, BigInt) {
    let n = table.num_inputs();
    let sign = if table.get(row) { 1 } else { -1 };
    let mut coefs: Vec<BigInt> = (0..n).map(|j| BigInt::from(sign * ((row >> j) & 1) as i64)).collect();
    coefs.push(BigInt::from(-sign));
    let rhs = BigInt::from(if sign > 0 { 0 } else { 1 });
    (coefs, rhs)
}

/// Decides whether `table` is a linear threshold function by exact
/// Fourier-Motzkin elimination over the `2^n` row inequalities. Returns an
/// integer gate (verified against the table) or a Farkas certificate.
pub fn is_ltf(table: &TruthTable) -> Result<LtfDecision> {
    let n = table.num_inputs();
    if n > MAX_LTF_INPUTS {
        return Err(Error::capacity("LTF test inputs", n as u64, MAX_LTF_INPUTS as u64));
    }
    let (a, b): (Vec<_>, Vec<_>) = (0..table.rows()).map(|r| constraint(table, r)).unzip();
    match solve(&a, &b) {
        Feasibility::Point(p) => {
            let ints = to_integers(&p);
            let gate = LinearThresholdGate::new(
                (0..n).map(|j| (Wire::Input(j), ints[j].clone())),
                ints[n].clone(),
            )?;
            let check = TruthTable::from_fn(n, |row| {
                gate.eval_with(|w| match w {
                    Wire::Input(j) => (row >> j) & 1 == 1,
                    Wire::Gate(_) => unreachable!(),
                })
            })?;
            if &check != table {
                return Err(Error::structural("feasibility witness failed verification"));
            }
            Ok(LtfDecision::Realized(gate))
        }
        Feasibility::Infeasible(y) => Ok(LtfDecision::NotLtf(InfeasibilityCertificate {
            multipliers: y
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (r as u64, v))
                .collect(),
        })),
    }
}

/// Whether the function is monotone or antitone in every variable, a
/// necessary condition for being an LTF.
pub fn is_unate(table: &TruthTable) -> bool {
    let rows = table.rows();
    (0..table.num_inputs()).all(|j| {
        let (mut up, mut down) = (false, false);
        for r in (0..rows).filter(|r| (r >> j) & 1 == 0) {
            match (table.get(r), table.get(r | 1 << j)) {
                (false, true) => up = true,
                (true, false) => down = true,
                _ => {}
            }
        }
        !(up && down)
    })
}

fn check_ltf_inputs(n: usize) -> Result<()> {
    if n > MAX_LTF_INPUTS {
        return Err(Error::capacity("LTF enumeration inputs", n as u64, MAX_LTF_INPUTS as u64));
    }
    Ok(())
}

/// Every LTF on `n <= 4` inputs with a witness gate, in increasing order of
/// the table's row bits (as an integer). Non-unate tables are skipped
/// before the feasibility test.
pub fn enumerate_ltfs(n: usize) -> Result<Vec<(TruthTable, LinearThresholdGate)>> {
    check_ltf_inputs(n)?;
    enumerate_in_order(n, (0..1u64 << (1u64 << n)).collect())
}

/// [`enumerate_ltfs`] visiting the candidate tables in the given order;
/// the result keeps that order.
pub fn enumerate_in_order(n: usize, codes: Vec<u64>) -> Result<Vec<(TruthTable, LinearThresholdGate)>> {
    check_ltf_inputs(n)?;
    let found = par::map(codes.len(), || (), |_, i| -> Result<Option<(TruthTable, LinearThresholdGate)>> {
        let table = TruthTable::from_words(n, vec![codes[i]])?;
        if !is_unate(&table) {
            return Ok(None);
        }
        Ok(is_ltf(&table)?.gate().cloned().map(|g| (table, g)))
    });
    found.into_iter().filter_map(Result::transpose).collect()
}

/// `<hex-table> <t> <w_1> ... <w_n>`.
pub fn ltf_line(table: &TruthTable, gate: &LinearThresholdGate) -> String {
    let mut weights = vec![BigInt::zero(); table.num_inputs()];
    for (w, weight) in gate.terms() {
        if let Wire::Input(j) = w {
            weights[*j] = weight.clone();
        }
    }
    let mut line = format!("{} {}", table.to_hex(), gate.threshold());
    for w in weights {
        line.push(' ');
        line.push_str(&w.to_string());
    }
    line
}

/// Number of distinct Chow vectors among `tables`.
pub fn distinct_chow_vectors(tables: &[TruthTable]) -> Result<usize> {
    let mut seen = HashSet::new();
    for t in tables {
        seen.insert(chow_vector(t)?);
    }
    Ok(seen.len())
}

/// `(|S(g)|, Sigma(g))` for a top gate `g` over `s` bottom functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Depth2Signature {
    pub s: usize,
    /// Number of points `y` of the image of `x -> (f_1(x), ..., f_s(x))` with `g(y) = 1`.
    pub size: u64,
    /// `sigma[i]` = number of those points with `y_i = 1`.
    pub sigma: Vec<u64>,
}

fn eval_primary(g: &LinearThresholdGate, row: u64) -> bool {
    g.eval_with(|w| match w {
        Wire::Input(j) => (row >> j) & 1 == 1,
        Wire::Gate(_) => unreachable!(),
    })
}

/// Image of `x -> (f_1(x), ..., f_s(x))` over `{0,1}^n`, as a bitmap over
/// `y in {0,1}^s` (bit `i` of `y` is `f_i`).
pub fn bottom_image(bottoms: &[LinearThresholdGate], n: usize) -> Result<Vec<bool>> {
    let s = bottoms.len();
    if n > MAX_SIGNATURE_INPUTS || s > MAX_SIGNATURE_INPUTS {
        return Err(Error::capacity(
            "signature size",
            n.max(s) as u64,
            MAX_SIGNATURE_INPUTS as u64,
        ));
    }
    for b in bottoms {
        b.check_primary(n)?;
    }
    let mut image = vec![false; 1 << s];
    for x in 0..1u64 << n {
        let y = bottoms
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, b)| acc | (usize::from(eval_primary(b, x)) << i));
        image[y] = true;
    }
    Ok(image)
}

/// Signature of `top(f_1, ..., f_s)`, where `top` reads bottom `i` as `x_i`.
pub fn depth2_signature(
    top: &LinearThresholdGate,
    bottoms: &[LinearThresholdGate],
    n: usize,
) -> Result<Depth2Signature> {
    let s = bottoms.len();
    top.check_primary(s)?;
    let image = bottom_image(bottoms, n)?;
    let mut size = 0;
    let mut sigma = vec![0u64; s];
    for (y, _) in image.iter().enumerate().filter(|(_, &hit)| hit) {
        if eval_primary(top, y as u64) {
            size += 1;
            for (i, c) in sigma.iter_mut().enumerate() {
                *c += ((y >> i) & 1) as u64;
            }
        }
    }
    Ok(Depth2Signature { s, size, sigma })
}
