use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::circuit::{LinearThresholdGate, TruthTable, Wire};
use crate::restrictions::Restriction;
use crate::{Error, Result};

/// Largest number of free gate inputs handled by exhaustive classification.
pub const MAX_FREE_INPUTS: usize = 24;

/// Whether a restricted gate is constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstantOutcome {
    ForcedZero,
    ForcedOne,
    NotForced,
}

impl ConstantOutcome {
    pub fn is_forced(self) -> bool {
        self != ConstantOutcome::NotForced
    }
}

/// Classification of a restricted gate by the free inputs it depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForcingOutcome {
    ForcedZero,
    ForcedOne,
    /// Equals `x_index` (`positive`) or its negation.
    SingleInput { index: usize, positive: bool },
    ManyInputs,
}

impl ForcingOutcome {
    pub fn is_forced(self) -> bool {
        matches!(self, ForcingOutcome::ForcedZero | ForcingOutcome::ForcedOne)
    }
}

impl From<bool> for ForcingOutcome {
    fn from(b: bool) -> Self {
        if b {
            ForcingOutcome::ForcedOne
        } else {
            ForcingOutcome::ForcedZero
        }
    }
}

fn interval_outcome<T: PartialOrd>(min: T, max: T, t: T) -> ConstantOutcome {
    if min >= t {
        ConstantOutcome::ForcedOne
    } else if max < t {
        ConstantOutcome::ForcedZero
    } else {
        ConstantOutcome::NotForced
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Every weight equals `weight`: sums reduce to popcounts.
    Uniform {
        mask: Vec<u64>,
        weight: i64,
        threshold: i64,
    },
    Small {
        inputs: Vec<usize>,
        weights: Vec<i64>,
        threshold: i64,
    },
    Big {
        inputs: Vec<usize>,
        weights: Vec<BigInt>,
        threshold: BigInt,
    },
}

/// A threshold gate over primary inputs, preprocessed for repeated forcing
/// tests against restrictions on `n` coordinates.
#[derive(Debug, Clone)]
pub struct CompiledGate {
    n: usize,
    repr: Repr,
}

impl CompiledGate {
    pub fn new(gate: &LinearThresholdGate, n: usize) -> Result<Self> {
        gate.check_primary(n)?;
        let inputs: Vec<usize> = gate
            .wires()
            .map(|w| match w {
                Wire::Input(j) => j,
                Wire::Gate(_) => unreachable!(),
            })
            .collect();
        let repr = match gate.small_weights() {
            Some((ws, t)) if !ws.is_empty() && ws.iter().all(|&w| w == ws[0]) => {
                let mut mask = vec![0u64; n.div_ceil(64)];
                for &j in &inputs {
                    mask[j / 64] |= 1 << (j % 64);
                }
                Repr::Uniform {
                    mask,
                    weight: ws[0],
                    threshold: t,
                }
            }
            Some((ws, t)) => Repr::Small {
                inputs,
                weights: ws.to_vec(),
                threshold: t,
            },
            None => Repr::Big {
                inputs,
                weights: gate.terms().iter().map(|(_, w)| w.clone()).collect(),
                threshold: gate.threshold().clone(),
            },
        };
        Ok(CompiledGate { n, repr })
    }

    fn check(&self, rho: &Restriction) -> Result<()> {
        if rho.n() != self.n {
            return Err(Error::Dimension {
                what: "restriction length",
                expected: self.n,
                found: rho.n(),
            });
        }
        Ok(())
    }

    /// Exact constant-forcing test: with `s` the fixed contribution, the
    /// gate is forced to 1 iff `s + (negative free weights) >= t`, and to 0
    /// iff `s + (positive free weights) < t`.
    pub fn forced_constant(&self, rho: &Restriction) -> Result<ConstantOutcome> {
        self.check(rho)?;
        Ok(match &self.repr {
            Repr::Uniform {
                mask,
                weight,
                threshold,
            } => {
                let (ones, free) = masked_counts(mask, rho);
                let s = weight * ones;
                let spread = weight * free;
                interval_outcome(s + spread.min(0), s + spread.max(0), *threshold)
            }
            Repr::Small {
                inputs,
                weights,
                threshold,
            } => {
                let (mut s, mut lo, mut hi) = (0i64, 0i64, 0i64);
                for (&j, &w) in inputs.iter().zip(weights) {
                    match rho.value(j) {
                        Some(true) => s += w,
                        Some(false) => {}
                        None if w < 0 => lo += w,
                        None => hi += w,
                    }
                }
                interval_outcome(s + lo, s + hi, *threshold)
            }
            Repr::Big {
                inputs,
                weights,
                threshold,
            } => {
                let (mut s, mut lo, mut hi) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
                for (&j, w) in inputs.iter().zip(weights) {
                    match rho.value(j) {
                        Some(true) => s += w,
                        Some(false) => {}
                        None if w.is_negative() => lo += w,
                        None => hi += w,
                    }
                }
                interval_outcome(&s + lo, s + hi, threshold.clone())
            }
        })
    }

    /// Free inputs of the gate (gate inputs that are stars), increasing.
    pub fn free_inputs(&self, rho: &Restriction) -> Vec<usize> {
        let mut free: Vec<usize> = match &self.repr {
            Repr::Uniform { mask, .. } => (0..self.n)
                .filter(|&j| mask[j / 64] >> (j % 64) & 1 == 1 && rho.is_star(j))
                .collect(),
            Repr::Small { inputs, .. } | Repr::Big { inputs, .. } => {
                inputs.iter().copied().filter(|&j| rho.is_star(j)).collect()
            }
        };
        free.sort_unstable();
        free
    }

    /// Number of free gate inputs.
    pub fn free_count(&self, rho: &Restriction) -> usize {
        match &self.repr {
            Repr::Uniform { mask, .. } => masked_counts(mask, rho).1 as usize,
            Repr::Small { inputs, .. } | Repr::Big { inputs, .. } => {
                inputs.iter().filter(|&&j| rho.is_star(j)).count()
            }
        }
    }

    /// Restricted function over the free gate inputs (in increasing order).
    pub fn restricted_table(&self, rho: &Restriction) -> Result<(Vec<usize>, TruthTable)> {
        self.check(rho)?;
        let free = self.free_inputs(rho);
        if free.len() > MAX_FREE_INPUTS {
            return Err(Error::capacity(
                "free gate inputs",
                free.len() as u64,
                MAX_FREE_INPUTS as u64,
            ));
        }
        let table = match &self.repr {
            Repr::Uniform {
                mask,
                weight,
                threshold,
            } => {
                let s = weight * masked_counts(mask, rho).0;
                TruthTable::from_fn(free.len(), |row| s + weight * row.count_ones() as i64 >= *threshold)?
            }
            Repr::Small {
                inputs,
                weights,
                threshold,
            } => {
                let (s, fw) = split_weights(inputs, weights, rho, 0i64);
                gray_table(fw.len(), s, &fw, threshold)?
            }
            Repr::Big {
                inputs,
                weights,
                threshold,
            } => {
                let (s, fw) = split_weights(inputs, weights, rho, BigInt::zero());
                gray_table(fw.len(), s, &fw, threshold)?
            }
        };
        Ok((free, table))
    }

    /// Classifies the restricted gate as constant, a single literal, or
    /// dependent on several free inputs.
    pub fn forced_single_input(&self, rho: &Restriction) -> Result<ForcingOutcome> {
        match self.forced_constant(rho)? {
            ConstantOutcome::ForcedOne => return Ok(ForcingOutcome::ForcedOne),
            ConstantOutcome::ForcedZero => return Ok(ForcingOutcome::ForcedZero),
            ConstantOutcome::NotForced => {}
        }
        if let Repr::Uniform { weight, mask, .. } = &self.repr {
            // a nonconstant symmetric function depends on all its inputs
            return Ok(match masked_counts(mask, rho).1 {
                1 => ForcingOutcome::SingleInput {
                    index: self.free_inputs(rho)[0],
                    positive: *weight > 0,
                },
                _ => ForcingOutcome::ManyInputs,
            });
        }
        let (free, table) = self.restricted_table(rho)?;
        Ok(classify_table(&free, &table))
    }
}

/// Classifies a table over the variables `free` (table input `i` is `free[i]`).
pub(crate) fn classify_table(free: &[usize], table: &TruthTable) -> ForcingOutcome {
    if let Some(c) = table.constant_value() {
        return c.into();
    }
    let support = table.support();
    if support.len() == 1 {
        let i = support[0];
        return ForcingOutcome::SingleInput {
            index: free[i],
            positive: table.get(1 << i),
        };
    }
    ForcingOutcome::ManyInputs
}

fn masked_counts(mask: &[u64], rho: &Restriction) -> (i64, i64) {
    let mut ones = 0;
    let mut free = 0;
    for ((m, o), s) in mask.iter().zip(rho.ones_words()).zip(rho.star_words()) {
        ones += (m & o).count_ones() as i64;
        free += (m & s).count_ones() as i64;
    }
    (ones, free)
}

fn split_weights<T>(inputs: &[usize], weights: &[T], rho: &Restriction, zero: T) -> (T, Vec<T>)
where
    T: Clone + std::ops::AddAssign,
{
    let mut pairs: Vec<(usize, T)> = Vec::new();
    let mut s = zero;
    for (&j, w) in inputs.iter().zip(weights) {
        match rho.value(j) {
            Some(true) => s += w.clone(),
            Some(false) => {}
            None => pairs.push((j, w.clone())),
        }
    }
    pairs.sort_by_key(|(j, _)| *j);
    (s, pairs.into_iter().map(|(_, w)| w).collect())
}

/// Tabulates `[s + sum_{i in row} fw[i] >= t]`, visiting rows in Gray-code
/// order so each step adds or removes a single weight.
fn gray_table<T>(f: usize, mut sum: T, fw: &[T], t: &T) -> Result<TruthTable>
where
    T: Clone + PartialOrd + std::ops::AddAssign + std::ops::SubAssign,
{
    let mut table = TruthTable::zeros(f)?;
    let mut row = 0u64;
    table.set(0, sum >= *t);
    for i in 1..1u64 << f {
        let b = i.trailing_zeros() as usize;
        if row >> b & 1 == 1 {
            sum -= fw[b].clone();
        } else {
            sum += fw[b].clone();
        }
        row ^= 1 << b;
        if sum >= *t {
            table.set(row, true);
        }
    }
    Ok(table)
}

/// [`CompiledGate::forced_constant`] for a single gate over primary inputs.
pub fn forced_constant(gate: &LinearThresholdGate, rho: &Restriction) -> Result<ConstantOutcome> {
    CompiledGate::new(gate, rho.n())?.forced_constant(rho)
}

/// [`CompiledGate::forced_single_input`] for a single gate over primary inputs.
pub fn forced_single_input(
    gate: &LinearThresholdGate,
    rho: &Restriction,
) -> Result<ForcingOutcome> {
    CompiledGate::new(gate, rho.n())?.forced_single_input(rho)
}
