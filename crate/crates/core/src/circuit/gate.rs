use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// A reference to a signal: a primary input `x_j` or the output of an
/// earlier gate (by position in the circuit's gate list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::Input(j) => write!(f, "x{j}"),
            Wire::Gate(g) => write!(f, "#{g}"),
        }
    }
}

/// Sum bound under which every partial sum of a gate fits in an `i64`.
const SMALL_LIMIT: i64 = i64::MAX / 4;

/// An integer-weight threshold gate `[sum_i w_i * v_i >= t]`.
///
/// Zero weights are dropped at construction and every wire appears at most
/// once. When all weights and the threshold are small enough, an `i64`
/// copy is kept so evaluation never touches big integers.
#[derive(Debug, Clone)]
pub struct LinearThresholdGate {
    terms: Vec<(Wire, BigInt)>,
    threshold: BigInt,
    small: Option<SmallForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SmallForm {
    pub weights: Vec<i64>,
    pub threshold: i64,
}

impl PartialEq for LinearThresholdGate {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.threshold == other.threshold
    }
}

impl Eq for LinearThresholdGate {}

impl LinearThresholdGate {
    /// Builds a gate; a repeated wire is a structural error.
    pub fn new<W: Into<BigInt>>(
        terms: impl IntoIterator<Item = (Wire, W)>,
        threshold: impl Into<BigInt>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (wire, weight) in terms {
            if !seen.insert(wire) {
                return Err(Error::structural(format!("duplicate input reference {wire}")));
            }
            let weight = weight.into();
            if !weight.is_zero() {
                kept.push((wire, weight));
            }
        }
        Ok(Self::from_parts(kept, threshold.into()))
    }

    /// Builds a gate, summing the weights of repeated wires.
    pub fn merged<W: Into<BigInt>>(
        terms: impl IntoIterator<Item = (Wire, W)>,
        threshold: impl Into<BigInt>,
    ) -> Self {
        let mut order: Vec<Wire> = Vec::new();
        let mut acc: std::collections::HashMap<Wire, BigInt> = Default::default();
        for (wire, weight) in terms {
            let weight = weight.into();
            match acc.get_mut(&wire) {
                Some(w) => *w += weight,
                None => {
                    order.push(wire);
                    acc.insert(wire, weight);
                }
            }
        }
        let kept = order
            .into_iter()
            .filter_map(|w| {
                let weight = acc.remove(&w).unwrap();
                (!weight.is_zero()).then_some((w, weight))
            })
            .collect();
        Self::from_parts(kept, threshold.into())
    }

    /// Threshold-at-least-`k` over unit weights.
    pub fn at_least(inputs: impl IntoIterator<Item = Wire>, k: i64) -> Result<Self> {
        Self::new(inputs.into_iter().map(|w| (w, 1)), k)
    }

    /// Majority: unit weights, threshold `ceil(fan_in / 2)`.
    pub fn majority(inputs: impl IntoIterator<Item = Wire>) -> Result<Self> {
        let inputs: Vec<Wire> = inputs.into_iter().collect();
        let t = inputs.len().div_ceil(2) as i64;
        Self::at_least(inputs, t)
    }

    fn from_parts(terms: Vec<(Wire, BigInt)>, threshold: BigInt) -> Self {
        let small = small_form(&terms, &threshold);
        LinearThresholdGate {
            terms,
            threshold,
            small,
        }
    }

    pub fn terms(&self) -> &[(Wire, BigInt)] {
        &self.terms
    }

    pub fn threshold(&self) -> &BigInt {
        &self.threshold
    }

    pub fn fan_in(&self) -> usize {
        self.terms.len()
    }

    pub fn wires(&self) -> impl Iterator<Item = Wire> + '_ {
        self.terms.iter().map(|(w, _)| *w)
    }

    pub(crate) fn small(&self) -> Option<&SmallForm> {
        self.small.as_ref()
    }

    /// Weights and threshold as `i64`, when every partial sum fits.
    pub fn small_weights(&self) -> Option<(&[i64], i64)> {
        self.small.as_ref().map(|s| (s.weights.as_slice(), s.threshold))
    }

    /// Largest absolute weight (zero for an empty gate).
    pub fn max_abs_weight(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, w)| w.abs())
            .max()
            .unwrap_or_default()
    }

    /// True when this is exactly a majority gate.
    pub fn is_majority(&self) -> bool {
        let f = self.terms.len();
        self.terms.iter().all(|(_, w)| *w == BigInt::from(1))
            && self.threshold == BigInt::from(f.div_ceil(2))
    }

    /// Evaluates with `value` supplying every input signal.
    pub fn eval_with(&self, mut value: impl FnMut(Wire) -> bool) -> bool {
        if let Some(s) = &self.small {
            let sum: i64 = self
                .terms
                .iter()
                .zip(&s.weights)
                .filter(|((w, _), _)| value(*w))
                .map(|(_, &wt)| wt)
                .sum();
            return sum >= s.threshold;
        }
        let mut sum = BigInt::zero();
        for (w, wt) in &self.terms {
            if value(*w) {
                sum += wt;
            }
        }
        sum >= self.threshold
    }

    /// Evaluates a gate over primary inputs only.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        self.check_primary(assignment.len())?;
        Ok(self.eval_with(|w| match w {
            Wire::Input(j) => assignment[j],
            Wire::Gate(_) => unreachable!(),
        }))
    }

    /// Fails unless every input is a primary input below `n`.
    pub fn check_primary(&self, n: usize) -> Result<()> {
        for (w, _) in &self.terms {
            match *w {
                Wire::Input(j) if j < n => {}
                Wire::Input(j) => {
                    return Err(Error::structural(format!(
                        "input x{j} out of range for {n} inputs"
                    )))
                }
                Wire::Gate(g) => {
                    return Err(Error::structural(format!(
                        "gate reference #{g} where only primary inputs are defined"
                    )))
                }
            }
        }
        Ok(())
    }

    /// The gate obtained by feeding `wire` through a negation: the term
    /// `a * v` becomes `a * (1 - v)`, so the weight flips sign and the
    /// threshold drops by `a`.
    pub fn negate_input(&self, wire: Wire) -> Result<Self> {
        let Some(pos) = self.terms.iter().position(|(w, _)| *w == wire) else {
            return Err(Error::structural(format!("{wire} is not an input of this gate")));
        };
        let a = self.terms[pos].1.clone();
        let mut terms = self.terms.clone();
        terms[pos].1 = -a.clone();
        Ok(Self::from_parts(terms, &self.threshold - a))
    }

    /// Renames inputs through `map`; terms mapped to the same wire merge.
    pub fn remap(&self, mut map: impl FnMut(Wire) -> Wire) -> Self {
        Self::merged(
            self.terms.iter().map(|(w, wt)| (map(*w), wt.clone())),
            self.threshold.clone(),
        )
    }
}

fn small_form(terms: &[(Wire, BigInt)], threshold: &BigInt) -> Option<SmallForm> {
    let mut total: i64 = threshold.to_i64()?.checked_abs()?;
    let mut weights = Vec::with_capacity(terms.len());
    for (_, w) in terms {
        let w = w.to_i64()?;
        total = total.checked_add(w.checked_abs()?)?;
        if total > SMALL_LIMIT {
            return None;
        }
        weights.push(w);
    }
    Some(SmallForm {
        weights,
        threshold: threshold.to_i64()?,
    })
}

/// A modular counting gate: outputs 1 iff `sum_i w_i * v_i mod p` lies in
/// the accept set. Weights are stored reduced into `1..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModGate {
    modulus: u32,
    accept: Vec<u32>,
    terms: Vec<(Wire, u32)>,
}

impl ModGate {
    pub fn new(
        modulus: u32,
        accept: impl IntoIterator<Item = u32>,
        terms: impl IntoIterator<Item = (Wire, i64)>,
    ) -> Result<Self> {
        if !(2..=3).contains(&modulus) {
            return Err(Error::invalid(format!("modulus {modulus} (only MOD2 and MOD3 exist)")));
        }
        let mut accept: Vec<u32> = accept.into_iter().collect();
        if let Some(r) = accept.iter().find(|&&r| r >= modulus) {
            return Err(Error::invalid(format!("accept residue {r} not below {modulus}")));
        }
        accept.sort_unstable();
        accept.dedup();
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for (wire, w) in terms {
            if !seen.insert(wire) {
                return Err(Error::structural(format!("duplicate input reference {wire}")));
            }
            let r = w.rem_euclid(modulus as i64) as u32;
            if r != 0 {
                kept.push((wire, r));
            }
        }
        Ok(ModGate {
            modulus,
            accept,
            terms: kept,
        })
    }

    /// Parity gate with unit weights accepting odd sums.
    pub fn parity(inputs: impl IntoIterator<Item = Wire>) -> Result<Self> {
        Self::new(2, [1], inputs.into_iter().map(|w| (w, 1)))
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn accept(&self) -> &[u32] {
        &self.accept
    }

    pub fn terms(&self) -> &[(Wire, u32)] {
        &self.terms
    }

    pub fn accepts(&self, residue: u32) -> bool {
        self.accept.contains(&(residue % self.modulus))
    }

    pub fn eval_with(&self, mut value: impl FnMut(Wire) -> bool) -> bool {
        let sum: u64 = self
            .terms
            .iter()
            .filter(|(w, _)| value(*w))
            .map(|&(_, r)| r as u64)
            .sum();
        self.accepts((sum % self.modulus as u64) as u32)
    }
}
