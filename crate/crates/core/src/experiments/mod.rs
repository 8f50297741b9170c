//! Seeded Monte Carlo and exact estimators: forcing probabilities under
//! random restrictions, Littlewood-Offord probes, agreement fractions, and
//! restriction-survival statistics.
//!
//! Trial `i` of an experiment with seed `s` draws from its own generator
//! ([`trial_rng`](crate::restrictions::trial_rng)`(s, i)`), so results do
//! not depend on the number of workers.

mod functions;
mod rows;
mod survival;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::circuit::{LinearThresholdGate, Wire, MAX_TABLE_INPUTS};
use crate::constructions::ratio_f64;
use crate::par;
use crate::restrictions::{sample_restriction, trial_rng, CompiledGate, ForcingOutcome, Partition};
use crate::{Circuit, Error, Result};

pub use functions::{row_bits, BoolFunction, FnFunction};
pub use rows::{read_csv, write_csv, EstimateRow};
pub use survival::{restriction_survival, write_survival_csv, SurvivalSummary};

/// Default number of Monte Carlo trials.
pub const DEFAULT_TRIALS: u64 = 100_000;

/// Largest arity for exact approximate-majority margins.
pub const MAX_MARGIN_INPUTS: usize = 20;

/// How a probability is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact enumeration (subject to a size limit).
    Exact,
    /// Independent seeded trials.
    Trials { trials: u64, seed: u64 },
}

/// Majority over `x_0..x_{n-1}`.
pub fn majority_gate(n: usize) -> Result<LinearThresholdGate> {
    LinearThresholdGate::majority((0..n).map(Wire::Input))
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    Ok(())
}

/// Fraction of random restrictions across `partition` that leave `gate`
/// not forced to a constant.
pub fn estimate_not_forced(
    gate: &LinearThresholdGate,
    partition: &Partition,
    trials: u64,
    seed: u64,
) -> Result<EstimateRow> {
    check_trials(trials)?;
    let compiled = CompiledGate::new(gate, partition.n())?;
    let hits = par::count(trials, || (), |_, i| {
        let rho = sample_restriction(partition, seed, i);
        !compiled.forced_constant(&rho).unwrap().is_forced()
    });
    Ok(EstimateRow::from_count("not_forced", partition.n(), partition.len(), trials, hits, seed))
}

/// Fraction of random restrictions under which `gate` still depends on two
/// or more free inputs.
pub fn estimate_not_single_input(
    gate: &LinearThresholdGate,
    partition: &Partition,
    trials: u64,
    seed: u64,
) -> Result<EstimateRow> {
    check_trials(trials)?;
    let compiled = CompiledGate::new(gate, partition.n())?;
    let outcomes = par::map(trials as usize, || (), |_, i| {
        let rho = sample_restriction(partition, seed, i as u64);
        compiled.forced_single_input(&rho)
    });
    let mut hits = 0;
    for o in outcomes {
        if o? == ForcingOutcome::ManyInputs {
            hits += 1;
        }
    }
    Ok(EstimateRow::from_count(
        "not_single_input",
        partition.n(),
        partition.len(),
        trials,
        hits,
        seed,
    ))
}

/// `Pr[lo <= sum_i a_i x_i <= hi]` for uniform `x in {0,1}^n`.
///
/// Exact mode enumerates all inputs for `n <= 28`, or sums binomial
/// coefficients when all weights are equal.
pub fn lo_probe(weights: &[i64], lo: i64, hi: i64, mode: Mode) -> Result<EstimateRow> {
    if lo > hi {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let n = weights.len();
    let inside = |s: i64| lo <= s && s <= hi;
    match mode {
        Mode::Exact => {
            let value = if weights.iter().all(|&w| w == weights[0]) || n == 0 {
                let w = weights.first().copied().unwrap_or(0) as i128;
                let mut hits = BigUint::zero();
                let mut binom = BigUint::one();
                for k in 0..=n {
                    let s = w * k as i128;
                    if lo as i128 <= s && s <= hi as i128 {
                        hits += &binom;
                    }
                    binom = binom * BigUint::from(n - k) / BigUint::from(k + 1);
                }
                ratio_f64(&hits, &(BigUint::one() << n))
            } else if n <= MAX_TABLE_INPUTS {
                let hits = gray_count(weights, inside);
                hits as f64 / (1u64 << n) as f64
            } else {
                return Err(Error::capacity("exact probe length", n as u64, MAX_TABLE_INPUTS as u64));
            };
            Ok(EstimateRow::exact("lo_probe", n, 0, value))
        }
        Mode::Trials { trials, seed } => {
            check_trials(trials)?;
            let hits = par::count(trials, || (), |_, i| {
                let mut rng = trial_rng(seed, i);
                let mut sum = 0i64;
                for chunk in weights.chunks(64) {
                    let mut bits = rng.next_u64();
                    if chunk.len() < 64 {
                        bits &= (1u64 << chunk.len()) - 1;
                    }
                    while bits != 0 {
                        sum += chunk[bits.trailing_zeros() as usize];
                        bits &= bits - 1;
                    }
                }
                inside(sum)
            });
            Ok(EstimateRow::from_count("lo_probe", n, 0, trials, hits, seed))
        }
    }
}

/// Counts `x` with `inside(sum a_i x_i)`, walking the cube in Gray-code
/// order in parallel over the high bits.
fn gray_count(weights: &[i64], inside: impl Fn(i64) -> bool + Sync) -> u64 {
    let n = weights.len();
    let low = n.min(16);
    let high = n - low;
    let (lw, hw) = weights.split_at(low);
    par::sum(1u64 << high, || (), |_, h| {
        let mut sum: i64 = hw
            .iter()
            .enumerate()
            .filter(|(i, _)| (h >> i) & 1 == 1)
            .map(|(_, w)| w)
            .sum();
        let mut row = 0u64;
        let mut hits = u64::from(inside(sum));
        for i in 1..1u64 << low {
            let b = i.trailing_zeros() as usize;
            if row >> b & 1 == 1 {
                sum -= lw[b];
            } else {
                sum += lw[b];
            }
            row ^= 1 << b;
            hits += u64::from(inside(sum));
        }
        hits
    })
}

/// Fraction of inputs on which `f` and `g` agree.
pub fn agreement(f: &dyn BoolFunction, g: &dyn BoolFunction, mode: Mode) -> Result<EstimateRow> {
    let n = f.arity();
    if g.arity() != n {
        return Err(Error::Dimension {
            what: "function arity",
            expected: n,
            found: g.arity(),
        });
    }
    match mode {
        Mode::Exact => {
            let agree = f.truth_table()?.agreement(&g.truth_table()?)?;
            Ok(EstimateRow::exact("agreement", n, 0, agree as f64 / (1u64 << n) as f64))
        }
        Mode::Trials { trials, seed } => {
            check_trials(trials)?;
            let hits = par::count(trials, || (), |_, i| {
                let x = random_input(n, &mut trial_rng(seed, i));
                f.eval(&x) == g.eval(&x)
            });
            Ok(EstimateRow::from_count("agreement", n, 0, trials, hits, seed))
        }
    }
}

fn random_input(n: usize, rng: &mut impl RngCore) -> Vec<bool> {
    let mut x = Vec::with_capacity(n);
    while x.len() < n {
        let w = rng.next_u64();
        x.extend((0..64.min(n - x.len())).map(|j| (w >> j) & 1 == 1));
    }
    x
}

/// `min_x #{i : C_i(x) = f(x)} / |C|`, over all inputs (exact mode,
/// `n <= 20`) or over sampled inputs. The collection is an
/// `eps`-approximate majority for `f` iff the result is at least `1/2 + eps`.
pub fn approx_majority_margin(
    circuits: &[Circuit],
    f: &dyn BoolFunction,
    mode: Mode,
) -> Result<f64> {
    let n = f.arity();
    if circuits.is_empty() {
        return Err(Error::invalid("empty circuit collection"));
    }
    if let Some(c) = circuits.iter().find(|c| c.num_inputs() != n) {
        return Err(Error::Dimension {
            what: "circuit inputs",
            expected: n,
            found: c.num_inputs(),
        });
    }
    let min_agree = match mode {
        Mode::Exact => {
            if n > MAX_MARGIN_INPUTS {
                return Err(Error::capacity("margin inputs", n as u64, MAX_MARGIN_INPUTS as u64));
            }
            let target = f.truth_table()?;
            let tables = circuits
                .iter()
                .map(|c| c.truth_table())
                .collect::<Result<Vec<_>>>()?;
            let mut counts = vec![0u32; 1 << n];
            for t in &tables {
                for (w, (a, b)) in t.words().iter().zip(target.words()).enumerate() {
                    let mut same = !(a ^ b);
                    while same != 0 {
                        let row = (w << 6) | same.trailing_zeros() as usize;
                        if row < counts.len() {
                            counts[row] += 1;
                        }
                        same &= same - 1;
                    }
                }
            }
            counts.into_iter().min().unwrap() as usize
        }
        Mode::Trials { trials, seed } => {
            check_trials(trials)?;
            par::map(trials as usize, || (), |_, i| {
                let x = random_input(n, &mut trial_rng(seed, i as u64));
                let want = f.eval(&x);
                circuits.iter().filter(|c| c.eval(&x).unwrap() == want).count()
            })
            .into_iter()
            .min()
            .unwrap()
        }
    };
    Ok(min_agree as f64 / circuits.len() as f64)
}

/// Upper envelope `estimate <= constant * scale`, with the constant fitted
/// at one reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub constant: f64,
}

impl Envelope {
    /// Fits `constant = estimate / scale` at the reference point.
    pub fn fit(scale: f64, estimate: f64) -> Self {
        Envelope {
            constant: estimate / scale,
        }
    }

    /// `estimate <= tolerance * constant * scale`.
    pub fn bounds_above(&self, scale: f64, estimate: f64, tolerance: f64) -> bool {
        estimate <= tolerance * self.constant * scale
    }

    /// `estimate >= constant * scale / tolerance`.
    pub fn bounds_below(&self, scale: f64, estimate: f64, tolerance: f64) -> bool {
        estimate >= self.constant * scale / tolerance
    }
}

/// [`estimate_not_forced`] for `MAJ_n` at every `(n, |P|)` pair, in grid order.
pub fn majority_forcing_grid(
    ns: &[usize],
    parts: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::with_capacity(ns.len() * parts.len());
    for &n in ns {
        let gate = majority_gate(n)?;
        for &p in parts {
            let partition = Partition::equal(n, p)?;
            let mut row = estimate_not_forced(&gate, &partition, trials, seed)?;
            row.label = format!("maj{n}_not_forced");
            rows.push(row);
        }
    }
    Ok(rows)
}
