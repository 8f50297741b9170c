use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::circuit::{Circuit, CircuitBuilder, LinearThresholdGate, Wire};
use crate::{Error, Result};

/// Whether Hamming weight `w` lies in the band `[n/2 - c*sqrt(n), n/2 + c*sqrt(n)]`,
/// decided exactly as `(n - 2w)^2 <= 4 c^2 n`.
pub fn in_parity_band(n: u64, c: u64, w: u64) -> bool {
    let d = (n as i128 - 2 * w as i128).unsigned_abs();
    d * d <= 4 * (c as u128) * (c as u128) * n as u128
}

/// Even levels `k` in `[0, n]` inside the band.
pub fn parity_band_levels(n: usize, c: u64) -> Vec<usize> {
    (0..=n)
        .step_by(2)
        .filter(|&k| in_parity_band(n as u64, c, k as u64))
        .collect()
}

/// Two-layer threshold circuit agreeing with PARITY on every input whose
/// weight lies in the band `n/2 +- c*sqrt(n)`.
///
/// Bottom gates are `L_k = [sum x >= k]` and `L_{k+1}` for each even `k`
/// in the band, so `L_k - L_{k+1}` is the indicator of weight exactly `k`.
/// The top gate computes `[sum_k (L_{k+1} - L_k) >= 0]`, i.e. "the weight
/// is not an even level of the band", which is PARITY inside the band.
pub fn parity_approx_circuit(n: usize, c: u64) -> Result<Circuit> {
    if n < 4 {
        return Err(Error::invalid(format!("parity approximator needs n >= 4, got {n}")));
    }
    if c == 0 {
        return Err(Error::invalid("band width c must be positive"));
    }
    let mut b = CircuitBuilder::new(format!("parity-approx-n{n}-c{c}"), n);
    let inputs: Vec<Wire> = (0..n).map(Wire::Input).collect();
    let mut top: Vec<(Wire, i64)> = Vec::new();
    for k in parity_band_levels(n, c) {
        let lk = b.add_named(
            format!("L{k}"),
            crate::GateOp::Ltf(LinearThresholdGate::at_least(inputs.clone(), k as i64)?),
        )?;
        let lk1 = b.add_named(
            format!("L{}", k + 1),
            crate::GateOp::Ltf(LinearThresholdGate::at_least(inputs.clone(), k as i64 + 1)?),
        )?;
        top.push((lk, -1));
        top.push((lk1, 1));
    }
    let out = b.add_named("top", crate::GateOp::Ltf(LinearThresholdGate::new(top, 0)?))?;
    b.finish(out)
}

/// Exact fraction of all `2^n` inputs on which a symmetric circuit agrees
/// with `target(weight)`, summing binomial coefficients per weight class.
/// The circuit is evaluated once per weight, on the input `1^w 0^(n-w)`.
pub fn symmetric_agreement(
    circuit: &Circuit,
    target: impl Fn(usize) -> bool,
) -> (BigUint, BigUint) {
    let n = circuit.num_inputs();
    let mut agree = BigUint::zero();
    let mut binom = BigUint::one();
    for w in 0..=n {
        let input: Vec<bool> = (0..n).map(|j| j < w).collect();
        if circuit.eval_all(&input)[circuit.output()] == target(w) {
            agree += &binom;
        }
        binom = binom * BigUint::from(n - w) / BigUint::from(w + 1);
    }
    (agree, BigUint::one() << n)
}

/// Ratio of two big unsigned integers as `f64`.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(60);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}
