#![allow(dead_code)]

use ltflab::restrictions::Restriction;
use ltflab::{Circuit, CircuitBuilder, GateOp, LinearThresholdGate, ModGate, Wire};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_subset(rng: &mut impl Rng, pool: &[Wire], lo: usize, hi: usize) -> Vec<Wire> {
    let mut pool = pool.to_vec();
    pool.shuffle(rng);
    let k = rng.random_range(lo.min(pool.len())..=hi.min(pool.len()));
    pool.truncate(k);
    pool
}

pub fn random_ltf(rng: &mut impl Rng, inputs: &[Wire], max_w: i64) -> LinearThresholdGate {
    let terms: Vec<(Wire, i64)> = inputs
        .iter()
        .map(|&w| (w, rng.random_range(-max_w..=max_w)))
        .collect();
    let span: i64 = terms.iter().map(|(_, w)| w.abs()).sum();
    let t = rng.random_range(-span - 1..=span + 1);
    LinearThresholdGate::new(terms, t).unwrap()
}

pub fn random_op(rng: &mut impl Rng, inputs: Vec<Wire>, max_w: i64) -> GateOp {
    match rng.random_range(0..10) {
        0 => GateOp::Maj(LinearThresholdGate::majority(inputs).unwrap()),
        1 => GateOp::And(inputs),
        2 => GateOp::Or(inputs),
        3 => {
            let terms: Vec<(Wire, i64)> = inputs.iter().map(|&w| (w, rng.random_range(1..3))).collect();
            GateOp::Mod(ModGate::new(3, [rng.random_range(0..3)], terms).unwrap())
        }
        4 => GateOp::Mod(ModGate::parity(inputs).unwrap()),
        _ => GateOp::Ltf(random_ltf(rng, &inputs, max_w)),
    }
}

/// A layered circuit of mixed gate kinds and depth at most `depth`.
pub fn random_circuit(rng: &mut impl Rng, n: usize, depth: usize, max_w: i64) -> Circuit {
    let mut b = CircuitBuilder::new("random", n);
    let primary: Vec<Wire> = (0..n).map(Wire::Input).collect();
    let mut previous = primary.clone();
    for level in 0..depth {
        let width = if level + 1 == depth { 1 } else { rng.random_range(1..=4) };
        let mut layer = Vec::new();
        for _ in 0..width {
            let mut pool = previous.clone();
            if level > 0 && rng.random_bool(0.5) {
                pool.extend(random_subset(rng, &primary, 0, 2));
            }
            let ins = random_subset(rng, &pool, 1, 6);
            let op = if rng.random_range(0..20) == 0 {
                GateOp::Const(rng.random_bool(0.5))
            } else {
                random_op(rng, ins, max_w)
            };
            layer.push(b.add(op).unwrap());
        }
        previous = layer;
    }
    b.finish(previous[0]).unwrap()
}

/// LTF bottoms over random input subsets under one LTF top.
pub fn random_depth2(rng: &mut impl Rng, n: usize, s: usize, max_w: i64) -> Circuit {
    let mut b = CircuitBuilder::new("depth2", n);
    let primary: Vec<Wire> = (0..n).map(Wire::Input).collect();
    let bottoms: Vec<Wire> = (0..s)
        .map(|_| {
            let ins = random_subset(rng, &primary, 1, n);
            b.ltf(random_ltf(rng, &ins, max_w)).unwrap()
        })
        .collect();
    let top = random_ltf(rng, &bottoms, max_w);
    let out = b.ltf(top).unwrap();
    b.finish(out).unwrap()
}

pub fn random_restriction(rng: &mut impl Rng, n: usize, star: f64) -> Restriction {
    let values: Vec<Option<bool>> = (0..n)
        .map(|_| (!rng.random_bool(star)).then(|| rng.random_bool(0.5)))
        .collect();
    Restriction::from_values(&values)
}

/// `[sum w_i x_i >= t]` summed directly from the gate's terms.
pub fn brute_gate(gate: &LinearThresholdGate, x: &[bool]) -> bool {
    let mut sum = BigInt::from(0);
    for (w, weight) in gate.terms() {
        let Wire::Input(j) = w else { panic!("gate reads another gate") };
        if x[*j] {
            sum += weight;
        }
    }
    &sum >= gate.threshold()
}

/// Every completion of `rho`, free positions filled from the bits of `bits`
/// in increasing index order.
pub fn completions(rho: &Restriction) -> Vec<Vec<bool>> {
    let free = rho.free();
    (0..1u64 << free.len())
        .map(|bits| {
            let mut x: Vec<bool> = (0..rho.n()).map(|j| rho.value(j).unwrap_or(false)).collect();
            for (i, &j) in free.iter().enumerate() {
                x[j] = (bits >> i) & 1 == 1;
            }
            x
        })
        .collect()
}

pub fn bits_of(row: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (row >> j) & 1 == 1).collect()
}
