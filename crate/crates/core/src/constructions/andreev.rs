use std::ops::Range;

use crate::circuit::{Circuit, CircuitBuilder, GateOp, LinearThresholdGate, Wire};
use crate::constructions::AndreevLayout;
use crate::{Error, Result};

/// Default upper bound on the gate count of [`andreev_ltf2_circuit`].
pub const LTF2_MAX_GATES: u64 = 1 << 20;

/// Adds `[sum_{v in inputs} v >= j]` for `j = 1..=|inputs|` and returns them.
/// The parity of the inputs is `sum_j (-1)^(j+1) L_j`.
fn exact_level_gates(
    b: &mut CircuitBuilder,
    prefix: &str,
    inputs: &[Wire],
) -> Result<Vec<Wire>> {
    (1..=inputs.len())
        .map(|j| {
            let g = LinearThresholdGate::at_least(inputs.iter().copied(), j as i64)?;
            b.add_named(format!("{prefix}L{j}"), GateOp::Ltf(g))
        })
        .collect()
}

fn alternating(j: usize) -> i64 {
    if j.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Depth-three threshold circuit for `A_n` with `n + 1` gates.
///
/// Bottom: `L_{i,j} = [|block_i| >= j]` for every block `i`. Middle: for
/// each data position `s`, an LTF computing `x_s AND [z(x) = s]`; each
/// block parity enters as `sum_j (-1)^(j+1) L_{i,j}`, scaled by 2 and
/// signed by the wanted address bit so it contributes `+-1` around the
/// threshold. Top: OR of the middle layer as a unit-weight LTF with `t = 1`.
pub fn andreev_tc03_circuit(n: usize) -> Result<Circuit> {
    let layout = AndreevLayout::new(n)?;
    let k = layout.k();
    let mut b = CircuitBuilder::new(format!("andreev-tc03-n{n}"), n);
    let mut levels: Vec<Vec<Wire>> = Vec::with_capacity(k);
    for (i, block) in layout.blocks().iter().enumerate() {
        let inputs: Vec<Wire> = block.clone().map(Wire::Input).collect();
        levels.push(exact_level_gates(&mut b, &format!("b{i}"), &inputs)?);
    }
    let mut middle = Vec::with_capacity(layout.data_len());
    for s in 0..layout.data_len() {
        let mut terms: Vec<(Wire, i64)> = vec![(Wire::Input(s), 2)];
        let mut sigma_sum = 0i64;
        for (i, ls) in levels.iter().enumerate() {
            let sigma = if layout.address_bit(s, i) { 1 } else { -1 };
            sigma_sum += sigma;
            for (j, &l) in ls.iter().enumerate() {
                terms.push((l, 2 * sigma * alternating(j)));
            }
        }
        let g = LinearThresholdGate::new(terms, k as i64 + 2 + sigma_sum)?;
        middle.push(b.add_named(format!("s{s}"), GateOp::Ltf(g))?);
    }
    let top = LinearThresholdGate::at_least(middle, 1)?;
    let out = b.add_named("top", GateOp::Ltf(top))?;
    b.finish(out)
}

/// One parity subcircuit of [`andreev_ltf2_circuit`]: exact-level gates
/// over the input set `V`, with the signed coefficient it carries into the
/// top gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityPart {
    pub inputs: Vec<usize>,
    /// Circuit gate indices of `L^V_1, ..., L^V_|V|`.
    pub gates: Range<usize>,
    pub coefficient: i64,
}

impl ParityPart {
    /// This part's share of `top_sum - threshold`, given the values of all
    /// circuit gates: `coefficient * (2 * parity(V) - 1)`.
    pub fn contribution(&self, circuit: &Circuit, values: &[bool]) -> i64 {
        let top = match circuit.output_gate().op() {
            GateOp::Ltf(g) => g,
            _ => unreachable!("ltf2 output is an LTF"),
        };
        let mut sum = 0i64;
        for (w, weight) in top.terms() {
            if let Wire::Gate(g) = w {
                if self.gates.contains(g) && values[*g] {
                    sum += i64::try_from(weight).expect("small weight");
                }
            }
        }
        sum - self.coefficient
    }
}

/// A depth-two LTF circuit together with its parity subcircuits.
#[derive(Debug, Clone)]
pub struct Ltf2Circuit {
    pub circuit: Circuit,
    pub parts: Vec<ParityPart>,
}

/// Depth-two LTF circuit for `A_n`, with the default gate bound.
pub fn andreev_ltf2_circuit(n: usize) -> Result<Circuit> {
    Ok(andreev_ltf2_parts(n, LTF2_MAX_GATES)?.circuit)
}

/// Depth-two LTF circuit for `A_n` from the Fourier expansion of the
/// address-matching AND.
///
/// With `y = (-1)^x`, `x_s AND [z = s]` equals
/// `2^-(k+1) sum_T tau_T(s) (Z_T - y_s Z_T)` where `Z_T` is the product of
/// the block characters in `T` and `tau_T(s)` the matching signs. Summing
/// over `s`, the `Z_T` terms cancel and
/// `2^k A_n = sum_{s,T} tau_T(s) parity(x_s, blocks(T))`. Each parity is an
/// alternating sum of exact-level gates, so the top gate reads every level
/// gate with weight `2 tau_T(s) (-1)^(j+1)` and has threshold
/// `sum tau_T(s) = 2^k`; every subcircuit then contributes exactly
/// `+-1` around the threshold.
///
/// Uses `2^{2k} + 2^{3k-1} + 1` gates; fails with a capacity error when
/// that exceeds `max_gates`.
pub fn andreev_ltf2_parts(n: usize, max_gates: u64) -> Result<Ltf2Circuit> {
    let layout = AndreevLayout::new(n)?;
    let k = layout.k();
    let count = (1u64 << (2 * k)) + (1u64 << (3 * k - 1)) + 1;
    if count > max_gates {
        return Err(Error::capacity("ltf2 gate count", count, max_gates));
    }
    let mut b = CircuitBuilder::new(format!("andreev-ltf2-n{n}"), n);
    let mut parts = Vec::new();
    let mut top: Vec<(Wire, i64)> = Vec::new();
    let mut threshold = 0i64;
    for s in 0..layout.data_len() {
        for t_mask in 0..1usize << k {
            let mut inputs = vec![s];
            let mut coefficient = 1i64;
            for (i, block) in layout.blocks().iter().enumerate() {
                if t_mask >> i & 1 == 1 {
                    inputs.extend(block.clone());
                    if layout.address_bit(s, i) {
                        coefficient = -coefficient;
                    }
                }
            }
            let wires: Vec<Wire> = inputs.iter().map(|&j| Wire::Input(j)).collect();
            let start = b.len();
            let levels = exact_level_gates(&mut b, &format!("s{s}t{t_mask}"), &wires)?;
            for (j, &l) in levels.iter().enumerate() {
                top.push((l, 2 * coefficient * alternating(j)));
            }
            threshold += coefficient;
            parts.push(ParityPart {
                inputs,
                gates: start..b.len(),
                coefficient,
            });
        }
    }
    let out = b.add_named("top", GateOp::Ltf(LinearThresholdGate::new(top, threshold)?))?;
    Ok(Ltf2Circuit {
        circuit: b.finish(out)?,
        parts,
    })
}
