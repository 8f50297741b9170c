use std::collections::HashMap;

use crate::circuit::{
    Circuit, CircuitBuilder, GateOp, LinearThresholdGate, ModGate, TruthTable, Wire,
};
use crate::restrictions::forcing::{classify_table, CompiledGate, ForcingOutcome, MAX_FREE_INPUTS};
use crate::restrictions::Restriction;
use crate::{Error, Result};

/// What became of one gate of the original circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateFate {
    Constant(bool),
    /// Replaced by the free input `index` (original numbering) or its negation.
    Literal { index: usize, positive: bool },
    /// Kept as a gate with `wires` incoming edges.
    Survived { wires: usize },
}

impl GateFate {
    pub fn survived(self) -> bool {
        matches!(self, GateFate::Survived { .. })
    }
}

/// Result of [`apply_restriction`].
#[derive(Debug, Clone)]
pub struct Restricted {
    /// Circuit over the free variables; its input `i` is original input `free[i]`.
    pub circuit: Circuit,
    pub free: Vec<usize>,
    /// One entry per gate of the original circuit.
    pub fates: Vec<GateFate>,
}

#[derive(Debug, Clone, Copy)]
enum Signal {
    Const(bool),
    /// Free variable in the new numbering.
    Literal { var: usize, positive: bool },
    Kept(usize),
}

/// Simplifies a circuit of depth at most three under `rho`.
///
/// Constants are folded into successor thresholds (a constant `c` on an
/// edge of weight `w` shifts the threshold by `-c*w`; MOD gates shift their
/// accept set), negated literals flip their weight and shift the threshold,
/// and every gate whose inputs are all free variables is classified
/// exhaustively: constants and single literals are removed, the rest kept.
/// AND, OR and MAJ gates come out as LTFs, and no constant gate survives
/// unless the whole circuit is constant.
pub fn apply_restriction(circuit: &Circuit, rho: &Restriction) -> Result<Restricted> {
    let n = circuit.num_inputs();
    if rho.n() != n {
        return Err(Error::Dimension {
            what: "restriction length",
            expected: n,
            found: rho.n(),
        });
    }
    let max_depth = circuit.gate_depths().into_iter().max().unwrap_or(0);
    if max_depth > 3 {
        return Err(Error::invalid(format!("circuit depth {max_depth} exceeds 3")));
    }
    let free = rho.free();
    let new_index: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let all_free = Restriction::all_stars(free.len());
    let mut signals: Vec<Signal> = Vec::with_capacity(circuit.gates().len());
    let mut fates = Vec::with_capacity(circuit.gates().len());
    let mut kept: Vec<(String, GateOp)> = Vec::new();

    for gate in circuit.gates() {
        let sig = |w: Wire| match w {
            Wire::Input(j) => match rho.value(j) {
                Some(v) => Signal::Const(v),
                None => Signal::Literal {
                    var: new_index[&j],
                    positive: true,
                },
            },
            Wire::Gate(g) => signals[g],
        };
        let reduced = reduce_op(gate.op(), sig)?;
        let primary_only = reduced.inputs().iter().all(|w| matches!(w, Wire::Input(_)));
        let outcome = if primary_only {
            Some(classify_primary(&reduced, &all_free)?)
        } else {
            interval_constant(&reduced).map(ForcingOutcome::from)
        };
        let (signal, fate) = match outcome {
            Some(ForcingOutcome::ForcedZero) => (Signal::Const(false), GateFate::Constant(false)),
            Some(ForcingOutcome::ForcedOne) => (Signal::Const(true), GateFate::Constant(true)),
            Some(ForcingOutcome::SingleInput { index, positive }) => (
                Signal::Literal {
                    var: index,
                    positive,
                },
                GateFate::Literal {
                    index: free[index],
                    positive,
                },
            ),
            _ => {
                let wires = reduced.fan_in();
                kept.push((gate.id().to_string(), reduced));
                (Signal::Kept(kept.len() - 1), GateFate::Survived { wires })
            }
        };
        signals.push(signal);
        fates.push(fate);
    }

    let name = format!("{}-restricted", circuit.name());
    let mut b = CircuitBuilder::new(name, free.len());
    let out = match signals[circuit.output()] {
        Signal::Const(c) => b.add_named("const", GateOp::Const(c))?,
        Signal::Literal { var, positive } => {
            let (w, t) = if positive { (1, 1) } else { (-1, 0) };
            let g = LinearThresholdGate::new([(Wire::Input(var), w)], t)?;
            b.add_named("out", GateOp::Ltf(g))?
        }
        Signal::Kept(g) => emit_reachable(&mut b, kept, g)?,
    };
    Ok(Restricted {
        circuit: b.finish(out)?,
        free,
        fates,
    })
}

/// Substitutes input signals into one gate, producing an LTF or MOD gate.
fn reduce_op(op: &GateOp, sig: impl Fn(Wire) -> Signal) -> Result<GateOp> {
    let target = |s: Signal| match s {
        Signal::Literal { var, .. } => Wire::Input(var),
        Signal::Kept(g) => Wire::Gate(g),
        Signal::Const(_) => unreachable!(),
    };
    if let GateOp::Mod(m) = op {
        let p = m.modulus() as i64;
        let mut shift = 0i64;
        let mut order: Vec<Wire> = Vec::new();
        let mut weights: HashMap<Wire, i64> = HashMap::new();
        for &(w, r) in m.terms() {
            let r = r as i64;
            let s = sig(w);
            let weight = match s {
                Signal::Const(c) => {
                    shift += i64::from(c) * r;
                    continue;
                }
                Signal::Literal {
                    positive: false, ..
                } => {
                    shift += r;
                    -r
                }
                _ => r,
            };
            let t = target(s);
            if !weights.contains_key(&t) {
                order.push(t);
            }
            *weights.entry(t).or_insert(0) += weight;
        }
        let accept = m.accept().iter().map(|&a| (a as i64 - shift).rem_euclid(p) as u32);
        let terms = order.into_iter().map(|w| (w, weights[&w]));
        return Ok(GateOp::Mod(ModGate::new(m.modulus(), accept, terms)?));
    }
    let g = op.as_threshold().expect("non-MOD gates are threshold gates");
    let mut threshold = g.threshold().clone();
    let mut terms = Vec::with_capacity(g.fan_in());
    for (w, weight) in g.terms() {
        let s = sig(*w);
        match s {
            Signal::Const(true) => threshold -= weight,
            Signal::Const(false) => {}
            Signal::Literal {
                positive: false, ..
            } => {
                threshold -= weight;
                terms.push((target(s), -weight.clone()));
            }
            _ => terms.push((target(s), weight.clone())),
        }
    }
    Ok(GateOp::Ltf(LinearThresholdGate::merged(terms, threshold)))
}

/// Constant value of a gate that is constant whatever its inputs are.
fn interval_constant(op: &GateOp) -> Option<bool> {
    match op {
        GateOp::Ltf(g) => {
            let mut lo = num_bigint::BigInt::default();
            let mut hi = num_bigint::BigInt::default();
            for (_, w) in g.terms() {
                if w.sign() == num_bigint::Sign::Minus {
                    lo += w;
                } else {
                    hi += w;
                }
            }
            if &lo >= g.threshold() {
                Some(true)
            } else if &hi < g.threshold() {
                Some(false)
            } else {
                None
            }
        }
        GateOp::Mod(m) if m.terms().is_empty() => Some(m.accepts(0)),
        _ => None,
    }
}

/// Classifies a gate over primary inputs under `rho`; the index of a
/// single-input outcome is in the gate's input numbering.
pub(crate) fn classify_primary(op: &GateOp, rho: &Restriction) -> Result<ForcingOutcome> {
    if let Some(g) = op.as_threshold() {
        return CompiledGate::new(&g, rho.n())?.forced_single_input(rho);
    }
    let mut free: Vec<usize> = op
        .inputs()
        .iter()
        .map(|w| match w {
            Wire::Input(j) => *j,
            Wire::Gate(_) => unreachable!(),
        })
        .filter(|&j| rho.is_star(j))
        .collect();
    free.sort_unstable();
    if free.len() > MAX_FREE_INPUTS {
        return Err(Error::capacity(
            "free gate inputs",
            free.len() as u64,
            MAX_FREE_INPUTS as u64,
        ));
    }
    let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let table = TruthTable::from_fn(free.len(), |row| {
        op.eval_with(|w| match w {
            Wire::Input(j) => rho.value(j).unwrap_or_else(|| (row >> pos[&j]) & 1 == 1),
            Wire::Gate(_) => unreachable!(),
        })
    })?;
    Ok(classify_table(&free, &table))
}

/// Adds the kept gates reachable from `root` to `b`, in order.
fn emit_reachable(b: &mut CircuitBuilder, kept: Vec<(String, GateOp)>, root: usize) -> Result<Wire> {
    let mut needed = vec![false; kept.len()];
    needed[root] = true;
    for i in (0..kept.len()).rev() {
        if needed[i] {
            for w in kept[i].1.inputs() {
                if let Wire::Gate(g) = w {
                    needed[g] = true;
                }
            }
        }
    }
    let mut remap: Vec<usize> = vec![usize::MAX; kept.len()];
    let mut last = Wire::Gate(0);
    for (i, (id, op)) in kept.into_iter().enumerate() {
        if !needed[i] {
            continue;
        }
        let op = remap_op(op, |w| match w {
            Wire::Gate(g) => Wire::Gate(remap[g]),
            other => other,
        })?;
        last = b.add_named(id, op)?;
        if let Wire::Gate(g) = last {
            remap[i] = g;
        }
    }
    Ok(last)
}

fn remap_op(op: GateOp, map: impl Fn(Wire) -> Wire) -> Result<GateOp> {
    Ok(match op {
        GateOp::Ltf(g) => GateOp::Ltf(g.remap(map)),
        GateOp::Mod(m) => GateOp::Mod(ModGate::new(
            m.modulus(),
            m.accept().iter().copied(),
            m.terms().iter().map(|&(w, r)| (map(w), r as i64)),
        )?),
        other => other,
    })
}

/// Classifications of the bottom gates of a circuit, compiled once for
/// repeated restriction trials.
#[derive(Debug, Clone)]
pub struct BottomLayer {
    gates: Vec<(usize, Bottom)>,
}

#[derive(Debug, Clone)]
enum Bottom {
    Threshold(CompiledGate),
    Other(GateOp),
}

impl BottomLayer {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        let n = circuit.num_inputs();
        let gates = circuit
            .bottom_gates()
            .into_iter()
            .map(|i| {
                let op = circuit.gates()[i].op();
                let b = match op.as_threshold() {
                    Some(g) => Bottom::Threshold(CompiledGate::new(&g, n)?),
                    None => Bottom::Other(op.clone()),
                };
                Ok((i, b))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BottomLayer { gates })
    }

    /// Number of bottom gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `(gate index, outcome, free fan-in)` for every bottom gate.
    pub fn fates(&self, rho: &Restriction) -> Result<Vec<(usize, ForcingOutcome, usize)>> {
        self.gates
            .iter()
            .map(|(i, b)| {
                Ok(match b {
                    Bottom::Threshold(c) => (*i, c.forced_single_input(rho)?, c.free_count(rho)),
                    Bottom::Other(op) => {
                        let free = op
                            .inputs()
                            .iter()
                            .filter(|w| matches!(w, Wire::Input(j) if rho.is_star(*j)))
                            .count();
                        (*i, classify_primary(op, rho)?, free)
                    }
                })
            })
            .collect()
    }

    /// `(gates, wires)` of bottom gates depending on two or more free inputs.
    pub fn survivors(&self, rho: &Restriction) -> Result<(usize, usize)> {
        let mut gates = 0;
        let mut wires = 0;
        for (_, outcome, free) in self.fates(rho)? {
            if outcome == ForcingOutcome::ManyInputs {
                gates += 1;
                wires += free;
            }
        }
        Ok((gates, wires))
    }
}

/// Per-bottom-gate classification of `circuit` under `rho`.
pub fn bottom_fates(
    circuit: &Circuit,
    rho: &Restriction,
) -> Result<Vec<(usize, ForcingOutcome, usize)>> {
    BottomLayer::new(circuit)?.fates(rho)
}
