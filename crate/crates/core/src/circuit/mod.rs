//! Gates, layered circuits, exact evaluation and size metrics.
//!
//! Inputs are bits over {0,1}. Gates are stored in topological order and
//! refer to earlier gates by position; a gate's textual id is only used by
//! the text format.

mod gate;
mod table;
mod text;

use std::collections::HashSet;

pub use gate::{LinearThresholdGate, ModGate, Wire};
pub use table::{TruthTable, MAX_TABLE_INPUTS};
pub(crate) use table::input_word;

use crate::{Error, Result};

/// The operation a gate performs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateOp {
    Ltf(LinearThresholdGate),
    /// An LTF with unit weights and threshold `ceil(fan_in / 2)`.
    Maj(LinearThresholdGate),
    Mod(ModGate),
    And(Vec<Wire>),
    Or(Vec<Wire>),
    Const(bool),
}

impl GateOp {
    /// Kind keyword used by the text format.
    pub fn kind(&self) -> &'static str {
        match self {
            GateOp::Ltf(_) => "LTF",
            GateOp::Maj(_) => "MAJ",
            GateOp::Mod(m) if m.modulus() == 2 => "MOD2",
            GateOp::Mod(_) => "MOD3",
            GateOp::And(_) => "AND",
            GateOp::Or(_) => "OR",
            GateOp::Const(_) => "CONST",
        }
    }

    pub fn inputs(&self) -> Vec<Wire> {
        match self {
            GateOp::Ltf(g) | GateOp::Maj(g) => g.wires().collect(),
            GateOp::Mod(m) => m.terms().iter().map(|(w, _)| *w).collect(),
            GateOp::And(ws) | GateOp::Or(ws) => ws.clone(),
            GateOp::Const(_) => Vec::new(),
        }
    }

    /// Number of weighted incoming edges.
    pub fn fan_in(&self) -> usize {
        match self {
            GateOp::Ltf(g) | GateOp::Maj(g) => g.fan_in(),
            GateOp::Mod(m) => m.terms().len(),
            GateOp::And(ws) | GateOp::Or(ws) => ws.len(),
            GateOp::Const(_) => 0,
        }
    }

    pub fn eval_with(&self, mut value: impl FnMut(Wire) -> bool) -> bool {
        match self {
            GateOp::Ltf(g) | GateOp::Maj(g) => g.eval_with(value),
            GateOp::Mod(m) => m.eval_with(value),
            GateOp::And(ws) => ws.iter().all(|w| value(*w)),
            GateOp::Or(ws) => ws.iter().any(|w| value(*w)),
            GateOp::Const(b) => *b,
        }
    }

    /// The same function expressed as a threshold gate, when one exists
    /// without extra gates (LTF, MAJ, AND, OR, CONST).
    pub fn as_threshold(&self) -> Option<LinearThresholdGate> {
        match self {
            GateOp::Ltf(g) | GateOp::Maj(g) => Some(g.clone()),
            GateOp::And(ws) => LinearThresholdGate::at_least(ws.iter().copied(), ws.len() as i64).ok(),
            GateOp::Or(ws) => LinearThresholdGate::at_least(ws.iter().copied(), 1).ok(),
            GateOp::Const(true) => LinearThresholdGate::new(Vec::<(Wire, i64)>::new(), 0).ok(),
            GateOp::Const(false) => LinearThresholdGate::new(Vec::<(Wire, i64)>::new(), 1).ok(),
            GateOp::Mod(_) => None,
        }
    }
}

/// A gate together with its textual id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    id: String,
    op: GateOp,
}

impl Gate {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn op(&self) -> &GateOp {
        &self.op
    }
}

/// A validated gate DAG in topological order with a designated output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    name: String,
    num_inputs: usize,
    gates: Vec<Gate>,
    output: usize,
}

impl Circuit {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn output_gate(&self) -> &Gate {
        &self.gates[self.output]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        validate_name(&name)?;
        self.name = name;
        Ok(self)
    }

    /// Evaluates every gate in order and returns the output bit.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        if assignment.len() != self.num_inputs {
            return Err(Error::Dimension {
                what: "assignment length",
                expected: self.num_inputs,
                found: assignment.len(),
            });
        }
        Ok(self.eval_all(assignment)[self.output])
    }

    /// Values of every gate on `assignment`.
    pub fn eval_all(&self, assignment: &[bool]) -> Vec<bool> {
        let mut values = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = g.op.eval_with(|w| match w {
                Wire::Input(j) => assignment[j],
                Wire::Gate(i) => values[i],
            });
            values.push(v);
        }
        values
    }

    /// Evaluates on the row index `row` (bit `j` is `x_j`).
    pub fn eval_row(&self, row: u64) -> bool {
        let bits: Vec<bool> = (0..self.num_inputs).map(|j| (row >> j) & 1 == 1).collect();
        self.eval_all(&bits)[self.output]
    }

    /// `(gate_count, wire_count)`: non-constant gates, and weighted edges
    /// into all gates (including edges from primary inputs).
    pub fn size_metrics(&self) -> (usize, usize) {
        let gates = self
            .gates
            .iter()
            .filter(|g| !matches!(g.op, GateOp::Const(_)))
            .count();
        let wires = self.gates.iter().map(|g| g.op.fan_in()).sum();
        (gates, wires)
    }

    /// Per-gate depth: constants are 0, otherwise one more than the deepest input.
    pub fn gate_depths(&self) -> Vec<usize> {
        let mut depth: Vec<usize> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let d = match &g.op {
                GateOp::Const(_) => 0,
                op => {
                    1 + op
                        .inputs()
                        .iter()
                        .map(|w| match w {
                            Wire::Input(_) => 0,
                            Wire::Gate(i) => depth[*i],
                        })
                        .max()
                        .unwrap_or(0)
                }
            };
            depth.push(d);
        }
        depth
    }

    /// Depth of the output gate.
    pub fn depth(&self) -> usize {
        self.gate_depths()[self.output]
    }

    /// Indices of non-constant gates reading only primary inputs.
    pub fn bottom_gates(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| {
                !matches!(g.op, GateOp::Const(_))
                    && g.op.inputs().iter().all(|w| matches!(w, Wire::Input(_)))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the gate with textual id `id`.
    pub fn find(&self, id: &str) -> Option<usize> {
        self.gates.iter().position(|g| g.id == id)
    }
}

/// Incrementally assembles a [`Circuit`], validating each gate as it is added.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    name: String,
    num_inputs: usize,
    gates: Vec<Gate>,
    ids: HashSet<String>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>, num_inputs: usize) -> Self {
        CircuitBuilder {
            name: name.into(),
            num_inputs,
            gates: Vec::new(),
            ids: HashSet::new(),
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Adds a gate with id `g<position>`.
    pub fn add(&mut self, op: GateOp) -> Result<Wire> {
        let id = format!("g{}", self.gates.len());
        self.add_named(id, op)
    }

    pub fn add_named(&mut self, id: impl Into<String>, op: GateOp) -> Result<Wire> {
        let id = id.into();
        validate_gate_id(&id)?;
        if self.ids.contains(&id) {
            return Err(Error::structural(format!("duplicate gate id {id}")));
        }
        let here = self.gates.len();
        let inputs = op.inputs();
        let mut seen = HashSet::new();
        for w in &inputs {
            match *w {
                Wire::Input(j) if j >= self.num_inputs => {
                    return Err(Error::structural(format!(
                        "gate {id}: input x{j} out of range for {} inputs",
                        self.num_inputs
                    )))
                }
                Wire::Gate(g) if g >= here => {
                    return Err(Error::structural(format!(
                        "gate {id}: reference to gate #{g} breaks topological order"
                    )))
                }
                _ => {}
            }
            if !seen.insert(*w) {
                return Err(Error::structural(format!("gate {id}: duplicate input {w}")));
            }
        }
        if let GateOp::Maj(g) = &op {
            if !g.is_majority() {
                return Err(Error::structural(format!(
                    "gate {id}: MAJ needs unit weights and threshold ceil(fan_in/2)"
                )));
            }
        }
        self.ids.insert(id.clone());
        self.gates.push(Gate { id, op });
        Ok(Wire::Gate(here))
    }

    pub fn ltf(&mut self, gate: LinearThresholdGate) -> Result<Wire> {
        self.add(GateOp::Ltf(gate))
    }

    pub fn finish(self, output: Wire) -> Result<Circuit> {
        validate_name(&self.name)?;
        let output = match output {
            Wire::Gate(g) if g < self.gates.len() => g,
            other => {
                return Err(Error::structural(format!(
                    "output {other} is not a gate of this circuit"
                )))
            }
        };
        Ok(Circuit {
            name: self.name,
            num_inputs: self.num_inputs,
            gates: self.gates,
            output,
        })
    }
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#' || !c.is_ascii()) {
        return Err(Error::structural(format!("invalid circuit name {name:?}")));
    }
    Ok(())
}

fn validate_gate_id(id: &str) -> Result<()> {
    let input_like = id.len() > 1
        && id.starts_with('x')
        && id[1..].bytes().all(|b| b.is_ascii_digit());
    if id.is_empty()
        || input_like
        || id.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ',' | ':' | '='))
        || !id.is_ascii()
    {
        return Err(Error::structural(format!("invalid gate id {id:?}")));
    }
    Ok(())
}
