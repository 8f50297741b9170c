//! Line-oriented circuit format:
//!
//! ```text
//! circuit <name>
//! inputs <n>
//! gate <id> <KIND> [t=<int>] [accept=<r,...>] [value=<0|1>] w=<ref>:<int>,...
//! output <id>
//! ```
//!
//! `<ref>` is `x<j>` or an earlier gate id. `#` starts a comment. MAJ gates
//! carry no `t=` (it is implied), MOD gates need `accept=`, CONST gates
//! need `value=`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{Circuit, CircuitBuilder, GateOp, LinearThresholdGate, ModGate, Wire};
use crate::{Error, Result};

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {}", self.name)?;
        writeln!(f, "inputs {}", self.num_inputs)?;
        let name = |w: &Wire| match *w {
            Wire::Input(j) => format!("x{j}"),
            Wire::Gate(g) => self.gates[g].id.clone(),
        };
        for g in &self.gates {
            write!(f, "gate {} {}", g.id, g.op.kind())?;
            let terms: Vec<String> = match &g.op {
                GateOp::Ltf(l) => {
                    write!(f, " t={}", l.threshold())?;
                    l.terms().iter().map(|(w, wt)| format!("{}:{wt}", name(w))).collect()
                }
                GateOp::Maj(l) => l.terms().iter().map(|(w, wt)| format!("{}:{wt}", name(w))).collect(),
                GateOp::Mod(m) => {
                    let acc: Vec<String> = m.accept().iter().map(u32::to_string).collect();
                    write!(f, " accept={}", acc.join(","))?;
                    m.terms().iter().map(|(w, r)| format!("{}:{r}", name(w))).collect()
                }
                GateOp::And(ws) | GateOp::Or(ws) => ws.iter().map(|w| format!("{}:1", name(w))).collect(),
                GateOp::Const(b) => {
                    write!(f, " value={}", u8::from(*b))?;
                    Vec::new()
                }
            };
            if !matches!(g.op, GateOp::Const(_)) {
                write!(f, " w={}", terms.join(","))?;
            }
            writeln!(f)?;
        }
        writeln!(f, "output {}", self.gates[self.output].id)
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Circuit::parse(s)
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl Circuit {
    /// Parses the text format. Structural violations are reported with
    /// the offending line number.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut name: Option<String> = None;
        let mut builder: Option<CircuitBuilder> = None;
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut output: Option<Wire> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if output.is_some() {
                return Err(perr(line_no, "content after the output line"));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "circuit" => {
                    if name.is_some() || tokens.len() != 2 {
                        return Err(perr(line_no, "expected a single `circuit <name>` header"));
                    }
                    name = Some(tokens[1].to_string());
                }
                "inputs" => {
                    let Some(n) = name.clone() else {
                        return Err(perr(line_no, "`inputs` before `circuit`"));
                    };
                    if builder.is_some() || tokens.len() != 2 {
                        return Err(perr(line_no, "expected a single `inputs <n>` line"));
                    }
                    let count: usize = tokens[1]
                        .parse()
                        .map_err(|_| perr(line_no, format!("bad input count {:?}", tokens[1])))?;
                    builder = Some(CircuitBuilder::new(n, count));
                }
                "gate" => {
                    let b = builder
                        .as_mut()
                        .ok_or_else(|| perr(line_no, "`gate` before `inputs`"))?;
                    let (id, op) = parse_gate(&tokens, &ids, b.num_inputs())
                        .map_err(|m| perr(line_no, m))?;
                    let wire = b.add_named(id.clone(), op).map_err(|e| perr(line_no, e.to_string()))?;
                    if let Wire::Gate(g) = wire {
                        ids.insert(id, g);
                    }
                }
                "output" => {
                    if tokens.len() != 2 {
                        return Err(perr(line_no, "expected `output <id>`"));
                    }
                    let g = ids
                        .get(tokens[1])
                        .ok_or_else(|| perr(line_no, format!("unknown gate id {}", tokens[1])))?;
                    output = Some(Wire::Gate(*g));
                }
                other => return Err(perr(line_no, format!("unknown directive {other:?}"))),
            }
        }
        let builder = builder.ok_or_else(|| perr(0, "missing `circuit`/`inputs` header"))?;
        let output = output.ok_or_else(|| perr(0, "missing `output` line"))?;
        builder.finish(output)
    }
}

fn parse_gate(
    tokens: &[&str],
    ids: &HashMap<String, usize>,
    num_inputs: usize,
) -> std::result::Result<(String, GateOp), String> {
    if tokens.len() < 3 {
        return Err("expected `gate <id> <KIND> ...`".into());
    }
    let id = tokens[1].to_string();
    let kind = tokens[2];
    let mut threshold: Option<BigInt> = None;
    let mut accept: Option<Vec<u32>> = None;
    let mut value: Option<bool> = None;
    let mut terms: Vec<(Wire, BigInt)> = Vec::new();
    let mut saw_w = false;

    for tok in &tokens[3..] {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found {tok:?}"))?;
        match key {
            "t" if threshold.is_none() => {
                threshold = Some(val.parse().map_err(|_| format!("bad threshold {val:?}"))?)
            }
            "accept" if accept.is_none() => {
                let rs = if val.is_empty() {
                    Vec::new()
                } else {
                    val.split(',')
                        .map(|r| r.parse::<u32>().map_err(|_| format!("bad residue {r:?}")))
                        .collect::<std::result::Result<Vec<_>, _>>()?
                };
                accept = Some(rs);
            }
            "value" if value.is_none() => {
                value = Some(match val {
                    "0" => false,
                    "1" => true,
                    _ => return Err(format!("bad constant value {val:?}")),
                })
            }
            "w" if !saw_w => {
                saw_w = true;
                for item in val.split(',').filter(|s| !s.is_empty()) {
                    let (r, wt) = item
                        .rsplit_once(':')
                        .ok_or_else(|| format!("expected <ref>:<int>, found {item:?}"))?;
                    let wire = parse_ref(r, ids, num_inputs)?;
                    let wt: BigInt = wt.parse().map_err(|_| format!("bad weight {wt:?}"))?;
                    terms.push((wire, wt));
                }
            }
            _ => return Err(format!("unexpected or repeated field {key:?}")),
        }
    }

    let refuse = |what: &str, present: bool| -> std::result::Result<(), String> {
        if present {
            Err(format!("{kind} gate does not take {what}"))
        } else {
            Ok(())
        }
    };
    let unit_wires = |terms: Vec<(Wire, BigInt)>| -> std::result::Result<Vec<Wire>, String> {
        terms
            .into_iter()
            .map(|(w, wt)| {
                if wt == BigInt::from(1) {
                    Ok(w)
                } else {
                    Err(format!("{kind} gate weights must be 1"))
                }
            })
            .collect()
    };

    let op = match kind {
        "LTF" => {
            refuse("accept=", accept.is_some())?;
            refuse("value=", value.is_some())?;
            let t = threshold.ok_or("LTF gate needs t=")?;
            GateOp::Ltf(LinearThresholdGate::new(terms, t).map_err(|e| e.to_string())?)
        }
        "MAJ" => {
            refuse("accept=", accept.is_some())?;
            refuse("value=", value.is_some())?;
            let wires = unit_wires(terms)?;
            let g = LinearThresholdGate::majority(wires).map_err(|e| e.to_string())?;
            if let Some(t) = threshold {
                if &t != g.threshold() {
                    return Err(format!("MAJ threshold must be {}", g.threshold()));
                }
            }
            GateOp::Maj(g)
        }
        "MOD2" | "MOD3" => {
            refuse("t=", threshold.is_some())?;
            refuse("value=", value.is_some())?;
            let p = if kind == "MOD2" { 2 } else { 3 };
            let acc = accept.ok_or_else(|| format!("{kind} gate needs accept="))?;
            let ts = terms
                .into_iter()
                .map(|(w, wt)| {
                    let r: i64 = (wt % BigInt::from(p)).try_into().unwrap();
                    (w, r)
                })
                .collect::<Vec<_>>();
            GateOp::Mod(ModGate::new(p as u32, acc, ts).map_err(|e| e.to_string())?)
        }
        "AND" | "OR" => {
            refuse("t=", threshold.is_some())?;
            refuse("accept=", accept.is_some())?;
            refuse("value=", value.is_some())?;
            let wires = unit_wires(terms)?;
            if kind == "AND" {
                GateOp::And(wires)
            } else {
                GateOp::Or(wires)
            }
        }
        "CONST" => {
            refuse("t=", threshold.is_some())?;
            refuse("accept=", accept.is_some())?;
            refuse("w=", saw_w)?;
            GateOp::Const(value.ok_or("CONST gate needs value=")?)
        }
        other => return Err(format!("unknown gate kind {other:?}")),
    };
    Ok((id, op))
}

fn parse_ref(
    r: &str,
    ids: &HashMap<String, usize>,
    num_inputs: usize,
) -> std::result::Result<Wire, String> {
    if let Some(digits) = r.strip_prefix('x') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let j: usize = digits.parse().map_err(|_| format!("bad input {r:?}"))?;
            if j >= num_inputs {
                return Err(format!("input {r} out of range"));
            }
            return Ok(Wire::Input(j));
        }
    }
    ids.get(r)
        .map(|&g| Wire::Gate(g))
        .ok_or_else(|| format!("undefined reference {r:?}"))
}
