use std::io::Write;

use crate::par;
use crate::restrictions::{sample_restriction, BottomLayer, Partition};
use crate::{Circuit, Error, Result};

/// Distribution of surviving bottom gates (those still depending on two or
/// more free inputs) over random restrictions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalSummary {
    pub label: String,
    pub n: usize,
    pub parts: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean_gates: f64,
    /// Standard error of `mean_gates`.
    pub stderr_gates: f64,
    pub max_gates: usize,
    pub mean_wires: f64,
    pub max_wires: usize,
    /// `histogram[g]` = number of trials with `g` surviving gates.
    pub histogram: Vec<u64>,
}

/// Samples `trials` restrictions across `partition` and counts the bottom
/// gates of `circuit` that survive each one, with their free fan-in.
pub fn restriction_survival(
    circuit: &Circuit,
    partition: &Partition,
    trials: u64,
    seed: u64,
) -> Result<SurvivalSummary> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    if partition.n() != circuit.num_inputs() {
        return Err(Error::Dimension {
            what: "partition size",
            expected: circuit.num_inputs(),
            found: partition.n(),
        });
    }
    if circuit.depth() > 3 {
        return Err(Error::invalid(format!("circuit depth {} exceeds 3", circuit.depth())));
    }
    let layer = BottomLayer::new(circuit)?;
    let per_trial = par::map(trials as usize, || (), |_, i| {
        layer.survivors(&sample_restriction(partition, seed, i as u64))
    });
    let mut histogram = vec![0u64; layer.len() + 1];
    let (mut sum_g, mut sum_g2, mut sum_w) = (0f64, 0f64, 0f64);
    let (mut max_gates, mut max_wires) = (0, 0);
    for r in per_trial {
        let (g, w) = r?;
        histogram[g] += 1;
        sum_g += g as f64;
        sum_g2 += (g * g) as f64;
        sum_w += w as f64;
        max_gates = max_gates.max(g);
        max_wires = max_wires.max(w);
    }
    let t = trials as f64;
    let mean = sum_g / t;
    let var = if trials > 1 {
        ((sum_g2 - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SurvivalSummary {
        label: format!("{}_survival", circuit.name()),
        n: partition.n(),
        parts: partition.len(),
        trials,
        seed,
        mean_gates: mean,
        stderr_gates: (var / t).sqrt(),
        max_gates,
        mean_wires: sum_w / t,
        max_wires,
        histogram,
    })
}

/// Writes one summary row per entry, then the histograms as
/// `label,n,parts,gates,count` rows in a second table separated by a blank line.
pub fn write_survival_csv<W: Write>(rows: &[SurvivalSummary], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "label,n,parts,trials,seed,mean_gates,stderr_gates,max_gates,mean_wires,max_wires"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:?},{:?},{},{:?},{}",
            r.label,
            r.n,
            r.parts,
            r.trials,
            r.seed,
            r.mean_gates,
            r.stderr_gates,
            r.max_gates,
            r.mean_wires,
            r.max_wires
        )?;
    }
    writeln!(out)?;
    writeln!(out, "label,n,parts,gates,count")?;
    for r in rows {
        for (g, &c) in r.histogram.iter().enumerate() {
            if c > 0 {
                writeln!(out, "{},{},{},{},{}", r.label, r.n, r.parts, g, c)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CircuitBuilder, GateOp, LinearThresholdGate, Wire};

    #[test]
    fn constant_bottoms_never_survive() {
        let mut b = CircuitBuilder::new("consts", 6);
        let z = b
            .ltf(LinearThresholdGate::new(Vec::<(Wire, i64)>::new(), 1).unwrap())
            .unwrap();
        let o = b.add(GateOp::Or(vec![z, Wire::Input(0)])).unwrap();
        let c = b.finish(o).unwrap();
        let s = restriction_survival(&c, &Partition::equal(6, 3).unwrap(), 100, 1).unwrap();
        assert_eq!((s.mean_gates, s.max_gates, s.max_wires), (0.0, 0, 0));
    }

    #[test]
    fn histogram_sums_to_trials() {
        let c = crate::constructions::parity_approx_circuit(16, 1).unwrap();
        let s = restriction_survival(&c, &Partition::equal(16, 4).unwrap(), 500, 9).unwrap();
        assert_eq!(s.histogram.iter().sum::<u64>(), 500);
        assert!(s.max_gates <= c.bottom_gates().len());
        assert_eq!(s.mean_wires, 4.0 * s.mean_gates);
        let mut buf = Vec::new();
        write_survival_csv(&[s], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("label,n,parts,trials,seed,"));
    }
}
