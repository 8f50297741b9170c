//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Every reference value is computed here from first principles.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{random_ltf, random_restriction, random_subset, rng};
use ltflab::chow::{chow_vector, depth2_signature, enumerate_ltfs};
use ltflab::codes::{bias_of, build_biased_matrix, BFunction, Search};
use ltflab::constructions::{
    andreev_ltf2_circuit, andreev_mod3mod2, andreev_pdt, andreev_tc03_circuit,
    parity_approx_circuit,
};
use ltflab::experiments::{
    estimate_not_forced, lo_probe, majority_forcing_grid, majority_gate, Envelope, Mode,
};
use ltflab::restrictions::{
    apply_restriction, forced_constant, forced_single_input, ConstantOutcome, ForcingOutcome,
    Partition,
};
use ltflab::{Circuit, GateOp, LinearThresholdGate, TruthTable, Wire};
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bits(row: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (row >> j) & 1 == 1).collect()
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(60);
    (num >> shift).to_f64().unwrap() / (den >> shift).to_f64().unwrap()
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Gate-by-gate evaluation of LTF/MAJ/MOD/AND/OR/CONST circuits, summing
/// weights directly.
fn eval_oracle(c: &Circuit, x: &[bool]) -> bool {
    let mut values: Vec<bool> = Vec::with_capacity(c.gates().len());
    let read = |w: &Wire, values: &Vec<bool>| match *w {
        Wire::Input(j) => x[j],
        Wire::Gate(g) => values[g],
    };
    for gate in c.gates() {
        let v = match gate.op() {
            GateOp::Ltf(g) | GateOp::Maj(g) => {
                let mut sum = BigInt::zero();
                for (w, weight) in g.terms() {
                    if read(w, &values) {
                        sum += weight;
                    }
                }
                &sum >= g.threshold()
            }
            GateOp::Mod(m) => {
                let s: u32 = m.terms().iter().filter(|(w, _)| read(w, &values)).map(|(_, r)| *r).sum();
                m.accept().contains(&(s % m.modulus()))
            }
            GateOp::And(ws) => ws.iter().all(|w| read(w, &values)),
            GateOp::Or(ws) => ws.iter().any(|w| read(w, &values)),
            GateOp::Const(b) => *b,
        };
        values.push(v);
    }
    values[c.output()]
}

fn andreev_oracle(n: usize, row: u64) -> bool {
    let k = n.trailing_zeros() as usize - 1;
    let half = n / 2;
    let mut start = half;
    let mut address = 0usize;
    for i in 0..k {
        let len = half / k + usize::from(i < half % k);
        let ones = (start..start + len).filter(|&j| (row >> j) & 1 == 1).count();
        address = 2 * address + ones % 2;
        start += len;
    }
    (row >> address) & 1 == 1
}

fn construction_equivalence() -> Check {
    for n in [8usize, 16] {
        let oracle = TruthTable::from_fn(n, |row| andreev_oracle(n, row)).unwrap();
        let builds: Vec<(&str, TruthTable)> = vec![
            ("tc03", andreev_tc03_circuit(n).unwrap().truth_table().unwrap()),
            ("ltf2", andreev_ltf2_circuit(n).unwrap().truth_table().unwrap()),
            ("pdt", andreev_pdt(n).unwrap().truth_table().unwrap()),
            ("mod3mod2", andreev_mod3mod2(n).unwrap().truth_table().unwrap()),
        ];
        for (name, table) in builds {
            ensure(table == oracle, format!("{name} differs from A_{n}"))?;
        }
    }
    // spot-check the tables themselves against gate-by-gate evaluation
    let c = andreev_tc03_circuit(16).unwrap();
    for row in (0..1u64 << 16).step_by(97) {
        ensure(eval_oracle(&c, &bits(row, 16)) == andreev_oracle(16, row), format!("tc03 row {row}"))?;
    }
    Ok("4 constructions x {8, 16} equal A_n".into())
}

fn parity_approximation() -> Check {
    let n = 64usize;
    let c = parity_approx_circuit(n, 2).unwrap();
    let mut agree = BigUint::zero();
    for w in 0..=n as u64 {
        let x: Vec<bool> = (0..n as u64).map(|j| j < w).collect();
        if eval_oracle(&c, &x) == (w % 2 == 1) {
            agree += binomial(n as u64, w);
        }
    }
    let frac = big_ratio(&agree, &(BigUint::one() << n));
    let (gates, wires) = c.size_metrics();
    let wires_oracle: usize = c.gates().iter().map(|g| g.op().fan_in()).sum();
    ensure(wires == wires_oracle, "wire count disagrees with fan-in sum")?;
    ensure(frac >= 0.99, format!("agreement {frac}"))?;
    ensure(gates as f64 <= 8.0 * (n as f64).sqrt(), format!("{gates} gates"))?;
    ensure(wires as f64 <= 8.0 * (n as f64).powf(1.5), format!("{wires} wires"))?;
    Ok(format!("agreement={frac:.6} gates={gates} wires={wires}"))
}

fn minsky_papert() -> Check {
    let best = enumerate_ltfs(2)
        .unwrap()
        .iter()
        .map(|(t, _)| (0..4u64).filter(|&r| t.get(r) == (r.count_ones() % 2 == 1)).count())
        .max()
        .unwrap();
    let frac = Ratio::new(best as u64, 4);
    ensure(frac == Ratio::new(3, 4), format!("max agreement {frac}"))?;
    Ok(format!("max agreement with PARITY_2 = {frac}"))
}

/// Tables of every gate with weights in `[-bound, bound]`.
fn weight_search(n: usize, bound: i64) -> BTreeSet<u64> {
    let side = (2 * bound + 1) as usize;
    let span = bound * n as i64;
    let mut found = BTreeSet::new();
    for code in 0..side.pow(n as u32) {
        let mut c = code;
        let w: Vec<i64> = (0..n)
            .map(|_| {
                let v = (c % side) as i64 - bound;
                c /= side;
                v
            })
            .collect();
        let sums: Vec<i64> = (0..1u64 << n)
            .map(|row| (0..n).filter(|&j| (row >> j) & 1 == 1).map(|j| w[j]).sum())
            .collect();
        for t in -span..=span + 1 {
            let table = sums.iter().enumerate().fold(0u64, |acc, (r, &s)| acc | (u64::from(s >= t) << r));
            found.insert(table);
        }
    }
    found
}

fn ltf_enumeration() -> Check {
    const PINNED: [usize; 4] = [4, 14, 104, 1882];
    let mut report = Vec::new();
    for n in 1..=4usize {
        let ltfs = enumerate_ltfs(n).unwrap();
        let codes: BTreeSet<u64> = ltfs.iter().map(|(t, _)| t.words()[0]).collect();
        ensure(codes.len() == ltfs.len(), format!("duplicate tables at n={n}"))?;
        ensure(ltfs.len() == PINNED[n - 1], format!("n={n}: {} LTFs", ltfs.len()))?;
        let bound = [1, 1, 2, 3][n - 1];
        ensure(codes == weight_search(n, bound), format!("n={n}: weight search disagrees"))?;
        let chows: BTreeSet<Vec<i64>> = ltfs.iter().map(|(t, _)| chow_vector(t).unwrap().scaled).collect();
        ensure(chows.len() == ltfs.len(), format!("n={n}: Chow collision"))?;
        report.push(ltfs.len().to_string());
    }
    Ok(format!("counts {} and no Chow collisions", report.join(",")))
}

fn forcing_correctness() -> Check {
    let mut g = rng(0xF0C);
    let mut cases = 0;
    while cases < 10_000 {
        let n = g.random_range(1..=40usize);
        let inputs: Vec<Wire> = (0..n).map(Wire::Input).collect();
        let max_w = 1i64 << g.random_range(0..24);
        let gate = random_ltf(&mut g, &inputs, max_w);
        let star = g.random_range(0.05..0.6);
        let rho = random_restriction(&mut g, n, star);
        let free = rho.free();
        if free.len() > 12 {
            continue;
        }
        cases += 1;
        let points: Vec<Vec<bool>> = (0..1u64 << free.len())
            .map(|b| {
                let mut x: Vec<bool> = (0..n).map(|j| rho.value(j).unwrap_or(false)).collect();
                for (i, &j) in free.iter().enumerate() {
                    x[j] = (b >> i) & 1 == 1;
                }
                x
            })
            .collect();
        let values: Vec<bool> = points.iter().map(|x| common::brute_gate(&gate, x)).collect();
        let relevant: Vec<usize> = free
            .iter()
            .copied()
            .filter(|&j| {
                points.iter().zip(&values).any(|(x, &v)| {
                    let mut y = x.clone();
                    y[j] = !y[j];
                    common::brute_gate(&gate, &y) != v
                })
            })
            .collect();
        let constant = if values.iter().all(|&v| v) {
            ConstantOutcome::ForcedOne
        } else if values.iter().all(|&v| !v) {
            ConstantOutcome::ForcedZero
        } else {
            ConstantOutcome::NotForced
        };
        let fc = forced_constant(&gate, &rho).unwrap();
        ensure(fc == constant, format!("case {cases}: forced_constant {fc:?}, exhaustive {constant:?}"))?;
        let single = match constant {
            ConstantOutcome::ForcedOne => ForcingOutcome::ForcedOne,
            ConstantOutcome::ForcedZero => ForcingOutcome::ForcedZero,
            ConstantOutcome::NotForced if relevant.len() == 1 => {
                let j = relevant[0];
                let positive = points.iter().zip(&values).all(|(x, &v)| v == x[j]);
                ForcingOutcome::SingleInput { index: j, positive }
            }
            ConstantOutcome::NotForced => ForcingOutcome::ManyInputs,
        };
        let fs = forced_single_input(&gate, &rho).unwrap();
        ensure(fs == single, format!("case {cases}: forced_single_input {fs:?}, exhaustive {single:?}"))?;
    }
    Ok(format!("{cases} cases, 0 discrepancies"))
}

fn majority_envelope() -> Check {
    let ns = [256usize, 1024, 4096];
    let parts = [2usize, 4, 8, 16];
    let rows = majority_forcing_grid(&ns, &parts, 100_000, 0x1E55).unwrap();
    let scale = |n: usize, p: usize| p as f64 / (n as f64).sqrt();
    let envelope = Envelope::fit(scale(ns[0], parts[0]), rows[0].estimate);
    for row in &rows {
        let s = scale(row.n, row.parts);
        ensure(
            envelope.bounds_above(s, row.estimate, 1.5) && envelope.bounds_below(s, row.estimate, 1.5),
            format!("n={} |P|={} estimate {} outside [{:.3}, {:.3}]x|P|/sqrt(n)", row.n, row.parts,
                row.estimate, envelope.constant / 1.5, envelope.constant * 1.5),
        )?;
    }
    for (i, &p) in parts.iter().enumerate() {
        for w in 0..ns.len() - 1 {
            let a = rows[w * parts.len() + i].estimate;
            let b = rows[(w + 1) * parts.len() + i].estimate;
            let ratio = b / a;
            ensure(
                (0.5 / 1.5..=0.5 * 1.5).contains(&ratio),
                format!("|P|={p}: ratio {ratio} between n={} and n={}", ns[w], ns[w + 1]),
            )?;
        }
    }
    // n = 400, |P| = 2: not forced iff the 398 fixed bits sum to 198 or 199
    let exact = big_ratio(&(binomial(398, 198) + binomial(398, 199)), &(BigUint::one() << 398));
    let row = estimate_not_forced(&majority_gate(400).unwrap(), &Partition::equal(400, 2).unwrap(), 100_000, 400)
        .unwrap();
    ensure(row.within(exact, 3.0), format!("n=400: {} vs exact {exact}", row.estimate))?;
    Ok(format!(
        "c_low={:.3} C_env={:.3}; n=400 {:.5} vs exact {:.5}",
        envelope.constant / 1.5,
        envelope.constant * 1.5,
        row.estimate,
        exact
    ))
}

fn littlewood_offord() -> Check {
    let mut g = rng(0x10);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let k = 1usize << g.random_range(4..=10);
        let width = g.random_range(0..=8i64);
        let weights: Vec<i64> = (0..k)
            .map(|_| {
                let a = g.random_range(width.max(1)..=width.max(1) + 2);
                if g.random_bool(0.5) { a } else { -a }
            })
            .collect();
        let lo = g.random_range(-(width + 20)..=20);
        let row = lo_probe(&weights, lo, lo + width, Mode::Trials { trials: 100_000, seed: case }).unwrap();
        let bound = 4.0 / (k as f64).sqrt();
        ensure(row.estimate <= bound, format!("k={k}: {} > {bound}", row.estimate))?;
        worst = worst.max(row.estimate * (k as f64).sqrt());
    }
    let exact = big_ratio(&binomial(100, 50), &(BigUint::one() << 100));
    let row = lo_probe(&[1; 100], 50, 50, Mode::Trials { trials: 100_000, seed: 100 }).unwrap();
    ensure(row.within(exact, 3.0), format!("uniform: {} vs {exact}", row.estimate))?;
    Ok(format!("max sqrt(k)*estimate {worst:.3} <= 4; C(100,50)/2^100={exact:.5} est {:.5}", row.estimate))
}

fn restriction_soundness() -> Check {
    let mut g = rng(0x5EED);
    let mut checked = 0u64;
    for i in 0..200 {
        let n = g.random_range(2..=12usize);
        let s = g.random_range(1..=6usize);
        let c = common::random_depth2(&mut g, n, s, 9);
        for _ in 0..10 {
            let star = g.random_range(0.1..0.9);
            let rho = random_restriction(&mut g, n, star);
            let restricted = apply_restriction(&c, &rho).unwrap();
            let free = rho.free();
            ensure(restricted.free == free, format!("circuit {i}: free list"))?;
            for b in 0..1u64 << free.len() {
                let mut x: Vec<bool> = (0..n).map(|j| rho.value(j).unwrap_or(false)).collect();
                let local = bits(b, free.len());
                for (k, &j) in free.iter().enumerate() {
                    x[j] = local[k];
                }
                ensure(
                    eval_oracle(&restricted.circuit, &local) == eval_oracle(&c, &x),
                    format!("circuit {i}: mismatch under {rho}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("200 circuits x 10 restrictions, {checked} completions, 0 failures"))
}

fn signature_property() -> Check {
    let mut g = rng(0x516);
    let mut collisions = 0u64;
    for i in 0..10_000 {
        let n = g.random_range(1..=10usize);
        let s = g.random_range(1..=8usize);
        let primary: Vec<Wire> = (0..n).map(Wire::Input).collect();
        let bottoms: Vec<LinearThresholdGate> = (0..s)
            .map(|_| {
                let ins = random_subset(&mut g, &primary, 1, n);
                random_ltf(&mut g, &ins, 3)
            })
            .collect();
        let tops: Vec<Wire> = (0..s).map(Wire::Input).collect();
        let top_g = random_ltf(&mut g, &tops, 2);
        let top_h = if g.random_bool(0.5) {
            random_ltf(&mut g, &tops, 2)
        } else {
            // a nearby gate: same weights, shifted threshold
            let shift = g.random_range(-1..=1i64);
            LinearThresholdGate::new(top_g.terms().to_vec(), top_g.threshold() + shift).unwrap()
        };
        let sg = depth2_signature(&top_g, &bottoms, n).unwrap();
        let sh = depth2_signature(&top_h, &bottoms, n).unwrap();
        if sg != sh {
            continue;
        }
        collisions += 1;
        let mut memo: HashMap<u64, bool> = HashMap::new();
        for row in 0..1u64 << n {
            let x = bits(row, n);
            let y: Vec<bool> = bottoms.iter().map(|b| common::brute_gate(b, &x)).collect();
            let key = y.iter().enumerate().fold(0u64, |acc, (j, &v)| acc | (u64::from(v) << j));
            let agree = *memo.entry(key).or_insert_with(|| common::brute_gate(&top_g, &y) == common::brute_gate(&top_h, &y));
            ensure(agree, format!("instance {i}: equal signatures, different functions"))?;
        }
    }
    Ok(format!("10000 instances, {collisions} with equal signatures, 0 counterexamples"))
}

/// GF(4) with modulus x^2 + x + 1.
fn gf4_mul(a: u32, b: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..2 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    if acc & 0b100 != 0 {
        acc ^= 0b111;
    }
    acc
}

fn small_bias_code() -> Check {
    let mut report = Vec::new();
    for (t, r) in [(4usize, 4u32), (8, 6)] {
        let m = build_biased_matrix(t, r).unwrap();
        let rows: Vec<u64> = (0..m.m()).map(|i| m.row(i)[0]).collect();
        let mut worst = Ratio::new(0u64, 1);
        for v in 1u64..1 << t {
            let ones = rows.iter().filter(|row| (*row & v).count_ones() % 2 == 1).count() as i64;
            worst = worst.max(Ratio::new((2 * ones - m.m() as i64).unsigned_abs(), 2 * m.m()));
        }
        let bound = Ratio::new(t as u64 - 1, 1 << r);
        ensure(worst <= bound, format!("(t,r)=({t},{r}): bias {worst} > {bound}"))?;
        ensure(bias_of(&m, Search::Exhaustive).unwrap().value == worst, format!("({t},{r}): bias_of disagrees"))?;
        report.push(format!("bias({t},{r})={worst}<={bound}"));
    }
    let m = build_biased_matrix(4, 4).unwrap();
    let rows: Vec<u64> = (0..256).map(|i| m.row(i)[0]).collect();
    for x in 0u64..16 {
        for y in x + 1..16 {
            let agree = rows.iter().filter(|row| ((*row & x).count_ones() + (*row & y).count_ones()) % 2 == 0).count();
            let dev = (agree as f64 / 256.0 - 0.5).abs();
            ensure(dev <= 3.0 / 16.0, format!("codewords {x},{y} agree on {agree}/256"))?;
        }
    }
    // B_{8,4} straight-line: GF(4) matrix A (16 x 8), block parities of a, row lookup
    let mut a_rows = [0u64; 16];
    for alpha in 0..4u32 {
        for beta in 0..4u32 {
            let mut power = 1u32;
            let mut row = 0u64;
            for i in 0..8 {
                if (power & beta).count_ones() % 2 == 1 {
                    row |= 1 << i;
                }
                power = gf4_mul(power, alpha);
            }
            a_rows[(alpha * 4 + beta) as usize] = row;
        }
    }
    let b = BFunction::new(8, 4).unwrap();
    for input in 0u64..1 << 16 {
        let x = input & 0xff;
        let a = input >> 8;
        let z: Vec<u64> = (0..4).map(|i| u64::from(((a >> (2 * i)) & 0b11).count_ones() % 2)).collect();
        let index = z.iter().fold(0u64, |acc, &bit| 2 * acc + bit) as usize;
        let expected = (a_rows[index] & x).count_ones() % 2 == 1;
        let got = b.eval(&bits(x, 8), &bits(a, 8)).unwrap();
        ensure(got == expected, format!("B_8,4 differs at x={x:#x} a={a:#x}"))?;
    }
    report.push("B_{8,4} table matches".into());
    Ok(report.join("; "))
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("construction equivalence", Duration::from_secs(60), construction_equivalence),
        ("parity approximation", Duration::from_secs(5), parity_approximation),
        ("two-input LTFs vs PARITY", Duration::from_secs(1), minsky_papert),
        ("LTF enumeration and Chow", Duration::from_secs(600), ltf_enumeration),
        ("forcing correctness", Duration::from_secs(120), forcing_correctness),
        ("majority forcing envelope", Duration::from_secs(600), majority_envelope),
        ("Littlewood-Offord", Duration::from_secs(300), littlewood_offord),
        ("restriction soundness", Duration::from_secs(120), restriction_soundness),
        ("depth-2 signature", Duration::from_secs(300), signature_property),
        ("small-bias code", Duration::from_secs(120), small_bias_code),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; over budget")),
            other => other,
        };
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {:>2} {name} ({:.2}s / {}s): {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}

