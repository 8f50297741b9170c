mod common;

use common::bits_of;
use ltflab::chow::enumerate_ltfs;
use ltflab::constructions::*;
use ltflab::{Circuit, TruthTable};
use num_bigint::BigUint;

/// Andreev's function from its definition, on row indices: `k` address
/// blocks after the data half, block parities read most significant first.
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

fn oracle_table(n: usize) -> TruthTable {
    TruthTable::from_fn(n, |row| andreev_oracle(n, row)).unwrap()
}

#[test]
fn andreev_eval_matches_definition() {
    for n in [4usize, 8, 16] {
        let oracle = oracle_table(n);
        for row in 0..1u64 << n {
            assert_eq!(andreev_eval(n, &bits_of(row, n)).unwrap(), oracle.get(row), "n={n} row={row}");
        }
    }
}

#[test]
fn constructions_compute_andreev() {
    for n in [4usize, 8, 16] {
        let oracle = oracle_table(n);
        let circuits: Vec<(&str, Circuit)> = vec![
            ("tc03", andreev_tc03_circuit(n).unwrap()),
            ("ltf2", andreev_ltf2_circuit(n).unwrap()),
            ("mod3mod2", andreev_mod3mod2(n).unwrap()),
        ];
        for (name, c) in circuits {
            assert_eq!(c.truth_table().unwrap(), oracle, "{name} n={n}");
        }
        assert_eq!(andreev_pdt(n).unwrap().truth_table().unwrap(), oracle, "pdt n={n}");
    }
}

#[test]
fn construction_shapes() {
    for n in [8usize, 16, 32] {
        let k = n.trailing_zeros() as usize - 1;
        let tc03 = andreev_tc03_circuit(n).unwrap();
        assert_eq!(tc03.depth(), 3);
        assert_eq!(tc03.gates().len(), n + 1);
        let ltf2 = andreev_ltf2_circuit(n).unwrap();
        assert_eq!(ltf2.depth(), 2);
        assert_eq!(ltf2.gates().len(), (1 << (2 * k)) + (1 << (3 * k - 1)) + 1);
        assert_eq!(andreev_mod3mod2(n).unwrap().depth(), 2);
        assert_eq!(andreev_pdt(n).unwrap().depth(), k + 1);
    }
}

#[test]
fn ltf2_parity_parts_sum_to_the_output() {
    let n = 8;
    let built = andreev_ltf2_parts(n, LTF2_MAX_GATES).unwrap();
    for row in 0..1u64 << n {
        let x = bits_of(row, n);
        let values = built.circuit.eval_all(&x);
        let shares: Vec<i64> = built.parts.iter().map(|p| p.contribution(&built.circuit, &values)).collect();
        for (share, part) in shares.iter().zip(&built.parts) {
            let parity = part.inputs.iter().filter(|&&j| x[j]).count() % 2 == 1;
            assert_eq!(*share, part.coefficient * if parity { 1 } else { -1 });
        }
        assert_eq!(shares.iter().sum::<i64>() >= 0, andreev_oracle(n, row), "row {row}");
    }
}

#[test]
fn ltf2_respects_the_gate_bound() {
    assert!(andreev_ltf2_parts(16, 100).unwrap_err().is_capacity());
}

#[test]
fn f3_polynomial_is_andreev_mod_three() {
    let n = 8;
    let p = andreev_f3_polynomial(n).unwrap();
    for row in 0..1u64 << n {
        assert_eq!(p.eval(&bits_of(row, n)), u8::from(andreev_oracle(n, row)));
    }
}

#[test]
fn parity_approx_matches_parity_inside_the_band() {
    for n in 4usize..=20 {
        for c in [1u64, 2] {
            let circuit = parity_approx_circuit(n, c).unwrap();
            let table = circuit.truth_table().unwrap();
            for row in 0..1u64 << n {
                let w = row.count_ones() as u64;
                let in_band = (n as f64 / 2.0 - w as f64).abs() <= c as f64 * (n as f64).sqrt();
                if in_band {
                    assert_eq!(table.get(row), w % 2 == 1, "n={n} c={c} row={row}");
                }
            }
        }
    }
}

#[test]
fn parity_approx_weight_stratified_above_table_size() {
    for n in [64usize, 256] {
        let circuit = parity_approx_circuit(n, 2).unwrap();
        for w in 0..=n {
            let x: Vec<bool> = (0..n).map(|j| (j * 7919 + w) % n < w).collect();
            assert_eq!(x.iter().filter(|&&b| b).count(), w);
            if in_parity_band(n as u64, 2, w as u64) {
                assert_eq!(circuit.eval(&x).unwrap(), w % 2 == 1, "n={n} w={w}");
            }
        }
    }
}

#[test]
fn parity_approx_size_laws() {
    let sizes: Vec<(f64, f64)> = [64usize, 256, 1024]
        .iter()
        .map(|&n| {
            let (g, w) = parity_approx_circuit(n, 2).unwrap().size_metrics();
            (g as f64, w as f64)
        })
        .collect();
    for pair in sizes.windows(2) {
        let gate_ratio = pair[1].0 / pair[0].0 / 2.0;
        let wire_ratio = pair[1].1 / pair[0].1 / 8.0;
        assert!((1.0 / 1.25..=1.25).contains(&gate_ratio), "{gate_ratio}");
        assert!((1.0 / 1.25..=1.25).contains(&wire_ratio), "{wire_ratio}");
    }
    assert_eq!(parity_approx_circuit(64, 2).unwrap().size_metrics(), (35, 2210));
}

#[test]
fn parity_approx_agreement_at_64() {
    let circuit = parity_approx_circuit(64, 2).unwrap();
    let (agree, total) = symmetric_agreement(&circuit, |w| w % 2 == 1);
    // weights 0..=n, counted directly from binomials
    let mut oracle = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    for w in 0..=64u32 {
        let x: Vec<bool> = (0..64).map(|j| j < w).collect();
        if circuit.eval(&x).unwrap() == (w % 2 == 1) {
            oracle += &binom;
        }
        binom = binom * (64 - w) / (w + 1);
    }
    assert_eq!(agree, oracle);
    assert_eq!(total, BigUint::from(1u32) << 64);
    assert!(ratio_f64(&agree, &total) >= 0.99);
}

#[test]
fn two_input_ltfs_agree_with_parity_on_at_most_three_quarters() {
    let parity2 = TruthTable::from_fn(2, |row| row.count_ones() % 2 == 1).unwrap();
    let best = enumerate_ltfs(2)
        .unwrap()
        .iter()
        .map(|(t, _)| t.agreement(&parity2).unwrap())
        .max()
        .unwrap();
    assert_eq!(best, 3);
}

#[test]
fn multiplexer_selects_by_address() {
    let x = [false, true, true, false, false, false, true, false];
    assert!(!multiplexer_eval(&x, &[false, false, false]).unwrap());
    assert!(multiplexer_eval(&x, &[false, false, true]).unwrap());
    assert!(multiplexer_eval(&x, &[true, true, false]).unwrap());
    assert_eq!(mux_index(&[true, false, false]), 4);
    assert!(multiplexer_eval(&x, &[true, false]).is_err());
}
