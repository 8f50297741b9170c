mod common;

use common::rng;
use ltflab::codes::*;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, RngCore};

/// Carry-less product reduced modulo `poly` bit by bit.
fn slow_mul(a: u32, b: u32, poly: u32, r: u32) -> u32 {
    let mut acc = 0u64;
    for i in 0..r {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u64) << i;
        }
    }
    for i in (r..2 * r).rev() {
        if (acc >> i) & 1 == 1 {
            acc ^= (poly as u64) << (i - r);
        }
    }
    acc as u32
}

#[test]
fn field_axioms() {
    for r in 2..=8u32 {
        let f = BinaryField::new(r).unwrap();
        assert!(is_irreducible(f.modulus()));
        let mut g = rng(r as u64);
        let q = f.order() as u32;
        for _ in 0..10_000 {
            let (a, b, c) = (g.random_range(0..q), g.random_range(0..q), g.random_range(0..q));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.mul(a, b), slow_mul(a, b, f.modulus(), r));
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
        assert_eq!(f.inv(0), None);
    }
}

#[test]
fn built_in_moduli_are_irreducible() {
    for r in 2..=16u32 {
        let f = BinaryField::new(r).unwrap();
        assert_eq!(f.degree(), r);
        assert_eq!(31 - f.modulus().leading_zeros(), r);
        assert!(is_irreducible(f.modulus()));
    }
    assert!(BinaryField::new(1).is_err());
    assert!(BinaryField::new(17).is_err());
}

/// Row `(alpha, beta)` column `i` is `<alpha^i, beta>`, from the field alone.
fn oracle_entry(f: &BinaryField, row: u64, i: usize) -> bool {
    let r = f.degree();
    let alpha = (row >> r) as u32;
    let beta = (row & ((1 << r) - 1)) as u32;
    (f.pow(alpha, i as u64) & beta).count_ones() % 2 == 1
}

#[test]
fn matrix_entries_follow_the_powering_rule() {
    let m = build_biased_matrix(10, 3).unwrap();
    assert_eq!(m.m(), 64);
    for row in 0..m.m() {
        let words = m.row(row);
        for i in 0..10 {
            assert_eq!((words[0] >> i) & 1 == 1, oracle_entry(m.field(), row, i));
        }
    }
}

/// Largest bias by brute force over every nonzero test vector.
fn oracle_bias(m: &BiasedMatrix) -> Ratio<u64> {
    let t = m.t();
    let rows: Vec<u64> = (0..m.m()).map(|i| m.row(i)[0]).collect();
    (1u64..1 << t)
        .map(|v| {
            let ones = rows.iter().filter(|r| (*r & v).count_ones() % 2 == 1).count() as i64;
            Ratio::new((2 * ones - m.m() as i64).unsigned_abs(), 2 * m.m())
        })
        .max()
        .unwrap()
}

#[test]
fn bias_within_declared_bound() {
    for (t, r) in [(1usize, 2u32), (1, 5), (4, 4), (8, 6), (5, 3)] {
        let m = build_biased_matrix(t, r).unwrap();
        let bias = bias_of(&m, Search::Exhaustive).unwrap();
        assert_eq!(bias.value, oracle_bias(&m), "t={t} r={r}");
        assert!(bias.value <= m.epsilon(), "t={t} r={r}");
        assert_eq!(m.epsilon(), Ratio::new(t as u64 - 1, 1 << r));
        let sampled = bias_of(&m, Search::Sampled { count: 20, seed: 1 }).unwrap();
        assert!(sampled.value <= bias.value);
    }
    let zero = bias_of_rows(&[0u64; 8], 2, Search::Exhaustive).unwrap();
    assert_eq!(zero.value, Ratio::new(1, 2));
}

#[test]
fn codewords_are_nearly_balanced_apart() {
    let m = build_biased_matrix(4, 4).unwrap();
    let eps = 3.0 / 16.0;
    for x in 0u64..16 {
        for y in x + 1..16 {
            let cx = m.codeword(&[x]).unwrap();
            let cy = m.codeword(&[y]).unwrap();
            let differ: u32 = cx.iter().zip(&cy).map(|(a, b)| (a ^ b).count_ones()).sum();
            let agree = 1.0 - differ as f64 / 256.0;
            assert!((agree - 0.5).abs() <= eps, "x={x} y={y} agree={agree}");
        }
    }
}

#[test]
fn export_format() {
    let m = build_biased_matrix(6, 2).unwrap();
    let mut buf = Vec::new();
    m.write(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("biased t=6 r=2 m=16 poly={:x}", m.field().modulus())
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    for (i, line) in rows.iter().enumerate() {
        let bits: Vec<bool> = line
            .chars()
            .flat_map(|c| {
                let d = c.to_digit(16).unwrap();
                (0..4).map(move |b| (d >> b) & 1 == 1)
            })
            .collect();
        for (col, bit) in bits.iter().take(6).enumerate() {
            assert_eq!(*bit, oracle_entry(m.field(), i as u64, col));
        }
    }
}

#[test]
fn profile_finds_planted_codewords() {
    let m = build_biased_matrix(8, 6).unwrap();
    let x0 = 0b1011_0110u64;
    let target = m.codeword(&[x0]).unwrap();
    let p = correlation_profile(&m, &target, 0.49, Search::Exhaustive).unwrap();
    assert!(p.exceeders >= 1);
    assert_eq!(p.total, 255);
    let flipped: Vec<u64> = target.iter().map(|w| !w).collect();
    let q = correlation_profile(&m, &flipped, 0.49, Search::Exhaustive).unwrap();
    assert!(q.exceeders >= 1);
}

#[test]
fn profile_envelope_for_random_targets() {
    // recorded envelope: at most C / eps exceeders with C = 1
    let m = build_biased_matrix(8, 6).unwrap();
    let eps = 7.0f64 / 64.0;
    let mut g = rng(63);
    let mut worst = 0;
    for _ in 0..100 {
        let target: Vec<u64> = (0..64).map(|_| g.next_u64()).collect();
        let p = correlation_profile(&m, &target, 2.0 * eps.sqrt(), Search::Exhaustive).unwrap();
        let small = correlation_profile(&m, &target, eps.sqrt() / 4.0, Search::Exhaustive).unwrap();
        assert!(p.exceeders <= small.exceeders);
        worst = worst.max(small.exceeders);
    }
    assert!(worst as f64 <= 1.0 / eps, "{worst}");
}

#[test]
fn b_with_single_bit_blocks_reads_the_address_directly() {
    // k = n: every block is one bit, so z = a
    let b = BFunction::new(4, 4).unwrap();
    let m = b.matrix();
    for x in 0u64..16 {
        for a in 0u64..16 {
            let xb: Vec<bool> = (0..4).map(|j| (x >> j) & 1 == 1).collect();
            let ab: Vec<bool> = (0..4).map(|j| (a >> j) & 1 == 1).collect();
            let row = ab.iter().fold(0u64, |acc, &bit| 2 * acc + u64::from(bit));
            let expected = (m.row(row)[0] & x).count_ones() % 2 == 1;
            assert_eq!(b.eval(&xb, &ab).unwrap(), expected);
        }
    }
}

#[test]
fn b_rejects_bad_parameters() {
    assert!(BFunction::new(8, 3).is_err());
    assert!(BFunction::new(6, 3).is_err());
    assert!(BFunction::new(8, 0).is_err());
}

proptest! {
    #[test]
    fn f_is_linear_in_the_message(z in 0u32..256, x in 0u64..256, y in 0u64..256) {
        let m = build_biased_matrix(8, 4).unwrap();
        let bits = |v: u64, n: usize| -> Vec<bool> { (0..n).map(|j| (v >> j) & 1 == 1).collect() };
        let zb = bits(z as u64, 8);
        let fx = f_eval(&m, &zb, &bits(x, 8)).unwrap();
        let fy = f_eval(&m, &zb, &bits(y, 8)).unwrap();
        prop_assert_eq!(fx ^ fy, f_eval(&m, &zb, &bits(x ^ y, 8)).unwrap());
        prop_assert!(!f_eval(&m, &zb, &bits(0, 8)).unwrap());
    }

    #[test]
    fn flipping_an_address_bit_flips_one_block_parity(a in 0u64..1 << 12, j in 0usize..12) {
        let b = BFunction::new(12, 4).unwrap();
        let ab: Vec<bool> = (0..12).map(|i| (a >> i) & 1 == 1).collect();
        let mut flipped = ab.clone();
        flipped[j] = !flipped[j];
        let z = b.address(&ab);
        let z2 = b.address(&flipped);
        let changed: Vec<usize> = (0..4).filter(|&i| z[i] != z2[i]).collect();
        prop_assert_eq!(changed, vec![j / 3]);
    }

    #[test]
    fn b_is_linear_in_x_for_fixed_a(x in 0u64..256, y in 0u64..256, a in 0u64..256) {
        let bits = |v: u64| -> Vec<bool> { (0..8).map(|j| (v >> j) & 1 == 1).collect() };
        let b = BFunction::new(8, 4).unwrap();
        let ab = bits(a);
        let lhs = b.eval(&bits(x), &ab).unwrap() ^ b.eval(&bits(y), &ab).unwrap();
        prop_assert_eq!(lhs, b.eval(&bits(x ^ y), &ab).unwrap());
        prop_assert!(!b.eval(&bits(0), &ab).unwrap());
    }
}
