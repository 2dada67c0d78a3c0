mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rarenet_core::netlist::{parse_bench, parse_expr, write_bench, TestVector};
use rarenet_core::optimizer::{optimize_area, prime_implicants, qm_minimize, OptimizeSettings, TruthTable};
use rarenet_core::evaluator::trojan_coverage;
use rarenet_core::netlist::random_vectors;
use rarenet_core::testgen::TestSet;
use rarenet_core::trojan::{inject, TrojanBundle};
use rarenet_core::rareness::{exact_probabilities, propagate_itm_uniform, truncate, RarenessReport, TopN};

fn table(width: usize, bits: u64) -> TruthTable {
    let inputs = (0..width).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
    TruthTable::new(inputs, (0..1usize << width).map(|m| bits >> m & 1 == 1).collect()).unwrap()
}

proptest! {
    #[test]
    fn minimized_cover_implements_the_table(width in 1usize..=6, bits in any::<u64>()) {
        let tt = table(width, bits);
        let cover = qm_minimize(&tt);
        prop_assert!(cover.implements(&tt));
        let on = tt.on_set();
        let primes = prime_implicants(width, &on);
        for cube in &cover.cubes {
            prop_assert!(primes.contains(cube));
        }
    }

    #[test]
    fn primes_cover_only_on_set(width in 1usize..=5, bits in any::<u32>()) {
        let tt = table(width, bits as u64);
        let on = tt.on_set();
        for p in prime_implicants(width, &on) {
            for m in 0..1u32 << width {
                prop_assert!(!p.covers(m) || tt.bits()[m as usize]);
            }
        }
    }

    #[test]
    fn optimized_expression_is_equivalent(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let ast = common::random_ast(&mut rng, 5, 3);
        let n = parse_expr("X", &ast.render()).unwrap();
        let (opt, stats) = optimize_area(&n, &OptimizeSettings::default()).unwrap();
        prop_assert!(opt.gate_count() <= n.gate_count());
        prop_assert_eq!(stats.area_before, n.gate_count());
        let w = n.inputs().len();
        for code in 0..1u64 << w {
            let v = TestVector::from_index(code, w);
            prop_assert_eq!(opt.evaluate_outputs(&v).unwrap(), n.evaluate_outputs(&v).unwrap());
        }
    }

    #[test]
    fn probabilities_are_normalized(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, 6, 20);
        for (itm, exact) in propagate_itm_uniform(&c).iter().zip(exact_probabilities(&c).unwrap()) {
            prop_assert!((itm.p0() + itm.p1() - 1.0).abs() < 1e-12);
            prop_assert!((0.0..=0.5).contains(&itm.rareness()));
            prop_assert!((0.0..=0.5).contains(&exact.rareness()));
        }
    }

    #[test]
    fn metric_ordering(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, 8, 25);
        let r = RarenessReport::exact(&c).unwrap();
        let omega = r.rarest().unwrap();
        let top = r.avg_rareness(TopN::N(3)).unwrap();
        let all = r.avg_rareness(TopN::All).unwrap();
        prop_assert!(omega <= top + 1e-12 && top <= all + 1e-12);
        prop_assert!(r.count_below(0.2, true) <= r.count_below(0.2, false));
    }

    #[test]
    fn bench_roundtrip(seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, 5, 15);
        let back = parse_bench(&write_bench(&c)).unwrap();
        let w = c.inputs().len();
        prop_assert_eq!(back.gate_count(), c.gate_count());
        for code in 0..1u64 << w {
            let v = TestVector::from_index(code, w);
            prop_assert_eq!(back.evaluate_outputs(&v).unwrap(), c.evaluate_outputs(&v).unwrap());
        }
    }

    #[test]
    fn coverage_is_monotone(seed in any::<u64>(), split in 0usize..64) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, 8, 30);
        let report = RarenessReport::itm(&c);
        let Ok(trojans) = inject(&c, &report, 0.3, 2, 6, seed) else { return Ok(()) };
        let bundle = TrojanBundle { golden: c.clone(), trojans };
        let vectors = random_vectors(8, 64, seed ^ 1);
        let small = TestSet { vectors: vectors[..split].to_vec(), ..Default::default() };
        let big = TestSet { vectors, ..Default::default() };
        let (a, b) = (trojan_coverage(&small, &bundle).unwrap(), trojan_coverage(&big, &bundle).unwrap());
        prop_assert!(a.coverage <= b.coverage);
        for (x, y) in a.per_trojan.iter().zip(&b.per_trojan) {
            prop_assert!(!x || *y);
        }
    }

    #[test]
    fn truncation_never_rounds_up(x in -10.0f64..10.0, d in 0u32..6) {
        let t = truncate(x, d);
        prop_assert!(t.abs() <= x.abs() + 1e-12);
        prop_assert!((x - t).abs() < 10f64.powi(-(d as i32)) + 1e-12);
    }
}
