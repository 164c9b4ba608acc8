use std::time::Duration;

use closest_string::exact::{branch_and_bound, brute_force_center, search_space};
use closest_string::instances::{generate_uniform, GeneratorConfig};
use closest_string::rounding::{algorithm_a, algorithm_b, algorithm_c};
use closest_string::{Alphabet, Instance};
use proptest::prelude::*;

fn random(m: usize, n: usize, symbols: &str, seed: u64) -> Instance {
    generate_uniform(&GeneratorConfig {
        m,
        n,
        alphabet: Alphabet::parse(symbols).unwrap(),
        seed,
    })
    .unwrap()
}

#[test]
fn seeded_instance_is_pinned() {
    // Optimum 5 was computed by a separate exhaustive search over all 4^8 centers.
    let inst = random(5, 8, "ACGT", 7);
    let rows: Vec<String> = inst.strings().iter().map(|s| s.iter().collect()).collect();
    assert_eq!(rows, ["GCATCGCG", "CACTAACA", "GCGAGTTT", "AGTACTGC", "ACTGCTCG"]);
    assert_eq!(brute_force_center(&inst, 1 << 20).unwrap().optimum, 5);

    let c = algorithm_c(&inst, 0.9, 8).unwrap();
    assert!(c.center.objective <= 5 + 1);
    assert!(c.center.objective >= 5);
}

#[test]
fn bnb_agrees_with_enumeration_on_seeded_binary() {
    for seed in 0..20 {
        let inst = random(4, 10, "01", seed);
        let exact = brute_force_center(&inst, 1 << 20).unwrap();
        let bnb = branch_and_bound(&inst, Duration::from_secs(10));
        assert!(bnb.certified);
        assert_eq!(bnb.optimum, exact.optimum, "seed {seed}");
    }
}

#[test]
fn identical_strings_everywhere() {
    let inst = Instance::from_strs(&["ACGTTA"; 4]).unwrap();
    for r in [
        algorithm_a(&inst).unwrap(),
        algorithm_b(&inst, 0.9).unwrap(),
        algorithm_c(&inst, 0.9, 8).unwrap(),
    ] {
        assert_eq!(r.center.objective, 0);
        assert!(r.exact_certified);
    }
    assert_eq!(brute_force_center(&inst, 10).unwrap().optimum, 0);
}

#[test]
fn c_restarts_when_not_certified() {
    // Find a seeded instance where B misses the LP ceiling and check C's bookkeeping.
    let mut seen = 0;
    for seed in 0..400 {
        let inst = random(6, 12, "ACGT", seed);
        let b = algorithm_b(&inst, 0.9).unwrap();
        if b.exact_certified || b.trace.second.is_empty() {
            continue;
        }
        let c = algorithm_c(&inst, 0.9, 8).unwrap();
        assert_eq!(c.runs, 1 + b.trace.second.len().min(8));
        assert!(c.center.objective <= b.center.objective);
        seen += 1;
    }
    assert!(seen > 0, "no uncertified instance found");
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (1usize..6, 1usize..9, prop_oneof![Just("01"), Just("ACGT")]).prop_flat_map(|(m, n, sigma)| {
        let k = sigma.len();
        proptest::collection::vec(proptest::collection::vec(0..k, n), m).prop_map(move |rows| {
            Instance::from_codes(Alphabet::parse(sigma).unwrap(), rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lower_bound_sandwich(inst in small_instance()) {
        let exact = brute_force_center(&inst, 1 << 20).unwrap();
        for r in [algorithm_a(&inst).unwrap(), algorithm_b(&inst, 0.9).unwrap(), algorithm_c(&inst, 0.9, 8).unwrap()] {
            prop_assert!(r.lp_bound <= exact.optimum);
            prop_assert!(exact.optimum <= r.center.objective);
            if r.exact_certified {
                prop_assert_eq!(r.center.objective, exact.optimum);
            }
        }
    }

    #[test]
    fn runs_fix_every_position_once(inst in small_instance(), theta in 0.55f64..=1.0) {
        let a = algorithm_a(&inst).unwrap();
        prop_assert_eq!(a.lp_solves, inst.n());
        let b = algorithm_b(&inst, theta).unwrap();
        prop_assert!(b.lp_solves >= 1 && b.lp_solves <= inst.n());
        let c = algorithm_c(&inst, theta, 8).unwrap();
        prop_assert!(c.center.objective <= b.center.objective);
        for r in [&a, &b, &c] {
            prop_assert_eq!(r.center.chars.len(), inst.n());
            let mut count = vec![0; inst.n()];
            if let Some((j, _)) = r.trace.seed_fix {
                count[j] += 1;
            }
            for fix in r.trace.iterations.iter().flat_map(|it| &it.fixes) {
                count[fix.position] += 1;
            }
            prop_assert!(count.iter().all(|&c| c == 1));
            for (k, &v) in &r.trace.first {
                let fix = r.trace.iterations.iter().flat_map(|it| &it.fixes).find(|f| f.position == *k).unwrap();
                prop_assert_eq!(fix.value, v);
                if let Some(&s) = r.trace.second.get(k) {
                    prop_assert_ne!(s, fix.symbol);
                }
            }
        }
    }

    #[test]
    fn bnb_matches_enumeration(inst in small_instance()) {
        prop_assume!(search_space(&inst) <= 1 << 16);
        let exact = brute_force_center(&inst, 1 << 16).unwrap();
        let bnb = branch_and_bound(&inst, Duration::from_secs(10));
        prop_assert!(bnb.certified);
        prop_assert_eq!(bnb.optimum, exact.optimum);
    }
}
