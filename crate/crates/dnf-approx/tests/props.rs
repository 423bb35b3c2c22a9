//! Property tests: format round-trips, metric laws, evaluation equivalence.

use proptest::prelude::*;

use dnf_approx::boolfn::{random_table, TruthTable};
use dnf_approx::dnf::{closeness, Dnf};
use dnf_approx::oracle::{random_dnf, slow_eval};
use dnf_approx::rng::SplitMix64;
use dnf_approx::BitString;

proptest! {
    #[test]
    fn truth_table_file_round_trip(n in 1u32..=9, seed in any::<u64>(), q in 0.0f64..=1.0) {
        let t = random_table(n, q, seed).unwrap();
        let s = t.to_file_string();
        prop_assert_eq!(TruthTable::from_file_str(&s).unwrap(), t);
        // Header digit count contract.
        let hex = s.lines().nth(1).unwrap();
        prop_assert_eq!(hex.len(), (1usize << n).div_ceil(4));
    }

    #[test]
    fn dnf_file_round_trip(n in 1u32..=10, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let d = random_dnf(n, 12, &mut rng);
        prop_assert_eq!(Dnf::from_file_str(&d.to_file_string()).unwrap(), d);
    }

    #[test]
    fn idx_round_trip(n in 1u32..=14, raw in any::<u32>()) {
        let idx = (raw % (1u32 << n)) as usize;
        let x = BitString::from_index(n, idx).unwrap();
        prop_assert_eq!(x.index(), idx);
        prop_assert_eq!(BitString::from_pattern(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn closeness_is_a_scaled_metric(n in 2u32..=8, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let a = random_table(n, 0.5, s1).unwrap();
        let b = random_table(n, 0.3, s2).unwrap();
        let c = random_table(n, 0.7, s3).unwrap();
        let ab = closeness(&a, &b).unwrap();
        let ba = closeness(&b, &a).unwrap();
        let ac = closeness(&a, &c).unwrap();
        let cb = closeness(&c, &b).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(closeness(&a, &a).unwrap(), 0.0);
        prop_assert!((ab == 0.0) == (a == b));
        prop_assert!(ab <= ac + cb + 1e-15);
    }

    #[test]
    fn evaluation_routes_agree(n in 2u32..=10, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let d = random_dnf(n, 10, &mut rng);
        let table = d.to_table().unwrap();
        // Spot-check a sample of points through all three routes.
        for _ in 0..64 {
            let idx = rng.next_below(1u64 << n) as usize;
            let x = BitString::from_index(n, idx).unwrap();
            let fast = d.eval(&x).unwrap();
            prop_assert_eq!(fast, table.get_index(idx));
            prop_assert_eq!(fast, slow_eval(&d, &x).unwrap());
        }
    }
}
