//! Distributional checks of the two-stage construction at moderate depth.
//! The acceptance suite in the cli crate runs the full-depth versions.

use dnf_approx::boolfn::random_table;
use dnf_approx::dnf::Term;
use dnf_approx::rng::SplitMix64;
use dnf_approx::universal::{
    balance_ok, special_subcubes, stage1_flip, stage2_cover, DMode, UniversalParams,
};
use dnf_approx::TruthTable;

fn zeros_in_cube(f: &TruthTable, cube: &Term) -> u32 {
    cube.accepted_indices()
        .filter(|&idx| !f.get_index(idx as usize))
        .count() as u32
}

/// Mean observed DNF size over trials against the exact closed form
/// sum over cubes of (eps/2)^(#f-zeros in cube), within 3 standard errors.
#[test]
fn mean_size_matches_closed_form() {
    let n = 10u32;
    let f = random_table(n, 0.5, 2024).unwrap();
    let trials = 1200u64;
    for (cfg, (eps, d)) in [(0.2f64, 1u32), (0.5, 1), (0.2, 2), (0.5, 2)]
        .into_iter()
        .enumerate()
    {
        let cubes = special_subcubes(n, d).unwrap();
        let expected: f64 = cubes
            .iter()
            .map(|c| (eps / 2.0_f64).powi(zeros_in_cube(&f, c) as i32))
            .sum();

        let mut rng = SplitMix64::new(5000 + cfg as u64);
        let mut sizes = Vec::with_capacity(trials as usize);
        for _ in 0..trials {
            let rec = stage1_flip(&f, eps, &mut rng).unwrap();
            sizes.push(stage2_cover(&rec.g, d).unwrap().size() as f64);
        }
        let mean = sizes.iter().sum::<f64>() / trials as f64;
        let var = sizes.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (trials - 1) as f64;
        let sem = (var / trials as f64).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * sem,
            "eps={eps} d={d}: mean={mean} expected={expected} sem={sem}"
        );
    }
}

/// The Markov-style mean-size bound 2 ln(4/eps) 2^(n-d), for balanced f at
/// the parameter points where the take-all-monochromatic inclusion rule
/// stays under it (see the closed form above).
#[test]
fn mean_size_under_eq_bound_where_applicable() {
    let n = 10u32;
    let f = dnf_approx::boolfn::random_balanced_table(n, 2024).unwrap();
    let trials = 800u64;
    for (cfg, (eps, d)) in [(0.2f64, 1u32), (0.2, 2), (0.5, 2)].into_iter().enumerate() {
        assert!(balance_ok(&f, eps));
        let bound = 2.0 * (4.0 / eps).ln() * ((n - d) as f64).exp2();
        let mut rng = SplitMix64::new(7100 + cfg as u64);
        let mut sizes = Vec::with_capacity(trials as usize);
        for _ in 0..trials {
            let rec = stage1_flip(&f, eps, &mut rng).unwrap();
            sizes.push(stage2_cover(&rec.g, d).unwrap().size() as f64);
        }
        let mean = sizes.iter().sum::<f64>() / trials as f64;
        let var = sizes.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (trials - 1) as f64;
        let sem = (var / trials as f64).sqrt();
        assert!(
            mean <= bound + 3.0 * sem,
            "eps={eps} d={d}: mean={mean} bound={bound}"
        );
    }
}

/// Fraction of trials with size >= 4 ln(4/eps) 2^(n-d) stays at or below
/// 1/2 plus 3 sigma. Run at n=16, d=2, eps=0.2 over 200 trials.
#[test]
fn size_quantile_bound_n16() {
    let n = 16u32;
    let d = 2u32;
    let eps = 0.2f64;
    let f = random_table(n, 0.5, 99).unwrap();
    let bound = 4.0 * (4.0 / eps).ln() * ((n - d) as f64).exp2();
    let trials = 200u64;
    let mut rng = SplitMix64::new(808);
    let mut over = 0u64;
    for _ in 0..trials {
        let rec = stage1_flip(&f, eps, &mut rng).unwrap();
        let size = stage2_cover(&rec.g, d).unwrap().size() as f64;
        over += u64::from(size >= bound);
    }
    let frac = over as f64 / trials as f64;
    let sigma = (0.5 * 0.5 / trials as f64).sqrt();
    assert!(frac <= 0.5 + 3.0 * sigma, "frac={frac}");
}

/// Per-cube inclusion frequency against (eps/2)^(#f-zeros), compact version.
#[test]
fn per_cube_inclusion_frequency() {
    let n = 9u32;
    let d = 1u32;
    let eps = 0.3f64;
    let f = random_table(n, 0.5, 31415).unwrap();
    let cubes = special_subcubes(n, d).unwrap();
    let trials = 1500u64;

    let mut counts = vec![0u64; cubes.len()];
    let mut rng = SplitMix64::new(161);
    for _ in 0..trials {
        let rec = stage1_flip(&f, eps, &mut rng).unwrap();
        let h = stage2_cover(&rec.g, d).unwrap();
        let mut pos = 0usize;
        // stage2 walks cubes in canonical order, so included terms appear
        // as an ordered subsequence of `cubes`.
        for term in h.terms() {
            while cubes[pos] != *term {
                pos += 1;
            }
            counts[pos] += 1;
            pos += 1;
        }
    }

    let mut ok = 0usize;
    for (i, cube) in cubes.iter().enumerate() {
        let p = (eps / 2.0_f64).powi(zeros_in_cube(&f, cube) as i32);
        let observed = counts[i] as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        if (observed - p).abs() <= 3.0 * sigma.max(f64::EPSILON) {
            ok += 1;
        }
    }
    let frac = ok as f64 / cubes.len() as f64;
    assert!(frac >= 0.95, "only {frac} of cubes within 3 sigma");
}

/// End-to-end driver sanity at a representative operating point; the epsilon
/// guarantee itself is asymptotic, so only the structure is asserted.
#[test]
fn driver_reports_consistent_fields() {
    let f = random_table(12, 0.5, 7).unwrap();
    let params = UniversalParams {
        epsilon: 0.2,
        d_mode: DMode::Explicit(2),
        trials: 20,
        master_seed: 7,
    };
    let (report, h) = dnf_approx::universal::universal_approx(&f, &params).unwrap();
    assert_eq!(report.size, h.size());
    assert_eq!(report.width, 10);
    assert_eq!(report.params.d, Some(2));
    assert!((report.error_zero_side + report.error_one_side - report.error).abs() < 1e-15);
    for t in h.terms() {
        assert_eq!(t.width(), 10);
    }
}
