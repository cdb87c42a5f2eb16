mod common;

use addhaz::data::validate_dataset;
use addhaz::lin_ying::{compute_statistics, ly_estimate, ly_solve};
use addhaz::simulate::{generate_dataset, SimConfig};
use proptest::prelude::*;

fn rows_strategy(k: usize) -> impl Strategy<Value = Vec<(f64, bool, Vec<f64>)>> {
    prop::collection::vec(
        (
            // coarse times so that ties are common
            (1u32..40).prop_map(|t| f64::from(t) * 0.25),
            prop::bool::weighted(0.7),
            prop::collection::vec(0.0f64..5.0, k),
        ),
        3..40,
    )
    .prop_filter("needs an event", |rows| rows.iter().any(|r| r.1))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn statistics_match_brute_force(rows in rows_strategy(2)) {
        let ds = validate_dataset(rows.clone()).unwrap();
        let s = compute_statistics(&ds);
        let (v1, v2, v3) = common::brute_force_statistics(&rows);
        for a in 0..2 {
            prop_assert!(close(s.v1[a], v1[a], 1e-12), "v1 {} vs {}", s.v1[a], v1[a]);
            for b in 0..2 {
                prop_assert!(close(s.v2[(a, b)], v2[a * 2 + b], 1e-12));
                prop_assert!(close(s.v3[(a, b)], v3[a * 2 + b], 1e-12));
            }
        }
    }

    #[test]
    fn permutation_invariance(rows in rows_strategy(1), seed in any::<u64>()) {
        let mut shuffled = rows.clone();
        // deterministic Fisher–Yates driven by the seed
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let a = compute_statistics(&validate_dataset(rows).unwrap());
        let b = compute_statistics(&validate_dataset(shuffled).unwrap());
        prop_assert!((a.v1 - b.v1).amax() < 1e-12);
        prop_assert!((a.v2 - b.v2).amax() < 1e-12);
        prop_assert!((a.v3 - b.v3).amax() < 1e-12);
    }

    #[test]
    fn covariate_scaling(rows in rows_strategy(1), scale in 0.1f64..10.0) {
        let scaled: Vec<_> = rows.iter().map(|(t, e, z)| (*t, *e, vec![z[0] * scale])).collect();
        let a = compute_statistics(&validate_dataset(rows).unwrap());
        let b = compute_statistics(&validate_dataset(scaled).unwrap());
        prop_assert!(close(b.v1[0], scale * a.v1[0], 1e-10));
        prop_assert!(close(b.v2[(0, 0)], scale * scale * a.v2[(0, 0)], 1e-10));
        prop_assert!(close(b.v3[(0, 0)], scale * scale * a.v3[(0, 0)], 1e-10));
        if let (Ok(ea), Ok(eb)) = (ly_solve(&a), ly_solve(&b)) {
            prop_assert!(close(eb.m[0] * scale, ea.m[0], 1e-8));
        }
    }

    #[test]
    fn time_scaling(rows in rows_strategy(1), scale in 0.1f64..10.0) {
        // hazards scale by 1/scale, so β does too
        let scaled: Vec<_> = rows.iter().map(|(t, e, z)| (*t * scale, *e, z.clone())).collect();
        let a = compute_statistics(&validate_dataset(rows).unwrap());
        let b = compute_statistics(&validate_dataset(scaled).unwrap());
        prop_assert!(close(b.v1[0], a.v1[0], 1e-10));
        prop_assert!(close(b.v2[(0, 0)], scale * a.v2[(0, 0)], 1e-10));
        if let (Ok(ea), Ok(eb)) = (ly_solve(&a), ly_solve(&b)) {
            prop_assert!(close(eb.m[0] * scale, ea.m[0], 1e-8));
        }
    }

    #[test]
    fn estimating_equation_vanishes_at_root(rows in rows_strategy(2)) {
        let s = compute_statistics(&validate_dataset(rows).unwrap());
        if let Ok(e) = ly_solve(&s) {
            let u = &s.v1 - &s.v2 * &e.m;
            prop_assert!(u.amax() <= 1e-9 * (1.0 + s.v1.amax()));
            // sandwich covariance is symmetric positive semidefinite
            prop_assert!((&e.d - e.d.transpose()).amax() < 1e-12 * (1.0 + e.d.amax()));
            prop_assert!(e.d.clone().symmetric_eigen().eigenvalues.min() > -1e-10 * (1.0 + e.d.amax()));
        }
    }

    #[test]
    fn v2_positive_semidefinite(rows in rows_strategy(3)) {
        let s = compute_statistics(&validate_dataset(rows).unwrap());
        let min = s.v2.clone().symmetric_eigen().eigenvalues.min();
        prop_assert!(min >= -1e-12 * (1.0 + s.v2.amax()));
    }
}

#[test]
fn recovers_true_beta_on_a_large_sample() {
    let mut cfg = SimConfig::reference(20_000, 99);
    cfg.beta_true = vec![0.5];
    let ds = generate_dataset(&cfg, 0).unwrap();
    let e = ly_estimate(&ds).unwrap();
    let se = e.d[(0, 0)].sqrt();
    assert!((e.m[0] - 0.5).abs() < 4.0 * se, "m = {}, se = {se}", e.m[0]);
}
