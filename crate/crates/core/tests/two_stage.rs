mod common;

use proptest::prelude::*;
use rand::Rng;
use trustfusion::two_stage::{
    error_upper_bound, fc_error_exact, gamma_candidates, m_star_exact, m_star_noiseless_exact, m_star_normal_approx,
    optimize_thresholds, trust_probabilities, worst_case_error, worst_case_error_at, BoundRegion, TwoStageThresholds,
    WorstCaseConfig,
};
use trustfusion::{SensorModel, TrustModel};

#[test]
fn exact_error_matches_outcome_enumeration() {
    let mut r = common::rng(21);
    for _ in 0..60 {
        let sensor = common::random_sensor(&mut r);
        let trust = common::random_trust(&mut r);
        let n = r.random_range(1..=4usize);
        let n_m = r.random_range(0..=n);
        let gammas = gamma_candidates(&trust);
        let gamma_t = gammas[r.random_range(0..gammas.len())];
        let p_t = r.random_range(0.0..1.0);
        let attack = [1.0, 0.0, 0.5, r.random_range(0.0..1.0)][r.random_range(0..4)];
        let thr = TwoStageThresholds::new(gamma_t, p_t).unwrap();
        let (p_l, p_m) = trust_probabilities(&thr, &trust);
        let fast = fc_error_exact(p_l, p_m, n - n_m, n_m, attack, attack, &sensor);
        let slow = common::enumerate_two_stage_error(gamma_t, p_t, n - n_m, n_m, attack, &sensor, &trust);
        assert!((fast - slow).abs() <= 1e-12, "{fast} vs {slow}");
    }
}

#[test]
fn worst_case_attack_maximizes_error() {
    let mut r = common::rng(22);
    let grid = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0];
    for _ in 0..40 {
        let sensor = common::random_sensor(&mut r);
        let n = r.random_range(1..=14usize);
        let n_m = r.random_range(0..=n);
        let (p_l, p_m) = (r.random_range(0.0..1.0), r.random_range(0.0..1.0));
        let top = worst_case_error_at(p_l, p_m, n - n_m, n_m, &sensor);
        for &fa in &grid {
            for &md in &grid {
                assert!(fc_error_exact(p_l, p_m, n - n_m, n_m, fa, md, &sensor) <= top);
            }
        }
    }
}

#[test]
fn more_malicious_robots_never_help() {
    let mut r = common::rng(23);
    for _ in 0..40 {
        let sensor = common::random_sensor(&mut r);
        let n = r.random_range(1..=16usize);
        let (p_l, p_m) = (r.random_range(0.0..1.0), r.random_range(0.0..1.0));
        let errs: Vec<f64> = (0..=n).map(|m| worst_case_error_at(p_l, p_m, n - m, m, &sensor)).collect();
        assert!(errs.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{errs:?}");
    }
}

#[test]
fn no_threshold_between_ratios_beats_the_optimum() {
    let mut r = common::rng(24);
    for _ in 0..15 {
        let sensor = common::random_sensor(&mut r);
        let trust = common::random_trust(&mut r);
        let cfg = WorstCaseConfig::with_delta_p(r.random_range(0.0..0.6), r.random_range(2..=12), 0.05).unwrap();
        let best = optimize_thresholds(&cfg, &sensor, &trust);
        let ratios = gamma_candidates(&trust);
        let (lo, hi) = (ratios[0] * 0.5, ratios.last().unwrap() * 2.0);
        for i in 0..=120 {
            let g = lo * (hi / lo).powf(i as f64 / 120.0);
            for k in 0..=20 {
                let p_t = k as f64 / 20.0;
                let e = worst_case_error(g, p_t, &cfg, &sensor, &trust);
                assert!(e >= best.worst_case_error - 1e-12, "gamma {g}, p_t {p_t}: {e} < {}", best.worst_case_error);
            }
        }
    }
}

#[test]
fn optimum_never_exceeds_deciding_by_priors() {
    let mut r = common::rng(25);
    for _ in 0..40 {
        let sensor = common::random_sensor(&mut r);
        let trust = common::random_trust(&mut r);
        let cfg = WorstCaseConfig::new(r.random_range(0.0..1.0), r.random_range(1..=15)).unwrap();
        let thr = optimize_thresholds(&cfg, &sensor, &trust);
        assert!(thr.worst_case_error <= sensor.min_prior() + 1e-15);
        let (p_l, p_m) = trust_probabilities(&thr, &trust);
        let direct = worst_case_error_at(p_l, p_m, cfg.legit_count(), cfg.malicious_count(), &sensor);
        assert!((direct - thr.worst_case_error).abs() < 1e-12);
    }
}

#[test]
fn finer_tie_break_grid_never_hurts() {
    let mut r = common::rng(26);
    for _ in 0..10 {
        let sensor = common::random_sensor(&mut r);
        let trust = common::random_trust(&mut r);
        let m = r.random_range(0.0..0.7);
        let n = r.random_range(2..=20);
        let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.01]
            .iter()
            .map(|&d| {
                let cfg = WorstCaseConfig::with_delta_p(m, n, d).unwrap();
                optimize_thresholds(&cfg, &sensor, &trust).worst_case_error
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
    }
}

struct BoundCase {
    bound: f64,
    exact: f64,
    doubled: Option<f64>,
}

/// Random configuration at which the Chernoff bound is valid. `doubled` is
/// the bound at `2N` when the malicious count doubles exactly, the bound is
/// still valid there, and many more legitimate than malicious robots survive
/// the trust stage (`beta_l |L| >= 4 max(beta_m |M|, 1)`).
fn bound_case<R: Rng>(r: &mut R) -> Option<BoundCase> {
    let sensor = SensorModel::with_prior_h0(r.random_range(0.02..0.2), r.random_range(0.02..0.2), r.random_range(0.3..0.7)).ok()?;
    let trust = TrustModel::bernoulli(r.random_range(0.75..0.98), r.random_range(0.02..0.25)).ok()?;
    let m = r.random_range(0.02..0.35);
    let n = r.random_range(20..=120);
    let cfg = WorstCaseConfig::new(m, n).ok()?;
    let thr = optimize_thresholds(&cfg, &sensor, &trust);
    let (p_l, p_m) = trust_probabilities(&thr, &trust);
    let region = BoundRegion::midpoint(p_l, p_m).ok()?;
    let bound = error_upper_bound(&thr, &cfg, &region, &sensor, &trust).ok()?;
    let exact = worst_case_error(thr.gamma_t, thr.p_t, &cfg, &sensor, &trust);
    let twice = WorstCaseConfig::new(m, 2 * n).ok()?;
    let separated = region.beta_l * cfg.legit_count() as f64
        >= 4.0 * (region.beta_m * cfg.malicious_count() as f64).max(1.0);
    let doubled = if twice.malicious_count() == 2 * cfg.malicious_count() && separated {
        error_upper_bound(&thr, &twice, &region, &sensor, &trust).ok()
    } else {
        None
    };
    Some(BoundCase { bound, exact, doubled })
}

#[test]
fn bound_dominates_exact_error_and_decays() {
    let mut r = common::rng(27);
    let (mut valid, mut decay_checks, mut tries) = (0, 0, 0);
    while valid < 40 || decay_checks < 15 {
        tries += 1;
        assert!(tries < 20_000, "too few valid configurations");
        let Some(c) = bound_case(&mut r) else { continue };
        valid += 1;
        assert!(c.bound >= c.exact, "bound {} < exact {}", c.bound, c.exact);
        if let Some(b2) = c.doubled {
            decay_checks += 1;
            assert!(b2 < c.bound, "bound did not decay: {b2} >= {}", c.bound);
        }
    }
}

#[test]
fn m_star_normal_approximation_tracks_exact_value() {
    for i in 1..=9 {
        let pl = i as f64 / 10.0;
        let exact = m_star_noiseless_exact(pl, 1.0 - pl, 50, 0.5, 0.5);
        let approx = m_star_normal_approx(pl, 1.0 - pl, 50, 0.5, 0.5, 0.01);
        assert!((exact - approx).abs() <= 0.06, "p_trust_l {pl}: exact {exact}, approx {approx}");
    }
}

#[test]
fn m_star_of_numerical_study_is_about_point_eight() {
    let sensor = SensorModel::new(0.15, 0.15, 0.5, 0.5).unwrap();
    let trust = TrustModel::bernoulli(0.8, 0.2).unwrap();
    let m: f64 = m_star_exact(10, &sensor, &trust, 0.1, 0.01).unwrap();
    assert!((m - 0.8).abs() < 1e-12, "{m}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn error_is_a_probability_bounded_by_one_sided_decisions(
        fa in 0.01f64..0.49, md in 0.01f64..0.49, h0 in 0.05f64..0.95,
        p_l in 0.0f64..=1.0, p_m in 0.0f64..=1.0, n_l in 0usize..12, n_m in 0usize..12,
        afa in 0.0f64..=1.0, amd in 0.0f64..=1.0,
    ) {
        let sensor = SensorModel::with_prior_h0(fa, md, h0).unwrap();
        let e = fc_error_exact(p_l, p_m, n_l, n_m, afa, amd, &sensor);
        prop_assert!((0.0..=1.0).contains(&e));
        // trusting nobody decides by the priors
        let none = fc_error_exact(0.0, 0.0, n_l, n_m, afa, amd, &sensor);
        prop_assert!((none - sensor.min_prior()).abs() < 1e-12);
    }
}
