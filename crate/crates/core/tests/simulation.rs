use trustfusion::baselines::{oblivious_decide, oracle_decide, ReputationState};
use trustfusion::sim::{rng::stream, run_experiment, sample_trial, sweep_malicious_proportion, Method, ScenarioConfig};
use trustfusion::two_stage::{two_stage_decide, worst_case_error_at, TwoStageThresholds};
use trustfusion::{AttackModel, Hypothesis, SensorModel, TrustModel};

fn scenario(n: usize, m: usize, attack: AttackModel<f64>, seed: u64) -> ScenarioConfig<f64> {
    ScenarioConfig::new(
        n,
        m,
        SensorModel::new(0.12, 0.2, 0.6, 0.4).unwrap(),
        TrustModel::new(vec![0.1, 0.25, 0.65], vec![0.5, 0.35, 0.15]).unwrap(),
        attack,
        seed,
    )
    .unwrap()
}

/// |observed - expected| within `k` binomial standard deviations.
fn within(hits: u64, trials: u64, p: f64, k: f64) -> bool {
    let sd = (trials as f64 * p * (1.0 - p)).sqrt().max(1e-12);
    (hits as f64 - trials as f64 * p).abs() <= k * sd
}

#[test]
fn sampled_frequencies_match_the_configuration() {
    let attack = AttackModel::new(0.7, 0.1, 0.3).unwrap();
    let cfg = scenario(8, 3, attack, 101);
    let trials = 100_000u64;
    let mut events = 0u64;
    // [legit/malicious][hypothesis] -> (ones, reports)
    let mut reports = [[(0u64, 0u64); 2]; 2];
    let mut symbols = [[0u64; 3]; 2];
    for k in 0..trials {
        let obs = sample_trial(&cfg, k);
        events += obs.truth_event.bit() as u64;
        assert_eq!(obs.malicious_count(), 3);
        for i in 0..cfg.n {
            let class = (!obs.truth_t[i]) as usize;
            let slot = &mut reports[class][obs.truth_event.bit() as usize];
            slot.0 += obs.y[i] as u64;
            slot.1 += 1;
            symbols[class][obs.a[i]] += 1;
        }
    }
    // loose enough that a fixed seed is not a coin flip, tight enough to catch a swapped rate
    let k = 4.0;
    assert!(within(events, trials, cfg.sensor.prior_h1(), k));
    for h in [Hypothesis::H0, Hypothesis::H1] {
        let (ones, n) = reports[0][h.bit() as usize];
        assert!(within(ones, n, cfg.sensor.p_report_one(h), k), "legit under {h}");
        let (ones, n) = reports[1][h.bit() as usize];
        assert!(within(ones, n, attack.p_report_one(h), k), "malicious under {h}");
    }
    for (class, pmf) in [cfg.trust.pmf_legit(), cfg.trust.pmf_malicious()].into_iter().enumerate() {
        let total: u64 = symbols[class].iter().sum();
        // chi-square with 2 degrees of freedom; 13.8 is the 0.001 critical value
        let chi2: f64 = symbols[class]
            .iter()
            .zip(pmf)
            .map(|(&o, &p)| {
                let e = total as f64 * p;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        assert!(chi2 < 13.8, "trust symbols of class {class}: chi2 {chi2}");
    }
}

#[test]
fn full_flip_without_sensing_errors_always_lies() {
    let cfg = scenario(6, 4, AttackModel::worst_case(), 5);
    for k in 0..2000 {
        let obs = sample_trial(&cfg, k);
        for i in 0..cfg.n {
            if !obs.truth_t[i] {
                assert_eq!(obs.y[i], !obs.truth_event.bit());
            }
        }
    }
}

#[test]
fn trials_are_reproducible_and_placement_is_persistent() {
    let cfg = scenario(9, 4, AttackModel::new(0.99, 0.0, 0.0).unwrap(), 77);
    let first = sample_trial(&cfg, 12);
    assert_eq!(first, sample_trial(&cfg, 12));
    assert_eq!(sample_trial(&cfg, 3).truth_t, first.truth_t);
    let other = ScenarioConfig { seed: 78, ..cfg.clone() };
    assert_ne!(sample_trial(&other, 12), first);
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let cfg = scenario(9, 4, AttackModel::new(0.99, 0.0, 0.0).unwrap(), 2024);
    let methods = [
        Method::Oracle,
        Method::Oblivious,
        Method::TwoStage { m_bar: None },
        Method::Aglrt,
        Method::AglrtWithPrior { p_legit: None },
        Method::AglrtConstrained { m_bar: None },
        Method::baseline1(),
        Method::baseline5(),
    ];
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&cfg, 3000, &methods).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn oracle_error_matches_the_analytic_value() {
    let cfg = scenario(7, 2, AttackModel::new(0.99, 0.0, 0.0).unwrap(), 9);
    let report = run_experiment(&cfg, 100_000, &[Method::Oracle]).unwrap();
    let r = report.get("oracle").unwrap();
    let analytic = worst_case_error_at(1.0, 0.0, 5, 2, &cfg.sensor);
    assert!((r.error_rate() - analytic).abs() <= 3.0 * r.ci_halfwidth(), "{} vs {analytic}", r.error_rate());
}

#[test]
fn oblivious_equals_two_stage_that_trusts_everyone() {
    let cfg = scenario(8, 3, AttackModel::new(0.8, 0.1, 0.1).unwrap(), 4);
    let thr = TwoStageThresholds::trust_everyone(&cfg.trust);
    let mut tie_rng = stream(4, 0, 99);
    for k in 0..3000 {
        let obs = sample_trial(&cfg, k);
        let a = two_stage_decide(&obs.y, &obs.a, &thr, &cfg.sensor, &cfg.trust, &mut tie_rng).unwrap();
        assert_eq!(a.hypothesis, oblivious_decide(&obs.y, &cfg.sensor).unwrap().hypothesis);
    }
}

#[test]
fn oracle_is_a_lower_bound_in_paired_trials() {
    let cfg = scenario(10, 4, AttackModel::new(0.99, 0.0, 0.0).unwrap(), 31);
    let methods = [Method::Oracle, Method::Oblivious, Method::TwoStage { m_bar: None }, Method::Aglrt];
    let report = run_experiment(&cfg, 20_000, &methods).unwrap();
    let oracle = report.get("oracle").unwrap();
    for m in &report.methods[1..] {
        let slack = 3.0 * (oracle.ci_halfwidth().powi(2) + m.ci_halfwidth().powi(2)).sqrt();
        assert!(oracle.error_rate() <= m.error_rate() + slack, "{}", m.method);
    }
}

#[test]
fn reputation_with_long_memory_excludes_persistent_liars() {
    let cfg = ScenarioConfig::new(
        10,
        2,
        SensorModel::new(0.15, 0.15, 0.5, 0.5).unwrap(),
        TrustModel::bernoulli(0.8, 0.2).unwrap(),
        AttackModel::new(0.99, 0.0, 0.0).unwrap(),
        8,
    )
    .unwrap();
    let mut state = ReputationState::new(cfg.n, 50, 25.0).unwrap();
    let (mut settled, mut agree) = (0u32, 0u32);
    for k in 0..3000 {
        let obs = sample_trial(&cfg, k);
        state.decide(&obs.y, &cfg.sensor).unwrap();
        if k >= 300 {
            settled += 1;
            agree += (state.admitted() == obs.truth_t) as u32;
        }
    }
    assert!(agree as f64 / settled as f64 >= 0.99, "{agree}/{settled}");
}

#[test]
fn all_malicious_network_leaves_two_stage_at_the_prior_floor() {
    let base = ScenarioConfig::new(
        10,
        0,
        SensorModel::new(0.15, 0.15, 0.5, 0.5).unwrap(),
        TrustModel::bernoulli(0.8, 0.2).unwrap(),
        AttackModel::new(0.99, 0.0, 0.0).unwrap(),
        3,
    )
    .unwrap();
    let out = sweep_malicious_proportion(&base, &[1.0], 10_000, &[Method::TwoStage { m_bar: None }]).unwrap();
    let r = out[0].1.get("two_stage").unwrap();
    assert!(r.error_rate() <= 0.5 + 2.0 * r.ci_halfwidth());
}

#[test]
fn oracle_with_everyone_malicious_decides_by_priors() {
    let cfg = scenario(5, 5, AttackModel::new(0.99, 0.0, 0.0).unwrap(), 1);
    for k in 0..200 {
        let obs = sample_trial(&cfg, k);
        let d = oracle_decide(&obs, &cfg.sensor).unwrap();
        assert_eq!(d.hypothesis, Hypothesis::H0);
    }
}
