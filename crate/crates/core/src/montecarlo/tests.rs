use super::*;
use crate::exact_tails::tail_bracket;
use crate::kernels::expected_real_eigenvalues;

fn cfg(trials: u64, seed: u64, workers: usize) -> McConfig {
    McConfig::new(trials, seed, workers)
}

#[test]
fn run_trials_keeps_order_and_first_error() {
    let v = run_trials(100, 3, |i| Ok(i * 2)).unwrap();
    assert_eq!(v, (0..100).map(|i| i * 2).collect::<Vec<_>>());
    let e = run_trials(100, 4, |i| {
        if i % 30 == 17 {
            Err(Error::invalid(format!("trial {i}")))
        } else {
            Ok(i)
        }
    })
    .unwrap_err();
    assert!(e.to_string().contains("trial 17"), "{e}");
}

#[test]
fn worker_count_does_not_change_results() {
    let q = TailQuery::new(Beta::Complex, Statistic::Radius, 20, 1.05).unwrap();
    let a = estimate_tail(&q, &cfg(3000, 7, 1), Route::Kostlan).unwrap();
    let b = estimate_tail(&q, &cfg(3000, 7, 4), Route::Kostlan).unwrap();
    assert_eq!(a, b);
    let s1 = saturn_counts(30, 1.1, &cfg(40, 3, 1)).unwrap();
    let s3 = saturn_counts(30, 1.1, &cfg(40, 3, 3)).unwrap();
    assert_eq!(s1, s3);
}

#[test]
fn exponential_case_is_covered() {
    let q = TailQuery::new(Beta::Complex, Statistic::Radius, 1, 1.0).unwrap();
    let e = estimate_tail(&q, &cfg(20_000, 11, 0), Route::Kostlan).unwrap();
    assert!(e.covers((-1f64).exp()), "{e:?}");
    assert_eq!(e.method, CiMethod::Normal);
}

#[test]
fn kostlan_route_needs_complex_radius() {
    let q = TailQuery::new(Beta::Real, Statistic::Radius, 10, 1.1).unwrap();
    assert!(matches!(
        estimate_tail(&q, &cfg(10, 0, 1), Route::Kostlan),
        Err(Error::InvalidArgument(_))
    ));
    let q = TailQuery::new(Beta::Complex, Statistic::Rightmost, 10, 1.1).unwrap();
    assert!(estimate_tail(&q, &cfg(10, 0, 1), Route::Kostlan).is_err());
    assert!(estimate_tail(&q, &cfg(0, 0, 1), Route::Matrix).is_err());
}

#[test]
fn confidence_interval_coverage() {
    let truth = kostlan_radius_tail(20, 1.1).unwrap().value.p();
    let q = TailQuery::new(Beta::Complex, Statistic::Radius, 20, 1.1).unwrap();
    let covered = (0..200u64)
        .filter(|&rep| {
            let e = estimate_tail(&q, &cfg(400, 1000 + rep, 0), Route::Kostlan).unwrap();
            e.covers(truth)
        })
        .count();
    assert!(covered >= 180, "covered {covered}/200");
}

#[test]
fn matrix_and_kostlan_routes_agree() {
    let q = TailQuery::new(Beta::Complex, Statistic::Radius, 20, 1.1).unwrap();
    let truth = kostlan_radius_tail(20, 1.1).unwrap().value.p();
    let e = estimate_tail(&q, &cfg(3000, 5, 0), Route::Matrix).unwrap();
    assert!((e.p_hat - truth).abs() <= 4.0 * e.se(), "{e:?} vs {truth}");
}

#[test]
fn real_max_estimate_within_bracket() {
    let q = TailQuery::new(Beta::Real, Statistic::RealMax, 40, 1.1).unwrap();
    let b = tail_bracket(&q).unwrap();
    let e = estimate_tail(&q, &cfg(3000, 9, 0), Route::Matrix).unwrap();
    let (lo, hi) = (b.lower.p(), b.upper.p());
    assert!(
        e.p_hat >= lo - 4.0 * e.se() && e.p_hat <= hi + 4.0 * e.se(),
        "{e:?} vs [{lo}, {hi}]"
    );
}

#[test]
fn ldp_exact_gap_shrinks_inside_envelope() {
    let rows = ldp_curve(
        Beta::Complex,
        Statistic::Radius,
        1.3,
        &[100, 200, 400, 800],
        None,
    )
    .unwrap();
    assert_eq!(rows.len(), 4);
    for w in rows.windows(2) {
        assert!(w[1].gap.unwrap() < w[0].gap.unwrap());
    }
    assert!(rows
        .iter()
        .all(|r| r.envelope_ok == Some(true) && r.route == Route::Exact));
    let t1 = ldp_curve(Beta::Complex, Statistic::Radius, 1.0, &[100, 400], None).unwrap();
    for r in &t1 {
        assert_eq!(r.rate_target, 0.0);
        assert!(r.minus_log_p_over_n.unwrap() * (r.n as f64) < 1.0);
    }
}

#[test]
fn ldp_mc_needs_budget_and_flags_zero_hits() {
    assert!(ldp_curve(Beta::Real, Statistic::RealMax, 1.3, &[20], None).is_err());
    let rows = ldp_curve(
        Beta::Real,
        Statistic::RealMax,
        3.0,
        &[20],
        Some(&cfg(20, 1, 1)),
    )
    .unwrap();
    assert!(rows[0].flagged && rows[0].gap.is_none());
    let half = rate_target(Beta::Real, Statistic::RealMax, 1.3).unwrap();
    let full = rate_target(Beta::Complex, Statistic::Radius, 1.3).unwrap();
    assert!((2.0 * half - full).abs() < 1e-15);
}

#[test]
fn mdp_exact_point_and_target_shape() {
    let rows = mdp_scaling(
        Beta::Complex,
        Statistic::Radius,
        0.25,
        &[1.0, 2.0],
        &[10_000],
        None,
    )
    .unwrap();
    let v = rows[0].value.unwrap();
    assert!((v / -2.0 - 1.0).abs() < 0.25, "{v}");
    assert!(rows[0].regime_ok);
    assert_eq!(rows[1].target, 4.0 * rows[0].target);
    assert_eq!(mdp_beta(Beta::Real, Statistic::RealMax), 1.0);
    assert!(mdp_scaling(Beta::Complex, Statistic::Radius, 0.5, &[1.0], &[100], None).is_err());
}

#[test]
fn saturn_infinite_threshold_counts_nothing() {
    let s = saturn_counts(20, f64::INFINITY, &cfg(30, 2, 2)).unwrap();
    assert_eq!((s.real_exceed, s.complex_exceed, s.both), (0, 0, 0));
    assert_eq!(s.records.len(), 30);
    assert!(saturn_counts(20, 0.9, &cfg(30, 2, 2)).is_err());
}

#[test]
fn mean_real_count_matches_kernel() {
    let (m, se) = mean_real_count(30, &cfg(1500, 4, 0)).unwrap();
    let exact = expected_real_eigenvalues(30).unwrap();
    assert!((m - exact).abs() < 4.0 * se, "{m} ± {se} vs {exact}");
}

#[test]
fn gumbel_exact_mode_fit_improves() {
    let g = gumbel_check(
        Beta::Complex,
        Statistic::Radius,
        10_000,
        GumbelMode::ExactCdf,
        &default_grid(),
        None,
    )
    .unwrap();
    assert_eq!(g.rows.len(), 801);
    assert!(g.fitted_ks < g.raw_ks.unwrap());
    assert!(g.ks_stat > 0.0 && g.ks_stat < 1.0);
    assert_eq!(gumbel_cdf_limit_at_zero(), (-1f64).exp());
    assert!(gumbel_check(
        Beta::Real,
        Statistic::Radius,
        1000,
        GumbelMode::ExactCdf,
        &default_grid(),
        None
    )
    .is_err());
    assert!(gumbel_check(
        Beta::Complex,
        Statistic::Radius,
        100,
        GumbelMode::ExactCdf,
        &default_grid(),
        None
    )
    .is_err());
}

fn gumbel_cdf_limit_at_zero() -> f64 {
    crate::deviation::gumbel_cdf_limit(Beta::Complex, 0.0)
}

#[test]
fn gumbel_mc_matches_exact_in_distribution() {
    let grid = default_grid();
    let exact = gumbel_check(
        Beta::Complex,
        Statistic::Radius,
        400,
        GumbelMode::ExactCdf,
        &grid,
        None,
    )
    .unwrap();
    let mc = gumbel_check(
        Beta::Complex,
        Statistic::Radius,
        400,
        GumbelMode::Mc,
        &grid,
        Some(&cfg(4000, 8, 0)),
    )
    .unwrap();
    let gap = exact
        .rows
        .iter()
        .zip(&mc.rows)
        .map(|(a, b)| (a.empirical_or_exact_cdf - b.empirical_or_exact_cdf).abs())
        .fold(0.0, f64::max);
    // one-sample KS 1% critical value for 4000 draws
    assert!(gap < 1.63 / 4000f64.sqrt(), "{gap}");
    let r = gumbel_check(
        Beta::Complex,
        Statistic::Rightmost,
        200,
        GumbelMode::Mc,
        &grid,
        Some(&cfg(300, 8, 0)),
    )
    .unwrap();
    assert_eq!(r.centering, Centering::Fitted);
    assert!(r.raw_ks.is_none() && r.ks_stat == r.fitted_ks);
}

#[test]
fn gumbel_tail_is_at_most_exponential() {
    let s: Vec<f64> = (0..=12).map(|i| 2.0 + 0.5 * i as f64).collect();
    let rows = gumbel_tail_profile(10_000, &s).unwrap();
    assert!(rows.iter().all(|r| r.one_sided_ok), "{rows:?}");
    assert!(rows.iter().all(|r| r.prediction == r.s));
}
