use std::cell::Cell as Counter;

use ginibre_core::deviation::rate;
use ginibre_core::exact_tails::{expected_count, kostlan_radius_tail, tail_bracket, ExpectedCount};
use ginibre_core::montecarlo::{
    default_grid, estimate_tail, gumbel_check, ldp_curve, mdp_scaling, run_trials, saturn_counts,
    GumbelMode, McConfig, Route,
};
use ginibre_core::sampling::sample_spectrum;
use ginibre_core::{Beta, LogProb, SeedSpec, Statistic, TailQuery};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{emit, header_config, Cell, Table};
use crate::CliError;

type Res = Result<(), CliError>;

pub fn run(cmd: Command) -> Res {
    match cmd {
        Command::Rate(a) => cmd_rate(&a),
        Command::ExactTail(a) => cmd_exact_tail(&a),
        Command::ExpectedCount(a) => cmd_expected_count(&a),
        Command::TailBracket(a) => cmd_tail_bracket(&a),
        Command::Mc(a) => cmd_mc(&a),
        Command::LdpCurve(a) => cmd_ldp_curve(&a),
        Command::MdpScaling(a) => cmd_mdp_scaling(&a),
        Command::Gumbel(a) => cmd_gumbel(&a),
        Command::Saturn(a) => cmd_saturn(&a),
        Command::Sample(a) => cmd_sample(&a),
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// `--workers`, else `$WORKERS`, else one per core (0).
fn workers(run: &RunArgs) -> Result<usize, CliError> {
    if let Some(w) = run.workers {
        return Ok(w);
    }
    match std::env::var("WORKERS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| config_err(format!("WORKERS must be a nonnegative integer, got '{v}'"))),
        Err(_) => Ok(0),
    }
}

fn mc_config(trials: u64, run: &RunArgs) -> Result<McConfig, CliError> {
    if trials == 0 {
        return Err(config_err("trials must be positive"));
    }
    Ok(McConfig::new(trials, run.master_seed, workers(run)?))
}

fn query(a: &QueryArgs) -> Result<TailQuery, CliError> {
    Ok(TailQuery::new(a.ensemble, a.statistic, a.n, a.t)?)
}

fn prob_json(p: &LogProb) -> Value {
    json!({ "log_p": p.log_p, "p": p.log_p.exp(), "kind": p.kind })
}

fn count_json(c: &ExpectedCount) -> Value {
    json!({
        "value": c.value.value(),
        "log_value": c.value.ln(),
        "route": c.route,
        "rel_error_bound": c.rel_error_bound,
        "ln_truncation": c.ln_truncation,
    })
}

fn query_json(q: &TailQuery) -> Value {
    json!({ "ensemble": q.ensemble, "statistic": q.statistic, "n": q.n, "t": q.t })
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn print_json(v: &Value) -> Res {
    println!("{v}");
    Ok(())
}

fn cmd_rate(a: &RateArgs) -> Res {
    let r = rate(a.beta, a.t)?;
    print_json(&serde_json::to_value(r).expect("serializable"))
}

fn cmd_exact_tail(a: &QueryArgs) -> Res {
    let q = query(a)?;
    if q.ensemble != Beta::Complex || q.statistic != Statistic::Radius {
        return Err(config_err(format!(
            "no exact route for the {} of ensemble {}; use tail-bracket",
            q.statistic, q.ensemble
        )));
    }
    let k = kostlan_radius_tail(q.n, q.t)?;
    print_json(&merge(
        merge(query_json(&q), prob_json(&k.value)),
        json!({
            "lower": prob_json(&k.lower),
            "upper": prob_json(&k.upper),
            "log_expected_count": k.ln_sum_q,
        }),
    ))
}

fn cmd_expected_count(a: &QueryArgs) -> Res {
    let q = query(a)?;
    let c = expected_count(&q)?;
    print_json(&merge(query_json(&q), count_json(&c)))
}

fn cmd_tail_bracket(a: &QueryArgs) -> Res {
    let q = query(a)?;
    let b = tail_bracket(&q)?;
    print_json(&merge(
        query_json(&q),
        json!({
            "lower": prob_json(&b.lower),
            "upper": prob_json(&b.upper),
            "expected_count": count_json(&b.expected_count),
        }),
    ))
}

fn cmd_mc(a: &McArgs) -> Res {
    let q = query(&a.query)?;
    let cfg = mc_config(a.trials, &a.run)?;
    let route = match a.route {
        McRoute::Matrix => Route::Matrix,
        McRoute::Kostlan => Route::Kostlan,
    };
    let config = header_config("mc", a);
    let e = estimate_tail(&q, &cfg, route)?;
    let log_p = e.p_hat.ln();
    let table = Table::new(
        &[
            "hits",
            "trials",
            "p_hat",
            "log_p_hat",
            "ci_lo",
            "ci_hi",
            "method",
        ],
        vec![vec![
            e.hits.into(),
            e.trials.into(),
            e.p_hat.into(),
            log_p.into(),
            e.ci95.0.into(),
            e.ci95.1.into(),
            Cell::S(match e.method {
                ginibre_core::montecarlo::CiMethod::Wilson => "wilson",
                ginibre_core::montecarlo::CiMethod::Normal => "normal",
            }),
        ]],
    );
    emit(&a.run, &config, table, || {
        merge(
            query_json(&q),
            json!({
                "hits": e.hits,
                "trials": e.trials,
                "p": e.p_hat,
                "log_p": log_p,
                "ci95": [e.ci95.0, e.ci95.1],
                "ci_method": e.method,
                "route": route,
                "master_seed": cfg.master_seed,
            }),
        )
    })
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Matrix => "matrix",
        Route::Kostlan => "kostlan",
        Route::Exact => "exact",
    }
}

fn optional_mc(trials: Option<u64>, run: &RunArgs) -> Result<Option<McConfig>, CliError> {
    trials.map(|t| mc_config(t, run)).transpose()
}

fn check_n_list(n_list: &[u64]) -> Res {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(config_err("n-list must hold positive integers"));
    }
    Ok(())
}

fn cmd_ldp_curve(a: &LdpArgs) -> Res {
    check_n_list(&a.n_list)?;
    let mc = optional_mc(a.trials, &a.run)?;
    let config = header_config("ldp-curve", a);
    let rows = ldp_curve(a.ensemble, a.statistic, a.t, &a.n_list, mc.as_ref())?;
    let table = Table::new(
        &["n", "minus_log_p_over_n", "rate_target", "gap", "route"],
        rows.iter()
            .map(|r| {
                vec![
                    r.n.into(),
                    r.minus_log_p_over_n.into(),
                    r.rate_target.into(),
                    r.gap.into(),
                    Cell::S(route_name(r.route)),
                ]
            })
            .collect(),
    );
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap).collect();
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    emit(&a.run, &config, table, || {
        json!({
            "ensemble": a.ensemble,
            "statistic": a.statistic,
            "t": a.t,
            "rows": rows,
            "gap_decreasing": decreasing,
            "flagged": rows.iter().filter(|r| r.flagged).map(|r| r.n).collect::<Vec<_>>(),
        })
    })
}

fn cmd_mdp_scaling(a: &MdpArgs) -> Res {
    check_n_list(&a.n_list)?;
    if a.t_grid.is_empty() {
        return Err(config_err("t-grid must not be empty"));
    }
    let mc = optional_mc(a.trials, &a.run)?;
    let config = header_config("mdp-scaling", a);
    let rows = mdp_scaling(
        a.ensemble,
        a.statistic,
        a.d_exponent,
        &a.t_grid,
        &a.n_list,
        mc.as_ref(),
    )?;
    let table = Table::new(
        &["n", "t", "d", "value", "target", "regime_ok"],
        rows.iter()
            .map(|r| {
                vec![
                    r.n.into(),
                    r.t.into(),
                    r.d.into(),
                    r.value.into(),
                    r.target.into(),
                    r.regime_ok.into(),
                ]
            })
            .collect(),
    );
    emit(&a.run, &config, table, || {
        json!({
            "ensemble": a.ensemble,
            "statistic": a.statistic,
            "d_exponent": a.d_exponent,
            "rows": rows,
            "regime_warnings": rows.iter().filter(|r| !r.regime_ok).count(),
        })
    })
}

fn cmd_gumbel(a: &GumbelArgs) -> Res {
    let mode = match a.mode {
        GumbelModeArg::ExactCdf => GumbelMode::ExactCdf,
        GumbelModeArg::Mc => GumbelMode::Mc,
    };
    let mc = optional_mc(a.trials, &a.run)?;
    if mode == GumbelMode::Mc && mc.is_none() {
        return Err(config_err("--mode mc needs --trials"));
    }
    let config = header_config("gumbel", a);
    let g = gumbel_check(
        a.ensemble,
        a.statistic,
        a.n,
        mode,
        &default_grid(),
        mc.as_ref(),
    )?;
    let table = Table::new(
        &["grid_t", "empirical_or_exact_cdf", "limit_cdf"],
        g.rows
            .iter()
            .map(|r| {
                vec![
                    r.grid_t.into(),
                    r.empirical_or_exact_cdf.into(),
                    r.limit_cdf.into(),
                ]
            })
            .collect(),
    );
    emit(&a.run, &config, table, || {
        serde_json::to_value(&g).expect("serializable")
    })
}

fn cmd_saturn(a: &SaturnArgs) -> Res {
    if a.n == 0 {
        return Err(config_err("n must be positive"));
    }
    let threshold = a.threshold.unwrap_or(1.0 + 3.0 / (a.n as f64).sqrt());
    let cfg = mc_config(a.trials, &a.run)?;
    let config = header_config("saturn", a);
    let s = saturn_counts(a.n, threshold, &cfg)?;
    let table = Table::new(
        &["trial", "real_max", "complex_max_modulus", "rightmost"],
        s.records
            .iter()
            .map(|r| {
                vec![
                    r.trial.into(),
                    r.real_max.into(),
                    r.complex_max_modulus.into(),
                    r.rightmost.into(),
                ]
            })
            .collect(),
    );
    emit(&a.run, &config, table, || {
        serde_json::to_value(&s).expect("serializable")
    })
}

/// Trials sampled per batch; bounds memory for large dumps.
const SAMPLE_BATCH: u64 = 64;

fn cmd_sample(a: &SampleArgs) -> Res {
    if a.n == 0 || a.trials == 0 {
        return Err(config_err("n and trials must be positive"));
    }
    let rows =
        a.n.checked_mul(a.trials)
            .filter(|&r| r <= a.row_cap)
            .ok_or_else(|| {
                config_err(format!(
                    "trials * n = {} * {} exceeds the row cap {}",
                    a.trials, a.n, a.row_cap
                ))
            })?;
    let cfg = mc_config(a.trials, &a.run)?;
    let config = header_config("sample", a);
    let (ensemble, n) = (a.ensemble, a.n as usize);
    let written = Counter::new(0u64);
    let batches = (0..a.trials.div_ceil(SAMPLE_BATCH)).flat_map(move |b| {
        let start = b * SAMPLE_BATCH;
        let len = SAMPLE_BATCH.min(cfg.trials - start);
        let spectra = run_trials(len, cfg.workers, |i| {
            sample_spectrum(ensemble, n, SeedSpec::new(cfg.master_seed, start + i))
        });
        let out: Vec<Result<Vec<Cell>, CliError>> = match spectra {
            Err(e) => vec![Err(e.into())],
            Ok(spectra) => spectra
                .into_iter()
                .zip(start..)
                .flat_map(|(s, trial)| {
                    let mut v = Vec::with_capacity(n);
                    for &x in &s.real_eigs {
                        v.push(vec![trial.into(), x.into(), 0.0.into(), Cell::U(1)]);
                    }
                    for p in &s.complex_pairs {
                        v.push(vec![trial.into(), p.re.into(), p.im.into(), Cell::U(0)]);
                        v.push(vec![trial.into(), p.re.into(), (-p.im).into(), Cell::U(0)]);
                    }
                    for p in &s.points {
                        v.push(vec![trial.into(), p.re.into(), p.im.into(), Cell::U(0)]);
                    }
                    v.into_iter().map(Ok)
                })
                .collect(),
        };
        out
    });
    let counted = batches.inspect(|r| {
        if r.is_ok() {
            written.set(written.get() + 1);
        }
    });
    let table = Table {
        columns: &["trial", "re", "im", "is_real"],
        rows: Box::new(counted),
    };
    emit(&a.run, &config, table, || {
        debug_assert_eq!(written.get(), rows);
        json!({
            "ensemble": ensemble,
            "n": a.n,
            "trials": a.trials,
            "rows": written.get(),
            "master_seed": cfg.master_seed,
        })
    })
}
