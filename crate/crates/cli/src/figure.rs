//! `figure`: preset sweeps for the published plots, run on one or both
//! engines, plus a per-point agreement report.
//!
//! Preset values (swept parameters and those fixed by a plot) override the
//! configuration; every other parameter comes from the configuration.

use std::collections::HashMap;
use std::path::Path;

use swipt_noma::analytic::throughput_with;
use swipt_noma::simulator::{estimate_outage, SimulationResult};
use swipt_noma::{NetworkConfig, Scheme, UserClass};

use crate::error::{CliError, CliResult};
use crate::output::{num, sci, Table};
use crate::settings::{RunManifest, Settings, SnrGrid};
use crate::sweep::{analytic_outage, sim_options, MONTE_CARLO};

pub const FIGURE_COLUMNS: [&str; 16] = [
    "figure",
    "series",
    "x_name",
    "x",
    "y_name",
    "y",
    "scheme",
    "user",
    "engine",
    "variant",
    "value",
    "raw_value",
    "clamped_flag",
    "stderr",
    "trials",
    "seed",
];

pub const REPORT_COLUMNS: [&str; 10] = [
    "series",
    "x_name",
    "x",
    "scheme",
    "user",
    "analytic",
    "simulated",
    "stderr",
    "relative_gap",
    "z_score",
];

/// What a curve measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Metric {
    Outage(UserClass),
    Throughput,
}

impl Metric {
    fn y_name(self) -> &'static str {
        match self {
            Metric::Outage(_) => "outage",
            Metric::Throughput => "throughput",
        }
    }

    fn user(self) -> &'static str {
        match self {
            Metric::Outage(u) => u.as_str(),
            Metric::Throughput => "system",
        }
    }
}

/// One plotted curve: a scheme and metric over a list of configurations.
#[derive(Debug, Clone)]
struct Curve {
    series: String,
    x_name: &'static str,
    scheme: Scheme,
    metric: Metric,
    points: Vec<(f64, NetworkConfig)>,
}

/// Points of a curve swept over SNR.
fn over_snr(base: NetworkConfig, snrs: &[f64]) -> Vec<(f64, NetworkConfig)> {
    snrs.iter().map(|&s| (s, base.with_snr_db(s))).collect()
}

/// Points of a curve swept over one parameter at fixed SNR.
fn over_param(
    base: NetworkConfig,
    snr: f64,
    values: &[f64],
    set: impl Fn(&mut NetworkConfig, f64),
) -> Vec<(f64, NetworkConfig)> {
    values
        .iter()
        .map(|&v| {
            let mut c = base.with_snr_db(snr);
            set(&mut c, v);
            (v, c)
        })
        .collect()
}

fn steps(start: f64, stop: f64, step: f64) -> Vec<f64> {
    SnrGrid::range(start, stop, step).points()
}

fn fmt_label(v: f64) -> String {
    num(v)
}

/// Default grid of a figure and whether it is a fixed-SNR figure.
fn default_grid(id: u8) -> SnrGrid {
    match id {
        3 | 4 | 6 => SnrGrid::single(30.0),
        5 | 7 => SnrGrid::range(10.0, 50.0, 5.0),
        _ => SnrGrid::range(0.0, 50.0, 5.0),
    }
}

/// Curves of figure `id` on top of the configured network.
fn curves(id: u8, base: NetworkConfig, snrs: &[f64]) -> CliResult<Vec<Curve>> {
    let near_pair = [Scheme::Rnrf, Scheme::Nnnf];
    let fixed_snr = || -> CliResult<f64> {
        match snrs {
            [s] => Ok(*s),
            _ => Err(CliError::Usage(format!("figure {id} is drawn at one SNR; pass a single --snr-db value"))),
        }
    };
    let mut out = Vec::new();
    let mut push = |series: String, x_name, schemes: &[Scheme], metric, points: &Vec<(f64, NetworkConfig)>| {
        for &scheme in schemes {
            out.push(Curve {
                series: series.clone(),
                x_name,
                scheme,
                metric,
                points: points.clone(),
            });
        }
    };
    let near = Metric::Outage(UserClass::Near);
    let far = Metric::Outage(UserClass::Far);
    match id {
        2 => {
            let cell = NetworkConfig {
                r_db: 2.0,
                lambda_b: 1.0,
                ..base
            };
            for alpha in [2.0, 3.0, 4.0] {
                let cfg = NetworkConfig { alpha, ..cell };
                push(format!("alpha={alpha}"), "snr_db", &near_pair, near, &over_snr(cfg, snrs));
            }
            // Rates that leave too little power for the near user's own message.
            let wrong = NetworkConfig {
                alpha: 2.0,
                r1: 0.5,
                r2: 1.0,
                ..cell
            };
            push("alpha=2 r1=0.5 r2=1".into(), "snr_db", &near_pair, near, &over_snr(wrong, snrs));
        }
        3 => {
            let snr = fixed_snr()?;
            for r_db in [1.0, 2.0, 3.0] {
                let cfg = NetworkConfig { r_db, ..base };
                let pts = over_param(cfg, snr, &steps(0.25, 3.0, 0.25), |c, v| c.lambda_b = v);
                push(format!("r_db={}", fmt_label(r_db)), "lambda_b", &near_pair, near, &pts);
            }
        }
        4 => {
            let snr = fixed_snr()?;
            let cfg = NetworkConfig {
                alpha: 2.0,
                r_db: 2.0,
                ..base
            };
            for r2 in steps(0.0, 2.0, 0.25) {
                let pts = over_param(NetworkConfig { r2, ..cfg }, snr, &steps(0.0, 2.0, 0.25), |c, v| c.r1 = v);
                push(format!("r2={}", fmt_label(r2)), "r1", &near_pair, near, &pts);
            }
        }
        5 => {
            let cell = NetworkConfig {
                r1: 0.3,
                r_da: 10.0,
                r_dc: 8.0,
                r_db: 2.0,
                lambda_a: 1.0,
                lambda_b: 1.0,
                ..base
            };
            for alpha in [2.0, 3.0] {
                let cfg = NetworkConfig { alpha, ..cell };
                push(format!("alpha={alpha}"), "snr_db", &Scheme::ALL, far, &over_snr(cfg, snrs));
            }
        }
        6 => {
            let snr = fixed_snr()?;
            for r_dc in [5.0, 8.0] {
                for r_db in [1.0, 2.0] {
                    let cfg = NetworkConfig {
                        alpha: 2.0,
                        r_dc,
                        r_da: r_dc + 2.0,
                        r_db,
                        ..base
                    };
                    let pts = over_param(cfg, snr, &steps(0.1, 1.1, 0.1), |c, v| c.r1 = v);
                    let label = format!("r_dc={} r_db={}", fmt_label(r_dc), fmt_label(r_db));
                    push(label, "r1", &Scheme::ALL, far, &pts);
                }
            }
        }
        7 => {
            let cfg = NetworkConfig {
                alpha: 3.0,
                r1: 0.3,
                r_da: 10.0,
                r_dc: 8.0,
                r_db: 2.0,
                lambda_a: 1.0,
                lambda_b: 1.0,
                ..base
            };
            let pts = over_snr(cfg, snrs);
            push("cooperative".into(), "snr_db", &Scheme::ALL, far, &pts);
            let direct = Metric::Outage(UserClass::FarNonCooperative);
            push("non-cooperative".into(), "snr_db", &Scheme::ALL, direct, &pts);
        }
        8 => {
            let cell = NetworkConfig {
                alpha: 2.0,
                r_da: 10.0,
                r_dc: 8.0,
                r_db: 2.0,
                lambda_a: 1.0,
                lambda_b: 1.0,
                ..base
            };
            for r2 in [0.5, 1.0, 2.0] {
                let cfg = NetworkConfig { r2, ..cell };
                push(format!("r2={}", fmt_label(r2)), "snr_db", &Scheme::ALL, Metric::Throughput, &over_snr(cfg, snrs));
            }
        }
        other => return Err(CliError::Usage(format!("unknown figure {other}; expected 2 to 8"))),
    }
    for c in &out {
        for (_, cfg) in &c.points {
            cfg.validate()?;
        }
    }
    Ok(out)
}

/// Agreement between the engines at one point.
struct Comparison {
    series: String,
    x_name: &'static str,
    x: f64,
    scheme: Scheme,
    user: &'static str,
    analytic: f64,
    simulated: f64,
    stderr: Option<f64>,
}

impl Comparison {
    fn relative_gap(&self) -> f64 {
        if self.analytic == 0.0 {
            if self.simulated == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.simulated - self.analytic).abs() / self.analytic.abs()
        }
    }

    fn z_score(&self) -> f64 {
        match self.stderr {
            Some(s) if s > 0.0 => (self.simulated - self.analytic) / s,
            _ => f64::NAN,
        }
    }
}

/// Caches simulations so curves that share a configuration share a run.
struct SimCache {
    runs: HashMap<String, SimulationResult>,
}

impl SimCache {
    fn get(&mut self, cfg: &NetworkConfig, scheme: Scheme, settings: &Settings, threads: Option<usize>) -> CliResult<SimulationResult> {
        let key = format!("{cfg:?}/{scheme}");
        if let Some(r) = self.runs.get(&key) {
            return Ok(*r);
        }
        let r = estimate_outage(cfg, scheme, &sim_options(settings, threads))?;
        self.runs.insert(key, r);
        Ok(r)
    }
}

pub fn run_figure(
    id: u8,
    settings: &Settings,
    threads: Option<usize>,
    out: Option<&Path>,
    report: Option<&Path>,
) -> CliResult<()> {
    settings.check(settings.engine.simulate())?;
    let (grid, snrs) = settings.grid(default_grid(id))?;
    let curves = curves(id, settings.network, &snrs)?;
    let manifest = RunManifest {
        command: "figure",
        figure: Some(id),
        settings,
        grid,
        columns: &FIGURE_COLUMNS,
    };
    let mut table = Table::new(&manifest)?;
    let mut cache = SimCache { runs: HashMap::new() };
    let mut comparisons = Vec::new();
    let fig = id.to_string();
    for curve in &curves {
        for (x, cfg) in &curve.points {
            let head = |engine: &str, variant: String, value: f64| {
                vec![
                    fig.clone(),
                    curve.series.clone(),
                    curve.x_name.to_string(),
                    num(*x),
                    curve.metric.y_name().to_string(),
                    sci(value),
                    curve.scheme.to_string(),
                    curve.metric.user().to_string(),
                    engine.to_string(),
                    variant,
                    sci(value),
                ]
            };
            let mut analytic_value = None;
            if settings.engine.analytic() {
                let variant = settings.variant.resolve(cfg.alpha).to_string();
                let (value, raw, flag) = match curve.metric {
                    Metric::Outage(user) => {
                        let cell = analytic_outage(cfg, &settings.quad, curve.scheme, user, settings.variant)?;
                        let (raw, flag) = cell.diagnostics();
                        (cell.probability(), raw, flag)
                    }
                    Metric::Throughput => {
                        let t = throughput_with(cfg, &settings.quad, curve.scheme, settings.variant)?;
                        (t, sci(t), "0".to_string())
                    }
                };
                let mut row = head("analytic", variant, value);
                row.extend([raw, flag, String::new(), String::new(), String::new()]);
                table.row(row)?;
                analytic_value = Some(value);
            }
            if settings.engine.simulate() {
                let result = cache.get(cfg, curve.scheme, settings, threads)?;
                let (value, stderr, trials) = match curve.metric {
                    Metric::Outage(user) => {
                        let est = result.user(user);
                        (est.probability(), Some(est.stderr()), est.trials)
                    }
                    // No standard error: the two users' outages are correlated.
                    Metric::Throughput => (result.throughput(cfg), None, result.near.trials),
                };
                let mut row = head("simulate", MONTE_CARLO.to_string(), value);
                row.extend([
                    sci(value),
                    "0".to_string(),
                    stderr.map(sci).unwrap_or_default(),
                    trials.to_string(),
                    settings.seed.to_string(),
                ]);
                table.row(row)?;
                if let Some(analytic) = analytic_value {
                    comparisons.push(Comparison {
                        series: curve.series.clone(),
                        x_name: curve.x_name,
                        x: *x,
                        scheme: curve.scheme,
                        user: curve.metric.user(),
                        analytic,
                        simulated: value,
                        stderr,
                    });
                }
            }
        }
    }
    table.emit(out)?;
    summarize(id, &comparisons);
    if let Some(path) = report {
        let mut rep = Table::new(&RunManifest {
            command: "figure-report",
            columns: &REPORT_COLUMNS,
            ..manifest
        })?;
        for c in &comparisons {
            rep.row([
                c.series.clone(),
                c.x_name.to_string(),
                num(c.x),
                c.scheme.to_string(),
                c.user.to_string(),
                sci(c.analytic),
                sci(c.simulated),
                c.stderr.map(sci).unwrap_or_default(),
                sci(c.relative_gap()),
                sci(c.z_score()),
            ])?;
        }
        rep.emit(Some(path))?;
    }
    Ok(())
}

/// Prints the largest engine disagreement to standard error.
fn summarize(id: u8, comparisons: &[Comparison]) {
    if comparisons.is_empty() {
        eprintln!("figure {id}: single engine, no agreement report");
        return;
    }
    let worst = comparisons
        .iter()
        .filter(|c| c.relative_gap().is_finite())
        .max_by(|a, b| a.relative_gap().total_cmp(&b.relative_gap()));
    let unmatched = comparisons.iter().filter(|c| !c.relative_gap().is_finite()).count();
    match worst {
        Some(c) => eprintln!(
            "figure {id}: {} points compared, max relative gap {:.3e} at series '{}' {}={} scheme {} user {} (analytic {:.4e}, simulated {:.4e}); {unmatched} points where the analytic value is 0",
            comparisons.len(),
            c.relative_gap(),
            c.series,
            c.x_name,
            num(c.x),
            c.scheme,
            c.user,
            c.analytic,
            c.simulated,
        ),
        None => eprintln!("figure {id}: {} points compared, analytic value 0 at all of them", comparisons.len()),
    }
}
