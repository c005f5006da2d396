//! Acceptance checks, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL` line with the numbers behind the verdict.
//!
//! Run with `cargo test -p swipt-noma --test acceptance -- --nocapture`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swipt_noma::analytic::{
    diversity_fit, outage_far, outage_far_noncooperative, outage_far_oracle, outage_far_rnrf_oracle, outage_near,
    throughput_delay_sensitive, DiversityModel, OracleOptions, Variant,
};
use swipt_noma::geometry::{sample_farthest_distance, sample_nearest_distance, DistanceLaw, Region};
use swipt_noma::model::db_to_linear;
use swipt_noma::simulator::{estimate_outage, RelayDistance, SimOptions, SimulationResult};
use swipt_noma::{NetworkConfig, QuadratureSpec, Scheme};

const MC_TRIALS: u64 = 10_000_000;

fn report(n: u32, title: &str, pass: bool, details: &[String]) {
    println!(
        "criterion {n}: {} - {title}{}{}",
        if pass { "PASS" } else { "FAIL" },
        if details.is_empty() { "" } else { " | " },
        details.join("; ")
    );
    assert!(pass, "criterion {n} failed: {}", details.join("; "));
}

/// Near-user curves: `R_DB = 2`, `lambda_B = 1`, `R1 = 1`, `R2 = 0.5`.
fn near_preset(alpha: f64, snr_db: f64) -> NetworkConfig {
    NetworkConfig {
        alpha,
        ..NetworkConfig::default()
    }
    .with_snr_db(snr_db)
}

/// Far-user curves: radii 10/8/2, unit densities, `R1 = 0.3`.
fn far_preset(alpha: f64, snr_db: f64) -> NetworkConfig {
    NetworkConfig {
        alpha,
        r1: 0.3,
        ..NetworkConfig::default()
    }
    .with_snr_db(snr_db)
}

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn simulate(cfg: &NetworkConfig, scheme: Scheme, trials: u64, seed: u64, relay: RelayDistance) -> SimulationResult {
    estimate_outage(
        cfg,
        scheme,
        &SimOptions {
            trials,
            seed,
            threads: None,
            relay_distance: relay,
        },
    )
    .unwrap()
}

fn snr_grid(from: i32, to: i32, step: i32) -> Vec<f64> {
    (from..=to).step_by(step as usize).map(f64::from).collect()
}

fn near_simulation_agreement(n: u32, scheme: Scheme, seed: u64) {
    let cfg = near_preset(2.0, 30.0);
    let analytic = outage_near(&cfg, &quad(), scheme, Variant::ClosedForm).unwrap().probability;
    let started = std::time::Instant::now();
    let sim = simulate(&cfg, scheme, MC_TRIALS, seed, RelayDistance::Exact).near;
    let elapsed = started.elapsed().as_secs_f64();
    let z = sim.z_score(analytic);
    report(
        n,
        &format!("{scheme} near-user closed form vs simulation at 30 dB"),
        z.abs() <= 3.0 && elapsed < 60.0,
        &[format!(
            "closed form {analytic:.6e}, simulation {:.6e} +/- {:.2e}, z = {z:.2}, {elapsed:.1} s",
            sim.probability(),
            sim.stderr()
        )],
    );
}

#[test]
fn criterion_01_random_near_user_closed_form() {
    near_simulation_agreement(1, Scheme::Rnrf, 101);
}

#[test]
fn criterion_02_nearest_near_user_closed_form() {
    near_simulation_agreement(2, Scheme::Nnnf, 202);
}

#[test]
fn criterion_03_exact_reference_vs_simulation() {
    let mut pass = true;
    let mut details = Vec::new();
    for snr in [10.0, 20.0, 30.0, 40.0] {
        let cfg = far_preset(3.0, snr);
        let reference = outage_far_rnrf_oracle(&cfg).unwrap();
        let pinned = simulate(&cfg, Scheme::Rnrf, MC_TRIALS, 303, RelayDistance::FarDistance).far;
        let exact = simulate(&cfg, Scheme::Rnrf, MC_TRIALS, 303, RelayDistance::Exact).far;
        let z = pinned.z_score(reference);
        let gap = exact.probability() / reference - 1.0;
        pass &= z.abs() <= 3.0;
        details.push(format!(
            "{snr} dB: reference {reference:.5e}, simulation {:.5e} (z = {z:.2}), exact-geometry gap {:+.2}%",
            pinned.probability(),
            100.0 * gap
        ));
    }
    report(3, "exact far-user reference within 3 sigma of simulation", pass, &details);
}

#[test]
fn criterion_04_high_snr_convergence() {
    let mut pass = true;
    let mut details = Vec::new();
    for (alpha, label) in [(3.0, "general"), (2.0, "alpha=2")] {
        let mut errors = Vec::new();
        for snr in [30.0, 35.0, 40.0, 45.0] {
            let cfg = far_preset(alpha, snr);
            let reference = outage_far_rnrf_oracle(&cfg).unwrap();
            let approx = outage_far(&cfg, &quad(), Scheme::Rnrf, Variant::Auto).unwrap();
            errors.push((approx.probability / reference - 1.0).abs());
        }
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        let ok = errors[1] <= 0.15 && errors[3] <= 0.05 && decreasing;
        pass &= ok;
        details.push(format!(
            "{label}: relative error 30/35/40/45 dB = {:.3}/{:.3}/{:.3}/{:.4}{}",
            errors[0],
            errors[1],
            errors[2],
            errors[3],
            if ok { "" } else { " (out of bounds)" }
        ));
    }
    report(4, "high-SNR far-user form converges to the exact reference", pass, &details);
}

fn fit_curve(points: impl Iterator<Item = (f64, f64)>, model: DiversityModel) -> Result<f64, String> {
    let pts: Vec<(f64, f64)> = points.map(|(snr, p)| (db_to_linear(snr), p)).collect();
    diversity_fit(&pts, model).map(|f| f.slope).map_err(|e| e.to_string())
}

#[test]
fn criterion_05_diversity_slopes() {
    let snrs = snr_grid(30, 45, 1);
    let mut pass = true;
    let mut details = Vec::new();
    for scheme in [Scheme::Rnrf, Scheme::Nnnf] {
        let near = fit_curve(
            snrs.iter().map(|&s| {
                (s, outage_near(&near_preset(2.0, s), &quad(), scheme, Variant::Auto).unwrap().probability)
            }),
            DiversityModel::Plain,
        );
        let ok = near.as_ref().is_ok_and(|d| (0.9..=1.1).contains(d));
        pass &= ok;
        details.push(format!("near {scheme} slope {near:.3?}"));
    }
    for scheme in Scheme::ALL {
        let curve = || {
            snrs.iter().map(move |&s| {
                (s, outage_far(&far_preset(2.0, s), &quad(), scheme, Variant::Auto).unwrap().probability)
            })
        };
        let plain = fit_curve(curve(), DiversityModel::Plain);
        let corrected = fit_curve(curve(), DiversityModel::LogCorrected);
        let ok = plain.as_ref().is_ok_and(|d| (1.7..=2.0).contains(d))
            && corrected.as_ref().is_ok_and(|d| (1.85..=2.15).contains(d));
        pass &= ok;
        details.push(format!("far {scheme} plain {plain:.3?} log-corrected {corrected:.3?}"));
    }
    report(5, "diversity slopes over 30-45 dB", pass, &details);
}

fn sci(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn ordered(values: [f64; 3]) -> bool {
    values[0] <= values[1] && values[1] <= values[2]
}

#[test]
fn criterion_06_scheme_ordering() {
    let mut pass = true;
    let mut details = Vec::new();
    let far_order = [Scheme::Nnnf, Scheme::Nnff, Scheme::Rnrf];
    for alpha in [2.0, 3.0] {
        for snr in [30.0, 40.0] {
            let cfg = far_preset(alpha, snr);
            let analytic = far_order.map(|s| outage_far(&cfg, &quad(), s, Variant::Auto).unwrap().probability);
            let sim = far_order.map(|s| simulate(&cfg, s, MC_TRIALS, 606, RelayDistance::Exact).far.probability());
            let ok_a = ordered(analytic);
            let ok_s = ordered(sim);
            pass &= ok_a && ok_s;
            details.push(format!(
                "far alpha={alpha} {snr} dB NNNF<=NNFF<=RNRF analytic {} {} simulation {} {}",
                sci(&analytic),
                if ok_a { "ok" } else { "VIOLATED" },
                sci(&sim),
                if ok_s { "ok" } else { "VIOLATED" }
            ));
        }
    }
    for alpha in [2.0, 3.0, 4.0] {
        for snr in [30.0, 40.0] {
            let cfg = near_preset(alpha, snr);
            let a = [Scheme::Nnnf, Scheme::Rnrf].map(|s| outage_near(&cfg, &quad(), s, Variant::Auto).unwrap().probability);
            let m = [Scheme::Nnnf, Scheme::Rnrf]
                .map(|s| simulate(&cfg, s, MC_TRIALS / 10, 616, RelayDistance::Exact).near.probability());
            let ok = a[0] <= a[1] && m[0] <= m[1];
            pass &= ok;
            if !ok {
                details.push(format!("near alpha={alpha} {snr} dB NNN(F)F<=RNRF violated: {a:?} {m:?}"));
            }
        }
    }
    report(6, "scheme ordering in both engines", pass, &details);
}

#[test]
fn criterion_07_cooperation_benefit() {
    let snrs = snr_grid(30, 45, 5);
    let mut pass = true;
    let mut details = Vec::new();
    let sims: Vec<Vec<SimulationResult>> = Scheme::ALL
        .iter()
        .map(|&s| {
            snrs.iter()
                .map(|&snr| simulate(&far_preset(3.0, snr), s, MC_TRIALS, 707, RelayDistance::Exact))
                .collect()
        })
        .collect();
    for (i, &scheme) in Scheme::ALL.iter().enumerate() {
        let coop_a = fit_curve(
            snrs.iter().map(|&s| {
                (s, outage_far(&far_preset(3.0, s), &quad(), scheme, Variant::Auto).unwrap().probability)
            }),
            DiversityModel::Plain,
        );
        let direct_a = fit_curve(
            snrs.iter().map(|&s| {
                (s, outage_far_noncooperative(&far_preset(3.0, s), &quad(), scheme).unwrap().probability)
            }),
            DiversityModel::Plain,
        );
        let coop_s = fit_curve(snrs.iter().zip(&sims[i]).map(|(&s, r)| (s, r.far.probability())), DiversityModel::Plain);
        let direct_s = fit_curve(
            snrs.iter().zip(&sims[i]).map(|(&s, r)| (s, r.far_noncooperative.probability())),
            DiversityModel::Plain,
        );
        let steeper = |c: &Result<f64, String>, d: &Result<f64, String>| matches!((c, d), (Ok(c), Ok(d)) if c > d);
        let ok = steeper(&coop_a, &direct_a) && steeper(&coop_s, &direct_s);
        pass &= ok;
        details.push(format!(
            "{scheme} slope coop/non-coop analytic {coop_a:.3?}/{direct_a:.3?} simulation {coop_s:.3?}/{direct_s:.3?}"
        ));
    }
    let cfg = far_preset(3.0, 30.0);
    let coop_a = [Scheme::Nnff, Scheme::Rnrf].map(|s| outage_far(&cfg, &quad(), s, Variant::Auto).unwrap().probability);
    let direct_a = [Scheme::Nnff, Scheme::Rnrf].map(|s| outage_far_noncooperative(&cfg, &quad(), s).unwrap().probability);
    let at30 = |s: Scheme| sims[Scheme::ALL.iter().position(|&x| x == s).unwrap()][0];
    let coop_s = [Scheme::Nnff, Scheme::Rnrf].map(|s| at30(s).far.probability());
    let direct_s = [Scheme::Nnff, Scheme::Rnrf].map(|s| at30(s).far_noncooperative.probability());
    let crossover = |c: [f64; 2], d: [f64; 2]| c[0] < c[1] && d[0] > d[1];
    let ok_a = crossover(coop_a, direct_a);
    let ok_s = crossover(coop_s, direct_s);
    pass &= ok_a && ok_s;
    details.push(format!(
        "30 dB NNFF vs RNRF coop {coop_a:.4?} non-coop {direct_a:.4?} analytic {}; coop {coop_s:.4?} non-coop {direct_s:.4?} simulation {}",
        if ok_a { "ok" } else { "VIOLATED" },
        if ok_s { "ok" } else { "VIOLATED" }
    ));
    report(7, "cooperation steepens the far-user curve and flips NNFF vs RNRF", pass, &details);
}

#[test]
fn criterion_08_infeasibility_walls() {
    let snrs = snr_grid(0, 60, 5);
    let mut pass = true;
    let mut worst_throughput = f64::NEG_INFINITY;
    for &snr in &snrs {
        for alpha in [2.0, 3.0, 4.0] {
            let cfg = NetworkConfig {
                r1: 0.5,
                r2: 1.0,
                ..near_preset(alpha, snr)
            };
            for scheme in Scheme::ALL {
                let a = outage_near(&cfg, &quad(), scheme, Variant::Auto).unwrap().probability;
                let s = simulate(&cfg, scheme, 100_000, 808, RelayDistance::Exact).near;
                pass &= a == 1.0 && s.outages == s.trials;
            }
        }
        let cfg = NetworkConfig {
            r2: 2.0,
            ..near_preset(2.0, snr)
        };
        for scheme in Scheme::ALL {
            let a = throughput_delay_sensitive(&cfg, &quad(), scheme).unwrap();
            let s = simulate(&cfg, scheme, 100_000, 818, RelayDistance::Exact).throughput(&cfg);
            worst_throughput = worst_throughput.max(a).max(s);
        }
    }
    pass &= worst_throughput <= 1.0;
    report(
        8,
        "infeasible rates: near outage 1, throughput capped by R1",
        pass,
        &[format!("0-60 dB, max throughput with R2=2 is {worst_throughput:.4} (R1 = 1)")],
    );
}

#[test]
fn criterion_09_throughput_ceiling() {
    let cfg45 = near_preset(2.0, 45.0);
    let cfg30 = near_preset(2.0, 30.0);
    let a45 = throughput_delay_sensitive(&cfg45, &quad(), Scheme::Nnnf).unwrap();
    let s45 = simulate(&cfg45, Scheme::Nnnf, MC_TRIALS, 909, RelayDistance::Exact).throughput(&cfg45);
    let order = [Scheme::Rnrf, Scheme::Nnff, Scheme::Nnnf];
    let a30 = order.map(|s| throughput_delay_sensitive(&cfg30, &quad(), s).unwrap());
    let s30 = order.map(|s| simulate(&cfg30, s, MC_TRIALS, 919, RelayDistance::Exact).throughput(&cfg30));
    let near_ceiling = |t: f64| (t / 1.5 - 1.0).abs() <= 0.02;
    let ok_ceiling = near_ceiling(a45) && near_ceiling(s45);
    let ok_a = ordered(a30);
    let ok_s = ordered(s30);
    report(
        9,
        "throughput ceiling and scheme ordering",
        ok_ceiling && ok_a && ok_s,
        &[
            format!("NNNF at 45 dB analytic {a45:.4} simulation {s45:.4}"),
            format!(
                "30 dB RNRF<=NNFF<=NNNF analytic {a30:.4?} {} simulation {s30:.4?} {}",
                if ok_a { "ok" } else { "VIOLATED" },
                if ok_s { "ok" } else { "VIOLATED" }
            ),
        ],
    );
}

/// Every quadrature-based value of the near and far presets at one order.
fn quadrature_values(spec: &QuadratureSpec) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    let near = |cfg: &NetworkConfig, s: Scheme| outage_near(cfg, spec, s, Variant::Quadrature).unwrap().probability;
    for alpha in [2.0, 3.0, 4.0] {
        for snr in snr_grid(10, 45, 5) {
            for s in [Scheme::Rnrf, Scheme::Nnnf] {
                out.push((format!("near {s} alpha={alpha} {snr} dB"), near(&near_preset(alpha, snr), s)));
            }
        }
    }
    for r_db in [1.0, 2.0, 3.0] {
        for i in 1..=12 {
            let cfg = NetworkConfig {
                r_db,
                lambda_b: 0.25 * f64::from(i),
                ..near_preset(2.0, 30.0)
            };
            for s in [Scheme::Rnrf, Scheme::Nnnf] {
                out.push((format!("near {s} R_DB={r_db} lambda_B={}", cfg.lambda_b), near(&cfg, s)));
            }
        }
    }
    for i in 0..=8 {
        for j in 0..=8 {
            let cfg = NetworkConfig {
                r1: 0.25 * f64::from(i),
                r2: 0.25 * f64::from(j),
                ..near_preset(2.0, 30.0)
            };
            for s in [Scheme::Rnrf, Scheme::Nnnf] {
                out.push((format!("near {s} R1={} R2={}", cfg.r1, cfg.r2), near(&cfg, s)));
            }
        }
    }
    for alpha in [2.0, 3.0] {
        for snr in snr_grid(10, 45, 5) {
            for s in Scheme::ALL {
                let cfg = far_preset(alpha, snr);
                let mut variants = vec![Variant::Quadrature];
                if alpha == 2.0 {
                    variants.push(Variant::ClosedForm);
                }
                for v in variants {
                    let p = outage_far(&cfg, spec, s, v).unwrap().probability;
                    out.push((format!("far {s} {v} alpha={alpha} {snr} dB"), p));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_10_quadrature_stability() {
    let at30 = quadrature_values(&QuadratureSpec::uniform(30).unwrap());
    let at60 = quadrature_values(&QuadratureSpec::uniform(60).unwrap());
    let mut worst = (String::new(), 0.0_f64);
    let mut order_failures = 0;
    for ((label, a), (_, b)) in at30.iter().zip(&at60) {
        let d = (a - b).abs();
        if d > 1e-4 {
            order_failures += 1;
        }
        if d > worst.1 {
            worst = (label.clone(), d);
        }
    }

    // alpha = 2: closed forms against the general quadrature at order 30.
    let q30 = QuadratureSpec::uniform(30).unwrap();
    let mut closed_worst = (String::new(), 0.0_f64);
    let mut closed_failures = 0;
    let mut compare = |label: String, a: f64, b: f64| {
        let d = (a - b).abs();
        if d > 1e-6 {
            closed_failures += 1;
        }
        if d > closed_worst.1 {
            closed_worst = (label, d);
        }
    };
    for snr in snr_grid(10, 45, 5) {
        for s in [Scheme::Rnrf, Scheme::Nnnf] {
            let cfg = near_preset(2.0, snr);
            compare(
                format!("near {s} {snr} dB"),
                outage_near(&cfg, &q30, s, Variant::ClosedForm).unwrap().probability,
                outage_near(&cfg, &q30, s, Variant::Quadrature).unwrap().probability,
            );
        }
        for s in Scheme::ALL {
            let cfg = far_preset(2.0, snr);
            compare(
                format!("far {s} {snr} dB"),
                outage_far(&cfg, &q30, s, Variant::ClosedForm).unwrap().probability,
                outage_far(&cfg, &q30, s, Variant::Quadrature).unwrap().probability,
            );
        }
    }
    report(
        10,
        "quadrature order 30 vs 60 within 1e-4, closed forms vs quadrature within 1e-6",
        order_failures == 0 && closed_failures == 0,
        &[
            format!(
                "{order_failures}/{} values move by more than 1e-4, worst {:.2e} ({})",
                at30.len(),
                worst.1,
                worst.0
            ),
            format!(
                "{closed_failures} closed-form gaps above 1e-6, worst {:.2e} ({})",
                closed_worst.1, closed_worst.0
            ),
        ],
    );
}

fn kolmogorov_distance(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_11_sampler_kolmogorov_distance() {
    const DRAWS: usize = 1_000_000;
    let disc = Region::disc(2.0, 1.0);
    let ring = Region::ring(8.0, 10.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let nearest_disc = kolmogorov_distance(
        (0..DRAWS).map(|_| sample_nearest_distance(&disc, &mut rng)).collect(),
        |r| DistanceLaw::nearest(&disc).cdf(r),
    );
    let nearest_ring = kolmogorov_distance(
        (0..DRAWS).map(|_| sample_nearest_distance(&ring, &mut rng)).collect(),
        |r| DistanceLaw::nearest(&ring).cdf(r),
    );
    let farthest_ring = kolmogorov_distance(
        (0..DRAWS).map(|_| sample_farthest_distance(&ring, &mut rng)).collect(),
        |r| DistanceLaw::farthest(&ring).cdf(r),
    );
    report(
        11,
        "distance samplers match their CDFs",
        nearest_disc <= 0.003 && nearest_ring <= 0.003 && farthest_ring <= 0.003,
        &[format!(
            "KS nearest-disc {nearest_disc:.5}, nearest-ring {nearest_ring:.5}, farthest-ring {farthest_ring:.5}"
        )],
    );
}

#[test]
fn exact_reference_scheme_breakdown_is_consistent() {
    // Not a numbered criterion: the split of the exact reference sums to its total.
    let cfg = far_preset(3.0, 35.0);
    for s in Scheme::ALL {
        let b = outage_far_oracle(&cfg, s, &OracleOptions::default()).unwrap();
        assert!((b.theta1 + b.theta2 - b.value).abs() < 1e-15);
    }
}
