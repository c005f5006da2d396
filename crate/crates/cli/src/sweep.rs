//! `analytic` and `simulate`: SNR sweeps over schemes and users.

use std::path::Path;

use swipt_noma::analytic::{outage_far, outage_far_noncooperative_with, outage_near, OutageValue, Variant};
use swipt_noma::simulator::{estimate_outage, OutageEstimate};
use swipt_noma::{Error, NetworkConfig, QuadratureSpec, Scheme, SimOptions, UserClass};

use crate::error::CliResult;
use crate::output::{num, sci, Table};
use crate::settings::{RunManifest, Settings, SnrGrid};

pub const ANALYTIC_COLUMNS: [&str; 7] = [
    "snr_db",
    "scheme",
    "user",
    "variant",
    "probability",
    "raw_value",
    "clamped_flag",
];

pub const SIMULATE_COLUMNS: [&str; 10] = [
    "snr_db",
    "scheme",
    "user",
    "variant",
    "probability",
    "raw_value",
    "clamped_flag",
    "stderr",
    "trials",
    "seed",
];

/// Variant label of simulated rows.
pub const MONTE_CARLO: &str = "monte-carlo";

/// Grid used when neither the config nor the flags give one.
pub const DEFAULT_GRID: SnrGrid = SnrGrid {
    start: 0.0,
    stop: 50.0,
    step: 5.0,
};

/// One analytic outage value, or a note that SIC cannot work at these rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticCell {
    Value(OutageValue),
    SicInfeasible,
}

impl AnalyticCell {
    pub fn probability(&self) -> f64 {
        match self {
            AnalyticCell::Value(v) => v.probability,
            AnalyticCell::SicInfeasible => 1.0,
        }
    }

    /// `raw_value` and `clamped_flag` fields.
    pub fn diagnostics(&self) -> (String, String) {
        match self {
            AnalyticCell::Value(v) => (sci(v.raw), u8::from(v.out_of_range).to_string()),
            AnalyticCell::SicInfeasible => (String::new(), "sic-infeasible".into()),
        }
    }
}

pub fn analytic_outage(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    user: UserClass,
    variant: Variant,
) -> CliResult<AnalyticCell> {
    let value = match user {
        UserClass::Near => outage_near(cfg, quad, scheme, variant),
        UserClass::Far => outage_far(cfg, quad, scheme, variant),
        UserClass::FarNonCooperative => outage_far_noncooperative_with(cfg, quad, scheme, variant),
    };
    match value {
        Ok(v) => Ok(AnalyticCell::Value(v)),
        Err(Error::InfeasibleSic { .. }) => Ok(AnalyticCell::SicInfeasible),
        Err(e) => Err(e.into()),
    }
}

pub fn sim_options(settings: &Settings, threads: Option<usize>) -> SimOptions {
    SimOptions {
        trials: settings.trials,
        seed: settings.seed,
        threads,
        relay_distance: settings.relay_distance,
    }
}

pub fn run_analytic(settings: &Settings, out: Option<&Path>) -> CliResult<()> {
    settings.check(false)?;
    let (grid, points) = settings.grid(DEFAULT_GRID)?;
    let manifest = RunManifest {
        command: "analytic",
        figure: None,
        settings,
        grid,
        columns: &ANALYTIC_COLUMNS,
    };
    let mut table = Table::new(&manifest)?;
    let label = settings.variant.resolve(settings.network.alpha).to_string();
    for &snr in &points {
        let cfg = settings.network.with_snr_db(snr);
        for &scheme in &settings.schemes {
            for &user in &settings.users {
                let cell = analytic_outage(&cfg, &settings.quad, scheme, user, settings.variant)?;
                let (raw, flag) = cell.diagnostics();
                table.row([
                    num(snr),
                    scheme.to_string(),
                    user.to_string(),
                    label.clone(),
                    sci(cell.probability()),
                    raw,
                    flag,
                ])?;
            }
        }
    }
    table.emit(out)
}

pub fn simulated_fields(est: &OutageEstimate, seed: u64) -> [String; 6] {
    let p = est.probability();
    [
        sci(p),
        sci(p),
        "0".into(),
        sci(est.stderr()),
        est.trials.to_string(),
        seed.to_string(),
    ]
}

pub fn run_simulate(settings: &Settings, threads: Option<usize>, out: Option<&Path>) -> CliResult<()> {
    settings.check(true)?;
    let (grid, points) = settings.grid(DEFAULT_GRID)?;
    let manifest = RunManifest {
        command: "simulate",
        figure: None,
        settings,
        grid,
        columns: &SIMULATE_COLUMNS,
    };
    let mut table = Table::new(&manifest)?;
    let opts = sim_options(settings, threads);
    for &snr in &points {
        let cfg = settings.network.with_snr_db(snr);
        for &scheme in &settings.schemes {
            let result = estimate_outage(&cfg, scheme, &opts)?;
            for &user in &settings.users {
                let mut row = vec![num(snr), scheme.to_string(), user.to_string(), MONTE_CARLO.to_string()];
                row.extend(simulated_fields(&result.user(user), opts.seed));
                table.row(row)?;
            }
        }
    }
    table.emit(out)
}
