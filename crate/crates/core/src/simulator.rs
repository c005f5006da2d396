//! Monte Carlo estimation of near, cooperative-far and direct-only far outage.
//!
//! Every trial draws the pair geometry from the scheme's distance laws, a
//! uniform angle between the two users, and three unit-mean exponential
//! fading gains, then runs the decoding chain through the SINR expressions of
//! [`crate::model`].
//!
//! Trial `i` reads eight 64-bit words starting at word `16 i` (in 32-bit
//! units) of a ChaCha8 stream keyed by the seed, so any trial can be replayed
//! on its own and counts do not depend on how trials are split across threads.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{DistanceLaw, TopologyDraw};
use crate::model::{
    derive_thresholds, information_share, mrc_sinr_far, sinr_far_direct, sinr_near_x1_share,
    snr_near_x2_share, DerivedThresholds, LinkRealization, NetworkConfig, Scheme, UserClass,
};

/// 64-bit words consumed per trial.
pub const WORDS_PER_TRIAL: usize = 8;
/// Trials per parallel work item.
const CHUNK: u64 = 1 << 16;
/// Relative slack on threshold comparisons; the splitting coefficient puts
/// the relay exactly on its threshold, up to rounding.
const THRESHOLD_SLACK: f64 = 1e-12;

/// Distance used for the relay-to-far link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelayDistance {
    /// Law of cosines from the drawn angle.
    #[default]
    Exact,
    /// The base-station-to-far distance, as the closed forms assume.
    FarDistance,
}

impl RelayDistance {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelayDistance::Exact => "exact",
            RelayDistance::FarDistance => "far-distance",
        }
    }
}

impl fmt::Display for RelayDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelayDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "far-distance" | "approx" => Ok(Self::FarDistance),
            other => Err(Error::InvalidArgument(format!("unknown relay distance '{other}'"))),
        }
    }
}

/// Run parameters of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub relay_distance: RelayDistance,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            threads: None,
            relay_distance: RelayDistance::Exact,
        }
    }
}

/// Outage indicators of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialOutcome {
    pub near: bool,
    pub far: bool,
    pub far_noncooperative: bool,
}

/// Empirical outage frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub outages: u64,
    pub trials: u64,
}

impl OutageEstimate {
    pub fn probability(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.outages as f64 / self.trials as f64
    }

    pub fn stderr(&self) -> f64 {
        let p = self.probability();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `(p_hat - reference) / stderr`; infinite when the estimate has no
    /// spread but misses the reference.
    pub fn z_score(&self, reference: f64) -> f64 {
        let gap = self.probability() - reference;
        let se = self.stderr();
        if se > 0.0 {
            gap / se
        } else if gap == 0.0 {
            0.0
        } else {
            gap.signum() * f64::INFINITY
        }
    }
}

/// Estimates for all three user classes from the same trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub near: OutageEstimate,
    pub far: OutageEstimate,
    pub far_noncooperative: OutageEstimate,
    pub seed: u64,
}

impl SimulationResult {
    pub fn user(&self, user: UserClass) -> OutageEstimate {
        match user {
            UserClass::Near => self.near,
            UserClass::Far => self.far,
            UserClass::FarNonCooperative => self.far_noncooperative,
        }
    }

    /// Delay-sensitive throughput from the empirical outages.
    pub fn throughput(&self, cfg: &NetworkConfig) -> f64 {
        crate::analytic::throughput_from_outages(cfg, self.near.probability(), self.far.probability())
    }
}

fn unit_uniform(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn unit_exponential(word: u64) -> f64 {
    -(((word >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)).ln()
}

/// Precomputed per-configuration state shared by all trials.
#[derive(Debug, Clone, Copy)]
pub struct TrialContext {
    cfg: NetworkConfig,
    thresholds: DerivedThresholds,
    near_law: DistanceLaw,
    far_law: DistanceLaw,
    relay_distance: RelayDistance,
}

impl TrialContext {
    pub fn new(cfg: &NetworkConfig, scheme: Scheme, relay_distance: RelayDistance) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg: *cfg,
            thresholds: derive_thresholds(cfg),
            near_law: DistanceLaw::near_for(cfg, scheme),
            far_law: DistanceLaw::far_for(cfg, scheme),
            relay_distance,
        })
    }

    /// Maps the eight words of a trial to its link realization.
    pub fn realize(&self, words: &[u64; WORDS_PER_TRIAL]) -> LinkRealization {
        let d_b = self.near_law.quantile(unit_uniform(words[0]));
        let d_a = self.far_law.quantile(unit_uniform(words[1]));
        let theta = 2.0 * PI * unit_uniform(words[2]);
        let mut topology = TopologyDraw::new(d_a, d_b, theta);
        if self.relay_distance == RelayDistance::FarDistance {
            topology.d_c = d_a;
        }
        // words[6..8] are reserved so the layout can grow without reseeding.
        LinkRealization {
            h_a_sq: unit_exponential(words[3]),
            h_b_sq: unit_exponential(words[4]),
            g_sq: unit_exponential(words[5]),
            topology,
        }
    }

    /// Runs the decoding chain for one realization.
    pub fn evaluate(&self, link: &LinkRealization) -> TrialOutcome {
        let cfg = &self.cfg;
        let th = &self.thresholds;
        let t = &link.topology;
        let tau1 = th.tau1 * (1.0 - THRESHOLD_SLACK);
        let tau2 = th.tau2 * (1.0 - THRESHOLD_SLACK);

        let direct_ok = sinr_far_direct(cfg, link.h_a_sq, t.d_a) >= tau1;
        // Phase one at the near user: split power, then decode x1 and x2.
        let share = information_share(cfg, th, link.h_b_sq, t.d_b).ok();
        let relay = share.filter(|&s| sinr_near_x1_share(cfg, link.h_b_sq, t.d_b, s) >= tau1);
        let near_ok = relay.is_some_and(|s| snr_near_x2_share(cfg, link.h_b_sq, t.d_b, s) >= tau2);
        debug_assert!(
            !(th.near_feasible && relay.is_some()) || near_ok,
            "x2 must follow x1 when eps_a >= eps_b"
        );
        // Phase two: the relay forwards x1 only if it decoded it.
        let far_ok = match relay {
            Some(s) => mrc_sinr_far(cfg, link, 1.0 - s) >= tau1,
            None => direct_ok,
        };
        TrialOutcome {
            near: !near_ok,
            far: !far_ok,
            far_noncooperative: !direct_ok,
        }
    }
}

/// Trial `index` of the stream keyed by `seed`.
pub fn trial_words(seed: u64, index: u64) -> [u64; WORDS_PER_TRIAL] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2 * WORDS_PER_TRIAL as u128);
    std::array::from_fn(|_| rng.next_u64())
}

/// Runs a single trial by index.
pub fn run_trial(
    cfg: &NetworkConfig,
    scheme: Scheme,
    relay_distance: RelayDistance,
    seed: u64,
    index: u64,
) -> Result<TrialOutcome> {
    let ctx = TrialContext::new(cfg, scheme, relay_distance)?;
    Ok(ctx.evaluate(&ctx.realize(&trial_words(seed, index))))
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    near: u64,
    far: u64,
    far_noncooperative: u64,
}

fn count_chunk(ctx: &TrialContext, seed: u64, start: u64, end: u64) -> Counts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(start) * 2 * WORDS_PER_TRIAL as u128);
    let mut counts = Counts::default();
    for _ in start..end {
        let words: [u64; WORDS_PER_TRIAL] = std::array::from_fn(|_| rng.next_u64());
        let o = ctx.evaluate(&ctx.realize(&words));
        counts.near += u64::from(o.near);
        counts.far += u64::from(o.far);
        counts.far_noncooperative += u64::from(o.far_noncooperative);
    }
    counts
}

/// Monte Carlo outage estimates for all three user classes.
pub fn estimate_outage(cfg: &NetworkConfig, scheme: Scheme, opts: &SimOptions) -> Result<SimulationResult> {
    if opts.trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let ctx = TrialContext::new(cfg, scheme, opts.relay_distance)?;
    let chunks = opts.trials.div_ceil(CHUNK);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                count_chunk(&ctx, opts.seed, start, (start + CHUNK).min(opts.trials))
            })
            .reduce(Counts::default, |a, b| Counts {
                near: a.near + b.near,
                far: a.far + b.far,
                far_noncooperative: a.far_noncooperative + b.far_noncooperative,
            })
    };
    let counts = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    let estimate = |outages| OutageEstimate {
        outages,
        trials: opts.trials,
    };
    Ok(SimulationResult {
        near: estimate(counts.near),
        far: estimate(counts.far),
        far_noncooperative: estimate(counts.far_noncooperative),
        seed: opts.seed,
    })
}

/// Estimates over an SNR grid, reusing the same trial stream at every point.
pub fn sweep(
    cfg: &NetworkConfig,
    scheme: Scheme,
    snrs_db: &[f64],
    opts: &SimOptions,
) -> Result<Vec<(f64, SimulationResult)>> {
    snrs_db
        .iter()
        .map(|&snr| Ok((snr, estimate_outage(&cfg.with_snr_db(snr), scheme, opts)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(trials: u64) -> SimOptions {
        SimOptions {
            trials,
            seed: 7,
            ..SimOptions::default()
        }
    }

    #[test]
    fn uniform_and_exponential_maps() {
        assert_eq!(unit_uniform(0), 0.0);
        assert!(unit_uniform(u64::MAX) < 1.0);
        assert!(unit_exponential(u64::MAX) >= 0.0 && unit_exponential(u64::MAX) < 1e-15);
        assert!((unit_exponential(0) - 53.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn thread_count_does_not_change_counts() {
        let cfg = NetworkConfig::default().with_snr_db(20.0);
        let trials = 3 * CHUNK + 123;
        let one = estimate_outage(&cfg, Scheme::Nnff, &SimOptions { threads: Some(1), ..opts(trials) }).unwrap();
        let four = estimate_outage(&cfg, Scheme::Nnff, &SimOptions { threads: Some(4), ..opts(trials) }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn chunked_counts_match_single_trials() {
        let cfg = NetworkConfig::default().with_snr_db(10.0);
        let n = 2000;
        let total = estimate_outage(&cfg, Scheme::Rnrf, &opts(n)).unwrap();
        let mut far = 0;
        for i in 0..n {
            far += u64::from(run_trial(&cfg, Scheme::Rnrf, RelayDistance::Exact, 7, i).unwrap().far);
        }
        assert_eq!(total.far.outages, far);
    }

    #[test]
    fn seeds_change_the_stream() {
        assert_ne!(trial_words(1, 0), trial_words(2, 0));
        assert_ne!(trial_words(1, 0), trial_words(1, 1));
        assert_eq!(trial_words(1, 5), trial_words(1, 5));
    }

    #[test]
    fn infeasible_rates_always_fail_near_user() {
        let cfg = NetworkConfig {
            r1: 0.5,
            r2: 1.0,
            ..NetworkConfig::default()
        }
        .with_snr_db(60.0);
        let r = estimate_outage(&cfg, Scheme::Nnnf, &opts(20_000)).unwrap();
        assert_eq!(r.near.outages, r.near.trials);
        let no_sic = NetworkConfig { r1: 2.0, ..cfg };
        let r = estimate_outage(&no_sic, Scheme::Rnrf, &opts(20_000)).unwrap();
        assert_eq!(r.far.outages, r.far.trials);
        assert_eq!(r.far_noncooperative.outages, r.far.trials);
    }

    #[test]
    fn relaying_never_hurts() {
        let cfg = NetworkConfig::default().with_snr_db(25.0);
        let mut any_gain = false;
        for i in 0..5000 {
            let o = run_trial(&cfg, Scheme::Rnrf, RelayDistance::Exact, 3, i).unwrap();
            assert!(!o.far || o.far_noncooperative);
            any_gain |= o.far_noncooperative && !o.far;
        }
        assert!(any_gain);
    }

    #[test]
    fn no_harvesting_means_no_cooperation_gain() {
        let cfg = NetworkConfig { eta: 0.0, ..NetworkConfig::default() }.with_snr_db(20.0);
        let r = estimate_outage(&cfg, Scheme::Rnrf, &opts(50_000)).unwrap();
        assert_eq!(r.far.outages, r.far_noncooperative.outages);
    }

    #[test]
    fn near_outage_matches_closed_form() {
        let cfg = NetworkConfig::default().with_snr_db(30.0);
        let exact = crate::analytic::outage_near_rnrf(&cfg, &Default::default()).unwrap().probability;
        let r = estimate_outage(&cfg, Scheme::Rnrf, &opts(400_000)).unwrap();
        assert!(r.near.z_score(exact).abs() < 4.0, "{:?} vs {exact}", r.near);
    }

    #[test]
    fn relay_distance_toggle_changes_only_far_user() {
        let cfg = NetworkConfig::default().with_snr_db(20.0);
        let exact = estimate_outage(&cfg, Scheme::Rnrf, &opts(50_000)).unwrap();
        let approx = estimate_outage(
            &cfg,
            Scheme::Rnrf,
            &SimOptions {
                relay_distance: RelayDistance::FarDistance,
                ..opts(50_000)
            },
        )
        .unwrap();
        assert_eq!(exact.near, approx.near);
        assert_eq!(exact.far_noncooperative, approx.far_noncooperative);
        assert_ne!(exact.far, approx.far);
    }

    #[test]
    fn estimate_statistics() {
        let e = OutageEstimate { outages: 25, trials: 100 };
        assert_eq!(e.probability(), 0.25);
        assert!((e.stderr() - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        let zero = OutageEstimate { outages: 0, trials: 100 };
        assert_eq!(zero.z_score(0.0), 0.0);
        assert!(zero.z_score(0.1).is_infinite());
        assert!(estimate_outage(&NetworkConfig::default(), Scheme::Rnrf, &opts(0)).is_err());
    }

    #[test]
    fn sweep_reports_each_point() {
        let cfg = NetworkConfig::default();
        let pts = sweep(&cfg, Scheme::Nnnf, &[0.0, 10.0, 20.0], &opts(10_000)).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts[0].1.far.probability() >= pts[2].1.far.probability());
    }

    #[test]
    fn relay_distance_parsing() {
        for r in [RelayDistance::Exact, RelayDistance::FarDistance] {
            assert_eq!(r.as_str().parse::<RelayDistance>().unwrap(), r);
        }
    }
}
