//! Network parameterization, NOMA decoding thresholds and the per-link
//! arithmetic of the two-phase protocol.
//!
//! Noise power is normalized to one, so the transmit SNR `rho` is also the
//! source power. Every link uses the bounded path loss `1 + d^alpha`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::TopologyDraw;

/// User-pair selection scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Random near user, random far user.
    Rnrf,
    /// Nearest near user, nearest far user.
    Nnnf,
    /// Nearest near user, farthest far user.
    Nnff,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Rnrf, Scheme::Nnnf, Scheme::Nnff];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Rnrf => "rnrf",
            Scheme::Nnnf => "nnnf",
            Scheme::Nnff => "nnff",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rnrf" => Ok(Scheme::Rnrf),
            "nnnf" => Ok(Scheme::Nnnf),
            "nnff" => Ok(Scheme::Nnff),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Which user's outage is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UserClass {
    Near,
    /// Far user combining the direct and relayed copies.
    Far,
    /// Far user relying on the direct link alone.
    FarNonCooperative,
}

impl UserClass {
    pub const ALL: [UserClass; 3] = [UserClass::Near, UserClass::Far, UserClass::FarNonCooperative];

    pub fn as_str(&self) -> &'static str {
        match self {
            UserClass::Near => "near",
            UserClass::Far => "far",
            UserClass::FarNonCooperative => "far-noncoop",
        }
    }
}

impl fmt::Display for UserClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UserClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "near" => Ok(UserClass::Near),
            "far" => Ok(UserClass::Far),
            "far-noncoop" => Ok(UserClass::FarNonCooperative),
            other => Err(Error::InvalidArgument(format!("unknown user '{other}'"))),
        }
    }
}

/// Full parameterization of the cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// Outer radius of the far-user ring (m).
    pub r_da: f64,
    /// Inner radius of the far-user ring (m).
    pub r_dc: f64,
    /// Radius of the near-user disc (m).
    pub r_db: f64,
    /// Far-user PPP intensity (users/m^2).
    pub lambda_a: f64,
    /// Near-user PPP intensity (users/m^2).
    pub lambda_b: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Energy conversion efficiency.
    pub eta: f64,
    /// Far-user power coefficient `|p1|^2`.
    pub p1_sq: f64,
    /// Near-user power coefficient `|p2|^2`.
    pub p2_sq: f64,
    /// Far-user target rate (BPCU).
    pub r1: f64,
    /// Near-user target rate (BPCU).
    pub r2: f64,
    /// Linear transmit SNR.
    pub rho: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            r_da: 10.0,
            r_dc: 8.0,
            r_db: 2.0,
            lambda_a: 1.0,
            lambda_b: 1.0,
            alpha: 2.0,
            eta: 0.7,
            p1_sq: 0.8,
            p2_sq: 0.2,
            r1: 1.0,
            r2: 0.5,
            rho: 1000.0,
        }
    }
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl NetworkConfig {
    /// Copy with the transmit SNR given in dB.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.rho = db_to_linear(snr_db);
        self
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.rho)
    }

    /// Checks the structural invariants. Rates that make SIC infeasible are
    /// valid configurations; infeasibility is reported through
    /// [`DerivedThresholds`].
    ///
    /// `eta = 0` is accepted so that the relay can be switched off.
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.r_da,
            self.r_dc,
            self.r_db,
            self.lambda_a,
            self.lambda_b,
            self.alpha,
            self.eta,
            self.p1_sq,
            self.p2_sq,
            self.r1,
            self.r2,
            self.rho,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("all parameters must be finite".into()));
        }
        if !(0.0 < self.r_db && self.r_db < self.r_dc && self.r_dc < self.r_da) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < r_db < r_dc < r_da, got r_db={}, r_dc={}, r_da={}",
                self.r_db, self.r_dc, self.r_da
            )));
        }
        if self.lambda_a <= 0.0 || self.lambda_b <= 0.0 {
            return Err(Error::InvalidConfig("densities must be positive".into()));
        }
        if self.alpha < 2.0 {
            return Err(Error::InvalidConfig(format!(
                "path-loss exponent must be at least 2, got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidConfig(format!(
                "eta must lie in [0, 1], got {}",
                self.eta
            )));
        }
        if self.p2_sq <= 0.0 || self.p1_sq <= self.p2_sq {
            return Err(Error::InvalidConfig(format!(
                "need p1_sq > p2_sq > 0, got {} and {}",
                self.p1_sq, self.p2_sq
            )));
        }
        if (self.p1_sq + self.p2_sq - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "power coefficients must sum to 1, got {}",
                self.p1_sq + self.p2_sq
            )));
        }
        if self.r1 < 0.0 || self.r2 < 0.0 {
            return Err(Error::InvalidConfig("rates must be non-negative".into()));
        }
        if self.rho <= 0.0 {
            return Err(Error::InvalidConfig("rho must be positive".into()));
        }
        Ok(())
    }

    /// Bounded path loss `1 + d^alpha`.
    pub fn path_loss(&self, d: f64) -> f64 {
        1.0 + d.powf(self.alpha)
    }
}

/// SINR thresholds and feasibility flags derived from a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedThresholds {
    pub tau1: f64,
    pub tau2: f64,
    /// `tau1 / (rho (p1_sq - p2_sq tau1))`; NaN when SIC is infeasible.
    pub eps_a: f64,
    /// `tau2 / (rho p2_sq)`.
    pub eps_b: f64,
    pub sic_feasible: bool,
    /// `eps_a >= eps_b`; always false when SIC is infeasible.
    pub near_feasible: bool,
}

/// `tau = 2^{2R} - 1`: the two phases halve the rate.
pub fn rate_threshold(rate: f64) -> f64 {
    (2.0 * rate).exp2() - 1.0
}

pub fn derive_thresholds(cfg: &NetworkConfig) -> DerivedThresholds {
    let tau1 = rate_threshold(cfg.r1);
    let tau2 = rate_threshold(cfg.r2);
    let margin = cfg.p1_sq - cfg.p2_sq * tau1;
    let sic_feasible = margin > 0.0;
    let eps_a = if sic_feasible {
        tau1 / (cfg.rho * margin)
    } else {
        f64::NAN
    };
    let eps_b = tau2 / (cfg.rho * cfg.p2_sq);
    DerivedThresholds {
        tau1,
        tau2,
        eps_a,
        eps_b,
        sic_feasible,
        near_feasible: sic_feasible && eps_a >= eps_b,
    }
}

/// Fails with [`Error::InfeasibleSic`] when `p1_sq - p2_sq tau1 <= 0`.
pub fn require_sic(cfg: &NetworkConfig) -> Result<DerivedThresholds> {
    let th = derive_thresholds(cfg);
    if th.sic_feasible {
        Ok(th)
    } else {
        Err(Error::InfeasibleSic {
            tau1: th.tau1,
            margin: cfg.p1_sq - cfg.p2_sq * th.tau1,
        })
    }
}

/// Channel gains of one trial together with its geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRealization {
    pub h_a_sq: f64,
    pub h_b_sq: f64,
    pub g_sq: f64,
    pub topology: TopologyDraw,
}

/// SINR at the far user for its own symbol on the direct link.
pub fn sinr_far_direct(cfg: &NetworkConfig, h_a_sq: f64, d_a: f64) -> f64 {
    let s = cfg.rho * h_a_sq;
    s * cfg.p1_sq / (s * cfg.p2_sq + cfg.path_loss(d_a))
}

/// SINR at the near user for the far user's symbol after power splitting.
pub fn sinr_near_x1(cfg: &NetworkConfig, h_b_sq: f64, d_b: f64, beta: f64) -> f64 {
    sinr_near_x1_share(cfg, h_b_sq, d_b, 1.0 - beta)
}

/// [`sinr_near_x1`] given the information share `1 - beta` directly, which
/// avoids cancellation when `beta` is close to one.
pub fn sinr_near_x1_share(cfg: &NetworkConfig, h_b_sq: f64, d_b: f64, share: f64) -> f64 {
    let s = cfg.rho * h_b_sq * share;
    s * cfg.p1_sq / (s * cfg.p2_sq + cfg.path_loss(d_b))
}

/// SNR at the near user for its own symbol once the far symbol is cancelled.
pub fn snr_near_x2(cfg: &NetworkConfig, h_b_sq: f64, d_b: f64, beta: f64) -> f64 {
    snr_near_x2_share(cfg, h_b_sq, d_b, 1.0 - beta)
}

/// [`snr_near_x2`] given the information share `1 - beta`.
pub fn snr_near_x2_share(cfg: &NetworkConfig, h_b_sq: f64, d_b: f64, share: f64) -> f64 {
    cfg.rho * h_b_sq * cfg.p2_sq * share / cfg.path_loss(d_b)
}

/// Smallest harvesting share that still leaves exactly `tau1` for decoding
/// the far symbol, clamped at zero.
pub fn power_splitting_coefficient(
    cfg: &NetworkConfig,
    thresholds: &DerivedThresholds,
    h_b_sq: f64,
    d_b: f64,
) -> Result<f64> {
    information_share(cfg, thresholds, h_b_sq, d_b).map(|share| 1.0 - share)
}

/// `1 - beta`: the received power share kept for decoding, capped at one.
pub fn information_share(
    cfg: &NetworkConfig,
    thresholds: &DerivedThresholds,
    h_b_sq: f64,
    d_b: f64,
) -> Result<f64> {
    let margin = cfg.p1_sq - thresholds.tau1 * cfg.p2_sq;
    if margin <= 0.0 {
        return Err(Error::InfeasibleSic {
            tau1: thresholds.tau1,
            margin,
        });
    }
    let ratio = thresholds.tau1 * cfg.path_loss(d_b) / (cfg.rho * margin * h_b_sq);
    Ok(ratio.min(1.0))
}

/// SNR of the relayed copy at the far user.
pub fn relay_snr(
    cfg: &NetworkConfig,
    h_b_sq: f64,
    g_sq: f64,
    d_b: f64,
    d_c: f64,
    beta: f64,
) -> f64 {
    cfg.eta * cfg.rho * beta * h_b_sq * g_sq / (cfg.path_loss(d_c) * cfg.path_loss(d_b))
}

/// Far-user SINR after maximal-ratio combining of the direct and relayed copies.
pub fn mrc_sinr_far(cfg: &NetworkConfig, link: &LinkRealization, beta: f64) -> f64 {
    let t = &link.topology;
    sinr_far_direct(cfg, link.h_a_sq, t.d_a) + relay_snr(cfg, link.h_b_sq, link.g_sq, t.d_b, t.d_c, beta)
}
