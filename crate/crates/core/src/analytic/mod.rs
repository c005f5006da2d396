//! Closed-form and quadrature outage probabilities, high-SNR approximations,
//! throughput and diversity fits, plus an exact-integral reference.
//!
//! Far-user expressions split the outage into `theta1` (relay decodes, the
//! combined SINR still falls short) and `theta2` (neither relay nor far user
//! decodes). `theta1` uses the small-argument Bessel expansion and the
//! `d_C ~ d_A` approximation, so those forms are high-SNR approximations.

mod constants;
mod diversity;
mod oracle;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub use constants::{AuxiliaryConstants, NodeSet};
pub use diversity::{diversity_fit, DiversityFit, DiversityModel};
pub use oracle::{
    far_cdf_exact, near_cdf_exact, outage_far_oracle, outage_far_rnrf_oracle, OracleBreakdown,
    OracleOptions,
};

use crate::error::{Error, Result};
use crate::geometry::DistanceLaw;
use crate::model::{derive_thresholds, require_sic, NetworkConfig, Scheme};
use crate::numerics::QuadratureSpec;

/// Which form of an outage expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Closed form when `alpha = 2`, general quadrature otherwise.
    Auto,
    /// Gaussian-Chebyshev quadrature valid for any `alpha`.
    Quadrature,
    /// Exact `alpha = 2` specialization.
    ClosedForm,
    /// First-order expansion in `eps_a`.
    HighSnr,
    /// Adaptive integration of the exact expression.
    Oracle,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Auto => "auto",
            Variant::Quadrature => "quadrature",
            Variant::ClosedForm => "closed-form",
            Variant::HighSnr => "high-snr",
            Variant::Oracle => "oracle",
        }
    }

    /// Concrete form used for a given path-loss exponent.
    pub fn resolve(self, alpha: f64) -> Variant {
        match self {
            Variant::Auto if alpha == 2.0 => Variant::ClosedForm,
            Variant::Auto => Variant::Quadrature,
            other => other,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(Variant::Auto),
            "quadrature" => Ok(Variant::Quadrature),
            "closed-form" | "closed" => Ok(Variant::ClosedForm),
            "high-snr" => Ok(Variant::HighSnr),
            "oracle" => Ok(Variant::Oracle),
            other => Err(Error::InvalidArgument(format!("unknown variant '{other}'"))),
        }
    }
}

/// An outage probability clamped to `[0, 1]`, with the unclamped value kept
/// for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageValue {
    pub probability: f64,
    pub raw: f64,
    pub out_of_range: bool,
}

impl OutageValue {
    pub fn from_raw(raw: f64) -> Self {
        let probability = raw.clamp(0.0, 1.0);
        Self {
            probability,
            raw,
            out_of_range: !(0.0..=1.0).contains(&raw),
        }
    }

    /// Outage with certainty, e.g. for infeasible rates.
    pub fn certain() -> Self {
        Self::from_raw(1.0)
    }
}

fn require_closed_form(cfg: &NetworkConfig) -> Result<()> {
    if cfg.alpha != 2.0 {
        return Err(Error::InvalidArgument(format!(
            "closed-form expressions need alpha = 2, got {}",
            cfg.alpha
        )));
    }
    Ok(())
}

/// `alpha = 2` CDF of the near user's channel `Pr(|h_B|^2 / L_B < eps)`.
pub fn near_cdf_closed_form(cfg: &NetworkConfig, scheme: Scheme, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    let rb2 = cfg.r_db * cfg.r_db;
    match scheme {
        // 1 - e^{-eps}/(R^2 eps) + e^{-(1+R^2) eps}/(R^2 eps)
        Scheme::Rnrf => 1.0 + (-eps).exp() * (-rb2 * eps).exp_m1() / (rb2 * eps),
        Scheme::Nnnf | Scheme::Nnff => {
            let k = PI * cfg.lambda_b;
            let xi_b = DistanceLaw::xi(cfg.lambda_b, 0.0, cfg.r_db);
            1.0 + xi_b * (-eps).exp() * (-(k + eps) * rb2).exp_m1() / (2.0 * (k + eps))
        }
    }
}

/// `alpha = 2` CDF of the far user's direct channel `Pr(|h_A|^2 / L_A < eps)`.
pub fn far_cdf_closed_form(cfg: &NetworkConfig, scheme: Scheme, eps: f64) -> f64 {
    if eps <= 0.0 {
        return 0.0;
    }
    let (ra2, rc2) = (cfg.r_da * cfg.r_da, cfg.r_dc * cfg.r_dc);
    let w = ra2 - rc2;
    let k = PI * cfg.lambda_a;
    let xi_a = DistanceLaw::xi(cfg.lambda_a, cfg.r_dc, cfg.r_da);
    match scheme {
        Scheme::Rnrf => 1.0 + (-(1.0 + rc2) * eps).exp() * (-w * eps).exp_m1() / (eps * w),
        Scheme::Nnnf => {
            1.0 + xi_a * (-(1.0 + rc2) * eps).exp() * (-(k + eps) * w).exp_m1() / (2.0 * (k + eps))
        }
        Scheme::Nnff => {
            let a = k - eps;
            // (1 - e^{-a W}) / a, continuous through a = 0.
            let g = if (a * w).abs() < 1e-12 { w } else { -(-a * w).exp_m1() / a };
            1.0 - xi_a * (-(1.0 + ra2) * eps).exp() * g / 2.0
        }
    }
}

/// Near user's channel CDF under a scheme and form.
pub fn near_channel_cdf(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
    eps: f64,
) -> Result<f64> {
    cfg.validate()?;
    quad.validate()?;
    if eps < 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be non-negative, got {eps}")));
    }
    match variant.resolve(cfg.alpha) {
        Variant::ClosedForm => {
            require_closed_form(cfg)?;
            Ok(near_cdf_closed_form(cfg, scheme, eps))
        }
        Variant::Oracle => near_cdf_exact(cfg, scheme, eps, &OracleOptions::default()),
        form => {
            let nodes = near_nodes(cfg, quad, scheme)?;
            Ok(if form == Variant::HighSnr {
                nodes.cdf_linear(eps)
            } else {
                nodes.cdf(eps)
            })
        }
    }
}

/// Near-user disc nodes; unlike [`AuxiliaryConstants`] these do not depend on
/// the rates, so they are available even when SIC is infeasible.
fn near_nodes(cfg: &NetworkConfig, quad: &QuadratureSpec, scheme: Scheme) -> Result<NodeSet> {
    let rule = crate::numerics::ChebyshevRule::new(quad.n_b)?;
    let roots = rule.root_factors();
    let radii: Vec<f64> = rule.nodes().iter().map(|p| 0.5 * cfg.r_db * (p + 1.0)).collect();
    let losses = radii.iter().map(|&c| cfg.path_loss(c)).collect();
    Ok(match scheme {
        Scheme::Rnrf => NodeSet {
            scale: rule.weight() / 2.0,
            weights: roots.zip(rule.nodes()).map(|(r, p)| r * (p + 1.0)).collect(),
            losses,
        },
        Scheme::Nnnf | Scheme::Nnff => NodeSet {
            scale: DistanceLaw::xi(cfg.lambda_b, 0.0, cfg.r_db) * rule.weight() * cfg.r_db / 2.0,
            weights: roots
                .zip(&radii)
                .map(|(r, &c)| r * c * (-PI * cfg.lambda_b * c * c).exp())
                .collect(),
            losses,
        },
    })
}

/// `F_Y(eps)` for random near users: quadrature form, or the exact form when
/// `alpha = 2`.
pub fn cdf_near_channel(eps: f64, cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<f64> {
    near_channel_cdf(cfg, quad, Scheme::Rnrf, Variant::Auto, eps)
}

/// Near-user outage probability. Exactly 1 when the rates are infeasible.
pub fn outage_near(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
) -> Result<OutageValue> {
    cfg.validate()?;
    let th = derive_thresholds(cfg);
    if variant.resolve(cfg.alpha) == Variant::ClosedForm {
        require_closed_form(cfg)?;
    }
    if !th.near_feasible {
        return Ok(OutageValue::certain());
    }
    near_channel_cdf(cfg, quad, scheme, variant, th.eps_a).map(OutageValue::from_raw)
}

pub fn outage_near_rnrf(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<OutageValue> {
    outage_near(cfg, quad, Scheme::Rnrf, Variant::Auto)
}

pub fn outage_near_nnnf(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<OutageValue> {
    outage_near(cfg, quad, Scheme::Nnnf, Variant::Auto)
}

/// Linear-in-`eps_a` near-user outage.
pub fn outage_near_high_snr(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
) -> Result<OutageValue> {
    outage_near(cfg, quad, scheme, Variant::HighSnr)
}

/// Triple sum of the relay term:
/// `pre * sum_n w_n L_n sum_k w_k L_k^2 sum_m sqrt(1-varphi_m^2) e^{-L_k t_m}
///  chi_m (ln(chi_m L_k L_n / (eta rho)) + 2 c0)`.
fn theta1_sum(aux: &AuxiliaryConstants, prefactor: f64, near: &NodeSet, far: &NodeSet) -> f64 {
    let roots: Vec<f64> = aux.varphi_roots().collect();
    let eta_rho = aux.eta_rho();
    let two_c0 = 2.0 * aux.c0;
    let mut total = 0.0;
    for (&wn, &ln) in near.weights.iter().zip(&near.losses) {
        let mut over_k = 0.0;
        for (&wk, &lk) in far.weights.iter().zip(&far.losses) {
            let mut over_m = 0.0;
            for ((&root, &t), &chi) in roots.iter().zip(&aux.t_m).zip(&aux.chi_tm) {
                over_m += root * (-lk * t).exp() * chi * ((chi * lk * ln / eta_rho).ln() + two_c0);
            }
            over_k += wk * lk * lk * over_m;
        }
        total += wn * ln * over_k;
    }
    prefactor * total
}

/// `alpha = 2` random-pair relay term with the disc integral done exactly:
/// `zeta2 sum_k w_k L_k^2 sum_m sqrt(1-varphi_m^2) chi_m e^{-L_k t_m}
///  (ln(chi_m L_k / (eta rho)) + 2 b0 / (R_DB^2 + 2))`.
fn theta1_rnrf_alpha2(aux: &AuxiliaryConstants, cfg: &NetworkConfig, far: &NodeSet) -> f64 {
    let roots: Vec<f64> = aux.varphi_roots().collect();
    let eta_rho = aux.eta_rho();
    let offset = 2.0 * aux.b0 / (cfg.r_db * cfg.r_db + 2.0);
    let mut total = 0.0;
    for (&wk, &lk) in far.weights.iter().zip(&far.losses) {
        let mut over_m = 0.0;
        for ((&root, &t), &chi) in roots.iter().zip(&aux.t_m).zip(&aux.chi_tm) {
            over_m += root * chi * (-lk * t).exp() * ((chi * lk / eta_rho).ln() + offset);
        }
        total += wk * lk * lk * over_m;
    }
    aux.zeta2 * total
}

/// Relay-term prefactor (`zeta1` or `varsigma*`) for a scheme.
fn theta1_prefactor(aux: &AuxiliaryConstants, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Rnrf => aux.zeta1,
        Scheme::Nnnf | Scheme::Nnff => aux.varsigma_star,
    }
}

/// The two parts of a far-user outage evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarOutageParts {
    pub theta1: f64,
    pub theta2: f64,
}

impl FarOutageParts {
    pub fn total(&self) -> f64 {
        self.theta1 + self.theta2
    }
}

fn require_relay(cfg: &NetworkConfig) -> Result<()> {
    if cfg.eta <= 0.0 {
        return Err(Error::InvalidConfig(
            "the approximate far-user expressions need eta > 0; use the oracle for eta = 0".into(),
        ));
    }
    Ok(())
}

/// Far-user outage split into its two terms.
pub fn outage_far_parts(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
) -> Result<FarOutageParts> {
    let variant = variant.resolve(cfg.alpha);
    if variant == Variant::Oracle {
        let b = outage_far_oracle(cfg, scheme, &OracleOptions::default())?;
        return Ok(FarOutageParts {
            theta1: b.theta1,
            theta2: b.theta2,
        });
    }
    cfg.validate()?;
    require_sic(cfg)?;
    require_relay(cfg)?;
    if variant == Variant::ClosedForm {
        require_closed_form(cfg)?;
    }
    let aux = AuxiliaryConstants::new(cfg, quad)?;
    let near = NodeSet::near(&aux, cfg, scheme);
    let far = NodeSet::far(&aux, cfg, scheme);
    let eps = aux.eps_a;
    let theta1 = if variant == Variant::ClosedForm && scheme == Scheme::Rnrf {
        theta1_rnrf_alpha2(&aux, cfg, &far)
    } else {
        theta1_sum(&aux, theta1_prefactor(&aux, scheme), &near, &far)
    };
    let theta2 = match variant {
        Variant::ClosedForm => far_cdf_closed_form(cfg, scheme, eps) * near_cdf_closed_form(cfg, scheme, eps),
        Variant::HighSnr => {
            let scale = match scheme {
                Scheme::Rnrf => aux.a1,
                Scheme::Nnnf => aux.b2 * aux.b3,
                Scheme::Nnff => aux.b3 * aux.b4,
            };
            scale * far.sum(|l| l) * near.sum(|l| l)
        }
        _ => far.cdf(eps) * near.cdf(eps),
    };
    Ok(FarOutageParts { theta1, theta2 })
}

/// Cooperative far-user outage probability (clamped, raw value kept).
pub fn outage_far(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
) -> Result<OutageValue> {
    outage_far_parts(cfg, quad, scheme, variant).map(|p| OutageValue::from_raw(p.total()))
}

pub fn outage_far_rnrf(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<OutageValue> {
    outage_far(cfg, quad, Scheme::Rnrf, Variant::Auto)
}

pub fn outage_far_nnnf(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<OutageValue> {
    outage_far(cfg, quad, Scheme::Nnnf, Variant::Auto)
}

pub fn outage_far_nnff(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<OutageValue> {
    outage_far(cfg, quad, Scheme::Nnff, Variant::Auto)
}

/// Far-user outage without relaying, `Pr(X < eps_a)`. With infeasible SIC the
/// direct SINR never reaches `tau1`, so the outage is 1.
pub fn outage_far_noncooperative_with(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
) -> Result<OutageValue> {
    cfg.validate()?;
    quad.validate()?;
    let th = derive_thresholds(cfg);
    let variant = variant.resolve(cfg.alpha);
    if variant == Variant::ClosedForm {
        require_closed_form(cfg)?;
    }
    if !th.sic_feasible {
        return Ok(OutageValue::certain());
    }
    let eps = th.eps_a;
    let raw = match variant {
        Variant::ClosedForm => far_cdf_closed_form(cfg, scheme, eps),
        Variant::Oracle => far_cdf_exact(cfg, scheme, eps, &OracleOptions::default())?,
        form => {
            let aux = AuxiliaryConstants::new(cfg, quad)?;
            let far = NodeSet::far(&aux, cfg, scheme);
            if form == Variant::HighSnr {
                far.cdf_linear(eps)
            } else {
                far.cdf(eps)
            }
        }
    };
    Ok(OutageValue::from_raw(raw))
}

pub fn outage_far_noncooperative(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
) -> Result<OutageValue> {
    outage_far_noncooperative_with(cfg, quad, scheme, Variant::Auto)
}

/// Delay-sensitive throughput `(1 - P_far) R1 + (1 - P_near) R2` for a
/// given form. Infeasible SIC counts as certain outage for both users.
pub fn throughput_with(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
    variant: Variant,
) -> Result<f64> {
    let near = outage_near(cfg, quad, scheme, variant)?.probability;
    let far = match outage_far(cfg, quad, scheme, variant) {
        Ok(v) => v.probability,
        Err(Error::InfeasibleSic { .. }) => 1.0,
        Err(e) => return Err(e),
    };
    Ok(throughput_from_outages(cfg, near, far))
}

pub fn throughput_from_outages(cfg: &NetworkConfig, p_near: f64, p_far: f64) -> f64 {
    (1.0 - p_far) * cfg.r1 + (1.0 - p_near) * cfg.r2
}

pub fn throughput_delay_sensitive(
    cfg: &NetworkConfig,
    quad: &QuadratureSpec,
    scheme: Scheme,
) -> Result<f64> {
    throughput_with(cfg, quad, scheme, Variant::Auto)
}
