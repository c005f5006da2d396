//! Exact-integral reference for the far-user outage.
//!
//! The relay term keeps the Bessel kernel
//! `Xi = e^{-L_B eps_a} (1 - z K1(z))`, `z = 2 sqrt(chi(x) L_A L_B / (eta rho))`,
//! and integrates it adaptively over `x in [0, eps_a]`, then over the far and
//! near distance laws. Like the closed forms it takes the relay-to-far distance
//! equal to the base-station-to-far distance; the Monte Carlo engine can drop
//! that assumption to measure its effect.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::geometry::DistanceLaw;
use crate::model::{require_sic, NetworkConfig, Scheme};
use crate::numerics::{integrate_adaptive, one_minus_x_k1, Tolerance};

/// Tolerances of the nested adaptive integrations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Target for the outermost (near-distance) integral and the CDFs.
    pub outer: Tolerance,
    /// Target for the far-distance integral.
    pub middle: Tolerance,
    /// Target for the integral over the direct-link gain.
    pub inner: Tolerance,
}

impl Default for OracleOptions {
    fn default() -> Self {
        let tol = |rel| Tolerance {
            abs: 1e-300,
            rel,
            max_intervals: 400,
        };
        Self {
            outer: tol(1e-8),
            middle: tol(1e-9),
            inner: tol(1e-10),
        }
    }
}

/// Both parts of the exact far-user outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBreakdown {
    pub theta1: f64,
    pub theta2: f64,
    pub value: f64,
}

/// Runs an integral whose integrand may itself fail; the first inner error
/// is reported instead of the outer one it causes.
fn integrate_fallible<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let outcome = integrate_adaptive(
        |t| match f(t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outcome.map(|i| i.value)
}

fn channel_cdf(law: DistanceLaw, alpha: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    if eps <= 0.0 {
        return Ok(0.0);
    }
    let (a, b) = law.support();
    integrate_fallible(
        |r| Ok(-(-(1.0 + r.powf(alpha)) * eps).exp_m1() * law.pdf(r)),
        a,
        b,
        tol,
    )
}

/// `Pr(|h_B|^2 / L_B < eps)` by adaptive integration over the near-user law.
pub fn near_cdf_exact(cfg: &NetworkConfig, scheme: Scheme, eps: f64, opts: &OracleOptions) -> Result<f64> {
    cfg.validate()?;
    channel_cdf(DistanceLaw::near_for(cfg, scheme), cfg.alpha, eps, opts.outer)
}

/// `Pr(|h_A|^2 / L_A < eps)` by adaptive integration over the far-user law.
pub fn far_cdf_exact(cfg: &NetworkConfig, scheme: Scheme, eps: f64, opts: &OracleOptions) -> Result<f64> {
    cfg.validate()?;
    channel_cdf(DistanceLaw::far_for(cfg, scheme), cfg.alpha, eps, opts.outer)
}

/// Exact far-user outage for any scheme and path-loss exponent.
pub fn outage_far_oracle(cfg: &NetworkConfig, scheme: Scheme, opts: &OracleOptions) -> Result<OracleBreakdown> {
    cfg.validate()?;
    let th = require_sic(cfg)?;
    let eps = th.eps_a;
    let near = DistanceLaw::near_for(cfg, scheme);
    let far = DistanceLaw::far_for(cfg, scheme);
    let f_x = channel_cdf(far, cfg.alpha, eps, opts.outer)?;
    let f_y = channel_cdf(near, cfg.alpha, eps, opts.outer)?;
    let theta2 = f_x * f_y;

    let theta1 = if cfg.eta == 0.0 {
        // Nothing is forwarded: outage whenever the direct link fails.
        f_x * (1.0 - f_y)
    } else {
        let eta_rho = cfg.eta * cfg.rho;
        let chi = |x: f64| {
            let s = cfg.rho * x;
            (th.tau1 - s * cfg.p1_sq / (s * cfg.p2_sq + 1.0)).max(0.0)
        };
        // Integral over x of L_A e^{-L_A x} (1 - z K1(z)).
        let over_x = |loss_a: f64, loss_b: f64| {
            integrate_fallible(
                |x| {
                    let z = 2.0 * (chi(x) * loss_a * loss_b / eta_rho).sqrt();
                    Ok(loss_a * (-loss_a * x).exp() * one_minus_x_k1(z)?)
                },
                0.0,
                eps,
                opts.inner,
            )
        };
        let (a_lo, a_hi) = far.support();
        let (b_lo, b_hi) = near.support();
        integrate_fallible(
            |r_b| {
                let pdf_b = near.pdf(r_b);
                if pdf_b == 0.0 {
                    return Ok(0.0);
                }
                let loss_b = cfg.path_loss(r_b);
                let over_a = integrate_fallible(
                    |r_a| {
                        let pdf_a = far.pdf(r_a);
                        if pdf_a == 0.0 {
                            return Ok(0.0);
                        }
                        Ok(pdf_a * over_x(cfg.path_loss(r_a), loss_b)?)
                    },
                    a_lo,
                    a_hi,
                    opts.middle,
                )?;
                Ok(pdf_b * (-loss_b * eps).exp() * over_a)
            },
            b_lo,
            b_hi,
            opts.outer,
        )?
    };
    Ok(OracleBreakdown {
        theta1,
        theta2,
        value: theta1 + theta2,
    })
}

/// Exact far-user outage for randomly selected users.
pub fn outage_far_rnrf_oracle(cfg: &NetworkConfig) -> Result<f64> {
    outage_far_oracle(cfg, Scheme::Rnrf, &OracleOptions::default()).map(|b| b.value)
}
