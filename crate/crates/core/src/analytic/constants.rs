//! Constants and Gaussian-Chebyshev node sets shared by the closed-form
//! expressions.

use std::f64::consts::PI;

use crate::error::Result;
use crate::geometry::DistanceLaw;
use crate::model::{require_sic, NetworkConfig, Scheme};
use crate::numerics::{c0_constant, ChebyshevRule, QuadratureSpec};

/// Every named constant of the outage expressions for one configuration.
///
/// Where the published constant carries a wrong geometric factor the value
/// stored here is the one obtained by applying the quadrature rule to the
/// underlying integral (see the field docs).
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryConstants {
    pub tau1: f64,
    pub tau2: f64,
    pub eps_a: f64,
    pub eps_b: f64,
    pub c0: f64,
    pub omega_n: f64,
    pub omega_k: f64,
    pub omega_m: f64,
    /// Disc nodes `phi_n`.
    pub phi: Vec<f64>,
    /// Ring nodes `psi_k`.
    pub psi: Vec<f64>,
    /// Threshold nodes `varphi_m`.
    pub varphi: Vec<f64>,
    /// `c_{n*} = R_DB (phi_n + 1) / 2`.
    pub c_n_star: Vec<f64>,
    /// `c_n = 1 + c_{n*}^alpha`.
    pub c_n: Vec<f64>,
    /// `s_k = (R_DA - R_DC)(psi_k + 1)/2 + R_DC`.
    pub s_k: Vec<f64>,
    /// `t_m = eps_a (varphi_m + 1) / 2`.
    pub t_m: Vec<f64>,
    /// `chi(t_m)`.
    pub chi_tm: Vec<f64>,
    pub xi_a: f64,
    pub xi_b: f64,
    /// `-eps_a w_N w_K w_M / (4 (R_DA + R_DC) eta rho)`.
    pub zeta1: f64,
    /// `-w_K w_M eps_a (R_DB^2 + 2) / (4 (R_DA + R_DC) eta rho)`.
    pub zeta2: f64,
    /// `-xi_B xi_A w_N w_K w_M eps_a R_DB (R_DA - R_DC) / (8 eta rho)`.
    pub varsigma_star: f64,
    /// `w_K w_N eps_a^2 / (2 (R_DA + R_DC))`.
    pub a1: f64,
    /// `-w_N w_K / (2 (R_DA + R_DC) eta rho)`.
    pub a2: f64,
    /// `(1+R_DB^2)^2 ln(1+R_DB^2) / (2 R_DB^2) + (R_DB^2 + 2)(c0 - 1/4)`.
    pub b0: f64,
    /// `xi_B w_N R_DB / 2`.
    pub b1: f64,
    /// `xi_A w_K (R_DA - R_DC) eps_a / 2`, paired with node weights
    /// `exp(-pi lambda_A (s_k^2 - R_DC^2))`.
    pub b2: f64,
    /// `xi_B w_N R_DB eps_a / 2`.
    pub b3: f64,
    /// `xi_A w_K (R_DA - R_DC) eps_a / 2`, paired with node weights
    /// `exp(-pi lambda_A (R_DA^2 - s_k^2))`.
    pub b4: f64,
    /// `-xi_B xi_A w_N w_K R_DB (R_DA - R_DC) / (4 eta rho)`.
    pub b5: f64,
    rho: f64,
    eta: f64,
    p1_sq: f64,
    p2_sq: f64,
}

impl AuxiliaryConstants {
    /// Fails when successive interference cancellation is infeasible.
    pub fn new(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<Self> {
        cfg.validate()?;
        quad.validate()?;
        let th = require_sic(cfg)?;
        let rule_n = ChebyshevRule::new(quad.n_b)?;
        let rule_k = ChebyshevRule::new(quad.k_a)?;
        let rule_m = ChebyshevRule::new(quad.m_t)?;
        let (ra, rc, rb) = (cfg.r_da, cfg.r_dc, cfg.r_db);
        let eps_a = th.eps_a;
        let eta_rho = cfg.eta * cfg.rho;

        let c_n_star: Vec<f64> = rule_n.nodes().iter().map(|p| 0.5 * rb * (p + 1.0)).collect();
        let c_n = c_n_star.iter().map(|&c| cfg.path_loss(c)).collect();
        let s_k = rule_k
            .nodes()
            .iter()
            .map(|p| 0.5 * (ra - rc) * (p + 1.0) + rc)
            .collect();
        let t_m: Vec<f64> = rule_m.nodes().iter().map(|p| 0.5 * eps_a * (p + 1.0)).collect();

        let (wn, wk, wm) = (rule_n.weight(), rule_k.weight(), rule_m.weight());
        let xi_a = DistanceLaw::xi(cfg.lambda_a, rc, ra);
        let xi_b = DistanceLaw::xi(cfg.lambda_b, 0.0, rb);
        let rb2 = rb * rb;
        let c0 = c0_constant();

        let mut aux = Self {
            tau1: th.tau1,
            tau2: th.tau2,
            eps_a,
            eps_b: th.eps_b,
            c0,
            omega_n: wn,
            omega_k: wk,
            omega_m: wm,
            phi: rule_n.nodes().to_vec(),
            psi: rule_k.nodes().to_vec(),
            varphi: rule_m.nodes().to_vec(),
            c_n_star,
            c_n,
            s_k,
            chi_tm: Vec::new(),
            t_m,
            xi_a,
            xi_b,
            zeta1: -eps_a * wn * wk * wm / (4.0 * (ra + rc) * eta_rho),
            zeta2: -wk * wm * eps_a * (rb2 + 2.0) / (4.0 * (ra + rc) * eta_rho),
            varsigma_star: -xi_b * xi_a * wn * wk * wm * eps_a * rb * (ra - rc) / (8.0 * eta_rho),
            a1: wk * wn * eps_a * eps_a / (2.0 * (ra + rc)),
            a2: -wn * wk / (2.0 * (ra + rc) * eta_rho),
            b0: (1.0 + rb2).powi(2) * (1.0 + rb2).ln() / (2.0 * rb2) + (rb2 + 2.0) * (c0 - 0.25),
            b1: xi_b * wn * rb / 2.0,
            b2: xi_a * wk * (ra - rc) * eps_a / 2.0,
            b3: xi_b * wn * rb * eps_a / 2.0,
            b4: xi_a * wk * (ra - rc) * eps_a / 2.0,
            b5: -xi_b * xi_a * wn * wk * rb * (ra - rc) / (4.0 * eta_rho),
            rho: cfg.rho,
            eta: cfg.eta,
            p1_sq: cfg.p1_sq,
            p2_sq: cfg.p2_sq,
        };
        aux.chi_tm = aux.t_m.iter().map(|&t| aux.chi(t)).collect();
        Ok(aux)
    }

    /// `chi(x) = tau1 - rho x p1^2 / (rho x p2^2 + 1)`; vanishes at `x = eps_a`.
    pub fn chi(&self, x: f64) -> f64 {
        let s = self.rho * x;
        self.tau1 - s * self.p1_sq / (s * self.p2_sq + 1.0)
    }

    /// `Lambda = L_B L_C / (eta rho)`.
    pub fn lambda(&self, loss_b: f64, loss_c: f64) -> f64 {
        loss_b * loss_c / (self.eta * self.rho)
    }

    pub fn eta_rho(&self) -> f64 {
        self.eta * self.rho
    }

    /// `sqrt(1 - varphi_m^2)` for the threshold rule.
    pub(crate) fn varphi_roots(&self) -> impl Iterator<Item = f64> + '_ {
        self.varphi.iter().map(|p| (1.0 - p * p).sqrt())
    }
}

/// Quadrature nodes for an expectation over a user distance law:
/// `E[g(L)] ~ scale * sum_i weights[i] g(losses[i])` where `L = 1 + d^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub scale: f64,
    pub weights: Vec<f64>,
    pub losses: Vec<f64>,
}

impl NodeSet {
    /// Near-user disc nodes for a scheme.
    pub fn near(aux: &AuxiliaryConstants, cfg: &NetworkConfig, scheme: Scheme) -> Self {
        let roots = aux.phi.iter().map(|p| (1.0 - p * p).sqrt());
        match scheme {
            Scheme::Rnrf => Self {
                scale: aux.omega_n / 2.0,
                weights: roots.zip(&aux.phi).map(|(r, p)| r * (p + 1.0)).collect(),
                losses: aux.c_n.clone(),
            },
            Scheme::Nnnf | Scheme::Nnff => Self {
                scale: aux.b1,
                weights: roots
                    .zip(&aux.c_n_star)
                    .map(|(r, &c)| r * c * (-PI * cfg.lambda_b * c * c).exp())
                    .collect(),
                losses: aux.c_n.clone(),
            },
        }
    }

    /// Far-user ring nodes for a scheme.
    pub fn far(aux: &AuxiliaryConstants, cfg: &NetworkConfig, scheme: Scheme) -> Self {
        let roots = aux.psi.iter().map(|p| (1.0 - p * p).sqrt());
        let losses = aux.s_k.iter().map(|&s| cfg.path_loss(s)).collect();
        let (ra, rc) = (cfg.r_da, cfg.r_dc);
        let k = PI * cfg.lambda_a;
        match scheme {
            Scheme::Rnrf => Self {
                scale: aux.omega_k / (ra + rc),
                weights: roots.zip(&aux.s_k).map(|(r, &s)| r * s).collect(),
                losses,
            },
            Scheme::Nnnf => Self {
                scale: aux.b2 / aux.eps_a,
                weights: roots
                    .zip(&aux.s_k)
                    .map(|(r, &s)| r * s * (-k * (s * s - rc * rc)).exp())
                    .collect(),
                losses,
            },
            Scheme::Nnff => Self {
                scale: aux.b4 / aux.eps_a,
                weights: roots
                    .zip(&aux.s_k)
                    .map(|(r, &s)| r * s * (-k * (ra * ra - s * s)).exp())
                    .collect(),
                losses,
            },
        }
    }

    /// `sum_i w_i g(L_i)` without the scale.
    pub fn sum<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.losses)
            .map(|(&w, &l)| w * g(l))
            .sum()
    }

    /// Quadrature approximation of `E[g(L)]`.
    pub fn expect<F: FnMut(f64) -> f64>(&self, g: F) -> f64 {
        self.scale * self.sum(g)
    }

    /// Channel CDF `Pr(|h|^2 / L < eps)`.
    pub fn cdf(&self, eps: f64) -> f64 {
        self.expect(|l| -(-l * eps).exp_m1())
    }

    /// First-order expansion `E[L] eps` of [`NodeSet::cdf`].
    pub fn cdf_linear(&self, eps: f64) -> f64 {
        self.expect(|l| l * eps)
    }
}
