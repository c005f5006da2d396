//! Gaussian-Chebyshev rules, the modified Bessel function K1 and an adaptive
//! Gauss-Kronrod integrator used by the exact-integral reference.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Orders of the three Gaussian-Chebyshev rules: `n_b` for near-user disc
/// integrals, `k_a` for far-user ring integrals and `m_t` for the threshold
/// integral over `[0, eps_a]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub n_b: usize,
    pub k_a: usize,
    pub m_t: usize,
}

impl QuadratureSpec {
    pub fn new(n_b: usize, k_a: usize, m_t: usize) -> Result<Self> {
        let spec = Self { n_b, k_a, m_t };
        spec.validate()?;
        Ok(spec)
    }

    /// Same order for all three rules.
    pub fn uniform(order: usize) -> Result<Self> {
        Self::new(order, order, order)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_b == 0 || self.k_a == 0 || self.m_t == 0 {
            return Err(Error::InvalidArgument(format!(
                "quadrature orders must be at least 1, got {},{},{}",
                self.n_b, self.k_a, self.m_t
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_b: 30,
            k_a: 30,
            m_t: 30,
        }
    }
}

/// Chebyshev nodes of the first kind with the common weight `pi / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevRule {
    nodes: Vec<f64>,
    weight: f64,
}

impl ChebyshevRule {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "Chebyshev rule order must be at least 1".into(),
            ));
        }
        let n = order as f64;
        let nodes = (1..=order)
            .map(|i| ((2.0 * i as f64 - 1.0) / (2.0 * n) * PI).cos())
            .collect();
        Ok(Self {
            nodes,
            weight: PI / n,
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `phi_n = cos((2n-1) pi / 2N)`, strictly decreasing in `n`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `omega_N = pi / N`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `sqrt(1 - phi_n^2)` for every node.
    pub fn root_factors(&self) -> impl Iterator<Item = f64> + '_ {
        self.nodes.iter().map(|&p| (1.0 - p * p).sqrt())
    }

    /// Approximates `int_a^b f(x) dx` by
    /// `(b-a)/2 * omega_N * sum sqrt(1-phi_n^2) f((b-a)/2 * phi_n + (b+a)/2)`.
    ///
    /// The factor `sqrt(1-phi^2)` undoes the Chebyshev weight, so the rule is
    /// only O(1/N^2) accurate unless the integrand vanishes at both ends.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let sum: f64 = self
            .nodes
            .iter()
            .map(|&p| (1.0 - p * p).sqrt() * f(half * p + mid))
            .sum();
        half * self.weight * sum
    }

    /// Approximates `int_{-1}^{1} f(x) sqrt(1-x^2) dx` by
    /// `omega_N * sum (1-phi_n^2) f(phi_n)`, exact for polynomials of degree
    /// below `2N - 2`.
    pub fn integrate_semicircle<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.weight
            * self
                .nodes
                .iter()
                .map(|&p| (1.0 - p * p) * f(p))
                .sum::<f64>()
    }
}

/// Digamma at a positive integer: `psi(n) = -gamma + H_{n-1}`.
pub fn digamma_int(n: u32) -> f64 {
    assert!(n >= 1, "digamma_int needs n >= 1");
    -EULER_GAMMA + (1..n).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// `c0 = -psi(1)/2 - psi(2)/2 = gamma - 1/2`.
pub fn c0_constant() -> f64 {
    -0.5 * digamma_int(1) - 0.5 * digamma_int(2)
}

const SERIES_LIMIT: f64 = 2.0;

/// Power series of `x K1(x) - 1`, accurate without cancellation for `x <= 2`.
fn x_k1_minus_one_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    // term_k = q^k / (k! (k+1)!), psi_sum_k = psi(k+1) + psi(k+2)
    let mut term = 1.0;
    let mut psi_sum = digamma_int(1) + digamma_int(2);
    let mut sum = 0.0;
    for k in 0..60u32 {
        let contribution = term * (log_half - 0.5 * psi_sum);
        sum += contribution;
        if contribution.abs() <= 1e-17 * sum.abs() && k > 2 {
            break;
        }
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 2.0));
        psi_sum += 1.0 / (kf + 1.0) + 1.0 / (kf + 2.0);
    }
    0.5 * x * x * sum
}

/// Temme/Steed continued fraction for K1 at `x > 2` (order-zero start).
fn k1_continued_fraction(x: f64) -> f64 {
    const EPS: f64 = 1e-16;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    k0 * (x + 0.5 - h) / x
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            function: "bessel_k1",
            value: x,
        });
    }
    if x <= SERIES_LIMIT {
        Ok((1.0 + x_k1_minus_one_series(x)) / x)
    } else {
        Ok(k1_continued_fraction(x))
    }
}

/// `1 - x K1(x)` without cancellation near zero; equals 0 at `x = 0`.
pub fn one_minus_x_k1(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            function: "one_minus_x_k1",
            value: x,
        });
    }
    if x <= SERIES_LIMIT {
        Ok(-x_k1_minus_one_series(x))
    } else {
        Ok(1.0 - x * k1_continued_fraction(x))
    }
}

/// Small-argument expansion `x K1(x) ~ 1 + (x^2/2)(ln(x/2) + c0)`.
pub fn x_k1_small_argument(x: f64) -> f64 {
    1.0 + 0.5 * x * x * ((0.5 * x).ln() + c0_constant())
}

/// Convergence target for [`integrate_adaptive`]: stop once the error
/// estimate falls below `max(abs, rel * |estimate|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-8,
            rel: 0.0,
            max_intervals: 400,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let centre = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * centre;
    let mut gauss = G_WEIGHTS[3] * centre;
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += G_WEIGHTS[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive 7/15-point Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gauss_kronrod_15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = intervals.iter().map(|iv| iv.2).sum();
        let error: f64 = intervals.iter().map(|iv| iv.3).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NonConvergence {
                a,
                b,
                estimate: value,
                error,
                evaluations,
            });
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        if intervals.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                a,
                b,
                estimate: value,
                error,
                evaluations,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty interval list");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let split = 0.5 * (lo + hi);
        let (v1, e1) = gauss_kronrod_15(&mut f, lo, split);
        let (v2, e2) = gauss_kronrod_15(&mut f, split, hi);
        evaluations += 30;
        intervals.push((lo, split, v1, e1));
        intervals.push((split, hi, v2, e2));
    }
}
