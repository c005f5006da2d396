//! User deployments: Poisson counts, the random / nearest / farthest distance
//! laws of the disc and ring regions, and per-trial topologies.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::model::{NetworkConfig, Scheme};

/// Shape of a deployment region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    Disc,
    Ring,
}

/// A disc (`inner = 0`) or ring populated by a homogeneous PPP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub inner: f64,
    pub outer: f64,
    pub density: f64,
}

impl Region {
    pub fn disc(radius: f64, density: f64) -> Self {
        Self {
            kind: RegionKind::Disc,
            inner: 0.0,
            outer: radius,
            density,
        }
    }

    pub fn ring(inner: f64, outer: f64, density: f64) -> Self {
        Self {
            kind: RegionKind::Ring,
            inner,
            outer,
            density,
        }
    }

    /// Near-user disc of a configuration.
    pub fn near_of(cfg: &NetworkConfig) -> Self {
        Self::disc(cfg.r_db, cfg.lambda_b)
    }

    /// Far-user ring of a configuration.
    pub fn far_of(cfg: &NetworkConfig) -> Self {
        Self::ring(cfg.r_dc, cfg.r_da, cfg.lambda_a)
    }

    pub fn area(&self) -> f64 {
        PI * (self.outer * self.outer - self.inner * self.inner)
    }

    /// Expected number of users.
    pub fn mean_count(&self) -> f64 {
        self.density * self.area()
    }
}

/// Distribution of the distance from the base station to the selected user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceLaw {
    /// Uniformly placed point: pdf `2r / (outer^2 - inner^2)`.
    Uniform { inner: f64, outer: f64 },
    /// Closest of a PPP conditioned on at least one point.
    Nearest { inner: f64, outer: f64, density: f64 },
    /// Farthest of a PPP conditioned on at least one point.
    Farthest { inner: f64, outer: f64, density: f64 },
}

impl DistanceLaw {
    pub fn uniform(region: &Region) -> Self {
        Self::Uniform {
            inner: region.inner,
            outer: region.outer,
        }
    }

    pub fn nearest(region: &Region) -> Self {
        Self::Nearest {
            inner: region.inner,
            outer: region.outer,
            density: region.density,
        }
    }

    pub fn farthest(region: &Region) -> Self {
        Self::Farthest {
            inner: region.inner,
            outer: region.outer,
            density: region.density,
        }
    }

    /// Law of the near user's distance under a scheme.
    pub fn near_for(cfg: &NetworkConfig, scheme: Scheme) -> Self {
        let region = Region::near_of(cfg);
        match scheme {
            Scheme::Rnrf => Self::uniform(&region),
            Scheme::Nnnf | Scheme::Nnff => Self::nearest(&region),
        }
    }

    /// Law of the far user's distance under a scheme.
    pub fn far_for(cfg: &NetworkConfig, scheme: Scheme) -> Self {
        let region = Region::far_of(cfg);
        match scheme {
            Scheme::Rnrf => Self::uniform(&region),
            Scheme::Nnnf => Self::nearest(&region),
            Scheme::Nnff => Self::farthest(&region),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Uniform { inner, outer }
            | Self::Nearest { inner, outer, .. }
            | Self::Farthest { inner, outer, .. } => (inner, outer),
        }
    }

    /// `xi = 2 pi lambda / (1 - exp(-pi lambda (outer^2 - inner^2)))`, the
    /// normalization of the nearest and farthest densities.
    pub fn xi(density: f64, inner: f64, outer: f64) -> f64 {
        let w = outer * outer - inner * inner;
        2.0 * PI * density / -(-PI * density * w).exp_m1()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        let (inner, outer) = self.support();
        if r < inner || r > outer {
            return 0.0;
        }
        match *self {
            Self::Uniform { .. } => 2.0 * r / (outer * outer - inner * inner),
            Self::Nearest { density, .. } => {
                Self::xi(density, inner, outer) * r * (-PI * density * (r * r - inner * inner)).exp()
            }
            Self::Farthest { density, .. } => {
                Self::xi(density, inner, outer) * r * (-PI * density * (outer * outer - r * r)).exp()
            }
        }
    }

    pub fn cdf(&self, r: f64) -> f64 {
        let (inner, outer) = self.support();
        if r <= inner {
            return 0.0;
        }
        if r >= outer {
            return 1.0;
        }
        let w = outer * outer - inner * inner;
        match *self {
            Self::Uniform { .. } => (r * r - inner * inner) / w,
            Self::Nearest { density, .. } => {
                let k = PI * density;
                (-k * (r * r - inner * inner)).exp_m1() / (-k * w).exp_m1()
            }
            Self::Farthest { density, .. } => {
                let k = PI * density;
                ((-k * (outer * outer - r * r)).exp() - (-k * w).exp()) / -(-k * w).exp_m1()
            }
        }
    }

    pub fn survival(&self, r: f64) -> f64 {
        1.0 - self.cdf(r)
    }

    /// Inverse CDF for `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let (inner, outer) = self.support();
        let w = outer * outer - inner * inner;
        let r_sq = match *self {
            Self::Uniform { .. } => inner * inner + u * w,
            Self::Nearest { density, .. } => {
                let k = PI * density;
                inner * inner - (u * (-k * w).exp_m1()).ln_1p() / k
            }
            Self::Farthest { density, .. } => {
                let k = PI * density;
                outer * outer + ((1.0 - u) * (-k * w).exp_m1()).ln_1p() / k
            }
        };
        r_sq.sqrt().clamp(inner, outer)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.gen::<f64>())
    }
}

/// Poisson number of users in a region; always zero for an empty process.
pub fn sample_count<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> u64 {
    let mean = region.mean_count();
    if mean <= 0.0 {
        return 0;
    }
    let poisson = Poisson::new(mean).expect("positive finite Poisson mean");
    poisson.sample(rng) as u64
}

/// Distance of a uniformly placed point in the region.
pub fn sample_random_distance<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> f64 {
    DistanceLaw::uniform(region).sample(rng)
}

/// Distance of the closest point, conditioned on the region being non-empty.
pub fn sample_nearest_distance<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> f64 {
    DistanceLaw::nearest(region).sample(rng)
}

/// Distance of the farthest point, conditioned on the region being non-empty.
pub fn sample_farthest_distance<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> f64 {
    DistanceLaw::farthest(region).sample(rng)
}

/// One sampled geometry: BS-to-far `d_a`, BS-to-near `d_b`, the angle between
/// them and the near-to-far distance `d_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyDraw {
    pub d_a: f64,
    pub d_b: f64,
    pub theta: f64,
    pub d_c: f64,
}

impl TopologyDraw {
    pub fn new(d_a: f64, d_b: f64, theta: f64) -> Self {
        Self {
            d_a,
            d_b,
            theta,
            d_c: law_of_cosines(d_a, d_b, theta),
        }
    }
}

pub fn law_of_cosines(d_a: f64, d_b: f64, theta: f64) -> f64 {
    (d_a * d_a + d_b * d_b - 2.0 * d_a * d_b * theta.cos())
        .max(0.0)
        .sqrt()
}

/// Builds a topology from three uniforms in `[0, 1)`: near distance, far
/// distance, angle.
pub fn topology_from_uniforms(cfg: &NetworkConfig, scheme: Scheme, u: [f64; 3]) -> TopologyDraw {
    let d_b = DistanceLaw::near_for(cfg, scheme).quantile(u[0]);
    let d_a = DistanceLaw::far_for(cfg, scheme).quantile(u[1]);
    TopologyDraw::new(d_a, d_b, 2.0 * PI * u[2])
}

pub fn draw_topology<R: Rng + ?Sized>(cfg: &NetworkConfig, scheme: Scheme, rng: &mut R) -> TopologyDraw {
    let u = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
    topology_from_uniforms(cfg, scheme, u)
}

/// Polar coordinates of every point of one PPP realization. Debug aid for
/// validating the marginal samplers against explicit point sets.
pub fn materialize_ppp<R: Rng + ?Sized>(region: &Region, rng: &mut R) -> Vec<(f64, f64)> {
    let n = sample_count(region, rng);
    let law = DistanceLaw::uniform(region);
    (0..n)
        .map(|_| (law.sample(rng), 2.0 * PI * rng.gen::<f64>()))
        .collect()
}

/// Distance picked from explicit PPP realizations, redrawing empty ones.
pub fn materialized_distance<R: Rng + ?Sized>(
    region: &Region,
    pick: fn(&[(f64, f64)]) -> f64,
    rng: &mut R,
) -> f64 {
    loop {
        let points = materialize_ppp(region, rng);
        if !points.is_empty() {
            return pick(&points);
        }
    }
}

pub fn pick_nearest(points: &[(f64, f64)]) -> f64 {
    points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
}

pub fn pick_farthest(points: &[(f64, f64)]) -> f64 {
    points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
}
