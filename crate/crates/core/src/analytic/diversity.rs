//! Log-log slope fits of outage curves.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Shape assumed for the high-SNR decay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiversityModel {
    /// `P ~ c / rho^d`.
    Plain,
    /// `P ~ c ln(rho) / rho^d`.
    LogCorrected,
}

impl DiversityModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiversityModel::Plain => "plain",
            DiversityModel::LogCorrected => "log-corrected",
        }
    }
}

impl fmt::Display for DiversityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DiversityModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Self::Plain),
            "log-corrected" | "log" => Ok(Self::LogCorrected),
            other => Err(Error::InvalidArgument(format!("unknown diversity model '{other}'"))),
        }
    }
}

/// Least-squares fit of `-ln P` (optionally less `ln ln rho`) against `ln rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityFit {
    pub model: DiversityModel,
    /// Fitted diversity order `d`.
    pub slope: f64,
    /// `ln c` of the fitted decay law.
    pub log_coefficient: f64,
    /// Standard error of `slope`; zero for an exact fit and for two points.
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits the diversity order to `(rho, probability)` pairs, `rho` linear.
pub fn diversity_fit(points: &[(f64, f64)], model: DiversityModel) -> Result<DiversityFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(rho, p) in points {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::DegenerateFit(format!(
                "probability {p:e} at rho {rho:e} is outside (0, 1)"
            )));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::DegenerateFit(format!("rho must be positive, got {rho}")));
        }
        let x = rho.ln();
        let mut y = p.ln();
        if model == DiversityModel::LogCorrected {
            if x <= 0.0 {
                return Err(Error::DegenerateFit(format!(
                    "log-corrected fit needs rho > 1, got {rho}"
                )));
            }
            y -= x.ln();
        }
        if !y.is_finite() {
            return Err(Error::DegenerateFit(format!("probability underflow at rho {rho:e}")));
        }
        xs.push(x);
        ys.push(y);
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all rho values coincide".into()));
    }
    let beta = sxy / sxx;
    let intercept = mean_y - beta * mean_x;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - beta * x).powi(2))
        .sum();
    let slope_stderr = (rss / (n - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - rss / syy } else { 1.0 };
    Ok(DiversityFit {
        model,
        slope: -beta,
        log_coefficient: intercept,
        slope_stderr,
        r_squared,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::db_to_linear;

    fn grid(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..=15).map(|i| db_to_linear(30.0 + i as f64)).map(|r| (r, f(r))).collect()
    }

    #[test]
    fn noiseless_power_law() {
        let fit = diversity_fit(&grid(|r| 1.0 / (r * r)), DiversityModel::Plain).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.log_coefficient.abs() < 1e-9);
        assert!(fit.slope_stderr < 1e-10);
    }

    #[test]
    fn log_corrected_recovers_order() {
        let pts = grid(|r| r.ln() / (r * r));
        let plain = diversity_fit(&pts, DiversityModel::Plain).unwrap();
        assert!(plain.slope > 1.7 && plain.slope < 2.0, "{}", plain.slope);
        let fixed = diversity_fit(&pts, DiversityModel::LogCorrected).unwrap();
        assert!((fixed.slope - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(diversity_fit(&[(10.0, 0.1), (100.0, 0.01)], DiversityModel::Plain).is_err());
        assert!(diversity_fit(&grid(|_| 0.0), DiversityModel::Plain).is_err());
        assert!(diversity_fit(&grid(|_| 1.0), DiversityModel::Plain).is_err());
        assert!(diversity_fit(&[(10.0, 0.1); 4], DiversityModel::Plain).is_err());
        let sub_unity = [(0.5, 0.5), (0.8, 0.4), (2.0, 0.2)];
        assert!(diversity_fit(&sub_unity, DiversityModel::LogCorrected).is_err());
    }

    #[test]
    fn model_parsing() {
        assert_eq!("plain".parse::<DiversityModel>().unwrap(), DiversityModel::Plain);
        assert_eq!("log-corrected".parse::<DiversityModel>().unwrap(), DiversityModel::LogCorrected);
        assert!("cubic".parse::<DiversityModel>().is_err());
    }
}
