//! Run settings: network parameters plus sweep and engine options, loaded
//! from flat `key=value` text and overridden from the command line.
//!
//! The same keys appear in the `#` manifest header of every CSV this tool
//! writes, so an output file can be passed back through `--config` to
//! replay the run.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use swipt_noma::analytic::Variant;
use swipt_noma::{NetworkConfig, QuadratureSpec, RelayDistance, Scheme, UserClass};

use crate::error::{CliError, CliResult};

/// First line of every CSV written by the tool.
pub const FORMAT_TAG: &str = "swipt-noma-csv";
/// Version of the column layouts; bumped whenever a layout changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Manifest keys that describe a run rather than configure one.
const INFORMATIONAL: [&str; 5] = ["format", "tool_version", "command", "figure", "columns"];

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn single(db: f64) -> Self {
        Self {
            start: db,
            stop: db,
            step: 1.0,
        }
    }

    pub fn range(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    /// Grid points as `start + i * step`, so replays see identical values.
    pub fn points(&self) -> Vec<f64> {
        if self.stop < self.start {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.stop {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

impl FromStr for SnrGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad SNR value '{t}'"))
        };
        match parts.as_slice() {
            [v] => Ok(Self::single(num(v)?)),
            [a, b, step] => {
                let step = num(step)?;
                if step <= 0.0 {
                    return Err(format!("SNR step must be positive, got {step}"));
                }
                Ok(Self::range(num(a)?, num(b)?, step))
            }
            _ => Err(format!("expected A:B:STEP or a single value, got '{s}'")),
        }
    }
}

/// Which engines a figure runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Simulate,
    Both,
}

impl Engine {
    pub fn analytic(self) -> bool {
        self != Engine::Simulate
    }

    pub fn simulate(self) -> bool {
        self != Engine::Analytic
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Simulate => "simulate",
            Engine::Both => "both",
        }
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "analytic" => Ok(Engine::Analytic),
            "simulate" => Ok(Engine::Simulate),
            "both" => Ok(Engine::Both),
            other => Err(format!("unknown engine '{other}'")),
        }
    }
}

/// Everything that determines the content of an output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Network parameters; `rho` is set per grid point.
    pub network: NetworkConfig,
    /// `None` means the command's default grid.
    pub snr_db: Option<SnrGrid>,
    pub schemes: Vec<Scheme>,
    pub users: Vec<UserClass>,
    pub quad: QuadratureSpec,
    pub variant: Variant,
    pub trials: u64,
    pub seed: u64,
    pub relay_distance: RelayDistance,
    pub engine: Engine,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            snr_db: None,
            schemes: Scheme::ALL.to_vec(),
            users: UserClass::ALL.to_vec(),
            quad: QuadratureSpec::default(),
            variant: Variant::Auto,
            trials: 1_000_000,
            seed: 1,
            relay_distance: RelayDistance::Exact,
            engine: Engine::Both,
        }
    }
}

fn parse_list<T>(value: &str, all: &[T]) -> Result<Vec<T>, String>
where
    T: FromStr + Copy,
    T::Err: fmt::Display,
{
    if value.trim() == "all" {
        return Ok(all.to_vec());
    }
    let items = value
        .split(',')
        .map(|t| t.parse::<T>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

fn list_to_string<T: fmt::Display + PartialEq>(items: &[T], all: &[T]) -> String {
    if items == all {
        "all".into()
    } else {
        items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }
}

fn parse_quad(value: &str) -> Result<QuadratureSpec, String> {
    let orders = value
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad quadrature order '{t}'")))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = match orders.as_slice() {
        [n] => QuadratureSpec::uniform(*n),
        [n, k, m] => QuadratureSpec::new(*n, *k, *m),
        _ => return Err(format!("expected N or N,K,M, got '{value}'")),
    };
    spec.map_err(|e| e.to_string())
}

fn parse_f64(value: &str) -> Result<f64, String> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("'{value}' is not a number"))
}

impl Settings {
    /// Network keys in manifest order.
    pub const NETWORK_KEYS: [&'static str; 11] = [
        "r_da", "r_dc", "r_db", "lambda_a", "lambda_b", "alpha", "eta", "p1_sq", "p2_sq", "r1", "r2",
    ];

    /// Applies one `key=value` assignment. Hyphens in keys are accepted
    /// in place of underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let n = &mut self.network;
        let slot = match key.as_str() {
            "r_da" => Some(&mut n.r_da),
            "r_dc" => Some(&mut n.r_dc),
            "r_db" => Some(&mut n.r_db),
            "lambda_a" => Some(&mut n.lambda_a),
            "lambda_b" => Some(&mut n.lambda_b),
            "alpha" => Some(&mut n.alpha),
            "eta" => Some(&mut n.eta),
            "p1_sq" => Some(&mut n.p1_sq),
            "p2_sq" => Some(&mut n.p2_sq),
            "r1" => Some(&mut n.r1),
            "r2" => Some(&mut n.r2),
            _ => None,
        };
        if let Some(slot) = slot {
            *slot = parse_f64(value)?;
            return Ok(());
        }
        match key.as_str() {
            "snr_db" => self.snr_db = Some(value.parse()?),
            "scheme" | "schemes" => self.schemes = parse_list(value, &Scheme::ALL)?,
            "user" | "users" => self.users = parse_list(value, &UserClass::ALL)?,
            "quad" => self.quad = parse_quad(value)?,
            "variant" => self.variant = value.parse().map_err(|e: swipt_noma::Error| e.to_string())?,
            "trials" => self.trials = value.parse().map_err(|_| format!("bad trial count '{value}'"))?,
            "seed" => self.seed = value.parse().map_err(|_| format!("bad seed '{value}'"))?,
            "relay_distance" => {
                self.relay_distance = value.parse().map_err(|e: swipt_noma::Error| e.to_string())?
            }
            "engine" => self.engine = value.parse()?,
            k if INFORMATIONAL.contains(&k) => {}
            "schema" => {
                if value != SCHEMA_VERSION.to_string() {
                    return Err(format!("unsupported schema version {value}"));
                }
            }
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Applies a file of `key=value` lines. Blank lines and `#` comments
    /// are skipped; a CSV written by this tool contributes its manifest.
    pub fn load(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let manifest = text.starts_with(&format!("# format={FORMAT_TAG}"));
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            let body = if manifest {
                match line.strip_prefix('#') {
                    Some(rest) => rest.trim(),
                    // Data rows follow the manifest.
                    None => break,
                }
            } else {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                line
            };
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
            self.set(key, value)
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(())
    }

    /// Rejects settings no command can run with.
    pub fn check(&self, simulating: bool) -> CliResult<()> {
        self.network.validate()?;
        if simulating && self.trials == 0 {
            return Err(CliError::Usage("trial count must be positive".into()));
        }
        Ok(())
    }

    /// SNR grid in effect, falling back to `default`.
    pub fn grid(&self, default: SnrGrid) -> CliResult<(SnrGrid, Vec<f64>)> {
        let grid = self.snr_db.unwrap_or(default);
        let points = grid.points();
        if points.is_empty() {
            return Err(CliError::Usage(format!("SNR grid {grid} is empty")));
        }
        Ok((grid, points))
    }

    /// `key=value` pairs describing these settings, in a fixed order.
    pub fn manifest_pairs(&self, grid: SnrGrid) -> Vec<(String, String)> {
        let n = &self.network;
        let values = [
            n.r_da, n.r_dc, n.r_db, n.lambda_a, n.lambda_b, n.alpha, n.eta, n.p1_sq, n.p2_sq, n.r1, n.r2,
        ];
        let mut pairs: Vec<(String, String)> = Self::NETWORK_KEYS
            .iter()
            .zip(values)
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let q = self.quad;
        pairs.extend([
            ("snr_db".into(), grid.to_string()),
            ("scheme".into(), list_to_string(&self.schemes, &Scheme::ALL)),
            ("user".into(), list_to_string(&self.users, &UserClass::ALL)),
            ("quad".into(), format!("{},{},{}", q.n_b, q.k_a, q.m_t)),
            ("variant".into(), self.variant.to_string()),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("relay_distance".into(), self.relay_distance.as_str().into()),
            ("engine".into(), self.engine.as_str().into()),
        ]);
        pairs
    }
}

/// Description of one output file; rendered as its `#` header.
#[derive(Debug, Clone)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    /// Figure id, or `None` for a custom sweep.
    pub figure: Option<u8>,
    pub settings: &'a Settings,
    pub grid: SnrGrid,
    pub columns: &'a [&'a str],
}

impl RunManifest<'_> {
    pub fn render(&self) -> String {
        let mut lines = vec![
            ("format".to_string(), FORMAT_TAG.to_string()),
            ("schema".into(), SCHEMA_VERSION.to_string()),
            ("tool_version".into(), env!("CARGO_PKG_VERSION").into()),
            ("command".into(), self.command.into()),
            (
                "figure".into(),
                self.figure.map_or_else(|| "custom".to_string(), |f| f.to_string()),
            ),
        ];
        lines.extend(self.settings.manifest_pairs(self.grid));
        lines.push(("columns".into(), self.columns.join(",")));
        lines.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_and_points() {
        let g: SnrGrid = "0:50:5".parse().unwrap();
        assert_eq!(g.points().len(), 11);
        assert_eq!(g.points()[10], 50.0);
        assert_eq!(g.to_string(), "0:50:5");
        let g: SnrGrid = "0:1:0.1".parse().unwrap();
        assert_eq!(g.points().len(), 11);
        assert_eq!("30".parse::<SnrGrid>().unwrap().points(), vec![30.0]);
        assert!("10:0:5".parse::<SnrGrid>().unwrap().points().is_empty());
        assert!("0:10:0".parse::<SnrGrid>().is_err());
        assert!("0:10".parse::<SnrGrid>().is_err());
    }

    #[test]
    fn keys_round_trip_through_manifest() {
        let mut s = Settings::default();
        s.set("alpha", "3").unwrap();
        s.set("r-1", "0.3").unwrap_err();
        s.set("r1", "0.3").unwrap();
        s.set("scheme", "nnff,rnrf").unwrap();
        s.set("quad", "10,12,14").unwrap();
        s.set("variant", "high-snr").unwrap();
        let grid = SnrGrid::range(10.0, 40.0, 2.5);
        let mut back = Settings::default();
        for (k, v) in s.manifest_pairs(grid) {
            back.set(&k, &v).unwrap();
        }
        assert_eq!(back.snr_db, Some(grid));
        back.snr_db = None;
        assert_eq!(back, s);
    }

    #[test]
    fn bad_values_are_rejected() {
        let mut s = Settings::default();
        assert!(s.set("alpha", "two").is_err());
        assert!(s.set("colour", "red").is_err());
        assert!(s.set("quad", "0").is_err());
        assert!(s.set("scheme", "best").is_err());
        assert!(s.set("schema", "99").is_err());
    }
}
