//! `diversity`: per-curve slope fits of a CSV written by another command.

use std::path::Path;

use statrs::distribution::{ContinuousCDF, StudentsT};
use swipt_noma::analytic::{diversity_fit, DiversityModel};
use swipt_noma::model::db_to_linear;

use crate::error::{CliError, CliResult};
use crate::output::{num, sci, Table};
use crate::settings::{FORMAT_TAG, SCHEMA_VERSION};

pub const REPORT_COLUMNS: [&str; 14] = [
    "series",
    "scheme",
    "user",
    "engine",
    "variant",
    "model",
    "points",
    "skipped",
    "slope",
    "slope_stderr",
    "ci95_low",
    "ci95_high",
    "r_squared",
    "status",
];

/// An outage curve read back from a CSV.
#[derive(Debug, Default)]
struct Curve {
    key: [String; 5],
    points: Vec<(f64, f64)>,
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h == name)
}

fn required(headers: &csv::StringRecord, name: &str) -> CliResult<usize> {
    column(headers, name).ok_or_else(|| CliError::Config(format!("malformed CSV: no '{name}' column")))
}

fn parse_number(text: &str, line: u64, what: &str) -> CliResult<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("malformed CSV: line {line}: bad {what} '{text}'")))
}

/// Reads outage-versus-SNR curves from sweep or figure output.
fn read_curves(path: &Path) -> CliResult<Vec<Curve>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    // Figure output names its x axis and value; sweeps are over SNR.
    let figure = column(&headers, "x_name").is_some();
    let (x_col, p_col) = if figure {
        (required(&headers, "x")?, required(&headers, "value")?)
    } else {
        (required(&headers, "snr_db")?, required(&headers, "probability")?)
    };
    let key_cols: Vec<Option<usize>> = ["series", "scheme", "user", "engine", "variant"]
        .iter()
        .map(|n| column(&headers, n))
        .collect();
    let x_name = column(&headers, "x_name");
    let y_name = column(&headers, "y_name");
    for n in ["scheme", "user"] {
        required(&headers, n)?;
    }
    let mut curves: Vec<Curve> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if x_name.is_some_and(|c| &record[c] != "snr_db") || y_name.is_some_and(|c| &record[c] != "outage") {
            continue;
        }
        let get = |c: usize| {
            record
                .get(c)
                .ok_or_else(|| CliError::Config(format!("malformed CSV: line {line}: too few fields")))
        };
        let snr = parse_number(get(x_col)?, line, "SNR")?;
        let p = parse_number(get(p_col)?, line, "probability")?;
        let mut key: [String; 5] = Default::default();
        for (slot, col) in key.iter_mut().zip(&key_cols) {
            if let Some(c) = col {
                *slot = get(*c)?.to_string();
            }
        }
        match curves.iter_mut().find(|c| c.key == key) {
            Some(c) => c.points.push((snr, p)),
            None => curves.push(Curve {
                key,
                points: vec![(snr, p)],
            }),
        }
    }
    if curves.is_empty() {
        return Err(CliError::Config(format!(
            "malformed CSV: no outage-versus-SNR rows in {}",
            path.display()
        )));
    }
    Ok(curves)
}

/// Two-sided 95% Student-t multiplier.
fn t95(dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975)
}

pub fn run_diversity(input: &Path, model: DiversityModel, min_snr_db: Option<f64>, out: Option<&Path>) -> CliResult<()> {
    let curves = read_curves(input)?;
    let mut header = format!("# format={FORMAT_TAG}-diversity\n# schema={SCHEMA_VERSION}\n");
    header += &format!("# tool_version={}\n# model={model}\n", env!("CARGO_PKG_VERSION"));
    if let Some(m) = min_snr_db {
        header += &format!("# min_snr_db={m}\n");
    }
    let mut table = Table::with_header(header, &REPORT_COLUMNS)?;
    for curve in curves {
        // Points at or beyond the certain-outage and zero-outage limits
        // carry no slope information.
        let usable: Vec<(f64, f64)> = curve
            .points
            .iter()
            .filter(|(snr, p)| min_snr_db.is_none_or(|m| *snr >= m) && *p > 0.0 && *p < 1.0)
            .map(|&(snr, p)| (db_to_linear(snr), p))
            .collect();
        let skipped = curve.points.len() - usable.len();
        let mut row: Vec<String> = curve.key.to_vec();
        row.push(model.to_string());
        row.push(usable.len().to_string());
        row.push(skipped.to_string());
        match diversity_fit(&usable, model) {
            Ok(fit) => {
                let half = t95(fit.points - 2) * fit.slope_stderr;
                row.extend([
                    num(fit.slope),
                    sci(fit.slope_stderr),
                    num(fit.slope - half),
                    num(fit.slope + half),
                    num(fit.r_squared),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), 5));
                let status = if usable.len() < 3 { "insufficient-points".to_string() } else { e.to_string() };
                row.push(status);
            }
        }
        table.row(row)?;
    }
    table.emit(out)
}
