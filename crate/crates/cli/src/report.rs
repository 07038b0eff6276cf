//! Check records and the JSON / CSV report formats.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use tautlab::{Error, Result};

pub const SCHEMA: u32 = 1;

/// One evaluated (or skipped) sample point of a check.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub point: Vec<f64>,
    /// `None` for a point skipped at a degenerate locus.
    pub residual: Option<f64>,
}

/// Largest residual of one identity over a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    /// `null` when no point was evaluated or a residual was NaN.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub points_sampled: usize,
    pub skipped: usize,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

/// Degenerate loci and domain boundaries are counted, not fatal.
pub fn is_skippable(e: &Error) -> bool {
    matches!(e, Error::Degenerate(_) | Error::OutsideDomain { .. })
}

/// `max` that propagates NaN.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

impl Check {
    pub fn new(name: &str, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            max_residual: f64::NAN,
            tolerance,
            pass: false,
            points_sampled: 0,
            skipped: 0,
            rows: Vec::new(),
        }
    }

    /// Records `max |rᵢ|` at `point`, or a skip for a degenerate point.
    pub fn record(&mut self, point: &[f64], residuals: Result<Vec<f64>>) -> Result<()> {
        self.points_sampled += 1;
        let residual = match residuals {
            Ok(rs) => {
                let m = rs.iter().map(|r| r.abs()).fold(0.0, nan_max);
                let first = self.points_sampled - self.skipped == 1;
                self.max_residual = if first {
                    m
                } else {
                    nan_max(self.max_residual, m)
                };
                Some(m)
            }
            Err(e) if is_skippable(&e) => {
                self.skipped += 1;
                None
            }
            Err(e) => return Err(e),
        };
        self.rows.push(Row {
            point: point.to_vec(),
            residual,
        });
        self.pass = self.max_residual < self.tolerance;
        Ok(())
    }

    pub fn record_one(&mut self, point: &[f64], residual: Result<f64>) -> Result<()> {
        self.record(point, residual.map(|r| vec![r]))
    }
}

/// Modulus summary for `report moduli`.
#[derive(Clone, Debug, Serialize)]
pub struct ModuliSummary {
    pub delta: [f64; 2],
    /// Representative with `Re δ ≥ 0`.
    pub canonical: [f64; 2],
    pub delta_sq: [f64; 2],
    pub inside_parabola: bool,
    pub extends_to_sphere: bool,
    pub nu: f64,
    pub candidate_residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moduli: Option<ModuliSummary>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn new(suite: &str, seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            suite: suite.to_string(),
            seed,
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            moduli: None,
            wall_time_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// `check,x0,x1,x2,x3,residual`, with empty cells past the point's
    /// dimension and `skipped` for degenerate points.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "check,x0,x1,x2,x3,residual")?;
        for c in &self.checks {
            for row in &c.rows {
                let mut cells = vec![c.name.clone()];
                for i in 0..4 {
                    cells.push(
                        row.point
                            .get(i)
                            .map(|x| format!("{x:e}"))
                            .unwrap_or_default(),
                    );
                }
                cells.push(match row.residual {
                    Some(r) => format!("{r:e}"),
                    None => "skipped".into(),
                });
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Ok(())
    }

    /// One human-readable line per check.
    pub fn write_summary(&self, out: &mut dyn Write) -> io::Result<()> {
        for c in &self.checks {
            let (tag, op) = if c.pass {
                ("PASS", "<")
            } else {
                ("FAIL", ">=")
            };
            write!(
                out,
                "{tag} {} {}: {:.2e} {op} {:.0e} over {} points",
                self.suite, c.name, c.max_residual, c.tolerance, c.points_sampled
            )?;
            if c.skipped > 0 {
                write!(out, " ({} skipped)", c.skipped)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
