//! Result rows and their CSV/JSON encodings.
//!
//! Both encodings carry the same fields with the same values: CSV has a
//! header row and leaves absent values empty, JSON is an array of objects
//! with `null` for absent values.

use std::io::{self, Write};

use serde::Serialize;

use crate::addressing::{Origin, Region, Scheme, SchemeKind};
use crate::harness::{ExperimentResult, LevelHistogram, ThresholdComparison};

pub const MEAN_FLIPS: &str = "mean_flips_per_rotation";
pub const WALL_TIME: &str = "wall_time_seconds";
pub const OVERFLOW: &str = "overflow_fallbacks";
pub const THRESHOLD_LEVEL: &str = "threshold_level";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// One metric of one (width, scheme) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRow {
    pub width: u32,
    pub scheme: String,
    /// Hybrid rows only, as a fraction such as `1/2`.
    pub threshold_ratio: Option<String>,
    pub metric: String,
    /// Absent when the metric is undefined (no rotations happened).
    pub value: Option<f64>,
    pub trials: u32,
    pub seed: u64,
}

impl OutputRow {
    fn new(width: u32, scheme: &Scheme, metric: &str, value: Option<f64>, trials: u32, seed: u64) -> Self {
        OutputRow {
            width,
            scheme: scheme.kind.tag().to_string(),
            threshold_ratio: scheme.ratio.map(|r| r.to_string()),
            metric: metric.to_string(),
            value,
            trials,
            seed,
        }
    }

    pub fn is_wall_time(&self) -> bool {
        self.metric == WALL_TIME
    }
}

/// Three rows per cell: mean flips, wall time and overflow fallbacks.
pub fn experiment_rows(results: &[ExperimentResult]) -> Vec<OutputRow> {
    results
        .iter()
        .flat_map(|r| {
            let row = |metric, value| OutputRow::new(r.width, &r.scheme, metric, value, r.trials, r.base_seed);
            [
                row(MEAN_FLIPS, r.mean_flips_per_rotation),
                row(WALL_TIME, Some(r.wall_time.as_secs_f64())),
                row(OVERFLOW, Some(r.overflow_fallbacks as f64)),
            ]
        })
        .collect()
}

/// Three rows per ratio: threshold level, mean flips and wall time.
pub fn threshold_rows<'a>(comparisons: impl IntoIterator<Item = &'a ThresholdComparison>, seed: u64) -> Vec<OutputRow> {
    comparisons
        .into_iter()
        .flat_map(|c| {
            let scheme = Scheme::hart(c.ratio);
            let row = |metric, value| OutputRow::new(c.width, &scheme, metric, value, c.trials, seed);
            [
                row(THRESHOLD_LEVEL, Some(f64::from(c.threshold.level))),
                row(MEAN_FLIPS, c.mean_flips_per_rotation),
                row(WALL_TIME, Some(c.wall_time.as_secs_f64())),
            ]
        })
        .collect()
}

/// One point of a rotations-per-level series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationRow {
    pub width: u32,
    pub level: u32,
    pub mean_rotations: f64,
    pub trials: u32,
    pub seed: u64,
}

pub fn rotation_rows(width: u32, histogram: &LevelHistogram, seed: u64) -> Vec<RotationRow> {
    histogram
        .counts
        .iter()
        .map(|(&level, &mean_rotations)| RotationRow {
            width,
            level,
            mean_rotations,
            trials: histogram.trials,
            seed,
        })
        .collect()
}

/// One node of an address dump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumpRow {
    pub key: i64,
    pub level: u32,
    pub region: String,
    /// Absent when the node is deeper than the rank capacity.
    pub dfat_rank: Option<u64>,
    pub address: String,
}

/// Region tag of a node's address, named after the scheme that produced it.
pub fn region_tag(kind: SchemeKind, origin: Origin) -> &'static str {
    match origin.region() {
        Region::Linear => "linear",
        Region::Random => "random",
        Region::Spare => "spare-queue",
        Region::Positional if kind == SchemeKind::Gray => "gray",
        Region::Positional => "dfat-gray",
    }
}

fn fmt_value(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_json<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, rows)?;
    writeln!(out)
}

pub fn write_output_rows(out: &mut dyn Write, rows: &[OutputRow], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record([
                "width",
                "scheme",
                "threshold_ratio",
                "metric",
                "value",
                "trials",
                "seed",
            ])
            .map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.width.to_string(),
                    r.scheme.clone(),
                    r.threshold_ratio.clone().unwrap_or_default(),
                    r.metric.clone(),
                    fmt_value(r.value),
                    r.trials.to_string(),
                    r.seed.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()
        }
    }
}

pub fn write_rotation_rows(out: &mut dyn Write, rows: &[RotationRow], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(csv_err)?;
            }
            if rows.is_empty() {
                w.write_record(["width", "level", "mean_rotations", "trials", "seed"])
                    .map_err(csv_err)?;
            }
            w.flush()
        }
    }
}

pub fn write_dump_rows(out: &mut dyn Write, rows: &[DumpRow], format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => write_json(out, rows),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["key", "level", "region", "dfat_rank", "address"])
                .map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.key.to_string(),
                    r.level.to_string(),
                    r.region.clone(),
                    r.dfat_rank.map(|x| x.to_string()).unwrap_or_default(),
                    r.address.clone(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()
        }
    }
}
