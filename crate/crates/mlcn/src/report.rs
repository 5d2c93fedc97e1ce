//! Turning metric series into files: per-series min-max normalization, a
//! first-difference dispersion proxy for chaotic onset, and deterministic
//! CSV/JSON emission.
//!
//! Output is a pure function of (series, format): no timestamps, hostnames,
//! or other environment data ever reach the file bodies, so identical runs
//! emit identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layers::Layer;
use crate::scenario::{MetricsSeries, Mode, ScenarioConfig};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot report on an empty series")]
    EmptySeries,
    #[error("chaos window must be at least 3, got {window}")]
    WindowTooSmall { window: usize },
    #[error("series of length {len} is too short for window {window} (need at least 2x window)")]
    SeriesTooShort { len: usize, window: usize },
    #[error("failed writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
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

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// One parameter's series rescaled to [0, 1] by min-max, with the raw
/// extremes kept alongside. A constant series maps to all zeros and sets
/// the flag, so a flat 0 is distinguishable from a real sweep to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedValues {
    pub values: Vec<Option<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub constant: bool,
}

/// Min-max rescale; `None` entries (undefined ASPL) stay absent and do not
/// participate in the extremes.
pub fn min_max_normalize(raw: &[Option<f64>]) -> NormalizedValues {
    let present: Vec<f64> = raw.iter().flatten().copied().collect();
    if present.is_empty() {
        return NormalizedValues {
            values: raw.to_vec(),
            min: None,
            max: None,
            constant: true,
        };
    }
    let min = present.iter().copied().fold(f64::INFINITY, f64::min);
    let max = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let constant = min == max;
    let values = raw
        .iter()
        .map(|v| {
            v.map(|v| {
                if constant {
                    0.0
                } else {
                    (v - min) / (max - min)
                }
            })
        })
        .collect();
    NormalizedValues {
        values,
        min: Some(min),
        max: Some(max),
        constant,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedLayer {
    pub aspl: NormalizedValues,
    pub tspc: NormalizedValues,
    pub tne: NormalizedValues,
}

/// All nine (layer, parameter) normalizations of one replicate's series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedSeries {
    pub l1: NormalizedLayer,
    pub l2: NormalizedLayer,
    pub l3: NormalizedLayer,
}

impl NormalizedSeries {
    pub fn layer(&self, layer: Layer) -> &NormalizedLayer {
        match layer {
            Layer::L1 => &self.l1,
            Layer::L2 => &self.l2,
            Layer::L3 => &self.l3,
        }
    }
}

fn raw_columns(series: &MetricsSeries, layer: Layer) -> [Vec<Option<f64>>; 3] {
    let mut aspl = Vec::with_capacity(series.records.len());
    let mut tspc = Vec::with_capacity(series.records.len());
    let mut tne = Vec::with_capacity(series.records.len());
    for record in &series.records {
        let m = record.layer(layer);
        aspl.push(m.aspl);
        tspc.push(Some(m.tspc as f64));
        tne.push(Some(m.tne as f64));
    }
    [aspl, tspc, tne]
}

/// Normalize every (layer, parameter) column of one replicate's series.
pub fn normalize(series: &MetricsSeries) -> Result<NormalizedSeries, ReportError> {
    if series.records.is_empty() {
        return Err(ReportError::EmptySeries);
    }
    let mut layers = Layer::ALL.iter().map(|&layer| {
        let [aspl, tspc, tne] = raw_columns(series, layer);
        NormalizedLayer {
            aspl: min_max_normalize(&aspl),
            tspc: min_max_normalize(&tspc),
            tne: min_max_normalize(&tne),
        }
    });
    Ok(NormalizedSeries {
        l1: layers.next().expect("three layers"),
        l2: layers.next().expect("three layers"),
        l3: layers.next().expect("three layers"),
    })
}

/// Dispersion proxy for chaotic behaviour over one value sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosReport {
    /// Index into the input sequence where sustained high dispersion starts.
    pub onset_index: Option<usize>,
    /// Dispersion of the first `window` first-differences.
    pub early_dispersion: f64,
    /// Dispersion of the last `window` first-differences.
    pub late_dispersion: f64,
    pub window: usize,
}

fn dispersion(diffs: &[f64]) -> f64 {
    let n = diffs.len() as f64;
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}

/// First-difference dispersion scan: the onset is the first position whose
/// trailing-window dispersion exceeds twice the initial window's, sustained
/// for at least window/2 consecutive positions.
///
/// Invariant to affine maps v -> a*v + b (a > 0): differences scale by a,
/// so every dispersion ratio is unchanged.
pub fn chaos_index(values: &[f64], window: usize) -> Result<ChaosReport, ReportError> {
    if window < 3 {
        return Err(ReportError::WindowTooSmall { window });
    }
    if values.len() < 2 * window {
        return Err(ReportError::SeriesTooShort {
            len: values.len(),
            window,
        });
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let rolling: Vec<f64> = diffs.windows(window).map(dispersion).collect();
    let initial = rolling[0];
    let threshold = 2.0 * initial;
    let sustain = (window / 2).max(1);

    let mut onset_index = None;
    let mut streak = 0usize;
    for (i, &d) in rolling.iter().enumerate() {
        if d > threshold {
            streak += 1;
            if streak == sustain {
                // First position of the sustained stretch; rolling window i
                // ends at diff i + window - 1, i.e. value index i + window.
                let first = i + 1 - sustain;
                onset_index = Some(first + window);
                break;
            }
        } else {
            streak = 0;
        }
    }
    Ok(ChaosReport {
        onset_index,
        early_dispersion: initial,
        late_dispersion: *rolling.last().expect("at least one window"),
        window,
    })
}

/// A chaos report tied to one (layer, parameter) column, with the onset
/// mapped back to the recorded step axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedChaosReport {
    pub parameter: String,
    pub onset_step: Option<u32>,
    pub early_dispersion: f64,
    pub late_dispersion: f64,
    pub window: usize,
}

fn chaos_for_column(
    name: &str,
    steps: &[u32],
    raw: &[Option<f64>],
    window: usize,
) -> Option<NamedChaosReport> {
    let present: Vec<(u32, f64)> = steps
        .iter()
        .zip(raw)
        .filter_map(|(&s, v)| v.map(|v| (s, v)))
        .collect();
    let values: Vec<f64> = present.iter().map(|&(_, v)| v).collect();
    let report = chaos_index(&values, window).ok()?;
    Some(NamedChaosReport {
        parameter: name.to_string(),
        onset_step: report.onset_index.map(|i| present[i].0),
        early_dispersion: report.early_dispersion,
        late_dispersion: report.late_dispersion,
        window,
    })
}

/// Chaos reports for every (layer, parameter) column long enough to scan.
pub fn chaos_reports(series: &MetricsSeries, window: usize) -> Vec<NamedChaosReport> {
    let steps: Vec<u32> = series.records.iter().map(|r| r.step).collect();
    let mut out = Vec::new();
    for layer in Layer::ALL {
        let [aspl, tspc, tne] = raw_columns(series, layer);
        let prefix = layer.name().to_ascii_lowercase();
        for (param, column) in [("aspl", &aspl), ("tspc", &tspc), ("tne", &tne)] {
            if let Some(r) =
                chaos_for_column(&format!("{prefix}_{param}"), &steps, column, window)
            {
                out.push(r);
            }
        }
    }
    out
}

/// Effective configuration echoed into JSON output; a run is reproducible
/// from these fields alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub mode: Mode,
    pub nodes: usize,
    pub l1_p: f64,
    pub l2_p: f64,
    pub l3_m: usize,
    pub gauss_max_skew: f64,
    pub gauss_attempts: usize,
    pub failures: usize,
    pub seed: u64,
    pub replicates: usize,
    pub chaos_window: usize,
    pub format: OutputFormat,
}

impl ConfigEcho {
    fn new(config: &ScenarioConfig, chaos_window: usize, format: OutputFormat) -> Self {
        ConfigEcho {
            mode: config.mode,
            nodes: config.mlcn.n,
            l1_p: config.mlcn.l1_p,
            l2_p: config.mlcn.l2_p,
            l3_m: config.mlcn.l3_m,
            gauss_max_skew: config.mlcn.gauss_max_skew,
            gauss_attempts: config.mlcn.gauss_attempts,
            failures: config.failures,
            seed: config.seed,
            replicates: config.replicates,
            chaos_window,
            format,
        }
    }
}

/// One replicate's series together with its derived views.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateReport {
    pub replicate: u32,
    pub truncated: bool,
    pub records: Vec<crate::scenario::MetricsRecord>,
    pub normalized: NormalizedSeries,
    pub chaos: Vec<NamedChaosReport>,
}

/// Everything one run emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    pub config: ConfigEcho,
    pub replicates: Vec<ReplicateReport>,
}

/// Assemble the emission view of a finished run.
pub fn build_report(
    series: &[MetricsSeries],
    chaos_window: usize,
    format: OutputFormat,
) -> Result<RunReport, ReportError> {
    let first = series.first().ok_or(ReportError::EmptySeries)?;
    let mut replicates = Vec::with_capacity(series.len());
    for s in series {
        replicates.push(ReplicateReport {
            replicate: s.replicate,
            truncated: s.truncated,
            records: s.records.clone(),
            normalized: normalize(s)?,
            chaos: chaos_reports(s, chaos_window),
        });
    }
    Ok(RunReport {
        mode: first.mode,
        config: ConfigEcho::new(&first.config, chaos_window, format),
        replicates,
    })
}

pub const CSV_HEADER: &str = "mode,replicate,step,layer,aspl,tspc,tne,aspl_norm,tspc_norm,tne_norm";

fn push_opt(line: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        write!(line, "{v}").expect("string write");
    }
}

/// CSV body: one row per (record, layer), sorted by (replicate, step,
/// layer); absent ASPL becomes an empty field.
pub fn render_csv(report: &RunReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for rep in &report.replicates {
        for (i, record) in rep.records.iter().enumerate() {
            for layer in Layer::ALL {
                let m = record.layer(layer);
                let norms = rep.normalized.layer(layer);
                let mut line = format!(
                    "{},{},{},{},",
                    report.mode, rep.replicate, record.step, layer
                );
                push_opt(&mut line, m.aspl);
                write!(line, ",{},{},", m.tspc, m.tne).expect("string write");
                push_opt(&mut line, norms.aspl.values[i]);
                line.push(',');
                push_opt(&mut line, norms.tspc.values[i]);
                line.push(',');
                push_opt(&mut line, norms.tne.values[i]);
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

/// JSON body: the same records plus config echo, normalization extremes,
/// and chaos reports.
pub fn render_json(report: &RunReport) -> String {
    let mut body = serde_json::to_string_pretty(report).expect("report serializes");
    body.push('\n');
    body
}

/// Write the report in the format it was built for.
pub fn emit(report: &RunReport, path: &Path) -> Result<(), ReportError> {
    let body = match report.config.format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report),
    };
    fs::write(path, body).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}
