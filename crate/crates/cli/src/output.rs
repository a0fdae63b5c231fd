//! Serialized documents. Numbers are written as decimal strings in JSON and with
//! 17 significant digits in CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use riembed_core::asymptotics::{CorollaryRow, LogPowerFit, Regime, RowOutcome, RowStatus};
use riembed_core::criteria::{Criterion, EmbeddingReport, Trend, Verdict};
use riembed_core::witnesses::{WitnessReport, WitnessRow};

/// A float that serializes as its shortest round-trip decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:e}", self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                f64::from_str(v).map(Num).map_err(|_| E::custom(format!("invalid number '{v}'")))
            }
        }
        d.deserialize_str(V)
    }
}

pub fn nums<const N: usize>(v: [f64; N]) -> [Num; N] {
    v.map(Num)
}

pub fn csv_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub space: Option<String>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub weight: Option<String>,
    pub sigma: Option<String>,
    pub grid_eps: Num,
    pub grid_density: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendDoc {
    pub kind: String,
    pub rate: Num,
}

impl From<Trend> for TrendDoc {
    fn from(t: Trend) -> Self {
        let (kind, rate) = match t {
            Trend::Bounded { rate } => ("bounded", rate),
            Trend::Diverging { rate } => ("diverging", rate),
            Trend::Vanishing { rate } => ("vanishing", rate),
        };
        Self { kind: kind.into(), rate: Num(rate) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub theorem: Criterion,
    pub params: Params,
    pub grid: Vec<[Num; 2]>,
    pub finite_sup: Num,
    pub trend: TrendDoc,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl CheckDoc {
    pub fn new(params: Params, r: EmbeddingReport) -> Self {
        Self {
            theorem: r.theorem,
            params,
            grid: r.grid_values.iter().map(|&(a, b)| nums([a, b])).collect(),
            finite_sup: Num(r.finite_sup),
            trend: r.trend.into(),
            verdict: r.verdict,
            diagnostics: r.diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitDoc {
    pub a: Num,
    pub b: Num,
    pub c: Num,
    pub constant: Num,
    pub residual: Num,
    pub window: [Num; 2],
    pub loglog_included: bool,
    pub samples: usize,
}

impl From<&LogPowerFit> for FitDoc {
    fn from(f: &LogPowerFit) -> Self {
        Self {
            a: Num(f.a),
            b: Num(f.b),
            c: Num(f.c),
            constant: Num(f.constant),
            residual: Num(f.residual),
            window: nums([f.window.0, f.window.1]),
            loglog_included: f.loglog_included,
            samples: f.samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    pub key: String,
    pub case: String,
    pub regime: Regime,
    pub status: RowStatus,
    pub fit: FitDoc,
    pub selected_fit: FitDoc,
    pub expected: [Num; 3],
    pub deltas: [Num; 3],
    pub reason: Option<String>,
}

impl RowDoc {
    pub fn new(row: &CorollaryRow, o: &RowOutcome) -> Self {
        Self {
            key: o.key.clone(),
            case: row.case.clone(),
            regime: row.regime,
            status: o.status,
            fit: (&o.fit).into(),
            selected_fit: (&o.selected_fit).into(),
            expected: nums([o.expected.a, o.expected.b, o.expected.c]),
            deltas: nums([o.deltas.a, o.deltas.b, o.deltas.c]),
            reason: o.reason.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub kind: String,
    pub params: Params,
    pub samples: Vec<[Num; 2]>,
    pub fit: FitDoc,
    pub table_row: Option<RowDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub window: [Num; 2],
    pub rows: Vec<RowDoc>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainNormDoc {
    pub kind: String,
    pub params: Params,
    pub profile: String,
    pub value: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalDoc {
    pub r: Num,
    pub average: Num,
    pub lower_bound: Num,
    pub ratio: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRowDoc {
    pub r: Num,
    pub best_ratio: Num,
    pub best_element: String,
    pub kernel_ratio: Num,
    pub tracking: Num,
}

impl From<&WitnessRow> for WitnessRowDoc {
    fn from(w: &WitnessRow) -> Self {
        Self {
            r: Num(w.r),
            best_ratio: Num(w.best_ratio),
            best_element: w.best_element.clone(),
            kernel_ratio: Num(w.kernel_ratio),
            tracking: Num(w.tracking),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorreyWitnessDoc {
    pub rows: Vec<WitnessRowDoc>,
    pub sup_ratio: Num,
    pub min_tracking: Num,
    pub max_tracking: Num,
    pub lower_constant: Num,
}

impl From<&WitnessReport> for MorreyWitnessDoc {
    fn from(w: &WitnessReport) -> Self {
        Self {
            rows: w.rows.iter().map(Into::into).collect(),
            sup_ratio: Num(w.sup_ratio),
            min_tracking: Num(w.min_tracking),
            max_tracking: Num(w.max_tracking),
            lower_constant: Num(w.lower_constant),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub params: Params,
    pub profile: String,
    pub extremal: Vec<ExtremalDoc>,
    pub morrey: MorreyWitnessDoc,
    pub radial_morrey: Num,
    pub marcinkiewicz: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDoc {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelftestDoc {
    pub seed: u64,
    pub sections: Vec<SectionDoc>,
    pub identical: bool,
    pub report_bytes: usize,
    pub report_sha256: String,
}

/// Writes `doc` as pretty JSON followed by a newline.
pub fn write_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> std::io::Result<()> {
    let s = serde_json::to_string_pretty(doc).map_err(std::io::Error::other)?;
    writeln!(out, "{s}")
}

pub fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(std::io::Error::other)?;
    for r in rows {
        w.write_record(r).map_err(std::io::Error::other)?;
    }
    w.flush()
}
