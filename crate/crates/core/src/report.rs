//! Report documents and their deterministic JSON and CSV encodings.
//!
//! Floats are written with 17 significant digits and keys keep declaration
//! order, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bracket::{DistanceBracket, Scale, Witness};
use crate::glued::{BallRadius, BandRegion, CompletenessReport, NoncompactnessReport};
use crate::verify::SweepResult;

/// A pair of bounds in one scale.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ScaledInterval {
    pub scale: Scale,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
}

/// A bracket with both scales and both witnesses.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct BracketRecord {
    /// `annulus` or `glued`.
    pub space: String,
    pub outer_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    pub a: String,
    pub b: String,
    pub mobius: ScaledInterval,
    pub poincare: ScaledInterval,
    pub lower_witness: Witness,
    pub upper_witness: Witness,
}

impl BracketRecord {
    pub fn new(
        space: &str,
        outer_radius: f64,
        truncation: Option<u32>,
        a: String,
        b: String,
        bracket: DistanceBracket,
    ) -> Self {
        let (pl, pu) = (bracket.poincare_lower(), bracket.poincare_upper());
        Self {
            space: space.into(),
            outer_radius,
            truncation,
            a,
            b,
            mobius: ScaledInterval {
                scale: Scale::Mobius,
                lower: bracket.lower,
                upper: bracket.upper,
                width: bracket.width(),
            },
            poincare: ScaledInterval {
                scale: Scale::Poincare,
                lower: pl,
                upper: pu,
                width: pu - pl,
            },
            lower_witness: bracket.lower_witness,
            upper_witness: bracket.upper_witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(tag = "probe", rename_all = "kebab-case")]
pub enum ProbeRecord {
    Noncompactness {
        outer_radius: f64,
        truncation: u32,
        report: NoncompactnessReport,
    },
    Completeness {
        outer_radius: f64,
        truncation: u32,
        sequence: Vec<String>,
        report: CompletenessReport,
    },
    Ball {
        outer_radius: f64,
        truncation: u32,
        center: String,
        region: BandRegion,
        samples: usize,
        result: BallRadius,
    },
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub pass: bool,
    pub sweeps: Vec<SweepResult>,
    pub brackets: Vec<BracketRecord>,
    pub probes: Vec<ProbeRecord>,
    /// Wall-clock seconds per section; left out unless asked for, since it
    /// differs between otherwise identical runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl ReportDocument {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            tool: "carathlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            pass: true,
            sweeps: Vec::new(),
            brackets: Vec::new(),
            probes: Vec::new(),
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    /// One row per sweep sample; brackets and probes have nested witnesses
    /// and are JSON only.
    pub fn sweeps_to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "sweep",
            "outer_radius",
            "parameter_name",
            "parameter",
            "lhs",
            "rhs",
            "value_scale",
            "sweep_pass",
        ])
        .expect("writing to memory");
        for s in &self.sweeps {
            let radius = s
                .constants
                .get("outer_radius")
                .map(|r| fmt_f64(*r))
                .unwrap_or_default();
            for x in &s.samples {
                w.write_record([
                    s.name.clone(),
                    radius.clone(),
                    s.parameter_name.clone(),
                    x.parameter.to_string(),
                    fmt_f64(x.lhs),
                    fmt_f64(x.rhs),
                    s.value_scale.clone(),
                    s.pass.to_string(),
                ])
                .expect("writing to memory");
            }
        }
        String::from_utf8(w.into_inner().expect("flushing memory")).expect("csv is utf-8")
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Pretty JSON whose floats are written by [`fmt_f64`]. Non-finite values
/// become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types always serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("json is utf-8")
}

struct FixedFloats<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FixedFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}
