use std::fmt;
use std::io::{self, Write};

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fidelity::{partition_key, EigenData, FidelityReport, ProtocolMode};
use crate::young::{NumericMode, Partition};

pub const TOOL_NAME: &str = "pbt";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Column order of CSV output.
pub const CSV_HEADER: &str = "d,N,mode,F,p_succ,numeric_mode,certificate_margin";

/// `x` in positional decimal with 17 significant digits, trailing zeros
/// trimmed. Never uses an exponent.
pub fn format_decimal(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exponent) = sci.split_once('e').expect("exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let point = exponent + 1;
    let (int_part, frac_part) = if point <= 0 {
        ("0".to_string(), "0".repeat((-point) as usize) + &digits)
    } else if point as usize >= digits.len() {
        (digits.clone() + &"0".repeat(point as usize - digits.len()), String::new())
    } else {
        (digits[..point as usize].to_string(), digits[point as usize..].to_string())
    };
    let frac = frac_part.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    let sign = if x < 0.0 { "-" } else { "" };
    format!("{sign}{int_part}.{frac}")
}

/// Compact JSON with floats written by [`format_decimal`].
struct DecimalFormatter;

impl serde_json::ser::Formatter for DecimalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_decimal(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// One line of JSON.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, DecimalFormatter);
    value.serialize(&mut ser).expect("serializable record");
    String::from_utf8(buf).expect("utf-8 JSON")
}

/// `{c_mu}` keyed by `"[2,1]"`, in canonical partition order.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMap(pub Vec<(Partition, f64)>);

impl Serialize for CoefficientMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (mu, c) in &self.0 {
            map.serialize_entry(&partition_key(mu), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for CoefficientMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Entries;

        impl<'de> Visitor<'de> for Entries {
            type Value = CoefficientMap;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"[rows]\" to coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, f64>()? {
                    entries.push((parse_partition_key(&key).map_err(serde::de::Error::custom)?, value));
                }
                Ok(CoefficientMap(entries))
            }
        }

        deserializer.deserialize_map(Entries)
    }
}

/// Parses `"[2,1]"` (or `"[]"`).
pub fn parse_partition_key(key: &str) -> Result<Partition, String> {
    let parts: Vec<u32> = serde_json::from_str(key).map_err(|_| format!("`{key}` is not an array of row lengths"))?;
    Partition::new(parts).map_err(|e| e.to_string())
}

/// A fidelity report as printed by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub tool: String,
    pub version: String,
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub mode: ProtocolMode,
    #[serde(rename = "F")]
    pub fidelity: f64,
    pub p_succ: f64,
    pub numeric_mode: NumericMode,
    pub coefficients: Option<CoefficientMap>,
    pub eigen: Option<EigenData>,
    pub degenerate: bool,
    /// `min(lambda_min(K - p_i rho_i), -|gap|)` when the report was certified.
    pub certificate_margin: Option<f64>,
    /// Present only with `--timing`, so default output is reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl OutputRecord {
    pub fn new(report: &FidelityReport) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            d: report.d,
            n: report.n,
            mode: report.mode,
            fidelity: report.fidelity,
            p_succ: report.success_probability,
            numeric_mode: report.numeric_mode,
            coefficients: report
                .coefficients
                .as_ref()
                .map(|c| CoefficientMap(c.iter().map(|(mu, v)| (mu.clone(), v)).collect())),
            eigen: report.eigen.clone(),
            degenerate: report.degenerate,
            certificate_margin: None,
            wall_time_ms: None,
        }
    }

    pub fn csv_row(&self) -> String {
        let margin = self.certificate_margin.map(format_decimal).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.d,
            self.n,
            self.mode,
            format_decimal(self.fidelity),
            format_decimal(self.p_succ),
            self.numeric_mode.as_str(),
            margin
        )
    }
}

/// Quotes a CSV field when it contains a separator or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
