use std::path::Path;

use serde_json::Value;

use super::output::parse_partition_key;
use crate::fidelity::PortCoefficients;
use crate::young::{BranchingTable, Partition};

/// Problems with a coefficients file.
#[derive(Debug)]
pub enum InputError {
    Read(String),
    Format(String),
    Invalid(crate::PbtError),
}

/// Reads `{c_mu}` from a JSON file, either a map `{"[2]": 0.66, "[1,1]": 2}`
/// or a list of pairs `[[[2], 0.66], [[1,1], 2]]`. Missing partitions are
/// zero. The normalization is enforced unless `renormalize` is set.
pub fn load_coefficients(path: &Path, table: &BranchingTable, renormalize: bool) -> Result<PortCoefficients, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Read(format!("{}: {e}", path.display())))?;
    let entries = parse_coefficients(&text)?;
    let built = if renormalize {
        PortCoefficients::renormalized(table, entries)
    } else {
        PortCoefficients::new(table, entries)
    };
    built.map_err(InputError::Invalid)
}

pub fn parse_coefficients(text: &str) -> Result<Vec<(Partition, f64)>, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Format(format!("not JSON: {e}")))?;
    let number = |v: &Value, what: &str| {
        v.as_f64()
            .ok_or_else(|| InputError::Format(format!("coefficient for {what} is not a number")))
    };
    match value {
        Value::Object(map) => map
            .iter()
            .map(|(key, v)| {
                let mu = parse_partition_key(key).map_err(InputError::Format)?;
                Ok((mu, number(v, key)?))
            })
            .collect(),
        Value::Array(items) => items
            .iter()
            .map(|item| match item.as_array().map(Vec::as_slice) {
                Some([rows, v]) => {
                    let parts: Vec<u32> = serde_json::from_value(rows.clone())
                        .map_err(|_| InputError::Format(format!("{rows} is not an array of row lengths")))?;
                    let mu = Partition::new(parts).map_err(|e| InputError::Format(e.to_string()))?;
                    Ok((mu, number(v, &rows.to_string())?))
                }
                _ => Err(InputError::Format(format!("expected [rows, c], got {item}"))),
            })
            .collect(),
        _ => Err(InputError::Format("expected an object or an array".into())),
    }
}
