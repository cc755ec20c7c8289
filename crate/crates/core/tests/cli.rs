use std::path::PathBuf;
use std::process::{Command, Output};

use pbt::cli::{parse_partition_key, to_json_line, OutputRecord, CSV_HEADER};
use serde_json::Value;

fn pbt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pbt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

// Enough of JSON Schema for the published record schema: type, const, enum,
// minimum, maximum, required, properties and additionalProperties.
fn validate(schema: &Value, value: &Value, at: &str) -> Result<(), String> {
    if let Some(types) = schema.get("type") {
        let allowed: Vec<&str> = match types {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().map(|t| t.as_str().unwrap()).collect(),
            _ => unreachable!(),
        };
        let matches = |t: &str| match t {
            "object" => value.is_object(),
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            "array" => value.is_array(),
            _ => false,
        };
        if !allowed.iter().any(|t| matches(t)) {
            return Err(format!("{at}: {value} is not of type {allowed:?}"));
        }
    }
    if let Some(c) = schema.get("const") {
        if c != value {
            return Err(format!("{at}: expected {c}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(value) {
            return Err(format!("{at}: {value} not in {options:?}"));
        }
    }
    if let Some(x) = value.as_f64() {
        if schema.get("minimum").and_then(Value::as_f64).is_some_and(|m| x < m) {
            return Err(format!("{at}: {x} below minimum"));
        }
        if schema.get("maximum").and_then(Value::as_f64).is_some_and(|m| x > m) {
            return Err(format!("{at}: {x} above maximum"));
        }
    }
    if let Value::Object(map) = value {
        if let Some(Value::Array(required)) = schema.get("required") {
            for key in required {
                if !map.contains_key(key.as_str().unwrap()) {
                    return Err(format!("{at}: missing {key}"));
                }
            }
        }
        let properties = schema.get("properties").and_then(Value::as_object);
        for (key, v) in map {
            let path = format!("{at}.{key}");
            match (properties.and_then(|p| p.get(key)), schema.get("additionalProperties")) {
                (Some(sub), _) => validate(sub, v, &path)?,
                (None, Some(Value::Bool(false))) => return Err(format!("{path}: not allowed")),
                (None, Some(sub @ Value::Object(_))) => validate(sub, v, &path)?,
                (None, _) => {}
            }
        }
    }
    Ok(())
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output_record.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fid_examples() {
    let v = json(&pbt(&["fid", "--d", "2", "--N", "2", "--mode", "standard"]));
    assert!((v["F"].as_f64().unwrap() - 0.4665064).abs() < 1e-7);
    let v = json(&pbt(&["fid", "--d", "3", "--N", "1"]));
    assert_eq!(v["F"].as_f64().unwrap(), 1.0 / 9.0);
    let v = json(&pbt(&["fid", "--d", "2", "--N", "2", "--mode", "optimized"]));
    assert!((v["F"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    let c = v["coefficients"].as_object().unwrap();
    assert!((c["[2]"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-14);
    assert!((c["[1,1]"].as_f64().unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn json_records_validate_and_round_trip() {
    let schema = schema();
    let runs: [&[&str]; 4] = [
        &["fid", "--d", "2", "--N", "5"],
        &["fid", "--d", "3", "--N", "60", "--mode", "optimized"],
        &["fid", "--d", "4", "--N", "3", "--mode", "optimized", "--timing"],
        &["scan", "--d", "2", "--from", "1", "--to", "6", "--mode", "optimized"],
    ];
    for args in runs {
        let out = pbt(args);
        assert!(out.status.success(), "{}", stderr(&out));
        for line in stdout(&out).lines() {
            let value: Value = serde_json::from_str(line).unwrap();
            validate(&schema, &value, "$").unwrap();
            if let Some(c) = value["coefficients"].as_object() {
                for key in c.keys() {
                    parse_partition_key(key).unwrap();
                }
            }
            let record: OutputRecord = serde_json::from_str(line).unwrap();
            assert_eq!(to_json_line(&record), line);
        }
    }
}

#[test]
fn schema_rejects_malformed_records() {
    let schema = schema();
    let good = json(&pbt(&["fid", "--d", "2", "--N", "3"]));
    let mut extra = good.clone();
    extra["unexpected"] = Value::Bool(true);
    assert!(validate(&schema, &extra, "$").is_err());
    let mut bad_mode = good.clone();
    bad_mode["mode"] = Value::String("other".into());
    assert!(validate(&schema, &bad_mode, "$").is_err());
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("F");
    assert!(validate(&schema, &missing, "$").is_err());
}

#[test]
fn output_is_byte_identical_and_plain_decimal() {
    let args = ["scan", "--d", "3", "--from", "1", "--to", "60", "--mode", "optimized", "--format", "csv"];
    let (a, b) = (pbt(&args), pbt(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    for line in text.lines().skip(1) {
        for field in [3, 4] {
            let value = line.split(',').nth(field).unwrap();
            assert!(!value.contains(['e', 'E']), "{value}");
        }
    }
    let json_args = ["fid", "--d", "2", "--N", "300", "--mode", "optimized"];
    assert_eq!(pbt(&json_args).stdout, pbt(&json_args).stdout);
}

#[test]
fn scan_csv_examples() {
    let out = pbt(&["scan", "--d", "2", "--from", "1", "--to", "100", "--mode", "standard", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 100);
    let f: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    for (k, w) in f.windows(2).enumerate() {
        assert!(w[0] <= w[1] + 1e-12, "N={}", k + 1);
    }
    for (k, &value) in f.iter().enumerate() {
        let n = (k + 1) as f64;
        assert!(value >= 1.0 - 3.0 / n && value <= 1.0);
    }

    let out = pbt(&["scan", "--d", "1", "--from", "1", "--to", "5", "--format", "csv"]);
    for line in stdout(&out).lines().skip(1) {
        assert_eq!(line.split(',').nth(3).unwrap(), "1.0");
    }
}

#[test]
fn verify_examples() {
    let out = pbt(&["verify", "--d", "2", "--N", "3", "--mode", "standard"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(stderr(&out).contains("PASS"));

    let out = pbt(&["verify", "--d", "2", "--N", "2", "--mode", "optimized"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!((json(&out)["oracle_p_succ"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = pbt(&["verify", "--d", "2", "--N", "12"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("cap"), "{}", stderr(&out));
}

#[test]
fn verify_respects_oracle_cap_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_pbt"))
        .args(["verify", "--d", "2", "--N", "3"])
        .env("PBT_ORACLE_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn spectrum_examples() {
    let v = json(&pbt(&["spectrum", "--d", "2", "--N", "2", "--operator", "avg"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["mu"], serde_json::json!([2]));
    assert_eq!(rows[0]["value"].as_f64(), Some(0.75));
    assert_eq!(rows[1]["value"].as_f64(), Some(0.25));
    let rank: u64 = rows.iter().map(|r| r["multiplicity"].as_str().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(rank, 4);

    let out = pbt(&["spectrum", "--d", "2", "--N", "3", "--operator", "X", "--compare", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("alpha,mu,value,multiplicity,oracle,deviation"));
    for line in text.lines().skip(1) {
        let deviation: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(deviation < 1e-9);
    }
}

#[test]
fn coefficient_files() {
    let good = temp_file("good.json", r#"{"[2]": 0.6666666666666666, "[1,1]": 2.0}"#);
    let v = json(&pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", good.to_str().unwrap()]));
    assert!((v["F"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert_eq!(v["mode"], "given-coefficients");

    let pairs = temp_file("pairs.json", "[[[2], 0.6666666666666666], [[1,1], 2.0]]");
    let v = json(&pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", pairs.to_str().unwrap()]));
    assert!((v["F"].as_f64().unwrap() - 0.5).abs() < 1e-14);

    let off = temp_file("off.json", r#"{"[2]": 1.0, "[1,1]": 3.0}"#);
    let path = off.to_str().unwrap();
    let out = pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("residual"), "{}", stderr(&out));
    let out = pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", path, "--renormalize"]);
    assert!(out.status.success());

    let broken = temp_file("broken.json", "{not json");
    let out = pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = pbt(&["fid", "--d", "2", "--N", "2", "--mode", "given", "--coefficients", "/nonexistent/c.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["fid", "--d", "0", "--N", "2"][..],
        &["fid", "--d", "2"],
        &["fid", "--d", "2", "--N", "2", "--mode", "bogus"],
        &["fid", "--d", "2", "--N", "2", "--mode", "given"],
        &["scan", "--d", "2", "--from", "3", "--to", "1"],
        &["scan", "--d", "2", "--from", "0", "--to", "1"],
        &["scan", "--d", "2", "--from", "1", "--to", "3", "--mode", "given"],
        &["frobnicate"],
    ] {
        assert_eq!(pbt(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn run_writes_to_the_given_streams() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pbt::cli::run(["pbt", "fid", "--d", "2", "--N", "4", "--format", "csv"], &mut out, &mut err);
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(err.is_empty());
}
