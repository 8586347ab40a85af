use std::ffi::OsString;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::Value;
use weightlab::{AdmissibleDelta, WeightFunction, WeightMatrix, WeightSpec};

use crate::args::MatrixType;

/// Inline JSON, a `family:param` shorthand, or a path to a JSON document.
fn read_document(arg: &str) -> Result<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn shorthand(arg: &str) -> Option<WeightSpec> {
    let (family, param) = match arg.split_once(':') {
        Some((f, p)) => (f, Some(p.parse::<f64>().ok()?)),
        None => (arg, None),
    };
    let key = match family {
        "power" => "alpha",
        "gevrey" => "s",
        "log_power" | "logpower" => "beta",
        "log" | "exp" => "",
        _ => return None,
    };
    let params = match (key, param) {
        ("", None) => Default::default(),
        (k, Some(p)) if !k.is_empty() => [(k.to_string(), p)].into_iter().collect(),
        _ => return None,
    };
    Some(WeightSpec::Family { family: family.to_string(), params })
}

pub fn load_weight_spec(arg: &str) -> Result<WeightSpec> {
    if !Path::new(arg).exists() {
        if let Some(spec) = shorthand(arg) {
            return Ok(spec);
        }
    }
    let text = read_document(arg)?;
    serde_json::from_str(&text).with_context(|| format!("parsing weight definition {arg}"))
}

pub fn load_weight(arg: &str) -> Result<(WeightFunction, WeightSpec)> {
    let spec = load_weight_spec(arg)?;
    Ok((WeightFunction::from_spec(&spec)?, spec))
}

pub fn build_matrix(kind: MatrixType, w: WeightFunction) -> Result<WeightMatrix> {
    Ok(match kind {
        MatrixType::Exp => WeightMatrix::exponential(w),
        MatrixType::Dil => WeightMatrix::dilatation(w)?,
    })
}

#[derive(Deserialize)]
struct MatrixDoc {
    #[serde(rename = "type", default = "exp_type")]
    kind: String,
    weight: WeightSpec,
}

fn exp_type() -> String {
    "exp".into()
}

/// Matrix document, or a bare weight taken as an exponential matrix.
pub fn load_matrix(arg: &str) -> Result<(WeightMatrix, Value)> {
    let text = if Path::new(arg).exists() || arg.trim_start().starts_with('{') {
        read_document(arg)?
    } else {
        let spec = load_weight_spec(arg)?;
        serde_json::to_string(&spec)?
    };
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing matrix definition {arg}"))?;
    let doc: MatrixDoc = if value.get("weight").is_some() {
        serde_json::from_value(value)?
    } else {
        MatrixDoc { kind: exp_type(), weight: serde_json::from_value(value)? }
    };
    let kind = match doc.kind.as_str() {
        "exp" | "exponential" => MatrixType::Exp,
        "dil" | "dilatation" => MatrixType::Dil,
        other => bail!("unknown matrix type '{other}'"),
    };
    let w = WeightFunction::from_spec(&doc.weight)?;
    let echo = serde_json::json!({ "type": doc.kind, "weight": doc.weight });
    Ok((build_matrix(kind, w)?, echo))
}

/// `default`, `power:ALPHA`, inline JSON array or a path to one. `n` values are needed.
pub fn load_delta(arg: &str, n: usize) -> Result<AdmissibleDelta> {
    if arg == "default" {
        return Ok(AdmissibleDelta::default_formula(n)?);
    }
    if let Some(a) = arg.strip_prefix("power:") {
        let alpha: f64 = a.parse().with_context(|| format!("bad delta exponent '{a}'"))?;
        return Ok(AdmissibleDelta::default_formula(n)?.power(alpha)?);
    }
    let values: Vec<f64> = serde_json::from_str(&read_document(arg)?).context("delta must be a JSON array")?;
    let d = AdmissibleDelta::new(values)?;
    if d.len() < n {
        bail!("delta has {} values, the construction needs {n}", d.len());
    }
    Ok(d)
}

fn flag_value(v: &Value) -> Option<String> {
    match v {
        Value::Null | Value::Bool(_) => None,
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => Some(items.iter().filter_map(flag_value).collect::<Vec<_>>().join(",")),
        Value::Object(_) => Some(v.to_string()),
    }
}

/// Rewrites `argv` so a `--config` document supplies the command and its flags.
///
/// Keys become `--key value` (booleans become bare flags, arrays are comma
/// joined). A flag also given on the command line keeps the command-line value.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(argv);
    };
    let mut rest = argv.clone();
    let flag = rest.remove(pos).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => {
            if pos >= rest.len() {
                bail!("--config needs a path");
            }
            rest.remove(pos).to_string_lossy().into_owned()
        }
    };
    let text = fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let doc: serde_json::Map<String, Value> =
        serde_json::from_str(&text).with_context(|| format!("config {path} must be a JSON object"))?;
    let Some(Value::String(command)) = doc.get("command") else {
        bail!("config {path} needs a \"command\" key");
    };
    let mut out = vec![rest.remove(0), OsString::from(command)];
    let explicit: Vec<String> = rest
        .iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|f| f.split('=').next().unwrap_or(f).to_string()))
        .collect();
    for (key, v) in &doc {
        if key == "command" {
            continue;
        }
        let flag = if key.len() == 1 && key.chars().all(|c| c.is_ascii_uppercase()) {
            format!("--{key}")
        } else {
            format!("--{}", key.replace('_', "-"))
        };
        if explicit.iter().any(|e| *e == flag[2..]) {
            continue;
        }
        match (v, flag_value(v)) {
            (Value::Bool(true), _) => out.push(flag.into()),
            (_, Some(val)) => {
                out.push(flag.into());
                out.push(val.into());
            }
            _ => {}
        }
    }
    out.extend(rest.into_iter().filter(|a| a != command.as_str()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_weights() {
        assert!(matches!(shorthand("power:0.5"), Some(WeightSpec::Family { .. })));
        assert!(shorthand("log").is_some());
        assert!(shorthand("power").is_none());
        assert!(shorthand("log:2").is_none());
        assert!(shorthand("w.json").is_none());
    }

    #[test]
    fn inline_matrix_defaults_to_exponential() {
        let (_, echo) = load_matrix(r#"{"family": "power", "params": {"alpha": 0.5}}"#).unwrap();
        assert_eq!(echo["type"], "exp");
        let (_, echo) = load_matrix(r#"{"type": "dil", "weight": {"family": "log"}}"#).unwrap();
        assert_eq!(echo["type"], "dil");
    }

    #[test]
    fn delta_sources() {
        assert_eq!(load_delta("default", 5).unwrap().len(), 5);
        assert!(load_delta("power:0.5", 5).is_ok());
        assert!(load_delta("[1.0, 0.9]", 5).is_err());
    }
}
