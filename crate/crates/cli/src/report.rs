//! Report schema validation.
//!
//! The published schema (`docs/report-schema.json`) uses a small JSON-Schema
//! subset: `type`, `required`, `properties`, `items`, and `enum`. The
//! validator interprets exactly that subset, enough to pin the report shape
//! without pulling in a full schema engine.

use anyhow::{bail, Result};
use serde_json::Value;

pub const REPORT_SCHEMA: &str = include_str!("../../../docs/report-schema.json");

pub fn validate_report(report: &Value) -> Result<()> {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA)?;
    validate(&schema, report, "$")
}

fn validate(schema: &Value, value: &Value, path: &str) -> Result<()> {
    if let Some(ty) = schema.get("type").and_then(|t| t.as_str()) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "number" => value.is_number(),
            "null" => value.is_null(),
            other => bail!("unsupported schema type {other:?} at {path}"),
        };
        if !ok {
            bail!("{path}: expected {ty}, got {value}");
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(|e| e.as_array()) {
        if !allowed.contains(value) {
            bail!("{path}: {value} not among the allowed values");
        }
    }
    if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
        let obj = value
            .as_object()
            .ok_or_else(|| anyhow::anyhow!("{path}: required fields on a non-object"))?;
        for key in required {
            let key = key.as_str().expect("schema keys are strings");
            if !obj.contains_key(key) {
                bail!("{path}: missing required field {key:?}");
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        if let Some(obj) = value.as_object() {
            for (key, sub) in props {
                if let Some(v) = obj.get(key) {
                    validate(sub, v, &format!("{path}.{key}"))?;
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}
