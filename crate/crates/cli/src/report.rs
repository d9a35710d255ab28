use serde::Serialize;
use serde_json::{json, Value};
use wreath_core::exact::{format_rational, rational_to_decimal};
use wreath_core::{Error, Rational};

pub const SCHEMA: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    CheckFailed,
    InvalidInput,
    BudgetExceeded,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::InvalidInput => 2,
            Status::BudgetExceeded => 3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub schema: &'static str,
    pub command: String,
    pub status: Status,
    pub payload: Value,
}

impl CommandResult {
    pub fn new(command: &str, status: Status, payload: Value) -> Self {
        CommandResult { schema: SCHEMA, command: command.to_string(), status, payload }
    }

    /// Status `ok` unless some entry of `checks` is false.
    pub fn from_checks(command: &str, checks: &[(&str, bool)], mut payload: Value) -> Self {
        let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        let map: serde_json::Map<String, Value> =
            checks.iter().map(|(n, ok)| (n.to_string(), Value::Bool(*ok))).collect();
        payload["checks"] = Value::Object(map);
        let status = if failed.is_empty() {
            Status::Ok
        } else {
            payload["failed_checks"] = json!(failed);
            Status::CheckFailed
        };
        CommandResult::new(command, status, payload)
    }

    pub fn from_error(command: &str, err: &Error) -> Self {
        let status = match err {
            Error::BudgetExceeded(_) | Error::FactorizationBudgetExceeded { .. } => Status::BudgetExceeded,
            Error::Internal(_) => Status::CheckFailed,
            Error::InvalidInput(_) | Error::NeedsMoreDigits { .. } => Status::InvalidInput,
        };
        let mut payload = json!({ "error": err.to_string() });
        if let Error::NeedsMoreDigits { have, need } = err {
            payload["have_digits"] = json!(have);
            payload["need_digits"] = json!(need);
        }
        if status == Status::CheckFailed {
            payload["failed_checks"] = json!(["internal"]);
        }
        CommandResult::new(command, status, payload)
    }
}

/// Exact `"num/den"` plus a 15-digit decimal rendering.
pub fn dual(x: &Rational) -> Value {
    json!({ "exact": format_rational(x), "decimal": rational_to_decimal(x, 15) })
}

/// `key = value` lines for terminal output.
pub fn render_text(result: &CommandResult) -> String {
    let mut lines = vec![format!("{}: {}", result.command, status_name(result.status))];
    flatten("", &result.payload, &mut lines);
    lines.join("\n")
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::CheckFailed => "check-failed",
        Status::InvalidInput => "invalid-input",
        Status::BudgetExceeded => "budget-exceeded",
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push(format!("{prefix} = [{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix} = {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
