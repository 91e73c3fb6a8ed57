//! Flag/config-file merging. Flags win over file values.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::Failure;

pub fn resolve<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: Option<&Path>,
) -> Result<T, Failure> {
    let Some(path) = config else {
        return Ok(
            serde_json::from_value(serde_json::to_value(flags).expect("flags serialize"))
                .expect("flags round-trip"),
        );
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut merged: Map<String, Value> = match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => m,
        Ok(_) => {
            return Err(Failure::Input(format!(
                "{}: config must be a JSON object",
                path.display()
            )))
        }
        Err(e) => return Err(Failure::Input(format!("{}: {e}", path.display()))),
    };
    if let Value::Object(given) = serde_json::to_value(flags).expect("flags serialize") {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}
