use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use projangles::Tolerances;

pub const SCHEMA: u32 = 1;
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Decimal text with at most [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{}", round_sig(x))
    }
}

/// Rounds every float in the tree; infinities become `"inf"`/`"-inf"`.
pub fn round_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            if x.is_finite() {
                json!(round_sig(x))
            } else {
                Value::String(fmt_num(x))
            }
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_numbers(v))).collect()),
        other => other,
    }
}

pub fn envelope(config: Value, tolerances: &Tolerances, result: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("tool".into(), json!("projangles"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("config".into(), config);
    m.insert("tolerances".into(), serde_json::to_value(tolerances).expect("tolerances serialize"));
    m.insert("result".into(), result);
    round_numbers(Value::Object(m))
}

pub fn to_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("json values serialize");
    out.push(b'\n');
    out
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Sends `bytes` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2f64.sqrt() / 3.0 * 7f64.powf(0.2)), "0.695686140038");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        let v = round_numbers(json!({"a": [0.1 + 0.2, f64::MAX], "b": 3}));
        assert_eq!(v["a"][0], json!(0.3));
        assert_eq!(v["b"], json!(3));
    }
}
