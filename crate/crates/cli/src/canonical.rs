//! Canonical JSON: sorted keys, two-space indentation, and every float
//! written with 17 significant digits so that parsing and re-emitting gives
//! the same bytes.

use serde_json::{Number, Value};

pub fn to_string(v: &Value) -> String {
    let mut out = String::new();
    write(v, 0, &mut out);
    out.push('\n');
    out
}

fn number(n: &Number, out: &mut String) {
    if n.is_i64() || n.is_u64() {
        out.push_str(&n.to_string());
    } else {
        let f = n.as_f64().unwrap_or(f64::NAN);
        out.push_str(&format!("{f:.16e}"));
    }
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write(v: &Value, level: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => number(n, out),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) => {
            // short arrays of scalars stay on one line
            if a.len() <= 8 && a.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write(x, level, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                indent(level + 1, out);
                write(x, level + 1, out);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            // serde_json's default map is ordered by key
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                indent(level + 1, out);
                out.push_str(&serde_json::to_string(k).expect("key encodes"));
                out.push_str(": ");
                write(x, level + 1, out);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_is_byte_identical() {
        let v = json!({"b": [0.1, 1.0, 2, -3.5e-300], "a": {"z": null, "y": "q\"x"}, "c": []});
        let s = to_string(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(to_string(&back), s);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn integral_floats_stay_floats() {
        let s = to_string(&json!(1.0));
        assert_eq!(s.trim(), "1.0000000000000000e0");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert!(back.is_f64());
    }
}
