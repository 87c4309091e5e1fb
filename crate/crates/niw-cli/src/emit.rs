//! JSON writer with full round-trippable float formatting.
//!
//! Every non-integer number is printed with 17 significant digits in
//! scientific notation, so output bytes are stable and parse back to the
//! exact same f64. Object keys come out in sorted order (serde_json's
//! default map), which keeps the output diffable.

use serde_json::Value;

pub fn format_f64(x: f64) -> String {
    assert!(x.is_finite(), "numeric output must be finite, got {x}");
    format!("{x:.16e}")
}

pub fn to_string_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, true, &mut out);
    out
}

pub fn to_string_compact(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, false, &mut out);
    out
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(v: &Value, level: usize, pretty: bool, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_f64(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"))
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if pretty {
                    out.push('\n');
                    push_indent(out, level + 1);
                }
                write_value(item, level + 1, pretty, out);
            }
            if pretty {
                out.push('\n');
                push_indent(out, level);
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (key, val)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if pretty {
                    out.push('\n');
                    push_indent(out, level + 1);
                }
                out.push_str(&serde_json::to_string(key).expect("strings always serialize"));
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                write_value(val, level + 1, pretty, out);
            }
            if pretty {
                out.push('\n');
                push_indent(out, level);
            }
            out.push('}');
        }
    }
}
