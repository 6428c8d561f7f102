//! Deterministic report emission.
//!
//! JSON renders with a fixed field order and every float as lowercase
//! scientific with 15 significant digits, so identical configurations give
//! byte-identical files. Non-finite floats render as `null` rather than
//! producing invalid JSON.

use std::fmt::Write as _;

use crouzeix_core::matrix::Complex64;

#[derive(Debug, Clone)]
pub enum Json {
    Int(i64),
    Num(f64),
    Bool(bool),
    // Reports currently carry no free-form strings; the variant keeps the
    // emitter total over JSON and escaping stays covered by tests.
    #[allow(dead_code)]
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

pub fn int(v: usize) -> Json {
    Json::Int(v as i64)
}

pub fn num(v: f64) -> Json {
    Json::Num(v)
}

pub fn complex_pair(z: Complex64) -> Json {
    Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
}

/// 15 significant digits, lowercase scientific. Round-trips f64 exactly
/// for the magnitudes reports contain; `serde_json` and friends parse it.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.14e}")
    } else {
        "null".to_string()
    }
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Num(v) => out.push_str(&fmt_float(*v)),
            Json::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                // Arrays of objects nest one element per line; everything
                // else (scalars, coordinate pairs) stays on one line.
                if items.iter().any(|i| matches!(i, Json::Obj(_))) {
                    out.push('[');
                    for (pos, item) in items.iter().enumerate() {
                        if pos > 0 {
                            out.push(',');
                        }
                        out.push('\n');
                        push_indent(out, indent + 1);
                        item.write(out, indent + 1);
                    }
                    out.push('\n');
                    push_indent(out, indent);
                    out.push(']');
                } else {
                    out.push('[');
                    for (pos, item) in items.iter().enumerate() {
                        if pos > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, indent);
                    }
                    out.push(']');
                }
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (pos, (key, value)) in fields.iter().enumerate() {
                    if pos > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
