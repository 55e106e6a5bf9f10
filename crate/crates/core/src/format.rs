//! Fixed-precision number formatting for JSON and CSV output.

use serde_json::Value;

/// Significant digits in JSON output (round-trip safe for `f64`).
pub const JSON_DIGITS: usize = 17;
/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

/// `printf("%.*g")`: `digits` significant digits, trailing zeros removed,
/// scientific notation outside `1e−5 ≤ |x| < 10^digits`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_number(x: f64) -> String {
    format_sig(x, CSV_DIGITS)
}

pub fn csv_row(values: &[f64]) -> String {
    values
        .iter()
        .map(|&x| csv_number(x))
        .collect::<Vec<_>>()
        .join(",")
}

/// Compact JSON with floats at [`JSON_DIGITS`] significant digits. Non-finite
/// floats become the strings `"inf"`, `"-inf"` and `"NaN"`.
pub fn to_json_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_sig(n.as_f64().expect("f64"), JSON_DIGITS));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(v, out);
            }
            out.push('}');
        }
    }
}

/// A float as a JSON value, keeping non-finite values representable.
pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format_sig(x, JSON_DIGITS)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.8, 17), "0.80000000000000004");
        assert_eq!(format_sig(0.8, 12), "0.8");
        assert_eq!(format_sig(1.0, 17), "1");
        assert_eq!(format_sig(-2.5e-7, 12), "-2.5e-7");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(1e20, 12), "1e20");
        assert_eq!(format_sig(f64::NEG_INFINITY, 12), "-inf");
        assert_eq!(format_sig(0.0, 17), "0");
    }

    #[test]
    fn every_value_round_trips() {
        for x in [
            0.1,
            2.0 / 3.0,
            1e-300,
            6.02e23,
            -1.0 / 7.0,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(format_sig(x, 17).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_writer() {
        let v = json!({"b": [1, 0.5, null], "a": "x\"y", "c": true});
        assert_eq!(
            to_json_string(&v),
            r#"{"a":"x\"y","b":[1,0.5,null],"c":true}"#
        );
        assert_eq!(to_json_string(&json_f64(f64::INFINITY)), r#""inf""#);
    }
}
