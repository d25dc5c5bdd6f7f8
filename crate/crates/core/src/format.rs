//! Byte-stable number formatting for reports and CSV output.
//!
//! All floats are written with 12 significant digits, ties rounded to even.
//! JSON objects use `serde_json`'s default sorted maps, so key order is
//! lexicographic.

use serde_json::{Map, Value};

use crate::operator::{HermitianOperator, C64};

pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style rendering: positional for decimal exponents in `[-5, 12)`,
/// scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".to_string() } else { t.to_string() }
    } else {
        s
    }
}

/// The f64 nearest to the 12-significant-digit rendering of `x`.
pub fn round_sig(x: f64) -> f64 {
    let r: f64 = fmt_sig(x).parse().unwrap_or(x);
    if r == 0.0 { 0.0 } else { r }
}

/// JSON number rounded to `SIG_DIGITS`; integral values are written without a fraction.
pub fn num(x: f64) -> Value {
    let r = round_sig(x);
    if r.fract() == 0.0 && r.abs() < 9.0e15 {
        return Value::from(r as i64);
    }
    serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

pub fn num_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn complex_vec(v: &[C64]) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num_vec(&v.iter().map(|z| z.re).collect::<Vec<_>>()));
    m.insert("im".into(), num_vec(&v.iter().map(|z| z.im).collect::<Vec<_>>()));
    Value::Object(m)
}

/// Operator in the JSON operator schema, with rounded entries.
pub fn operator(h: &HermitianOperator) -> Value {
    let j = h.to_json();
    let rows = |rs: &Vec<Vec<f64>>| Value::Array(rs.iter().map(|r| num_vec(r)).collect());
    let mut m = Map::new();
    m.insert("dim".into(), Value::from(j.dim));
    m.insert("re".into(), rows(&j.re));
    m.insert("im".into(), rows(&j.im));
    Value::Object(m)
}

/// Pretty JSON followed by a newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Joins formatted floats as one CSV row.
pub fn csv_row(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_sig(x)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_numbers() {
        assert_eq!(to_json_string(&num(2.0)), "2\n");
        assert_eq!(to_json_string(&num(-0.125)), "-0.125\n");
        assert_eq!(to_json_string(&num(1.0 + 1e-13)), "1\n");
        assert_eq!(to_json_string(&num(-4.0 / 27.0)), "-0.148148148148\n");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(-4.0 / 27.0), "-0.148148148148");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(-0.125), "-0.125");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1e-20), "1e-20");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_sig(2.0 * std::f64::consts::PI), "6.28318530718");
        assert_eq!(fmt_sig(1e-13), "1e-13");
        assert_eq!(fmt_sig(-1.0e-5), "-0.00001");
    }

    #[test]
    fn json_numbers_are_rounded() {
        assert_eq!(num(-4.0 / 27.0).to_string(), "-0.148148148148");
        assert_eq!(num(-1e-17).to_string(), "-1e-17");
    }
}
