//! Locale-free number formatting and parsing for data files and arguments.

use num_complex::Complex64;

use crate::{Error, Result};

/// Formats `x` with 15 significant digits the way C's `%.15g` does.
pub fn sig15(x: f64) -> String {
    sig(x, 15)
}

fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };

    if exp < -4 || exp >= digits as i32 {
        let m = trim_fraction(&format!("{}.{}", &digits_only[..1], &digits_only[1..]));
        let e_sign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{m}e{e_sign}{:02}", exp.abs());
    }
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits_only)
    } else {
        let point = exp as usize + 1;
        format!("{}.{}", &digits_only[..point], &digits_only[point..])
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Parses a complex number written as `a+bi`: `"2"`, `"1i"`, `"i"`,
/// `"1+1i"`, `"-0.5-2i"`, `"1e-3+2.5i"`. A trailing `j` is accepted for `i`.
pub fn parse_complex(input: &str) -> Result<Complex64> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::domain(format!("cannot parse {input:?} as a complex number a+bi"));
    if s.is_empty() {
        return Err(bad());
    }
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return Ok(Complex64::new(num(&s)?, 0.0));
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => num(t)?,
    };
    let re = if re.is_empty() { 0.0 } else { num(re)? };
    Ok(Complex64::new(re, im))
}
