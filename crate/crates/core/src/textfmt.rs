//! Line-oriented helpers shared by the symbol, polynomial and tuple formats.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Non-blank lines with `#` comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses `key=value` pairs such as `n=2 k=3` from one header line.
pub(crate) fn header_value(line: usize, body: &str, key: &str) -> Result<usize> {
    for part in body.split_whitespace() {
        if let Some((k, v)) = part.split_once('=') {
            if k.trim() == key {
                return v
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid value for {key}: {v:?}")));
            }
        }
    }
    Err(parse_err(line, format!("expected header field {key}=<integer>")))
}

/// Parses `re`, `re+imI`, `re-imI` or `imI`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let t = text.trim();
    let Some(body) = t.strip_suffix('I').or_else(|| t.strip_suffix('i')) else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // Split at the last sign that is not the leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().ok()?;
            let im_text = &body[i..];
            let im = match im_text {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse::<f64>().ok()?,
            };
            Some(Complex64::new(0.0, im))
        }
    }
}

/// Formats a complex number as `re+imI` using shortest round-trip decimals.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}I", z.re, -z.im)
    } else {
        format!("{}+{}I", z.re, z.im)
    }
}
