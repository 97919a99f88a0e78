//! Fixed-precision decimal formatting shared by the CSV and JSON-lines writers.

/// Significant digits used for every numeric cell written by this crate.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// plain notation for moderate exponents, scientific otherwise, trailing
/// zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Round first, then read the exponent so that 9.99..95 -> 1e+k is handled.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Shorthand for [`sig`] at [`SIG_DIGITS`].
pub fn num(x: f64) -> String {
    sig(x, SIG_DIGITS)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Comma-separated list at [`SIG_DIGITS`].
pub fn list(values: &[f64]) -> String {
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(",")
}
