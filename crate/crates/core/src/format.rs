//! Number formatting shared by exports and the CLI.

/// Fixed notation with 12 digits after the decimal point. Values that round
/// to zero print without a sign.
pub fn fixed12(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Decimal-point notation (never exponent form) with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // exponent after rounding to 12 significant digits
    let sci = format!("{x:.11e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("exponent form always has an exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
