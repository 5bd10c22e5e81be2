//! Stable numeric formatting for report files.

/// Format `v` with `sig` significant digits in plain decimal notation.
///
/// Used for every numeric cell written to CSV so that diffs are stable:
/// the rounding absorbs last-ulp differences between platforms while
/// keeping values like `12.7279` readable.
pub fn fmt_sig(v: f64, sig: u32) -> String {
    if !v.is_finite() {
        return String::new();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}
