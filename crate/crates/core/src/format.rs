//! Significant-digit rounding for rendered numbers.

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    s.parse().unwrap_or(x)
}

/// Shortest decimal rendering of `x` rounded to `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e9).contains(&a) {
        let s = format!("{:.*e}", digits.saturating_sub(1), r);
        // trim trailing zeros in the mantissa
        match s.split_once('e') {
            Some((m, e)) if m.contains('.') => {
                let m = m.trim_end_matches('0').trim_end_matches('.');
                format!("{m}e{e}")
            }
            _ => s,
        }
    } else {
        format!("{r}")
    }
}
