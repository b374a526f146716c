//! Number formatting for emitted tables.

/// Decimal rendering with nine significant digits. Values between 1e-4 and
/// 1e9 in magnitude print in positional notation, the rest in scientific.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exponent) {
        let decimals = (8 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}

/// Decibels with two decimals.
pub fn db2(x_db: f64) -> String {
    format!("{x_db:.2}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}
