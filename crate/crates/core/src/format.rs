//! Deterministic number rendering for CSV, `key=value` output and SVG.

/// Shortest representation that parses back to the same f64 (at most 17
/// significant digits). Plain decimal for `1e-5 <= |x| < 1e16`, scientific
/// otherwise.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Fixed two-decimal rendering for SVG coordinates.
pub(crate) fn coord(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}
