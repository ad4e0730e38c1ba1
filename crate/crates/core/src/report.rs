//! Output formatting shared by the report writers.

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0e0" noise in reports
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// Relative error `|got - want| / |want|`; `None` when `want` is zero.
pub fn rel_err(got: f64, want: f64) -> Option<f64> {
    if want == 0.0 {
        None
    } else {
        Some((got - want).abs() / want.abs())
    }
}
