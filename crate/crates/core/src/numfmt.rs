//! Stable numeric formatting for emitted artifacts.
//!
//! Everything written to JSON or CSV passes through a 12-significant-digit
//! rounding step so that golden files are identical across platforms.

use crate::scalar::Real;

/// Significant digits used by every emitted artifact.
pub const SIG_DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits (exact decimal rounding via
/// string formatting). Non-finite values and zero pass through.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("scientific notation round-trips")
}

/// Formats a scalar with [`SIG_DIGITS`] significant digits, shortest form.
pub fn fmt_g<F: Real>(x: F) -> String {
    let x = x.to_f64().expect("scalar converts to f64");
    let r = round_sig(x, SIG_DIGITS);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

/// Rounds an `f64` to the emission precision.
pub fn round_emit(x: f64) -> f64 {
    round_sig(x, SIG_DIGITS)
}
