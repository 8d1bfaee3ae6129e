//! Hyperbolic cotangent with stable small- and large-argument branches.

/// Below this argument coth is evaluated from its Laurent series.
pub const COTH_SERIES_BELOW: f64 = 1e-4;
/// Above this argument coth is 1 to double precision.
pub const COTH_SATURATES_ABOVE: f64 = 20.0;

/// `coth(x)` for `x > 0`; `+inf` maps to 1.
pub fn coth(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax > COTH_SATURATES_ABOVE {
        1.0
    } else if ax < COTH_SERIES_BELOW {
        // 1/x + x/3 - x^3/45
        1.0 / ax + ax / 3.0 - ax * ax * ax / 45.0
    } else {
        // 1 + 2/(e^{2x} - 1), exp_m1 keeps accuracy for moderate x
        1.0 + 2.0 / (2.0 * ax).exp_m1()
    };
    v.copysign(x)
}

/// `|a - o| / max(|a|, |o|, 1e-300)`.
pub fn relative_error(a: f64, o: f64) -> f64 {
    let scale = a.abs().max(o.abs()).max(1e-300);
    (a - o).abs() / scale
}
