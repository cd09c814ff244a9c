//! Quintic Hermite interpolation from values and first two derivatives.

use num_complex::Complex64;

/// Node data `(y, y', y'')` at the two ends of an interval of width `h`,
/// evaluated at the fractional position `s ∈ [0, 1]`.
#[allow(clippy::too_many_arguments)]
#[inline]
pub fn quintic_hermite(
    h: f64,
    y0: Complex64,
    d0: Complex64,
    s0: Complex64,
    y1: Complex64,
    d1: Complex64,
    s1: Complex64,
    s: f64,
) -> Complex64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    let h3 = 0.5 * s3 - s4 + 0.5 * s5;
    let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    y0 * h0 + d0 * (h * h1) + s0 * (h * h * h2) + s1 * (h * h * h3) + d1 * (h * h4) + y1 * h5
}

/// Uniform grid of `(y, y', y'')` samples starting at `x0` with spacing `h`.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub x0: f64,
    pub h: f64,
    pub y: Vec<Complex64>,
    pub dy: Vec<Complex64>,
    pub d2y: Vec<Complex64>,
}

impl HermiteTable {
    pub fn x_end(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }

    /// Interpolated value; arguments outside the grid are clamped to the end
    /// intervals (extrapolation).
    pub fn eval(&self, x: f64) -> Complex64 {
        let r = (x - self.x0) / self.h;
        let last = self.y.len() - 2;
        let j = if r <= 0.0 { 0 } else { (r as usize).min(last) };
        let s = r - j as f64;
        quintic_hermite(self.h, self.y[j], self.dy[j], self.d2y[j], self.y[j + 1], self.dy[j + 1], self.d2y[j + 1], s)
    }
}
