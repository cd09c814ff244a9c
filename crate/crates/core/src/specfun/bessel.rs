//! Exponentially scaled `I₀` and the combination `I₀ − L₀` (modified Bessel
//! minus modified Struve), both free of large cancelling terms.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::numerics::gauss_legendre_composite;

const I0_SERIES_LIMIT: f64 = 25.0;
const STRUVE_INTEGRAL_LIMIT: f64 = 40.0;

/// `e^{−x} I₀(x)` for `x ≥ 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let x = x.abs();
    if x.is_infinite() {
        return 0.0;
    }
    if x < I0_SERIES_LIMIT {
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // e^{−x} I₀(x) ~ (2πx)^{−1/2} Σ ((2k−1)!!)² / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
            if next > term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// `I₀(x) − L₀(x)` for `x ≥ 0`.
///
/// Uses `(2/π)∫₀^{π/2} e^{−x cos θ} dθ` for moderate `x` and the asymptotic
/// series `(2/π) Σ ((2k−1)!!)² x^{−2k−1}` beyond.
pub fn bessel_minus_struve(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let x = x.max(0.0);
    if x < STRUVE_INTEGRAL_LIMIT {
        let panels = 8 + (2.0 * x) as usize;
        2.0 / PI * gauss_legendre_composite(|t| (-x * t.cos()).exp(), 0.0, FRAC_PI_2, panels)
    } else {
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0).powi(2) / x2;
            if next > term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        2.0 / (PI * x) * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_i0_scaled(0.0), 1.0);
        assert!((bessel_minus_struve(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn i0_at_one() {
        assert!((bessel_i0_scaled(1.0) - 0.465_759_607_593_640_3).abs() < 1e-14);
    }

    #[test]
    fn branches_join_continuously() {
        let a = bessel_i0_scaled(I0_SERIES_LIMIT - 1e-9);
        let b = bessel_i0_scaled(I0_SERIES_LIMIT + 1e-9);
        assert!((a - b).abs() < 1e-10 * a);
        let a = bessel_minus_struve(STRUVE_INTEGRAL_LIMIT - 1e-9);
        let b = bessel_minus_struve(STRUVE_INTEGRAL_LIMIT + 1e-9);
        assert!((a - b).abs() < 1e-10 * a);
    }

    #[test]
    fn struve_small_argument_expansion() {
        let x: f64 = 1e-3;
        let approx = 1.0 - 2.0 * x / PI + x * x / 4.0;
        assert!((bessel_minus_struve(x) - approx).abs() < 1e-9);
    }

    #[test]
    fn struve_large_argument() {
        let x: f64 = 100.0;
        let v = bessel_minus_struve(x);
        let three_terms = 2.0 / (PI * x) * (1.0 + 1.0 / x.powi(2) + 9.0 / x.powi(4));
        assert!((v - three_terms).abs() < 1e-4 * v);
        assert!((v - 2.0 / (PI * x)).abs() < 2e-4 * v);
    }
}
