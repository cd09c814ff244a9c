//! Complex gamma function via the Lanczos approximation (g = 607/128, 15
//! terms), evaluated in log space with a reflection formula for `Re z < 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 5.0 {
        (z * PI).sin().ln()
    } else if z.im > 0.0 {
        // sin(πz) = e^{-iπz}(e^{2iπz} − 1)/(2i)
        -i * PI * z + ((2.0 * i * PI * z).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        // sin(πz) = e^{iπz}(1 − e^{-2iπz})/(2i)
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() - (2.0 * i).ln()
    }
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// A logarithm of Γ(z) (not necessarily the principal branch of the
/// analytic log-gamma, but `exp` of it is Γ(z)).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Γ(z) for complex `z`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// 1/Γ(z), which is entire and vanishes at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integers_and_half() {
        assert!((gamma_complex(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((gamma_complex(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma_complex(c(0.5, 0.0)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma_complex(c(-0.5, 0.0)).unwrap() + 2.0 * PI.sqrt()).norm() < 1e-13);
    }

    #[test]
    fn modulus_on_line_re_one() {
        let g = gamma_complex(c(1.0, -1.0)).unwrap();
        assert!((g.norm_sqr() - PI / PI.sinh()).abs() < 1e-14);
        assert!((g.norm_sqr() - 0.272_029).abs() < 1e-6);
    }

    #[test]
    fn poles_are_errors() {
        assert!(matches!(gamma_complex(c(0.0, 0.0)), Err(Error::GammaPole { .. })));
        assert!(matches!(gamma_complex(c(-3.0, 0.0)), Err(Error::GammaPole { .. })));
        assert_eq!(rgamma(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn recurrence_far_from_axis() {
        for &z in &[c(0.3, 40.0), c(-7.2, -25.0), c(12.0, 150.0)] {
            let lhs = ln_gamma(z + 1.0).unwrap();
            let rhs = ln_gamma(z).unwrap() + z.ln();
            let d = lhs - rhs;
            let wrapped = (d.im / (2.0 * PI)).round() * 2.0 * PI;
            assert!((d.re).abs() < 1e-12 * lhs.norm().max(1.0), "{z}: {d}");
            assert!((d.im - wrapped).abs() < 1e-11 * lhs.norm().max(1.0), "{z}: {d}");
        }
    }
}
