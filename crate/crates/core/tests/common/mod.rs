//! Independent reference implementations used only by the tests:
//! double-double arithmetic and a shifted Stirling gamma.

#![allow(dead_code)]

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    pub fn mul_f(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        quick_two_sum(p, e + self.lo * b)
    }

    pub fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        quick_two_sum(p, e + self.hi * b.lo + self.lo * b.hi)
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f(q2));
        let q3 = r.hi / b.hi;
        quick_two_sum(q1, q2).add(Dd::new(q3))
    }

    pub fn div_f(self, b: f64) -> Dd {
        self.div(Dd::new(b))
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn new(z: C64) -> CDd {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, b: CDd) -> CDd {
        CDd { re: self.re.add(b.re), im: self.im.add(b.im) }
    }

    /// Product with an `f64` complex number.
    pub fn mul_c(self, c: C64) -> CDd {
        CDd {
            re: self.re.mul_f(c.re).sub(self.im.mul_f(c.im)),
            im: self.re.mul_f(c.im).add(self.im.mul_f(c.re)),
        }
    }

    pub fn div_f(self, b: f64) -> CDd {
        CDd { re: self.re.div_f(b), im: self.im.div_f(b) }
    }

    /// Quotient by an `f64` complex number whose squared modulus is exact.
    pub fn div_c(self, c: C64) -> CDd {
        self.mul_c(c.conj()).div_f(c.re * c.re + c.im * c.im)
    }
}

/// `ln Γ(z)` for `Re z > 0` by upward recurrence to `|z| ≥ 30` and the
/// Stirling series. The imaginary part is not reduced to the principal branch.
pub fn ln_gamma_stirling(z: C64) -> C64 {
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.norm() < 30.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for (k, b) in B.iter().enumerate() {
        let n = 2.0 * (k + 1) as f64;
        s += *b / (n * (n - 1.0) * wp);
        wp *= w2;
    }
    s - shift
}

pub fn gamma_stirling(z: C64) -> C64 {
    ln_gamma_stirling(z).exp()
}

/// `D_ν(z)` from its Maclaurin series, with the initial values from the
/// Stirling gamma. Accurate for `|z| ≲ 4`.
pub fn pcf_maclaurin(nu: C64, z: C64) -> C64 {
    let sqrt_pi = PI.sqrt();
    let two = C64::new(2.0, 0.0);
    let a0 = two.powc(nu / 2.0) * sqrt_pi / gamma_stirling((1.0 - nu) / 2.0);
    let a1 = -two.powc((nu + 1.0) / 2.0) * sqrt_pi / gamma_stirling(-nu / 2.0);
    // y'' = (z²/4 − ν − ½) y
    let mut a = vec![a0, a1];
    let c = nu + 0.5;
    for k in 0..200usize {
        let prev = if k >= 2 { a[k - 2] } else { C64::new(0.0, 0.0) };
        let next = (-c * a[k] + 0.25 * prev) / ((k + 2) as f64 * (k + 1) as f64);
        a.push(next);
    }
    let mut s = C64::new(0.0, 0.0);
    let mut zp = C64::new(1.0, 0.0);
    for ak in &a {
        s += ak * zp;
        zp *= z;
    }
    s
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}
