//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! Works for real and complex integrands through [`QuadValue`]. Semi-infinite
//! and infinite domains are truncated where a caller-declared algebraic bound
//! `|f(x)| ≤ C·|x|^p` (with `p < −1`) makes the neglected tail smaller than a
//! tenth of the tolerance; that bound is added to the reported error.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use super::scalar::Scalar as QuadValue;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Integration domain. Tail variants carry the declared bound
/// `|f(x)| ≤ tail_coeff·|x|^tail_exp` valid beyond the finite endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    UpperTail { a: f64, tail_coeff: f64, tail_exp: f64 },
    LowerTail { b: f64, tail_coeff: f64, tail_exp: f64 },
    WholeLine { tail_coeff: f64, tail_exp: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 0.0, max_intervals: 4000 }
    }
}

impl QuadOptions {
    pub fn abs(tol: f64) -> Self {
        Self { abs_tol: tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = T::zero();
    let mut resabs = WGK[10] * fc.magnitude();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[10] * (fc - reskh).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).magnitude() + (fv2[j] - reskh).magnitude());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (result, err)
}

/// Radius beyond which the declared tail contributes at most `budget`.
fn truncation_point(tail_coeff: f64, tail_exp: f64, budget: f64) -> Result<f64> {
    if tail_exp >= -1.0 {
        return Err(Error::InvalidParameter(format!("tail exponent {tail_exp} must be < -1")));
    }
    if tail_coeff <= 0.0 {
        return Ok(1.0);
    }
    let m = -tail_exp - 1.0;
    Ok((tail_coeff / (m * budget)).powf(1.0 / m))
}

fn tail_bound(tail_coeff: f64, tail_exp: f64, t: f64) -> f64 {
    let m = -tail_exp - 1.0;
    tail_coeff * t.powf(-m) / m
}

/// Breakpoints `a, a+1, a+3, a+7, …, b` for long intervals that start with
/// structure near `a`.
fn geometric_breaks(a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut w = 1.0;
    while a + 2.0 * w < b {
        pts.push(a + w);
        w *= 2.0;
    }
    pts.push(b);
    pts.dedup();
    pts
}

/// Adaptive quadrature with an absolute tolerance.
pub fn quad_adaptive<T, F>(f: F, domain: Domain, tol: f64) -> Result<Quadrature<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    quad_adaptive_with(f, domain, QuadOptions::abs(tol))
}

/// Adaptive quadrature with full options.
pub fn quad_adaptive_with<T, F>(mut f: F, domain: Domain, opts: QuadOptions) -> Result<Quadrature<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature tolerance must be positive".into()));
    }
    let budget = opts.abs_tol.max(f64::MIN_POSITIVE) / 10.0;
    let (breaks, tail_err): (Vec<Vec<f64>>, f64) = match domain {
        Domain::Finite { a, b } => (vec![vec![a, b]], 0.0),
        Domain::UpperTail { a, tail_coeff, tail_exp } => {
            let t = truncation_point(tail_coeff, tail_exp, budget)?.max(a.abs() + 1.0);
            (vec![geometric_breaks(a, t)], tail_bound(tail_coeff, tail_exp, t))
        }
        Domain::LowerTail { b, tail_coeff, tail_exp } => {
            let t = truncation_point(tail_coeff, tail_exp, budget)?.max(b.abs() + 1.0);
            let mut pts: Vec<f64> = geometric_breaks(-b, t).into_iter().map(|x| -x).collect();
            pts.reverse();
            (vec![pts], tail_bound(tail_coeff, tail_exp, t))
        }
        Domain::WholeLine { tail_coeff, tail_exp } => {
            let t = truncation_point(tail_coeff, tail_exp, budget / 2.0)?.max(1.0);
            let mut neg: Vec<f64> = geometric_breaks(0.0, t).into_iter().map(|x| -x).collect();
            neg.reverse();
            let pos = geometric_breaks(0.0, t);
            (vec![neg, pos], 2.0 * tail_bound(tail_coeff, tail_exp, t))
        }
    };

    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    let mut evals = 0;
    for pts in &breaks {
        for w in pts.windows(2) {
            let (v, e) = gk21(&mut f, w[0], w[1]);
            evals += 21;
            total = total + v;
            total_err += e;
            heap.push(Segment { a: w[0], b: w[1], value: v, error: e });
        }
    }

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if total_err + tail_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence { estimate: total_err + tail_err, tol: target });
        }
        let worst = heap.pop().expect("non-empty segment heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval below floating resolution; accept what we have.
            heap.push(worst);
            if total_err + tail_err <= 10.0 * target {
                break;
            }
            return Err(Error::QuadratureNonConvergence { estimate: total_err + tail_err, tol: target });
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid);
        let (v2, e2) = gk21(&mut f, mid, worst.b);
        evals += 42;
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        if heap.len() % 64 == 0 {
            // Resum to keep rounding drift out of the running totals.
            total = heap.iter().fold(T::zero(), |s, seg| s + seg.value);
            total_err = heap.iter().map(|seg| seg.error).sum();
        }
    }
    let value = heap.iter().fold(T::zero(), |s, seg| s + seg.value);
    let error = heap.iter().map(|seg| seg.error).sum::<f64>() + tail_err;
    Ok(Quadrature { value, error, intervals: heap.len(), evaluations: evals })
}

/// Fixed composite Gauss–Legendre (10-point Gauss nodes of the Kronrod rule)
/// on `n` equal panels. For smooth integrands where adaptivity is not needed.
pub fn gauss_legendre_composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let w = (b - a) / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let c = a + (k as f64 + 0.5) * w;
        let h = 0.5 * w;
        for j in 0..5 {
            let x = XGK[2 * j + 1];
            s += WG[j] * (f(c - h * x) + f(c + h * x)) * h;
        }
    }
    s
}
