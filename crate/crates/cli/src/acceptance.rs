//! Acceptance suite shared by `antikz selftest` and the `acceptance` test
//! target. Every criterion runs at its stated tolerance and reports one
//! line.

use std::f64::consts::PI;
use std::time::Instant;

use antikz_core::adiabatic::{adiabatic_metrics, chi2_integral_check, spectrum_numeric, spectrum_perturbative};
use antikz_core::ising::{
    defect_closed, defect_density, full_chain_oracle, DefectClosed, DefectMethod, IsingParams,
};
use antikz_core::lz::{
    dominance_terms, lz_propagator, p_closed, prob_first_order, prob_first_order_window, prob_numeric, ClosedForm,
    LZParams,
};
use antikz_core::numerics::{quad_adaptive, Domain};
use antikz_core::optimize::{deviation_metrics, kappa_opt_first, v_opt_numeric, Objective};
use antikz_core::specfun::{e_kappa, PcfFamily};

use crate::commands;
use crate::config::{Command, RunConfig};

type Check = Result<Findings, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Default)]
pub struct Findings {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Findings {
    fn require(&mut self, ok: bool, what: String) {
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn note(&mut self, what: String) {
        self.notes.push(what);
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    /// Part of the `--fast` subset.
    pub fast: bool,
    run: fn() -> Check,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {} ({:.1} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

impl Criterion {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let (passed, detail) = match (self.run)() {
            Ok(f) if f.failures.is_empty() => (true, f.notes.join("; ")),
            Ok(f) if f.notes.is_empty() => (false, f.failures.join("; ")),
            Ok(f) => (false, format!("{} | ok: {}", f.failures.join("; "), f.notes.join("; "))),
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome { id: self.id, title: self.title, passed, detail, seconds: start.elapsed().as_secs_f64() }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "noiseless sweep vs exact propagator", fast: true, run: noiseless_oracle },
        Criterion { id: 2, title: "parabolic-cylinder unitarity", fast: true, run: unitarity },
        Criterion { id: 3, title: "first-order formula", fast: true, run: first_order },
        Criterion { id: 4, title: "non-adiabatic and adiabatic regions", fast: false, run: regions },
        Criterion { id: 5, title: "Liouvillian spectrum", fast: true, run: spectrum },
        Criterion { id: 6, title: "defect density on N=100", fast: false, run: defect_reproduction },
        Criterion { id: 7, title: "first-order term dominance", fast: true, run: dominance },
        Criterion { id: 8, title: "weak-noise integrals", fast: true, run: weak_noise_integrals },
        Criterion { id: 9, title: "optimal sweep rate", fast: true, run: optimizer },
        Criterion { id: 10, title: "full chain vs mode product", fast: false, run: chain_factorization },
        Criterion { id: 11, title: "strong-noise comparisons", fast: false, run: strong_noise },
        Criterion { id: 12, title: "thread-count determinism", fast: true, run: determinism },
    ]
}

fn lz(kappa: f64, lambda: f64) -> LZParams {
    LZParams::new(kappa, lambda).with_window(-200.0, 200.0).with_tolerances(1e-10, 1e-12)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn noiseless_oracle() -> Check {
    let start = Instant::now();
    let mut f = Findings::default();
    for k in [0.5, 1.0, 2.0, 5.0] {
        let p = prob_numeric(&lz(k, 0.0))?;
        let exact = lz_propagator(k, 200.0, -200.0)?.f.norm_sqr();
        let d_lz = (p - (-2.0 * PI * k).exp()).abs();
        let d_prop = (p - exact).abs();
        f.require(d_lz <= 1e-2 && d_prop <= 1e-6, format!("k={k}: |P-e^-2pik|={d_lz:.1e}, |P-|f|^2|={d_prop:.1e}"));
    }
    let t = start.elapsed().as_secs_f64();
    f.require(t < 5.0, format!("{t:.2} s"));
    Ok(f)
}

fn unitarity() -> Check {
    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let fam = PcfFamily::new(0.5 * i as f64)?;
        for j in 0..=100 {
            worst = worst.max((fam.unitarity(-50.0 + j as f64) - 1.0).abs());
        }
    }
    let mut f = Findings::default();
    f.require(worst <= 1e-8, format!("max deviation {worst:.1e} on 41x101 grid"));
    Ok(f)
}

fn first_order() -> Check {
    let mut f = Findings::default();
    let l = 1e-3;
    let p1 = prob_numeric(&lz(1.0, l))?;
    let a1 = prob_first_order_window(&lz(1.0, l))?;
    f.require((a1 - p1).abs() <= 5e-4, format!("k=1: |diff|={:.1e}", (a1 - p1).abs()));
    f.note(format!("k=1 infinite-window |diff|={:.1e}", (prob_first_order(&lz(1.0, l))? - p1).abs()));
    let p10 = prob_numeric(&lz(10.0, l))?;
    let a10 = prob_first_order_window(&lz(10.0, l))?;
    f.require(rel(a10, p10) <= 0.1, format!("k=10: rel={:.3}", rel(a10, p10)));
    let p100 = prob_numeric(&lz(100.0, l))?;
    let a100 = prob_first_order_window(&lz(100.0, l))?;
    f.note(format!("k=100 (outside validity): rel={:.3}", rel(a100, p100)));
    Ok(f)
}

fn regions() -> Check {
    let mut f = Findings::default();
    let l = 1e-3;
    for k in [30.0, 100.0, 300.0, 1000.0] {
        let p = lz(k, l);
        let r = rel(prob_numeric(&p)?, p_closed(ClosedForm::Adiabatic, &p));
        f.require(r <= 0.05, format!("k={k} vs p_ad: {r:.3}"));
    }
    for k in [0.05, 0.1, 0.2] {
        let p = lz(k, l);
        let r = rel(prob_numeric(&p)?, p_closed(ClosedForm::NonAdiabatic, &p));
        f.require(r <= 0.05, format!("k={k} vs p_non_ad: {r:.3}"));
    }
    let p = lz(1.0, l);
    let d = (prob_numeric(&p)? - p_closed(ClosedForm::Combined, &p)).abs();
    f.require(d <= 0.01, format!("k=1 vs sum: {d:.1e}"));
    Ok(f)
}

fn spectrum() -> Check {
    let mut f = Findings::default();
    let zs = [-20.0, -3.0, -0.5, 0.0, 0.5, 3.0, 20.0];
    let mut chi1: f64 = 0.0;
    for (k, l) in [(1.0, 0.0), (4.0, 1e-3), (100.0, 1e-3), (25.0, 5e-2)] {
        for z in zs {
            chi1 = chi1.max(spectrum_numeric(k, l, z)?.eigenvalues[0].norm());
        }
    }
    f.require(chi1 <= 1e-12, format!("max |chi1|={chi1:.1e}"));
    let mut chi2: f64 = 0.0;
    for z in zs {
        let n = spectrum_numeric(100.0, 1e-3, z)?.eigenvalues[1];
        chi2 = chi2.max((n - spectrum_perturbative(100.0, 1e-3, z).eigenvalues[1]).norm());
    }
    f.require(chi2 <= 1e-6, format!("max |chi2 num-pert|={chi2:.1e}"));
    for k in [4.0, 25.0] {
        let m = adiabatic_metrics(k, 1e-3);
        let ratio = m.l[1][2] / m.r[1][2];
        let target = 1.0 / (4.0 * 2f64.sqrt() * k);
        f.require(rel(ratio, target) <= 0.05, format!("k={k}: l23/r23 rel={:.1e}", rel(ratio, target)));
    }
    for l in [1e-3, 5e-2] {
        let target = -4.0 * PI * l * 100.0;
        let r = rel(chi2_integral_check(100.0, l)?, target);
        f.require(r <= l * l, format!("l={l}: exponent rel={r:.1e}"));
    }
    Ok(f)
}

fn ising_config(lambda: &str, kappa: &str, n_spins: usize, threads: usize) -> Result<RunConfig, crate::error::CliError> {
    let map = [
        ("kappa", kappa.to_string()),
        ("lambda", lambda.to_string()),
        ("n-spins", n_spins.to_string()),
        ("window", "-200,200".to_string()),
        ("rtol", "1e-9".to_string()),
        ("atol", "1e-10".to_string()),
        ("threads", threads.to_string()),
        ("seed", "42".to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    RunConfig::from_map(Command::IsingDefect, &map, false)
}

fn defect_reproduction() -> Check {
    let mut f = Findings::default();
    for l in [1e-3, 5e-3] {
        let t = commands::ising_defect(&ising_config(&l.to_string(), "log:1:100:20", 100, 0)?)?;
        let (k, num) = (t.column("kappa").unwrap(), t.column("n_numeric").unwrap());
        let (inf, n1, n2) = (t.column("n_inf_order").unwrap(), t.column("n_1st").unwrap(), t.column("n_2nd").unwrap());
        let worst = (0..k.len()).filter(|&i| k[i] >= 5.0).map(|i| rel(inf[i], num[i])).fold(0.0, f64::max);
        f.require(worst <= 0.05, format!("l={l}: max rel(inf_order) for k>=5 = {worst:.3}"));
        let ko = kappa_opt_first(l)?;
        let near: Vec<usize> = (0..k.len()).filter(|&i| k[i] >= ko / 2.0 && k[i] <= 2.0 * ko).collect();
        let dev = |n: &[f64]| near.iter().map(|&i| (n[i] - num[i]).abs()).fold(0.0, f64::max);
        let (d1, d2) = (dev(&n1), dev(&n2));
        f.require(!near.is_empty() && d2 < d1, format!("l={l}: max dev 2nd={d2:.2e} < 1st={d1:.2e} ({} pts)", near.len()));
    }
    Ok(f)
}

fn dominance() -> Check {
    let mut f = Findings::default();
    for k in [3.0, 5.0, 10.0] {
        let d = dominance_terms(k)?;
        let ratio = d.b1 / d.b2.abs().max(d.b3.abs());
        f.require(ratio >= 10.0, format!("k={k}: b1/max|b2,b3|={ratio:.1}"));
    }
    for (c, target) in [(0.01, 0.53), (0.001, 0.84)] {
        // Root of c·Z(κ) = e^{−2πκ}, bracketed by scanning.
        let g = |k: f64| -> antikz_core::Result<f64> { Ok((c * dominance_terms(k)?.z).ln() + 2.0 * PI * k) };
        let (mut lo, mut hi) = (0.2, 2.0);
        let (glo, ghi) = (g(lo)?, g(hi)?);
        if glo.signum() == ghi.signum() {
            f.require(false, format!("c={c}: no crossing in [{lo}, {hi}]"));
            continue;
        }
        for _ in 0..14 {
            let mid = 0.5 * (lo + hi);
            if g(mid)?.signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = 0.5 * (lo + hi);
        f.require((k - target).abs() <= 0.05, format!("crossover at l*sqrt(k)={c}: k={k:.3}"));
    }
    Ok(f)
}

fn weak_noise_integrals() -> Check {
    let mut f = Findings::default();
    let (l, k) = (1e-3, 10.0);
    let q = quad_adaptive(|s: f64| 1.0 / (1.0 + s * s), Domain::UpperTail { a: 0.0, tail_coeff: 1.0, tail_exp: -2.0 }, 1e-13)?;
    let d = (4.0 * l * k * q.value - 2.0 * PI * l * k).abs();
    f.require(d <= 1e-10, format!("|4lk int - 2pi lk|={d:.1e}"));
    let mut worst: f64 = 0.0;
    let mut ordered = true;
    for j in 0..=20 {
        let x = 0.5 * j as f64;
        let e100 = e_kappa(100.0, x)?.norm();
        worst = worst.max(e100);
        if x > 0.0 && e100 >= e_kappa(10.0, x)?.norm() {
            ordered = false;
        }
    }
    f.require(worst <= 0.05, format!("max |E_100|={worst:.3}"));
    f.require(ordered, "|E_100| < |E_10| on x in (0,10]".to_string());
    Ok(f)
}

fn optimizer() -> Check {
    let mut f = Findings::default();
    let (k1, k5) = (kappa_opt_first(1e-3)?, kappa_opt_first(5e-3)?);
    f.require((k1 - 9.25).abs() <= 0.01, format!("k_opt(1e-3)={k1:.4}"));
    f.require((k5 - 3.16).abs() <= 0.01, format!("k_opt(5e-3)={k5:.4}"));
    let (z1, x1) = deviation_metrics(1e-3);
    let (z5, x5) = deviation_metrics(5e-3);
    f.require((z1 - 0.0609).abs() <= 0.001 && (x1 - 0.0152).abs() <= 0.0005, format!("zeta,xi(1e-3)={z1:.4},{x1:.4}"));
    f.require((z5 - 0.104).abs() <= 0.002 && (x5 - 0.0260).abs() <= 0.0005, format!("zeta,xi(5e-3)={z5:.4},{x5:.4}"));
    let p = IsingParams::new(1.0, 0.0);
    let v = |l: f64| v_opt_numeric(l, Objective::InfOrder, &p).map(|r| r.v_opt_over_j2);
    let slope = (v(3e-3)? / v(3e-4)?).ln() / 10f64.ln();
    f.require((slope - 2.0 / 3.0).abs() <= 0.02, format!("all-orders log-log slope on [3e-4,3e-3]={slope:.4}"));
    Ok(f)
}

fn chain_factorization() -> Check {
    let mut f = Findings::default();
    for l in [0.0, 1e-2] {
        let p = IsingParams::new(1.0, l).with_spins(4).with_window(-100.0, 100.0).with_shift(true).with_tolerances(1e-10, 1e-12);
        let chain = full_chain_oracle(&p)?.defect_density;
        let modes = defect_density(&p, DefectMethod::NumericSum)?.defect_density;
        f.require((chain - modes).abs() <= 1e-6, format!("l={l}: |chain-modes|={:.1e}", (chain - modes).abs()));
    }
    Ok(f)
}

fn strong_noise() -> Check {
    let mut f = Findings::default();
    let p = lz(1e4, 1e-3);
    let (ky, comb) = (p_closed(ClosedForm::Kayanuma, &p), p_closed(ClosedForm::Combined, &p));
    f.require((ky - 0.5).abs() <= 1e-3 && (comb - 0.5).abs() <= 1e-3, format!("k=1e4: kayanuma={ky:.6}, combined={comb:.6}"));
    let l = 5e-3;
    for k in [50.0, 100.0] {
        let p = IsingParams::new(k, l).with_tolerances(1e-9, 1e-10);
        let n = defect_density(&p, DefectMethod::NumericSum)?.defect_density;
        let dr = (n - defect_closed(DefectClosed::Reciprocal, k, l)?).abs();
        let dk = (n - defect_closed(DefectClosed::Kayanuma, k, l)?).abs();
        f.require(dr < dk, format!("k={k}: |n-n_rec|={dr:.2e} < |n-n_kay|={dk:.2e}"));
    }
    Ok(f)
}

fn determinism() -> Check {
    let mut f = Findings::default();
    let run = |threads| -> Result<String, crate::error::CliError> {
        Ok(commands::ising_defect(&ising_config("1e-3,5e-3", "1,3,10", 20, threads)?)?.to_csv())
    };
    let (a, b) = (run(1)?, run(8)?);
    f.require(a == b, format!("{} bytes, identical={}", a.len(), a == b));
    Ok(f)
}

/// Runs the suite, printing one line per criterion as it completes.
pub fn run_all(fast: bool) -> Vec<Outcome> {
    criteria()
        .iter()
        .filter(|c| !fast || c.fast)
        .map(|c| {
            let o = c.run();
            println!("{}", o.line());
            o
        })
        .collect()
}
