//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p rqc-core --test acceptance`. The Monte Carlo
//! criteria take several minutes in total.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use rqc::freeprob::{free_cumulants_to_moments, mp_entropy_k, mp_entropy_k_quadrature, mp_integrate, mp_moment, moments_to_free_cumulants};
use rqc::moments::{
    bi_channel_conjugate_moment, general_input_moment, rank_one_output_moment, vertical_cancellation_sum, wishart_moment,
    TraceFunctional,
};
use rqc::montecarlo::{
    estimate, estimate_with, sample_ginibre, sample_rng, sample_spectra, sample_spectrum, McModel, SpectralSample,
    Statistic,
};
use rqc::numeric::{extrapolate_to_zero, fit_slope};
use rqc::predictions::{bell_eigenvalues, entropy_asymptotic, page_mean_entropy_f64, EntropyModel};
use rqc::scalar::ratio_to_f64;
use rqc::symgroup::{
    catalan, enumerate_geodesics, gamma, is_vertical, NonCrossingPartition, Permutation, SymmetricGroup,
};
use rqc::weingarten::{convolution_identity_residual, wg_cycle_closed_form, wg_value};
use rqc::Rational;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Conjugate bi-channel spectra at `n = k = 50`, shared by the two-scale and
/// entropy criteria.
fn conjugate_n50() -> &'static [SpectralSample] {
    static SAMPLES: OnceLock<Vec<SpectralSample>> = OnceLock::new();
    SAMPLES.get_or_init(|| sample_spectra(McModel::BiConjugate, 50, 50, 50, 7001).expect("sampling"))
}

fn weingarten_inverse() -> Outcome {
    let mut checked = 0;
    for p in 1..=5 {
        for n in [p as u64, 7, 13] {
            for s in SymmetricGroup::new(p) {
                let r = convolution_identity_residual(n, &s).map_err(|e| e.to_string())?;
                if !r.is_zero() {
                    return Err(format!("p={p} n={n} σ={s}: residual {r}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (σ, n) pairs, all residuals exactly 0"))
}

fn cycle_closed_form() -> Outcome {
    for d in 1..=6 {
        for n in (d as u64..d as u64 + 6).chain([20, 101]) {
            let closed = wg_cycle_closed_form(n, d).map_err(|e| e.to_string())?;
            let inverted = wg_value(n, &gamma(d)).map_err(|e| e.to_string())?;
            if closed != inverted {
                return Err(format!("d={d} n={n}: {closed} vs {inverted}"));
            }
        }
    }
    for n in 2..30i64 {
        let one = wg_cycle_closed_form(n as u64, 1).map_err(|e| e.to_string())?;
        let two = wg_cycle_closed_form(n as u64, 2).map_err(|e| e.to_string())?;
        if one != rat(1, n) || two != rat(-1, (n - 1) * n * (n + 1)) {
            return Err(format!("n={n}: Wg(1)={one}, Wg(2)={two}"));
        }
    }
    Ok("d ≤ 6 agree exactly; Wg = 1/n and -1/((n-1)n(n+1)) for d = 1, 2".into())
}

fn gaussianization() -> Outcome {
    let mut checked = 0;
    for p in 1..=4 {
        let tf = TraceFunctional::rank_one(p).map_err(|e| e.to_string())?;
        for n in 1..=12u64 {
            for k in 1..=12 / n {
                if ((n * k) as usize) < p {
                    continue;
                }
                let general = general_input_moment(p, n, k, &tf).map_err(|e| e.to_string())?;
                let direct = rank_one_output_moment(p, n, k).map_err(|e| e.to_string())?;
                if general != direct {
                    return Err(format!("p={p} n={n} k={k}: {general} vs {direct}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (p, n, k) triples equal exactly"))
}

fn wishart_oracle() -> Outcome {
    let (n, k) = (8usize, 8usize);
    let first = wishart_moment(&Permutation::identity(1), &[0], n as u64, &[k as u64]).map_err(|e| e.to_string())?;
    let second = wishart_moment(&gamma(2), &[0, 0], n as u64, &[k as u64]).map_err(|e| e.to_string())?;
    let targets = [first.to_string().parse::<f64>().unwrap(), second.to_string().parse::<f64>().unwrap()];
    if targets != [64.0, 1024.0] {
        return Err(format!("exact values {targets:?}"));
    }
    let names = ["tr W".to_string(), "tr W^2".to_string()];
    let reports = estimate_with(&names, 10_000, 4004, |seed, index| {
        let g = sample_ginibre(n, k, &mut sample_rng(seed, index));
        let w = &g * g.adjoint();
        let tr: f64 = (0..n).map(|i| w[(i, i)].re).sum();
        let tr2: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| w[(i, j)].norm_sqr()).sum();
        Ok(vec![tr, tr2])
    })
    .map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    let mut ok = true;
    for (r, t) in reports.iter().zip(targets) {
        let z = (r.mean - t).abs() / r.std_error;
        ok &= z <= 3.0;
        detail.push(format!("{} = {:.3} ± {:.3} vs {t} (z={z:.2})", r.statistic, r.mean, r.std_error));
    }
    check(ok, detail.join("; "))
}

fn vertical_cancellation() -> Outcome {
    let mut checked = 0;
    for p in [2usize, 3] {
        let vertical: Vec<Permutation> =
            SymmetricGroup::new(2 * p).filter(|a| is_vertical(a, p).unwrap()).collect();
        for n in [3u64, 7] {
            for a in &vertical {
                let s = vertical_cancellation_sum(p, n, a).map_err(|e| e.to_string())?;
                if !s.is_zero() {
                    return Err(format!("p={p} n={n} α={a}: sum {s}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (α, n) pairs, all sums exactly 0"))
}

fn conjugate_scaling() -> Outcome {
    let ns = [6u64, 8, 12, 16];
    let h: Vec<Rational> = ns.iter().map(|&n| rat(1, n as i64)).collect();
    let mut detail = Vec::new();
    let mut ok = true;
    for (p, target) in [(2usize, 3.0), (3, 1.0)] {
        let y: Vec<Rational> = ns
            .iter()
            .map(|&n| {
                let m = bi_channel_conjugate_moment(p, n, n)?;
                Ok(m * Rational::from_integer(num_bigint::BigInt::from(n).pow(p as u32)))
            })
            .collect::<rqc::Result<_>>()
            .map_err(|e| e.to_string())?;
        let limit = ratio_to_f64(&extrapolate_to_zero(&h, &y).map_err(|e| e.to_string())?);
        ok &= (limit - target).abs() < 0.1;
        detail.push(format!("n^{p} m_{p} → {limit:.4} (target {target})"));
    }
    check(ok, detail.join("; "))
}

fn two_scale() -> Outcome {
    let samples = conjugate_n50();
    let n = 50.0f64;
    let outliers: Vec<f64> = samples.iter().map(|s| n * s.eigenvalues[0]).collect();
    let inside = outliers.iter().filter(|&&x| (0.8..=1.2).contains(&x)).count();
    let frac = inside as f64 / samples.len() as f64;
    let mut ok = samples.len() >= 50 && frac >= 0.9;
    let mut detail = vec![format!("cnλ₁ in [0.8, 1.2] for {inside}/{} runs", samples.len())];
    for p in [1usize, 2] {
        let per_sample: Vec<f64> = samples
            .iter()
            .map(|s| {
                let bulk = &s.eigenvalues[1..];
                bulk.iter().map(|x| (n * n * x).powi(p as i32)).sum::<f64>() / bulk.len() as f64
            })
            .collect();
        let m = mean(&per_sample);
        let target: f64 = mp_moment(p, &1.0).map_err(|e| e.to_string())?;
        let rel = (m - target).abs() / target;
        ok &= rel < 0.1;
        detail.push(format!("bulk moment {p} = {m:.4} vs {target} ({:.1}%)", 100.0 * rel));
    }
    check(ok, detail.join("; "))
}

fn bell_phenomenon() -> Outcome {
    let (n, k) = (60usize, 2usize);
    let limit = bell_eigenvalues(k as u64, n as u64).map_err(|e| e.to_string())?;
    let top = ratio_to_f64(&limit[0].0);
    let next = ratio_to_f64(&limit[1].0);
    if limit[0].0 != rat(5, 8) || limit[1] != (rat(1, 8), 3) {
        return Err(format!("limit spectrum {limit:?}"));
    }
    let samples = sample_spectra(McModel::BiConjugate, n, k, 20, 8008).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for s in &samples {
        worst = worst.max((s.eigenvalues[0] - top).abs());
        for x in &s.eigenvalues[1..4] {
            worst = worst.max((x - next).abs());
        }
    }
    let mean_top = mean(&samples.iter().map(|s| s.eigenvalues[0]).collect::<Vec<_>>());
    let mean_next = mean(&samples.iter().flat_map(|s| s.eigenvalues[1..4].to_vec()).collect::<Vec<_>>());
    let ok = (mean_top - top).abs() < 0.02 && (mean_next - next).abs() < 0.02;
    check(
        ok,
        format!("mean λ₁ = {mean_top:.4} (5/8), mean λ₂..₄ = {mean_next:.4} (1/8), worst single deviation {worst:.4}"),
    )
}

fn entropy() -> Outcome {
    let mut detail = Vec::new();
    let mut deviations = Vec::new();
    for n in [20usize, 30, 40, 50] {
        let entropies: Vec<f64> = if n == 50 {
            conjugate_n50().iter().map(|s| Statistic::Entropy.eval(&s.eigenvalues)).collect::<rqc::Result<_>>()
        } else {
            (0..20u64)
                .into_par_iter()
                .map(|i| Statistic::Entropy.eval(&sample_spectrum(McModel::BiConjugate, n, n, 9009, i)?.eigenvalues))
                .collect::<rqc::Result<_>>()
        }
        .map_err(|e| e.to_string())?;
        let target = entropy_asymptotic(EntropyModel::Bi, 1.0, n as u64).map_err(|e| e.to_string())?;
        deviations.push((mean(&entropies) - target).abs());
    }
    let monotone = deviations.windows(2).all(|w| w[1] < w[0]);
    let mut ok = monotone && deviations[3] < 0.1;
    detail.push(format!("bi |ΔH| at n=20,30,40,50: {deviations:.4?}"));

    let single = estimate(McModel::SingleRankOne, 100, 100, &[Statistic::Entropy], 200, 9010).map_err(|e| e.to_string())?;
    let target = entropy_asymptotic(EntropyModel::Single, 1.0, 100).map_err(|e| e.to_string())?;
    let dev = (single[0].mean - target).abs();
    ok &= dev < 0.05;
    detail.push(format!("single |ΔH| at n=k=100: {dev:.4}"));

    let page = page_mean_entropy_f64(4, 8).map_err(|e| e.to_string())?;
    let r = estimate(McModel::SingleRankOne, 4, 8, &[Statistic::Entropy], 10_000, 9011).map_err(|e| e.to_string())?;
    let z = (r[0].mean - page).abs() / r[0].std_error;
    ok &= z <= 3.0;
    detail.push(format!("Page (4,8): {:.5} ± {:.5} vs {page:.5} (z={z:.2})", r[0].mean, r[0].std_error));
    check(ok, detail.join("; "))
}

fn mp_limit() -> Outcome {
    let ns = [8u64, 16, 32];
    let h: Vec<Rational> = ns.iter().map(|&n| rat(1, n as i64)).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for p in 1..=4usize {
        // Normalized trace of (nZ)^p with c = 1: n^{p-1} E tr Z^p.
        let y: Vec<Rational> = ns
            .iter()
            .map(|&n| {
                let m = rank_one_output_moment(p, n, n)?;
                Ok(m * Rational::from_integer(num_bigint::BigInt::from(n).pow(p as u32 - 1)))
            })
            .collect::<rqc::Result<_>>()
            .map_err(|e| e.to_string())?;
        let limit = ratio_to_f64(&extrapolate_to_zero(&h, &y).map_err(|e| e.to_string())?);
        let target: f64 = mp_moment(p, &1.0).map_err(|e| e.to_string())?;
        let rel = (limit - target).abs() / target;
        ok &= rel < 0.02;
        detail.push(format!("p={p}: {limit:.4} vs {target}"));
    }

    let sizes = [10usize, 20, 40];
    let mut log_n = Vec::new();
    let mut log_var = Vec::new();
    for &n in &sizes {
        let samples = sample_spectra(McModel::SingleRankOne, n, n, 2000, 1010 + n as u64).map_err(|e| e.to_string())?;
        let stat = Statistic::ScaledMoment { p: 2, scale: n as f64 };
        let values: Vec<f64> =
            samples.iter().map(|s| stat.eval(&s.eigenvalues)).collect::<rqc::Result<_>>().map_err(|e| e.to_string())?;
        log_n.push((n as f64).ln());
        log_var.push(variance(&values).ln());
    }
    let slope = fit_slope(&log_n, &log_var);
    ok &= (slope + 2.0).abs() <= 0.5;
    detail.push(format!("variance slope {slope:.3}"));
    check(ok, detail.join("; "))
}

fn transforms() -> Outcome {
    let order = 10;
    let kappa: Vec<Rational> = (1..=order as i64).map(|j| rat(j * j - 3 * j + 1, j + 1)).collect();
    let moments = free_cumulants_to_moments(&kappa).map_err(|e| e.to_string())?;
    let back = moments_to_free_cumulants(&moments).map_err(|e| e.to_string())?;
    let again = free_cumulants_to_moments(&back).map_err(|e| e.to_string())?;
    if back != kappa || again != moments {
        return Err("moment/cumulant round trip is not exact".into());
    }
    let c_half = rat(1, 2);
    let mp: Vec<Rational> = (1..=order).map(|p| mp_moment(p, &c_half)).collect::<rqc::Result<_>>().map_err(|e| e.to_string())?;
    let mp_kappa = moments_to_free_cumulants(&mp).map_err(|e| e.to_string())?;
    if mp_kappa.iter().any(|x| *x != c_half) {
        return Err("free Poisson cumulants are not all c".into());
    }

    let mut worst_moment = 0.0f64;
    for c in [0.25, 0.5, 1.0, 2.0, 3.7] {
        for p in 1..=6usize {
            let quad = mp_integrate(|x| x.powi(p as i32), c, 1e-12);
            let exact: f64 = mp_moment(p, &c).map_err(|e| e.to_string())?;
            worst_moment = worst_moment.max((quad - exact).abs() / exact.max(1.0));
        }
    }
    let mut worst_k = 0.0f64;
    for c in [0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 10.0] {
        worst_k = worst_k.max((mp_entropy_k(c) - mp_entropy_k_quadrature(c)).abs());
    }
    check(
        worst_moment < 1e-6 && worst_k < 1e-6,
        format!("round trips exact to order {order}; moment quadrature error {worst_moment:.1e}; K_c error {worst_k:.1e}"),
    )
}

fn combinatorics() -> Outcome {
    for p in 1..=7 {
        let target = gamma(p);
        let count = enumerate_geodesics(&target).count() as u64;
        if count != catalan(p) {
            return Err(format!("p={p}: {count} geodesics vs Catalan {}", catalan(p)));
        }
    }
    for p in 1..=6 {
        for pi in NonCrossingPartition::enumerate(p) {
            if pi.block_count() + pi.kreweras().block_count() != p + 1 {
                return Err(format!("p={p}: Kreweras rank fails for {pi:?}"));
            }
        }
    }
    let mut triples = 0u64;
    for p in 1..=5 {
        let all: Vec<Permutation> = SymmetricGroup::new(p).collect();
        let table: Vec<Vec<usize>> =
            all.iter().map(|a| all.iter().map(|b| a.distance(b).unwrap()).collect()).collect();
        for t in 0..all.len() {
            for a in 0..all.len() {
                for b in 0..all.len() {
                    if (table[t][a] + table[t][b]) % 2 != table[a][b] % 2 {
                        return Err(format!("parity fails at {} {} {}", all[t], all[a], all[b]));
                    }
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("Catalan counts p ≤ 7, Kreweras p ≤ 6, parity on {triples} triples"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Weingarten inverse identity", weingarten_inverse),
        ("closed-form cycle Weingarten", cycle_closed_form),
        ("Gaussianization equivalence", gaussianization),
        ("Wishart moment oracle", wishart_oracle),
        ("vertical cancellation", vertical_cancellation),
        ("conjugate bi-channel scaling", conjugate_scaling),
        ("two-scale spectrum", two_scale),
        ("Bell phenomenon", bell_phenomenon),
        ("entropy expansions", entropy),
        ("MP limit of single channel", mp_limit),
        ("free-probability transforms", transforms),
        ("combinatorial core", combinatorics),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:2} PASS  {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} FAIL  {name} ({secs:.1} s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
