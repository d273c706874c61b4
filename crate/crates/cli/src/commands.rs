use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use rqc::freeprob::{free_cumulants_to_moments, mp_moment, moments_to_free_cumulants};
use rqc::moments::{
    bi_channel_conjugate_moment, bi_channel_independent_moment, general_input_moment, qzq_moment,
    rank_one_output_moment, rank_r_moment, wishart_moment, MomentEngine, TraceFunctional,
};
use rqc::montecarlo::{estimate, sample_spectra, EstimatorReport, McModel, SpectralSample, Statistic};
use rqc::predictions::{
    entropy_asymptotic, page_mean_entropy_f64, predict, EntropyModel, PredictionModel, PredictionParams, Regime,
};
use rqc::scalar::ratio_to_f64;
use rqc::symgroup::gamma;
use rqc::weingarten::wg_exact;
use rqc::Rational;

use crate::output::{emit_json, emit_table, write_csv_file, Table};
use crate::*;

/// Runs the selected command; `Ok(false)` means a comparison failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let name = cli.command.name();
    match &cli.command {
        Command::Wg(a) => emit_table(cli, name, &wg(a)?)?,
        Command::Moments(a) => emit_table(cli, name, &moments(a)?)?,
        Command::Freeprob(FreeprobCommand::Mp(a)) => emit_table(cli, name, &freeprob_mp(a)?)?,
        Command::Freeprob(FreeprobCommand::Transform(a)) => emit_table(cli, name, &freeprob_transform(a)?)?,
        Command::Predict(a) => emit_json(cli, name, &prediction(a)?)?,
        Command::Mc(a) => emit_table(cli, name, &mc(a)?)?,
        Command::Compare(a) => {
            let (table, passed) = compare(a)?;
            emit_table(cli, name, &table)?;
            return Ok(passed);
        }
        Command::EntropySweep(a) => emit_table(cli, name, &entropy_sweep(a)?)?,
    }
    Ok(true)
}

fn exact(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn float(x: f64) -> Value {
    json!(x)
}

/// A number sequence read from JSON; exact unless some entry is a decimal.
enum Sequence {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

fn read_sequence(path: &Path) -> Result<Sequence> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let items: Vec<Value> = serde_json::from_str(&text).with_context(|| format!("{} is not a JSON array", path.display()))?;
    let mut exact = Vec::new();
    let mut floats = Vec::new();
    let mut all_exact = true;
    for item in &items {
        let (q, f) = match item {
            Value::Number(n) if n.is_i64() => {
                let v = n.as_i64().unwrap();
                (Some(Rational::from_integer(v.into())), v as f64)
            }
            Value::Number(n) => (None, n.as_f64().unwrap()),
            Value::String(s) => match s.trim().parse::<Rational>() {
                Ok(q) => {
                    let f = ratio_to_f64(&q);
                    (Some(q), f)
                }
                Err(_) => (None, s.trim().parse::<f64>().map_err(|_| anyhow!("cannot read {s:?} as a number"))?),
            },
            other => bail!("expected a number, got {other}"),
        };
        match q {
            Some(q) => exact.push(q),
            None => all_exact = false,
        }
        floats.push(f);
    }
    Ok(if all_exact { Sequence::Exact(exact) } else { Sequence::Float(floats) })
}

fn wg(a: &WgArgs) -> Result<Table> {
    let table_wg = wg_exact(a.n, a.p)?;
    let mut t = Table::new(&["partition", "class_size", "wg", "wg_float"]);
    for (part, value) in table_wg.iter() {
        t.push(vec![json!(part.to_string()), json!(part.class_size()), exact(value), float(ratio_to_f64(value))]);
    }
    Ok(t)
}

fn moments(a: &MomentsArgs) -> Result<Table> {
    let mut t = Table::new(&["p", "exact", "value"]);
    let input = match (a.model, &a.input_moments) {
        (MomentModel::Macroscopic, Some(path)) => Some(read_sequence(path)?),
        (MomentModel::Macroscopic, None) => bail!("--model macroscopic needs --input-moments"),
        _ => None,
    };
    for p in 1..=a.p {
        let value: Option<Rational> = match a.model {
            MomentModel::Wishart => {
                let w = wishart_moment(&gamma(p), &vec![0; p], a.n, &[a.k])?;
                Some(Rational::from_integer(w))
            }
            MomentModel::Single => Some(rank_one_output_moment(p, a.n, a.k)?),
            MomentModel::RankR => {
                let r = a.r.ok_or_else(|| anyhow!("--model rank-r needs --r"))?;
                Some(rank_r_moment(p, a.n, a.k, r)?)
            }
            MomentModel::Macroscopic => match input.as_ref().unwrap() {
                Sequence::Exact(m) => Some(general_input_moment(p, a.n, a.k, &TraceFunctional::macroscopic(p, a.n, m)?)?),
                Sequence::Float(m) => {
                    let tf = TraceFunctional::<f64>::macroscopic(p, a.n, m)?;
                    let v: f64 = MomentEngine::default().general_input_moment(p, a.n, a.k, &tf)?;
                    t.push(vec![json!(p), Value::Null, float(v)]);
                    None
                }
            },
            MomentModel::BiIndep => Some(bi_channel_independent_moment(p, a.n, a.k)?),
            MomentModel::BiConj => Some(bi_channel_conjugate_moment(p, a.n, a.k)?),
            MomentModel::Qzq => Some(qzq_moment(p, a.n, a.k)?),
        };
        if let Some(v) = value {
            t.push(vec![json!(p), exact(&v), float(ratio_to_f64(&v))]);
        }
    }
    Ok(t)
}

fn freeprob_mp(a: &MpArgs) -> Result<Table> {
    let mut t = Table::new(&["p", "exact", "value"]);
    match a.c.trim().parse::<Rational>() {
        Ok(c) => {
            for p in 1..=a.p {
                let m = mp_moment(p, &c)?;
                t.push(vec![json!(p), exact(&m), float(ratio_to_f64(&m))]);
            }
        }
        Err(_) => {
            let c: f64 = a.c.trim().parse().map_err(|_| anyhow!("cannot read --c {:?} as a number", a.c))?;
            for p in 1..=a.p {
                t.push(vec![json!(p), Value::Null, float(mp_moment(p, &c)?)]);
            }
        }
    }
    Ok(t)
}

fn freeprob_transform(a: &TransformArgs) -> Result<Table> {
    let mut t = Table::new(&["order", "exact", "value"]);
    match read_sequence(&a.input)? {
        Sequence::Exact(xs) => {
            let out = match a.direction {
                Direction::ToCumulants => moments_to_free_cumulants(&xs)?,
                Direction::ToMoments => free_cumulants_to_moments(&xs)?,
            };
            for (i, v) in out.iter().enumerate() {
                t.push(vec![json!(i + 1), exact(v), float(ratio_to_f64(v))]);
            }
        }
        Sequence::Float(xs) => {
            let out = match a.direction {
                Direction::ToCumulants => moments_to_free_cumulants(&xs)?,
                Direction::ToMoments => free_cumulants_to_moments(&xs)?,
            };
            for (i, v) in out.iter().enumerate() {
                t.push(vec![json!(i + 1), Value::Null, float(*v)]);
            }
        }
    }
    Ok(t)
}

fn prediction(a: &PredictArgs) -> Result<Value> {
    let model = match a.model {
        PredictModel::Single => PredictionModel::SingleRankOne,
        PredictModel::RankR => PredictionModel::SingleRankR,
        PredictModel::Macroscopic => PredictionModel::SingleMacroscopic,
        PredictModel::BiIndep => PredictionModel::BiIndependent,
        PredictModel::BiConj => PredictionModel::BiConjugate,
        PredictModel::Bell => PredictionModel::BellFixedK,
    };
    let regime = match a.regime {
        RegimeArg::I => Regime::I,
        RegimeArg::II => Regime::II,
        RegimeArg::III => Regime::III,
    };
    let input_moments = match &a.input_moments {
        Some(path) => Some(match read_sequence(path)? {
            Sequence::Exact(xs) => xs.iter().map(ratio_to_f64).collect(),
            Sequence::Float(xs) => xs,
        }),
        None => None,
    };
    let params = PredictionParams { n: a.n, k: a.k, c: a.c, r: a.r, input_moments, order: a.order };
    Ok(serde_json::to_value(predict(model, regime, &params)?)?)
}

fn mc_model(m: McModelArg) -> McModel {
    match m {
        McModelArg::Single => McModel::SingleRankOne,
        McModelArg::Wishart => McModel::NormalizedWishart,
        McModelArg::BiIndep => McModel::BiIndependent,
        McModelArg::BiConj => McModel::BiConjugate,
        McModelArg::Qzq => McModel::QzqConjugate,
    }
}

fn parse_stat(s: &str) -> Result<Statistic> {
    let s = s.trim();
    let bad = || anyhow!("unknown statistic {s:?}; use moment:P, scaled:P@S, entropy, eigenvalue:I or spectrum");
    if s == "entropy" {
        return Ok(Statistic::Entropy);
    }
    let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
    Ok(match kind {
        "moment" | "moments" => Statistic::Moment(arg.parse().map_err(|_| bad())?),
        "eigenvalue" => Statistic::Eigenvalue(arg.parse().map_err(|_| bad())?),
        "scaled" => {
            let (p, scale) = arg.split_once('@').ok_or_else(bad)?;
            Statistic::ScaledMoment { p: p.parse().map_err(|_| bad())?, scale: scale.parse().map_err(|_| bad())? }
        }
        _ => return Err(bad()),
    })
}

fn spectrum_table(samples: &[SpectralSample]) -> Table {
    let mut t = Table::new(&["sample", "rank", "eigenvalue"]);
    for s in samples {
        for (i, x) in s.eigenvalues.iter().enumerate() {
            t.push(vec![json!(s.index), json!(i), float(*x)]);
        }
    }
    t
}

fn mc(a: &McArgs) -> Result<Table> {
    let spectrum_only = a.stat.iter().any(|s| s.trim() == "spectrum");
    if spectrum_only && a.stat.len() > 1 {
        bail!("--stat spectrum cannot be combined with other statistics");
    }
    let stats: Vec<Statistic> =
        if spectrum_only { Vec::new() } else { a.stat.iter().map(|s| parse_stat(s)).collect::<Result<_>>()? };
    if stats.is_empty() && !spectrum_only {
        bail!("no statistics requested");
    }
    if a.samples < 2 {
        bail!("need at least 2 samples, got {}", a.samples);
    }
    let samples = sample_spectra(mc_model(a.model), a.n, a.k, a.samples, a.seed)?;
    if let Some(path) = &a.dump_spectrum {
        write_csv_file(path, "mc-spectrum", &spectrum_table(&samples))?;
    }
    if spectrum_only {
        return Ok(spectrum_table(&samples));
    }
    let values: Vec<Vec<f64>> = stats
        .iter()
        .map(|st| samples.iter().map(|s| st.eval(&s.eigenvalues)).collect::<rqc::Result<_>>())
        .collect::<rqc::Result<_>>()?;
    if a.per_sample {
        let mut t = Table::new(&["sample", "statistic", "value"]);
        for (i, s) in samples.iter().enumerate() {
            for (st, column) in stats.iter().zip(&values) {
                t.push(vec![json!(s.index), json!(st.name()), float(column[i])]);
            }
        }
        return Ok(t);
    }
    let mut t = Table::new(&["statistic", "mean", "std_error", "count"]);
    for (st, column) in stats.iter().zip(&values) {
        let r = EstimatorReport::from_values(st.name(), column)?;
        t.push(vec![json!(r.statistic), float(r.mean), float(r.std_error), json!(r.count)]);
    }
    Ok(t)
}

/// Asymptotic `E tr Z^p` from the regime `III` limit: the bulk law scaled
/// back to `Z`, plus the outlier if there is one.
fn predicted_trace(model: PredictionModel, n: usize, k: usize, max_p: usize) -> Result<Vec<f64>> {
    let params = PredictionParams { c: Some(k as f64 / n as f64), order: Some(max_p), ..Default::default() };
    let pred = predict(model, Regime::III, &params)?;
    let dist = pred.distribution.ok_or_else(|| anyhow!("prediction has no limit law"))?;
    let len = if model == PredictionModel::SingleRankOne { n } else { n * n };
    let scale = pred.rescaling.factor(n as u64, k as u64);
    let (bulk_len, outlier) = match pred.outlier {
        Some(o) => (len - 1, Some(o.limit / o.rescaling.factor(n as u64, k as u64))),
        None => (len, None),
    };
    Ok((1..=max_p)
        .map(|p| {
            let bulk = bulk_len as f64 * dist.moments[p - 1] / scale.powi(p as i32);
            bulk + outlier.map_or(0.0, |x| x.powi(p as i32))
        })
        .collect())
}

fn compare(a: &CompareArgs) -> Result<(Table, bool)> {
    let (mc, prediction_model) = match a.model {
        CompareModel::Single => (McModel::SingleRankOne, Some(PredictionModel::SingleRankOne)),
        CompareModel::BiIndep => (McModel::BiIndependent, Some(PredictionModel::BiIndependent)),
        CompareModel::BiConj => (McModel::BiConjugate, Some(PredictionModel::BiConjugate)),
        CompareModel::Qzq => (McModel::QzqConjugate, None),
    };
    let (n, k) = (a.n as u64, a.k as u64);
    let exact_values: Vec<Rational> = (1..=a.p)
        .map(|p| match a.model {
            CompareModel::Single => rank_one_output_moment(p, n, k),
            CompareModel::BiIndep => bi_channel_independent_moment(p, n, k),
            CompareModel::BiConj => bi_channel_conjugate_moment(p, n, k),
            CompareModel::Qzq => qzq_moment(p, n, k),
        })
        .collect::<rqc::Result<_>>()?;
    let predictions = match prediction_model {
        Some(m) => Some(predicted_trace(m, a.n, a.k, a.p)?),
        None => None,
    };
    let stats: Vec<Statistic> = (1..=a.p).map(Statistic::Moment).collect();
    let reports = estimate(mc, a.n, a.k, &stats, a.samples, a.seed)?;

    let mut t = Table::new(&["statistic", "exact", "exact_float", "mc_mean", "mc_std_error", "prediction", "z_score", "pass"]);
    let mut all = true;
    for (i, r) in reports.iter().enumerate() {
        let target = ratio_to_f64(&exact_values[i]);
        let diff = (r.mean - target).abs();
        // Statistics fixed by normalization (tr Z = 1) have zero spread; they
        // only need to agree to rounding.
        let pass = diff <= a.tolerance * r.std_error || diff <= 1e-9 * target.abs().max(1.0);
        all &= pass;
        let z = if r.std_error > 0.0 { float(diff / r.std_error) } else { Value::Null };
        t.push(vec![
            json!(r.statistic),
            exact(&exact_values[i]),
            float(target),
            float(r.mean),
            float(r.std_error),
            predictions.as_ref().map_or(Value::Null, |p| float(p[i])),
            z,
            json!(pass),
        ]);
    }
    Ok((t, all))
}

fn entropy_sweep(a: &SweepArgs) -> Result<Table> {
    let (mc, model) = match a.model {
        SweepModel::Single => (McModel::SingleRankOne, EntropyModel::Single),
        SweepModel::BiIndep => (McModel::BiIndependent, EntropyModel::Bi),
        SweepModel::BiConj => (McModel::BiConjugate, EntropyModel::Bi),
    };
    if a.sizes.is_empty() {
        bail!("--sizes is empty");
    }
    let mut t = Table::new(&["n", "k", "samples", "mean", "std_error", "prediction", "deviation", "page"]);
    for &n in &a.sizes {
        let k = ((a.c * n as f64).round() as usize).max(1);
        let r = &estimate(mc, n, k, &[Statistic::Entropy], a.samples, a.seed)?[0];
        let prediction = entropy_asymptotic(model, k as f64 / n as f64, n as u64)?;
        let page = match a.model {
            SweepModel::Single if n <= k => float(page_mean_entropy_f64(n as u64, k as u64)?),
            _ => Value::Null,
        };
        t.push(vec![
            json!(n),
            json!(k),
            json!(r.count),
            float(r.mean),
            float(r.std_error),
            float(prediction),
            float(r.mean - prediction),
            page,
        ]);
    }
    Ok(t)
}
