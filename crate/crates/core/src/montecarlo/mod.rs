//! Monte Carlo oracle: Haar channels, their outputs and spectra.
//!
//! Gaussian entries follow the unit-covariance convention `E|G_ij|² = 1`,
//! the one under which `E Tr W = nk` for `W = G G*`.
//!
//! Each sample draws from its own generator, [`sample_rng`]`(seed, index)`,
//! and linear algebra inside a sample runs sequentially. Samples are spread
//! over the rayon pool and collected in index order, and reductions use
//! [`pairwise_sum`], so a report depends on the seed only, not on the
//! number of threads.

mod channel;
mod sampling;
mod spectral;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use channel::{
    bi_channel_output, bi_channel_output_capped, bi_channel_spectrum, channel_apply, conjugate_qzq_spectrum,
    normalized_wishart, rank_one_output, BiChannelMode, BI_CHANNEL_MAX_N,
};
pub use sampling::{sample_ginibre, sample_haar_isometry, sample_haar_unitary, sample_rng};
pub use spectral::{qzq_spectrum, spectrum, spectrum_real, vn_entropy, QzqSpectrum, SPECTRAL_TOL};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Random output ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum McModel {
    /// Haar channel on a pure input, `n × n` output.
    SingleRankOne,
    /// `W / Tr W` for an `n × k` Ginibre `G`.
    NormalizedWishart,
    BiIndependent,
    BiConjugate,
    /// Bulk of `QZQ` for the conjugate bi-channel (`n² - 1` values).
    QzqConjugate,
}

impl McModel {
    /// Dimension of the spectrum returned for one sample.
    pub fn spectrum_len(self, n: usize) -> usize {
        match self {
            Self::SingleRankOne | Self::NormalizedWishart => n,
            Self::BiIndependent | Self::BiConjugate => n * n,
            Self::QzqConjugate => n * n - 1,
        }
    }
}

/// One sampled spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub model: McModel,
    pub n: usize,
    pub k: usize,
    /// Master seed; together with `index` it fixes the generator.
    pub seed: u64,
    pub index: u64,
    /// Descending.
    pub eigenvalues: Vec<f64>,
}

/// Draws sample `index` of `model` under master seed `seed`.
pub fn sample_spectrum(model: McModel, n: usize, k: usize, seed: u64, index: u64) -> Result<SpectralSample> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    let rng = &mut sample_rng(seed, index);
    let eigenvalues = match model {
        McModel::SingleRankOne => channel::rank_one_spectrum(n, k, rng)?,
        McModel::NormalizedWishart => channel::wishart_spectrum(n, k, rng)?,
        McModel::BiIndependent => bi_channel_spectrum(BiChannelMode::Independent, n, k, rng)?,
        McModel::BiConjugate => bi_channel_spectrum(BiChannelMode::Conjugate, n, k, rng)?,
        McModel::QzqConjugate => conjugate_qzq_spectrum(n, k, rng)?.1.bulk,
    };
    Ok(SpectralSample { model, n, k, seed, index, eigenvalues })
}

/// Samples `0..count` in parallel, returned in index order.
pub fn sample_spectra(model: McModel, n: usize, k: usize, count: usize, seed: u64) -> Result<Vec<SpectralSample>> {
    (0..count as u64).into_par_iter().map(|i| sample_spectrum(model, n, k, seed, i)).collect()
}

/// A scalar function of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Statistic {
    /// `Σ λ^p = Tr Z^p`.
    Moment(usize),
    /// `Σ (s λ)^p / len`: normalized trace of `(s Z)^p`.
    ScaledMoment { p: usize, scale: f64 },
    Entropy,
    /// The `i`-th largest eigenvalue, 0-based.
    Eigenvalue(usize),
}

impl Statistic {
    pub fn name(&self) -> String {
        match self {
            Self::Moment(p) => format!("moment:{p}"),
            Self::ScaledMoment { p, scale } => format!("scaled_moment:{p}@{scale}"),
            Self::Entropy => "entropy".into(),
            Self::Eigenvalue(i) => format!("eigenvalue:{i}"),
        }
    }

    pub fn eval(&self, eigs: &[f64]) -> Result<f64> {
        match *self {
            Self::Moment(p) => Ok(pairwise_sum(&eigs.iter().map(|x| x.powi(p as i32)).collect::<Vec<_>>())),
            Self::ScaledMoment { p, scale } => {
                let terms: Vec<f64> = eigs.iter().map(|x| (scale * x).powi(p as i32)).collect();
                Ok(pairwise_sum(&terms) / eigs.len() as f64)
            }
            Self::Entropy => vn_entropy(eigs),
            Self::Eigenvalue(i) => eigs
                .get(i)
                .copied()
                .ok_or_else(|| Error::Domain(format!("eigenvalue index {i} out of {}", eigs.len()))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetSource {
    ExactFormula,
    Prediction,
}

/// Sample mean and standard error of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub statistic: String,
    pub mean: f64,
    /// Sample standard deviation over `√count`.
    pub std_error: f64,
    pub count: usize,
    pub target: Option<f64>,
    pub source: Option<TargetSource>,
}

impl EstimatorReport {
    /// Mean and standard error of `values` by pairwise summation.
    pub fn from_values(statistic: impl Into<String>, values: &[f64]) -> Result<Self> {
        let count = values.len();
        if count < 2 {
            return Err(Error::Domain(format!("need at least 2 samples, got {count}")));
        }
        let mean = pairwise_sum(values) / count as f64;
        let dev: Vec<f64> = values.iter().map(|x| (x - mean).powi(2)).collect();
        let var = pairwise_sum(&dev) / (count - 1) as f64;
        Ok(Self {
            statistic: statistic.into(),
            mean,
            std_error: (var / count as f64).sqrt(),
            count,
            target: None,
            source: None,
        })
    }

    pub fn with_target(mut self, target: f64, source: TargetSource) -> Self {
        self.target = Some(target);
        self.source = Some(source);
        self
    }

    /// `|mean - target| / std_error`, if a target is set.
    pub fn z_score(&self) -> Option<f64> {
        self.target.map(|t| (self.mean - t).abs() / self.std_error)
    }

    /// Whether the target lies within `windows` standard errors.
    pub fn within(&self, windows: f64) -> Option<bool> {
        self.target.map(|t| (self.mean - t).abs() <= windows * self.std_error)
    }
}

/// Reports for several statistics of one model, all computed from the same
/// `samples` spectra.
pub fn estimate(
    model: McModel,
    n: usize,
    k: usize,
    statistics: &[Statistic],
    samples: usize,
    seed: u64,
) -> Result<Vec<EstimatorReport>> {
    let names: Vec<String> = statistics.iter().map(Statistic::name).collect();
    estimate_with(&names, samples, seed, |seed, index| {
        let s = sample_spectrum(model, n, k, seed, index)?;
        statistics.iter().map(|st| st.eval(&s.eigenvalues)).collect()
    })
}

/// Generic estimator: `f(seed, index)` returns one value per name.
pub fn estimate_with<F>(names: &[String], samples: usize, seed: u64, f: F) -> Result<Vec<EstimatorReport>>
where
    F: Fn(u64, u64) -> Result<Vec<f64>> + Sync,
{
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let rows: Vec<Vec<f64>> = (0..samples as u64).into_par_iter().map(|i| f(seed, i)).collect::<Result<_>>()?;
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            EstimatorReport::from_values(name.clone(), &column)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{bi_channel_conjugate_moment, rank_one_output_moment};
    use crate::scalar::ratio_to_f64;

    #[test]
    fn outputs_are_states() {
        for (i, model) in
            [McModel::SingleRankOne, McModel::NormalizedWishart, McModel::BiIndependent, McModel::BiConjugate]
                .into_iter()
                .enumerate()
        {
            for (n, k) in [(1, 3), (2, 2), (3, 5), (5, 3)] {
                let s = sample_spectrum(model, n, k, 100, i as u64).unwrap();
                assert_eq!(s.eigenvalues.len(), model.spectrum_len(n));
                assert!(s.eigenvalues.iter().all(|&x| x >= 0.0));
                assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
                assert!((s.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_channel_purity_matches_exact_moment() {
        let reports = estimate(McModel::SingleRankOne, 8, 8, &[Statistic::Moment(2)], 10_000, 17).unwrap();
        let exact = ratio_to_f64(&rank_one_output_moment(2, 8, 8).unwrap());
        assert!((exact - 16.0 / 65.0).abs() < 1e-15);
        let r = reports[0].clone().with_target(exact, TargetSource::ExactFormula);
        assert_eq!(r.within(3.0), Some(true), "{r:?}");
    }

    #[test]
    fn conjugate_purity_matches_exact_moment() {
        let reports = estimate(McModel::BiConjugate, 6, 6, &[Statistic::Moment(2)], 1000, 23).unwrap();
        let exact = ratio_to_f64(&bi_channel_conjugate_moment(2, 6, 6).unwrap());
        let r = reports[0].clone().with_target(exact, TargetSource::ExactFormula);
        assert_eq!(r.within(3.0), Some(true), "{r:?}");
    }

    #[test]
    fn gaussianization_two_sample() {
        // Haar channel on a pure state versus normalized Wishart, p ≤ 3.
        let stats = [Statistic::Moment(2), Statistic::Moment(3)];
        let a = estimate(McModel::SingleRankOne, 4, 5, &stats, 5000, 1).unwrap();
        let b = estimate(McModel::NormalizedWishart, 4, 5, &stats, 5000, 2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let se = (x.std_error.powi(2) + y.std_error.powi(2)).sqrt();
            assert!((x.mean - y.mean).abs() < 3.0 * se, "{x:?} vs {y:?}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let run = || estimate(McModel::BiIndependent, 3, 4, &[Statistic::Moment(2), Statistic::Entropy], 20, 5).unwrap();
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
    }

    #[test]
    fn estimator_needs_two_samples() {
        assert!(estimate(McModel::SingleRankOne, 2, 2, &[Statistic::Entropy], 1, 0).is_err());
        let r = EstimatorReport::from_values("x", &[1.0, 3.0]).unwrap();
        assert_eq!(r.mean, 2.0);
        assert!((r.std_error - 1.0).abs() < 1e-15);
    }
}
