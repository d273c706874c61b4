//! Closed-form large-dimension limits.
//!
//! Regimes: `I` keeps `n` fixed with `k → ∞`, `II` keeps `k` fixed with
//! `n → ∞`, and `III` sends both to infinity with `k/n → c`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freeprob::{boxplus_power, dilate_mu_k, mp_entropy_k, LimitingDistribution};
use crate::scalar::ratio_to_f64;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PredictionModel {
    SingleRankOne,
    SingleRankR,
    SingleMacroscopic,
    BiIndependent,
    BiConjugate,
    BellFixedK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
}

/// Inputs to [`predict`]; which fields are needed depends on the regime.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PredictionParams {
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub c: Option<f64>,
    pub r: Option<u64>,
    /// Moments `φ(x), φ(x²), ..` of the macroscopic input law `μ`.
    pub input_moments: Option<Vec<f64>>,
    /// Number of limit moments to tabulate (default 4).
    pub order: Option<usize>,
}

/// The matrix whose spectral law the prediction describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rescaling {
    /// `Z` itself.
    Identity,
    /// `n Z`.
    N,
    /// `c n Z = k Z`.
    CN,
    /// `r k Z`.
    RK(u64),
    /// `c² n² Z = k² Z`.
    C2N2,
    /// `μ̄ k n Z`, with `μ̄` the input mean.
    MeanKN(f64),
}

impl Rescaling {
    pub fn factor(self, n: u64, k: u64) -> f64 {
        let (n, k) = (n as f64, k as f64);
        match self {
            Self::Identity => 1.0,
            Self::N => n,
            Self::CN => k,
            Self::RK(r) => r as f64 * k,
            Self::C2N2 => k * k,
            Self::MeanKN(m) => m * k * n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convergence {
    AlmostSure,
    InProbability,
    /// Holds at every finite size along the limit, not only asymptotically.
    Deterministic,
}

/// `H ≈ log_coefficient · log n + constant` on one side of `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyExpansion {
    pub log_coefficient: f64,
    pub constant: f64,
    /// `true` for the `c ≥ 1` branch.
    pub c_at_least_one: bool,
}

impl EntropyExpansion {
    pub fn at(&self, n: u64) -> f64 {
        self.log_coefficient * (n as f64).ln() + self.constant
    }
}

/// Top eigenvalue behaviour separate from the bulk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outlier {
    pub rescaling: Rescaling,
    pub limit: f64,
    pub convergence: Convergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimePrediction {
    pub model: PredictionModel,
    pub regime: Regime,
    /// Law of the rescaled matrix (of the bulk, if there is an outlier).
    pub distribution: Option<LimitingDistribution>,
    pub rescaling: Rescaling,
    pub convergence: Convergence,
    /// `(eigenvalue, multiplicity)` of `Z`, summing to 1.
    pub eigenvalues: Option<Vec<(f64, u64)>>,
    pub outlier: Option<Outlier>,
    pub entropy: Option<EntropyExpansion>,
}

impl RegimePrediction {
    fn new(model: PredictionModel, regime: Regime, rescaling: Rescaling) -> Self {
        Self {
            model,
            regime,
            distribution: None,
            rescaling,
            convergence: Convergence::AlmostSure,
            eigenvalues: None,
            outlier: None,
            entropy: None,
        }
    }
}

fn need<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
    value.clone().ok_or_else(|| Error::Domain(format!("missing parameter {name}")))
}

fn need_c(params: &PredictionParams) -> Result<f64> {
    let c = need(&params.c, "c")?;
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    Ok(c)
}

fn flat(n: u64) -> Result<Vec<(f64, u64)>> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(vec![(1.0 / n as f64, n)])
}

/// `rank` equal eigenvalues `1/rank` and `n - rank` zeros (when `n` is
/// known).
fn flat_support(rank: u64, n: Option<u64>) -> Result<Vec<(f64, u64)>> {
    let mut list = vec![(1.0 / rank as f64, rank)];
    if let Some(n) = n {
        if n < rank {
            return Err(Error::Domain(format!("n = {n} is below the output rank {rank}")));
        }
        if n > rank {
            list.push((0.0, n - rank));
        }
    }
    Ok(list)
}

/// The limit object for `(model, regime)`.
pub fn predict(model: PredictionModel, regime: Regime, params: &PredictionParams) -> Result<RegimePrediction> {
    use PredictionModel::*;
    use Regime::*;
    let order = params.order.unwrap_or(4);
    let mut out;
    match (model, regime) {
        (SingleRankOne | SingleRankR | SingleMacroscopic, I) => {
            let n = need(&params.n, "n")?;
            out = RegimePrediction::new(model, regime, Rescaling::Identity);
            out.distribution = Some(LimitingDistribution::dirac(1.0 / n as f64, order));
            out.eigenvalues = Some(flat(n)?);
        }
        (SingleRankOne, II) => {
            let k = need(&params.k, "k")?;
            out = RegimePrediction::new(model, regime, Rescaling::CN);
            out.eigenvalues = Some(flat_support(k, params.n)?);
            out.convergence = Convergence::Deterministic;
        }
        (SingleRankR, II) => {
            let (k, r) = (need(&params.k, "k")?, need(&params.r, "r")?);
            out = RegimePrediction::new(model, regime, Rescaling::RK(r));
            out.eigenvalues = Some(flat_support(r * k, params.n)?);
        }
        (SingleRankOne, III) => {
            let c = need_c(params)?;
            out = RegimePrediction::new(model, regime, Rescaling::CN);
            out.distribution = Some(LimitingDistribution::free_poisson(c, order)?);
            out.entropy = Some(entropy_expansion(EntropyModel::Single, c));
        }
        (SingleRankR, III) => {
            let (c, r) = (need_c(params)?, need(&params.r, "r")?);
            out = RegimePrediction::new(model, regime, Rescaling::RK(r));
            out.distribution = Some(LimitingDistribution::free_poisson(r as f64 * c, order)?);
        }
        (SingleMacroscopic, II) => {
            let k = need(&params.k, "k")?;
            let mu = need(&params.input_moments, "input_moments")?;
            if mu.len() < order {
                return Err(Error::Domain(format!("need {order} input moments, got {}", mu.len())));
            }
            let mean = mu[0];
            let nu = boxplus_power(&dilate_mu_k(&mu[..order], k)?, &((k * k) as f64))?;
            out = RegimePrediction::new(model, regime, Rescaling::MeanKN(mean));
            out.distribution = Some(LimitingDistribution::moment_only(nu));
        }
        (SingleMacroscopic, III) => {
            out = RegimePrediction::new(model, regime, Rescaling::N);
            out.distribution = Some(LimitingDistribution::dirac(1.0, order));
        }
        (BiIndependent, III) => {
            let c = need_c(params)?;
            out = RegimePrediction::new(model, regime, Rescaling::C2N2);
            out.distribution = Some(LimitingDistribution::free_poisson(c * c, order)?);
            out.entropy = Some(entropy_expansion(EntropyModel::Bi, c));
        }
        (BiConjugate, III) => {
            let c = need_c(params)?;
            out = RegimePrediction::new(model, regime, Rescaling::C2N2);
            out.distribution = Some(LimitingDistribution::free_poisson(c * c, order)?);
            out.outlier = Some(Outlier { rescaling: Rescaling::CN, limit: 1.0, convergence: Convergence::InProbability });
            out.entropy = Some(entropy_expansion(EntropyModel::Bi, c));
        }
        (BellFixedK | BiConjugate, II) => {
            let k = need(&params.k, "k")?;
            let n = params.n.unwrap_or(k);
            out = RegimePrediction::new(model, regime, Rescaling::Identity);
            out.eigenvalues = Some(bell_eigenvalues(k, n)?.iter().map(|(v, m)| (ratio_to_f64(v), *m)).collect());
        }
        _ => return Err(Error::Unsupported(format!("no limit for {model:?} in regime {regime:?}"))),
    }
    Ok(out)
}

/// Limit spectrum of the conjugate bi-channel at fixed `k`:
/// `1/k + 1/k² - 1/k³` once, `1/k² - 1/k³` with multiplicity `k² - 1`, and
/// `n² - k²` zeros. Entries with multiplicity 0 are omitted.
pub fn bell_eigenvalues(k: u64, n: u64) -> Result<Vec<(Rational, u64)>> {
    if k == 0 || n < k {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let inv = Rational::new(1.into(), k.into());
    let inv2 = inv.clone() * inv.clone();
    let inv3 = inv2.clone() * inv.clone();
    let list = vec![
        (inv + inv2.clone() - inv3.clone(), 1),
        (inv2 - inv3, k * k - 1),
        (Rational::zero(), n * n - k * k),
    ];
    Ok(list.into_iter().filter(|(_, m)| *m > 0).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntropyModel {
    Single,
    Bi,
}

fn entropy_expansion(model: EntropyModel, c: f64) -> EntropyExpansion {
    let above = c >= 1.0;
    let (a, constant) = match (model, above) {
        (EntropyModel::Single, true) => (1.0, -1.0 / (2.0 * c)),
        (EntropyModel::Single, false) => (1.0, c.ln() - c / 2.0),
        (EntropyModel::Bi, true) => (2.0, -1.0 / (2.0 * c * c)),
        (EntropyModel::Bi, false) => (2.0, 2.0 * c.ln() - c * c / 2.0),
    };
    EntropyModel::check(model, c, a, constant);
    EntropyExpansion { log_coefficient: a, constant, c_at_least_one: above }
}

impl EntropyModel {
    /// In debug builds, compares with `H = a log(cn) - K_{c^a} / c^a`.
    fn check(model: EntropyModel, c: f64, a: f64, constant: f64) {
        let ca = match model {
            EntropyModel::Single => c,
            EntropyModel::Bi => c * c,
        };
        let via_k = a * c.ln() - mp_entropy_k(ca) / ca;
        debug_assert!((via_k - constant).abs() < 1e-12, "{via_k} vs {constant}");
    }
}

/// Leading entropy of the output in regime `III` at dimension `n`.
pub fn entropy_asymptotic(model: EntropyModel, c: f64, n: u64) -> Result<f64> {
    if c <= 0.0 || !c.is_finite() {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    Ok(entropy_expansion(model, c).at(n))
}

fn page_domain(n: u64, k: u64) -> Result<()> {
    if n == 0 || n > k {
        return Err(Error::Domain(format!("need 1 <= n <= k, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Mean entropy of the reduced state of a uniform pure state on
/// `C^n ⊗ C^k`, `n ≤ k`: `Σ_{j=k+1}^{nk} 1/j - (n-1)/(2k)`, exactly.
pub fn page_mean_entropy(n: u64, k: u64) -> Result<Rational> {
    page_domain(n, k)?;
    let mut sum = Rational::zero();
    for j in k + 1..=n * k {
        sum += Rational::new(1.into(), j.into());
    }
    Ok(sum - Rational::new((n - 1).into(), (2 * k).into()))
}

/// [`page_mean_entropy`] in floating point, for sizes where the rational
/// harmonic sum is too large.
pub fn page_mean_entropy_f64(n: u64, k: u64) -> Result<f64> {
    page_domain(n, k)?;
    let terms: Vec<f64> = (k + 1..=n * k).map(|j| 1.0 / j as f64).collect();
    Ok(crate::numeric::pairwise_sum(&terms) - (n - 1) as f64 / (2 * k) as f64)
}

/// `Σ multiplicity · value` of an eigenvalue list.
pub fn total_weight(list: &[(Rational, u64)]) -> Rational {
    list.iter().fold(Rational::zero(), |acc, (v, m)| acc + v.clone() * Rational::from_integer((*m).into()))
}
