//! Exact finite-dimensional moments `E[tr Z^p]` of channel outputs.
//!
//! All sums are evaluated at concrete integer dimensions. With
//! [`Rational`] as the scalar the results are exact; `f64` gives the same
//! sums in floating point.
//!
//! Enumeration sizes grow factorially, so every entry point checks `p`
//! against [`Limits`]. Rough single-core costs at the default caps:
//! Wishart and rank-one sums at `p = 8` enumerate `8! = 40320` terms
//! (well under a second), the independent bi-channel at `p = 5` needs
//! `2 · (5!)^2` compositions, and the conjugate and `QZQ` sums walk `S_{2p}`
//! once (`8! · 2^4` compositions at `p = 4`) after the class algebra of
//! `S_{2p}` is built.

mod bichannel;
mod single;
pub mod tables;
mod wishart;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symgroup::{ClassAlgebra, ClassFunction, Permutation};
use crate::Rational;

pub use bichannel::vertical_pairing_index;

/// Caps on the order `p` accepted by each family of sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Sums over `S_p`: Wishart, rank-one, general input.
    pub single: usize,
    /// Sums over `S_p^4`: independent bi-channel.
    pub quadruple: usize,
    /// Sums over `S_{2p}^2`: conjugate bi-channel.
    pub doubled: usize,
    /// Conjugate sums additionally weighted over `2^p` choice functions.
    pub qzq: usize,
    /// Order of Weingarten tables.
    pub weingarten: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { single: 8, quadruple: 5, doubled: 4, qzq: 3, weingarten: crate::weingarten::WG_MAX_P }
    }
}

impl Limits {
    fn check(&self, what: &'static str, p: usize, cap: usize) -> Result<()> {
        if p == 0 {
            return Err(Error::Domain("moment order must be at least 1".into()));
        }
        if p > cap {
            return Err(Error::Capacity { what, p, cap });
        }
        Ok(())
    }
}

/// Where a trace functional came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TraceKind {
    RankOne,
    RankR(u64),
    /// Input `X/tr X` with `tr X^j = n m_j`.
    Macroscopic { n: u64, moments: Vec<f64> },
    Custom,
}

/// `β ↦ trace_β(X) = ∏_{cycles c of β} tr(X^{|c|})` for a fixed input `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFunctional<T> {
    kind: TraceKind,
    values: ClassFunction<T>,
}

impl<T: Scalar> TraceFunctional<T> {
    /// Pure input: every `tr X^j = 1`.
    pub fn rank_one(p: usize) -> Result<Self> {
        let alg = ClassAlgebra::get(p)?;
        Ok(Self { kind: TraceKind::RankOne, values: ClassFunction::from_fn(alg, |_| T::one()) })
    }

    /// Normalized projector of rank `r`: `trace_β = r^{-|β|}`.
    pub fn rank_r(p: usize, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain("rank must be positive".into()));
        }
        let alg = ClassAlgebra::get(p)?;
        let rr = T::from_u64_lossy(r);
        let values = ClassFunction::from_fn(alg, |part| rr.powi(part.len() as i32 - p as i32));
        Ok(Self { kind: TraceKind::RankR(r), values })
    }

    /// Input `X/tr X` on `C^n` where `tr X^j = n m_j` and `moments[j-1] = m_j`.
    pub fn macroscopic(p: usize, n: u64, moments: &[T]) -> Result<Self> {
        if moments.len() < p {
            return Err(Error::SizeMismatch { left: moments.len(), right: p });
        }
        if moments[0].is_zero() {
            return Err(Error::Domain("first moment must be nonzero".into()));
        }
        let alg = ClassAlgebra::get(p)?;
        let nn = T::from_u64_lossy(n);
        let norm = (nn.clone() * moments[0].clone()).powi(-(p as i32));
        let values = ClassFunction::from_fn(alg, |part| {
            part.parts().iter().fold(norm.clone(), |acc, &len| acc * nn.clone() * moments[len - 1].clone())
        });
        let kind = TraceKind::Macroscopic { n, moments: moments.iter().map(Scalar::to_f64_lossy).collect() };
        Ok(Self { kind, values })
    }

    pub fn custom(values: ClassFunction<T>) -> Self {
        Self { kind: TraceKind::Custom, values }
    }

    pub fn p(&self) -> usize {
        self.values.p()
    }

    pub fn kind(&self) -> &TraceKind {
        &self.kind
    }

    pub fn values(&self) -> &ClassFunction<T> {
        &self.values
    }

    pub fn eval(&self, beta: &Permutation) -> Result<&T> {
        self.values.eval(beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Model {
    Wishart,
    SingleRankOne,
    SingleRankR(u64),
    SingleMacroscopic,
    BiIndependent,
    BiConjugate,
    Qzq,
}

/// How the stored moments relate to `E[tr Z^p]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scaling {
    Raw,
    /// Moment `p` multiplied by `factor^p`.
    Power(f64),
}

/// `m_1, .., m_P` of one model at fixed dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence<T> {
    pub model: Model,
    pub n: u64,
    pub k: u64,
    pub scaling: Scaling,
    pub moments: Vec<T>,
}

impl<T: Scalar> MomentSequence<T> {
    /// Multiplies moment `p` by `factor^p`.
    pub fn rescaled(&self, factor: f64) -> MomentSequence<f64> {
        let base = match self.scaling {
            Scaling::Raw => 1.0,
            Scaling::Power(f) => f,
        };
        MomentSequence {
            model: self.model,
            n: self.n,
            k: self.k,
            scaling: Scaling::Power(base * factor),
            moments: self
                .moments
                .iter()
                .enumerate()
                .map(|(i, m)| m.to_f64_lossy() * factor.powi(i as i32 + 1))
                .collect(),
        }
    }
}

/// Entry point holding the enumeration caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MomentEngine {
    pub limits: Limits,
}

impl MomentEngine {
    pub fn new(limits: Limits) -> Self {
        Self { limits }
    }

    /// Moments `p = 1..=max_p` of a channel model (not `Wishart`).
    pub fn sequence<T: Scalar>(&self, model: Model, max_p: usize, n: u64, k: u64) -> Result<MomentSequence<T>> {
        let moments = (1..=max_p)
            .map(|p| match model {
                Model::SingleRankOne => self.rank_one_output_moment(p, n, k),
                Model::SingleRankR(r) => self.rank_r_moment(p, n, k, r),
                Model::BiIndependent => self.bi_channel_independent_moment(p, n, k),
                Model::BiConjugate => self.bi_channel_conjugate_moment(p, n, k),
                Model::Qzq => self.qzq_moment(p, n, k),
                Model::Wishart | Model::SingleMacroscopic => {
                    Err(Error::Unsupported(format!("{model:?} needs extra inputs")))
                }
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(MomentSequence { model, n, k, scaling: Scaling::Raw, moments })
    }
}

fn check_dims(n: u64, k: u64) -> Result<()> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("dimensions must be positive".into()));
    }
    Ok(())
}

macro_rules! exact_wrappers {
    ($($(#[$doc:meta])* $name:ident($($arg:ident: $ty:ty),*);)*) => {$(
        $(#[$doc])*
        pub fn $name($($arg: $ty),*) -> Result<Rational> {
            MomentEngine::default().$name::<Rational>($($arg),*)
        }
    )*};
}

exact_wrappers! {
    /// Exact `E tr Z^p` for a pure input, via the Wishart route.
    rank_one_output_moment(p: usize, n: u64, k: u64);
    /// Exact `E tr Z^p` for a normalized rank-`r` projector input.
    rank_r_moment(p: usize, n: u64, k: u64, r: u64);
    /// Exact `E tr Z^p` for `Z = (Φ_U ⊗ Φ_V)(E_n)` with independent `U`, `V`.
    bi_channel_independent_moment(p: usize, n: u64, k: u64);
    /// Exact `E tr Z^p` for `Z = (Φ_U ⊗ Φ_Ū)(E_n)`.
    bi_channel_conjugate_moment(p: usize, n: u64, k: u64);
    /// Exact `E tr (QZQ)^p` with `Q = I - E_n` and `Z` the conjugate output.
    qzq_moment(p: usize, n: u64, k: u64);
}

pub fn general_input_moment(p: usize, n: u64, k: u64, tf: &TraceFunctional<Rational>) -> Result<Rational> {
    MomentEngine::default().general_input_moment(p, n, k, tf)
}

pub fn wishart_moment(sigma: &Permutation, t: &[usize], n: u64, ks: &[u64]) -> Result<num_bigint::BigInt> {
    MomentEngine::default().wishart_moment(sigma, t, n, ks)
}

pub fn vertical_cancellation_sum(p: usize, n: u64, alpha: &Permutation) -> Result<Rational> {
    MomentEngine::default().vertical_cancellation_sum(p, n, alpha)
}

pub fn bi_channel_asymmetric_limit_moment(p: usize, c: f64, d: f64) -> Result<f64> {
    MomentEngine::default().bi_channel_asymmetric_limit_moment(p, c, d)
}
