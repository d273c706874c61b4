//! Free Poisson law, moment/free-cumulant transforms and the measure
//! operations `μ ↦ μ_(k)` and `μ ↦ μ^{⊞t}`.
//!
//! Distributions are carried by their moment sequences `m_1, m_2, ..`
//! (the zeroth moment is implicitly 1).

pub mod quadrature;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symgroup::{enumerate_geodesics, gamma, Partition};

/// Transforms are tabulated up to this order.
pub const MAX_ORDER: usize = 10;

/// Block-size types of `NC(p)` with multiplicities, e.g. `p = 3` gives
/// `3 ↦ 1, 2+1 ↦ 3, 1+1+1 ↦ 1`.
pub fn nc_block_types(p: usize) -> Result<Arc<Vec<(Partition, u64)>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(Partition, u64)>>>>> = OnceLock::new();
    if p > MAX_ORDER {
        return Err(Error::Capacity { what: "non-crossing partition table", p, cap: MAX_ORDER });
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&p) {
        return Ok(hit.clone());
    }
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    if p == 0 {
        counts.insert(vec![], 1);
    } else {
        for a in enumerate_geodesics(&gamma(p)) {
            *counts.entry(a.cycle_type()).or_default() += 1;
        }
    }
    let mut table: Vec<(Partition, u64)> =
        counts.into_iter().map(|(t, c)| (Partition::new(t).expect("cycle type"), c)).collect();
    table.sort_by(|a, b| b.0.cmp(&a.0));
    let table = Arc::new(table);
    Ok(cache.lock().expect("cache lock").entry(p).or_insert(table).clone())
}

/// `Σ_{σ ∈ NC(p)} c^{#σ}`.
pub fn mp_moment<T: Scalar>(p: usize, c: &T) -> Result<T> {
    let table = nc_block_types(p)?;
    Ok(table
        .iter()
        .fold(T::zero(), |acc, (part, n)| acc + T::from_u64_lossy(*n) * c.powi(part.len() as i32)))
}

/// Moments from free cumulants: `m_p = Σ_{π ∈ NC(p)} ∏_{B ∈ π} κ_{|B|}`.
pub fn free_cumulants_to_moments<T: Scalar>(kappa: &[T]) -> Result<Vec<T>> {
    (1..=kappa.len())
        .map(|p| {
            let table = nc_block_types(p)?;
            Ok(table.iter().fold(T::zero(), |acc, (part, n)| {
                let prod = part.parts().iter().fold(T::one(), |acc, &b| acc * kappa[b - 1].clone());
                acc + T::from_u64_lossy(*n) * prod
            }))
        })
        .collect()
}

/// Inverse of [`free_cumulants_to_moments`], solved order by order: the
/// one-block partition is the only term containing `κ_p`.
pub fn moments_to_free_cumulants<T: Scalar>(moments: &[T]) -> Result<Vec<T>> {
    let mut kappa: Vec<T> = Vec::with_capacity(moments.len());
    for p in 1..=moments.len() {
        let table = nc_block_types(p)?;
        let rest = table.iter().filter(|(part, _)| part.len() > 1).fold(T::zero(), |acc, (part, n)| {
            let prod = part.parts().iter().fold(T::one(), |acc, &b| acc * kappa[b - 1].clone());
            acc + T::from_u64_lossy(*n) * prod
        });
        kappa.push(moments[p - 1].clone() - rest);
    }
    Ok(kappa)
}

/// Moments of `μ_(k) = (1 - 1/k) δ_0 + (1/k) μ`.
pub fn dilate_mu_k<T: Scalar>(moments: &[T], k: u64) -> Result<Vec<T>> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let kk = T::from_u64_lossy(k);
    Ok(moments.iter().map(|m| m.clone() / kk.clone()).collect())
}

/// Moments of `μ^{⊞t}`: free cumulants scale by `t`.
pub fn boxplus_power<T: Scalar>(moments: &[T], t: &T) -> Result<Vec<T>> {
    if *t < T::one() {
        return Err(Error::Domain(format!("free convolution power {t:?} < 1 is not supported")));
    }
    let kappa: Vec<T> = moments_to_free_cumulants(moments)?.into_iter().map(|x| x * t.clone()).collect();
    free_cumulants_to_moments(&kappa)
}

/// Support `[(1-√c)², (1+√c)²]` of the absolutely continuous part.
pub fn mp_support(c: f64) -> (f64, f64) {
    let s = c.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

/// Atom of the free Poisson law at 0.
pub fn mp_atom(c: f64) -> f64 {
    (1.0 - c).max(0.0)
}

/// Density `√(4c - (x-1-c)²) / (2πx)` on the support, 0 elsewhere.
pub fn mp_density(x: f64, c: f64) -> f64 {
    let disc = 4.0 * c - (x - 1.0 - c).powi(2);
    if disc <= 0.0 || x <= 0.0 {
        0.0
    } else {
        disc.sqrt() / (2.0 * std::f64::consts::PI * x)
    }
}

/// `∫ g dπ_c` over the continuous part, to absolute tolerance `tol`.
pub fn mp_integrate(g: impl Fn(f64) -> f64, c: f64, tol: f64) -> f64 {
    let (a, b) = mp_support(c);
    quadrature::integrate_edges(|x| g(x) * mp_density(x, c), a, b, tol)
}

/// `K_c = ∫ x log x dπ_c(x)`: `1/2 + c log c` for `c ≥ 1`, `c²/2` below.
pub fn mp_entropy_k(c: f64) -> f64 {
    if c >= 1.0 {
        0.5 + c * c.ln()
    } else {
        c * c / 2.0
    }
}

/// `K_c` by quadrature, as an independent check of [`mp_entropy_k`].
pub fn mp_entropy_k_quadrature(c: f64) -> f64 {
    mp_integrate(|x| x * x.ln(), c, 1e-11)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DistributionKind {
    FreePoisson(f64),
    Dirac(f64),
    /// `(weight, location)` pairs.
    Atomic(Vec<(f64, f64)>),
    MomentOnly,
}

/// A limit law with its first few moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitingDistribution {
    pub kind: DistributionKind,
    pub moments: Vec<f64>,
}

impl LimitingDistribution {
    pub fn free_poisson(c: f64, order: usize) -> Result<Self> {
        let moments = (1..=order).map(|p| mp_moment(p, &c)).collect::<Result<_>>()?;
        Ok(Self { kind: DistributionKind::FreePoisson(c), moments })
    }

    pub fn dirac(x: f64, order: usize) -> Self {
        Self { kind: DistributionKind::Dirac(x), moments: (1..=order).map(|p| x.powi(p as i32)).collect() }
    }

    pub fn atomic(atoms: Vec<(f64, f64)>, order: usize) -> Result<Self> {
        let total: f64 = atoms.iter().map(|a| a.0).sum();
        if (total - 1.0).abs() > 1e-12 || atoms.iter().any(|a| a.0 < 0.0) {
            return Err(Error::Domain(format!("atom weights must be nonnegative and sum to 1, got {total}")));
        }
        let moments = (1..=order).map(|p| atoms.iter().map(|(w, x)| w * x.powi(p as i32)).sum()).collect();
        Ok(Self { kind: DistributionKind::Atomic(atoms), moments })
    }

    pub fn moment_only(moments: Vec<f64>) -> Self {
        Self { kind: DistributionKind::MomentOnly, moments }
    }
}
