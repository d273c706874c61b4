//! Unitary Weingarten function.
//!
//! `Wg(n, ·)` is the convolution inverse on `S_p` of `σ ↦ n^{#σ}`. It is a
//! class function, so the defining identity
//! `Σ_τ n^{#(στ⁻¹)} Wg(n, τ) = [σ = id]` reduces to a linear system with one
//! unknown per partition of `p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::solve;
use crate::scalar::Scalar;
use crate::symgroup::{catalan, ClassAlgebra, ClassFunction, Permutation};
use crate::Rational;

/// Default cap on `p` for Weingarten tables.
pub const WG_MAX_P: usize = 10;

/// `Wg(n, ·)` on `S_p` over any scalar field.
pub fn weingarten<T: Scalar>(n: u64, p: usize) -> Result<ClassFunction<T>> {
    weingarten_capped(n, p, WG_MAX_P)
}

pub(crate) fn weingarten_capped<T: Scalar>(n: u64, p: usize, cap: usize) -> Result<ClassFunction<T>> {
    if p > cap {
        return Err(Error::Capacity { what: "Weingarten table", p, cap });
    }
    if (n as usize) < p || n == 0 {
        return Err(Error::Singular { n, p });
    }
    let alg = ClassAlgebra::get(p)?;
    let c = alg.class_count();
    let powers = alg.power_of_cycles(&T::from_u64_lossy(n));
    // M[l][mu] = Σ_{τ ∈ C_mu} n^{#(σ_l τ⁻¹)}
    let gram: Vec<Vec<T>> = (0..c)
        .map(|l| {
            (0..c)
                .map(|mu| {
                    (0..c).fold(T::zero(), |acc, nu| match alg.structure(l, mu, nu) {
                        0 => acc,
                        cnt => acc + T::from_u64_lossy(cnt) * powers[nu].clone(),
                    })
                })
                .collect()
        })
        .collect();
    let mut rhs = vec![T::zero(); c];
    rhs[alg.identity_class()] = T::one();
    let values = solve(gram, rhs)?;
    ClassFunction::new(alg, values)
}

/// Exact `Wg(n, ·)` on `S_p`, memoized per `(n, p)`.
pub fn wg_exact(n: u64, p: usize) -> Result<Arc<ClassFunction<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<ClassFunction<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(n, p)) {
        return Ok(hit.clone());
    }
    let built = Arc::new(weingarten::<Rational>(n, p)?);
    Ok(cache.lock().expect("cache lock").entry((n, p)).or_insert(built).clone())
}

/// Exact `Wg(n, σ)` for a single permutation.
pub fn wg_value(n: u64, s: &Permutation) -> Result<Rational> {
    Ok(wg_exact(n, s.size())?.eval(s)?.clone())
}

/// `Wg(n, (1..d)) = (-1)^{d-1} c_{d-1} ∏_{j=-d+1}^{d-1} (n-j)^{-1}`.
pub fn wg_cycle_closed_form(n: u64, d: usize) -> Result<Rational> {
    if d == 0 {
        return Err(Error::Domain("cycle length must be positive".into()));
    }
    if (n as usize) < d {
        return Err(Error::Pole { n, d });
    }
    let n = BigInt::from(n);
    let mut denom = BigInt::one();
    for j in -(d as i64 - 1)..=(d as i64 - 1) {
        denom *= &n - BigInt::from(j);
    }
    let sign = if d % 2 == 1 { 1 } else { -1 };
    Ok(Rational::new(BigInt::from(sign) * BigInt::from(catalan(d - 1)), denom))
}

/// Multiplicative Möbius weight: `∏_cycles (-1)^{d-1} c_{d-1}`.
pub fn mobius(s: &Permutation) -> BigInt {
    s.cycle_type()
        .into_iter()
        .map(|d| {
            let c = BigInt::from(catalan(d - 1));
            if d % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .product()
}

/// Leading term `n^{-(p + |σ|)} Mob(σ)` of the large-`n` expansion.
pub fn wg_asymptotic(n: u64, s: &Permutation) -> f64 {
    let exp = (s.size() + s.length()) as i32;
    Rational::from_integer(mobius(s)).to_f64_lossy() * (n as f64).powi(-exp)
}

/// `Σ_τ n^{#(στ⁻¹)} Wg(n, τ) - [σ = id]` for one `σ`, by direct enumeration
/// of `S_p`. Zero exactly when the class-level solve is right.
pub fn convolution_identity_residual(n: u64, s: &Permutation) -> Result<Rational> {
    let wg = wg_exact(n, s.size())?;
    let nn = Rational::from_integer(BigInt::from(n));
    let mut acc = Rational::zero();
    for tau in crate::symgroup::SymmetricGroup::new(s.size()) {
        let cyc = s.compose(&tau.inverse())?.cycle_count();
        acc += num_traits::pow(nn.clone(), cyc) * wg.eval(&tau)?;
    }
    if s.is_identity() {
        acc -= Rational::one();
    }
    Ok(acc)
}
