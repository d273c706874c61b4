use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symgroup::{Permutation, SymmetricGroup};

/// `E[trace_{σ,t}(W_1, .., W_s)] = Σ_{α: t∘α = t} ∏_j k_j^{#α_j} n^{#(σ⁻¹α)}`
/// for independent unit-covariance Wishart matrices `W_j = G_j G_j*`, with
/// `G_j` of size `n × k_j`.
///
/// `t[i]` is the 0-based index of the matrix sitting at position `i`.
pub fn wishart_moment_capped(sigma: &Permutation, t: &[usize], n: u64, ks: &[u64], cap: usize) -> Result<BigInt> {
    let p = sigma.size();
    if p > cap {
        return Err(Error::Capacity { what: "Wishart moment", p, cap });
    }
    if t.len() != p {
        return Err(Error::SizeMismatch { left: t.len(), right: p });
    }
    if let Some(&bad) = t.iter().find(|&&j| j >= ks.len()) {
        return Err(Error::Domain(format!("colour {bad} has no matching k (only {} given)", ks.len())));
    }
    let sigma_inv = sigma.inverse();
    let n = BigInt::from(n);
    let mut total = BigInt::zero();
    for alpha in SymmetricGroup::new(p) {
        if (0..p).any(|i| t[alpha.apply(i)] != t[i]) {
            continue;
        }
        let mut term = BigInt::one();
        for cycle in alpha.cycles() {
            term *= ks[t[cycle[0]]];
        }
        let genus = sigma_inv.compose(&alpha)?.cycle_count();
        total += term * num_traits::pow(n.clone(), genus);
    }
    Ok(total)
}
