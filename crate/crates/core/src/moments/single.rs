use num_bigint::BigInt;

use super::tables::single_table;
use super::wishart::wishart_moment_capped;
use super::{check_dims, MomentEngine, TraceFunctional};
use crate::error::{Error, Result};
use crate::scalar::{int_pow, Scalar};
use crate::symgroup::{gamma, Permutation};
use crate::weingarten::weingarten_capped;

impl MomentEngine {
    pub fn wishart_moment(&self, sigma: &Permutation, t: &[usize], n: u64, ks: &[u64]) -> Result<BigInt> {
        wishart_moment_capped(sigma, t, n, ks, self.limits.single)
    }

    /// `E tr Z^p = Σ_α k^{#α} n^{#(γ⁻¹α)} / ∏_{j<p} (nk + j)`.
    ///
    /// The numerator is the Wishart moment `E tr W^p` with `W` of shape
    /// `n × k`; the denominator is `E (tr W)^p`.
    pub fn rank_one_output_moment<T: Scalar>(&self, p: usize, n: u64, k: u64) -> Result<T> {
        self.limits.check("rank-one moment", p, self.limits.single)?;
        check_dims(n, k)?;
        let num = self.wishart_moment(&gamma(p), &vec![0; p], n, &[k])?;
        let den: BigInt = (0..p as u64).map(|j| BigInt::from(n * k + j)).product();
        Ok(T::from_bigint(&num) / T::from_bigint(&den))
    }

    /// `E tr Z^p = Σ_{α,β ∈ S_p} k^{#α} n^{#(γ⁻¹α)} trace_β(X) Wg_{nk}(αβ⁻¹)`.
    ///
    /// The `β` sum is the class convolution `(Wg * trace)(α)`, so only one
    /// pass over `S_p` (tabulated) is needed.
    pub fn general_input_moment<T: Scalar>(&self, p: usize, n: u64, k: u64, tf: &TraceFunctional<T>) -> Result<T> {
        self.limits.check("general-input moment", p, self.limits.single)?;
        check_dims(n, k)?;
        if tf.p() != p {
            return Err(Error::SizeMismatch { left: tf.p(), right: p });
        }
        let wg = weingarten_capped::<T>(n * k, p, self.limits.weingarten)?;
        let conv = wg.convolve(tf.values())?;
        let table = single_table(p)?;
        let kp: Vec<T> = (0..=p).map(|a| int_pow(k, a as u32)).collect();
        let np: Vec<T> = (0..=p).map(|b| int_pow(n, b as u32)).collect();
        Ok(table.iter().fold(T::zero(), |acc, e| {
            acc + T::from_u64_lossy(e.count) * kp[e.a].clone() * np[e.b].clone() * conv.by_class(e.class).clone()
        }))
    }

    pub fn rank_r_moment<T: Scalar>(&self, p: usize, n: u64, k: u64, r: u64) -> Result<T> {
        if r > n {
            return Err(Error::Domain(format!("rank {r} exceeds input dimension {n}")));
        }
        self.limits.check("rank-r moment", p, self.limits.single)?;
        self.general_input_moment(p, n, k, &TraceFunctional::rank_r(p, r)?)
    }
}
