//! Product channels applied to the Bell state `E_n`.
//!
//! For the conjugate pair the double sum
//! `Σ_{α,β ∈ S_{2p}} k^{#α} n^{#(αγ⁻¹)+#(βδ)-p} Wg(αβ⁻¹)` collapses to one
//! pass over `α`: writing `ρ = βδ`, the inner sum
//! `Σ_ρ n^{#ρ} Wg((αδ)ρ⁻¹)` is a class function of `αδ`, namely the class
//! convolution of `n^{#·}` with `Wg`.

use super::tables::{choice_table, conjugate_table};
use super::{check_dims, MomentEngine};
use crate::error::{Error, Result};
use crate::scalar::{int_pow, Scalar};
use crate::symgroup::{enumerate_geodesics, f_hat, gamma, is_vertical, ChoiceFunction, Permutation, SymmetricGroup};
use crate::weingarten::weingarten_capped;

impl MomentEngine {
    /// `n^{-p} Σ_{β_U,β_V} n^{#(β_U⁻¹β_V)} A(β_U) A(β_V)` with
    /// `A(β) = Σ_α k^{#α} n^{#(γ⁻¹α)} Wg_{nk}(αβ⁻¹)`.
    pub fn bi_channel_independent_moment<T: Scalar>(&self, p: usize, n: u64, k: u64) -> Result<T> {
        self.limits.check("independent bi-channel moment", p, self.limits.quadruple)?;
        check_dims(n, k)?;
        let wg = weingarten_capped::<T>(n * k, p, self.limits.weingarten)?;
        let alg = wg.algebra().clone();
        let perms: Vec<Permutation> = SymmetricGroup::new(p).collect();
        let g_inv = gamma(p).inverse();
        let kp: Vec<T> = (0..=p).map(|a| int_pow(k, a as u32)).collect();
        let np: Vec<T> = (0..=p).map(|b| int_pow(n, b as u32)).collect();
        let weight: Vec<T> = perms
            .iter()
            .map(|a| kp[a.cycle_count()].clone() * np[g_inv.compose(a).expect("same size").cycle_count()].clone())
            .collect();
        let mut scratch = vec![0usize; p];
        let a_of: Vec<T> = perms
            .iter()
            .map(|b| {
                let b_inv = b.inverse();
                perms.iter().zip(&weight).fold(T::zero(), |acc, (a, w)| {
                    for (i, s) in scratch.iter_mut().enumerate() {
                        *s = a.apply(b_inv.apply(i));
                    }
                    acc + w.clone() * wg.by_class(alg.class_of_slice(&scratch)).clone()
                })
            })
            .collect();
        let mut total = T::zero();
        for (bu, au) in perms.iter().zip(&a_of) {
            let bu_inv = bu.inverse();
            let mut inner = T::zero();
            for (bv, av) in perms.iter().zip(&a_of) {
                inner = inner + np[bu_inv.compose(bv).expect("same size").cycle_count()].clone() * av.clone();
            }
            total = total + au.clone() * inner;
        }
        Ok(total * T::from_u64_lossy(n).powi(-(p as i32)))
    }

    /// `Σ_{α_U, α_V ∈ NC(p)} c^{#α_U + #α_V} d^{-|α_U⁻¹ α_V|}`, the limit
    /// moments of `c² n² Z` when the two channels share an input of fixed
    /// dimension `d`.
    pub fn bi_channel_asymmetric_limit_moment(&self, p: usize, c: f64, d: f64) -> Result<f64> {
        self.limits.check("asymmetric bi-channel limit", p, self.limits.single)?;
        if !(c > 0.0) || !(d >= 1.0) {
            return Err(Error::Domain(format!("need c > 0 and d >= 1, got c={c}, d={d}")));
        }
        let g = gamma(p);
        let geo: Vec<Permutation> = enumerate_geodesics(&g).collect();
        let mut total = 0.0;
        for au in &geo {
            let au_inv = au.inverse();
            for av in &geo {
                let dist = au_inv.compose(av)?.length() as i32;
                total += c.powi((au.cycle_count() + av.cycle_count()) as i32) * d.powi(-dist);
            }
        }
        Ok(total)
    }

    /// `Σ_{α,β ∈ S_{2p}} k^{#α} n^{#(αγ⁻¹)+#(βδ)-p} Wg_{nk}(αβ⁻¹)` with
    /// `γ = γᵀ⊕γᴮ`.
    pub fn bi_channel_conjugate_moment<T: Scalar>(&self, p: usize, n: u64, k: u64) -> Result<T> {
        self.limits.check("conjugate bi-channel moment", p, self.limits.doubled)?;
        check_dims(n, k)?;
        let h = self.conjugate_kernel::<T>(p, n, k)?;
        let table = conjugate_table(p)?;
        let kp: Vec<T> = (0..=2 * p).map(|a| int_pow(k, a as u32)).collect();
        let np: Vec<T> = (0..=2 * p).map(|b| int_pow(n, b as u32)).collect();
        let total = table.iter().fold(T::zero(), |acc, e| {
            acc + T::from_u64_lossy(e.count) * kp[e.a].clone() * np[e.b].clone() * h[e.class].clone()
        });
        Ok(total * T::from_u64_lossy(n).powi(-(p as i32)))
    }

    /// `E tr (QZQ)^p = Σ_f (-1)^{|f⁻¹(E)|} n^{-|f⁻¹(E)|} tr_f`, where `tr_f`
    /// is the conjugate sum with `f̂` in place of `γᵀ⊕γᴮ`.
    pub fn qzq_moment<T: Scalar>(&self, p: usize, n: u64, k: u64) -> Result<T> {
        self.limits.check("QZQ moment", p, self.limits.qzq)?;
        check_dims(n, k)?;
        let h = self.conjugate_kernel::<T>(p, n, k)?;
        let table = choice_table(p)?;
        let nn = T::from_u64_lossy(n);
        let kp: Vec<T> = (0..=2 * p).map(|a| int_pow(k, a as u32)).collect();
        // Weight of choice f at cycle count c: (-1)^{|E|} n^{c - |E| - p}.
        let signs: Vec<(bool, i32)> = ChoiceFunction::all(p)
            .map(|f| (f.bell_count() % 2 == 1, -(f.bell_count() as i32) - p as i32))
            .collect();
        let mut total = T::zero();
        for e in table.iter() {
            let mut s = T::zero();
            for (&c, &(neg, shift)) in e.cycles_per_choice.iter().zip(&signs) {
                let term = nn.powi(c as i32 + shift);
                s = if neg { s - term } else { s + term };
            }
            if !s.is_zero() {
                total = total + T::from_u64_lossy(e.count) * kp[e.a].clone() * h[e.class].clone() * s;
            }
        }
        Ok(total)
    }

    /// `Σ_f (-1)^{|f⁻¹(E)|} n^{-(|f⁻¹(E)| + |α f̂⁻¹|)}`.
    pub fn vertical_cancellation_sum<T: Scalar>(&self, p: usize, n: u64, alpha: &Permutation) -> Result<T> {
        if alpha.size() != 2 * p {
            return Err(Error::SizeMismatch { left: alpha.size(), right: 2 * p });
        }
        if p > 16 {
            return Err(Error::Capacity { what: "vertical cancellation sum", p, cap: 16 });
        }
        let nn = T::from_u64_lossy(n);
        let mut total = T::zero();
        for f in ChoiceFunction::all(p) {
            let e = f.bell_count();
            let len = alpha.compose(&f_hat(&f).inverse())?.length();
            let term = nn.powi(-((e + len) as i32));
            total = if e % 2 == 1 { total - term } else { total + term };
        }
        Ok(total)
    }

    /// `H(λ) = Σ_ρ n^{#ρ} Wg_{nk}(σ_λ ρ⁻¹)` on the classes of `S_{2p}`.
    fn conjugate_kernel<T: Scalar>(&self, p: usize, n: u64, k: u64) -> Result<Vec<T>> {
        let wg = weingarten_capped::<T>(n * k, 2 * p, self.limits.weingarten)?;
        let alg = wg.algebra();
        Ok(alg.convolve(&alg.power_of_cycles(&T::from_u64_lossy(n)), wg.values()))
    }
}

/// For a vertical `α`, a position `j` such that flipping `f(j)` changes
/// `|f⁻¹(E)|` and `|α f̂⁻¹|` by opposite units, for every `f`.
///
/// If `α(jᵀ) = jᴮ` this is `j`; if `α(iᴮ) = iᵀ` it is `i + 1 (mod p)`.
pub fn vertical_pairing_index(alpha: &Permutation, p: usize) -> Result<Option<usize>> {
    if !is_vertical(alpha, p)? {
        return Ok(None);
    }
    for i in 0..p {
        if alpha.apply(i) == i + p {
            return Ok(Some(i + 1));
        }
        if alpha.apply(i + p) == i {
            return Ok(Some((i + 1) % p + 1));
        }
    }
    unreachable!("vertical permutations have a vertical point")
}

#[cfg(test)]
mod tests {
    use num_traits::{One, Zero};

    use super::*;
    use crate::moments::{
        bi_channel_asymmetric_limit_moment, bi_channel_conjugate_moment, bi_channel_independent_moment, qzq_moment,
        vertical_cancellation_sum,
    };
    use crate::symgroup::{delta, gamma_tb};
    use crate::weingarten::{weingarten, wg_exact};
    use crate::Rational;

    /// Literal `S_{2p} × S_{2p}` sum with target `t` in place of `γᵀ⊕γᴮ`.
    fn brute_conjugate<T: Scalar>(p: usize, n: u64, k: u64, target: &Permutation) -> T {
        let wg = weingarten::<T>(n * k, 2 * p).unwrap();
        let t_inv = target.inverse();
        let d = delta(p);
        let perms: Vec<Permutation> = SymmetricGroup::new(2 * p).collect();
        let nn = T::from_u64_lossy(n);
        let kk = T::from_u64_lossy(k);
        let mut acc = T::zero();
        for a in &perms {
            let wa = kk.powi(a.cycle_count() as i32) * nn.powi(a.compose(&t_inv).unwrap().cycle_count() as i32 - p as i32);
            for b in &perms {
                let w = nn.powi(b.compose(&d).unwrap().cycle_count() as i32);
                acc = acc + wa.clone() * w * wg.eval(&a.compose(&b.inverse()).unwrap()).unwrap().clone();
            }
        }
        acc
    }

    /// Literal quadruple sum for the independent pair.
    fn brute_independent(p: usize, n: u64, k: u64) -> Rational {
        let wg = wg_exact(n * k, p).unwrap();
        let perms: Vec<Permutation> = SymmetricGroup::new(p).collect();
        let g_inv = gamma(p).inverse();
        let nn = Rational::from_integer(n.into());
        let kk = Rational::from_integer(k.into());
        let mut acc = Rational::zero();
        for au in &perms {
            for bu in &perms {
                for av in &perms {
                    for bv in &perms {
                        let e_k = au.cycle_count() + av.cycle_count();
                        let e_n = g_inv.compose(au).unwrap().cycle_count()
                            + g_inv.compose(av).unwrap().cycle_count()
                            + bu.inverse().compose(bv).unwrap().cycle_count();
                        acc += kk.powi(e_k as i32)
                            * nn.powi(e_n as i32 - p as i32)
                            * wg.eval(&au.compose(&bu.inverse()).unwrap()).unwrap()
                            * wg.eval(&av.compose(&bv.inverse()).unwrap()).unwrap();
                    }
                }
            }
        }
        acc
    }

    #[test]
    fn trace_preservation() {
        for (n, k) in [(2u64, 2u64), (3, 2), (2, 5)] {
            assert_eq!(bi_channel_independent_moment(1, n, k).unwrap(), Rational::one());
            assert_eq!(bi_channel_conjugate_moment(1, n, k).unwrap(), Rational::one());
        }
    }

    #[test]
    fn conjugate_matches_double_sum() {
        for (n, k) in [(2u64, 2u64), (3, 2), (2, 3)] {
            let exact: Rational = brute_conjugate(2, n, k, &gamma_tb(2));
            assert_eq!(bi_channel_conjugate_moment(2, n, k).unwrap(), exact);
        }
        let fast: f64 = MomentEngine::default().bi_channel_conjugate_moment(3, 3, 2).unwrap();
        let slow: f64 = brute_conjugate(3, 3, 2, &gamma_tb(3));
        assert!((fast - slow).abs() < 1e-10 * slow.abs(), "{fast} vs {slow}");
    }

    #[test]
    fn qzq_matches_double_sum() {
        for p in 1..=2 {
            for (n, k) in [(2u64, 2u64), (3, 2)] {
                let mut expect = Rational::zero();
                let nn = Rational::from_integer(n.into());
                for f in ChoiceFunction::all(p) {
                    let e = f.bell_count() as i32;
                    let term: Rational = brute_conjugate(p, n, k, &f_hat(&f));
                    let w = nn.powi(-e) * term;
                    expect = if e % 2 == 1 { expect - w } else { expect + w };
                }
                assert_eq!(qzq_moment(p, n, k).unwrap(), expect);
            }
        }
    }

    #[test]
    fn independent_matches_quadruple_sum() {
        for p in 1..=3 {
            for (n, k) in [(2u64, 2u64), (3, 2), (1, 3)] {
                if n * k < p as u64 {
                    continue;
                }
                assert_eq!(bi_channel_independent_moment(p, n, k).unwrap(), brute_independent(p, n, k));
            }
        }
    }

    #[test]
    fn outputs_are_density_moments() {
        for (n, k) in [(3u64, 3u64), (2, 4), (4, 2)] {
            let mut prev = Rational::one();
            for p in 2..=3 {
                for m in [
                    bi_channel_independent_moment(p, n, k).unwrap(),
                    bi_channel_conjugate_moment(p, n, k).unwrap(),
                ] {
                    assert!(m > Rational::zero() && m < prev);
                }
                prev = bi_channel_conjugate_moment(p, n, k).unwrap();
            }
        }
    }

    #[test]
    fn cancellation_on_vertical_permutations() {
        for n in [3u64, 7] {
            for p in 1..=5 {
                assert!(vertical_cancellation_sum(p, n, &delta(p)).unwrap().is_zero());
            }
            for a in SymmetricGroup::new(6) {
                if is_vertical(&a, 3).unwrap() {
                    assert!(vertical_cancellation_sum(3, n, &a).unwrap().is_zero());
                }
            }
        }
        assert!(!vertical_cancellation_sum(2, 3, &gamma_tb(2)).unwrap().is_zero());
    }

    #[test]
    fn flip_involution_compensates() {
        for p in 1..=4 {
            for a in SymmetricGroup::new(2 * p) {
                let Some(j) = vertical_pairing_index(&a, p).unwrap() else { continue };
                for f in ChoiceFunction::all(p) {
                    let g = f.flipped(j);
                    let weight = |h: &ChoiceFunction| h.bell_count() + a.compose(&f_hat(h).inverse()).unwrap().length();
                    assert_eq!(weight(&f), weight(&g), "p={p} a={a} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_limits() {
        assert!((bi_channel_asymmetric_limit_moment(1, 0.7, 3.0).unwrap() - 0.49).abs() < 1e-14);
        let near: f64 = bi_channel_asymmetric_limit_moment(3, 1.0, 1e6).unwrap();
        assert!((near - 5.0).abs() < 1e-5 * 5.0);
        let c = 0.6f64;
        for p in 1..=4 {
            let single: f64 = enumerate_geodesics(&gamma(p)).map(|a| c.powi(a.cycle_count() as i32)).sum();
            let d1 = bi_channel_asymmetric_limit_moment(p, c, 1.0).unwrap();
            assert!((d1 - single * single).abs() < 1e-12);
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(bi_channel_conjugate_moment(5, 4, 4), Err(Error::Capacity { .. })));
        assert!(matches!(qzq_moment(4, 4, 4), Err(Error::Capacity { .. })));
        assert!(matches!(bi_channel_independent_moment(6, 4, 4), Err(Error::Capacity { .. })));
        assert!(matches!(bi_channel_conjugate_moment(2, 1, 3), Err(Error::Singular { .. })));
    }
}
